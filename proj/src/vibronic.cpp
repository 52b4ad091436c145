#include "polariton/vibronic.hpp"

#include "polariton/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace polariton {

void VibrationalMode::validate() const {
    if (!(frequency > 0.0) || !std::isfinite(frequency)) {
        throw std::invalid_argument("vibrational mode frequency must be positive");
    }
    if (!(huang_rhys >= 0.0) || !std::isfinite(huang_rhys)) {
        throw std::invalid_argument("Huang-Rhys factor must be non-negative");
    }
    if (n_max < 0) {
        throw std::invalid_argument("n_max must be non-negative");
    }
}

double VibrationalMode::excited_minimum() const { return std::sqrt(2.0 * huang_rhys); }

void MolecularModel::validate() const {
    if (!(electronic_gap > 0.0) || !std::isfinite(electronic_gap)) {
        throw std::invalid_argument("electronic gap must be positive");
    }
    for (const auto& mode : modes) mode.validate();
}

Eigen::MatrixXd displaced_overlaps(double huang_rhys, int n_max) {
    if (huang_rhys < 0.0 || n_max < 0) {
        throw std::invalid_argument("displaced_overlaps: invalid arguments");
    }
    // F(m, n) = <m| D(alpha) |n> with alpha = -sqrt(s); the excited states are
    // D(sqrt(s))|m>, so <phi_e_m|phi_g_n> = <m| D(-sqrt(s)) |n>.
    const int n = n_max + 1;
    const double alpha = -std::sqrt(huang_rhys);
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n, n);

    // Row 0: <0|D(alpha)|k> = exp(-alpha^2/2) (-alpha)^k / sqrt(k!)
    double term = std::exp(-0.5 * alpha * alpha);
    for (int k = 0; k < n; ++k) {
        if (k > 0) term *= -alpha / std::sqrt(static_cast<double>(k));
        f(0, k) = term;
    }
    // sqrt(m+1) F(m+1, k) = sqrt(k) F(m, k-1) + alpha F(m, k)
    for (int row = 0; row + 1 < n; ++row) {
        const double inv = 1.0 / std::sqrt(static_cast<double>(row + 1));
        for (int k = 0; k < n; ++k) {
            double acc = alpha * f(row, k);
            if (k > 0) acc += std::sqrt(static_cast<double>(k)) * f(row, k - 1);
            f(row + 1, k) = acc * inv;
        }
    }
    return f;
}

std::vector<double> oscillator_eigenfunctions(int n_max, double q) {
    std::vector<double> chi(static_cast<std::size_t>(std::max(n_max, 0) + 1));
    chi[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * q * q);
    if (n_max >= 1) chi[1] = std::sqrt(2.0) * q * chi[0];
    for (int k = 1; k < n_max; ++k) {
        chi[k + 1] = std::sqrt(2.0 / (k + 1)) * q * chi[k] - std::sqrt(static_cast<double>(k) / (k + 1)) * chi[k - 1];
    }
    return chi;
}

VibronicStructure build_vibronic(const MolecularModel& model, std::size_t max_basis) {
    model.validate();

    std::size_t m = 1;
    for (const auto& mode : model.modes) {
        const auto levels = static_cast<std::size_t>(mode.n_max) + 1;
        if (m > max_basis / levels) {
            throw GuardError("vibronic basis size exceeds cap of " + std::to_string(max_basis));
        }
        m *= levels;
    }
    if (m > max_basis) {
        throw GuardError("vibronic basis size exceeds cap of " + std::to_string(max_basis));
    }

    const std::size_t n_modes = model.modes.size();

    // Lexicographic enumeration, first mode most significant.
    std::vector<std::vector<int>> lex(m, std::vector<int>(n_modes, 0));
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t rem = i;
        for (std::size_t mode = n_modes; mode-- > 0;) {
            const auto levels = static_cast<std::size_t>(model.modes[mode].n_max) + 1;
            lex[i][mode] = static_cast<int>(rem % levels);
            rem /= levels;
        }
    }
    std::vector<double> vib(m, 0.0);
    double scale = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t mode = 0; mode < n_modes; ++mode) {
            vib[i] += lex[i][mode] * model.modes[mode].frequency;
        }
        scale = std::max(scale, vib[i]);
    }
    const double tie = 1e-12 * std::max(scale, 1.0);
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vib[a] < vib[b] - tie; });

    std::vector<Eigen::MatrixXd> per_mode;
    per_mode.reserve(n_modes);
    for (const auto& mode : model.modes) per_mode.push_back(displaced_overlaps(mode.huang_rhys, mode.n_max));

    VibronicStructure vs;
    vs.modes = model.modes;
    vs.electronic_gap = model.electronic_gap;
    vs.omega_g.resize(m);
    vs.omega_e.resize(m);
    vs.quanta.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        vs.quanta[i] = lex[order[i]];
        vs.omega_g[i] = vib[order[i]];
        vs.omega_e[i] = model.electronic_gap + vib[order[i]];
    }
    vs.fc.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            double value = 1.0;
            for (std::size_t mode = 0; mode < n_modes; ++mode) {
                value *= per_mode[mode](vs.quanta[i][mode], vs.quanta[j][mode]);
            }
            vs.fc(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
        }
    }
    return vs;
}

} // namespace polariton
