// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance [criterion-number ...]
#include "oracles/reference.hpp"
#include "polariton/cute.hpp"
#include "polariton/dynamics.hpp"
#include "polariton/linalg.hpp"
#include "polariton/oracle.hpp"
#include "polariton/perturbation.hpp"
#include "polariton/spectrum.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace polariton;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

CavityParams cavity(double omega_c, double g_sqrt_n, long n, double kappa = 0.0) {
    CavityParams c;
    c.omega_c = omega_c;
    c.g_sqrt_n = g_sqrt_n;
    c.kappa = kappa;
    c.n = n > 0 ? MoleculeCount::finite(n) : MoleculeCount::infinite();
    return c;
}

Eigen::VectorXcd photon_in_block0(const BlockHamiltonian& bh) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(bh.dim()));
    psi(static_cast<Eigen::Index>(bh.labels.front().front())) = 1.0;
    return psi;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

// ---------------------------------------------------------------------------
// 1. Oracle equivalence
Outcome oracle_equivalence() {
    std::mt19937 rng(20240611);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_h = 0.0, worst_c = 0.0;
    for (int fixture = 0; fixture < 3; ++fixture) {
        MolecularModel model;
        model.electronic_gap = 0.09 + 0.02 * u(rng);
        if (fixture == 2) {
            model.modes = {{0.008 + 0.006 * u(rng), 0.3 + 1.5 * u(rng), 1}, {0.002 + 0.003 * u(rng), 0.2 + u(rng), 1}};
        } else {
            model.modes = {{0.005 + 0.01 * u(rng), 0.2 + 2.0 * u(rng), fixture == 0 ? 2 : 3}};
        }
        const auto vs = build_vibronic(model);
        const double omega_c = model.electronic_gap + 0.02 * (u(rng) - 0.3);
        const double g_sqrt_n = 0.01 + 0.03 * u(rng);
        for (int n = 1; n <= 3; ++n) {
            const auto cav = cavity(omega_c, g_sqrt_n, n);
            const auto basis = TensorBasis::build(n, static_cast<int>(vs.size()), 1);
            const Symmetrizer sym(basis);
            const auto full = build_full_H(vs, cav, basis);
            const auto bh = assemble_truncated(vs, cav, n);
            worst_h = std::max(worst_h, (sym.project(full) - bh.matrix).max_abs());
            const Eigen::VectorXcd psi = photon_in_block0(bh);
            const TimeGrid grid{10.0 / g_sqrt_n, 500};
            const auto cute = propagate(bh.matrix, bh.photon_number(), psi, grid, 0.0);
            const auto oracle = oracle_survival(vs, cav, 1, psi, grid, 0.0);
            worst_c = std::max(worst_c, max_abs_diff(cute.c_t, oracle.trajectory.c_t));
        }
    }
    return {worst_h <= 1e-12 && worst_c <= 1e-10,
            "max |H_sym - H_cute| = " + fmt(worst_h) + " (tol 1e-12), max |c_oracle - c_cute| = " + fmt(worst_c) +
                " (tol 1e-10)"};
}

// ---------------------------------------------------------------------------
// 2. Convergence to the collective-only result as N grows
Outcome large_n_limit() {
    const auto vs = build_vibronic({0.1, {{0.01, 1.0, 1}}});
    const TimeGrid grid{200.0, 400};
    std::vector<double> err;
    std::vector<cplx> c_h0;
    for (long n : {8L, 16L, 32L}) {
        const auto cav = cavity(0.11, 0.03, n);
        const auto bh = assemble_truncated(vs, cav, static_cast<int>(n));
        const auto full = propagate(bh.matrix, bh.photon_number(), photon_in_block0(bh), grid, 0.0);
        const Eigen::MatrixXcd h0 = build_H0(vs, cav);
        const auto ref = propagate(h0, Eigen::VectorXd::Unit(h0.rows(), 0), basis_vector(h0.rows(), 0), grid, 0.0);
        err.push_back(max_abs_diff(full.c_t, ref.c_t));
    }
    const double ratio = err[1] / err[2];
    return {std::abs(ratio - 2.0) <= 0.5,
            "error(8,16,32) = " + fmt(err[0]) + ", " + fmt(err[1]) + ", " + fmt(err[2]) +
                "; error(16)/error(32) = " + fmt(ratio) + " (want 2 +- 25%)"};
}

// ---------------------------------------------------------------------------
// 3. 1/N expansion of the survival amplitude
Outcome expansion() {
    const auto vs = build_vibronic({0.1, {{0.01, 1.0, 2}}});
    const TimeGrid grid{200.0, 400};
    const Eigen::VectorXcd psi0 = basis_vector(vs.size() + 1, 0);

    const auto a = survival_correction(vs, cavity(0.11, 0.03, 1000), psi0, grid);
    const auto b = survival_correction(vs, cavity(0.11, 0.03, 10000), psi0, grid);
    double diff = 0.0, scale = 0.0;
    for (std::size_t s = 0; s < grid.samples(); ++s) {
        diff = std::max(diff, std::abs(a.scaled_corr_t[s] - b.scaled_corr_t[s]));
        scale = std::max(scale, std::abs(b.scaled_corr_t[s]));
    }
    const double scaled_rel = diff / scale;

    std::vector<double> residual;
    for (long n : {8L, 16L, 32L}) {
        const auto cav = cavity(0.11, 0.03, n);
        const auto bh = assemble_truncated(vs, cav, static_cast<int>(n));
        const auto exact = propagate(bh.matrix, bh.photon_number(), photon_in_block0(bh), grid, 0.0);
        const auto ex = survival_correction(vs, cav, psi0, grid);
        double r = 0.0;
        for (std::size_t s = 0; s < grid.samples(); ++s) {
            r = std::max(r, std::abs(exact.c_t[s] - ex.c1_t[s] - ex.c_corr_t[s]));
        }
        residual.push_back(r);
    }
    const double ratio = residual[0] / residual[1];
    const double k = residual[0] * 64.0;
    const bool bound = residual[1] <= k / 256.0 && residual[2] <= k / 1024.0;
    const bool pass = scaled_rel < 0.01 && std::abs(ratio - 4.0) <= 1.2 && bound;
    return {pass, "N*c_corr rel. diff (1e3 vs 1e4) = " + fmt(scaled_rel) + " (tol 1%); residual(8)/residual(16) = " +
                      fmt(ratio) + " (want 4 +- 30%); K/N^2 bound at 16, 32: " + (bound ? "holds" : "violated")};
}

// ---------------------------------------------------------------------------
// 4. Radiative pumping
Outcome radiative_pumping() {
    const auto vs = build_vibronic({0.1, {{0.03, 1.0, 6}}});
    const std::size_t dark = 6;
    const auto c1 = cavity(0.1, 0.03, 1000, 0.0015);
    const auto c2 = cavity(0.1, 0.03, 2000, 0.0015);
    const auto r1 = radiative_pumping_rate(vs, c1, dark);
    const auto r2 = radiative_pumping_rate(vs, c2, dark);
    const double scaling = r2.gamma_total / r1.gamma_total;

    // Population decay of the dark state under first-order truncated dynamics with leakage.
    const auto bh = assemble_truncated(vs, c1, 1);
    const auto h0 = diagonalize_hermitian(build_H0(vs, c1));
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(bh.dim()));
    for (std::size_t i = 0; i < bh.labels[0].size(); ++i) {
        psi(static_cast<Eigen::Index>(bh.labels[0][i])) = h0.vectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(dark));
    }
    const double expected = r1.gamma_total + r1.direct_leakage;
    const TimeGrid grid{3.0 / expected, 3000};
    const auto traj = propagate(bh.matrix, bh.photon_number(), psi, grid, c1.kappa);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t s = grid.n_steps / 10; s < grid.samples(); ++s) {
        const double x = grid.time(s), y = std::log(std::norm(traj.c_t[s]));
        sx += x; sy += y; sxx += x * x; sxy += x * y; ++n;
    }
    const double fitted = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double agreement = fitted / expected;
    const bool pass = std::abs(scaling - 0.5) <= 0.025 && std::abs(agreement - 1.0) <= 0.15;
    return {pass, "Gamma(2N)/Gamma(N) = " + fmt(scaling) + " (want 0.5 +- 5%); fitted decay / (Gamma + direct leakage) = " +
                      fmt(agreement) + " (want 1 +- 15%); Gamma = " + fmt(r1.gamma_total) + ", direct = " +
                      fmt(r1.direct_leakage) + ", fitted / Gamma alone = " + fmt(fitted / r1.gamma_total)};
}

// ---------------------------------------------------------------------------
// Shared model for 5 and 6
VibronicStructure two_mode_model() {
    return build_vibronic({0.1, {{0.01, 0.01, 3}, {0.001, 16.0, 48}}});
}

// 5. Absorption spectrum at N = infinity against the sum over poles
Outcome spectrum_reproduction() {
    const auto vs = two_mode_model();
    const auto cav = cavity(0.1161, 0.03, 0, 0.0015);
    const Eigen::MatrixXcd h0 = build_H0(vs, cav);
    const Eigen::VectorXd n_ph = Eigen::VectorXd::Unit(h0.rows(), 0);
    const TimeGrid grid{65536.0, 65536};

    // pole oracle
    Eigen::MatrixXcd h_eff = h0;
    h_eff(0, 0) -= cplx(0.0, 0.5 * cav.kappa);
    const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(h_eff);
    const Eigen::MatrixXcd right = ces.eigenvectors();
    const Eigen::MatrixXcd left = right.inverse();
    const Eigen::VectorXcd poles = ces.eigenvalues();
    Eigen::VectorXcd residues(poles.size());
    for (Eigen::Index j = 0; j < residues.size(); ++j) residues(j) = right(0, j) * left(j, 0);
    const auto oracle = [&](double w) { return ref::pole_transform(poles, residues, w, grid.dt(), grid.n_steps); };

    const auto traj = propagate(h0, n_ph, basis_vector(h0.rows(), 0), grid, cav.kappa);
    // frequency step well below the 2π/t_max ripple period so each local maximum is bracketed alone
    const auto sp = spectrum(traj.c_t, grid, {0.06, 0.16, 8001, Window::None, 0.1});
    const auto peaks = find_peaks(sp, traj.c_t, grid, 1e-3);
    if (peaks.size() < 2) return {false, "fewer than two peaks found"};

    double worst_pos = 0.0, worst_height = 0.0;
    std::vector<std::pair<double, double>> oracle_peaks;
    // refine the oracle over the same brackets find_peaks used
    for (std::size_t i = 1; i + 1 < sp.intensity.size(); ++i) {
        if (sp.intensity[i] < 1e-3) continue;
        if (!(sp.intensity[i] > sp.intensity[i - 1] && sp.intensity[i] >= sp.intensity[i + 1])) continue;
        const auto [w, fw] = boost::math::tools::brent_find_minima([&](double x) { return -oracle(x); }, sp.omega[i - 1],
                                                                   sp.omega[i + 1], 52);
        oracle_peaks.emplace_back(w, -fw);
    }
    if (oracle_peaks.size() != peaks.size()) return {false, "peak bookkeeping mismatch"};
    double oracle_max = 0.0;
    for (const auto& op : oracle_peaks) oracle_max = std::max(oracle_max, op.second);
    double spec_max = 0.0;
    for (const auto& p : peaks) spec_max = std::max(spec_max, p.height);
    for (std::size_t i = 0; i < peaks.size(); ++i) {
        worst_pos = std::max(worst_pos, std::abs(peaks[i].omega - oracle_peaks[i].first) / oracle_peaks[i].first);
        worst_height = std::max(worst_height, std::abs(peaks[i].height / spec_max - oracle_peaks[i].second / oracle_max));
    }
    auto sorted = peaks;
    std::sort(sorted.begin(), sorted.end(), [](const Peak& a, const Peak& b) { return a.height > b.height; });
    const double lower = std::min(sorted[0].omega, sorted[1].omega), upper = std::max(sorted[0].omega, sorted[1].omega);
    const bool straddle = lower < cav.omega_c && cav.omega_c < upper;

    // nearest bright eigenvalue to each dominant band, for the record
    const auto es = diagonalize_hermitian(h0);
    auto nearest = [&](double w) {
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < es.values.size(); ++j)
            if (std::norm(es.vectors(0, j)) > 1e-3) best = std::min(best, std::abs(es.values(j) - w));
        return best;
    };
    const bool pass = worst_pos <= 1e-6 && worst_height <= 1e-6 && straddle;
    return {pass, std::to_string(peaks.size()) + " peaks; max rel. position error = " + fmt(worst_pos) +
                      ", max rel. height error = " + fmt(worst_height) + " (tol 1e-6); dominant bands at " + fmt(lower) +
                      " and " + fmt(upper) + (straddle ? " straddle" : " do not straddle") + " omega_c = 0.1161" +
                      "; nearest bright eigenvalue offsets " + fmt(nearest(lower)) + ", " + fmt(nearest(upper))};
}

// ---------------------------------------------------------------------------
// 6. Lower polariton vs lowest dark state geometry along mode 2
Outcome dark_state_geometry() {
    const auto vs = two_mode_model();
    const auto cav = cavity(0.1161, 0.03, 0, 0.0015);
    const auto dark = dark_states(vs, cav);
    if (dark.empty()) return {false, "no near-dark eigenstate"};
    std::vector<double> q;
    for (int i = 0; i <= 1600; ++i) q.push_back(-4.0 + 0.01 * i);
    const double ground_min = 0.0, excited_min = vs.modes[1].excited_minimum();
    auto peak_of = [&](std::size_t index) {
        const auto d = dark_state_density(vs, cav, index);
        const auto rho = coordinate_density(vs, d.excited_amplitudes, 1, q);
        return q[static_cast<std::size_t>(std::max_element(rho.begin(), rho.end()) - rho.begin())];
    };
    const double q_lp = peak_of(0), q_dark = peak_of(dark.front());
    const bool lp_ok = std::abs(q_lp - ground_min) < std::abs(q_lp - excited_min);
    const bool dark_ok = std::abs(q_dark - excited_min) < std::abs(q_dark - ground_min);
    return {lp_ok && dark_ok, "lower polariton density peak q = " + fmt(q_lp) + ", lowest dark state (index " +
                                  std::to_string(dark.front()) + ") peak q = " + fmt(q_dark) +
                                  "; ground minimum 0, excited minimum " + fmt(excited_min)};
}

// ---------------------------------------------------------------------------
// 7. Structural invariants
Outcome structure() {
    const auto vs = build_vibronic({0.1, {{0.01, 1.2, 2}}});
    const double g = 0.01;
    double herm = 0.0, amp_err = 0.0, single_err = 0.0;
    std::size_t violations = 0, inter = 0;
    for (long n : {4L, 9L, 16L}) {
        const auto cav = cavity(0.11, g * std::sqrt(static_cast<double>(n)), n);
        const auto bh = assemble_truncated(vs, cav, 3);
        herm = std::max(herm, (bh.matrix - bh.matrix.adjoint()).max_abs());
        const auto report = conserved_check(bh.basis, bh.matrix);
        violations += report.violations.size();
        inter += report.inter_block_elements;
        const std::size_t photon = bh.labels[0][0];
        for (std::size_t i = 0; i < vs.size(); ++i) {
            const cplx h = bh.matrix.at(bh.labels[0][i + 1], photon);
            amp_err = std::max(amp_err, std::abs(h.real() / vs.fc(static_cast<Eigen::Index>(i), 0) - std::sqrt(static_cast<double>(n)) * g));
        }
        // single-molecule elements carry g without amplification
        for (std::size_t k = 1; k < vs.size(); ++k) {
            const Eigen::MatrixXcd v = build_v0k(vs, cav, k);
            single_err = std::max(single_err, std::abs(v(1, 0).real() / vs.fc(0, static_cast<Eigen::Index>(k)) - g));
        }
    }
    const bool pass = herm == 0.0 && violations == 0 && inter > 0 && amp_err <= 1e-12 && single_err <= 1e-12;
    return {pass, "hermiticity defect = " + fmt(herm) + ", conservation/tridiagonality violations = " +
                      std::to_string(violations) + ", max |H_(e_i,1)/fc - sqrt(N) g| = " + fmt(amp_err) +
                      " (tol 1e-12), single-molecule coupling error = " + fmt(single_err)};
}

// ---------------------------------------------------------------------------
// 8. High-excitation construction
Outcome high_excitation() {
    const auto vs = build_vibronic({0.1, {{0.01, 0.9, 3}}});
    double block_err = 0.0;
    for (long n : {0L, 5L, 100L}) {
        const auto cav = cavity(0.105, 0.03, n);
        const auto bh = assemble_high_excitation(vs, cav, 1);
        const double d = (bh.dense() - build_H0(vs, cav)).cwiseAbs().maxCoeff();
        block_err = std::max(block_err, n == 0 ? d * 1e6 : d); // infinite case must be bit-exact
    }
    const auto two_level = build_vibronic({0.1, {}});
    double eig_err = 0.0;
    for (long n : {0L, 2L, 7L}) {
        const double wc = 0.104, gsn = 0.02;
        const auto cav = cavity(wc, gsn, n);
        const auto bh = assemble_high_excitation(two_level, cav, 2);
        // |2 photons>, |1 photon, 1 excited>, |0 photons, 2 excited>
        const double g = n == 0 ? 0.0 : gsn / std::sqrt(static_cast<double>(n));
        const double a = n == 0 ? gsn * std::sqrt(2.0) : g * std::sqrt(2.0 * n);
        const double b = n == 0 ? gsn * std::sqrt(2.0) : g * std::sqrt(2.0 * (n - 1));
        Eigen::Matrix3d h;
        h << 2 * wc, a, 0, a, wc + 0.1, b, 0, b, 0.2;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> hand(h);
        const auto got = diagonalize_hermitian(bh.dense());
        if (got.values.size() != 3) return {false, "N_exc = 2 block does not have three states"};
        eig_err = std::max(eig_err, (got.values - hand.eigenvalues()).cwiseAbs().maxCoeff());
    }
    return {block_err <= 1e-15 && eig_err <= 1e-12,
            "N_exc = 1 block vs H0 max diff = " + fmt(block_err) + "; N_exc = 2 eigenvalue error = " + fmt(eig_err) +
                " (tol 1e-12)"};
}

struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double budget_seconds;
};

} // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {"oracle equivalence", oracle_equivalence, 60},
        {"large-N exactness", large_n_limit, 300},
        {"1/N expansion", expansion, 300},
        {"radiative pumping", radiative_pumping, 300},
        {"absorption spectrum vs pole oracle", spectrum_reproduction, 120},
        {"dark-state geometry", dark_state_geometry, 600},
        {"structural invariants", structure, 60},
        {"high-excitation construction", high_excitation, 1},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
    if (selected.empty())
        for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) selected.push_back(i);

    bool all = true;
    for (int id : selected) {
        if (id < 1 || id > static_cast<int>(criteria.size())) {
            std::printf("FAIL %d unknown criterion\n", id);
            all = false;
            continue;
        }
        const auto& c = criteria[static_cast<std::size_t>(id - 1)];
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs <= c.budget_seconds;
        const bool pass = o.pass && in_time;
        all = all && pass;
        std::printf("%s %d %s: %s; runtime %.2fs (budget %.0fs)\n", pass ? "PASS" : "FAIL", id, c.name,
                    o.detail.c_str(), secs, c.budget_seconds);
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
