#include "polariton/dynamics.hpp"

#include "polariton/errors.hpp"
#include "polariton/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>

namespace polariton {

using Index = Eigen::Index;

void TimeGrid::validate() const {
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw std::invalid_argument("time grid: t_max must be positive");
    if (n_steps < 2) throw std::invalid_argument("time grid: n_steps must be >= 2");
}

double TimeGrid::resolution() const { return 2.0 * std::numbers::pi / t_max; }

Eigen::VectorXcd basis_vector(std::size_t dim, std::size_t index) {
    if (index >= dim) throw std::out_of_range("basis_vector: index out of range");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Index>(dim));
    v(static_cast<Index>(index)) = 1.0;
    return v;
}

namespace {

void check_inputs(Index dim, const Eigen::VectorXd& photon_number, const Eigen::VectorXcd& psi0,
                  const TimeGrid& grid, double kappa) {
    grid.validate();
    if (photon_number.size() != dim || psi0.size() != dim) {
        throw std::invalid_argument("propagate: dimension mismatch between H, photon numbers and psi0");
    }
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("propagate: kappa must be >= 0");
    if (!psi0.allFinite()) throw GuardError("propagate: non-finite initial state");
    if (std::abs(psi0.norm() - 1.0) > 1e-10) throw std::invalid_argument("propagate: initial state must be normalised");
}

void check_finite(const Trajectory& traj) {
    for (std::size_t n = 0; n < traj.c_t.size(); ++n) {
        if (!std::isfinite(traj.c_t[n].real()) || !std::isfinite(traj.c_t[n].imag()) || !std::isfinite(traj.norm_t[n])) {
            throw GuardError("propagate: non-finite amplitude at step " + std::to_string(n));
        }
    }
}

Trajectory spectral_hermitian(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi0, const TimeGrid& grid,
                              bool store) {
    const auto es = diagonalize_hermitian(h);
    const Eigen::VectorXcd a = es.vectors.adjoint() * psi0;
    const double norm = a.norm();
    Trajectory traj{grid, {}, {}, {}, "spectral-hermitian"};
    traj.c_t.reserve(grid.samples());
    traj.norm_t.assign(grid.samples(), norm);
    Eigen::VectorXcd phased(a.size());
    for (std::size_t n = 0; n < grid.samples(); ++n) {
        const double t = grid.time(n);
        cplx c{};
        for (Index j = 0; j < a.size(); ++j) {
            phased(j) = std::polar(1.0, -es.values(j) * t) * a(j);
            c += std::conj(a(j)) * phased(j);
        }
        traj.c_t.push_back(c);
        if (store) traj.states.push_back(es.vectors * phased);
    }
    return traj;
}

Trajectory stepping(const Eigen::MatrixXcd& step, const Eigen::VectorXcd& psi0, const TimeGrid& grid, bool store,
                    std::string method) {
    Trajectory traj{grid, {}, {}, {}, std::move(method)};
    Eigen::VectorXcd psi = psi0;
    for (std::size_t n = 0; n < grid.samples(); ++n) {
        if (n > 0) psi = step * psi;
        traj.c_t.push_back(psi0.dot(psi));
        traj.norm_t.push_back(psi.norm());
        if (store) traj.states.push_back(psi);
    }
    return traj;
}

Trajectory spectral_general(const Eigen::MatrixXcd& h_eff, const Eigen::VectorXcd& psi0, const TimeGrid& grid,
                            bool store) {
    const auto sd = decompose(h_eff);
    if (sd.residual > 1e-10) {
        // Near-defective spectrum: fall back to the Padé matrix exponential.
        const Eigen::MatrixXcd step = (cplx(0.0, -grid.dt()) * h_eff).exp();
        return stepping(step, psi0, grid, store, "matrix-exponential");
    }
    const Eigen::VectorXcd a = sd.inverse * psi0;
    const Eigen::VectorXcd b = sd.right.adjoint() * psi0;
    const Eigen::MatrixXcd gram = sd.right.adjoint() * sd.right;
    Trajectory traj{grid, {}, {}, {}, "spectral"};
    Eigen::VectorXcd x(a.size());
    for (std::size_t n = 0; n < grid.samples(); ++n) {
        const double t = grid.time(n);
        for (Index j = 0; j < a.size(); ++j) x(j) = std::exp(cplx(0.0, -t) * sd.values(j)) * a(j);
        if (n == 0) {
            traj.c_t.push_back(psi0.squaredNorm());
            traj.norm_t.push_back(psi0.norm());
        } else {
            traj.c_t.push_back(b.dot(x));
            traj.norm_t.push_back(std::sqrt(std::max(0.0, x.dot(gram * x).real())));
        }
        if (store) traj.states.push_back(sd.right * x);
    }
    return traj;
}

// exp(−i τ A) v by Arnoldi projection; returns false if the error estimate
// misses the tolerance within max_dim vectors.
bool arnoldi_step(const Eigen::SparseMatrix<cplx>& a, const Eigen::VectorXcd& v, double tau, double tol, int max_dim,
                  Eigen::VectorXcd& out) {
    const double beta = v.norm();
    if (beta == 0.0) {
        out = v;
        return true;
    }
    const Index n = v.size();
    const int kmax = static_cast<int>(std::min<Index>(max_dim, n));
    Eigen::MatrixXcd basis(n, kmax + 1);
    Eigen::MatrixXcd hess = Eigen::MatrixXcd::Zero(kmax + 1, kmax);
    basis.col(0) = v / beta;
    for (int j = 0; j < kmax; ++j) {
        Eigen::VectorXcd w = a * basis.col(j);
        for (int i = 0; i <= j; ++i) {
            hess(i, j) = basis.col(i).dot(w);
            w -= hess(i, j) * basis.col(i);
        }
        // second Gram–Schmidt pass
        for (int i = 0; i <= j; ++i) {
            const cplx corr = basis.col(i).dot(w);
            hess(i, j) += corr;
            w -= corr * basis.col(i);
        }
        const double h_next = w.norm();
        const int k = j + 1;
        const Eigen::MatrixXcd small = (cplx(0.0, -tau) * hess.topLeftCorner(k, k)).exp();
        const bool breakdown = h_next < 1e-14 * std::max(1.0, hess.topLeftCorner(k, k).cwiseAbs().maxCoeff());
        const double err = beta * h_next * tau * std::abs(small(k - 1, 0));
        if (breakdown || err < tol) {
            out = beta * basis.leftCols(k) * small.col(0);
            return true;
        }
        hess(k, j) = h_next;
        basis.col(k) = w / h_next;
    }
    return false;
}

Trajectory krylov(const Eigen::SparseMatrix<cplx>& a, const Eigen::VectorXcd& psi0, const TimeGrid& grid,
                  const PropagateOptions& opt) {
    Trajectory traj{grid, {}, {}, {}, "krylov"};
    Eigen::VectorXcd psi = psi0;
    double tau = grid.dt();
    Eigen::VectorXcd next;
    for (std::size_t n = 0; n < grid.samples(); ++n) {
        if (n > 0) {
            double remaining = grid.dt();
            while (remaining > 0.0) {
                const double step = std::min(tau, remaining);
                if (arnoldi_step(a, psi, step, opt.krylov_tolerance, opt.krylov_max_dim, next)) {
                    psi = next;
                    remaining -= step;
                    if (step == tau) tau = std::min(grid.dt(), 1.5 * tau);
                } else {
                    tau = 0.5 * step;
                    if (tau < 1e-12 * grid.dt()) throw GuardError("Krylov propagation failed to converge");
                }
            }
        }
        traj.c_t.push_back(psi0.dot(psi));
        traj.norm_t.push_back(psi.norm());
        if (opt.store_states) traj.states.push_back(psi);
    }
    return traj;
}

} // namespace

Trajectory propagate(const Eigen::MatrixXcd& h, const Eigen::VectorXd& photon_number, const Eigen::VectorXcd& psi0,
                     const TimeGrid& grid, double kappa, const PropagateOptions& options) {
    if (h.rows() != h.cols()) throw std::invalid_argument("propagate: H must be square");
    check_inputs(h.rows(), photon_number, psi0, grid, kappa);
    if (!h.allFinite()) throw GuardError("propagate: non-finite Hamiltonian");
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    if (hermiticity_defect(h) > 1e-10 * scale) throw std::invalid_argument("propagate: H must be Hermitian");

    auto method = options.method;
    if (method == PropagationMethod::Auto) {
        method = static_cast<std::size_t>(h.rows()) <= kMaxDenseDim ? PropagationMethod::Spectral
                                                                     : PropagationMethod::Krylov;
    }
    const bool leaky = kappa > 0.0 && photon_number.cwiseAbs().maxCoeff() > 0.0;
    Trajectory traj;
    if (method == PropagationMethod::Krylov) {
        const Eigen::MatrixXcd h_eff = with_leakage(h, photon_number, kappa);
        traj = krylov(h_eff.sparseView(), psi0, grid, options);
    } else if (!leaky) {
        traj = spectral_hermitian(h, psi0, grid, options.store_states);
    } else {
        traj = spectral_general(with_leakage(h, photon_number, kappa), psi0, grid, options.store_states);
    }
    check_finite(traj);
    return traj;
}

Trajectory propagate(const SparseMatrix& h, const Eigen::VectorXd& photon_number, const Eigen::VectorXcd& psi0,
                     const TimeGrid& grid, double kappa, const PropagateOptions& options) {
    if (h.rows() != h.cols()) throw std::invalid_argument("propagate: H must be square");
    auto method = options.method;
    if (method == PropagationMethod::Auto) {
        method = h.rows() <= kMaxDenseDim ? PropagationMethod::Spectral : PropagationMethod::Krylov;
    }
    if (method == PropagationMethod::Spectral) {
        PropagateOptions opt = options;
        opt.method = PropagationMethod::Spectral;
        return propagate(h.to_dense(), photon_number, psi0, grid, kappa, opt);
    }
    check_inputs(static_cast<Index>(h.rows()), photon_number, psi0, grid, kappa);
    const double scale = std::max(1.0, h.max_abs());
    if ((h - h.adjoint()).max_abs() > 1e-10 * scale) throw std::invalid_argument("propagate: H must be Hermitian");
    std::vector<Triplet> leak;
    if (kappa > 0.0) {
        for (Index i = 0; i < photon_number.size(); ++i) {
            if (photon_number(i) != 0.0) {
                leak.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(i),
                                cplx(0.0, -0.5 * kappa * photon_number(i))});
            }
        }
    }
    const SparseMatrix h_eff = h + SparseMatrix(h.rows(), h.cols(), std::move(leak));
    auto traj = krylov(h_eff.to_eigen(), psi0, grid, options);
    check_finite(traj);
    return traj;
}

std::vector<cplx> filter_response(const VibronicStructure& vs, const CavityParams& cav, const TimeGrid& grid) {
    const Eigen::MatrixXcd h0 = build_H0(vs, cav);
    Eigen::VectorXd n_ph = Eigen::VectorXd::Zero(h0.rows());
    n_ph(0) = 1.0;
    const auto traj = propagate(h0, n_ph, basis_vector(static_cast<std::size_t>(h0.rows()), 0), grid, cav.kappa);
    std::vector<cplx> out;
    out.reserve(traj.c_t.size());
    for (const auto& c : traj.c_t) out.push_back(cplx(0.0, -1.0) * c);
    return out;
}

std::vector<double> photonic_weights(const VibronicStructure& vs, const CavityParams& cav) {
    const auto es = diagonalize_hermitian(build_H0(vs, cav));
    std::vector<double> w(static_cast<std::size_t>(es.values.size()));
    for (Index j = 0; j < es.values.size(); ++j) w[static_cast<std::size_t>(j)] = std::norm(es.vectors(0, j));
    return w;
}

VibronicDensity dark_state_density(const VibronicStructure& vs, const CavityParams& cav, std::size_t eigen_index) {
    const auto es = diagonalize_hermitian(build_H0(vs, cav));
    if (eigen_index >= static_cast<std::size_t>(es.values.size())) {
        throw std::out_of_range("dark_state_density: eigenstate index out of range");
    }
    const auto j = static_cast<Index>(eigen_index);
    const auto m = static_cast<Index>(vs.size());
    VibronicDensity d;
    d.eigen_index = eigen_index;
    d.energy = es.values(j);
    d.photon_weight = std::norm(es.vectors(0, j));
    d.excited_amplitudes = es.vectors.col(j).tail(m);
    d.excited_weight = d.excited_amplitudes.squaredNorm();
    d.quanta_marginals.resize(vs.modes.size());
    for (std::size_t mode = 0; mode < vs.modes.size(); ++mode) {
        d.quanta_marginals[mode].assign(static_cast<std::size_t>(vs.modes[mode].n_max) + 1, 0.0);
    }
    for (Index i = 0; i < m; ++i) {
        const double p = std::norm(d.excited_amplitudes(i));
        for (std::size_t mode = 0; mode < vs.modes.size(); ++mode) {
            d.quanta_marginals[mode][static_cast<std::size_t>(vs.quanta[static_cast<std::size_t>(i)][mode])] += p;
        }
    }
    return d;
}

std::vector<double> coordinate_density(const VibronicStructure& vs, const Eigen::VectorXcd& excited_amplitudes,
                                       std::size_t mode, std::span<const double> q_grid) {
    if (mode >= vs.modes.size()) throw std::out_of_range("coordinate_density: mode index out of range");
    if (excited_amplitudes.size() != static_cast<Index>(vs.size())) {
        throw std::invalid_argument("coordinate_density: amplitude vector must have length m");
    }
    const int n_max = vs.modes[mode].n_max;
    const double shift = vs.modes[mode].excited_minimum();

    // Group amplitudes by the quanta of the other modes.
    std::map<std::vector<int>, std::vector<cplx>> groups;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        auto key = vs.quanta[i];
        const int n = key[mode];
        key.erase(key.begin() + static_cast<std::ptrdiff_t>(mode));
        auto& slot = groups[key];
        if (slot.empty()) slot.assign(static_cast<std::size_t>(n_max) + 1, cplx{});
        slot[static_cast<std::size_t>(n)] = excited_amplitudes(static_cast<Index>(i));
    }

    std::vector<double> rho(q_grid.size(), 0.0);
    for (std::size_t iq = 0; iq < q_grid.size(); ++iq) {
        const auto chi = oscillator_eigenfunctions(n_max, q_grid[iq] - shift);
        for (const auto& [key, amps] : groups) {
            cplx psi{};
            for (int n = 0; n <= n_max; ++n) psi += amps[static_cast<std::size_t>(n)] * chi[static_cast<std::size_t>(n)];
            rho[iq] += std::norm(psi);
        }
    }
    return rho;
}

} // namespace polariton
