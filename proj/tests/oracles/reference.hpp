// Independent reference computations used only by the tests.
#pragma once

#include "polariton/cute.hpp"
#include "polariton/fockspace.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <functional>
#include <set>
#include <vector>

namespace ref {

using cplx = std::complex<double>;

// χ_n(q) from the closed-form Hermite polynomial.
inline double hermite_function(int n, double q) {
    const double log_norm = -0.5 * (n * std::log(2.0) + std::lgamma(n + 1.0) + 0.5 * std::log(M_PI));
    return std::hermite(static_cast<unsigned>(n), q) * std::exp(log_norm - 0.5 * q * q);
}

// <χ_m(q − d)|χ_n(q)> by trapezoid quadrature on a wide uniform grid.
inline double fc_quadrature(int m, int n, double d) {
    const double lo = -14.0 + std::min(0.0, d), hi = 14.0 + std::max(0.0, d);
    const int pts = 8000;
    const double h = (hi - lo) / pts;
    double sum = 0.0;
    for (int i = 0; i <= pts; ++i) {
        const double q = lo + i * h;
        const double w = (i == 0 || i == pts) ? 0.5 : 1.0;
        sum += w * hermite_function(m, q - d) * hermite_function(n, q);
    }
    return sum * h;
}

// Every occupation vector with the given N, N_exc and quasi <= q_max,
// by exhaustive search over register occupations.
inline std::set<polariton::SymState> brute_states(int n_mol, int n_exc, int m, int q_max) {
    std::set<polariton::SymState> out;
    std::vector<int> occ(static_cast<std::size_t>(2 * m), 0);
    std::function<void(int, int)> rec = [&](int reg, int left) {
        if (reg == 2 * m - 1) {
            occ[static_cast<std::size_t>(reg)] = left;
            polariton::SymState s;
            s.n_g.assign(occ.begin(), occ.begin() + m);
            s.n_e.assign(occ.begin() + m, occ.end());
            const int exc = s.excitations();
            if (exc > n_exc || s.quasi() > q_max) return;
            s.n_ph = n_exc - exc;
            out.insert(s);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            occ[static_cast<std::size_t>(reg)] = k;
            rec(reg + 1, left - k);
        }
    };
    rec(0, n_mol);
    return out;
}

// Classical fourth-order Runge–Kutta for i dψ/dt = H ψ.
inline std::vector<cplx> rk4_survival(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi0, double t_max,
                                      std::size_t n_out, std::size_t substeps) {
    const cplx mi(0.0, -1.0);
    const double dt = t_max / static_cast<double>(n_out * substeps);
    Eigen::VectorXcd psi = psi0;
    std::vector<cplx> out{psi0.dot(psi)};
    for (std::size_t n = 0; n < n_out; ++n) {
        for (std::size_t s = 0; s < substeps; ++s) {
            const Eigen::VectorXcd k1 = mi * (h * psi);
            const Eigen::VectorXcd k2 = mi * (h * (psi + 0.5 * dt * k1));
            const Eigen::VectorXcd k3 = mi * (h * (psi + 0.5 * dt * k2));
            const Eigen::VectorXcd k4 = mi * (h * (psi + dt * k3));
            psi += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        out.push_back(psi0.dot(psi));
    }
    return out;
}

// exp(t·J)(0, 2) for the bidiagonal J with diagonal (x0, x1, x2).
inline cplx divided_difference_expm(cplx x0, cplx x1, cplx x2, double t) {
    Eigen::Matrix3cd j = Eigen::Matrix3cd::Zero();
    j(0, 0) = x0;
    j(1, 1) = x1;
    j(2, 2) = x2;
    j(0, 1) = j(1, 2) = 1.0;
    const Eigen::Matrix3cd e = (t * j).exp();
    return e(0, 2);
}

// Second-order Dyson term −∫∫ <i|e^{−iH0(t−t1)} V e^{−iH1(t1−t2)} V† e^{−iH0 t2}|i>
// from the corner block of a block-triangular matrix exponential.
inline cplx dyson_second_order(const Eigen::MatrixXcd& h0, const Eigen::MatrixXcd& h1, const Eigen::MatrixXcd& v,
                               const Eigen::VectorXcd& psi, double t) {
    const Eigen::Index a = h0.rows(), b = h1.rows();
    Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(2 * a + b, 2 * a + b);
    const cplx mi(0.0, -1.0);
    big.block(0, 0, a, a) = mi * h0 * t;
    big.block(0, a, a, b) = mi * v * t;
    big.block(a, a, b, b) = mi * h1 * t;
    big.block(a, a + b, b, a) = mi * v.adjoint() * t;
    big.block(a + b, a + b, a, a) = mi * h0 * t;
    const Eigen::MatrixXcd e = big.exp();
    return psi.dot(e.block(0, a + b, a, a) * psi);
}

inline cplx em1(cplx z) {
    const double s = std::sin(0.5 * z.imag());
    return {std::expm1(z.real()) * std::cos(z.imag()) - 2.0 * s * s, std::exp(z.real()) * std::sin(z.imag())};
}

// Σ_j w_j Σ_n h_n e^{i(ω − λ_j) t_n} dt: the trapezoid transform of
// c(t) = Σ_j w_j e^{−iλ_j t} on a uniform grid, via geometric sums.
inline double pole_transform(const Eigen::VectorXcd& poles, const Eigen::VectorXcd& residues, double omega,
                             double dt, std::size_t n_steps) {
    cplx total = 0.0;
    for (Eigen::Index j = 0; j < poles.size(); ++j) {
        const cplx theta = cplx(0.0, 1.0) * (omega - poles(j)) * dt;
        const cplx zn = std::exp(theta * static_cast<double>(n_steps));
        const cplx geom = std::abs(theta) < 1e-300 ? cplx(static_cast<double>(n_steps + 1))
                                                   : em1(theta * static_cast<double>(n_steps + 1)) / em1(theta);
        total += residues(j) * (geom - 0.5 - 0.5 * zn);
    }
    return total.real() * dt;
}

} // namespace ref
