#include "polariton/perturbation.hpp"

#include "polariton/divided_difference.hpp"
#include "polariton/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace polariton {

using Index = Eigen::Index;

namespace {

Eigen::VectorXd photon_first(Index dim) {
    Eigen::VectorXd n = Eigen::VectorXd::Zero(dim);
    n(0) = 1.0;
    return n;
}

SpectralDecomposition decompose_checked(const Eigen::MatrixXcd& h, const char* what) {
    auto sd = decompose(h);
    if (sd.residual > 1e-9) {
        throw std::runtime_error(std::string("eigendecomposition of ") + what + " is ill-conditioned");
    }
    return sd;
}

} // namespace

ExpansionResult survival_correction(const VibronicStructure& vs, const CavityParams& cav, const Eigen::VectorXcd& psi0,
                                    const TimeGrid& grid, BlockModel model) {
    cav.validate();
    grid.validate();
    const auto m = static_cast<Index>(vs.size());
    if (psi0.size() != m + 1) throw std::invalid_argument("survival_correction: psi0 must live on block 0 (size m + 1)");
    if (std::abs(psi0.norm() - 1.0) > 1e-10) throw std::invalid_argument("survival_correction: psi0 must be normalised");

    const Eigen::MatrixXcd h0 = with_leakage(build_H0(vs, cav), photon_first(m + 1), cav.kappa);
    const auto sd0 = decompose_checked(h0, "H0");
    const Eigen::VectorXcd left0 = sd0.right.adjoint() * psi0; // conj of <i|R0>
    const Eigen::VectorXcd right0 = sd0.inverse * psi0;        // R0⁻¹|i>
    const Eigen::VectorXcd x0 = cplx(0.0, -1.0) * sd0.values;

    ExpansionResult out;
    out.grid = grid;
    out.n = cav.n;
    const std::size_t samples = grid.samples();
    out.c1_t.resize(samples);
    for (std::size_t s = 0; s < samples; ++s) {
        const double t = grid.time(s);
        cplx c{};
        for (Index a = 0; a <= m; ++a) c += std::conj(left0(a)) * right0(a) * std::exp(x0(a) * t);
        out.c1_t[s] = c;
    }
    out.c_corr_t.assign(samples, cplx{});
    out.scaled_corr_t.assign(samples, cplx{});
    if (cav.n.is_infinite()) return out;

    for (std::size_t k = 1; k < vs.size(); ++k) {
        const Eigen::MatrixXcd v = build_v0k(vs, cav, k);
        Eigen::VectorXcd x1;
        Eigen::MatrixXcd r1, r1_inv;
        if (model == BlockModel::Shifted) {
            x1 = x0 + Eigen::VectorXcd::Constant(m + 1, cplx(0.0, -vs.omega_g[k]));
            r1 = sd0.right;
            r1_inv = sd0.inverse;
        } else {
            const Eigen::MatrixXcd h1 = with_leakage(build_H1k(vs, cav, k), photon_first(m + 1), cav.kappa);
            const auto sd1 = decompose_checked(h1, "H1k");
            x1 = cplx(0.0, -1.0) * sd1.values;
            r1 = sd1.right;
            r1_inv = sd1.inverse;
        }
        const Eigen::MatrixXcd mid_left = sd0.inverse * v * r1;               // R0⁻¹ v R1
        const Eigen::MatrixXcd mid_right = r1_inv * v.adjoint() * sd0.right;  // R1⁻¹ v† R0
        const Index d1 = x1.size();
        // A_abc = <i|R0>_a (R0⁻¹ v R1)_ab (R1⁻¹ v† R0)_bc (R0⁻¹|i>)_c
        std::vector<cplx> coeff(static_cast<std::size_t>((m + 1) * d1 * (m + 1)));
        std::size_t idx = 0;
        for (Index a = 0; a <= m; ++a)
            for (Index b = 0; b < d1; ++b)
                for (Index c = 0; c <= m; ++c)
                    coeff[idx++] = std::conj(left0(a)) * mid_left(a, b) * mid_right(b, c) * right0(c);
        for (std::size_t s = 0; s < samples; ++s) {
            const double t = grid.time(s);
            cplx sum{};
            idx = 0;
            for (Index a = 0; a <= m; ++a)
                for (Index b = 0; b < d1; ++b)
                    for (Index c = 0; c <= m; ++c) {
                        const cplx w = coeff[idx++];
                        if (w != cplx{}) sum += w * exp_divided_difference(x0(a), x1(b), x0(c), t);
                    }
            out.c_corr_t[s] -= sum;
        }
    }
    const double n = static_cast<double>(cav.n.value());
    for (std::size_t s = 0; s < samples; ++s) out.scaled_corr_t[s] = n * out.c_corr_t[s];
    return out;
}

ExpansionResult survival_correction(const BlockHamiltonian& bh, const VibronicStructure& vs, const CavityParams& cav,
                                    const Eigen::VectorXcd& psi_full, const TimeGrid& grid, BlockModel model) {
    if (psi_full.size() != static_cast<Index>(bh.dim())) {
        throw std::invalid_argument("survival_correction: state does not match the assembled basis");
    }
    if (bh.labels.empty()) throw std::invalid_argument("survival_correction: assembled Hamiltonian has no blocks");
    const auto& block0 = bh.labels.front();
    if (block0.size() != vs.size() + 1) throw std::invalid_argument("survival_correction: unexpected block-0 size");
    Eigen::VectorXcd psi0(static_cast<Index>(block0.size()));
    for (std::size_t i = 0; i < block0.size(); ++i) psi0(static_cast<Index>(i)) = psi_full(static_cast<Index>(block0[i]));
    const double outside = psi_full.squaredNorm() - psi0.squaredNorm();
    if (outside > 1e-12) {
        throw std::invalid_argument("survival_correction: initial state leaks outside block 0 (weight " +
                                    std::to_string(outside) + ")");
    }
    return survival_correction(vs, cav, psi0, grid, model);
}

std::vector<std::size_t> dark_states(const VibronicStructure& vs, const CavityParams& cav, double threshold) {
    const auto w = photonic_weights(vs, cav);
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < w.size(); ++j)
        if (w[j] < threshold) out.push_back(j);
    return out;
}

RateResult radiative_pumping_rate(const VibronicStructure& vs, const CavityParams& cav, std::size_t dark_index,
                                  double dark_threshold, FinalStateWidth width) {
    cav.validate();
    if (cav.n.is_infinite()) throw std::invalid_argument("radiative_pumping_rate: requires finite N");
    if (!(cav.kappa > 0.0)) throw std::invalid_argument("radiative_pumping_rate: requires kappa > 0");
    const auto m = static_cast<Index>(vs.size());
    const auto es = diagonalize_hermitian(build_H0(vs, cav));
    if (dark_index >= static_cast<std::size_t>(es.values.size())) {
        throw std::out_of_range("radiative_pumping_rate: dark index out of range");
    }
    const auto j = static_cast<Index>(dark_index);
    const Eigen::VectorXcd dark = es.vectors.col(j);

    RateResult r;
    r.dark_index = dark_index;
    r.dark_energy = es.values(j);
    r.photon_weight = std::norm(dark(0));
    if (r.photon_weight >= dark_threshold) {
        throw std::invalid_argument("radiative_pumping_rate: eigenstate " + std::to_string(dark_index) +
                                    " is not dark (photon weight " + std::to_string(r.photon_weight) + ")");
    }
    r.direct_leakage = cav.kappa * r.photon_weight;

    for (std::size_t k = 1; k < vs.size(); ++k) {
        const Eigen::MatrixXcd v = build_v0k(vs, cav, k);
        const Eigen::MatrixXcd h1 = build_H1k(vs, cav, k);
        if (width == FinalStateWidth::Uniform) {
            const auto e1 = diagonalize_hermitian(h1);
            const Eigen::VectorXcd amp = e1.vectors.adjoint() * (v.adjoint() * dark);
            for (Index f = 0; f < amp.size(); ++f) {
                const double de = r.dark_energy - e1.values(f);
                const double c = std::norm(amp(f)) * cav.kappa / (de * de + 0.25 * cav.kappa * cav.kappa);
                r.channels.push_back({k, static_cast<std::size_t>(f), e1.values(f), cav.kappa, c});
                r.gamma_total += c;
            }
        } else {
            const auto sd = decompose_checked(with_leakage(h1, photon_first(m + 1), cav.kappa), "H1k");
            const Eigen::VectorXcd bra = sd.right.adjoint() * (v.adjoint() * dark); // conj of <D|v R>
            const Eigen::VectorXcd ket = sd.inverse * (v.adjoint() * dark);
            for (Index f = 0; f < ket.size(); ++f) {
                const cplx g = std::conj(bra(f)) * ket(f) / (r.dark_energy - sd.values(f));
                const double c = -2.0 * g.imag();
                r.channels.push_back(
                    {k, static_cast<std::size_t>(f), sd.values(f).real(), -2.0 * sd.values(f).imag(), c});
                r.gamma_total += c;
            }
        }
    }
    if (!(r.gamma_total > 0.0)) {
        r.gamma_total = 0.0;
        r.diagnostic = "no final states couple to the dark state";
    }
    return r;
}

Eigen::MatrixXcd second_order_coupling(const VibronicStructure& vs, const CavityParams& cav, double energy) {
    cav.validate();
    const auto m = static_cast<Index>(vs.size());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m + 1, m + 1);
    if (cav.n.is_infinite()) return out;
    for (std::size_t k = 1; k < vs.size(); ++k) {
        const Eigen::MatrixXcd v = build_v0k(vs, cav, k);
        const Eigen::MatrixXcd h1 = with_leakage(build_H1k(vs, cav, k), photon_first(m + 1), cav.kappa);
        const Eigen::MatrixXcd resolvent_arg = energy * Eigen::MatrixXcd::Identity(m + 1, m + 1) - h1;
        out += v * resolvent_arg.partialPivLu().solve(v.adjoint());
    }
    return out;
}

} // namespace polariton
