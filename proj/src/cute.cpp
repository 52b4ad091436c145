#include "polariton/cute.hpp"

#include "polariton/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace polariton {

MoleculeCount MoleculeCount::finite(long n) {
    if (n < 1) throw std::invalid_argument("molecule count must be >= 1");
    return MoleculeCount(n);
}

long MoleculeCount::value() const {
    if (is_infinite()) throw std::domain_error("molecule count is the infinite sentinel");
    return value_;
}

void CavityParams::validate() const {
    if (!std::isfinite(omega_c)) throw std::invalid_argument("cavity frequency must be finite");
    if (!(g_sqrt_n >= 0.0) || !std::isfinite(g_sqrt_n)) {
        throw std::invalid_argument("collective coupling g*sqrt(N) must be non-negative");
    }
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("kappa must be non-negative");
}

double CavityParams::single_coupling() const {
    if (n.is_infinite()) return 0.0;
    return g_sqrt_n / std::sqrt(static_cast<double>(n.value()));
}

namespace {

using Index = Eigen::Index;

void check_k(const VibronicStructure& vs, std::size_t k) {
    if (k < 1 || k >= vs.size()) {
        throw std::out_of_range("ground vibronic index k=" + std::to_string(k) + " outside [1, " +
                                std::to_string(vs.size()) + ")");
    }
}

Eigen::MatrixXcd arrowhead(const VibronicStructure& vs, double omega_c, double coupling, double shift) {
    const auto m = static_cast<Index>(vs.size());
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(m + 1, m + 1);
    h(0, 0) = omega_c + shift;
    for (Index i = 0; i < m; ++i) {
        h(i + 1, i + 1) = vs.omega_e[static_cast<std::size_t>(i)] + shift;
        h(i + 1, 0) = coupling * vs.fc(i, 0);
        h(0, i + 1) = coupling * vs.fc(i, 0);
    }
    return h;
}

} // namespace

Eigen::MatrixXcd build_H0(const VibronicStructure& vs, const CavityParams& cav) {
    cav.validate();
    return arrowhead(vs, cav.omega_c, cav.g_sqrt_n, 0.0);
}

Eigen::MatrixXcd build_H1k(const VibronicStructure& vs, const CavityParams& cav, std::size_t k) {
    cav.validate();
    check_k(vs, k);
    double coupling = cav.g_sqrt_n;
    if (!cav.n.is_infinite()) {
        coupling = cav.single_coupling() * std::sqrt(static_cast<double>(cav.n.value() - 1));
    }
    return arrowhead(vs, cav.omega_c, coupling, vs.omega_g[k]);
}

Eigen::MatrixXcd build_v0k(const VibronicStructure& vs, const CavityParams& cav, std::size_t k) {
    cav.validate();
    check_k(vs, k);
    if (cav.n.is_infinite()) {
        throw std::domain_error("single-molecule coupling v_0k does not exist for N = infinity");
    }
    const auto m = static_cast<Index>(vs.size());
    const double g = cav.single_coupling();
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(m + 1, m + 1);
    for (Index i = 0; i < m; ++i) v(i + 1, 0) = g * vs.fc(i, static_cast<Index>(k));
    return v;
}

std::vector<FockTerm> bare_energy_terms(const VibronicStructure& vs, const CavityParams& cav) {
    const std::size_t m = vs.size();
    std::vector<FockTerm> terms;
    terms.push_back({cav.omega_c, {{Register::photon(m), true}, {Register::photon(m), false}}});
    for (std::size_t i = 0; i < m; ++i) {
        if (vs.omega_g[i] != 0.0) {
            terms.push_back({vs.omega_g[i], {{Register::ground(i), true}, {Register::ground(i), false}}});
        }
        terms.push_back({vs.omega_e[i], {{Register::excited(m, i), true}, {Register::excited(m, i), false}}});
    }
    return terms;
}

std::vector<FockTerm> collective_terms(const VibronicStructure& vs, const CavityParams& cav) {
    const std::size_t m = vs.size();
    const bool inf = cav.n.is_infinite();
    const double g = inf ? cav.g_sqrt_n : cav.single_coupling();
    std::vector<FockTerm> terms;
    for (std::size_t i = 0; i < m; ++i) {
        const double amp = g * vs.fc(static_cast<Index>(i), 0);
        if (amp == 0.0) continue;
        // B†_i b_1 a and its adjoint B_i b†_1 a†
        terms.push_back({amp,
                         {{Register::excited(m, i), true}, {Register::ground(0), false, inf}, {Register::photon(m), false}}});
        terms.push_back({amp,
                         {{Register::excited(m, i), false}, {Register::ground(0), true, inf}, {Register::photon(m), true}}});
    }
    return terms;
}

std::vector<FockTerm> single_molecule_terms(const VibronicStructure& vs, const CavityParams& cav) {
    std::vector<FockTerm> terms;
    if (cav.n.is_infinite()) return terms;
    const std::size_t m = vs.size();
    const double g = cav.single_coupling();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 1; j < m; ++j) {
            const double amp = g * vs.fc(static_cast<Index>(i), static_cast<Index>(j));
            if (amp == 0.0) continue;
            terms.push_back({amp,
                             {{Register::excited(m, i), true}, {Register::ground(j), false}, {Register::photon(m), false}}});
            terms.push_back({amp,
                             {{Register::excited(m, i), false}, {Register::ground(j), true}, {Register::photon(m), true}}});
        }
    }
    return terms;
}

namespace {

// Fill dense blocks and inter-block couplings from the sparse operator.
void split_blocks(BlockHamiltonian& bh) {
    const std::size_t n_blocks = bh.labels.size();
    std::vector<std::size_t> block_of(bh.basis.size());
    std::vector<std::size_t> local(bh.basis.size());
    for (std::size_t b = 0; b < n_blocks; ++b) {
        if (bh.labels[b].size() > kMaxDenseDim) return; // sparse operator only
        for (std::size_t l = 0; l < bh.labels[b].size(); ++l) {
            block_of[bh.labels[b][l]] = b;
            local[bh.labels[b][l]] = l;
        }
    }
    bh.blocks.clear();
    bh.couplings.clear();
    for (std::size_t b = 0; b < n_blocks; ++b) {
        const auto n = static_cast<Index>(bh.labels[b].size());
        bh.blocks.push_back(Eigen::MatrixXcd::Zero(n, n));
        if (b + 1 < n_blocks) {
            bh.couplings.push_back(Eigen::MatrixXcd::Zero(n, static_cast<Index>(bh.labels[b + 1].size())));
        }
    }
    for (const auto& t : bh.matrix.entries()) {
        const std::size_t br = block_of[t.row];
        const std::size_t bc = block_of[t.col];
        const auto lr = static_cast<Index>(local[t.row]);
        const auto lc = static_cast<Index>(local[t.col]);
        if (br == bc) {
            bh.blocks[br](lr, lc) = t.value;
        } else if (bc == br + 1) {
            bh.couplings[br](lr, lc) = t.value;
        } else if (br != bc + 1) {
            throw GuardError("assembled operator couples non-adjacent blocks " + std::to_string(br) + " and " +
                             std::to_string(bc));
        }
    }
}

std::vector<FockTerm> concat(std::vector<FockTerm> a, const std::vector<FockTerm>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

} // namespace

BlockHamiltonian assemble_truncated(const VibronicStructure& vs, const CavityParams& cav, int q_max,
                                    std::size_t max_dim) {
    cav.validate();
    if (q_max < 0) throw std::invalid_argument("assemble_truncated: q_max must be >= 0");
    const int m = static_cast<int>(vs.size());

    BlockHamiltonian bh;
    bh.infinite = cav.n.is_infinite();
    int n_mol = 0;
    int q = q_max;
    if (bh.infinite) {
        n_mol = q_max + 2; // every state keeps at least one molecule in g_1
    } else {
        if (cav.n.value() > 1'000'000'000L) throw GuardError("molecule count too large for an explicit basis");
        n_mol = static_cast<int>(cav.n.value());
        q = std::min(q_max, n_mol);
    }
    const std::size_t expected = count_basis(n_mol, 1, m, q);
    if (expected > max_dim) {
        throw GuardError("truncated Hamiltonian dimension " + std::to_string(expected) + " exceeds cap " +
                         std::to_string(max_dim));
    }
    bh.basis = SymBasis::enumerate(n_mol, 1, m, q, max_dim);
    auto terms = concat(bare_energy_terms(vs, cav), collective_terms(vs, cav));
    terms = concat(std::move(terms), single_molecule_terms(vs, cav));
    bh.matrix = apply_terms(terms, bh.basis, bh.basis);
    bh.labels = bh.basis.blocks();
    split_blocks(bh);
    return bh;
}

BlockHamiltonian assemble_high_excitation(const VibronicStructure& vs, const CavityParams& cav, int n_exc,
                                          std::size_t max_dim) {
    cav.validate();
    if (n_exc < 1) throw std::invalid_argument("assemble_high_excitation: N_exc must be >= 1");
    const int m = static_cast<int>(vs.size());

    BlockHamiltonian bh;
    bh.infinite = cav.n.is_infinite();
    int n_mol = n_exc + 1;
    if (!bh.infinite) {
        if (cav.n.value() > 1'000'000'000L) throw GuardError("molecule count too large for an explicit basis");
        n_mol = static_cast<int>(cav.n.value());
    }
    const std::size_t expected = count_basis(n_mol, n_exc, m, 0);
    if (expected > max_dim) {
        throw GuardError("high-excitation block dimension " + std::to_string(expected) + " exceeds cap " +
                         std::to_string(max_dim));
    }
    bh.basis = SymBasis::enumerate(n_mol, n_exc, m, 0, max_dim);
    bh.matrix = apply_terms(concat(bare_energy_terms(vs, cav), collective_terms(vs, cav)), bh.basis, bh.basis);

    // Group by photon number, N_exc first; enumeration order keeps them contiguous.
    for (std::size_t p = 0; p < bh.basis.size(); ++p) {
        const int n_ph = bh.basis.state(p).n_ph;
        const auto b = static_cast<std::size_t>(n_exc - n_ph);
        if (bh.labels.size() <= b) bh.labels.resize(b + 1);
        bh.labels[b].push_back(p);
    }
    std::erase_if(bh.labels, [](const auto& l) { return l.empty(); });
    split_blocks(bh);
    return bh;
}

} // namespace polariton
