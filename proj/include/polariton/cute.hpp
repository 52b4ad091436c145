// cute.hpp: collective/single-molecule partition of the polariton
// Hamiltonian and its block-tridiagonal assembly.
#pragma once

#include "polariton/fockspace.hpp"
#include "polariton/sparse.hpp"
#include "polariton/vibronic.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace polariton {

// Molecule number with a first-class infinite sentinel (g√N held fixed).
class MoleculeCount {
public:
    static MoleculeCount finite(long n);
    static MoleculeCount infinite() { return MoleculeCount(); }

    bool is_infinite() const noexcept { return value_ == 0; }
    long value() const; // throws for the infinite sentinel

    bool operator==(const MoleculeCount&) const = default;

private:
    MoleculeCount() = default;
    explicit MoleculeCount(long n) : value_(n) {}
    long value_ = 0;
};

struct CavityParams {
    double omega_c = 0.0;
    double g_sqrt_n = 0.0;  // collective coupling g√N
    MoleculeCount n = MoleculeCount::infinite();
    double kappa = 0.0;     // cavity leakage rate

    void validate() const;
    // g = g√N/√N; zero for the infinite sentinel.
    double single_coupling() const;
};

// H^(0)_0: arrowhead over {|1>, |e_1>..|e_m>}.
Eigen::MatrixXcd build_H0(const VibronicStructure& vs, const CavityParams& cav);

// H^(0)_{1_k} over {|g_k 1>, |g_k e_1>..|g_k e_m>}; k is the 0-based
// vibronic index of the ground-state vibrational excitation (1 <= k < m).
// For N = ∞ this is exactly H0 + ω_g,k·I.
Eigen::MatrixXcd build_H1k(const VibronicStructure& vs, const CavityParams& cav, std::size_t k);

// v_{0,k}: rows index block 0, columns index sub-block 1_k. Throws for N = ∞.
Eigen::MatrixXcd build_v0k(const VibronicStructure& vs, const CavityParams& cav, std::size_t k);

struct BlockHamiltonian {
    std::vector<Eigen::MatrixXcd> blocks;    // diagonal blocks
    std::vector<Eigen::MatrixXcd> couplings; // couplings[q]: rows block q, cols block q+1
    SymBasis basis;
    std::vector<std::vector<std::size_t>> labels; // global basis indices of each block
    SparseMatrix matrix;                     // full operator in basis order
    bool infinite = false;

    std::size_t dim() const noexcept { return basis.size(); }
    Eigen::MatrixXcd dense() const { return matrix.to_dense(); }
    Eigen::VectorXd photon_number() const { return basis.photon_number(); }
};

inline constexpr std::size_t kDefaultMaxHamiltonianDim = 4'000'000;

// Second-quantised term lists. With `infinite` set the collective terms use
// g√N and a unit bosonic factor on the g_1 register; the single-molecule
// terms vanish.
std::vector<FockTerm> bare_energy_terms(const VibronicStructure& vs, const CavityParams& cav);
std::vector<FockTerm> collective_terms(const VibronicStructure& vs, const CavityParams& cav);
std::vector<FockTerm> single_molecule_terms(const VibronicStructure& vs, const CavityParams& cav);

// Full H = H^(0) + v restricted to quasi <= q_max in the N_exc = 1 manifold.
// For N = ∞ the basis is built with a placeholder molecule count large
// enough to realise every state, and all couplings between blocks vanish.
BlockHamiltonian assemble_truncated(const VibronicStructure& vs, const CavityParams& cav, int q_max,
                                    std::size_t max_dim = kDefaultMaxHamiltonianDim);

// H^(0)_0(N_exc): zero-temperature collective Hamiltonian over states with no
// vibrationally excited ground-state molecules. Blocks are indexed by photon
// number, from N_exc down to 0.
BlockHamiltonian assemble_high_excitation(const VibronicStructure& vs, const CavityParams& cav, int n_exc,
                                          std::size_t max_dim = 4096);

} // namespace polariton
