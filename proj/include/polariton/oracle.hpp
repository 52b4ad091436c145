// oracle.hpp: brute-force reference on the distinguishable-molecule tensor
// basis, with projection onto the permutation-symmetric subspace.
#pragma once

#include "polariton/cute.hpp"
#include "polariton/dynamics.hpp"
#include "polariton/fockspace.hpp"
#include "polariton/sparse.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

namespace polariton {

inline constexpr int kOracleMaxMolecules = 4;
inline constexpr int kOracleMaxExcitations = 2;
inline constexpr std::size_t kOracleMaxDim = 1'000'000;

// labels[i] in 0..m-1: molecule i in ground vibronic state labels[i];
// m..2m-1: excited vibronic state labels[i] - m.
struct TensorConfig {
    std::vector<int> labels;
    int n_ph = 0;
};

class TensorBasis {
public:
    // Every configuration with #excited + n_ph == n_exc, lexicographic in labels.
    static TensorBasis build(int n_molecules, int m, int n_exc, std::size_t max_dim = kOracleMaxDim);

    std::size_t size() const noexcept { return configs_.size(); }
    const TensorConfig& config(std::size_t p) const { return configs_.at(p); }
    std::optional<std::size_t> find(const std::vector<int>& labels) const;
    int n_molecules() const noexcept { return n_molecules_; }
    int m() const noexcept { return m_; }
    int n_exc() const noexcept { return n_exc_; }
    Eigen::VectorXd photon_number() const;

private:
    std::vector<TensorConfig> configs_;
    std::vector<long> lookup_; // dense code -> index, -1 when excluded
    int n_molecules_ = 0;
    int m_ = 0;
    int n_exc_ = 0;
};

// ω_c a†a + Σ_i h_mol(i) + g Σ_i Σ_jk fc(j,k) (|e_j><g_k|_i a + h.c.), g = g√N/√N.
// cav.n must be finite and equal to the basis molecule count.
SparseMatrix build_full_H(const VibronicStructure& vs, const CavityParams& cav, const TensorBasis& basis);

// Exchange of molecules i and j as a permutation matrix.
SparseMatrix swap_operator(const TensorBasis& basis, int i, int j);

// Isometry W whose columns are the normalised symmetrised configurations,
// ordered as SymBasis::enumerate(N, N_exc, m, q_max = N).
class Symmetrizer {
public:
    explicit Symmetrizer(const TensorBasis& basis);

    const SymBasis& sym_basis() const noexcept { return sym_; }
    const SparseMatrix& isometry() const noexcept { return w_; }

    Eigen::VectorXcd project(const Eigen::VectorXcd& tensor_state) const; // W† ψ
    Eigen::VectorXcd lift(const Eigen::VectorXcd& sym_state) const;       // W φ
    SparseMatrix project(const SparseMatrix& tensor_operator) const;      // W† O W
    double asymmetric_norm(const Eigen::VectorXcd& tensor_state) const;   // ‖(1 − W W†) ψ‖

private:
    SymBasis sym_;
    SparseMatrix w_;
    Eigen::SparseMatrix<cplx> w_eigen_;
};

struct OracleTrajectory {
    Trajectory trajectory;
    double max_symmetric_leakage = 0.0;
};

// psi0_sym is given on the symmetric basis (Symmetrizer ordering) and lifted.
OracleTrajectory oracle_survival(const VibronicStructure& vs, const CavityParams& cav, int n_exc,
                                 const Eigen::VectorXcd& psi0_sym, const TimeGrid& grid, double kappa);

// Tensor-basis input; throws std::invalid_argument for a permutation-asymmetric state.
OracleTrajectory oracle_survival_tensor(const VibronicStructure& vs, const CavityParams& cav, int n_exc,
                                        const Eigen::VectorXcd& psi0_tensor, const TimeGrid& grid, double kappa);

} // namespace polariton
