// fockspace.hpp: permutation-symmetric occupation basis and the
// second-quantised image of one-body molecular operators.
#pragma once

#include "polariton/sparse.hpp"

#include <Eigen/Dense>

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace polariton {

// |n_g; n_e; n_ph>: molecule counts per ground/excited vibronic state plus
// the photon number.
struct SymState {
    std::vector<int> n_g;
    std::vector<int> n_e;
    int n_ph = 0;

    int molecules() const;
    int excitations() const;
    int quasi() const; // ground-state molecules carrying vibrational quanta

    auto operator<=>(const SymState&) const = default;
};

// Internally the state is a vector of bosonic registers: 0..m-1 for the
// ground manifold, m..2m-1 for the excited manifold, 2m for the photon.
struct Register {
    static std::size_t ground(std::size_t i) { return i; }
    static std::size_t excited(std::size_t m, std::size_t i) { return m + i; }
    static std::size_t photon(std::size_t m) { return 2 * m; }
};

int occupation(const SymState& s, std::size_t reg);
int& occupation(SymState& s, std::size_t reg);

inline constexpr std::size_t kDefaultMaxBasisStates = 4'000'000;

class SymBasis {
public:
    SymBasis() = default;

    // All states with the given N and N_exc and quasi <= q_max, ordered by
    // ascending quasi, descending photon number, then descending
    // lexicographic n_g and n_e.
    static SymBasis enumerate(int n_molecules, int n_exc, int m, int q_max,
                              std::size_t max_states = kDefaultMaxBasisStates);

    // Arbitrary state list (kept in the given order). Used for bases that mix
    // excitation numbers. n_molecules/n_exc are reported as -1 when mixed.
    static SymBasis from_states(std::vector<SymState> states);

    std::size_t size() const noexcept { return states_.size(); }
    const SymState& state(std::size_t p) const { return states_.at(p); }
    const std::vector<SymState>& states() const noexcept { return states_; }
    std::optional<std::size_t> find(const SymState& s) const;
    int block_of(std::size_t p) const { return states_.at(p).quasi(); }

    int n_molecules() const noexcept { return n_molecules_; }
    int n_exc() const noexcept { return n_exc_; }
    int m() const noexcept { return m_; }
    int q_max() const noexcept { return q_max_; }

    // Global indices grouped by quasi value 0..max present.
    std::vector<std::vector<std::size_t>> blocks() const;

    // Photon number of every state, as a diagonal.
    Eigen::VectorXd photon_number() const;

private:
    std::vector<SymState> states_;
    std::map<SymState, std::size_t> index_;
    int n_molecules_ = -1;
    int n_exc_ = -1;
    int m_ = 0;
    int q_max_ = 0;
};

// Count of enumerate(...) without materialising it.
std::size_t count_basis(int n_molecules, int n_exc, int m, int q_max);

// One ladder operator. With unit_factor set the bosonic √n factor is
// replaced by 1 (the macroscopically occupied register in the N → ∞ limit).
struct Ladder {
    std::size_t reg = 0;
    bool create = false;
    bool unit_factor = false;
};

// coeff · ops[0] ops[1] ... ops[k-1]; the rightmost operator acts first.
struct FockTerm {
    cplx coeff{};
    std::vector<Ladder> ops;
};

// Matrix of Σ terms between two bases: element (to_index, from_index).
// Images that fall outside `to` are dropped (truncation).
SparseMatrix apply_terms(const std::vector<FockTerm>& terms, const SymBasis& from, const SymBasis& to);

// Σ_ij o_ij β†_i β_j for a 2m × 2m one-body matrix over (g_1..g_m, e_1..e_m).
SparseMatrix map_operator(const Eigen::MatrixXcd& one_body, const SymBasis& basis);
SparseMatrix map_operator(const Eigen::MatrixXcd& one_body, const SymBasis& from, const SymBasis& to);

struct Violation {
    std::size_t row = 0;
    std::size_t col = 0;
    std::string reason;
};

struct ConservationReport {
    std::vector<Violation> violations;
    std::size_t inter_block_elements = 0; // entries with |Δquasi| == 1

    bool ok() const noexcept { return violations.empty(); }
};

// Flags entries (|value| > tol) that change N or N_exc, or move quasi by 2+.
ConservationReport conserved_check(const SymBasis& basis, const SparseMatrix& h, double tol = 0.0);

} // namespace polariton
