// vibronic.hpp: single-molecule displaced-oscillator model, vibronic
// energies and Franck–Condon overlaps.
#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace polariton {

// One harmonic vibrational mode shared by the ground and excited surfaces.
// The excited surface is displaced by sqrt(2 s) in dimensionless coordinates.
struct VibrationalMode {
    double frequency = 0.0;   // ω_ν (hartree)
    double huang_rhys = 0.0;  // s
    int n_max = 0;            // highest vibrational quantum kept

    void validate() const;
    double excited_minimum() const; // position of the excited-surface minimum
};

// ω₀ is the adiabatic (0–0) electronic gap. Zero modes gives a two-level molecule.
struct MolecularModel {
    double electronic_gap = 0.0;
    std::vector<VibrationalMode> modes;

    void validate() const;
};

// Vibronic eigenstates of both electronic surfaces, indexed identically:
// index i carries the same quanta vector on g and e.
struct VibronicStructure {
    std::vector<double> omega_g;             // omega_g[0] == 0
    std::vector<double> omega_e;
    Eigen::MatrixXd fc;                      // fc(i, j) = <φ^(e)_i | φ^(g)_j>
    std::vector<std::vector<int>> quanta;    // quanta[i][mode]
    std::vector<VibrationalMode> modes;
    double electronic_gap = 0.0;

    std::size_t size() const noexcept { return omega_g.size(); }
};

inline constexpr std::size_t kDefaultMaxVibronicBasis = 4096;

// Throws GuardError when ∏(n_max + 1) exceeds max_basis.
VibronicStructure build_vibronic(const MolecularModel& model,
                                 std::size_t max_basis = kDefaultMaxVibronicBasis);

// Overlap matrix <χ_m(q - d)|χ_n(q)> for one mode, d = sqrt(2 s).
Eigen::MatrixXd displaced_overlaps(double huang_rhys, int n_max);

// Normalised harmonic-oscillator eigenfunctions χ_0..χ_{n_max} at q
// (dimensionless coordinate, ω = 1 units).
std::vector<double> oscillator_eigenfunctions(int n_max, double q);

} // namespace polariton
