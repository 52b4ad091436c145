// dynamics.hpp: time propagation under Hermitian or leaky Hamiltonians,
// survival amplitudes, optical-filter response and vibronic densities.
#pragma once

#include "polariton/cute.hpp"
#include "polariton/sparse.hpp"
#include "polariton/vibronic.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace polariton {

// Uniform grid t_n = n·dt, n = 0..n_steps.
struct TimeGrid {
    double t_max = 0.0;
    std::size_t n_steps = 0;

    void validate() const;
    double dt() const { return t_max / static_cast<double>(n_steps); }
    double time(std::size_t n) const { return static_cast<double>(n) * dt(); }
    std::size_t samples() const { return n_steps + 1; }
    double resolution() const; // Δω = 2π / t_max
};

struct Trajectory {
    TimeGrid grid;
    std::vector<cplx> c_t;               // <ψ0|ψ(t)>
    std::vector<double> norm_t;          // ‖ψ(t)‖
    std::vector<Eigen::VectorXcd> states; // filled only on request
    std::string method;
};

enum class PropagationMethod { Auto, Spectral, Krylov };

struct PropagateOptions {
    PropagationMethod method = PropagationMethod::Auto;
    bool store_states = false;
    double krylov_tolerance = 1e-12; // per-step error target
    int krylov_max_dim = 40;
};

// Evolves psi0 under H − iκ/2·n_ph. H must be Hermitian and psi0 normalised.
// Spectral propagation for dim <= 4096, Krylov stepping above.
Trajectory propagate(const Eigen::MatrixXcd& h, const Eigen::VectorXd& photon_number, const Eigen::VectorXcd& psi0,
                     const TimeGrid& grid, double kappa, const PropagateOptions& options = {});
Trajectory propagate(const SparseMatrix& h, const Eigen::VectorXd& photon_number, const Eigen::VectorXcd& psi0,
                     const TimeGrid& grid, double kappa, const PropagateOptions& options = {});

// Unit vector with a one at `index`.
Eigen::VectorXcd basis_vector(std::size_t dim, std::size_t index);

// D(t) = −i <1|exp(−i H0_eff t)|1> on the grid, leakage included.
std::vector<cplx> filter_response(const VibronicStructure& vs, const CavityParams& cav, const TimeGrid& grid);

// One eigenstate of H0 resolved into its excited-manifold vibronic content.
struct VibronicDensity {
    std::size_t eigen_index = 0;
    double energy = 0.0;
    double photon_weight = 0.0;
    double excited_weight = 0.0;
    Eigen::VectorXcd excited_amplitudes;              // over |e_1>..|e_m>
    std::vector<std::vector<double>> quanta_marginals; // [mode][n], sums to excited_weight
};

// Eigenstates are indexed in ascending energy order.
VibronicDensity dark_state_density(const VibronicStructure& vs, const CavityParams& cav, std::size_t eigen_index);

// Reduced density along one mode coordinate on the excited surface:
// ρ(q) = Σ_others |Σ_n c(n, others) χ_n(q − d)|².
std::vector<double> coordinate_density(const VibronicStructure& vs, const Eigen::VectorXcd& excited_amplitudes,
                                       std::size_t mode, std::span<const double> q_grid);

// Photonic weights |<1|ψ_j>|² of the H0 eigenstates, ascending energy.
std::vector<double> photonic_weights(const VibronicStructure& vs, const CavityParams& cav);

} // namespace polariton
