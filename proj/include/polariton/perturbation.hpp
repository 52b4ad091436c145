// perturbation.hpp: 1/N expansion of the survival amplitude and
// radiative-pumping rates from the single-molecule coupling.
#pragma once

#include "polariton/cute.hpp"
#include "polariton/dynamics.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace polariton {

// Exact uses H^(0)_{1_k}; Shifted replaces it by H^(0)_0 + ω_g,k (N ≫ 1).
enum class BlockModel { Exact, Shifted };

struct ExpansionResult {
    TimeGrid grid;
    std::vector<cplx> c1_t;           // <i|e^{−iH0 t}|i>
    std::vector<cplx> c_corr_t;       // second-order term in v
    std::vector<cplx> scaled_corr_t;  // N·c_corr_t
    MoleculeCount n = MoleculeCount::infinite();
};

// psi0 is a vector over block 0 ({|1>, |e_1>..|e_m>}). For N = ∞ the
// correction is identically zero. Leakage κ is included in every block.
ExpansionResult survival_correction(const VibronicStructure& vs, const CavityParams& cav, const Eigen::VectorXcd& psi0,
                                    const TimeGrid& grid, BlockModel model = BlockModel::Exact);

// Same, for a state given on the full basis of an assembled Hamiltonian;
// throws std::invalid_argument if more than 1e-12 of its weight lies outside block 0.
ExpansionResult survival_correction(const BlockHamiltonian& bh, const VibronicStructure& vs, const CavityParams& cav,
                                    const Eigen::VectorXcd& psi_full, const TimeGrid& grid,
                                    BlockModel model = BlockModel::Exact);

// PhotonWeighted: final states are eigenstates of H^(0)_{1_k} − iκ/2·n_ph, so
// each carries width κ times its photon weight. Uniform: Hermitian final
// states, each broadened by the full κ.
enum class FinalStateWidth { PhotonWeighted, Uniform };

struct RateChannel {
    std::size_t k = 0;           // ground-state vibronic index of the phonon left behind
    std::size_t final_index = 0; // eigenstate of the block-1_k Hamiltonian
    double final_energy = 0.0;
    double final_width = 0.0;
    double contribution = 0.0;
};

struct RateResult {
    std::size_t dark_index = 0;
    double dark_energy = 0.0;
    double photon_weight = 0.0;
    double gamma_total = 0.0;    // radiative pumping only
    double direct_leakage = 0.0; // κ·|<1|D>|², reported separately
    std::vector<RateChannel> channels;
    std::string diagnostic;
};

inline constexpr double kDarkThreshold = 1e-3;

// Γ = −2 Im Σ_k <D|v_{0,k} (E_D − H_{1_k,eff})⁻¹ v_{0,k}†|D>.
RateResult radiative_pumping_rate(const VibronicStructure& vs, const CavityParams& cav, std::size_t dark_index,
                                  double dark_threshold = kDarkThreshold,
                                  FinalStateWidth width = FinalStateWidth::PhotonWeighted);

// H^(0)_0 eigenstate indices with photon weight below the threshold, ascending energy.
std::vector<std::size_t> dark_states(const VibronicStructure& vs, const CavityParams& cav,
                                     double threshold = kDarkThreshold);

// Σ_k v_{0,k} (E − H_{1_k,eff})⁻¹ v_{0,k}†: the effective block-0 operator at
// second order in v. Exposed for Raman-type rates; not validated.
Eigen::MatrixXcd second_order_coupling(const VibronicStructure& vs, const CavityParams& cav, double energy);

} // namespace polariton
