// cli.hpp: task pipelines behind the polariton command.
#pragma once

#include "polariton/config.hpp"

#include <filesystem>
#include <ostream>
#include <vector>

namespace polariton {

struct ValidationReport {
    double hamiltonian_deviation = 0.0; // symmetrised tensor H vs assembled H
    double swap_commutator = 0.0;       // max ‖[H, P_ij]‖
    double survival_deviation = 0.0;    // max_t |c_oracle − c_cute|
    double symmetric_leakage = 0.0;
    double hermiticity = 0.0;
    std::size_t conservation_violations = 0;

    double max_deviation() const;
};

// Oracle-vs-assembled cross-check at the configured N (<= 4).
ValidationReport validate_against_oracle(const RunConfig& cfg);

// Runs one task, writing its outputs into out_dir. Returns the written files.
std::vector<std::filesystem::path> run(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);

// Exit codes: 0 success, 1 numerical guard or runtime failure, 2 config error.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace polariton
