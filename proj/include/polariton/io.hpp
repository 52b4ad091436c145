// io.hpp: deterministic CSV/JSON emitters and atomic file output.
#pragma once

#include "polariton/dynamics.hpp"
#include "polariton/perturbation.hpp"
#include "polariton/spectrum.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace polariton {

// Writes to "<path>.tmp" and renames over path.
void write_atomic(const std::filesystem::path& path, const std::string& content);

// Shortest round-trip decimal representation (17 significant digits).
std::string format_number(double x);

// Each header line is emitted as "# <line>".
void write_header(std::ostream& out, const std::vector<std::string>& header);

// t,re_c,im_c,norm
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const std::vector<std::string>& header);
// omega,intensity
void write_spectrum_csv(std::ostream& out, const Spectrum& s, const std::vector<std::string>& header);
// t,re_c1,im_c1,re_corr,im_corr,re_scaled,im_scaled
void write_expansion_csv(std::ostream& out, const ExpansionResult& r, const std::vector<std::string>& header);

// {dark_index, E_D, Gamma_total, channels: [...]} plus the run header.
std::string rate_json(const RateResult& r, const std::vector<std::string>& header);

} // namespace polariton
