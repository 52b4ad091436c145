// config.hpp: run configuration in INI-style sections with strict key checking.
#pragma once

#include "polariton/cute.hpp"
#include "polariton/dynamics.hpp"
#include "polariton/perturbation.hpp"
#include "polariton/spectrum.hpp"
#include "polariton/vibronic.hpp"

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace polariton {

enum class Task { Spectrum, Dynamics, Rate, Densities, Validate };
enum class Method { Cute0, Cute1, CuteQ, ExactN, Oracle, Infinite };

std::string to_string(Task t);
std::string to_string(Method m);
Task parse_task(const std::string& name); // throws ConfigError

struct RunConfig {
    Task task = Task::Dynamics;
    Method method = Method::Cute1;
    int cute_order = 1; // q_max for CuteQ (1 for Cute1, 0 for Cute0)

    MolecularModel molecule;
    CavityParams cavity;
    TimeGrid grid{1000.0, 1000};

    // photon | excited:<i> | eigen:<j> (1-based i, 0-based j)
    std::string initial = "photon";
    bool expansion = false;
    std::size_t max_dim = 4'000'000;

    SpectrumOptions spectrum{0.0, 0.2, 2001, Window::HalfCosineTail, 0.1};

    std::optional<std::size_t> dark_index; // default: lowest dark state
    double dark_threshold = kDarkThreshold;
    FinalStateWidth final_width = FinalStateWidth::PhotonWeighted;

    std::vector<std::string> density_states{"lp", "dark"};
    std::size_t density_mode = 0; // 0-based
    double q_min = -4.0;
    double q_max = 10.0;
    std::size_t n_q = 281;

    double validate_tolerance = 1e-8;

    // Method/task compatibility and parameter ranges; throws ConfigError.
    void check() const;
    // "section.key = value" lines describing every resolved parameter.
    std::vector<std::string> describe() const;
};

// Unknown sections or keys raise ConfigError naming "section.key".
RunConfig parse_config(std::istream& in, Task task);
RunConfig load_config(const std::filesystem::path& path, Task task);

} // namespace polariton
