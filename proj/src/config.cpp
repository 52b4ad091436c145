#include "polariton/config.hpp"

#include "polariton/errors.hpp"
#include "polariton/io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace polariton {

namespace pt = boost::property_tree;

std::string to_string(Task t) {
    switch (t) {
    case Task::Spectrum: return "spectrum";
    case Task::Dynamics: return "dynamics";
    case Task::Rate: return "rate";
    case Task::Densities: return "densities";
    case Task::Validate: return "validate";
    }
    return "?";
}

std::string to_string(Method m) {
    switch (m) {
    case Method::Cute0: return "cute0";
    case Method::Cute1: return "cute1";
    case Method::CuteQ: return "cuteq";
    case Method::ExactN: return "exactN";
    case Method::Oracle: return "oracle";
    case Method::Infinite: return "infinite";
    }
    return "?";
}

Task parse_task(const std::string& name) {
    for (Task t : {Task::Spectrum, Task::Dynamics, Task::Rate, Task::Densities, Task::Validate})
        if (to_string(t) == name) return t;
    throw ConfigError("task", "unknown task '" + name + "'");
}

namespace {

const std::map<std::string, std::set<std::string>> kSections = {
    {"molecule", {"electronic_gap"}},
    {"cavity", {"omega_c", "g_sqrt_N", "N", "kappa"}},
    {"grid", {"t_max", "n_steps"}},
    {"run", {"method", "initial", "expansion", "max_dim"}},
    {"spectrum", {"omega_min", "omega_max", "n_omega", "window", "tail_fraction"}},
    {"rate", {"dark_index", "threshold", "final_width"}},
    {"densities", {"states", "mode", "q_min", "q_max", "n_q"}},
    {"validate", {"tolerance"}},
};
const std::set<std::string> kModeKeys = {"frequency", "huang_rhys", "n_max"};

std::optional<int> mode_number(const std::string& section) {
    if (section.size() <= 4 || section.compare(0, 4, "mode") != 0) return std::nullopt;
    const auto digits = section.substr(4);
    if (!std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); })) return std::nullopt;
    if (digits[0] == '0') return std::nullopt;
    return std::stoi(digits);
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& raw) {
    const auto v = trim(raw);
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size() || !std::isfinite(x)) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError(key, "invalid number for " + key + ": '" + v + "'");
    }
}

long to_long(const std::string& key, const std::string& raw) {
    const auto v = trim(raw);
    try {
        std::size_t used = 0;
        const long x = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError(key, "invalid integer for " + key + ": '" + v + "'");
    }
}

std::size_t to_count(const std::string& key, const std::string& raw) {
    const long x = to_long(key, raw);
    if (x < 0) throw ConfigError(key, key + " must be non-negative");
    return static_cast<std::size_t>(x);
}

bool to_bool(const std::string& key, const std::string& raw) {
    const auto v = trim(raw);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key, "invalid boolean for " + key + ": '" + v + "'");
}

std::vector<std::string> split_list(const std::string& raw) {
    std::vector<std::string> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

} // namespace

RunConfig parse_config(std::istream& in, Task task) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("line " + std::to_string(e.line()), std::string("config syntax error: ") + e.message());
    }

    RunConfig cfg;
    cfg.task = task;
    std::map<int, VibrationalMode> modes;
    std::map<int, std::set<std::string>> mode_keys;
    bool have_gap = false, have_omega_c = false, have_g = false, have_n = false, have_method = false;
    bool n_infinite = false;
    long n_value = 0;

    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty()) {
            throw ConfigError(section, "key '" + section + "' outside any section");
        }
        const auto mode = mode_number(section);
        const bool known = kSections.count(section) > 0;
        if (!known && !mode) throw ConfigError(section, "unknown section [" + section + "]");
        for (const auto& [name, value] : body) {
            const std::string key = section + "." + name;
            const auto& allowed = mode ? kModeKeys : kSections.at(section);
            if (!allowed.count(name)) throw ConfigError(key, "unknown key " + key);
            const std::string raw = value.data();
            if (mode) {
                auto& vm = modes[*mode];
                mode_keys[*mode].insert(name);
                if (name == "frequency") vm.frequency = to_double(key, raw);
                else if (name == "huang_rhys") vm.huang_rhys = to_double(key, raw);
                else vm.n_max = static_cast<int>(to_long(key, raw));
            } else if (section == "molecule") {
                cfg.molecule.electronic_gap = to_double(key, raw);
                have_gap = true;
            } else if (section == "cavity") {
                if (name == "omega_c") { cfg.cavity.omega_c = to_double(key, raw); have_omega_c = true; }
                else if (name == "g_sqrt_N") { cfg.cavity.g_sqrt_n = to_double(key, raw); have_g = true; }
                else if (name == "kappa") cfg.cavity.kappa = to_double(key, raw);
                else {
                    have_n = true;
                    const auto v = trim(raw);
                    if (v == "inf" || v == "infinity") n_infinite = true;
                    else n_value = to_long(key, raw);
                }
            } else if (section == "grid") {
                if (name == "t_max") cfg.grid.t_max = to_double(key, raw);
                else cfg.grid.n_steps = to_count(key, raw);
            } else if (section == "run") {
                const auto v = trim(raw);
                if (name == "method") {
                    have_method = true;
                    if (v == "cute0") { cfg.method = Method::Cute0; cfg.cute_order = 0; }
                    else if (v == "cute1") { cfg.method = Method::Cute1; cfg.cute_order = 1; }
                    else if (v.rfind("cuteq:", 0) == 0) {
                        cfg.method = Method::CuteQ;
                        const long q = to_long(key, v.substr(6));
                        if (q < 0) throw ConfigError(key, "cuteq order must be >= 0");
                        cfg.cute_order = static_cast<int>(q);
                    } else if (v == "exactN") cfg.method = Method::ExactN;
                    else if (v == "oracle") cfg.method = Method::Oracle;
                    else if (v == "infinite") cfg.method = Method::Infinite;
                    else throw ConfigError(key, "unknown method '" + v + "'");
                } else if (name == "initial") cfg.initial = v;
                else if (name == "expansion") cfg.expansion = to_bool(key, raw);
                else cfg.max_dim = to_count(key, raw);
            } else if (section == "spectrum") {
                if (name == "omega_min") cfg.spectrum.omega_min = to_double(key, raw);
                else if (name == "omega_max") cfg.spectrum.omega_max = to_double(key, raw);
                else if (name == "n_omega") cfg.spectrum.n_omega = to_count(key, raw);
                else if (name == "tail_fraction") cfg.spectrum.tail_fraction = to_double(key, raw);
                else {
                    const auto v = trim(raw);
                    if (v == "none") cfg.spectrum.window = Window::None;
                    else if (v == "half-cosine-tail") cfg.spectrum.window = Window::HalfCosineTail;
                    else throw ConfigError(key, "unknown window '" + v + "'");
                }
            } else if (section == "rate") {
                if (name == "dark_index") cfg.dark_index = to_count(key, raw);
                else if (name == "threshold") cfg.dark_threshold = to_double(key, raw);
                else {
                    const auto v = trim(raw);
                    if (v == "photon-weighted") cfg.final_width = FinalStateWidth::PhotonWeighted;
                    else if (v == "uniform") cfg.final_width = FinalStateWidth::Uniform;
                    else throw ConfigError(key, "unknown final_width '" + v + "'");
                }
            } else if (section == "densities") {
                if (name == "states") cfg.density_states = split_list(raw);
                else if (name == "mode") {
                    const std::size_t mode1 = to_count(key, raw);
                    if (mode1 < 1) throw ConfigError(key, "densities.mode is 1-based");
                    cfg.density_mode = mode1 - 1;
                } else if (name == "q_min") cfg.q_min = to_double(key, raw);
                else if (name == "q_max") cfg.q_max = to_double(key, raw);
                else cfg.n_q = to_count(key, raw);
            } else if (section == "validate") {
                cfg.validate_tolerance = to_double(key, raw);
            }
        }
    }

    if (!have_gap) throw ConfigError("molecule.electronic_gap", "missing required key molecule.electronic_gap");
    if (!have_omega_c) throw ConfigError("cavity.omega_c", "missing required key cavity.omega_c");
    if (!have_g) throw ConfigError("cavity.g_sqrt_N", "missing required key cavity.g_sqrt_N");
    if (!have_method) throw ConfigError("run.method", "missing required key run.method");
    int expected = 1;
    for (const auto& [k, vm] : modes) {
        if (k != expected++) throw ConfigError("mode" + std::to_string(k), "mode sections must be numbered 1, 2, ...");
        for (const auto& req : kModeKeys)
            if (!mode_keys[k].count(req)) {
                throw ConfigError("mode" + std::to_string(k) + "." + req, "missing required key mode" +
                                                                             std::to_string(k) + "." + req);
            }
        cfg.molecule.modes.push_back(vm);
    }

    if (cfg.method == Method::Infinite) {
        if (have_n && !n_infinite) throw ConfigError("cavity.N", "method infinite requires cavity.N = inf");
        cfg.cavity.n = MoleculeCount::infinite();
    } else {
        if (!have_n) throw ConfigError("cavity.N", "missing required key cavity.N");
        if (n_infinite) cfg.cavity.n = MoleculeCount::infinite();
        else {
            if (n_value < 1) throw ConfigError("cavity.N", "cavity.N must be >= 1 or inf");
            cfg.cavity.n = MoleculeCount::finite(n_value);
        }
    }
    cfg.check();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path, Task task) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open config file " + path.string());
    return parse_config(in, task);
}

void RunConfig::check() const {
    const auto wrap = [](const char* key, auto&& fn) {
        try {
            fn();
        } catch (const ConfigError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            throw ConfigError(key, std::string(key) + ": " + e.what());
        }
    };
    wrap("molecule", [&] { molecule.validate(); });
    wrap("cavity", [&] { cavity.validate(); });
    wrap("grid", [&] { grid.validate(); });

    const bool finite = !cavity.n.is_infinite();
    const long n = finite ? cavity.n.value() : 0;
    if (method == Method::ExactN && !finite) throw ConfigError("run.method", "exactN requires finite cavity.N");
    if (method == Method::Oracle && (!finite || n > 4)) throw ConfigError("run.method", "oracle requires cavity.N <= 4");
    if (expansion && !(method == Method::Cute0 || method == Method::Cute1 || method == Method::CuteQ)) {
        throw ConfigError("run.expansion", "expansion requires a cute method");
    }
    switch (task) {
    case Task::Rate:
        if (method == Method::Infinite || method == Method::Oracle) {
            throw ConfigError("run.method", "task rate is not available with method " + to_string(method));
        }
        if (!finite) throw ConfigError("cavity.N", "task rate requires finite cavity.N");
        if (!(cavity.kappa > 0.0)) throw ConfigError("cavity.kappa", "task rate requires cavity.kappa > 0");
        break;
    case Task::Validate:
        if (!finite || n > 4) throw ConfigError("cavity.N", "task validate requires cavity.N <= 4");
        break;
    case Task::Spectrum:
        wrap("spectrum", [&] { spectrum.validate(); });
        break;
    case Task::Densities:
        if (density_mode >= molecule.modes.size()) throw ConfigError("densities.mode", "densities.mode out of range");
        if (n_q < 2 || !(q_max > q_min)) throw ConfigError("densities.n_q", "density grid needs n_q >= 2 and q_max > q_min");
        break;
    case Task::Dynamics:
        break;
    }
}

std::vector<std::string> RunConfig::describe() const {
    std::vector<std::string> out;
    const auto add = [&](const std::string& k, const std::string& v) { out.push_back(k + " = " + v); };
    const auto num = [](double x) { return format_number(x); };
    add("task", to_string(task));
    add("run.method", method == Method::CuteQ ? "cuteq:" + std::to_string(cute_order) : to_string(method));
    add("run.initial", initial);
    add("run.expansion", expansion ? "true" : "false");
    add("run.max_dim", std::to_string(max_dim));
    add("molecule.electronic_gap", num(molecule.electronic_gap));
    for (std::size_t i = 0; i < molecule.modes.size(); ++i) {
        const auto p = "mode" + std::to_string(i + 1) + ".";
        add(p + "frequency", num(molecule.modes[i].frequency));
        add(p + "huang_rhys", num(molecule.modes[i].huang_rhys));
        add(p + "n_max", std::to_string(molecule.modes[i].n_max));
    }
    add("cavity.omega_c", num(cavity.omega_c));
    add("cavity.g_sqrt_N", num(cavity.g_sqrt_n));
    add("cavity.N", cavity.n.is_infinite() ? "inf" : std::to_string(cavity.n.value()));
    add("cavity.kappa", num(cavity.kappa));
    add("grid.t_max", num(grid.t_max));
    add("grid.n_steps", std::to_string(grid.n_steps));
    add("grid.dt", num(grid.dt()));
    add("grid.resolution", num(grid.resolution()));
    switch (task) {
    case Task::Spectrum:
        add("spectrum.omega_min", num(spectrum.omega_min));
        add("spectrum.omega_max", num(spectrum.omega_max));
        add("spectrum.n_omega", std::to_string(spectrum.n_omega));
        add("spectrum.window", to_string(spectrum.window));
        add("spectrum.tail_fraction", num(spectrum.tail_fraction));
        break;
    case Task::Rate:
        add("rate.dark_index", dark_index ? std::to_string(*dark_index) : "lowest");
        add("rate.threshold", num(dark_threshold));
        add("rate.final_width", final_width == FinalStateWidth::Uniform ? "uniform" : "photon-weighted");
        break;
    case Task::Densities: {
        std::string states;
        for (const auto& s : density_states) states += (states.empty() ? "" : ",") + s;
        add("densities.states", states);
        add("densities.mode", std::to_string(density_mode + 1));
        add("densities.q_min", num(q_min));
        add("densities.q_max", num(q_max));
        add("densities.n_q", std::to_string(n_q));
        break;
    }
    case Task::Validate:
        add("validate.tolerance", num(validate_tolerance));
        break;
    case Task::Dynamics:
        break;
    }
    return out;
}

} // namespace polariton
