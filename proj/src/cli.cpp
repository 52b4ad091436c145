#include "polariton/cli.hpp"

#include "polariton/errors.hpp"
#include "polariton/io.hpp"
#include "polariton/linalg.hpp"
#include "polariton/oracle.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <climits>
#include <functional>
#include <optional>
#include <sstream>

namespace polariton {

using Index = Eigen::Index;

double ValidationReport::max_deviation() const {
    double d = std::max({hamiltonian_deviation, swap_commutator, survival_deviation, symmetric_leakage, hermiticity});
    if (conservation_violations > 0) d = std::max(d, 1.0);
    return d;
}

namespace {

struct System {
    SparseMatrix h;
    Eigen::VectorXd photon_number;
    std::vector<std::size_t> block0; // global indices of |1>, |e_1>..|e_m>
    // oracle runs carry the symmetrizer to lift block-0 states
    std::optional<Symmetrizer> sym;
};

System build_system(const RunConfig& cfg, const VibronicStructure& vs) {
    System s;
    const std::size_t m = vs.size();
    switch (cfg.method) {
    case Method::Cute0:
    case Method::Infinite: {
        s.h = SparseMatrix::from_dense(build_H0(vs, cfg.cavity));
        s.photon_number = Eigen::VectorXd::Zero(static_cast<Index>(m + 1));
        s.photon_number(0) = 1.0;
        for (std::size_t i = 0; i <= m; ++i) s.block0.push_back(i);
        break;
    }
    case Method::Cute1:
    case Method::CuteQ:
    case Method::ExactN: {
        int q = cfg.cute_order;
        if (cfg.method == Method::ExactN) q = static_cast<int>(std::min<long>(cfg.cavity.n.value(), INT_MAX));
        auto bh = assemble_truncated(vs, cfg.cavity, q, cfg.max_dim);
        s.h = std::move(bh.matrix);
        s.photon_number = bh.basis.photon_number();
        s.block0 = bh.labels.front();
        break;
    }
    case Method::Oracle: {
        const auto basis = TensorBasis::build(static_cast<int>(cfg.cavity.n.value()), static_cast<int>(m), 1);
        s.h = build_full_H(vs, cfg.cavity, basis);
        s.photon_number = basis.photon_number();
        s.sym.emplace(basis);
        s.block0 = s.sym->sym_basis().blocks().front();
        break;
    }
    }
    return s;
}

Eigen::VectorXcd block0_state(const RunConfig& cfg, const VibronicStructure& vs) {
    const std::size_t m = vs.size();
    const auto& init = cfg.initial;
    if (init == "photon") return basis_vector(m + 1, 0);
    const auto parse_index = [&](std::size_t prefix) -> long {
        try {
            std::size_t used = 0;
            const long v = std::stol(init.substr(prefix), &used);
            if (used != init.size() - prefix) throw std::invalid_argument(init);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("run.initial", "invalid initial state '" + init + "'");
        }
    };
    if (init.rfind("excited:", 0) == 0) {
        const long i = parse_index(8);
        if (i < 1 || static_cast<std::size_t>(i) > m) throw ConfigError("run.initial", "excited index out of range 1..m");
        return basis_vector(m + 1, static_cast<std::size_t>(i));
    }
    if (init.rfind("eigen:", 0) == 0) {
        const long j = parse_index(6);
        if (j < 0 || static_cast<std::size_t>(j) > m) throw ConfigError("run.initial", "eigenstate index out of range 0..m");
        return diagonalize_hermitian(build_H0(vs, cfg.cavity)).vectors.col(j);
    }
    throw ConfigError("run.initial", "unknown initial state '" + init + "'");
}

Eigen::VectorXcd embed(const System& s, const Eigen::VectorXcd& local) {
    if (s.sym) {
        Eigen::VectorXcd sym_state = Eigen::VectorXcd::Zero(static_cast<Index>(s.sym->sym_basis().size()));
        for (std::size_t i = 0; i < s.block0.size(); ++i) sym_state(static_cast<Index>(s.block0[i])) = local(static_cast<Index>(i));
        return s.sym->lift(sym_state);
    }
    Eigen::VectorXcd full = Eigen::VectorXcd::Zero(static_cast<Index>(s.h.rows()));
    for (std::size_t i = 0; i < s.block0.size(); ++i) full(static_cast<Index>(s.block0[i])) = local(static_cast<Index>(i));
    return full;
}

std::string render(const std::function<void(std::ostream&)>& fn) {
    std::ostringstream os;
    fn(os);
    return os.str();
}

std::size_t resolve_dark(const RunConfig& cfg, const VibronicStructure& vs) {
    if (cfg.dark_index) return *cfg.dark_index;
    const auto dark = dark_states(vs, cfg.cavity, cfg.dark_threshold);
    if (dark.empty()) throw GuardError("no H0 eigenstate has photon weight below " + format_number(cfg.dark_threshold));
    return dark.front();
}

std::size_t resolve_state(const std::string& name, const RunConfig& cfg, const VibronicStructure& vs) {
    if (name == "lp") return 0;
    if (name == "dark") {
        const auto dark = dark_states(vs, cfg.cavity, cfg.dark_threshold);
        if (dark.empty()) throw GuardError("no H0 eigenstate has photon weight below " + format_number(cfg.dark_threshold));
        return dark.front();
    }
    try {
        std::size_t used = 0;
        const long v = std::stol(name, &used);
        if (used != name.size() || v < 0) throw std::invalid_argument(name);
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw ConfigError("densities.states", "invalid state selector '" + name + "'");
    }
}

} // namespace

ValidationReport validate_against_oracle(const RunConfig& cfg) {
    const auto vs = build_vibronic(cfg.molecule);
    const int n = static_cast<int>(cfg.cavity.n.value());
    const int m = static_cast<int>(vs.size());
    ValidationReport r;

    const auto basis = TensorBasis::build(n, m, 1);
    const SparseMatrix full = build_full_H(vs, cfg.cavity, basis);
    const Symmetrizer sym(basis);
    const auto bh = assemble_truncated(vs, cfg.cavity, n, cfg.max_dim);
    r.hamiltonian_deviation = (sym.project(full) - bh.matrix).max_abs();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const SparseMatrix p = swap_operator(basis, i, j);
            r.swap_commutator = std::max(r.swap_commutator, (full * p - p * full).max_abs());
        }
    }
    r.hermiticity = (bh.matrix - bh.matrix.adjoint()).max_abs();
    r.conservation_violations = conserved_check(bh.basis, bh.matrix).violations.size();

    Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(static_cast<Index>(bh.dim()));
    psi0(static_cast<Index>(bh.labels.front().front())) = 1.0;
    const auto cute = propagate(bh.matrix, bh.photon_number(), psi0, cfg.grid, cfg.cavity.kappa);
    const auto oracle = oracle_survival(vs, cfg.cavity, 1, psi0, cfg.grid, cfg.cavity.kappa);
    for (std::size_t t = 0; t < cute.c_t.size(); ++t) {
        r.survival_deviation = std::max(r.survival_deviation, std::abs(cute.c_t[t] - oracle.trajectory.c_t[t]));
    }
    r.symmetric_leakage = oracle.max_symmetric_leakage;
    return r;
}

std::vector<std::filesystem::path> run(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log) {
    cfg.check();
    std::filesystem::create_directories(out_dir);
    const auto header = cfg.describe();
    const auto vs = build_vibronic(cfg.molecule);
    std::vector<std::filesystem::path> written;
    const auto emit = [&](const std::string& name, const std::string& content) {
        const auto path = out_dir / name;
        write_atomic(path, content);
        written.push_back(path);
        log << "wrote " << path.string() << '\n';
    };

    switch (cfg.task) {
    case Task::Spectrum:
    case Task::Dynamics: {
        const System sys = build_system(cfg, vs);
        const Eigen::VectorXcd local = cfg.task == Task::Spectrum ? basis_vector(vs.size() + 1, 0) : block0_state(cfg, vs);
        const auto traj = propagate(sys.h, sys.photon_number, embed(sys, local), cfg.grid, cfg.cavity.kappa);
        auto head = header;
        head.push_back("propagation = " + traj.method);
        if (cfg.task == Task::Spectrum) {
            const auto s = spectrum(traj.c_t, cfg.grid, cfg.spectrum);
            emit("spectrum.csv", render([&](std::ostream& os) { write_spectrum_csv(os, s, head); }));
            for (const auto& p : find_peaks(s, traj.c_t, cfg.grid, 0.05, cfg.spectrum.tail_fraction)) {
                log << "peak omega=" << format_number(p.omega) << " height=" << format_number(p.height) << '\n';
            }
        } else {
            emit("trajectory.csv", render([&](std::ostream& os) { write_trajectory_csv(os, traj, head); }));
            if (cfg.expansion) {
                const auto ex = survival_correction(vs, cfg.cavity, local, cfg.grid);
                emit("expansion.csv", render([&](std::ostream& os) { write_expansion_csv(os, ex, header); }));
            }
        }
        break;
    }
    case Task::Rate: {
        const auto r = radiative_pumping_rate(vs, cfg.cavity, resolve_dark(cfg, vs), cfg.dark_threshold, cfg.final_width);
        emit("rates.json", rate_json(r, header));
        log << "Gamma_total=" << format_number(r.gamma_total) << '\n';
        if (!r.diagnostic.empty()) log << "diagnostic: " << r.diagnostic << '\n';
        break;
    }
    case Task::Densities: {
        std::vector<VibronicDensity> dens;
        for (const auto& name : cfg.density_states) dens.push_back(dark_state_density(vs, cfg.cavity, resolve_state(name, cfg, vs)));
        std::vector<double> q(cfg.n_q);
        for (std::size_t i = 0; i < cfg.n_q; ++i) {
            q[i] = cfg.q_min + (cfg.q_max - cfg.q_min) * static_cast<double>(i) / static_cast<double>(cfg.n_q - 1);
        }
        std::vector<std::vector<double>> rho;
        for (const auto& d : dens) rho.push_back(coordinate_density(vs, d.excited_amplitudes, cfg.density_mode, q));
        auto head = header;
        for (const auto& d : dens) {
            head.push_back("state " + std::to_string(d.eigen_index) + ": energy = " + format_number(d.energy) +
                           ", photon_weight = " + format_number(d.photon_weight));
        }
        emit("densities.csv", render([&](std::ostream& os) {
                 write_header(os, head);
                 os << 'q';
                 for (const auto& d : dens) os << ",state_" << d.eigen_index;
                 os << '\n';
                 for (std::size_t i = 0; i < q.size(); ++i) {
                     os << format_number(q[i]);
                     for (const auto& r : rho) os << ',' << format_number(r[i]);
                     os << '\n';
                 }
             }));
        emit("quanta.csv", render([&](std::ostream& os) {
                 write_header(os, head);
                 os << "mode,n";
                 for (const auto& d : dens) os << ",state_" << d.eigen_index;
                 os << '\n';
                 for (std::size_t mode = 0; mode < vs.modes.size(); ++mode) {
                     for (int nq = 0; nq <= vs.modes[mode].n_max; ++nq) {
                         os << mode + 1 << ',' << nq;
                         for (const auto& d : dens) os << ',' << format_number(d.quanta_marginals[mode][static_cast<std::size_t>(nq)]);
                         os << '\n';
                     }
                 }
             }));
        break;
    }
    case Task::Validate: {
        const auto r = validate_against_oracle(cfg);
        log << "hamiltonian_deviation=" << format_number(r.hamiltonian_deviation) << '\n'
            << "swap_commutator=" << format_number(r.swap_commutator) << '\n'
            << "survival_deviation=" << format_number(r.survival_deviation) << '\n'
            << "symmetric_leakage=" << format_number(r.symmetric_leakage) << '\n'
            << "hermiticity=" << format_number(r.hermiticity) << '\n'
            << "conservation_violations=" << r.conservation_violations << '\n'
            << "max deviation: " << format_number(r.max_deviation()) << '\n';
        if (!(r.max_deviation() < cfg.validate_tolerance)) {
            throw GuardError("validation failed: max deviation " + format_number(r.max_deviation()) + " >= " +
                             format_number(cfg.validate_tolerance));
        }
        break;
    }
    }
    return written;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"polariton: collective light-matter dynamics of molecular ensembles in a cavity"};
    app.require_subcommand(1, 1);
    std::string config_path;
    std::string out_dir = ".";
    for (Task t : {Task::Spectrum, Task::Dynamics, Task::Rate, Task::Densities, Task::Validate}) {
        auto* sub = app.add_subcommand(to_string(t));
        sub->add_option("--config", config_path, "run configuration file")->required();
        sub->add_option("--out", out_dir, "output directory");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    try {
        const Task task = parse_task(app.get_subcommands().front()->get_name());
        const RunConfig cfg = load_config(config_path, task);
        run(cfg, out_dir, out);
        return 0;
    } catch (const ConfigError& e) {
        err << "config error [" << e.key() << "]: " << e.what() << '\n';
        return 2;
    } catch (const GuardError& e) {
        err << "guard: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace polariton
