#include "polariton/oracle.hpp"

#include "polariton/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace polariton {

using Index = Eigen::Index;

namespace {

long encode(const std::vector<int>& labels, int base) {
    long code = 0;
    for (int l : labels) code = code * base + l;
    return code;
}

int excited_count(const std::vector<int>& labels, int m) {
    return static_cast<int>(std::count_if(labels.begin(), labels.end(), [m](int l) { return l >= m; }));
}

SymState to_sym(const TensorConfig& c, int m) {
    SymState s;
    s.n_g.assign(static_cast<std::size_t>(m), 0);
    s.n_e.assign(static_cast<std::size_t>(m), 0);
    for (int l : c.labels) {
        if (l < m) ++s.n_g[static_cast<std::size_t>(l)];
        else ++s.n_e[static_cast<std::size_t>(l - m)];
    }
    s.n_ph = c.n_ph;
    return s;
}

} // namespace

TensorBasis TensorBasis::build(int n_molecules, int m, int n_exc, std::size_t max_dim) {
    if (n_molecules < 1 || n_molecules > kOracleMaxMolecules) {
        throw std::invalid_argument("oracle: molecule count must be in 1.." + std::to_string(kOracleMaxMolecules));
    }
    if (n_exc < 0 || n_exc > kOracleMaxExcitations) {
        throw std::invalid_argument("oracle: N_exc must be in 0.." + std::to_string(kOracleMaxExcitations));
    }
    if (m < 1) throw std::invalid_argument("oracle: m must be >= 1");
    double raw = std::pow(2.0 * m, n_molecules);
    if (raw * (n_exc + 1) > static_cast<double>(max_dim)) {
        throw GuardError("oracle: tensor basis would exceed " + std::to_string(max_dim) + " states");
    }
    TensorBasis b;
    b.n_molecules_ = n_molecules;
    b.m_ = m;
    b.n_exc_ = n_exc;
    const long total = static_cast<long>(raw);
    b.lookup_.assign(static_cast<std::size_t>(total), -1);
    std::vector<int> labels(static_cast<std::size_t>(n_molecules), 0);
    for (long code = 0; code < total; ++code) {
        long rest = code;
        for (int i = n_molecules - 1; i >= 0; --i) {
            labels[static_cast<std::size_t>(i)] = static_cast<int>(rest % (2 * m));
            rest /= 2 * m;
        }
        const int exc = excited_count(labels, m);
        if (exc > n_exc) continue;
        b.lookup_[static_cast<std::size_t>(code)] = static_cast<long>(b.configs_.size());
        b.configs_.push_back({labels, n_exc - exc});
    }
    return b;
}

std::optional<std::size_t> TensorBasis::find(const std::vector<int>& labels) const {
    if (labels.size() != static_cast<std::size_t>(n_molecules_)) return std::nullopt;
    for (int l : labels)
        if (l < 0 || l >= 2 * m_) return std::nullopt;
    const long idx = lookup_[static_cast<std::size_t>(encode(labels, 2 * m_))];
    if (idx < 0) return std::nullopt;
    return static_cast<std::size_t>(idx);
}

Eigen::VectorXd TensorBasis::photon_number() const {
    Eigen::VectorXd n(static_cast<Index>(configs_.size()));
    for (std::size_t p = 0; p < configs_.size(); ++p) n(static_cast<Index>(p)) = configs_[p].n_ph;
    return n;
}

SparseMatrix build_full_H(const VibronicStructure& vs, const CavityParams& cav, const TensorBasis& basis) {
    cav.validate();
    if (cav.n.is_infinite() || cav.n.value() != basis.n_molecules()) {
        throw std::invalid_argument("oracle: cavity molecule count must equal the tensor basis N");
    }
    const int m = basis.m();
    if (static_cast<std::size_t>(m) != vs.size()) throw std::invalid_argument("oracle: basis m does not match vibronic size");
    const double g = cav.single_coupling();
    std::vector<Triplet> entries;
    for (std::size_t p = 0; p < basis.size(); ++p) {
        const auto& c = basis.config(p);
        double diag = cav.omega_c * c.n_ph;
        for (int l : c.labels) diag += l < m ? vs.omega_g[static_cast<std::size_t>(l)] : vs.omega_e[static_cast<std::size_t>(l - m)];
        entries.push_back({p, p, diag});
        if (c.n_ph == 0) continue;
        // g fc(j,k) |e_j><g_k|_i a, plus its adjoint
        auto labels = c.labels;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            const int k = c.labels[i];
            if (k >= m) continue;
            for (int j = 0; j < m; ++j) {
                const double amp = g * vs.fc(j, k) * std::sqrt(static_cast<double>(c.n_ph));
                if (amp == 0.0) continue;
                labels[i] = m + j;
                const auto q = basis.find(labels);
                labels[i] = k;
                if (!q) continue;
                entries.push_back({*q, p, amp});
                entries.push_back({p, *q, amp});
            }
        }
    }
    return SparseMatrix(basis.size(), basis.size(), std::move(entries));
}

SparseMatrix swap_operator(const TensorBasis& basis, int i, int j) {
    if (i < 0 || j < 0 || i >= basis.n_molecules() || j >= basis.n_molecules()) {
        throw std::out_of_range("swap_operator: molecule index out of range");
    }
    std::vector<Triplet> entries;
    for (std::size_t p = 0; p < basis.size(); ++p) {
        auto labels = basis.config(p).labels;
        std::swap(labels[static_cast<std::size_t>(i)], labels[static_cast<std::size_t>(j)]);
        entries.push_back({*basis.find(labels), p, 1.0});
    }
    return SparseMatrix(basis.size(), basis.size(), std::move(entries));
}

Symmetrizer::Symmetrizer(const TensorBasis& basis) {
    const int n = basis.n_molecules();
    sym_ = SymBasis::enumerate(n, basis.n_exc(), basis.m(), n);
    std::vector<std::vector<std::size_t>> orbits(sym_.size());
    for (std::size_t p = 0; p < basis.size(); ++p) {
        const auto idx = sym_.find(to_sym(basis.config(p), basis.m()));
        if (!idx) throw std::logic_error("symmetrizer: configuration has no symmetric counterpart");
        orbits[*idx].push_back(p);
    }
    std::vector<Triplet> entries;
    for (std::size_t s = 0; s < orbits.size(); ++s) {
        if (orbits[s].empty()) throw std::logic_error("symmetrizer: symmetric state without tensor configurations");
        const double norm = 1.0 / std::sqrt(static_cast<double>(orbits[s].size()));
        for (std::size_t p : orbits[s]) entries.push_back({p, s, norm});
    }
    w_ = SparseMatrix(basis.size(), sym_.size(), std::move(entries));
    w_eigen_ = w_.to_eigen();
}

Eigen::VectorXcd Symmetrizer::project(const Eigen::VectorXcd& tensor_state) const {
    if (tensor_state.size() != static_cast<Index>(w_.rows())) throw std::invalid_argument("symmetrizer: size mismatch");
    return w_eigen_.adjoint() * tensor_state;
}

Eigen::VectorXcd Symmetrizer::lift(const Eigen::VectorXcd& sym_state) const {
    if (sym_state.size() != static_cast<Index>(w_.cols())) throw std::invalid_argument("symmetrizer: size mismatch");
    return w_eigen_ * sym_state;
}

SparseMatrix Symmetrizer::project(const SparseMatrix& tensor_operator) const {
    return w_.adjoint() * tensor_operator * w_;
}

double Symmetrizer::asymmetric_norm(const Eigen::VectorXcd& tensor_state) const {
    return (tensor_state - lift(project(tensor_state))).norm();
}

namespace {

OracleTrajectory run(const VibronicStructure& vs, const CavityParams& cav, const TensorBasis& basis,
                     const Symmetrizer& sym, const Eigen::VectorXcd& psi0, const TimeGrid& grid, double kappa) {
    const SparseMatrix h = build_full_H(vs, cav, basis);
    PropagateOptions opt;
    opt.store_states = true;
    OracleTrajectory out;
    out.trajectory = propagate(h, basis.photon_number(), psi0, grid, kappa, opt);
    for (const auto& psi : out.trajectory.states) {
        out.max_symmetric_leakage = std::max(out.max_symmetric_leakage, sym.asymmetric_norm(psi));
    }
    out.trajectory.states.clear();
    out.trajectory.method = "oracle-" + out.trajectory.method;
    return out;
}

} // namespace

OracleTrajectory oracle_survival(const VibronicStructure& vs, const CavityParams& cav, int n_exc,
                                 const Eigen::VectorXcd& psi0_sym, const TimeGrid& grid, double kappa) {
    if (cav.n.is_infinite()) throw std::invalid_argument("oracle: requires finite N");
    const auto basis = TensorBasis::build(static_cast<int>(std::min<long>(cav.n.value(), kOracleMaxMolecules + 1)),
                                          static_cast<int>(vs.size()), n_exc);
    const Symmetrizer sym(basis);
    return run(vs, cav, basis, sym, sym.lift(psi0_sym), grid, kappa);
}

OracleTrajectory oracle_survival_tensor(const VibronicStructure& vs, const CavityParams& cav, int n_exc,
                                        const Eigen::VectorXcd& psi0_tensor, const TimeGrid& grid, double kappa) {
    if (cav.n.is_infinite()) throw std::invalid_argument("oracle: requires finite N");
    const auto basis = TensorBasis::build(static_cast<int>(std::min<long>(cav.n.value(), kOracleMaxMolecules + 1)),
                                          static_cast<int>(vs.size()), n_exc);
    const Symmetrizer sym(basis);
    if (psi0_tensor.size() != static_cast<Index>(basis.size())) throw std::invalid_argument("oracle: state size mismatch");
    const double asym = sym.asymmetric_norm(psi0_tensor);
    if (asym > 1e-12) {
        throw std::invalid_argument("oracle: initial state is not permutation symmetric (asymmetric norm " +
                                    std::to_string(asym) + ")");
    }
    return run(vs, cav, basis, sym, psi0_tensor, grid, kappa);
}

} // namespace polariton
