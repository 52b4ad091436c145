#include "polariton/fockspace.hpp"

#include "polariton/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace polariton {

namespace {

// Compositions of `total` into `parts` non-negative integers, in descending
// lexicographic order.
void compositions(int total, int parts, std::vector<int>& prefix, std::vector<std::vector<int>>& out) {
    if (parts == 0) {
        if (total == 0) out.push_back(prefix);
        return;
    }
    if (parts == 1) {
        prefix.push_back(total);
        out.push_back(prefix);
        prefix.pop_back();
        return;
    }
    for (int first = total; first >= 0; --first) {
        prefix.push_back(first);
        compositions(total - first, parts - 1, prefix, out);
        prefix.pop_back();
    }
}

std::vector<std::vector<int>> compositions(int total, int parts) {
    std::vector<std::vector<int>> out;
    std::vector<int> prefix;
    compositions(total, parts, prefix, out);
    return out;
}

double binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0.0;
    return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

// Number of ways to place `total` quanta into `parts` registers.
double n_compositions(int total, int parts) {
    if (parts == 0) return total == 0 ? 1.0 : 0.0;
    return binomial(total + parts - 1, parts - 1);
}

bool basis_order(const SymState& a, const SymState& b) {
    const int qa = a.quasi();
    const int qb = b.quasi();
    if (qa != qb) return qa < qb;
    if (a.n_ph != b.n_ph) return a.n_ph > b.n_ph;
    if (a.n_g != b.n_g) return a.n_g > b.n_g;
    return a.n_e > b.n_e;
}

} // namespace

int SymState::molecules() const {
    return std::accumulate(n_g.begin(), n_g.end(), 0) + std::accumulate(n_e.begin(), n_e.end(), 0);
}

int SymState::excitations() const { return std::accumulate(n_e.begin(), n_e.end(), 0) + n_ph; }

int SymState::quasi() const {
    return n_g.size() > 1 ? std::accumulate(n_g.begin() + 1, n_g.end(), 0) : 0;
}

int occupation(const SymState& s, std::size_t reg) {
    const std::size_t m = s.n_g.size();
    if (reg < m) return s.n_g[reg];
    if (reg < 2 * m) return s.n_e[reg - m];
    if (reg == 2 * m) return s.n_ph;
    throw std::out_of_range("occupation: register out of range");
}

int& occupation(SymState& s, std::size_t reg) {
    const std::size_t m = s.n_g.size();
    if (reg < m) return s.n_g[reg];
    if (reg < 2 * m) return s.n_e[reg - m];
    if (reg == 2 * m) return s.n_ph;
    throw std::out_of_range("occupation: register out of range");
}

std::size_t count_basis(int n_molecules, int n_exc, int m, int q_max) {
    double total = 0.0;
    for (int n_ph = n_exc; n_ph >= std::max(0, n_exc - n_molecules); --n_ph) {
        const int ne_tot = n_exc - n_ph;
        const int rest = n_molecules - ne_tot;
        double ground = 0.0;
        for (int q = 0; q <= std::min(q_max, rest); ++q) ground += n_compositions(q, m - 1);
        total += n_compositions(ne_tot, m) * ground;
    }
    if (total > 1e18) return static_cast<std::size_t>(-1);
    return static_cast<std::size_t>(total);
}

SymBasis SymBasis::enumerate(int n_molecules, int n_exc, int m, int q_max, std::size_t max_states) {
    if (n_molecules < 1 || n_exc < 0 || m < 1 || q_max < 0 || q_max > n_molecules) {
        throw std::invalid_argument("enumerate_basis: require N >= 1, N_exc >= 0, m >= 1, 0 <= q_max <= N");
    }
    const std::size_t expected = count_basis(n_molecules, n_exc, m, q_max);
    if (expected > max_states) {
        throw GuardError("symmetric basis would hold " + std::to_string(expected) + " states (cap " +
                         std::to_string(max_states) + ")");
    }

    std::vector<SymState> states;
    states.reserve(expected);
    for (int n_ph = n_exc; n_ph >= std::max(0, n_exc - n_molecules); --n_ph) {
        const int ne_tot = n_exc - n_ph;
        const int rest = n_molecules - ne_tot;
        const auto excited = compositions(ne_tot, m);
        for (int q = 0; q <= std::min(q_max, rest); ++q) {
            const auto tails = compositions(q, m - 1);
            for (const auto& tail : tails) {
                std::vector<int> n_g;
                n_g.reserve(static_cast<std::size_t>(m));
                n_g.push_back(rest - q);
                n_g.insert(n_g.end(), tail.begin(), tail.end());
                for (const auto& n_e : excited) states.push_back({n_g, n_e, n_ph});
            }
        }
    }
    std::sort(states.begin(), states.end(), basis_order);

    SymBasis basis = from_states(std::move(states));
    basis.n_molecules_ = n_molecules;
    basis.n_exc_ = n_exc;
    basis.m_ = m;
    basis.q_max_ = q_max;
    return basis;
}

SymBasis SymBasis::from_states(std::vector<SymState> states) {
    SymBasis basis;
    basis.states_ = std::move(states);
    if (basis.states_.empty()) return basis;
    basis.m_ = static_cast<int>(basis.states_.front().n_g.size());
    basis.n_molecules_ = basis.states_.front().molecules();
    basis.n_exc_ = basis.states_.front().excitations();
    for (std::size_t p = 0; p < basis.states_.size(); ++p) {
        const auto& s = basis.states_[p];
        if (static_cast<int>(s.n_g.size()) != basis.m_ || static_cast<int>(s.n_e.size()) != basis.m_) {
            throw std::invalid_argument("SymBasis: inconsistent vibronic dimension");
        }
        if (s.molecules() != basis.n_molecules_) basis.n_molecules_ = -1;
        if (s.excitations() != basis.n_exc_) basis.n_exc_ = -1;
        basis.q_max_ = std::max(basis.q_max_, s.quasi());
        if (!basis.index_.emplace(s, p).second) throw std::invalid_argument("SymBasis: duplicate state");
    }
    return basis;
}

std::optional<std::size_t> SymBasis::find(const SymState& s) const {
    const auto it = index_.find(s);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::vector<std::size_t>> SymBasis::blocks() const {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t p = 0; p < states_.size(); ++p) {
        const auto q = static_cast<std::size_t>(states_[p].quasi());
        if (out.size() <= q) out.resize(q + 1);
        out[q].push_back(p);
    }
    return out;
}

Eigen::VectorXd SymBasis::photon_number() const {
    Eigen::VectorXd n(static_cast<Eigen::Index>(states_.size()));
    for (std::size_t p = 0; p < states_.size(); ++p) n(static_cast<Eigen::Index>(p)) = states_[p].n_ph;
    return n;
}

SparseMatrix apply_terms(const std::vector<FockTerm>& terms, const SymBasis& from, const SymBasis& to) {
    if (from.size() > 0 && to.size() > 0 && from.m() != to.m()) {
        throw std::invalid_argument("apply_terms: bases have different vibronic dimension");
    }
    std::vector<Triplet> entries;
    for (std::size_t p = 0; p < from.size(); ++p) {
        for (const auto& term : terms) {
            if (term.coeff == cplx{}) continue;
            SymState s = from.state(p);
            double amp = 1.0;
            for (auto it = term.ops.rbegin(); it != term.ops.rend(); ++it) {
                int& n = occupation(s, it->reg);
                if (it->create) {
                    if (!it->unit_factor) amp *= std::sqrt(static_cast<double>(n + 1));
                    ++n;
                } else {
                    if (n == 0) {
                        amp = 0.0;
                        break;
                    }
                    if (!it->unit_factor) amp *= std::sqrt(static_cast<double>(n));
                    --n;
                }
            }
            if (amp == 0.0) continue;
            if (const auto target = to.find(s)) entries.push_back({*target, p, term.coeff * amp});
        }
    }
    return SparseMatrix(to.size(), from.size(), std::move(entries));
}

SparseMatrix map_operator(const Eigen::MatrixXcd& one_body, const SymBasis& from, const SymBasis& to) {
    const auto two_m = static_cast<Eigen::Index>(2 * from.m());
    if (one_body.rows() != two_m || one_body.cols() != two_m) {
        throw std::invalid_argument("map_operator: one-body matrix must be 2m x 2m (m = " +
                                    std::to_string(from.m()) + ")");
    }
    std::vector<FockTerm> terms;
    for (Eigen::Index i = 0; i < two_m; ++i) {
        for (Eigen::Index j = 0; j < two_m; ++j) {
            if (one_body(i, j) == cplx{}) continue;
            terms.push_back({one_body(i, j),
                             {{static_cast<std::size_t>(i), true, false}, {static_cast<std::size_t>(j), false, false}}});
        }
    }
    return apply_terms(terms, from, to);
}

SparseMatrix map_operator(const Eigen::MatrixXcd& one_body, const SymBasis& basis) {
    return map_operator(one_body, basis, basis);
}

ConservationReport conserved_check(const SymBasis& basis, const SparseMatrix& h, double tol) {
    if (h.rows() != basis.size() || h.cols() != basis.size()) {
        throw std::invalid_argument("conserved_check: matrix does not match basis");
    }
    ConservationReport report;
    for (const auto& t : h.entries()) {
        if (std::abs(t.value) <= tol) continue;
        const auto& a = basis.state(t.row);
        const auto& b = basis.state(t.col);
        if (a.molecules() != b.molecules()) {
            report.violations.push_back({t.row, t.col, "molecule number changes"});
        }
        if (a.excitations() != b.excitations()) {
            report.violations.push_back({t.row, t.col, "excitation number changes"});
        }
        const int dq = std::abs(a.quasi() - b.quasi());
        if (dq >= 2) {
            report.violations.push_back({t.row, t.col, "quasi-conserved index jumps by " + std::to_string(dq)});
        } else if (dq == 1) {
            ++report.inter_block_elements;
        }
    }
    return report;
}

} // namespace polariton
