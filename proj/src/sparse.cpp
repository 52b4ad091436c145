#include "polariton/sparse.hpp"

#include "polariton/errors.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace polariton {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> entries)
    : rows_(rows), cols_(cols) {
    for (const auto& t : entries) {
        if (t.row >= rows || t.col >= cols) {
            throw std::out_of_range("SparseMatrix: triplet outside matrix bounds");
        }
    }
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    entries_.reserve(entries.size());
    for (const auto& t : entries) {
        if (!entries_.empty() && entries_.back().row == t.row && entries_.back().col == t.col) {
            entries_.back().value += t.value;
        } else {
            entries_.push_back(t);
        }
    }
    std::erase_if(entries_, [](const Triplet& t) { return t.value == cplx{}; });
}

SparseMatrix SparseMatrix::from_dense(const Eigen::MatrixXcd& dense, double drop_below) {
    std::vector<Triplet> entries;
    for (Eigen::Index r = 0; r < dense.rows(); ++r) {
        for (Eigen::Index c = 0; c < dense.cols(); ++c) {
            if (std::abs(dense(r, c)) > drop_below) {
                entries.push_back({static_cast<std::size_t>(r), static_cast<std::size_t>(c), dense(r, c)});
            }
        }
    }
    return SparseMatrix(static_cast<std::size_t>(dense.rows()), static_cast<std::size_t>(dense.cols()),
                        std::move(entries));
}

cplx SparseMatrix::at(std::size_t row, std::size_t col) const {
    const auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair{row, col},
                                     [](const Triplet& t, const std::pair<std::size_t, std::size_t>& key) {
                                         return t.row != key.first ? t.row < key.first : t.col < key.second;
                                     });
    if (it != entries_.end() && it->row == row && it->col == col) return it->value;
    return {};
}

Eigen::MatrixXcd SparseMatrix::to_dense() const {
    if (rows_ > kMaxDenseDim || cols_ > kMaxDenseDim) {
        throw GuardError("dense conversion refused: dimension " + std::to_string(std::max(rows_, cols_)) +
                         " exceeds " + std::to_string(kMaxDenseDim));
    }
    Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
    for (const auto& t : entries_) dense(static_cast<Eigen::Index>(t.row), static_cast<Eigen::Index>(t.col)) = t.value;
    return dense;
}

Eigen::SparseMatrix<cplx> SparseMatrix::to_eigen() const {
    std::vector<Eigen::Triplet<cplx>> trips;
    trips.reserve(entries_.size());
    for (const auto& t : entries_) {
        trips.emplace_back(static_cast<int>(t.row), static_cast<int>(t.col), t.value);
    }
    Eigen::SparseMatrix<cplx> out(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

SparseMatrix SparseMatrix::adjoint() const {
    std::vector<Triplet> out;
    out.reserve(entries_.size());
    for (const auto& t : entries_) out.push_back({t.col, t.row, std::conj(t.value)});
    return SparseMatrix(cols_, rows_, std::move(out));
}

double SparseMatrix::max_abs() const {
    double best = 0.0;
    for (const auto& t : entries_) best = std::max(best, std::abs(t.value));
    return best;
}

void SparseMatrix::write_text(std::ostream& out) const {
    if (rows_ != cols_) throw std::invalid_argument("write_text: only square matrices are exported");
    out << rows_ << ' ' << entries_.size() << '\n';
    const auto old = out.precision(17);
    for (const auto& t : entries_) {
        out << t.row << ' ' << t.col << ' ' << t.value.real() << ' ' << t.value.imag() << '\n';
    }
    out.precision(old);
}

SparseMatrix SparseMatrix::read_text(std::istream& in) {
    std::size_t dim = 0;
    std::size_t nnz = 0;
    if (!(in >> dim >> nnz)) throw std::runtime_error("read_text: malformed header");
    std::vector<Triplet> entries(nnz);
    for (auto& t : entries) {
        double re = 0.0;
        double im = 0.0;
        if (!(in >> t.row >> t.col >> re >> im)) throw std::runtime_error("read_text: truncated entry list");
        t.value = {re, im};
    }
    return SparseMatrix(dim, dim, std::move(entries));
}

SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("sparse +: shape mismatch");
    std::vector<Triplet> all = a.entries();
    all.insert(all.end(), b.entries().begin(), b.entries().end());
    return SparseMatrix(a.rows(), a.cols(), std::move(all));
}

SparseMatrix operator*(cplx scale, const SparseMatrix& a) {
    std::vector<Triplet> out = a.entries();
    for (auto& t : out) t.value *= scale;
    return SparseMatrix(a.rows(), a.cols(), std::move(out));
}

SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) { return a + cplx{-1.0} * b; }

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("sparse *: shape mismatch");
    // Row pointers of b for the merge.
    std::vector<std::size_t> start(b.rows() + 1, 0);
    for (const auto& t : b.entries()) ++start[t.row + 1];
    for (std::size_t r = 0; r < b.rows(); ++r) start[r + 1] += start[r];
    std::vector<Triplet> out;
    for (const auto& ta : a.entries()) {
        for (std::size_t k = start[ta.col]; k < start[ta.col + 1]; ++k) {
            const auto& tb = b.entries()[k];
            out.push_back({ta.row, tb.col, ta.value * tb.value});
        }
    }
    return SparseMatrix(a.rows(), b.cols(), std::move(out));
}

} // namespace polariton
