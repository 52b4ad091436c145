// sparse.hpp: coordinate-format complex matrices with canonical ordering.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <vector>

namespace polariton {

using cplx = std::complex<double>;

struct Triplet {
    std::size_t row = 0;
    std::size_t col = 0;
    cplx value{};
};

inline constexpr std::size_t kMaxDenseDim = 4096;

// Entries are sorted by (row, col), duplicates summed, exact zeros dropped.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> entries);

    static SparseMatrix from_dense(const Eigen::MatrixXcd& dense, double drop_below = 0.0);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t nnz() const noexcept { return entries_.size(); }
    const std::vector<Triplet>& entries() const noexcept { return entries_; }

    cplx at(std::size_t row, std::size_t col) const;

    // Throws GuardError above kMaxDenseDim in either dimension.
    Eigen::MatrixXcd to_dense() const;
    Eigen::SparseMatrix<cplx> to_eigen() const;

    SparseMatrix adjoint() const;
    double max_abs() const;

    // Plain-text export: "dim nnz" header, then "row col re im" per entry,
    // 17 significant digits. Only square matrices are exported.
    void write_text(std::ostream& out) const;
    static SparseMatrix read_text(std::istream& in);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Triplet> entries_;
};

SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix operator*(cplx scale, const SparseMatrix& a);
SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b);

} // namespace polariton
