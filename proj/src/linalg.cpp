#include "polariton/linalg.hpp"

#include "polariton/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <stdexcept>

namespace polariton {

HermitianEigensystem diagonalize_hermitian(const Eigen::MatrixXcd& h) {
    if (h.rows() != h.cols()) throw std::invalid_argument("diagonalize_hermitian: matrix must be square");
    if (!h.allFinite()) throw GuardError("diagonalize_hermitian: non-finite matrix elements");
    if (h.size() > 0 && h.imag().cwiseAbs().maxCoeff() == 0.0) {
        // real symmetric: cheaper real solver
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.real());
        if (solver.info() != Eigen::Success) throw GuardError("Hermitian eigensolver failed");
        return {solver.eigenvalues(), solver.eigenvectors().cast<cplx>()};
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success) throw GuardError("Hermitian eigensolver failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

double hermiticity_defect(const Eigen::MatrixXcd& h) {
    if (h.size() == 0) return 0.0;
    return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

SpectralDecomposition decompose(const Eigen::MatrixXcd& h) {
    if (h.rows() != h.cols()) throw std::invalid_argument("decompose: matrix must be square");
    if (!h.allFinite()) throw GuardError("decompose: non-finite matrix elements");
    SpectralDecomposition out;
    if (h.size() == 0) return out;
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    if (hermiticity_defect(h) <= 1e-14 * scale) {
        const auto es = diagonalize_hermitian(h);
        out.values = es.values.cast<cplx>();
        out.right = es.vectors;
        out.inverse = es.vectors.adjoint();
    } else {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(h);
        if (solver.info() != Eigen::Success) throw GuardError("complex eigensolver failed");
        out.values = solver.eigenvalues();
        out.right = solver.eigenvectors();
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(out.right);
        out.inverse = lu.inverse();
    }
    const Eigen::MatrixXcd rebuilt = out.right * out.values.asDiagonal() * out.inverse;
    out.residual = (rebuilt - h).cwiseAbs().maxCoeff() / scale;
    return out;
}

Eigen::MatrixXcd with_leakage(const Eigen::MatrixXcd& h, const Eigen::VectorXd& photon_number, double kappa) {
    if (photon_number.size() != h.rows()) throw std::invalid_argument("with_leakage: photon number size mismatch");
    Eigen::MatrixXcd out = h;
    if (kappa != 0.0) out.diagonal() -= cplx(0.0, 0.5 * kappa) * photon_number.cast<cplx>();
    return out;
}

} // namespace polariton
