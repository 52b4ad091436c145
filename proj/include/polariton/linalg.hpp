// linalg.hpp: eigendecompositions shared by propagation and perturbation.
#pragma once

#include "polariton/sparse.hpp"

#include <Eigen/Dense>

namespace polariton {

// Hermitian eigensystem, eigenvalues ascending, orthonormal columns.
struct HermitianEigensystem {
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;
};

HermitianEigensystem diagonalize_hermitian(const Eigen::MatrixXcd& h);

// H = R diag(λ) R⁻¹ for a general (possibly non-Hermitian) matrix.
struct SpectralDecomposition {
    Eigen::VectorXcd values;
    Eigen::MatrixXcd right;   // R
    Eigen::MatrixXcd inverse; // R⁻¹
    double residual = 0.0;    // ‖R Λ R⁻¹ − H‖_max / max(1, ‖H‖_max)
};

// Uses the Hermitian solver when h is Hermitian to 1e-14 relative.
SpectralDecomposition decompose(const Eigen::MatrixXcd& h);

// H − i κ/2 · diag(photon_number)
Eigen::MatrixXcd with_leakage(const Eigen::MatrixXcd& h, const Eigen::VectorXd& photon_number, double kappa);

double hermiticity_defect(const Eigen::MatrixXcd& h);

} // namespace polariton
