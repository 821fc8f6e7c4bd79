#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace servoaw {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;

// Dense eigenvalues (Hessenberg reduction + shifted QR under the hood).
// Throws std::runtime_error when the iteration fails to converge.
std::vector<Complex> eigenvalues(const Matrix& a);

// Scale-invariant nonsingularity test: the smallest singular value must
// exceed rel_tol times the largest.
bool is_nonsingular(const Matrix& a, double rel_tol = 1e-10);

// Numeric rank with the same relative-tolerance convention.
int numeric_rank(const Matrix& a, double rel_tol = 1e-10);

// Multiset comparison of two spectra: sort lexicographically by (real, imag)
// and compare pairwise with an absolute tolerance.
bool spectra_match(std::vector<Complex> lhs, std::vector<Complex> rhs,
                   double tol = 1e-9);

}  // namespace servoaw
