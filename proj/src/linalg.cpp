#include "servoaw/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace servoaw {

std::vector<Complex> eigenvalues(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("eigenvalues: matrix must be square");
  }
  if (a.rows() == 0) {
    return {};
  }
  Eigen::EigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigenvalues: QR iteration did not converge");
  }
  std::vector<Complex> out(static_cast<size_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    out[static_cast<size_t>(i)] = solver.eigenvalues()(i);
  }
  return out;
}

bool is_nonsingular(const Matrix& a, double rel_tol) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    return false;
  }
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  return sv(sv.size() - 1) > rel_tol * sv(0);
}

int numeric_rank(const Matrix& a, double rel_tol) {
  if (a.size() == 0) {
    return 0;
  }
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  if (sv(0) == 0.0) {
    return 0;
  }
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * sv(0)) {
      ++rank;
    }
  }
  return rank;
}

bool spectra_match(std::vector<Complex> lhs, std::vector<Complex> rhs,
                   double tol) {
  if (lhs.size() != rhs.size()) {
    return false;
  }
  auto lex = [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  };
  std::sort(lhs.begin(), lhs.end(), lex);
  std::sort(rhs.begin(), rhs.end(), lex);
  for (size_t i = 0; i < lhs.size(); ++i) {
    if (std::abs(lhs[i] - rhs[i]) > tol) {
      return false;
    }
  }
  return true;
}

}  // namespace servoaw
