#include "servoaw/lqr.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace servoaw {

namespace {

constexpr int kMaxNewtonIterations = 50;

void require_symmetric(const Matrix& a, const char* name) {
  const double skew = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (skew > 1e-12 * (1.0 + a.cwiseAbs().maxCoeff())) {
    std::ostringstream msg;
    msg << "solve_care: " << name << " is not symmetric (skew " << skew << ")";
    throw std::invalid_argument(msg.str());
  }
}

double min_eigenvalue(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Solves A' X + X A = W for X (A stable, so the operator is nonsingular).
Matrix solve_lyapunov(const Matrix& a, const Matrix& w) {
  const Eigen::Index n = a.rows();
  const Matrix ident = Matrix::Identity(n, n);
  // Column-major vec: vec(A'X) = (I (x) A') vec(X), vec(XA) = (A' (x) I) vec(X).
  const Matrix op = kron(ident, a.transpose()) + kron(a.transpose(), ident);
  const Eigen::Map<const Vector> w_vec(w.data(), n * n);
  Vector x_vec = op.partialPivLu().solve(w_vec);
  return Eigen::Map<Matrix>(x_vec.data(), n, n);
}

bool is_stable(const Matrix& a) {
  for (const Complex& ev : eigenvalues(a)) {
    if (ev.real() >= 0.0) {
      return false;
    }
  }
  return true;
}

// Initial CARE solution from the stable invariant subspace of the Hamiltonian
// H = [[A, -B R^-1 B'], [-Q, -A']].
Matrix hamiltonian_start(const Matrix& a, const Matrix& s, const Matrix& q) {
  const Eigen::Index n = a.rows();
  Matrix h(2 * n, 2 * n);
  h.topLeftCorner(n, n) = a;
  h.topRightCorner(n, n) = -s;
  h.bottomLeftCorner(n, n) = -q;
  h.bottomRightCorner(n, n) = -a.transpose();

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(h.cast<Complex>());
  if (ces.info() != Eigen::Success) {
    throw std::runtime_error("solve_care: Hamiltonian eigensolver failed");
  }

  Eigen::MatrixXcd basis(2 * n, n);
  Eigen::Index count = 0;
  for (Eigen::Index i = 0; i < 2 * n; ++i) {
    if (ces.eigenvalues()(i).real() < 0.0) {
      if (count == n) {
        ++count;
        break;
      }
      basis.col(count++) = ces.eigenvectors().col(i);
    }
  }
  if (count != n) {
    throw std::runtime_error(
        "solve_care: Hamiltonian spectrum is not split n/n about the "
        "imaginary axis; (A, B) is likely not stabilizable");
  }

  const Eigen::MatrixXcd x1 = basis.topRows(n);
  const Eigen::MatrixXcd x2 = basis.bottomRows(n);
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(x1);
  if (!lu.isInvertible()) {
    throw std::runtime_error(
        "solve_care: stable-subspace basis is degenerate (X1 singular)");
  }
  Matrix p = (x2 * lu.inverse()).real();
  return 0.5 * (p + p.transpose());
}

}  // namespace

void LqrWeights::validate() const {
  if (Q.rows() != Q.cols() || R.rows() != R.cols() || R.rows() == 0) {
    throw std::invalid_argument("LqrWeights: Q and R must be square");
  }
  require_symmetric(Q, "Q");
  require_symmetric(R, "R");
  const double q_min = min_eigenvalue(0.5 * (Q + Q.transpose()));
  if (q_min < -1e-10 * (1.0 + Q.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("LqrWeights: Q is not positive semidefinite");
  }
  if (min_eigenvalue(0.5 * (R + R.transpose())) <= 0.0) {
    throw std::invalid_argument("LqrWeights: R is not positive definite");
  }
}

Matrix ServoGains::full() const {
  Matrix k(m(), m() + n_p());
  k.leftCols(m()) = K_I;
  k.rightCols(n_p()) = K_P;
  return k;
}

void ServoGains::validate() const {
  if (K_I.rows() != K_I.cols() || K_I.rows() == 0) {
    throw std::invalid_argument("ServoGains: K_I must be square and nonempty");
  }
  if (K_P.rows() != K_I.rows()) {
    throw std::invalid_argument("ServoGains: K_P row count must equal m");
  }
  if (!is_nonsingular(K_I)) {
    throw std::invalid_argument("ServoGains: K_I is singular");
  }
}

double care_residual(const Matrix& A, const Matrix& B, const Matrix& Q,
                     const Matrix& R, const Matrix& P) {
  const Matrix rinv_bt_p = R.llt().solve(B.transpose() * P);
  const Matrix res =
      A.transpose() * P + P * A - P * B * rinv_bt_p + Q;
  return res.norm();
}

Matrix solve_care(const Matrix& A, const Matrix& B, const Matrix& Q,
                  const Matrix& R) {
  const Eigen::Index n = A.rows();
  const Eigen::Index m = B.cols();
  if (A.cols() != n || B.rows() != n || Q.rows() != n || Q.cols() != n ||
      R.rows() != m || R.cols() != m || n == 0 || m == 0) {
    throw std::invalid_argument("solve_care: inconsistent dimensions");
  }
  LqrWeights{Q, R}.validate();

  Eigen::LLT<Matrix> r_llt(R);
  if (r_llt.info() != Eigen::Success) {
    throw std::invalid_argument("solve_care: R is not positive definite");
  }
  const Matrix s = B * r_llt.solve(B.transpose());

  Matrix p = hamiltonian_start(A, s, Q);

  // Newton-Kleinman refinement: with K_j stabilizing, the Lyapunov solve
  //   (A - B K_j)' P + P (A - B K_j) = -(Q + K_j' R K_j)
  // converges quadratically to the stabilizing CARE solution.
  const double tol_scale = 1.0 + p.norm();
  double residual = care_residual(A, B, Q, R, p);
  for (int iter = 0; iter < kMaxNewtonIterations; ++iter) {
    if (residual <= 1e-8 * (1.0 + p.norm())) {
      break;
    }
    const Matrix k = r_llt.solve(B.transpose() * p);
    const Matrix a_cl = A - B * k;
    if (!is_stable(a_cl)) {
      std::ostringstream msg;
      msg << "solve_care: Newton iterate lost stability (residual " << residual
          << ", tolerance " << 1e-8 * tol_scale << ")";
      throw std::runtime_error(msg.str());
    }
    const Matrix w = -(Q + k.transpose() * R * k);
    Matrix next = solve_lyapunov(a_cl, w);
    next = 0.5 * (next + next.transpose());
    const double next_residual = care_residual(A, B, Q, R, next);
    if (!std::isfinite(next_residual)) {
      throw std::runtime_error("solve_care: Newton iteration diverged");
    }
    p = next;
    residual = next_residual;
  }

  residual = care_residual(A, B, Q, R, p);
  if (residual > 1e-8 * (1.0 + p.norm())) {
    std::ostringstream msg;
    msg << "solve_care: residual " << residual << " exceeds tolerance "
        << 1e-8 * (1.0 + p.norm());
    throw std::runtime_error(msg.str());
  }
  const Matrix k = r_llt.solve(B.transpose() * p);
  if (!is_stable(A - B * k)) {
    throw std::runtime_error("solve_care: closed loop is not Hurwitz");
  }
  return p;
}

ServoGains servo_gains(const Matrix& P, const Matrix& B, const Matrix& R,
                       int n_p, int m) {
  if (B.cols() != m || B.rows() != n_p + m || P.rows() != n_p + m ||
      P.cols() != n_p + m) {
    throw std::invalid_argument("servo_gains: inconsistent dimensions");
  }
  const Matrix k = R.llt().solve(B.transpose() * P);
  ServoGains gains;
  gains.K_I = k.leftCols(m);
  gains.K_P = k.rightCols(n_p);
  if (!is_nonsingular(gains.K_I)) {
    throw std::runtime_error("servo_gains: integral gain K_I is singular");
  }
  return gains;
}

ServoGains design_servo_gains(const ExtendedSystem& ext,
                              const LqrWeights& weights) {
  const Matrix p = solve_care(ext.A, ext.B, weights.Q, weights.R);
  return servo_gains(p, ext.B, weights.R, ext.n_p, ext.m);
}

}  // namespace servoaw
