#pragma once

#include "servoaw/lti_core.hpp"

namespace servoaw {

// Quadratic state/control costs for the extended system.
struct LqrWeights {
  Matrix Q;  // n x n, symmetric positive semidefinite
  Matrix R;  // m x m, symmetric positive definite

  void validate() const;
};

// PI servo gains: u_cmd = -K_I e_yI - K_P x_p. K_I must be nonsingular; the
// anti-windup closed form and the saturated-mode matrix both invert it.
struct ServoGains {
  Matrix K_I;  // m x m
  Matrix K_P;  // m x n_p

  int m() const { return static_cast<int>(K_I.rows()); }
  int n_p() const { return static_cast<int>(K_P.cols()); }
  Matrix full() const;  // [K_I  K_P], m x (m + n_p)
  void validate() const;
};

// Stabilizing solution of the continuous algebraic Riccati equation
//   A'P + PA - P B R^-1 B' P + Q = 0.
// Starts from the stable invariant subspace of the 2n x 2n Hamiltonian and
// refines with Newton-Kleinman steps until the residual Frobenius norm is
// below 1e-8 * (1 + ||P||_F). Throws std::runtime_error when the pair is not
// stabilizable or the iteration diverges; the message carries the residual.
Matrix solve_care(const Matrix& A, const Matrix& B, const Matrix& Q,
                  const Matrix& R);

// Residual Frobenius norm of a candidate CARE solution.
double care_residual(const Matrix& A, const Matrix& B, const Matrix& Q,
                     const Matrix& R, const Matrix& P);

// K = R^-1 B' P, split column-wise into K_I (first m columns) and K_P
// (remaining n_p columns). Throws std::runtime_error when K_I is singular.
ServoGains servo_gains(const Matrix& P, const Matrix& B, const Matrix& R,
                       int n_p, int m);

// CARE solve plus gain split on the extended system.
ServoGains design_servo_gains(const ExtendedSystem& ext,
                              const LqrWeights& weights);

}  // namespace servoaw
