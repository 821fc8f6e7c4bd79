#pragma once

#include "servoaw/linalg.hpp"

namespace servoaw {

// Open-loop LTI plant with regulated-output rows:
//   x_p' = A_p x_p + B_p u
//   y_reg = C_p_reg x_p + D_p_reg u
// The state x_p has dimension n_p, the control u and the regulated output
// y_reg both have dimension m. A_p must be Hurwitz: the saturated-mode
// stability argument relies on it.
struct PlantModel {
  Matrix A_p;      // n_p x n_p
  Matrix B_p;      // n_p x m
  Matrix C_p_reg;  // m x n_p
  Matrix D_p_reg;  // m x m

  int n_p() const { return static_cast<int>(A_p.rows()); }
  int m() const { return static_cast<int>(B_p.cols()); }

  // Throws std::invalid_argument on a dimension mismatch or a non-Hurwitz A_p.
  void validate() const;
};

// Integral-augmented open-loop system with state x = (e_yI, x_p):
//   x' = A x + B u + B_cmd y_cmd
struct ExtendedSystem {
  Matrix A;      // n x n
  Matrix B;      // n x m
  Matrix B_cmd;  // n x m
  int n_p = 0;
  int m = 0;

  int n() const { return n_p + m; }
};

// Component-wise control position limits.
struct PositionLimits {
  Vector u_min;
  Vector u_max;

  int m() const { return static_cast<int>(u_min.size()); }
  void validate() const;  // u_min[i] < u_max[i] for every channel
};

// Assembles the extended system
//   A = [[0_mxm, C_p_reg], [0_npxm, A_p]],  B = [D_p_reg; B_p],
//   B_cmd = [-I_m; 0].
ExtendedSystem build_extended_system(const PlantModel& plant);

// Component-wise clamp of u_cmd to [u_min, u_max].
Vector saturate(const Vector& u_cmd, const PositionLimits& limits);

// True iff every eigenvalue satisfies Re < -1e-12. Marginal spectra count as
// failures; hurwitz_report exposes the worst eigenvalue for diagnostics.
bool check_hurwitz(const Matrix& a_p);

struct HurwitzReport {
  bool hurwitz = false;
  Complex worst;  // eigenvalue with the largest real part
};
HurwitzReport hurwitz_report(const Matrix& a_p);

// The integral augmentation is controllable iff [[A_p, B_p], [C_p_reg,
// D_p_reg]] is nonsingular, i.e. the plant has no transmission zeros at the
// origin. Nonsingularity uses the relative singular-value test.
bool check_augmentation_controllable(const PlantModel& plant);

}  // namespace servoaw
