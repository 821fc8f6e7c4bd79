#pragma once

#include <utility>

#include "servoaw/lqr.hpp"
#include "servoaw/lti_core.hpp"

namespace servoaw {

// Barrier decay rate for the constraint derivative condition
// g_k' + alpha_cbf g_k <= 0.
struct CbfParams {
  double alpha_cbf = 1.0;  // 1/s, must be > 0

  void validate() const;
};

// One full evaluation of the anti-windup law at a state: the commanded
// control, the constraint functions, the state-dependent terms delta_k, the
// closed-form multipliers, the integrator modification v, and the constraint
// derivatives G_k(x, v) for logging.
struct AwEvaluation {
  Vector u_cmd;
  Vector u_sat;
  Vector deficiency;  // sat(u_cmd) - u_cmd
  Vector g1, g2;
  Vector delta1, delta2;
  Vector lambda1, lambda2;
  Vector v;
  Vector G1, G2;
};

// u_cmd = -K_I e_yI - K_P x_p.
Vector commanded_control(const Vector& e_yI, const Vector& x_p,
                         const ServoGains& gains);

// sat(u_cmd) - u_cmd; zero exactly when u_cmd is within the limits.
Vector control_deficiency(const Vector& u_cmd, const PositionLimits& limits);

// g1 = u_min - u_cmd, g2 = u_cmd - u_max. Both nonpositive exactly when the
// deficiency vanishes.
std::pair<Vector, Vector> constraint_values(const Vector& u_cmd,
                                            const PositionLimits& limits);

// State-dependent constraint-derivative terms that do not depend on v:
//   delta1 = K_I e_y + K_P x_p_dot + alpha g1
//   delta2 = -K_I e_y - K_P x_p_dot + alpha g2
// x_p_dot must be the nominal plant derivative under the saturated control;
// external disturbances are unknown to the controller and excluded.
std::pair<Vector, Vector> delta_terms(const Vector& e_y, const Vector& x_p_dot,
                                      const Vector& g1, const Vector& g2,
                                      const ServoGains& gains,
                                      const CbfParams& params);

// Closed-form multipliers: lambda_k = 2 max(0, (K_I K_I')^-1 delta_k),
// with the max applied component-wise after the inverse. For m = 1 this is
// the exact KKT solution; for m > 1 with a coupled K_I it is implemented
// verbatim and its deviation from the QP reference is measured in tests, not
// corrected. A tie delta_k = 0 leaves the constraint inactive.
std::pair<Vector, Vector> lagrange_multipliers(const Vector& delta1,
                                               const Vector& delta2,
                                               const ServoGains& gains);

// v = -0.5 K_I' (lambda1 - lambda2).
Vector aw_signal(const Vector& lambda1, const Vector& lambda2,
                 const ServoGains& gains);

// Full pipeline at a state of the extended system. Internally
//   e_y = C_p_reg x_p + D_p_reg sat(u_cmd) - y_cmd
//   x_p_dot = A_p x_p + B_p sat(u_cmd)
// and G_k(x, v) is evaluated at the returned v.
AwEvaluation evaluate_aw(const Vector& e_yI, const Vector& x_p,
                         const Vector& y_cmd, const PlantModel& plant,
                         const ServoGains& gains, const PositionLimits& limits,
                         const CbfParams& params);

// Independent reference for the closed form: exact minimizer of ||v||^2
// subject to [I; -I] K_I v + [delta1; delta2] <= 0, found by enumerating all
// active subsets of the 2m constraints (m <= 4) and returning the feasible
// KKT point of minimal norm. Throws std::runtime_error when the constraint
// set is infeasible.
Vector qp_reference_solve(const Vector& delta1, const Vector& delta2,
                          const ServoGains& gains);

}  // namespace servoaw
