#include "servoaw/aw_cbf.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace servoaw {

void CbfParams::validate() const {
  if (!(alpha_cbf > 0.0) || !std::isfinite(alpha_cbf)) {
    throw std::invalid_argument("CbfParams: alpha_cbf must be positive");
  }
}

Vector commanded_control(const Vector& e_yI, const Vector& x_p,
                         const ServoGains& gains) {
  if (e_yI.size() != gains.m() || x_p.size() != gains.n_p()) {
    throw std::invalid_argument("commanded_control: dimension mismatch");
  }
  return -gains.K_I * e_yI - gains.K_P * x_p;
}

Vector control_deficiency(const Vector& u_cmd, const PositionLimits& limits) {
  return saturate(u_cmd, limits) - u_cmd;
}

std::pair<Vector, Vector> constraint_values(const Vector& u_cmd,
                                            const PositionLimits& limits) {
  limits.validate();
  if (u_cmd.size() != limits.u_min.size()) {
    throw std::invalid_argument("constraint_values: dimension mismatch");
  }
  return {limits.u_min - u_cmd, u_cmd - limits.u_max};
}

std::pair<Vector, Vector> delta_terms(const Vector& e_y, const Vector& x_p_dot,
                                      const Vector& g1, const Vector& g2,
                                      const ServoGains& gains,
                                      const CbfParams& params) {
  params.validate();
  const Vector drive = gains.K_I * e_y + gains.K_P * x_p_dot;
  return {drive + params.alpha_cbf * g1, -drive + params.alpha_cbf * g2};
}

std::pair<Vector, Vector> lagrange_multipliers(const Vector& delta1,
                                               const Vector& delta2,
                                               const ServoGains& gains) {
  const Matrix gram = gains.K_I * gains.K_I.transpose();
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success || !is_nonsingular(gram)) {
    throw std::invalid_argument(
        "lagrange_multipliers: K_I K_I' is singular; K_I must be nonsingular");
  }
  const Vector lambda1 = 2.0 * llt.solve(delta1).cwiseMax(0.0);
  const Vector lambda2 = 2.0 * llt.solve(delta2).cwiseMax(0.0);
  return {lambda1, lambda2};
}

Vector aw_signal(const Vector& lambda1, const Vector& lambda2,
                 const ServoGains& gains) {
  return -0.5 * gains.K_I.transpose() * (lambda1 - lambda2);
}

AwEvaluation evaluate_aw(const Vector& e_yI, const Vector& x_p,
                         const Vector& y_cmd, const PlantModel& plant,
                         const ServoGains& gains, const PositionLimits& limits,
                         const CbfParams& params) {
  AwEvaluation eval;
  eval.u_cmd = commanded_control(e_yI, x_p, gains);
  eval.u_sat = saturate(eval.u_cmd, limits);
  eval.deficiency = eval.u_sat - eval.u_cmd;

  const Vector e_y = plant.C_p_reg * x_p + plant.D_p_reg * eval.u_sat - y_cmd;
  const Vector x_p_dot = plant.A_p * x_p + plant.B_p * eval.u_sat;

  std::tie(eval.g1, eval.g2) = constraint_values(eval.u_cmd, limits);
  std::tie(eval.delta1, eval.delta2) =
      delta_terms(e_y, x_p_dot, eval.g1, eval.g2, gains, params);
  std::tie(eval.lambda1, eval.lambda2) =
      lagrange_multipliers(eval.delta1, eval.delta2, gains);
  eval.v = aw_signal(eval.lambda1, eval.lambda2, gains);

  const Vector constrained = gains.K_I * (e_y + eval.v) + gains.K_P * x_p_dot;
  eval.G1 = constrained + params.alpha_cbf * eval.g1;
  eval.G2 = -constrained + params.alpha_cbf * eval.g2;
  return eval;
}

Vector qp_reference_solve(const Vector& delta1, const Vector& delta2,
                          const ServoGains& gains) {
  const int m = gains.m();
  if (m > 4) {
    throw std::invalid_argument(
        "qp_reference_solve: active-set enumeration is limited to m <= 4");
  }
  if (delta1.size() != m || delta2.size() != m) {
    throw std::invalid_argument("qp_reference_solve: dimension mismatch");
  }

  // Constraint rows: a_i' v + d_i <= 0 with A_c = [K_I; -K_I], d = [d1; d2].
  const int n_con = 2 * m;
  Matrix a_c(n_con, m);
  a_c.topRows(m) = gains.K_I;
  a_c.bottomRows(m) = -gains.K_I;
  Vector d(n_con);
  d.head(m) = delta1;
  d.tail(m) = delta2;

  const double scale = 1.0 + d.cwiseAbs().maxCoeff();
  const double feas_tol = 1e-10 * scale;
  const double dual_tol = -1e-11 * scale;

  bool found = false;
  double best_norm = std::numeric_limits<double>::infinity();
  Vector best_v;

  for (unsigned mask = 0; mask < (1u << n_con); ++mask) {
    const int active = __builtin_popcount(mask);
    if (active > m) {
      continue;  // more than m active rows cannot be linearly independent
    }

    Vector v = Vector::Zero(m);
    if (active > 0) {
      Matrix a_s(active, m);
      Vector d_s(active);
      int row = 0;
      for (int i = 0; i < n_con; ++i) {
        if (mask & (1u << i)) {
          a_s.row(row) = a_c.row(i);
          d_s(row) = d(i);
          ++row;
        }
      }
      const Matrix gram = a_s * a_s.transpose();
      if (!is_nonsingular(gram, 1e-12)) {
        continue;
      }
      // Equality-constrained subproblem: min ||v||^2 s.t. A_S v = -d_S gives
      // v = -A_S' (A_S A_S')^-1 d_S with multipliers 2 (A_S A_S')^-1 d_S.
      const Vector lambda_s = 2.0 * gram.partialPivLu().solve(d_s);
      if ((lambda_s.array() < dual_tol).any()) {
        continue;
      }
      v = -0.5 * a_s.transpose() * lambda_s;
    }

    if (((a_c * v + d).array() > feas_tol).any()) {
      continue;
    }
    const double norm = v.norm();
    if (norm < best_norm) {
      best_norm = norm;
      best_v = v;
      found = true;
    }
  }

  if (!found) {
    throw std::runtime_error(
        "qp_reference_solve: no feasible KKT point (degenerate limits?)");
  }
  return best_v;
}

}  // namespace servoaw
