#include "servoaw/lti_core.hpp"

#include <sstream>
#include <stdexcept>

namespace servoaw {

namespace {
constexpr double kHurwitzMargin = -1e-12;
}

void PlantModel::validate() const {
  const int np = n_p();
  const int mm = m();
  if (np < 1 || mm < 1) {
    throw std::invalid_argument("PlantModel: n_p and m must be positive");
  }
  if (A_p.rows() != np || A_p.cols() != np) {
    throw std::invalid_argument("PlantModel: A_p must be n_p x n_p");
  }
  if (B_p.rows() != np || B_p.cols() != mm) {
    throw std::invalid_argument("PlantModel: B_p must be n_p x m");
  }
  if (C_p_reg.rows() != mm || C_p_reg.cols() != np) {
    throw std::invalid_argument("PlantModel: C_p_reg must be m x n_p");
  }
  if (D_p_reg.rows() != mm || D_p_reg.cols() != mm) {
    throw std::invalid_argument("PlantModel: D_p_reg must be m x m");
  }
  const HurwitzReport report = hurwitz_report(A_p);
  if (!report.hurwitz) {
    std::ostringstream msg;
    msg << "PlantModel: A_p is not Hurwitz; eigenvalue " << report.worst.real()
        << (report.worst.imag() >= 0 ? "+" : "") << report.worst.imag()
        << "j has real part >= " << kHurwitzMargin;
    throw std::invalid_argument(msg.str());
  }
}

void PositionLimits::validate() const {
  if (u_min.size() != u_max.size() || u_min.size() == 0) {
    throw std::invalid_argument(
        "PositionLimits: u_min and u_max must be nonempty and equally sized");
  }
  for (Eigen::Index i = 0; i < u_min.size(); ++i) {
    if (!(u_min(i) < u_max(i))) {
      std::ostringstream msg;
      msg << "PositionLimits: channel " << i << " has u_min=" << u_min(i)
          << " >= u_max=" << u_max(i);
      throw std::invalid_argument(msg.str());
    }
  }
}

ExtendedSystem build_extended_system(const PlantModel& plant) {
  plant.validate();
  const int np = plant.n_p();
  const int m = plant.m();
  const int n = np + m;

  ExtendedSystem ext;
  ext.n_p = np;
  ext.m = m;
  ext.A = Matrix::Zero(n, n);
  ext.A.topRightCorner(m, np) = plant.C_p_reg;
  ext.A.bottomRightCorner(np, np) = plant.A_p;
  ext.B = Matrix::Zero(n, m);
  ext.B.topRows(m) = plant.D_p_reg;
  ext.B.bottomRows(np) = plant.B_p;
  ext.B_cmd = Matrix::Zero(n, m);
  ext.B_cmd.topRows(m) = -Matrix::Identity(m, m);
  return ext;
}

Vector saturate(const Vector& u_cmd, const PositionLimits& limits) {
  limits.validate();
  if (u_cmd.size() != limits.u_min.size()) {
    throw std::invalid_argument("saturate: u_cmd size does not match limits");
  }
  return u_cmd.cwiseMax(limits.u_min).cwiseMin(limits.u_max);
}

HurwitzReport hurwitz_report(const Matrix& a_p) {
  const std::vector<Complex> eigs = eigenvalues(a_p);
  HurwitzReport report;
  report.hurwitz = true;
  report.worst = Complex(-std::numeric_limits<double>::infinity(), 0.0);
  for (const Complex& ev : eigs) {
    if (ev.real() > report.worst.real()) {
      report.worst = ev;
    }
    if (!(ev.real() < kHurwitzMargin)) {
      report.hurwitz = false;
    }
  }
  return report;
}

bool check_hurwitz(const Matrix& a_p) {
  if (a_p.rows() != a_p.cols() || a_p.rows() == 0) {
    throw std::invalid_argument("check_hurwitz: matrix must be square");
  }
  return hurwitz_report(a_p).hurwitz;
}

bool check_augmentation_controllable(const PlantModel& plant) {
  const int np = plant.n_p();
  const int m = plant.m();
  Matrix pencil(np + m, np + m);
  pencil.topLeftCorner(np, np) = plant.A_p;
  pencil.topRightCorner(np, m) = plant.B_p;
  pencil.bottomLeftCorner(m, np) = plant.C_p_reg;
  pencil.bottomRightCorner(m, m) = plant.D_p_reg;
  return is_nonsingular(pencil, 1e-10);
}

}  // namespace servoaw
