#pragma once

#include <Eigen/Core>
#include <vector>

#include "tsdyn/grid_function.hpp"
#include "tsdyn/lifted_system.hpp"

namespace tsdyn {

/// A forcing in s-time aligned with the lifted system's structure: sampled
/// (linearly interpolated) on images of dense pieces, constant on gap
/// images. Periodic extension mirrors the grid function's extension rule.
class SFunction {
 public:
  struct Seg {
    double s0;
    double s1;
    bool constant;
    Vector c;                     // constant segments
    std::vector<double> s_nodes;  // sampled segments
    std::vector<Vector> v;
  };

  SFunction(std::vector<Seg> segs, int dim, double period_s);

  int dim() const { return dim_; }
  double period() const { return period_s_; }  // 0 = zero extension
  double window_end() const { return segs_.empty() ? 0.0 : segs_.back().s1; }

  Vector eval(double s) const;
  double sup_norm() const;

  const std::vector<Seg>& segments() const { return segs_; }

 private:
  std::vector<Seg> segs_;
  int dim_ = 0;
  double period_s_ = 0.0;
};

/// Lifts a time-scale right-hand side to the ODE side: f = bold-f on images
/// of dense pieces, and the constant
///   f0 = [log(E + mu A)/log(1+mu)] A^-1 bold-f(t0)
/// on each gap image. Complex gap values are embedded into the doubled
/// representation. Requires A(t0) invertible at every scattered point.
SFunction lift_rhs(const GridFunction& f, const LiftedSystem& sys);

/// The single-gap transform by itself (t0 right-scattered).
Eigen::VectorXcd lift_rhs_gap(const Vector& f_t0, double t0, const PiecewiseMatrix& A);

/// Inverse of the gap transform:
///   bold-f(t0) = log(1+mu) (log[E + mu A])^-1 A f0.
/// Throws SingularLogFactor when the log factor is singular.
Vector project_rhs(const Eigen::VectorXcd& f0, double t0, const PiecewiseMatrix& A);

}  // namespace tsdyn
