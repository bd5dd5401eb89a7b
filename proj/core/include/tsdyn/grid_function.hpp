#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <vector>

#include "tsdyn/time_scale.hpp"

namespace tsdyn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A vector-valued function sampled on scale points, with an interpolation
/// rule for dense runs. Carrier for right-hand sides, solutions and iterates.
class GridFunction {
 public:
  enum class Interp { Linear, Constant };
  /// Behaviour outside the sampled window: extend by zero, or repeat the
  /// pattern period (requires a periodic scale and samples covering at least
  /// one full period).
  enum class Extension { Zero, Periodic };

  GridFunction(std::shared_ptr<const TimeScale> scale, std::vector<double> times,
               std::vector<Vector> values, Interp interp = Interp::Linear,
               Extension ext = Extension::Zero);

  /// Samples fn at every structural point up to t_max plus dense interior
  /// points at spacing <= h_grid.
  static GridFunction sample(std::shared_ptr<const TimeScale> scale,
                             const std::function<Vector(double)>& fn, double t_max,
                             double h_grid, Interp interp = Interp::Linear,
                             Extension ext = Extension::Zero);

  int dim() const { return values_.empty() ? 0 : static_cast<int>(values_.front().size()); }
  const TimeScale& scale() const { return *scale_; }
  const std::shared_ptr<const TimeScale>& scale_ptr() const { return scale_; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<Vector>& values() const { return values_; }
  double t_min() const { return times_.front(); }
  double t_max() const { return times_.back(); }
  Interp interp() const { return interp_; }
  Extension extension() const { return ext_; }

  /// Value at scale point t (interpolated within dense runs, extended
  /// outside the window per the extension rule).
  Vector eval(double t) const;

  /// max_i |v_i| (Euclidean norm per sample).
  double sup_norm() const;

 private:
  friend Vector delta_derivative(const GridFunction& f, double t);
  friend Vector delta_integral(const GridFunction& f, double tau, double s);

  struct Run {
    int first;
    int last;  // inclusive sample indices of a maximal dense run
  };
  int locate(double t) const;          // index of sample at/just below t, -1 if below window
  const Run* run_containing(int idx) const;

  std::shared_ptr<const TimeScale> scale_;
  std::vector<double> times_;
  std::vector<Vector> values_;
  std::vector<Run> runs_;
  Interp interp_;
  Extension ext_;
};

/// Delta-derivative of f at scale point t: forward difference across gaps,
/// quadratic one-sided stencil (two-step Richardson) inside dense runs.
Vector delta_derivative(const GridFunction& f, double t);

/// Delta-integral of f over [tau, s]: exact integral of the interpolant on
/// dense runs plus sum of mu(t) f(t) over right-scattered points in [tau, s).
Vector delta_integral(const GridFunction& f, double tau, double s);

/// Callable-backed delta-integral (composite Simpson at step h_quad on dense
/// runs). Used where the integrand is known in closed form.
Vector delta_integral(const TimeScale& ts, const std::function<Vector(double)>& fn,
                      double tau, double s, double h_quad = 1e-3);

}  // namespace tsdyn
