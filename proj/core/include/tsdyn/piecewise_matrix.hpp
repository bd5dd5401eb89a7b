#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "tsdyn/grid_function.hpp"
#include "tsdyn/time_scale.hpp"

namespace tsdyn {

/// Matrix-valued coefficient on a time scale: one value per pattern piece
/// (file input) or a function of t (library input). Values in gaps are
/// taken from the gap's left endpoint [t]_T.
class PiecewiseMatrix {
 public:
  static PiecewiseMatrix constant(std::shared_ptr<const TimeScale> scale, Matrix value);
  static PiecewiseMatrix per_piece(std::shared_ptr<const TimeScale> scale,
                                   std::vector<Matrix> values);
  static PiecewiseMatrix from_function(std::shared_ptr<const TimeScale> scale, int dim,
                                       std::function<Matrix(double)> fn);

  int dim() const { return dim_; }
  const TimeScale& scale() const { return *scale_; }
  const std::shared_ptr<const TimeScale>& scale_ptr() const { return scale_; }
  bool constant_per_piece() const { return !fn_; }
  bool is_constant() const;

  /// Coefficient at t (any t >= 0; gaps evaluate at [t]_T).
  Matrix eval(double t) const;

  const std::vector<Matrix>& piece_values() const;

  double sup_norm() const;          // sup ||A(t)|| over the pattern (sampled if function-valued)
  double sup_inverse_norm() const;  // sup ||A(t)^-1||; +inf if singular somewhere

 private:
  PiecewiseMatrix() = default;

  std::shared_ptr<const TimeScale> scale_;
  int dim_ = 0;
  std::vector<Matrix> values_;
  std::function<Matrix(double)> fn_;
};

}  // namespace tsdyn
