#include "tsdyn/piecewise_matrix.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "tsdyn/error.hpp"
#include "tsdyn/linalg.hpp"

namespace tsdyn {

PiecewiseMatrix PiecewiseMatrix::constant(std::shared_ptr<const TimeScale> scale, Matrix value) {
  std::vector<Matrix> values(scale->pieces().size(), value);
  return per_piece(std::move(scale), std::move(values));
}

PiecewiseMatrix PiecewiseMatrix::per_piece(std::shared_ptr<const TimeScale> scale,
                                           std::vector<Matrix> values) {
  if (!scale) fail(ErrorCode::InvalidInput, "piecewise matrix needs a scale");
  if (values.size() != scale->pieces().size())
    fail(ErrorCode::DomainMismatch, "need exactly one matrix per pattern piece");
  PiecewiseMatrix out;
  out.scale_ = std::move(scale);
  out.values_ = std::move(values);
  out.dim_ = static_cast<int>(out.values_.front().rows());
  for (const auto& v : out.values_)
    if (v.rows() != out.dim_ || v.cols() != out.dim_ || !v.allFinite())
      fail(ErrorCode::InvalidInput, "piece matrices must be square, finite, same dimension");
  return out;
}

PiecewiseMatrix PiecewiseMatrix::from_function(std::shared_ptr<const TimeScale> scale, int dim,
                                               std::function<Matrix(double)> fn) {
  if (!scale || !fn || dim <= 0) fail(ErrorCode::InvalidInput, "invalid function coefficient");
  PiecewiseMatrix out;
  out.scale_ = std::move(scale);
  out.dim_ = dim;
  out.fn_ = std::move(fn);
  return out;
}

bool PiecewiseMatrix::is_constant() const {
  if (fn_) return false;
  for (const auto& v : values_)
    if ((v - values_.front()).norm() > 1e-14 * (1.0 + values_.front().norm())) return false;
  return true;
}

Matrix PiecewiseMatrix::eval(double t) const {
  const double tt = scale_->floor(t);
  if (fn_) return fn_(tt);
  return values_[scale_->piece_index_of(tt)];
}

const std::vector<Matrix>& PiecewiseMatrix::piece_values() const {
  if (fn_) fail(ErrorCode::InvalidInput, "function-valued coefficient has no piece table");
  return values_;
}

double PiecewiseMatrix::sup_norm() const {
  double sup = 0.0;
  if (!fn_) {
    for (const auto& v : values_) sup = std::max(sup, v.operatorNorm());
    return sup;
  }
  for (const auto& p : scale_->pieces()) {
    const int k = 16;
    for (int j = 0; j <= k; ++j) {
      double t = p.lo + (p.hi - p.lo) * j / k;
      sup = std::max(sup, fn_(t).operatorNorm());
    }
  }
  return sup;
}

double PiecewiseMatrix::sup_inverse_norm() const {
  double sup = 0.0;
  auto account = [&sup](const Matrix& v) {
    double smin = detail::smallest_singular_value(v);
    sup = std::max(sup, smin > 0.0 ? 1.0 / smin : std::numeric_limits<double>::infinity());
  };
  if (!fn_) {
    for (const auto& v : values_) account(v);
    return sup;
  }
  for (const auto& p : scale_->pieces()) {
    const int k = 16;
    for (int j = 0; j <= k; ++j) account(fn_(p.lo + (p.hi - p.lo) * j / k));
  }
  return sup;
}

}  // namespace tsdyn
