#include "tsdyn/regressivity.hpp"

#include <cmath>

#include "tsdyn/error.hpp"
#include "tsdyn/linalg.hpp"
#include "tsdyn/matrix_log.hpp"

namespace tsdyn {

RegressivityReport regressivity_report(const TimeScale& ts, const PiecewiseMatrix& A) {
  // the coefficient must live on the same pattern
  const auto& sp = ts.pieces();
  const auto& ap = A.scale().pieces();
  bool same = sp.size() == ap.size() && ts.is_periodic() == A.scale().is_periodic();
  for (std::size_t i = 0; same && i < sp.size(); ++i)
    same = std::abs(sp[i].lo - ap[i].lo) <= TimeScale::kPointTol &&
           std::abs(sp[i].hi - ap[i].hi) <= TimeScale::kPointTol;
  if (!same)
    fail(ErrorCode::DomainMismatch, "coefficient pattern does not match the scale pattern");

  RegressivityReport report;
  const int n = A.dim();
  const Matrix eye = Matrix::Identity(n, n);
  for (const auto& sp_pt : ts.scattered_pattern_points()) {
    Matrix M = eye + sp_pt.mu * A.eval(sp_pt.t);
    double smin = detail::smallest_singular_value(M);
    if (smin <= 1e-12 * std::max(1.0, M.norm())) {
      report.regressive = false;
      report.uniformly_regressive = false;
      report.positively_regressive = false;
      report.witnesses.push_back({sp_pt.t, sp_pt.mu, M, "E + mu A is singular"});
      continue;
    }
    report.sup_inverse_norm = std::max(report.sup_inverse_norm, 1.0 / smin);
    auto positivity = classify_positivity(M);
    if (positivity.outcome != Positivity::Positive) {
      report.positively_regressive = false;
      report.witnesses.push_back(
          {sp_pt.t, sp_pt.mu, M,
           positivity.outcome == Positivity::NotPositive
               ? "E + mu A is not positive (odd negative Jordan structure)"
               : "positivity of E + mu A could not be resolved"});
    }
  }
  report.uniformly_regressive = report.regressive;
  return report;
}

}  // namespace tsdyn
