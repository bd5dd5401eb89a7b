#pragma once

#include <memory>
#include <vector>

#include "tsdyn/time_scale.hpp"

namespace tsdyn {

/// The time substitution s(t): piecewise linear with slope 1 inside pieces
/// and slope log(1+mu)/mu across gaps, built in closed form (the integrand
/// is constant per structural segment). s(0) = 0, strictly increasing.
class TimeRescaling {
 public:
  struct Node {
    double t;      // segment start, pattern coordinate
    double s;      // s(t)
    double slope;  // on [t, next t)
    bool gap;
    double mu;     // gap length (0 on dense segments)
  };

  explicit TimeRescaling(std::shared_ptr<const TimeScale> scale);

  const TimeScale& scale() const { return *scale_; }
  const std::shared_ptr<const TimeScale>& scale_ptr() const { return scale_; }

  double eval(double t) const;
  /// Inverse map; exact per segment. Throws BeyondHorizon past the end of a
  /// truncated scale's image.
  double inverse(double s) const;

  /// s(P), the period of the lifted system. Throws for truncated scales.
  double period_image() const;
  /// s(b_last) for truncated scales, +inf for periodic ones.
  double horizon() const;

  const std::vector<Node>& pattern_nodes() const { return nodes_; }

 private:
  int find_node_t(double r) const;
  int find_node_s(double rs) const;

  std::shared_ptr<const TimeScale> scale_;
  std::vector<Node> nodes_;
  double pattern_span_t_ = 0.0;  // P (periodic) or b_last (truncated)
  double pattern_span_s_ = 0.0;  // s of the above
};

TimeRescaling rescale(std::shared_ptr<const TimeScale> scale);
inline TimeRescaling rescale(const TimeScale& scale) {
  return TimeRescaling(std::make_shared<TimeScale>(scale));
}

}  // namespace tsdyn
