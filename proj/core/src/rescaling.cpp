#include "tsdyn/rescaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tsdyn/error.hpp"

namespace tsdyn {

namespace {
double gap_slope(double mu) { return std::log1p(mu) / mu; }
}  // namespace

TimeRescaling::TimeRescaling(std::shared_ptr<const TimeScale> scale)
    : scale_(std::move(scale)) {
  if (!scale_) fail(ErrorCode::InvalidInput, "rescaling needs a scale");
  pattern_span_t_ = scale_->is_periodic() ? scale_->period() : scale_->pattern_end();
  double s = 0.0;
  if (pattern_span_t_ <= 0.0) {
    // single isolated point {0} without period: degenerate truncated view
    nodes_.push_back({0.0, 0.0, 1.0, false, 0.0});
    pattern_span_s_ = 0.0;
    return;
  }
  for (const auto& seg : scale_->decompose(0.0, pattern_span_t_)) {
    if (seg.gap) {
      double mu = seg.end - seg.start;
      nodes_.push_back({seg.start, s, gap_slope(mu), true, mu});
      s += std::log1p(mu);
    } else {
      nodes_.push_back({seg.start, s, 1.0, false, 0.0});
      s += seg.end - seg.start;
    }
  }
  pattern_span_s_ = s;
}

TimeRescaling rescale(std::shared_ptr<const TimeScale> scale) {
  return TimeRescaling(std::move(scale));
}

int TimeRescaling::find_node_t(double r) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r,
                             [](double v, const Node& n) { return v < n.t; });
  int i = static_cast<int>(std::distance(nodes_.begin(), it)) - 1;
  return std::max(i, 0);
}

int TimeRescaling::find_node_s(double rs) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), rs,
                             [](double v, const Node& n) { return v < n.s; });
  int i = static_cast<int>(std::distance(nodes_.begin(), it)) - 1;
  return std::max(i, 0);
}

double TimeRescaling::eval(double t) const {
  if (!(t >= 0.0)) fail(ErrorCode::InvalidInput, "rescaling defined for t >= 0");
  if (!scale_->is_periodic()) {
    if (t >= pattern_span_t_)
      return pattern_span_s_ + (t - pattern_span_t_);  // truncated tail: mu = 0, slope 1
    int i = find_node_t(t);
    return nodes_[i].s + nodes_[i].slope * (t - nodes_[i].t);
  }
  const double period = pattern_span_t_;
  double k = std::floor(t / period);
  double r = t - k * period;
  if (r >= period - TimeScale::point_tol(t)) {
    k += 1.0;
    r = 0.0;
  }
  int i = find_node_t(r);
  return k * pattern_span_s_ + nodes_[i].s + nodes_[i].slope * (r - nodes_[i].t);
}

double TimeRescaling::inverse(double s) const {
  if (!(s >= 0.0)) fail(ErrorCode::InvalidInput, "rescaling image starts at 0");
  if (!scale_->is_periodic()) {
    if (s > pattern_span_s_ + TimeScale::point_tol(s))
      fail(ErrorCode::BeyondHorizon, "s is past the truncated scale's image");
    int i = find_node_s(std::min(s, pattern_span_s_));
    return nodes_[i].t + (s - nodes_[i].s) / nodes_[i].slope;
  }
  const double sp = pattern_span_s_;
  double k = std::floor(s / sp);
  double rs = s - k * sp;
  if (rs >= sp - TimeScale::point_tol(s)) {
    k += 1.0;
    rs = 0.0;
  }
  int i = find_node_s(rs);
  return k * pattern_span_t_ + nodes_[i].t + (rs - nodes_[i].s) / nodes_[i].slope;
}

double TimeRescaling::period_image() const {
  if (!scale_->is_periodic())
    fail(ErrorCode::InvalidInput, "period image undefined for truncated scales");
  return pattern_span_s_;
}

double TimeRescaling::horizon() const {
  return scale_->is_periodic() ? std::numeric_limits<double>::infinity() : pattern_span_s_;
}

}  // namespace tsdyn
