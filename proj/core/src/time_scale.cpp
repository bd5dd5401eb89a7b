#include "tsdyn/time_scale.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tsdyn/error.hpp"

namespace tsdyn {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::PointNotInScale: return "PointNotInScale";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::UnboundedRequired: return "UnboundedRequired";
    case ErrorCode::TruncatedTail: return "TruncatedTail";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::DefectiveAmbiguity: return "DefectiveAmbiguity";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::NotRegressive: return "NotRegressive";
    case ErrorCode::NonPositiveGapMatrix: return "NonPositiveGapMatrix";
    case ErrorCode::SingularCoefficient: return "SingularCoefficient";
    case ErrorCode::SingularLogFactor: return "SingularLogFactor";
    case ErrorCode::BeyondHorizon: return "BeyondHorizon";
    case ErrorCode::HorizonExceeded: return "HorizonExceeded";
    case ErrorCode::NotHyperbolic: return "NotHyperbolic";
    case ErrorCode::NonPeriodicUnsupported: return "NonPeriodicUnsupported";
    case ErrorCode::ToleranceUnreachable: return "ToleranceUnreachable";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::GridPointTooLarge: return "GridPointTooLarge";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::LipschitzWitness: return "LipschitzWitness";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

double TimeScale::point_tol(double t) {
  return kPointTol * std::max(1.0, std::abs(t));
}

TimeScale::TimeScale(std::vector<Interval> pieces, std::optional<double> period)
    : pieces_(std::move(pieces)) {
  if (pieces_.empty()) fail(ErrorCode::InvalidInput, "time scale needs at least one interval");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    if (!std::isfinite(p.lo) || !std::isfinite(p.hi) || p.lo > p.hi || p.lo < 0.0)
      fail(ErrorCode::InvalidInput, "interval " + std::to_string(i) + " is invalid");
    if (i > 0 && pieces_[i - 1].hi >= p.lo - point_tol(p.lo))
      fail(ErrorCode::InvalidInput,
           "interval " + std::to_string(i) + " overlaps or touches its predecessor");
  }
  if (std::abs(pieces_.front().lo) > kPointTol)
    fail(ErrorCode::InvalidInput, "interval 0 must start at 0 (the scale must contain 0)");
  pieces_.front().lo = 0.0;
  if (period) {
    if (!std::isfinite(*period) || *period <= 0.0)
      fail(ErrorCode::InvalidInput, "period must be positive");
    if (*period < pattern_end() - point_tol(*period))
      fail(ErrorCode::InvalidInput, "period must be >= the end of the last interval");
    period_ = std::max(*period, pattern_end());
    periodic_ = true;
  }
}

TimeScale TimeScale::periodic(std::vector<Interval> pieces, double period) {
  return TimeScale(std::move(pieces), period);
}

TimeScale TimeScale::truncated(std::vector<Interval> pieces) {
  return TimeScale(std::move(pieces), std::nullopt);
}

TimeScale TimeScale::reals() { return periodic({{0.0, 1.0}}, 1.0); }

TimeScale TimeScale::integers() { return periodic({{0.0, 0.0}}, 1.0); }

TimeScale TimeScale::pulse(double on, double off) {
  if (on <= 0.0 || off <= 0.0)
    fail(ErrorCode::InvalidInput, "pulse scale needs positive interval and gap lengths");
  return periodic({{0.0, on}}, on + off);
}

double TimeScale::period() const {
  if (!periodic_) fail(ErrorCode::InvalidInput, "time scale is not periodic");
  return period_;
}

double TimeScale::reduce(double t, long& copies) const {
  copies = 0;
  if (!periodic_) return t;
  double k = std::floor(t / period_);
  double r = t - k * period_;
  if (r >= period_ - point_tol(t)) {
    k += 1.0;
    r = 0.0;
  }
  if (r < 0.0) r = 0.0;
  copies = static_cast<long>(k);
  return r;
}

int TimeScale::find_piece(double r) const {
  const double tol = point_tol(r);
  // last piece with lo <= r + tol
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), r + tol,
                             [](double v, const Interval& p) { return v < p.lo; });
  if (it == pieces_.begin()) return -1;
  int i = static_cast<int>(std::distance(pieces_.begin(), it)) - 1;
  if (r <= pieces_[i].hi + tol) return i;
  return -1;
}

std::optional<double> TimeScale::gap_after(int i) const {
  double next;
  if (i + 1 < static_cast<int>(pieces_.size())) {
    next = pieces_[i + 1].lo;
  } else if (periodic_) {
    next = period_;  // wraps to the next copy's first piece, which starts at 0
  } else {
    return std::nullopt;
  }
  return next - pieces_[i].hi;
}

bool TimeScale::contains(double t) const {
  if (!std::isfinite(t) || t < -point_tol(t)) return false;
  if (!periodic_ && t > pattern_end() + point_tol(t)) return false;
  long k;
  double r = reduce(std::max(t, 0.0), k);
  return find_piece(r) >= 0;
}

double TimeScale::sigma(double t) const {
  if (!contains(t)) fail(ErrorCode::PointNotInScale, "sigma: t = " + std::to_string(t) + " not in scale");
  long k;
  double r = reduce(t, k);
  int i = find_piece(r);
  const double tol = point_tol(t);
  if (r < pieces_[i].hi - tol) return t;  // right-dense inside a piece
  auto gap = gap_after(i);
  if (!gap) return t;  // truncated tail convention
  if (*gap <= tol) return t;  // seamless continuation into the next piece/copy
  double base = periodic_ ? static_cast<double>(k) * period_ : 0.0;
  double next = (i + 1 < static_cast<int>(pieces_.size())) ? pieces_[i + 1].lo : period_;
  return base + next;
}

double TimeScale::graininess(double t) const {
  double mu = sigma(t) - t;
  return (mu <= point_tol(t)) ? 0.0 : mu;
}

bool TimeScale::right_scattered(double t) const { return graininess(t) > 0.0; }

bool TimeScale::is_truncated_tail(double t) const {
  return !periodic_ && std::abs(t - pattern_end()) <= point_tol(t);
}

double TimeScale::floor(double t) const {
  if (!std::isfinite(t) || t < -point_tol(t))
    fail(ErrorCode::InvalidInput, "floor: t must be >= 0");
  t = std::max(t, 0.0);
  if (!periodic_ && t >= pattern_end()) return pattern_end();
  long k;
  double r = reduce(t, k);
  double base = periodic_ ? static_cast<double>(k) * period_ : 0.0;
  const double tol = point_tol(t);
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), r + tol,
                             [](double v, const Interval& p) { return v < p.lo; });
  if (it == pieces_.begin()) return base;  // r below first piece start (only r ~ 0)
  int i = static_cast<int>(std::distance(pieces_.begin(), it)) - 1;
  return base + std::clamp(r, pieces_[i].lo, pieces_[i].hi);
}

std::vector<TimeScale::Segment> TimeScale::decompose(double from, double to) const {
  if (!contains(from) || !contains(to))
    fail(ErrorCode::PointNotInScale, "decompose: endpoints must be scale points");
  if (to < from) fail(ErrorCode::InvalidInput, "decompose: to < from");
  std::vector<Segment> out;
  double u = from;
  while (u < to - point_tol(u)) {
    long k;
    double r = reduce(u, k);
    int i = find_piece(r);
    double base = periodic_ ? static_cast<double>(k) * period_ : 0.0;
    double piece_end = base + pieces_[i].hi;
    double v = std::min(piece_end, to);
    if (v > u + point_tol(u)) {
      out.push_back({u, v, false});
      u = v;
      continue;
    }
    double s = sigma(u);
    if (s <= u + point_tol(u))
      fail(ErrorCode::InvalidInput, "decompose: no structural progress at t = " + std::to_string(u));
    out.push_back({u, s, true});
    u = s;
  }
  return out;
}

TimeScale::SyndeticResult TimeScale::is_syndetic() const {
  if (!periodic_)
    fail(ErrorCode::UnboundedRequired,
         "syndetic query requires an unbounded (periodic) scale; truncated views are only "
         "computational windows");
  return {true, observed_sup_gap()};
}

double TimeScale::observed_sup_gap() const {
  double sup = 0.0;
  for (const auto& sp : scattered_pattern_points()) sup = std::max(sup, sp.mu);
  return sup;
}

int TimeScale::piece_index_of(double t) const {
  long k;
  double r = reduce(floor(t), k);
  int i = find_piece(r);
  if (i < 0) fail(ErrorCode::PointNotInScale, "piece_index_of: t not resolvable");
  return i;
}

std::vector<TimeScale::ScatteredPoint> TimeScale::scattered_pattern_points() const {
  std::vector<ScatteredPoint> out;
  for (int i = 0; i < static_cast<int>(pieces_.size()); ++i) {
    auto gap = gap_after(i);
    if (gap && *gap > point_tol(pieces_[i].hi))
      out.push_back({pieces_[i].hi, *gap, i});
  }
  return out;
}

std::vector<double> TimeScale::sample_points(double t_max, double h) const {
  if (h <= 0.0) fail(ErrorCode::InvalidInput, "sample spacing must be positive");
  if (!periodic_) t_max = std::min(t_max, pattern_end());
  std::vector<double> pts;
  double end = floor(t_max);
  for (const auto& seg : decompose(0.0, end)) {
    if (seg.gap) {
      pts.push_back(seg.start);
      continue;
    }
    int n = std::max(1, static_cast<int>(std::ceil((seg.end - seg.start) / h)));
    for (int j = 0; j < n; ++j)
      pts.push_back(seg.start + (seg.end - seg.start) * j / n);
  }
  pts.push_back(end);
  // isolated starting point scales (e.g. integers) produce only gap starts;
  // ensure 0 present
  if (pts.empty() || pts.front() != 0.0) pts.insert(pts.begin(), 0.0);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double a, double b) { return std::abs(a - b) <= point_tol(a); }),
            pts.end());
  return pts;
}

TimeScale TimeScale::shifted(double t0) const {
  if (!contains(t0)) fail(ErrorCode::PointNotInScale, "shifted: t0 must be a scale point");
  if (std::abs(t0) <= point_tol(t0)) return *this;
  if (!periodic_) {
    std::vector<Interval> np;
    for (const auto& p : pieces_) {
      if (p.hi < t0 - point_tol(t0)) continue;
      np.push_back({std::max(p.lo, t0) - t0, p.hi - t0});
    }
    return TimeScale(std::move(np), std::nullopt);
  }
  long k;
  double r = reduce(t0, k);
  int j = find_piece(r);
  std::vector<Interval> np;
  // remainder of piece j starting at r
  np.push_back({0.0, pieces_[j].hi - r});
  for (int i = j + 1; i < static_cast<int>(pieces_.size()); ++i)
    np.push_back({pieces_[i].lo - r, pieces_[i].hi - r});
  for (int i = 0; i < j; ++i)
    np.push_back({pieces_[i].lo + period_ - r, pieces_[i].hi + period_ - r});
  // leading part of piece j in the next copy, up to the period mark
  if (r > pieces_[j].lo + point_tol(r))
    np.push_back({pieces_[j].lo + period_ - r, period_});
  while (!np.empty() && np.back().lo >= period_ - point_tol(period_)) np.pop_back();
  return TimeScale(std::move(np), period_);
}

}  // namespace tsdyn
