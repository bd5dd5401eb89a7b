#include "tsdyn/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tsdyn/error.hpp"

namespace tsdyn {

GridFunction::GridFunction(std::shared_ptr<const TimeScale> scale, std::vector<double> times,
                           std::vector<Vector> values, Interp interp, Extension ext)
    : scale_(std::move(scale)),
      times_(std::move(times)),
      values_(std::move(values)),
      interp_(interp),
      ext_(ext) {
  if (!scale_) fail(ErrorCode::InvalidInput, "grid function needs a scale");
  if (times_.empty() || times_.size() != values_.size())
    fail(ErrorCode::InvalidInput, "grid function needs matching, non-empty samples");
  const auto n = values_.front().size();
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!scale_->contains(times_[i]))
      fail(ErrorCode::PointNotInScale,
           "sample " + std::to_string(i) + " at t = " + std::to_string(times_[i]) +
               " is not a scale point");
    if (i > 0 && times_[i] <= times_[i - 1])
      fail(ErrorCode::InvalidInput, "sample times must be strictly increasing");
    if (values_[i].size() != n)
      fail(ErrorCode::InvalidInput, "sample dimensions must agree");
  }
  if (ext_ == Extension::Periodic) {
    if (!scale_->is_periodic())
      fail(ErrorCode::InvalidInput, "periodic extension needs a periodic scale");
    if (times_.back() - times_.front() < scale_->period() - TimeScale::point_tol(times_.back()))
      fail(ErrorCode::InvalidInput, "periodic extension needs samples covering one period");
  }
  // maximal dense runs: consecutive samples not separated by a gap
  runs_.push_back({0, 0});
  for (int i = 1; i < static_cast<int>(times_.size()); ++i) {
    bool linked = false;
    if (!scale_->right_scattered(times_[i - 1])) {
      auto segs = scale_->decompose(times_[i - 1], times_[i]);
      linked = std::none_of(segs.begin(), segs.end(),
                            [](const TimeScale::Segment& s) { return s.gap; });
    }
    if (linked)
      runs_.back().last = i;
    else
      runs_.push_back({i, i});
  }
}

GridFunction GridFunction::sample(std::shared_ptr<const TimeScale> scale,
                                  const std::function<Vector(double)>& fn, double t_max,
                                  double h_grid, Interp interp, Extension ext) {
  auto pts = scale->sample_points(t_max, h_grid);
  std::vector<Vector> vals;
  vals.reserve(pts.size());
  for (double t : pts) vals.push_back(fn(t));
  return GridFunction(std::move(scale), std::move(pts), std::move(vals), interp, ext);
}

int GridFunction::locate(double t) const {
  auto it = std::upper_bound(times_.begin(), times_.end(), t + TimeScale::point_tol(t));
  return static_cast<int>(std::distance(times_.begin(), it)) - 1;
}

const GridFunction::Run* GridFunction::run_containing(int idx) const {
  for (const auto& r : runs_)
    if (idx >= r.first && idx <= r.last) return &r;
  return nullptr;
}

Vector GridFunction::eval(double t) const {
  const double tol = TimeScale::point_tol(t);
  if (t > times_.back() + tol || t < times_.front() - tol) {
    if (ext_ == Extension::Periodic) {
      const double period = scale_->period();
      double shift = std::floor((t - times_.front()) / period) * period;
      double r = t - shift;
      if (r > times_.back() + tol) r -= period;  // window longer than one period
      if (r < times_.front() - tol) r += period;
      if (r > times_.back() + tol || r < times_.front() - tol)
        fail(ErrorCode::BeyondHorizon, "eval: t outside the periodically-extended window");
      return eval(r);
    }
    return Vector::Zero(dim());
  }
  if (!scale_->contains(t))
    fail(ErrorCode::PointNotInScale, "eval: t = " + std::to_string(t) + " not in scale");
  int i = locate(t);
  if (i < 0) i = 0;
  if (std::abs(times_[i] - t) <= tol) return values_[i];
  if (i + 1 >= static_cast<int>(times_.size()))
    fail(ErrorCode::InsufficientSamples, "eval: t beyond last sample");
  const Run* run = run_containing(i);
  if (!run || i + 1 > run->last)
    fail(ErrorCode::InsufficientSamples,
         "eval: t = " + std::to_string(t) + " falls between dense runs");
  if (interp_ == Interp::Constant) return values_[i];
  double w = (t - times_[i]) / (times_[i + 1] - times_[i]);
  return (1.0 - w) * values_[i] + w * values_[i + 1];
}

double GridFunction::sup_norm() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, v.norm());
  return m;
}

Vector delta_derivative(const GridFunction& f, double t) {
  const TimeScale& ts = f.scale();
  if (!ts.contains(t)) fail(ErrorCode::PointNotInScale, "delta_derivative: t not in scale");
  if (ts.is_truncated_tail(t))
    fail(ErrorCode::TruncatedTail,
         "delta_derivative: undefined at the truncated tail of an aperiodic scale");
  double mu = ts.graininess(t);
  if (mu > 0.0) return (f.eval(ts.sigma(t)) - f.eval(t)) / mu;

  // dense case: quadratic through three neighbouring samples of the run
  int i = f.locate(t);
  if (i < 0) fail(ErrorCode::InsufficientSamples, "delta_derivative: t below sample window");
  const auto* run = f.run_containing(i);
  if (!run || run->last - run->first + 1 < 3)
    fail(ErrorCode::InsufficientSamples,
         "delta_derivative: need at least 3 samples in the dense piece");
  int a = std::clamp(i, run->first, run->last - 2);
  // prefer a forward-facing stencil when t sits on/near sample i
  const double x0 = f.times()[a], x1 = f.times()[a + 1], x2 = f.times()[a + 2];
  const Vector &y0 = f.values()[a], &y1 = f.values()[a + 1], &y2 = f.values()[a + 2];
  double c0 = (2.0 * t - x1 - x2) / ((x0 - x1) * (x0 - x2));
  double c1 = (2.0 * t - x0 - x2) / ((x1 - x0) * (x1 - x2));
  double c2 = (2.0 * t - x0 - x1) / ((x2 - x0) * (x2 - x1));
  return c0 * y0 + c1 * y1 + c2 * y2;
}

Vector delta_integral(const GridFunction& f, double tau, double s) {
  const TimeScale& ts = f.scale();
  if (!ts.contains(tau) || !ts.contains(s))
    fail(ErrorCode::PointNotInScale, "delta_integral: endpoints must be scale points");
  if (s < tau) fail(ErrorCode::InvalidInput, "delta_integral: require tau <= s");
  Vector acc = Vector::Zero(f.dim());
  for (const auto& seg : ts.decompose(tau, s)) {
    if (seg.gap) {
      acc += (seg.end - seg.start) * f.eval(seg.start);
      continue;
    }
    // exact integral of the interpolant over [start, end], clipped per cell.
    // A right-scattered segment end carries the jump-quotient value of the
    // gap, not the left limit; that point has measure zero here, so the last
    // cell extrapolates from the interior instead of using the stored value.
    const bool end_scattered = ts.right_scattered(seg.end);
    int i = std::max(f.locate(seg.start), 0);
    double u = seg.start;
    Vector fu = f.eval(u);
    while (u < seg.end - TimeScale::point_tol(u)) {
      while (i + 1 < static_cast<int>(f.times().size()) && f.times()[i + 1] <= u) ++i;
      double cell_end = (i + 1 < static_cast<int>(f.times().size()))
                            ? std::min(f.times()[i + 1], seg.end)
                            : seg.end;
      double w = cell_end - u;
      if (w <= 0.0) break;
      if (f.interp() == GridFunction::Interp::Constant) {
        acc += w * fu;
        u = cell_end;
        fu = (u < seg.end - TimeScale::point_tol(u)) ? f.eval(u) : fu;
        continue;
      }
      Vector fv;
      bool last_cell = cell_end >= seg.end - TimeScale::point_tol(cell_end);
      if (last_cell && end_scattered && i >= 1) {
        const auto& tt = f.times();
        const auto& vv = f.values();
        fv = vv[i] + (vv[i] - vv[i - 1]) * ((cell_end - tt[i]) / (tt[i] - tt[i - 1]));
      } else {
        fv = f.eval(cell_end);
      }
      acc += 0.5 * w * (fu + fv);
      u = cell_end;
      fu = std::move(fv);
    }
  }
  return acc;
}

Vector delta_integral(const TimeScale& ts, const std::function<Vector(double)>& fn,
                      double tau, double s, double h_quad) {
  if (!ts.contains(tau) || !ts.contains(s))
    fail(ErrorCode::PointNotInScale, "delta_integral: endpoints must be scale points");
  if (s < tau) fail(ErrorCode::InvalidInput, "delta_integral: require tau <= s");
  if (h_quad <= 0.0) fail(ErrorCode::InvalidInput, "h_quad must be positive");
  Vector acc = fn(tau);
  acc.setZero();
  for (const auto& seg : ts.decompose(tau, s)) {
    if (seg.gap) {
      acc += (seg.end - seg.start) * fn(seg.start);
      continue;
    }
    double len = seg.end - seg.start;
    int panels = std::max(1, static_cast<int>(std::ceil(len / (2.0 * h_quad))));
    double h = len / (2.0 * panels);
    // composite Simpson over 2*panels subintervals
    Vector sum = fn(seg.start) + fn(seg.end);
    for (int j = 1; j < 2 * panels; ++j)
      sum += ((j % 2 == 1) ? 4.0 : 2.0) * fn(seg.start + j * h);
    acc += (h / 3.0) * sum;
  }
  return acc;
}

}  // namespace tsdyn
