#include "tsdyn/bounded_solutions.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "tsdyn/error.hpp"
#include "tsdyn/linalg.hpp"

namespace tsdyn {

namespace {

std::vector<double> dedupe_sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end(),
                      [](double a, double b) {
                        return std::abs(a - b) <= TimeScale::point_tol(a);
                      }),
          v.end());
  return v;
}

}  // namespace

int GreenOperator::cached_transition(int segment, double length, bool constant,
                                     const Matrix& A, double s_lo) {
  if (constant) {
    const long long qlen = static_cast<long long>(std::llround(length * 1e12));
    const auto key = std::make_pair(segment, qlen);
    auto it = cache_index_.find(key);
    if (it != cache_index_.end()) return it->second;
    int base = static_cast<int>(cache_.size());
    Matrix Eq = detail::expm(Matrix(A * (length / 4.0)));
    Matrix Eh = Eq * Eq;
    cache_.push_back(Eh * Eh);                                  // E(h)
    cache_.push_back(Eh);                                       // E(h/2)
    cache_.push_back(Eq);                                       // E(h/4)
    cache_.push_back(detail::expm(Matrix(-A * length)));        // E(-h)
    cache_.push_back(detail::expm(Matrix(-A * length / 2.0)));  // E(-h/2)
    cache_index_.emplace(key, base);
    return base;
  }
  // function-valued dense piece: per-step RK4 transitions, no reuse
  const LiftedSystem& sys = dich_.system();
  auto a_of_s = [&sys](double s) { return sys.eval(s); };
  const int n = dich_.dim();
  int base = static_cast<int>(cache_.size());
  Matrix Eq = detail::rk4_transition(a_of_s, n, s_lo, s_lo + length / 4.0, opt_.h_ode);
  Matrix Em =
      detail::rk4_transition(a_of_s, n, s_lo + length / 4.0, s_lo + length / 2.0, opt_.h_ode);
  Matrix Eh = Em * Eq;
  Matrix E2 = detail::rk4_transition(a_of_s, n, s_lo + length / 2.0, s_lo + length, opt_.h_ode);
  Matrix E = E2 * Eh;
  cache_.push_back(E);
  cache_.push_back(Eh);
  cache_.push_back(Eq);
  cache_.push_back(E.inverse());
  cache_.push_back(Eh.inverse());
  return base;
}

GreenOperator::GreenOperator(Dichotomy dich, std::vector<double> out_grid, double f_sup_hint,
                             Options opt)
    : dich_(std::move(dich)), opt_(opt), out_grid_(dedupe_sorted(std::move(out_grid))) {
  if (out_grid_.empty() || out_grid_.front() < -TimeScale::point_tol(0.0))
    fail(ErrorCode::InvalidInput, "green operator needs a nonnegative output grid");
  const LiftedSystem& sys = dich_.system();
  const double lambda0 = dich_.lambda0();
  const double s_max = out_grid_.back();

  double margin = 0.0;
  if (dich_.rank_plus() < dich_.dim()) {
    double supf = std::max(f_sup_hint, 1e-12);
    margin = (std::log(dich_.C() * supf) - std::log(opt_.tol * lambda0)) / lambda0;
    margin = std::max(margin, 0.0);
    if (margin > 1e4 / lambda0)
      fail(ErrorCode::ToleranceUnreachable,
           "required truncation horizon exceeds the hard cap 1e4 / lambda0");
  }
  horizon_ = s_max + margin;
  if (!sys.periodic()) horizon_ = std::min(horizon_, sys.horizon_s());
  horizon_ = std::max(horizon_, s_max);

  // breakpoints: output points plus segment boundaries of every pattern copy
  std::vector<double> brk(out_grid_.begin(), out_grid_.end());
  brk.push_back(0.0);
  brk.push_back(horizon_);
  if (sys.periodic()) {
    const double sp = sys.period_s();
    for (long k = 0; k * sp < horizon_ + sp; ++k) {
      for (const auto& seg : sys.segments()) {
        double v = k * sp + seg.s0;
        if (v < horizon_) brk.push_back(v);
      }
    }
  } else {
    for (const auto& seg : sys.segments()) {
      if (seg.s0 < horizon_) brk.push_back(seg.s0);
      if (seg.s1 < horizon_) brk.push_back(seg.s1);
    }
  }
  brk = dedupe_sorted(std::move(brk));
  while (!brk.empty() && brk.back() > horizon_ + TimeScale::point_tol(horizon_)) brk.pop_back();

  nodes_.clear();
  for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
    double a = brk[i], b = brk[i + 1];
    int m = std::max(1, static_cast<int>(std::ceil((b - a) / opt_.h_ode)));
    for (int j = 0; j < m; ++j) nodes_.push_back(a + (b - a) * j / m);
  }
  nodes_.push_back(brk.back());

  out_node_.reserve(out_grid_.size());
  for (double s : out_grid_) {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), s - TimeScale::point_tol(s));
    if (it == nodes_.end() || std::abs(*it - s) > 10.0 * TimeScale::point_tol(s))
      fail(ErrorCode::InvalidInput, "output grid point did not land on the step partition");
    out_node_.push_back(static_cast<int>(std::distance(nodes_.begin(), it)));
  }

  const bool track = sys.periodic() && !dich_.constant_system();
  const double sp = track ? sys.period_s() : 0.0;
  Matrix P = dich_.proj_plus0();
  steps_.reserve(nodes_.size() - 1);
  for (std::size_t k = 0; k + 1 < nodes_.size(); ++k) {
    Step st;
    st.a = nodes_[k];
    st.h = nodes_[k + 1] - nodes_[k];
    auto [seg_idx, base_s] = sys.segment_at(st.a + 0.5 * st.h);
    const auto& seg = sys.segments()[seg_idx];
    st.cache_base =
        cached_transition(seg_idx, st.h, !seg.A_of_t, seg.A_of_t ? Matrix() : seg.A, st.a);
    if (dich_.constant_system()) {
      st.Pa = dich_.proj_plus0();
      st.Pm = st.Pa;
    } else {
      if (track) {
        // projector drift cannot accumulate: reset at every period mark
        double phase = st.a - std::floor(st.a / sp + 0.5) * sp;
        if (std::abs(phase) <= TimeScale::point_tol(st.a)) P = dich_.proj_plus0();
      }
      st.Pa = P;
      const Matrix& Eh = cache_[st.cache_base + 1];
      const Matrix& Ehinv = cache_[st.cache_base + 4];
      st.Pm = Eh * P * Ehinv;
      const Matrix& E = cache_[st.cache_base + 0];
      const Matrix& Einv = cache_[st.cache_base + 3];
      P = E * P * Einv;
    }
    steps_.push_back(std::move(st));
  }
  P_end_ = dich_.constant_system() ? dich_.proj_plus0() : P;
}

std::vector<Vector> GreenOperator::apply(const std::function<Vector(double)>& f,
                                         double* max_residual) const {
  const int n = dich_.dim();
  const std::size_t N = steps_.size();
  const Matrix I = Matrix::Identity(n, n);

  std::vector<Vector> fa(N + 1), fm(N);
  for (std::size_t k = 0; k <= N; ++k) fa[k] = f(nodes_[k]);
  for (std::size_t k = 0; k < N; ++k) fm[k] = f(steps_[k].a + 0.5 * steps_[k].h);

  std::vector<Vector> Ip(N + 1, Vector::Zero(n));
  std::vector<Vector> Im(N + 1, Vector::Zero(n));
  for (std::size_t k = 0; k < N; ++k) {
    const Step& st = steps_[k];
    const Matrix& E = cache_[st.cache_base + 0];
    const Matrix& Eh = cache_[st.cache_base + 1];
    const Matrix& Pb = (k + 1 < N) ? steps_[k + 1].Pa : P_end_;
    Vector J = (st.h / 6.0) *
               (E * (st.Pa * fa[k]) + 4.0 * (Eh * (st.Pm * fm[k])) + Pb * fa[k + 1]);
    Ip[k + 1] = Pb * (E * Ip[k] + J);
  }
  for (std::size_t kk = N; kk-- > 0;) {
    const Step& st = steps_[kk];
    const Matrix& Einv = cache_[st.cache_base + 3];
    const Matrix& Ehinv = cache_[st.cache_base + 4];
    const Matrix& Pb = (kk + 1 < N) ? steps_[kk + 1].Pa : P_end_;
    Vector J = (st.h / 6.0) * ((I - st.Pa) * fa[kk] + 4.0 * (Ehinv * ((I - st.Pm) * fm[kk])) +
                               Einv * ((I - Pb) * fa[kk + 1]));
    Im[kk] = (I - st.Pa) * (Einv * Im[kk + 1] + J);
  }

  if (max_residual) {
    double worst = 0.0;
    const double s_out = out_grid_.back();
    for (std::size_t k = 0; k < N; ++k) {
      const Step& st = steps_[k];
      if (st.a + st.h > s_out + TimeScale::point_tol(s_out)) break;
      const Matrix& E = cache_[st.cache_base + 0];
      const Matrix& Eh = cache_[st.cache_base + 1];
      const Matrix& Eq = cache_[st.cache_base + 2];
      Vector fq1 = f(st.a + 0.25 * st.h);
      Vector fq3 = f(st.a + 0.75 * st.h);
      Vector Jl = (st.h / 12.0) * (Eh * fa[k] + 4.0 * (Eq * fq1) + fm[k]);
      Vector Jr = (st.h / 12.0) * (Eh * fm[k] + 4.0 * (Eq * fq3) + fa[k + 1]);
      Vector J2 = Eh * Jl + Jr;
      Vector phi_a = Ip[k] - Im[k];
      Vector phi_b = Ip[k + 1] - Im[k + 1];
      worst = std::max(worst, (phi_b - E * phi_a - J2).norm() / st.h);
    }
    *max_residual = worst;
  }

  std::vector<Vector> out;
  out.reserve(out_grid_.size());
  for (int idx : out_node_) out.push_back(Ip[idx] - Im[idx]);
  return out;
}

TsResidual ts_residual(const PiecewiseMatrix& A, const std::function<Vector(double)>& f_ts,
                       const GridFunction& x, double h_ode) {
  const TimeScale& ts = A.scale();
  TsResidual res;
  const auto& times = x.times();
  const auto& vals = x.values();
  std::map<std::pair<int, long long>, std::pair<Matrix, Matrix>> cache;

  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    double t = times[i];
    double mu = ts.graininess(t);
    if (mu > 0.0) {
      double sig = ts.sigma(t);
      if (sig > x.t_max() + TimeScale::point_tol(sig)) continue;
      Vector quotient = (x.eval(sig) - vals[i]) / mu;
      Vector r = quotient - A.eval(t) * vals[i] - f_ts(t);
      res.max_scattered = std::max(res.max_scattered, r.norm());
      continue;
    }
    double tn = times[i + 1];
    double delta = tn - t;
    if (delta <= TimeScale::point_tol(t)) continue;
    Matrix E, Eh;
    if (A.constant_per_piece()) {
      auto key = std::make_pair(ts.piece_index_of(t),
                                static_cast<long long>(std::llround(delta * 1e12)));
      auto it = cache.find(key);
      if (it == cache.end()) {
        Matrix a = A.eval(t);
        Eh = detail::expm(Matrix(a * (delta / 2.0)));
        E = Eh * Eh;
        cache.emplace(key, std::make_pair(E, Eh));
      } else {
        E = it->second.first;
        Eh = it->second.second;
      }
    } else {
      auto a_of_t = [&](double u) { return A.eval(u); };
      Eh = detail::rk4_transition(a_of_t, A.dim(), t, t + delta / 2.0, h_ode);
      E = detail::rk4_transition(a_of_t, A.dim(), t + delta / 2.0, tn, h_ode) * Eh;
    }
    Vector J = (delta / 6.0) * (E * f_ts(t) + 4.0 * (Eh * f_ts(t + 0.5 * delta)) + f_ts(tn));
    Vector r = (vals[i + 1] - E * vals[i] - J) / delta;
    res.max_dense = std::max(res.max_dense, r.norm());
  }
  return res;
}

std::pair<std::vector<Vector>, SolveStats> bounded_solution_ode(const Dichotomy& dich,
                                                                const SFunction& f, double tol,
                                                                std::vector<double> s_grid,
                                                                double h_ode) {
  GreenOperator::Options opt;
  opt.tol = tol;
  opt.h_ode = h_ode;
  GreenOperator op(dich, std::move(s_grid), f.sup_norm(), opt);
  SolveStats stats;
  stats.K = dich.K();
  stats.truncation_horizon = op.horizon();
  auto values = op.apply([&f](double s) { return f.eval(s); }, &stats.max_residual);
  return {std::move(values), stats};
}

TsGreenOperator::TsGreenOperator(Dichotomy dich, double t_out_max, Options opt)
    : TsGreenOperator(std::move(dich), std::vector<double>{}, t_out_max, opt) {}

TsGreenOperator::TsGreenOperator(Dichotomy dich, std::vector<double> t_grid, double t_out_max,
                                 Options opt)
    : t_out_(std::move(t_grid)),
      green_([&]() -> GreenOperator {
        const LiftedSystem& sys = dich.system();
        if (t_out_.empty()) t_out_ = sys.scale().sample_points(t_out_max, opt.h_grid);
        std::vector<double> s_grid;
        s_grid.reserve(t_out_.size());
        for (double t : t_out_) s_grid.push_back(sys.rescaling().eval(t));
        GreenOperator::Options gopt;
        gopt.h_ode = opt.h_ode;
        gopt.tol = opt.tol;
        return GreenOperator(std::move(dich), std::move(s_grid), opt.f_sup_hint, gopt);
      }()),
      opt_(opt) {
  const LiftedSystem& sys = green_.dichotomy().system();
  const int n = sys.ts_dim();
  for (const auto& seg : sys.segments()) {
    if (!seg.gap) {
      gap_transform_.emplace_back();
      continue;
    }
    Matrix inv = seg.A_ts.inverse();
    if (sys.doubled()) {
      Matrix inv2 = Matrix::Zero(2 * n, 2 * n);
      inv2.topLeftCorner(n, n) = inv;
      inv2.bottomRightCorner(n, n) = inv;
      gap_transform_.push_back(seg.A * inv2);
    } else {
      gap_transform_.push_back(seg.A * inv);
    }
  }
}

TsGreenOperator::Result TsGreenOperator::solve_fn(const std::function<Vector(double)>& f_ts,
                                                  double sup_hint, bool with_residual) const {
  static_cast<void>(sup_hint);
  const LiftedSystem& sys = system();
  const TimeRescaling& r = sys.rescaling();
  const double period_t = sys.scale().is_periodic() ? sys.scale().period() : 0.0;
  const double period_s = sys.periodic() ? sys.period_s() : 0.0;

  auto fs = [&](double s) -> Vector {
    auto [idx, base_s] = sys.segment_at(s);
    const auto& seg = sys.segments()[idx];
    if (seg.gap) {
      double copies = period_s > 0.0 ? std::round(base_s / period_s) : 0.0;
      double t0 = seg.t0 + copies * period_t;
      return gap_transform_[idx] * sys.embed(f_ts(t0));
    }
    return sys.embed(f_ts(r.inverse(s)));
  };

  SolveStats stats;
  stats.K = green_.K();
  stats.truncation_horizon = green_.horizon();
  auto phi = green_.apply(fs, with_residual ? &stats.max_residual : nullptr);

  std::vector<Vector> vals;
  vals.reserve(phi.size());
  for (const auto& z : phi) vals.push_back(sys.extract(z));
  GridFunction x(r.scale_ptr(), t_out_, std::move(vals), GridFunction::Interp::Linear,
                 GridFunction::Extension::Zero);
  return {std::move(x), stats};
}

TsGreenOperator::Result TsGreenOperator::solve(const GridFunction& f) const {
  const LiftedSystem& sys = system();
  SFunction sf = lift_rhs(f, sys);
  SolveStats stats;
  stats.K = green_.K();
  stats.truncation_horizon = green_.horizon();
  auto phi = green_.apply([&sf](double s) { return sf.eval(s); }, &stats.max_residual);
  std::vector<Vector> vals;
  vals.reserve(phi.size());
  for (const auto& z : phi) vals.push_back(sys.extract(z));
  GridFunction x(sys.rescaling().scale_ptr(), t_out_, std::move(vals),
                 GridFunction::Interp::Linear, GridFunction::Extension::Zero);
  auto res =
      ts_residual(sys.coefficient(), [&f](double t) { return f.eval(t); }, x, opt_.h_ode);
  stats.max_residual = std::max(stats.max_residual, res.max());
  return {std::move(x), stats};
}

std::pair<GridFunction, SolveStats> bounded_solution_ts(const PiecewiseMatrix& A,
                                                        const GridFunction& f, double tol,
                                                        double t_out_max) {
  LiftedSystem sys = lift_coefficient(A);
  Dichotomy dich = detect_dichotomy(sys);
  if (t_out_max < 0.0) t_out_max = f.t_max();
  TsGreenOperator::Options opt;
  opt.tol = tol;
  opt.f_sup_hint = std::max(f.sup_norm(), 1e-12);
  std::vector<double> grid;
  for (double t : f.times())
    if (t <= t_out_max + TimeScale::point_tol(t)) grid.push_back(t);
  TsGreenOperator op(std::move(dich), std::move(grid), t_out_max, opt);
  auto result = op.solve(f);
  return {std::move(result.x), result.stats};
}

WeightedCheck weighted_norm_check(const Dichotomy& dich, const GridFunction& output,
                                  double lambda, double c_f) {
  if (!(lambda >= 0.0) || lambda > dich.lambda1() + 1e-15)
    fail(ErrorCode::InvalidInput, "weighted check needs lambda in [0, lambda1]");
  const TimeRescaling& r = dich.system().rescaling();
  WeightedCheck out;
  for (std::size_t i = 0; i < output.times().size(); ++i) {
    double w = output.values()[i].norm() * std::exp(lambda * r.eval(output.times()[i]));
    out.measured = std::max(out.measured, w);
  }
  out.bound = dich.K_lambda(lambda) * c_f * dich.system().rhs_gain(lambda);
  out.pass = out.measured <= out.bound;
  return out;
}

DecayMeasurement stable_decay_measurement(const Dichotomy& dich, const Vector& z0,
                                          double horizon_t, double h_grid) {
  const LiftedSystem& sys = dich.system();
  const TimeRescaling& r = sys.rescaling();
  auto points = sys.scale().sample_points(horizon_t, h_grid);
  DecayMeasurement out;
  if (z0.norm() == 0.0) return out;

  std::vector<double> ss, ln;
  Vector z = z0;
  double s_prev = 0.0;
  const double floor_norm = z0.norm() * 1e-4;
  for (double t : points) {
    double s = r.eval(t);
    if (s > s_prev) z = sys.transition(s, s_prev) * z;
    s_prev = s;
    ss.push_back(s);
    ln.push_back(std::log(std::max(z.norm(), 1e-300)));
    out.constant = std::max(out.constant, z.norm() * std::exp(dich.lambda0() * s) / z0.norm());
    if (z.norm() < floor_norm) break;  // four decades carry the slope
  }
  out.samples = static_cast<int>(ss.size());
  out.exponent = -detail::ls_slope(ss, ln);
  return out;
}

Vector integrate_time_scale(const PiecewiseMatrix& A,
                            const std::function<Vector(double, const Vector&)>& rhs, Vector x0,
                            double t0, double t1, double h_ode,
                            const std::function<void(double, const Vector&)>& observer) {
  const TimeScale& ts = A.scale();
  Vector x = std::move(x0);
  if (observer) observer(t0, x);
  for (const auto& seg : ts.decompose(ts.floor(t0), ts.floor(t1))) {
    if (seg.start < t0 - TimeScale::point_tol(t0)) continue;
    if (seg.gap) {
      double mu = seg.end - seg.start;
      x = x + mu * (A.eval(seg.start) * x + rhs(seg.start, x));
      if (observer) observer(seg.end, x);
      continue;
    }
    int steps = std::max(1, static_cast<int>(std::ceil((seg.end - seg.start) / h_ode)));
    double dt = (seg.end - seg.start) / steps;
    double t = seg.start;
    auto fxd = [&](double u, const Vector& v) -> Vector { return A.eval(u) * v + rhs(u, v); };
    for (int i = 0; i < steps; ++i) {
      Vector k1 = fxd(t, x);
      Vector k2 = fxd(t + 0.5 * dt, x + 0.5 * dt * k1);
      Vector k3 = fxd(t + 0.5 * dt, x + 0.5 * dt * k2);
      Vector k4 = fxd(t + dt, x + dt * k3);
      x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t += dt;
      if (observer) observer(t, x);
    }
  }
  return x;
}

bool all_solutions_grow(const PiecewiseMatrix& A, const std::function<Vector(double)>& f_ts,
                        const std::vector<Vector>& initial_conditions, double horizon_t,
                        double threshold, double h_ode) {
  for (const auto& ic : initial_conditions) {
    double peak = 0.0;
    integrate_time_scale(
        A, [&](double t, const Vector&) { return f_ts(t); }, ic, 0.0, horizon_t, h_ode,
        [&](double, const Vector& x) { peak = std::max(peak, x.norm()); });
    if (peak < threshold) return false;
  }
  return true;
}

ProbeReport pliss_maizel_probe(const PiecewiseMatrix& A, int trials, std::uint64_t seed,
                               double horizon_t, double growth_threshold) {
  const TimeScale& ts = A.scale();
  ts.is_syndetic();  // UnboundedRequired for truncated views
  const int n = A.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  auto scale_ptr = A.scale_ptr();
  auto random_forcing = [&]() {
    // pattern-periodic, constant per piece
    std::vector<double> times;
    std::vector<Vector> vals;
    for (const auto& p : ts.pieces()) {
      Vector v(n);
      for (int i = 0; i < n; ++i) v(i) = uni(rng);
      times.push_back(p.lo);
      vals.push_back(v);
      if (p.hi > p.lo + TimeScale::kPointTol) {
        times.push_back(p.hi);
        vals.push_back(v);
      }
    }
    times.push_back(ts.period());
    vals.push_back(vals.front());
    return GridFunction(scale_ptr, std::move(times), std::move(vals),
                        GridFunction::Interp::Constant, GridFunction::Extension::Periodic);
  };

  ProbeReport report;
  report.trials = trials;
  LiftedSystem sys = lift_coefficient(A);
  auto det = detect_dichotomy_or_witness(sys);
  std::ostringstream summary;

  if (auto* dich = std::get_if<Dichotomy>(&det)) {
    report.hyperbolic = true;
    TsGreenOperator op(*dich, horizon_t);
    bool all_bounded = true;
    for (int trial = 0; trial < trials; ++trial) {
      GridFunction f = random_forcing();
      auto result = op.solve(f);
      double ratio = result.x.sup_norm() / std::max(f.sup_norm(), 1e-300);
      report.max_ratio = std::max(report.max_ratio, ratio);
      if (result.x.sup_norm() > dich->K() * f.sup_norm() * 1.05) all_bounded = false;
    }
    report.consistent = all_bounded;
    summary << "hyperbolic: " << trials
            << " random bounded forcings, all bounded solutions found (sup ||Lf||/||f|| = "
            << report.max_ratio << ", bound K = " << dich->K() << ")";
    if (!all_bounded) summary << " -- BOUND VIOLATED";
  } else {
    report.hyperbolic = false;
    std::vector<Vector> ics;
    ics.push_back(Vector::Zero(n));
    for (int i = 0; i < n; ++i) {
      for (double amp : {1.0, -1.0, 2.0, -2.0}) {
        Vector v = Vector::Zero(n);
        v(i) = amp;
        ics.push_back(v);
      }
    }
    for (int trial = 0; trial < trials; ++trial) {
      GridFunction f = random_forcing();
      auto f_eval = [&f](double t) { return f.eval(t); };
      if (all_solutions_grow(A, f_eval, ics, horizon_t, growth_threshold))
        report.witness_trials.push_back(trial);
    }
    report.consistent = !report.witness_trials.empty();
    summary << "not hyperbolic (" << std::get<NotHyperbolicInfo>(det).reason << "): ";
    if (report.consistent)
      summary << report.witness_trials.size() << "/" << trials
              << " sampled forcings drove every sampled initial condition past "
              << growth_threshold;
    else
      summary << "no growth witness found in " << trials
              << " trials (diagnostic only, not a refutation)";
  }
  report.summary = summary.str();
  return report;
}

}  // namespace tsdyn
