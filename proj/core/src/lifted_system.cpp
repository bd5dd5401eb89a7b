#include "tsdyn/lifted_system.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "tsdyn/error.hpp"
#include "tsdyn/linalg.hpp"
#include "tsdyn/matrix_log.hpp"

namespace tsdyn {

namespace {

Matrix double_complex(const Eigen::MatrixXcd& M) {
  const int n = static_cast<int>(M.rows());
  Matrix out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = M.real();
  out.topRightCorner(n, n) = -M.imag();
  out.bottomLeftCorner(n, n) = M.imag();
  out.bottomRightCorner(n, n) = M.real();
  return out;
}

}  // namespace

LiftedSystem lift_coefficient(const PiecewiseMatrix& A, LiftMode mode) {
  LiftedSystem sys(TimeRescaling(A.scale_ptr()), A);
  sys.ts_dim_ = A.dim();
  sys.pattern_span_s_ =
      A.scale().is_periodic() ? sys.rescaling_.period_image() : sys.rescaling_.horizon();

  const int n = A.dim();
  struct Raw {
    TimeRescaling::Node node;
    double s1;
    Eigen::MatrixXcd gap_value;  // only for gaps
    Matrix a_ts;
  };
  std::vector<Raw> raws;
  bool any_complex = false;
  const auto& nodes = sys.rescaling_.pattern_nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& nd = nodes[i];
    double s1 = (i + 1 < nodes.size()) ? nodes[i + 1].s
                                       : (A.scale().is_periodic() ? sys.rescaling_.period_image()
                                                                  : sys.rescaling_.horizon());
    Raw raw{nd, s1, {}, A.eval(nd.t)};
    if (nd.gap) {
      Matrix jump = Matrix::Identity(n, n) + nd.mu * raw.a_ts;
      if (detail::smallest_singular_value(jump) <= 1e-12 * std::max(1.0, jump.norm()))
        fail(ErrorCode::NotRegressive,
             "E + mu A is singular at the right-scattered point t = " + std::to_string(nd.t));
      LogResult lg = matrix_log(jump, LogBranch::RealPreferring);
      if (!lg.real_valued) {
        if (mode == LiftMode::RequireReal)
          fail(ErrorCode::NonPositiveGapMatrix,
               "E + mu A is not positive at t = " + std::to_string(nd.t) +
                   "; a real lift does not exist");
        any_complex = true;
      }
      raw.gap_value = lg.value / std::log1p(nd.mu);
    }
    raws.push_back(std::move(raw));
  }

  sys.doubled_ = any_complex;
  sys.dim_ = any_complex ? 2 * n : n;
  for (const auto& raw : raws) {
    LiftedSystem::Segment seg;
    seg.s0 = raw.node.s;
    seg.s1 = raw.s1;
    seg.t0 = raw.node.t;
    seg.gap = raw.node.gap;
    seg.mu = raw.node.mu;
    seg.A_ts = raw.a_ts;
    if (seg.gap) {
      seg.A = any_complex ? double_complex(raw.gap_value)
                          : Matrix(raw.gap_value.real());
    } else if (A.constant_per_piece()) {
      seg.A = any_complex ? double_complex(raw.a_ts.cast<std::complex<double>>())
                          : raw.a_ts;
    } else {
      seg.A_of_t = [coeff = A](double t) { return coeff.eval(t); };
    }
    sys.segments_.push_back(std::move(seg));
  }
  return sys;
}

LiftedSystem::Location LiftedSystem::locate(double s) const {
  if (!(s >= -TimeScale::point_tol(s)))
    fail(ErrorCode::InvalidInput, "lifted system defined for s >= 0");
  s = std::max(s, 0.0);
  double rs = s;
  long copy = 0;
  if (periodic()) {
    const double sp = pattern_span_s_;
    double k = std::floor(s / sp);
    rs = s - k * sp;
    if (rs >= sp - TimeScale::point_tol(s)) {
      k += 1.0;
      rs = 0.0;
    }
    copy = static_cast<long>(k);
  } else if (s > horizon_s() + TimeScale::point_tol(s)) {
    fail(ErrorCode::HorizonExceeded, "s is past the truncated scale's computable range");
  }
  auto it = std::upper_bound(segments_.begin(), segments_.end(), rs,
                             [](double v, const Segment& seg) { return v < seg.s0; });
  int i = std::max(static_cast<int>(std::distance(segments_.begin(), it)) - 1, 0);
  return {i, copy, static_cast<double>(copy) * pattern_span_s_};
}

bool LiftedSystem::is_constant() const {
  for (const auto& seg : segments_)
    if (seg.A_of_t) return false;
  for (const auto& seg : segments_)
    if ((seg.A - segments_.front().A).norm() > 1e-12 * (1.0 + segments_.front().A.norm()))
      return false;
  return true;
}

double LiftedSystem::sup_norm() const {
  double sup = 0.0;
  for (const auto& seg : segments_) {
    if (seg.A_of_t) {
      for (int j = 0; j <= 16; ++j) {
        double t = seg.t0 + (rescaling_.inverse(seg.s1) - seg.t0) * j / 16.0;
        Matrix a = seg.A_of_t(t);
        sup = std::max(sup, doubled_ ? double_complex(a.cast<std::complex<double>>()).operatorNorm()
                                     : a.operatorNorm());
      }
    } else {
      sup = std::max(sup, seg.A.operatorNorm());
    }
  }
  return sup;
}

std::pair<int, double> LiftedSystem::segment_at(double s) const {
  auto loc = locate(s);
  return {loc.segment, loc.base_s};
}

Matrix LiftedSystem::eval(double s) const {
  auto loc = locate(s);
  const Segment& seg = segments_[loc.segment];
  if (!seg.A_of_t) return seg.A;
  Matrix a = seg.A_of_t(rescaling_.inverse(s));
  return doubled_ ? double_complex(a.cast<std::complex<double>>()) : a;
}

Matrix LiftedSystem::transition(double s1, double s0, double h_ode) const {
  if (s1 < s0) {
    Matrix fwd = transition(s0, s1, h_ode);
    return fwd.inverse();
  }
  Matrix M = Matrix::Identity(dim_, dim_);
  double cur = s0;
  while (cur < s1 - TimeScale::point_tol(cur)) {
    auto loc = locate(cur);
    const Segment& seg = segments_[loc.segment];
    double seg_end = loc.base_s + seg.s1;
    double hop = std::min(seg_end, s1);
    if (hop <= cur + TimeScale::point_tol(cur)) {
      cur = seg_end;  // zero-length remainder: move on
      continue;
    }
    if (seg.A_of_t) {
      auto a_of_s = [&](double s) { return eval(s); };
      M = detail::rk4_transition(a_of_s, dim_, cur, hop, h_ode) * M;
    } else {
      M = detail::expm(Matrix(seg.A * (hop - cur))) * M;
    }
    cur = hop;
  }
  return M;
}

Vector LiftedSystem::embed(const Vector& x) const {
  if (!doubled_) return x;
  Vector z = Vector::Zero(dim_);
  z.head(ts_dim_) = x;
  return z;
}

Vector LiftedSystem::extract(const Vector& z) const {
  if (!doubled_) return z;
  return z.head(ts_dim_);
}

Matrix LiftedSystem::embed_matrix(const Eigen::MatrixXcd& M) const {
  if (!doubled_) {
    if (M.imag().norm() > 1e-12 * (1.0 + M.norm()))
      fail(ErrorCode::InvalidInput, "complex matrix in a real lift");
    return M.real();
  }
  return double_complex(M);
}

double LiftedSystem::rhs_gain(double lambda) const {
  double gain = 1.0;
  for (const auto& seg : segments_) {
    if (!seg.gap) continue;
    Matrix inv = seg.A_ts.inverse();
    Matrix factor;
    if (doubled_) {
      Matrix inv2 = Matrix::Zero(dim_, dim_);
      inv2.topLeftCorner(ts_dim_, ts_dim_) = inv;
      inv2.bottomRightCorner(ts_dim_, ts_dim_) = inv;
      factor = seg.A * inv2;
    } else {
      factor = seg.A * inv;
    }
    gain = std::max(gain, factor.operatorNorm() * std::pow(1.0 + seg.mu, lambda));
  }
  return gain;
}

IdentityCheck check_fundamental_identity(const LiftedSystem& sys, double horizon_t,
                                         double h_ode) {
  const TimeScale& ts = sys.scale();
  const TimeRescaling& r = sys.rescaling();
  const PiecewiseMatrix& A = sys.coefficient();
  const int n = sys.ts_dim();
  if (!ts.is_periodic()) horizon_t = std::min(horizon_t, ts.pattern_end());
  double t_end = ts.floor(horizon_t);

  Matrix psi = Matrix::Identity(n, n);
  Matrix phi = Matrix::Identity(sys.dim(), sys.dim());
  IdentityCheck out;

  auto record = [&](double t) {
    double defect;
    double scale = std::max(1.0, psi.norm());
    if (!sys.doubled()) {
      defect = (phi - psi).norm() / scale;
    } else {
      Matrix top = phi.topLeftCorner(n, n);
      Matrix bottom = phi.bottomLeftCorner(n, n);
      defect = ((top - psi).norm() + bottom.norm()) / scale;
    }
    ++out.samples;
    if (defect > out.max_defect) {
      out.max_defect = defect;
      out.argmax_t = t;
    }
  };

  auto a_of_s = [&](double s) { return sys.eval(s); };
  double cur = 0.0;
  record(0.0);
  for (const auto& seg : ts.decompose(0.0, t_end)) {
    if (seg.gap) {
      double mu = seg.end - seg.start;
      psi = (Matrix::Identity(n, n) + mu * A.eval(seg.start)) * psi;
      phi = detail::rk4_transition(a_of_s, sys.dim(), r.eval(seg.start), r.eval(seg.end),
                                   h_ode) *
            phi;
      record(seg.end);
      cur = seg.end;
      continue;
    }
    // dense piece: record at the midpoint and the end
    for (double target : {0.5 * (seg.start + seg.end), seg.end}) {
      if (target <= cur + TimeScale::point_tol(cur)) continue;
      if (A.constant_per_piece()) {
        psi = detail::expm(Matrix(A.eval(seg.start) * (target - cur))) * psi;
      } else {
        auto a_of_t = [&](double t) { return A.eval(t); };
        psi = detail::rk4_transition(a_of_t, n, cur, target, h_ode) * psi;
      }
      phi = detail::rk4_transition(a_of_s, sys.dim(), r.eval(cur), r.eval(target), h_ode) * phi;
      record(target);
      cur = target;
    }
  }
  return out;
}

}  // namespace tsdyn
