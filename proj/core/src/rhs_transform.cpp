#include "tsdyn/rhs_transform.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "tsdyn/error.hpp"
#include "tsdyn/linalg.hpp"
#include "tsdyn/matrix_log.hpp"

namespace tsdyn {

SFunction::SFunction(std::vector<Seg> segs, int dim, double period_s)
    : segs_(std::move(segs)), dim_(dim), period_s_(period_s) {
  if (segs_.empty() || dim_ <= 0) fail(ErrorCode::InvalidInput, "empty s-domain forcing");
}

Vector SFunction::eval(double s) const {
  if (s > window_end() + TimeScale::point_tol(s) || s < -TimeScale::point_tol(s)) {
    if (period_s_ > 0.0) {
      double r = s - std::floor(s / period_s_) * period_s_;
      if (r > window_end() + TimeScale::point_tol(r)) r -= period_s_;
      if (r < 0.0) r += period_s_;
      return eval(std::clamp(r, 0.0, window_end()));
    }
    return Vector::Zero(dim_);
  }
  s = std::clamp(s, 0.0, window_end());
  auto it = std::upper_bound(segs_.begin(), segs_.end(), s + TimeScale::point_tol(s),
                             [](double v, const Seg& seg) { return v < seg.s0; });
  int i = std::max(static_cast<int>(std::distance(segs_.begin(), it)) - 1, 0);
  const Seg& seg = segs_[i];
  if (seg.constant) return seg.c;
  auto nit = std::upper_bound(seg.s_nodes.begin(), seg.s_nodes.end(), s);
  int j = std::max(static_cast<int>(std::distance(seg.s_nodes.begin(), nit)) - 1, 0);
  if (j + 1 >= static_cast<int>(seg.s_nodes.size())) return seg.v.back();
  double w = (s - seg.s_nodes[j]) / (seg.s_nodes[j + 1] - seg.s_nodes[j]);
  w = std::clamp(w, 0.0, 1.0);
  return (1.0 - w) * seg.v[j] + w * seg.v[j + 1];
}

double SFunction::sup_norm() const {
  double m = 0.0;
  for (const auto& seg : segs_) {
    if (seg.constant) {
      m = std::max(m, seg.c.norm());
    } else {
      for (const auto& x : seg.v) m = std::max(m, x.norm());
    }
  }
  return m;
}

Eigen::VectorXcd lift_rhs_gap(const Vector& f_t0, double t0, const PiecewiseMatrix& A) {
  const TimeScale& ts = A.scale();
  double mu = ts.graininess(t0);
  if (mu <= 0.0)
    fail(ErrorCode::InvalidInput, "gap transform needs a right-scattered point");
  const int n = A.dim();
  Matrix a = A.eval(t0);
  if (detail::smallest_singular_value(a) <= 1e-12 * std::max(1.0, a.norm()))
    fail(ErrorCode::SingularCoefficient,
         "A(t0) is singular at the scattered point t0 = " + std::to_string(t0));
  Matrix jump = Matrix::Identity(n, n) + mu * a;
  if (detail::smallest_singular_value(jump) <= 1e-12 * std::max(1.0, jump.norm()))
    fail(ErrorCode::NotRegressive, "E + mu A singular at t0");
  LogResult lg = matrix_log(jump, LogBranch::RealPreferring);
  Eigen::MatrixXcd gap_coeff = lg.value / std::log1p(mu);
  return gap_coeff * a.inverse().cast<std::complex<double>>() *
         f_t0.cast<std::complex<double>>();
}

Vector project_rhs(const Eigen::VectorXcd& f0, double t0, const PiecewiseMatrix& A) {
  const TimeScale& ts = A.scale();
  double mu = ts.graininess(t0);
  if (mu <= 0.0)
    fail(ErrorCode::InvalidInput, "gap transform needs a right-scattered point");
  const int n = A.dim();
  Matrix a = A.eval(t0);
  Matrix jump = Matrix::Identity(n, n) + mu * a;
  if (detail::smallest_singular_value(jump) <= 1e-12 * std::max(1.0, jump.norm()))
    fail(ErrorCode::NotRegressive, "E + mu A singular at t0");
  LogResult lg = matrix_log(jump, LogBranch::RealPreferring);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(lg.value);
  double smin = svd.singularValues().tail(1)(0);
  if (smin <= 1e-12 * std::max(1.0, lg.value.norm()))
    fail(ErrorCode::SingularLogFactor, "log(E + mu A) is singular; cannot invert the transform");
  Eigen::VectorXcd out = std::log1p(mu) * lg.value.inverse() *
                         a.cast<std::complex<double>>() * f0;
  return out.real();
}

SFunction lift_rhs(const GridFunction& f, const LiftedSystem& sys) {
  const TimeScale& ts = sys.scale();
  const TimeRescaling& r = sys.rescaling();
  const PiecewiseMatrix& A = sys.coefficient();
  const int n = sys.ts_dim();
  if (f.dim() != n) fail(ErrorCode::DomainMismatch, "forcing dimension mismatch");

  auto embed_value = [&](const Eigen::VectorXcd& v) {
    if (!sys.doubled()) {
      return Vector(v.real());
    }
    Vector z(2 * n);
    z.head(n) = v.real();
    z.tail(n) = v.imag();
    return z;
  };
  auto embed_real = [&](const Vector& v) { return sys.embed(v); };

  std::vector<SFunction::Seg> segs;
  double t_end = ts.floor(f.t_max());
  for (const auto& seg : ts.decompose(f.t_min(), t_end)) {
    SFunction::Seg out;
    out.s0 = r.eval(seg.start);
    out.s1 = r.eval(seg.end);
    if (seg.gap) {
      out.constant = true;
      out.c = embed_value(lift_rhs_gap(f.eval(seg.start), seg.start, A));
    } else {
      out.constant = false;
      // carry over the sample nodes of the run
      for (std::size_t i = 0; i < f.times().size(); ++i) {
        double t = f.times()[i];
        if (t < seg.start - TimeScale::point_tol(t) || t > seg.end + TimeScale::point_tol(t))
          continue;
        out.s_nodes.push_back(r.eval(t));
        out.v.push_back(embed_real(f.values()[i]));
      }
      if (out.s_nodes.empty() || std::abs(out.s_nodes.front() - out.s0) > TimeScale::point_tol(out.s0)) {
        out.s_nodes.insert(out.s_nodes.begin(), out.s0);
        out.v.insert(out.v.begin(), embed_real(f.eval(seg.start)));
      }
      if (std::abs(out.s_nodes.back() - out.s1) > TimeScale::point_tol(out.s1)) {
        out.s_nodes.push_back(out.s1);
        out.v.push_back(embed_real(f.eval(seg.end)));
      }
    }
    segs.push_back(std::move(out));
  }
  double period_s = 0.0;
  if (f.extension() == GridFunction::Extension::Periodic && sys.periodic())
    period_s = sys.period_s();
  return SFunction(std::move(segs), sys.dim(), period_s);
}

}  // namespace tsdyn
