#include "tsdyn/dichotomy.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "tsdyn/error.hpp"
#include "tsdyn/linalg.hpp"

namespace tsdyn {

Matrix cauchy_matrix(const LiftedSystem& sys, double s, double tau, double h_ode) {
  return sys.transition(s, tau, h_ode);
}

Matrix fundamental_matrix_ts(const PiecewiseMatrix& A, double t, double t0, double h_ode) {
  const TimeScale& ts = A.scale();
  if (!ts.contains(t) || !ts.contains(t0))
    fail(ErrorCode::PointNotInScale, "fundamental matrix needs scale points");
  if (t < t0) {
    Matrix fwd = fundamental_matrix_ts(A, t0, t, h_ode);
    if (detail::smallest_singular_value(fwd) <= 1e-12 * std::max(1.0, fwd.norm()))
      fail(ErrorCode::NotRegressive,
           "backward evaluation through a singular jump factor (system not regressive)");
    return fwd.inverse();
  }
  const int n = A.dim();
  Matrix psi = Matrix::Identity(n, n);
  for (const auto& seg : ts.decompose(t0, t)) {
    if (seg.gap) {
      double mu = seg.end - seg.start;
      psi = (Matrix::Identity(n, n) + mu * A.eval(seg.start)) * psi;
    } else if (A.constant_per_piece()) {
      psi = detail::expm(Matrix(A.eval(seg.start) * (seg.end - seg.start))) * psi;
    } else {
      auto a_of_t = [&](double u) { return A.eval(u); };
      psi = detail::rk4_transition(a_of_t, n, seg.start, seg.end, h_ode) * psi;
    }
  }
  return psi;
}

double Dichotomy::K() const { return C_ * (2.0 / lambda0_) * 1.1; }

double Dichotomy::K_lambda(double lambda) const {
  if (!(lambda >= 0.0) || lambda >= lambda0_)
    fail(ErrorCode::InvalidInput, "weighted bound needs lambda in [0, lambda0)");
  return C_ * (1.0 / (lambda0_ - lambda) + 1.0 / (lambda0_ + lambda)) * 1.1;
}

Matrix Dichotomy::proj_plus(double s) const {
  if (constant_) return P0_;
  double sp = sys_->period_s();
  double r = s - std::floor(s / sp) * sp;
  if (r >= sp - TimeScale::point_tol(s) || r <= TimeScale::point_tol(s)) return P0_;
  Matrix phi = sys_->transition(r, 0.0);
  return phi * P0_ * phi.inverse();
}

Matrix Dichotomy::proj_minus(double s) const {
  return Matrix::Identity(dim(), dim()) - proj_plus(s);
}

Dichotomy Dichotomy::manual(std::shared_ptr<const LiftedSystem> sys, Matrix proj_plus0,
                            double C, double lambda0) {
  if (!sys) fail(ErrorCode::InvalidInput, "manual dichotomy needs a system");
  if ((proj_plus0 * proj_plus0 - proj_plus0).norm() > 1e-8 * (1.0 + proj_plus0.norm()))
    fail(ErrorCode::InvalidInput, "manual dichotomy: projector must be idempotent");
  if (!(C >= 1.0) || !(lambda0 > 0.0))
    fail(ErrorCode::InvalidInput, "manual dichotomy: need C >= 1 and lambda0 > 0");
  Dichotomy d;
  d.sys_ = std::move(sys);
  d.P0_ = std::move(proj_plus0);
  d.C_ = C;
  d.lambda0_ = lambda0;
  d.rank_plus_ = static_cast<int>(std::lround(d.P0_.trace()));
  const int n = d.dim();
  Eigen::ColPivHouseholderQR<Matrix> qr(d.P0_);
  d.stable_basis_ = Matrix(qr.householderQ()).leftCols(d.rank_plus_);
  Eigen::ColPivHouseholderQR<Matrix> qr2(Matrix(Matrix::Identity(n, n) - d.P0_));
  d.unstable_basis_ = Matrix(qr2.householderQ()).leftCols(n - d.rank_plus_);
  d.constant_ = d.sys_->is_constant();
  return d;
}

namespace {

// sup over sampled transitions of the decay-normalised norms, computed with
// per-step reprojection so unstable roundoff cannot leak into the stable sweep
double estimate_constant(const LiftedSystem& sys, const Dichotomy& d, double lambda0,
                         double h_ode) {
  const int n = d.dim();
  const bool periodic = sys.periodic() && !d.constant_system();
  const double span = periodic ? sys.period_s() : 0.0;

  // phase grid over one period (single phase for constant systems)
  const int phases = periodic ? 8 : 1;
  // decay sweep: a few periods or a fixed number of e-folds
  double sweep = periodic ? std::max(4.0 * span, 12.0 / lambda0) : 12.0 / lambda0;
  if (!sys.periodic()) sweep = std::min(sweep, sys.horizon_s());
  const int steps = 96;
  const double dstep = sweep / steps;

  double c = 1.0;
  for (int p = 0; p < phases; ++p) {
    double tau = periodic ? span * p / phases : 0.0;
    Matrix Pp = d.proj_plus(tau);
    Matrix Pm = Matrix::Identity(n, n) - Pp;
    c = std::max({c, Pp.operatorNorm(), Pm.operatorNorm()});

    // forward along the stable bundle
    Matrix S = Pp;
    for (int k = 1; k <= steps; ++k) {
      double a = tau + (k - 1) * dstep;
      double b = tau + k * dstep;
      S = sys.transition(b, a, h_ode) * S;
      S = d.proj_plus(b) * S;
      c = std::max(c, S.operatorNorm() * std::exp(lambda0 * (b - tau)));
    }
    // backward along the unstable bundle: measure ||Phi(t, t + delta) Pm||
    Matrix U = Matrix::Identity(n, n) - d.proj_plus(tau + sweep);
    for (int k = steps - 1; k >= 0; --k) {
      double a = tau + k * dstep;
      double b = tau + (k + 1) * dstep;
      Matrix back = sys.transition(b, a, h_ode).inverse();
      U = back * U;
      U = (Matrix::Identity(n, n) - d.proj_plus(a)) * U;
      c = std::max(c, U.operatorNorm() * std::exp(lambda0 * (tau + sweep - a)));
    }
  }
  return 1.1 * c;
}

}  // namespace

void Dichotomy::finalize(double h_ode) {
  rank_plus_ = static_cast<int>(std::lround(P0_.trace()));
  const int n = dim();
  Eigen::ColPivHouseholderQR<Matrix> qr(P0_);
  stable_basis_ = Matrix(qr.householderQ()).leftCols(rank_plus_);
  Eigen::ColPivHouseholderQR<Matrix> qr2(Matrix(Matrix::Identity(n, n) - P0_));
  unstable_basis_ = Matrix(qr2.householderQ()).leftCols(n - rank_plus_);
  C_ = estimate_constant(*sys_, *this, lambda0_, h_ode);
}

std::variant<Dichotomy, NotHyperbolicInfo> detect_dichotomy_or_witness(const LiftedSystem& sys,
                                                                       double gap_tol,
                                                                       double h_ode) {
  Dichotomy d;
  d.sys_ = std::make_shared<LiftedSystem>(sys);
  const int n = sys.dim();

  if (sys.is_constant()) {
    const Matrix& A = sys.segments().front().A;
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(A.cast<std::complex<double>>());
    if (schur.info() != Eigen::Success)
      fail(ErrorCode::IllConditioned, "Schur decomposition failed");
    double lambda0 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      std::complex<double> ev = schur.matrixT()(i, i);
      d.spectrum_.push_back(ev);
      if (std::abs(ev.real()) <= gap_tol)
        return NotHyperbolicInfo{ev, "eigenvalue within gap_tol of the imaginary axis"};
      lambda0 = std::min(lambda0, std::abs(ev.real()));
    }
    d.lambda0_ = lambda0;
    d.constant_ = true;
    auto split = detail::spectral_split(A, [](std::complex<double> z) { return z.real() < 0.0; });
    d.P0_ = split.projector;
    d.finalize(h_ode);
    return d;
  }

  if (!sys.periodic())
    fail(ErrorCode::NonPeriodicUnsupported,
         "dichotomy detection needs a constant or pattern-periodic lifted system; inject a "
         "Dichotomy manually for general nonautonomous ones");

  const double sp = sys.period_s();
  Matrix M = sys.transition(sp, 0.0, h_ode);
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(M.cast<std::complex<double>>());
  if (schur.info() != Eigen::Success)
    fail(ErrorCode::IllConditioned, "Schur decomposition of the monodromy matrix failed");
  double lambda0 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    std::complex<double> rho = schur.matrixT()(i, i);
    d.spectrum_.push_back(rho);
    double mod = std::abs(rho);
    if (mod >= 1.0 - gap_tol && mod <= 1.0 + gap_tol)
      return NotHyperbolicInfo{rho, "Floquet multiplier within gap_tol of the unit circle"};
    lambda0 = std::min(lambda0, std::abs(std::log(mod)) / sp);
  }
  d.lambda0_ = lambda0;
  d.monodromy_ = true;
  auto split =
      detail::spectral_split(M, [](std::complex<double> z) { return std::abs(z) < 1.0; });
  d.P0_ = split.projector;
  d.finalize(h_ode);
  return d;
}

Dichotomy detect_dichotomy(const LiftedSystem& sys, double gap_tol, double h_ode) {
  auto result = detect_dichotomy_or_witness(sys, gap_tol, h_ode);
  if (auto* info = std::get_if<NotHyperbolicInfo>(&result))
    fail(ErrorCode::NotHyperbolic,
         info->reason + " (witness " + std::to_string(info->witness.real()) + (info->witness.imag() < 0 ? " - " : " + ") +
             std::to_string(std::abs(info->witness.imag())) + "i)");
  return std::get<Dichotomy>(std::move(result));
}

}  // namespace tsdyn
