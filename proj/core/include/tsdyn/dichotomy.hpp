#pragma once

#include <complex>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "tsdyn/lifted_system.hpp"

namespace tsdyn {

/// Spectrum within gap_tol of the neutral set (imaginary axis / unit circle)
/// is refused rather than classified.
inline constexpr double kGapTol = 1e-6;

/// Phi_A(s, tau) of the lifted ODE (exact exponentials on constant
/// segments, RK4 on function-valued pieces).
Matrix cauchy_matrix(const LiftedSystem& sys, double s, double tau, double h_ode = 1e-3);

/// Psi_A(t, t0) of the time-scale system: ODE transitions across dense
/// pieces, jump factors E + mu A at scattered points. Backward evaluation
/// requires regressivity (NotRegressive otherwise).
Matrix fundamental_matrix_ts(const PiecewiseMatrix& A, double t, double t0,
                             double h_ode = 1e-3);

/// Exponential dichotomy data of a lifted system: projectors, the constants
/// (C, lambda0), the weighted constants and the Green-operator norm bound.
/// C is an empirical estimate over sampled transitions (inflated by 1.1),
/// not a certificate.
class Dichotomy {
 public:
  /// Library-level escape hatch: inject projector and constants for systems
  /// the detector does not handle (e.g. general nonautonomous ones).
  static Dichotomy manual(std::shared_ptr<const LiftedSystem> sys, Matrix proj_plus0,
                          double C, double lambda0);

  int dim() const { return static_cast<int>(P0_.rows()); }
  int rank_plus() const { return rank_plus_; }
  double C() const { return C_; }
  double lambda0() const { return lambda0_; }
  double lambda1() const { return 0.5 * lambda0_; }
  /// ||L|| estimate: C (2/lambda0) 1.1.
  double K() const;
  /// Weighted-space bound C (1/(l0-l) + 1/(l0+l)) 1.1 for lambda < lambda0.
  double K_lambda(double lambda) const;

  const Matrix& proj_plus0() const { return P0_; }
  Matrix proj_plus(double s) const;
  Matrix proj_minus(double s) const;
  const Matrix& stable_basis() const { return stable_basis_; }
  const Matrix& unstable_basis() const { return unstable_basis_; }

  const LiftedSystem& system() const { return *sys_; }
  const std::shared_ptr<const LiftedSystem>& system_ptr() const { return sys_; }

  /// Eigenvalues (constant systems) or Floquet multipliers (periodic ones).
  const std::vector<std::complex<double>>& spectrum() const { return spectrum_; }
  bool from_monodromy() const { return monodromy_; }
  bool constant_system() const { return constant_; }

 private:
  Dichotomy() = default;
  void finalize(double h_ode);
  friend std::variant<Dichotomy, struct NotHyperbolicInfo> detect_dichotomy_or_witness(
      const LiftedSystem& sys, double gap_tol, double h_ode);

  std::shared_ptr<const LiftedSystem> sys_;
  Matrix P0_;
  Matrix stable_basis_;
  Matrix unstable_basis_;
  int rank_plus_ = 0;
  double C_ = 1.1;
  double lambda0_ = 0.0;
  std::vector<std::complex<double>> spectrum_;
  bool monodromy_ = false;
  bool constant_ = false;
};

struct NotHyperbolicInfo {
  std::complex<double> witness;  // eigenvalue or multiplier in the neutral band
  std::string reason;
};

/// Constant coefficients split by the spectrum of A; periodic ones by the
/// Floquet multipliers of the monodromy matrix. Anything else is refused
/// (NonPeriodicUnsupported).
std::variant<Dichotomy, NotHyperbolicInfo> detect_dichotomy_or_witness(
    const LiftedSystem& sys, double gap_tol = kGapTol, double h_ode = 1e-3);

/// Throwing convenience wrapper (Error with code NotHyperbolic).
Dichotomy detect_dichotomy(const LiftedSystem& sys, double gap_tol = kGapTol,
                           double h_ode = 1e-3);

}  // namespace tsdyn
