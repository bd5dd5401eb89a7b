#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "tsdyn/piecewise_matrix.hpp"
#include "tsdyn/rescaling.hpp"

namespace tsdyn {

enum class LiftMode { Auto, RequireReal };

/// The ODE x' = A(s) x obtained from x^Delta = A(t) x by the time
/// substitution s(t): A(s) keeps the time-scale coefficient on images of
/// dense pieces and takes log(E + mu A)/log(1+mu) on gap images.
///
/// When some jump matrix E + mu A is not positive the logarithm is complex;
/// the system is then represented as the doubled 2n-dimensional real system
/// acting on (Re x, Im x), with embed()/extract() translating states.
class LiftedSystem {
 public:
  struct Segment {
    double s0;
    double s1;
    double t0;      // t at the segment start (pattern coordinate)
    bool gap = false;
    double mu = 0.0;
    Matrix A;       // working-dimension coefficient (constant on the segment)
    Matrix A_ts;    // original time-scale coefficient at t0
    std::function<Matrix(double)> A_of_t;  // set on function-valued dense pieces
  };

  const TimeRescaling& rescaling() const { return rescaling_; }
  const TimeScale& scale() const { return rescaling_.scale(); }
  const PiecewiseMatrix& coefficient() const { return coeff_; }
  const std::vector<Segment>& segments() const { return segments_; }

  int dim() const { return dim_; }        // working dimension (2n when doubled)
  int ts_dim() const { return ts_dim_; }  // original n
  bool doubled() const { return doubled_; }
  bool real_lift() const { return !doubled_; }

  bool periodic() const { return scale().is_periodic(); }
  double period_s() const { return rescaling_.period_image(); }
  /// End of the computable s-range (finite only for truncated scales).
  double horizon_s() const { return rescaling_.horizon(); }

  bool is_constant() const;
  double sup_norm() const;

  /// Working-dimension coefficient at s.
  Matrix eval(double s) const;

  /// Segment index and the s-offset of its pattern copy (copy * S_P).
  std::pair<int, double> segment_at(double s) const;

  /// Cauchy transition Phi(s1, s0): exact matrix exponentials on constant
  /// segments, RK4 at step h_ode on function-valued pieces. s1 < s0 inverts.
  Matrix transition(double s1, double s0, double h_ode = 1e-3) const;

  Vector embed(const Vector& x) const;
  Vector extract(const Vector& z) const;
  Matrix embed_matrix(const Eigen::MatrixXcd& M) const;

  /// Weighted gain of the gap right-hand-side transform: max over gaps of
  /// ||A_gap A(t0)^-1|| (1+mu)^lambda, 1 when there are no gaps. Used by the
  /// exponential-weight estimates.
  double rhs_gain(double lambda) const;

 private:
  friend LiftedSystem lift_coefficient(const PiecewiseMatrix& A, LiftMode mode);

  LiftedSystem(TimeRescaling rescaling, PiecewiseMatrix coeff)
      : rescaling_(std::move(rescaling)), coeff_(std::move(coeff)) {}

  struct Location {
    int segment;
    long copy;
    double base_s;  // copy * S_P
  };
  Location locate(double s) const;

  TimeRescaling rescaling_;
  PiecewiseMatrix coeff_;
  std::vector<Segment> segments_;
  int dim_ = 0;
  int ts_dim_ = 0;
  bool doubled_ = false;
  double pattern_span_s_ = 0.0;
};

/// Builds the lifted ODE coefficient. Requires uniform regressivity
/// (singular E + mu A fails with NotRegressive). With LiftMode::RequireReal
/// a non-positive jump matrix fails with NonPositiveGapMatrix instead of
/// falling back to the doubled complex representation.
LiftedSystem lift_coefficient(const PiecewiseMatrix& A, LiftMode mode = LiftMode::Auto);

/// Defect of Phi_A(s(t), 0) = Psi_A(t, 0), sampled on scale points up to
/// horizon_t. Psi is stepped exactly (matrix exponentials and jump factors);
/// Phi is integrated by RK4, which keeps the two routes independent. The
/// defect at each point is normalised by max(1, ||Psi||).
struct IdentityCheck {
  double max_defect = 0.0;
  double argmax_t = 0.0;
  int samples = 0;
};
IdentityCheck check_fundamental_identity(const LiftedSystem& sys, double horizon_t,
                                         double h_ode = 1e-3);

}  // namespace tsdyn
