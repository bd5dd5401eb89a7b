#pragma once

#include <optional>
#include <vector>

namespace tsdyn {

/// Closed interval [lo, hi]; an isolated point is encoded as lo == hi.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// A time scale represented as a finite pattern of closed intervals on
/// [0, +inf), optionally repeated with period P.
///
/// The pattern must start at 0, pieces are sorted and pairwise disjoint,
/// and P >= b_last. When P == b_last the translated copies join seamlessly
/// (e.g. pieces {[0,1]}, P = 1 is the half line). Aperiodic patterns are
/// truncated computational views; queries past the last point follow the
/// truncated-tail convention (sigma(b_last) = b_last).
class TimeScale {
 public:
  static TimeScale periodic(std::vector<Interval> pieces, double period);
  static TimeScale truncated(std::vector<Interval> pieces);

  /// [0, +inf): pattern {[0,1]} with period 1.
  static TimeScale reals();
  /// {0, 1, 2, ...}: pattern {[0,0]} with period 1.
  static TimeScale integers();
  /// Pulse scale: intervals of length `on` separated by gaps of length `off`.
  static TimeScale pulse(double on, double off);

  bool is_periodic() const { return periodic_; }
  double period() const;
  double pattern_end() const { return pieces_.back().hi; }
  const std::vector<Interval>& pieces() const { return pieces_; }

  bool contains(double t) const;

  /// sigma(t) = inf { tau in T : tau > t }. At the truncated tail of an
  /// aperiodic scale returns t itself (query with is_truncated_tail).
  double sigma(double t) const;
  /// mu(t) = sigma(t) - t.
  double graininess(double t) const;
  /// [t]_T = max { tau in T : tau <= t }, defined for every t >= 0.
  double floor(double t) const;

  bool right_scattered(double t) const;
  bool is_truncated_tail(double t) const;

  /// One structural element between two scale points: either a dense run
  /// inside a piece or a gap (start right-scattered, end = sigma(start)).
  struct Segment {
    double start;
    double end;
    bool gap;
  };
  /// Splits [from, to] (both scale points) into dense runs and gaps.
  std::vector<Segment> decompose(double from, double to) const;

  struct SyndeticResult {
    bool syndetic;
    double sup_gap;
  };
  /// Throws UnboundedRequired on truncated views (Def. of a time scale
  /// demands unboundedness).
  SyndeticResult is_syndetic() const;
  /// Largest gap present in the pattern (truncated views allowed).
  double observed_sup_gap() const;

  /// Index of the pattern piece containing [t]_T.
  int piece_index_of(double t) const;
  /// Reduces t into the base pattern: returns r in [0, P) with
  /// t = copies * P + r. Identity for truncated scales.
  double reduce(double t, long& copies) const;

  struct ScatteredPoint {
    double t;   // representative in the first pattern copy
    double mu;  // gap length
    int piece;  // pattern piece whose right endpoint t is
  };
  /// All right-scattered points of the base pattern (includes the wrap gap
  /// b_last -> P for periodic scales).
  std::vector<ScatteredPoint> scattered_pattern_points() const;

  /// All scale points up to t_max: piece endpoints of every pattern copy
  /// plus dense interior points at spacing <= h. Sorted, deduplicated.
  std::vector<double> sample_points(double t_max, double h) const;

  /// Re-bases the scale so that scale point t0 becomes 0.
  TimeScale shifted(double t0) const;

  /// Absolute snapping tolerance for point membership, scaled by max(1,|t|).
  static constexpr double kPointTol = 1e-9;
  static double point_tol(double t);

 private:
  TimeScale(std::vector<Interval> pieces, std::optional<double> period);

  // piece containing reduced coordinate r, or -1
  int find_piece(double r) const;
  // gap after piece i in pattern coordinates; nullopt at a truncated tail
  std::optional<double> gap_after(int i) const;

  std::vector<Interval> pieces_;
  double period_ = 0.0;
  bool periodic_ = false;
};

}  // namespace tsdyn
