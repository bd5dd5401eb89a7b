#pragma once

#include <Eigen/Core>
#include <complex>
#include <string>
#include <vector>

#include "tsdyn/grid_function.hpp"

namespace tsdyn {

inline constexpr double kCondMax = 1e8;
/// exp(log A) must reproduce A within this relative tolerance.
inline constexpr double kTolExpLogRel = 1e-10;
/// Eigenvalue clustering / rank tolerance, relative to ||A||.
inline constexpr double kTolEigRel = 1e-8;

enum class LogBranch { Principal, RealPreferring };

struct LogResult {
  Eigen::MatrixXcd value;
  bool real_valued = false;
  /// Records the branch choice at negative eigenvalues (pairing certificate).
  std::string branch_note;

  Matrix real() const;
};

/// Matrix logarithm with branch selection. The real-preferring branch maps
/// paired negative eigenvalues through 2x2 rotation-scaling blocks (so
/// positive matrices get a real logarithm); everything else uses the
/// principal branch. Always satisfies exp(result) = A within
/// kTolExpLogRel * ||A||.
LogResult matrix_log(const Matrix& A, LogBranch branch = LogBranch::RealPreferring);

/// Principal-branch logarithm of a complex matrix.
LogResult matrix_log_principal(const Eigen::MatrixXcd& A);

enum class Positivity { Positive, NotPositive, Indeterminate };

/// Certificate for the positivity test: eigenvalues, and per negative
/// eigenvalue the Jordan block-size counts inferred from rank sequences.
struct PositivityReport {
  Positivity outcome = Positivity::Indeterminate;
  std::vector<std::complex<double>> eigenvalues;
  struct NegativeCluster {
    double lambda = 0.0;
    int multiplicity = 0;
    std::vector<int> block_counts;  // block_counts[k-1] = number of k x k blocks
    bool resolved = false;
  };
  std::vector<NegativeCluster> negatives;
  std::string note;
};

/// A nonsingular real matrix is positive iff every Jordan block size at
/// every negative eigenvalue occurs an even number of times (equivalently,
/// iff it has a real logarithm / is a real square). Rank sequences of
/// (A - lambda I)^k decide the block counts; unresolvable clusters yield
/// Indeterminate rather than a guess.
PositivityReport classify_positivity(const Matrix& A);

/// Convenience wrapper; throws DefectiveAmbiguity on Indeterminate.
bool is_positive_matrix(const Matrix& A);

}  // namespace tsdyn
