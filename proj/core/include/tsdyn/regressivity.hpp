#pragma once

#include <string>
#include <vector>

#include "tsdyn/piecewise_matrix.hpp"
#include "tsdyn/time_scale.hpp"

namespace tsdyn {

/// Regressivity of E + mu(t) A(t) over the pattern's right-scattered points
/// (right-dense points are trivially regressive). sup_inverse_norm is the
/// uniform-regressivity witness.
struct RegressivityReport {
  bool regressive = true;
  bool uniformly_regressive = true;
  bool positively_regressive = true;
  double sup_inverse_norm = 1.0;  // at least ||E^-1|| from dense points

  struct Witness {
    double t;
    double mu;
    Matrix jump_matrix;  // E + mu A(t)
    std::string reason;
  };
  std::vector<Witness> witnesses;
};

RegressivityReport regressivity_report(const TimeScale& ts, const PiecewiseMatrix& A);

}  // namespace tsdyn
