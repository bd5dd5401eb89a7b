#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "doctest.h"
#include "tsdyn/error.hpp"
#include "tsdyn/matrix_log.hpp"
#include "tsdyn/piecewise_matrix.hpp"
#include "tsdyn/regressivity.hpp"
#include "tsdyn/time_scale.hpp"

using namespace tsdyn;

namespace {

// the round-trip is always judged against Eigen's exponential, which shares
// no code with the logarithm construction
double roundtrip_defect(const LogResult& lg, const Matrix& A) {
  Eigen::MatrixXcd back = lg.value.exp();
  return (back - A.cast<std::complex<double>>()).norm();
}

Matrix random_matrix(std::mt19937_64& rng, int n, double amp = 2.0) {
  std::uniform_real_distribution<double> uni(-amp, amp);
  Matrix A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = uni(rng);
  return A;
}

double condition_number(const Matrix& A) {
  Eigen::JacobiSVD<Matrix> svd(A);
  double smin = svd.singularValues().tail(1)(0);
  return smin > 0.0 ? svd.singularValues()(0) / smin
                    : std::numeric_limits<double>::infinity();
}

}  // namespace

TEST_SUITE_BEGIN("matlog");

TEST_CASE("log of identity and diagonal matrices") {
  auto lg = matrix_log(Matrix::Identity(2, 2));
  CHECK(lg.real_valued);
  CHECK(lg.real().norm() == doctest::Approx(0.0).epsilon(1e-14));

  Matrix d = Vector::LinSpaced(2, 2.0, 3.0).asDiagonal();
  auto lgd = matrix_log(d);
  CHECK(lgd.real_valued);
  CHECK(lgd.real()(0, 0) == doctest::Approx(std::log(2.0)));
  CHECK(lgd.real()(1, 1) == doctest::Approx(std::log(3.0)));
}

TEST_CASE("-I2 has a real logarithm (paired negative eigenvalues)") {
  Matrix m = -Matrix::Identity(2, 2);
  auto lg = matrix_log(m);
  CHECK(lg.real_valued);
  CHECK(roundtrip_defect(lg, m) <= 1e-12);
  // the rotation generator: angle pi in the paired plane, no radial part
  Matrix L = lg.real();
  CHECK(std::abs(L(0, 1)) == doctest::Approx(std::numbers::pi).epsilon(1e-10));
  CHECK(L(0, 0) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("scalar -1 has no real logarithm") {
  Matrix m(1, 1);
  m(0, 0) = -1.0;
  auto lg = matrix_log(m);
  CHECK(!lg.real_valued);
  CHECK(std::abs(lg.value(0, 0).imag()) == doctest::Approx(std::numbers::pi));
  CHECK(roundtrip_defect(lg, m) <= 1e-12);
  CHECK_THROWS_AS(lg.real(), Error);
}

TEST_CASE("rotation-scaling matrices are positive with a real log") {
  Matrix m(2, 2);
  m << 0.8, -1.0, 1.0, 0.8;
  CHECK(is_positive_matrix(m));
  auto lg = matrix_log(m);
  CHECK(lg.real_valued);
  CHECK(roundtrip_defect(lg, m) <= 1e-12 * m.norm());
}

TEST_CASE("defective negative block: not positive, complex log still valid") {
  Matrix m(2, 2);
  m << -1.0, 5.0, 0.0, -1.0;
  auto report = classify_positivity(m);
  CHECK(report.outcome == Positivity::NotPositive);
  auto lg = matrix_log(m);
  CHECK(!lg.real_valued);
  CHECK(roundtrip_defect(lg, m) <= 1e-10 * m.norm());
}

TEST_CASE("positivity certificate examples") {
  Matrix d = Vector::LinSpaced(2, 1.0, 2.0).asDiagonal();
  CHECK(is_positive_matrix(d));

  Matrix neg(1, 1);
  neg(0, 0) = -1.0;
  CHECK(!is_positive_matrix(neg));

  CHECK(is_positive_matrix(Matrix(-Matrix::Identity(2, 2))));

  Matrix paired = -2.0 * Matrix::Identity(2, 2);
  paired(0, 0) = -2.0 + 1e-13;  // clustered pair within tolerance
  CHECK(is_positive_matrix(paired));
}

TEST_CASE("mixed negative pairs across distinct eigenvalues") {
  // two pairs at different negative values plus a positive direction
  Vector d(5);
  d << -1.0, -1.0, -3.0, -3.0, 2.0;
  Matrix m = d.asDiagonal();
  // conjugate by a fixed well-conditioned basis
  Matrix v(5, 5);
  v << 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 0, 0, 1, 1, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 2;
  Matrix a = v * m * v.inverse();
  CHECK(is_positive_matrix(a));
  auto lg = matrix_log(a);
  CHECK(lg.real_valued);
  CHECK(roundtrip_defect(lg, a) <= 1e-9 * a.norm());
}

TEST_CASE("squares of real matrices are positive") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 1 + static_cast<int>(rng() % 4);
    Matrix c = random_matrix(rng, n);
    if (std::abs(c.determinant()) < 1e-3) continue;
    Matrix sq = c * c;
    if (condition_number(sq) > 1e6) continue;
    auto report = classify_positivity(sq);
    CHECK(report.outcome == Positivity::Positive);
    auto lg = matrix_log(sq);
    CHECK(lg.real_valued);
    CHECK(roundtrip_defect(lg, sq) <= 1e-10 * std::max(1.0, sq.norm()));
  }
}

TEST_CASE("exp(log A) = A on random well-conditioned matrices") {
  std::mt19937_64 rng(11);
  int accepted = 0;
  while (accepted < 150) {
    int n = 2 + static_cast<int>(rng() % 4);
    Matrix A = random_matrix(rng, n);
    if (condition_number(A) > 1e4) continue;
    ++accepted;
    auto lg = matrix_log(A);
    CHECK(roundtrip_defect(lg, A) <= 1e-10 * A.norm());
  }
}

TEST_CASE("singular and ill-conditioned inputs are rejected") {
  Matrix z = Matrix::Zero(2, 2);
  CHECK_THROWS_AS(matrix_log(z), Error);

  Matrix bad(2, 2);
  bad << 1.0, 0.0, 0.0, 1e-12;
  try {
    matrix_log(bad);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IllConditioned);
  }
}

TEST_CASE("regressivity reports") {
  auto z = std::make_shared<TimeScale>(TimeScale::integers());

  auto singular = PiecewiseMatrix::constant(z, -Matrix::Identity(1, 1));
  auto rep = regressivity_report(*z, singular);
  CHECK(!rep.regressive);
  REQUIRE(!rep.witnesses.empty());
  CHECK(rep.witnesses[0].t == doctest::Approx(0.0));

  Matrix half(1, 1);
  half(0, 0) = -0.5;
  auto ok = regressivity_report(*z, PiecewiseMatrix::constant(z, half));
  CHECK(ok.regressive);
  CHECK(ok.uniformly_regressive);
  CHECK(ok.positively_regressive);
  CHECK(ok.sup_inverse_norm == doctest::Approx(2.0));

  auto r = std::make_shared<TimeScale>(TimeScale::reals());
  Matrix any(2, 2);
  any << 3.0, -7.0, 2.0, 11.0;
  auto dense = regressivity_report(*r, PiecewiseMatrix::constant(r, any));
  CHECK(dense.regressive);
  CHECK(dense.positively_regressive);
  CHECK(dense.sup_inverse_norm == doctest::Approx(1.0));

  // jump matrix 1 + mu a negative on integers: regressive but not positively
  Matrix neg(1, 1);
  neg(0, 0) = -1.5;
  auto np = regressivity_report(*z, PiecewiseMatrix::constant(z, neg));
  CHECK(np.regressive);
  CHECK(!np.positively_regressive);
}

TEST_CASE("regressivity is a pattern property, not a sampling one") {
  auto pulse = std::make_shared<TimeScale>(TimeScale::pulse(1.0, 1.0));
  Matrix a(2, 2);
  a << -0.4, 0.2, 0.0, -0.3;
  auto r1 = regressivity_report(*pulse, PiecewiseMatrix::constant(pulse, a));
  auto r2 = regressivity_report(*pulse, PiecewiseMatrix::constant(pulse, a));
  CHECK(r1.regressive == r2.regressive);
  CHECK(r1.sup_inverse_norm == doctest::Approx(r2.sup_inverse_norm));
}

TEST_CASE("pattern mismatch is refused") {
  auto z = std::make_shared<TimeScale>(TimeScale::integers());
  auto pulse = std::make_shared<TimeScale>(TimeScale::pulse(1.0, 1.0));
  auto A = PiecewiseMatrix::constant(pulse, Matrix::Identity(1, 1));
  CHECK_THROWS_AS(regressivity_report(*z, A), Error);
}

TEST_SUITE_END();
