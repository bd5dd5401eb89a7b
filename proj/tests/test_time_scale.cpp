#include <cmath>
#include <memory>

#include "doctest.h"
#include "tsdyn/error.hpp"
#include "tsdyn/grid_function.hpp"
#include "tsdyn/time_scale.hpp"

using namespace tsdyn;

namespace {

std::shared_ptr<const TimeScale> make(TimeScale ts) {
  return std::make_shared<TimeScale>(std::move(ts));
}

Vector scalar(double v) {
  Vector x(1);
  x(0) = v;
  return x;
}

}  // namespace

TEST_SUITE_BEGIN("timescale");

TEST_CASE("sigma on the standard scales") {
  auto z = TimeScale::integers();
  CHECK(z.sigma(3.0) == doctest::Approx(4.0));
  CHECK(z.graininess(7.0) == doctest::Approx(1.0));

  auto r = TimeScale::reals();
  CHECK(r.sigma(0.5) == doctest::Approx(0.5));
  CHECK(r.graininess(0.25) == 0.0);
  CHECK(r.graininess(1.0) == 0.0);  // copies join seamlessly
  CHECK(r.sigma(17.75) == doctest::Approx(17.75));

  auto two = TimeScale::periodic({{0.0, 1.0}, {2.0, 3.0}}, 4.0);
  CHECK(two.sigma(1.0) == doctest::Approx(2.0));
  CHECK(two.sigma(3.0) == doctest::Approx(4.0));
  CHECK(two.sigma(5.0) == doctest::Approx(6.0));

  CHECK_THROWS_AS(z.sigma(2.5), Error);
}

TEST_CASE("graininess of a sparse periodic scale") {
  auto ts = TimeScale::periodic({{0.0, 1.0}}, 4.0);
  CHECK(ts.graininess(1.0) == doctest::Approx(3.0));
  CHECK(ts.graininess(5.0) == doctest::Approx(3.0));  // periodicity
  CHECK(ts.graininess(0.5) == 0.0);
}

TEST_CASE("floor on and off the scale") {
  auto z = TimeScale::integers();
  CHECK(z.floor(2.7) == doctest::Approx(2.0));
  CHECK(z.floor(5.0) == doctest::Approx(5.0));

  auto ts = TimeScale::periodic({{0.0, 1.0}}, 4.0);
  CHECK(ts.floor(3.9) == doctest::Approx(1.0));
  CHECK(ts.floor(4.2) == doctest::Approx(4.2));
  CHECK(ts.floor(0.0) == 0.0);
  CHECK_THROWS_AS(ts.floor(-1.0), Error);
}

TEST_CASE("floor is the identity exactly on scale points") {
  auto ts = TimeScale::periodic({{0.0, 0.5}, {1.0, 1.0}}, 2.0);
  for (double t : ts.sample_points(20.0, 0.1)) {
    CHECK(ts.contains(t));
    CHECK(ts.floor(t) == doctest::Approx(t).epsilon(1e-12));
  }
  CHECK(ts.floor(0.75) == doctest::Approx(0.5));
  CHECK(!ts.contains(0.75));
}

TEST_CASE("syndetic queries") {
  CHECK(TimeScale::integers().is_syndetic().syndetic);
  CHECK(TimeScale::integers().is_syndetic().sup_gap == doctest::Approx(1.0));
  CHECK(TimeScale::reals().is_syndetic().sup_gap == doctest::Approx(0.0));

  auto truncated = TimeScale::truncated({{0.0, 1.0}});
  CHECK_THROWS_AS(truncated.is_syndetic(), Error);
  try {
    truncated.is_syndetic();
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnboundedRequired);
  }
}

TEST_CASE("decompose walks the structure") {
  auto pulse = TimeScale::pulse(1.0, 1.0);
  auto segs = pulse.decompose(0.0, 4.0);
  REQUIRE(segs.size() == 4);
  CHECK(!segs[0].gap);
  CHECK(segs[0].end == doctest::Approx(1.0));
  CHECK(segs[1].gap);
  CHECK(segs[1].end == doctest::Approx(2.0));
  CHECK(!segs[2].gap);
  CHECK(segs[3].gap);

  // sigma lands back on the scale
  for (double t : pulse.sample_points(10.0, 0.25)) {
    double s = pulse.sigma(t);
    CHECK(pulse.contains(s));
    CHECK(pulse.floor(s) == doctest::Approx(s));
  }
}

TEST_CASE("shifted scale re-bases the pattern") {
  auto pulse = TimeScale::pulse(1.0, 1.0);
  auto sh = pulse.shifted(2.0);
  CHECK(sh.is_periodic());
  CHECK(sh.period() == doctest::Approx(2.0));
  CHECK(sh.contains(0.0));
  CHECK(sh.graininess(1.0) == doctest::Approx(1.0));

  auto z = TimeScale::integers().shifted(3.0);
  CHECK(z.graininess(0.0) == doctest::Approx(1.0));
}

TEST_CASE("delta derivative: forward difference across gaps") {
  auto z = make(TimeScale::integers());
  auto f = GridFunction::sample(z, [](double t) { return scalar(t * t); }, 10.0, 1.0);
  CHECK(delta_derivative(f, 3.0)(0) == doctest::Approx(7.0));  // 16 - 9

  auto pulse = make(TimeScale::pulse(1.0, 1.0));
  auto g = GridFunction::sample(pulse, [](double t) { return scalar(t); }, 2.0, 1e-2);
  CHECK(delta_derivative(g, 1.0)(0) == doctest::Approx(1.0));
}

TEST_CASE("delta derivative: classical derivative on dense parts") {
  auto r = make(TimeScale::reals());
  auto f = GridFunction::sample(r, [](double t) { return scalar(t * t); }, 3.0, 1e-3);
  CHECK(delta_derivative(f, 1.0)(0) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(delta_derivative(f, 0.0)(0) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("delta derivative error paths") {
  auto trunc = make(TimeScale::truncated({{0.0, 1.0}}));
  auto f = GridFunction::sample(trunc, [](double t) { return scalar(t); }, 1.0, 0.5);
  CHECK_THROWS_AS(delta_derivative(f, 1.0), Error);  // truncated tail

  auto r = make(TimeScale::reals());
  std::vector<double> times{0.0, 0.5};
  std::vector<Vector> vals{scalar(0.0), scalar(0.5)};
  GridFunction sparse(r, times, vals);
  CHECK_THROWS_AS(delta_derivative(sparse, 0.0), Error);  // < 3 samples
}

TEST_CASE("delta integral on the standard scales") {
  auto z = make(TimeScale::integers());
  auto one = GridFunction::sample(z, [](double) { return scalar(1.0); }, 6.0, 1.0);
  CHECK(delta_integral(one, 0.0, 5.0)(0) == doctest::Approx(5.0));

  auto r = make(TimeScale::reals());
  auto lin = GridFunction::sample(r, [](double t) { return scalar(t); }, 3.0, 1e-3);
  CHECK(delta_integral(lin, 0.0, 2.0)(0) == doctest::Approx(2.0).epsilon(1e-9));

  auto pulse = make(TimeScale::pulse(1.0, 1.0));
  auto onep = GridFunction::sample(pulse, [](double) { return scalar(1.0); }, 4.0, 1e-2);
  CHECK(delta_integral(onep, 0.0, 2.0)(0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("delta integral additivity over concatenated ranges") {
  auto pulse = make(TimeScale::pulse(1.0, 0.5));
  auto f = GridFunction::sample(
      pulse, [](double t) { return scalar(std::sin(t) + 0.3 * t); }, 9.0, 1e-2);
  double whole = delta_integral(f, 0.0, 7.0)(0);
  double split = delta_integral(f, 0.0, 2.5)(0) + delta_integral(f, 2.5, 7.0)(0);
  CHECK(whole == doctest::Approx(split).epsilon(1e-12));
}

TEST_CASE("fundamental theorem on a mixed scale") {
  auto pulse = make(TimeScale::pulse(1.0, 1.0));
  auto F = [](double t) { return scalar(t * t * t - 2.0 * t * t + t); };
  auto Fg = GridFunction::sample(pulse, F, 6.0, 1e-3);

  std::vector<double> times;
  std::vector<Vector> derivs;
  for (double t : pulse->sample_points(5.0, 1e-2)) {
    times.push_back(t);
    derivs.push_back(delta_derivative(Fg, t));
  }
  GridFunction dF(pulse, times, derivs);
  double lhs = delta_integral(dF, 0.0, 5.0)(0);
  double rhs = F(5.0)(0) - F(0.0)(0);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-5));
}

TEST_CASE("callable delta integral (Simpson route)") {
  auto pulse = TimeScale::pulse(1.0, 1.0);
  auto fn = [](double t) { return scalar(t); };
  // over [0,2]: the dense part contributes 1/2, the gap contributes mu*f(1) = 1
  CHECK(delta_integral(pulse, fn, 0.0, 2.0, 1e-3)(0) == doctest::Approx(1.5).epsilon(1e-10));
}

TEST_CASE("periodic graininess repeats over copies") {
  auto ts = TimeScale::periodic({{0.0, 0.25}, {1.0, 1.5}}, 3.0);
  for (double base : {0.0, 0.25, 1.0, 1.25, 1.5}) {
    CHECK(ts.graininess(base) == doctest::Approx(ts.graininess(base + 3.0)));
    CHECK(ts.graininess(base) == doctest::Approx(ts.graininess(base + 30.0)));
  }
}

TEST_CASE("scale validation rejects malformed patterns") {
  CHECK_THROWS_AS(TimeScale::periodic({{0.5, 1.0}}, 2.0), Error);              // must contain 0
  CHECK_THROWS_AS(TimeScale::periodic({{0.0, 2.0}, {1.0, 3.0}}, 4.0), Error);  // overlap
  CHECK_THROWS_AS(TimeScale::periodic({{0.0, 3.0}}, 2.0), Error);              // period short
}

TEST_SUITE_END();
