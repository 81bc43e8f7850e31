#include <doctest.h>

#include <cmath>
#include <vector>

#include "qfold/nonexample.hpp"

namespace ne = qfold::nonexample;

static constexpr double kAcc = 1e-12;

TEST_CASE("the flat field vanishes at 0 and is positive elsewhere") {
  CHECK(ne::flat_field(0.0) == 0.0);
  CHECK(ne::flat_field(0.5) == doctest::Approx(std::exp(-4.0)).epsilon(1e-12));
  CHECK(ne::flat_field(-0.5) == ne::flat_field(0.5));
}

TEST_CASE("adaptive and fixed-step integrators agree to 1e-10") {
  for (double x : {-1.5, -1.0, -0.4, 0.3, 0.7, 1.0, 2.0}) {
    double adaptive = ne::flow_displacement(x, 1.0, kAcc);
    double fixed = ne::flow_displacement_rk4(x, 1.0, 4096);
    CHECK(std::abs(adaptive - fixed) <= 1e-10);
  }
}

TEST_CASE("flow group law and inverse on sample points") {
  std::vector<double> xs;
  for (int i = -10; i <= 10; ++i)
    if (i != 0) xs.push_back(0.2 * i);
  for (double x : xs) {
    double twice = ne::flow_psi(ne::flow_psi(x, kAcc), kAcc);
    double time2 = x + ne::flow_displacement(x, 2.0, kAcc);
    CHECK(std::abs(twice - time2) <= 1e-9);
    double back = ne::flow_psi_inverse(ne::flow_psi(x, kAcc), kAcc);
    CHECK(std::abs(back - x) <= 1e-9);
  }
}

TEST_CASE("the flow is monotone and preserves each half line") {
  double prev = -1e300;
  for (double x : {-2.0, -1.0, -0.5, -0.1, 0.0, 0.1, 0.5, 1.0, 2.0}) {
    double y = ne::flow_psi(x, kAcc);
    CHECK(y > prev);
    prev = y;
    if (x > 0) CHECK(y > 0);
    if (x < 0) CHECK(y < 0);
  }
  CHECK(ne::flow_psi(0.0, kAcc) == 0.0);
  double m1 = ne::flow_psi(-1.0, kAcc);
  CHECK(m1 > -1.0);
  CHECK(m1 < 0.0);
}

TEST_CASE("the flow respects the flat envelope near 0") {
  double d = std::abs(ne::flow_psi(0.2, kAcc) - 0.2);
  CHECK(d <= 1.4e-11);  // field value at the reached endpoint, just above e^-25
  CHECK(ne::flow_psi(0.5, kAcc) - 0.5 > 0.0);
}

TEST_CASE("finite-difference jets of the displacement vanish at 0") {
  for (int order = 1; order <= 4; ++order) {
    auto r = ne::jet_flatness_check(order, 0.1, 1e-12);
    CHECK(r.pass);
    CHECK(r.envelope_pass);
    for (const auto& c : r.checks) CHECK(std::abs(c.estimate) <= 1e-6);
  }
}

TEST_CASE("hybrid map orbits coincide with the flow orbits") {
  std::vector<double> samples;
  for (int i = 1; i <= 5; ++i) {
    samples.push_back(0.3 * i);
    samples.push_back(-0.3 * i);
  }
  samples.push_back(0.0);
  auto r = ne::orbit_coincidence(samples, 3, kAcc);
  CHECK(r.pass);
  CHECK(r.max_discrepancy <= 1e-9);
}

TEST_CASE("the hybrid map matches no single flow iterate on a two-sided interval") {
  auto r = ne::recovery_failure_demo(-0.5, 0.5, 3, 1e-12);
  CHECK(!r.matched);
  CHECK(r.one_sided_best <= 1e-9);
  for (const auto& c : r.candidates) CHECK(c.residual_total > 0.0);
  // every candidate shares the jet of the identity at 0 up to the tested order
  for (double spread : r.jet_spread) CHECK(spread <= 1e-5);
  CHECK(r.summary.find("evidence") != std::string::npos);
}
