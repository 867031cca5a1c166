#include <doctest.h>

#include <cmath>

#include "nlstokes/errors.hpp"
#include "nlstokes/quadrature.hpp"

using namespace nlstokes;

TEST_CASE("gauss rule integrates polynomials exactly") {
  const GaussRule& r = gauss_legendre(15);
  // degree 2n-1 = 29 on [-1,1]
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i)
    s += r.weights[i] * std::pow(r.nodes[i], 28);
  CHECK(s == doctest::Approx(2.0 / 29.0).epsilon(1e-14));
  double w = 0.0;
  for (double wi : r.weights) w += wi;
  CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("adaptive quadrature on smooth integrands") {
  auto r = integrate_adaptive([](double x) { return std::exp(x); }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));

  // oscillatory
  auto r2 = integrate_adaptive([](double x) { return std::cos(40.0 * x); }, 0.0, 1.0);
  CHECK(r2.value == doctest::Approx(std::sin(40.0) / 40.0).epsilon(1e-12));

  QuadratureOptions opt;
  opt.initial_panels = 20;
  auto r3 = integrate_adaptive([](double x) { return std::cos(300.0 * x); }, 0.0, 1.0, opt);
  CHECK(r3.value == doctest::Approx(std::sin(300.0) / 300.0).epsilon(1e-10));
}

TEST_CASE("zero integrand returns zero") {
  auto r = integrate_adaptive([](double) { return 0.0; }, 0.0, 1.0);
  CHECK(r.value == 0.0);
}

TEST_CASE("panel budget exhaustion raises QuadratureFailure") {
  QuadratureOptions opt;
  opt.panel_budget = 32;
  opt.rel_tol = 1e-15;
  bool threw = false;
  try {
    integrate_adaptive([](double x) { return std::cos(5.0e4 * x); }, 0.0, 1.0, opt);
  } catch (const Error& e) {
    threw = true;
    CHECK(e.code() == ErrorCode::quadrature_failure);
  }
  CHECK(threw);
}

TEST_CASE("graded mesh handles an integrable endpoint singularity") {
  // int_0^1 r^{-0.3} dr = 1/0.7
  auto r = integrate_graded([](double x) { return std::pow(x, -0.3); }, 0.0, 1.0,
                            0.5, 60);
  CHECK(r.value == doctest::Approx(1.0 / 0.7).epsilon(1e-9));
}
