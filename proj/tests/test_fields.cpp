#include <doctest.h>

#include <cmath>

#include "nlstokes/fields.hpp"

using namespace nlstokes;

namespace {

// u = sin(x2) as the first velocity component
SpectralField sine_x2_field(int dim, int components) {
  SpectralField f(dim, components, 4);
  const double V = std::pow(2.0 * M_PI, dim - 1);
  f.set_mode({0, 1, 0}, Coeff{std::complex<double>(0.0, -M_PI * V)});
  return f;
}

}  // namespace

TEST_CASE("sobolev norm of sin(x2) on the 3d torus") {
  const SpectralField f = sine_x2_field(3, 3);
  const double want = 2.0 * std::pow(M_PI, 1.5);
  CHECK(std::abs(sobolev_norm(f, 0.0) - want) < 1e-12);
  // |xi| = 1 for both modes, so s = 1 changes nothing
  CHECK(std::abs(sobolev_norm(f, 1.0) - want) < 1e-12);
  CHECK(sobolev_norm(SpectralField(3, 3, 0), 0.0) == 0.0);
}

TEST_CASE("subtract") {
  const SpectralField a = sine_x2_field(2, 2);
  const SpectralField zero(2, 2, 0);
  CHECK(subtract(a, a).empty());
  const SpectralField d = subtract(a, zero);
  CHECK(sobolev_norm(subtract(d, a), 0.0) == 0.0);

  SpectralField b(2, 2, 4);
  b.set_mode({2, 0, 0}, Coeff{std::complex<double>(1.0, 0.0)});
  const SpectralField two = subtract(a, b);
  CHECK(two.mode_count() == 4);  // two modes plus conjugates
  CHECK_THROWS_AS(subtract(a, SpectralField(3, 3, 0)), Error);
}

TEST_CASE("grid sampling reproduces sin(x2) pointwise") {
  const SpectralField f = sine_x2_field(2, 2);
  const int M = 12;
  const auto samples = sample_on_grid(f, M);
  for (int j1 = 0; j1 < M; ++j1)
    for (int j2 = 0; j2 < M; ++j2) {
      const double x2 = -M_PI + 2.0 * M_PI * j2 / M;
      const double got = samples[static_cast<std::size_t>((j1 * M + j2) * 2)];
      CHECK(std::abs(got - std::sin(x2)) < 1e-12);
      CHECK(samples[static_cast<std::size_t>((j1 * M + j2) * 2 + 1)] == 0.0);
    }
  CHECK_THROWS_AS(sample_on_grid(f, 2 * f.band() + 1), Error);  // aliasing risk
}

TEST_CASE("grid to coefficients and back") {
  // multi-mode random field, d = 2
  const SpectralField f = random_field(7, 3, 1.0, 2, 2);
  const int M = 2 * f.band() + 2;
  const auto samples = sample_on_grid(f, M);
  const SpectralField back = grid_to_coeffs(samples, 2, 2, f.band(), M);
  CHECK(sobolev_norm(subtract(f, back), 0.0) < 1e-12 * sobolev_norm(f, 0.0));

  // d = 3 round trip
  const SpectralField g = random_field(11, 2, 1.0, 3, 1);
  const int Mg = 2 * g.band() + 2;
  const SpectralField gback =
      grid_to_coeffs(sample_on_grid(g, Mg), 3, 1, g.band(), Mg);
  CHECK(sobolev_norm(subtract(g, gback), 0.0) < 1e-12 * sobolev_norm(g, 0.0));
}

TEST_CASE("analysis of sin(x2) gives the two expected coefficients") {
  for (int dim : {2, 3}) {
    const SpectralField f = sine_x2_field(dim, 1);
    const int M = 10;
    const SpectralField got = grid_to_coeffs(sample_on_grid(f, M), dim, 1, 4, M);
    const double V = std::pow(2.0 * M_PI, dim - 1);
    const auto plus = got.coeff({0, 1, 0})[0];
    CHECK(std::abs(plus - std::complex<double>(0.0, -M_PI * V)) < 1e-10 * V);
    const auto minus = got.coeff({0, -1, 0})[0];
    CHECK(std::abs(minus - std::complex<double>(0.0, M_PI * V)) < 1e-10 * V);
  }
}

TEST_CASE("constant samples violate the mean-zero contract") {
  const int M = 10;
  std::vector<double> samples(static_cast<std::size_t>(M) * M, 1.0);
  CHECK_THROWS_AS(grid_to_coeffs(samples, 2, 1, 4, M), Error);
  std::vector<double> zeros(static_cast<std::size_t>(M) * M, 0.0);
  CHECK(grid_to_coeffs(zeros, 2, 1, 4, M).max_abs() == 0.0);
}

TEST_CASE("random fields are deterministic in the seed") {
  const SpectralField a = random_field(42, 5, 2.0, 2, 2);
  const SpectralField b = random_field(42, 5, 2.0, 2, 2);
  CHECK(a.mode_count() == b.mode_count());
  for (const auto& [xi, v] : a.coeffs()) {
    const Coeff w = b.coeff(xi);
    for (int c = 0; c < 2; ++c) CHECK(v[static_cast<std::size_t>(c)] == w[static_cast<std::size_t>(c)]);
  }
  const SpectralField c = random_field(43, 5, 2.0, 2, 2);
  CHECK(sobolev_norm(subtract(a, c), 0.0) > 0.0);
}

TEST_CASE("random field norm matches the generator formula") {
  const int N = 16;
  const double decay = 2.0;
  const SpectralField f = random_field(42, N, decay, 2, 1);
  double sum = 0.0;
  for (int i = -N; i <= N; ++i)
    for (int j = -N; j <= N; ++j) {
      if (i == 0 && j == 0) continue;
      sum += std::pow(static_cast<double>(i * i + j * j), -decay);
    }
  const double want = std::sqrt(sum * std::pow(2.0 * M_PI, -2.0));
  CHECK(sobolev_norm(f, 0.0) == doctest::Approx(want).epsilon(1e-12));
  // rapidly decaying coefficients give a finite norm trivially
  CHECK(std::isfinite(sobolev_norm(random_field(1, 8, 10.0, 3, 3), 0.0)));
}

TEST_CASE("Plancherel against the periodic trapezoid rule") {
  const SpectralField f = random_field(3, 4, 0.5, 2, 1);
  const int M = 2 * f.band() + 2;
  const auto samples = sample_on_grid(f, M);
  double quad = 0.0;
  for (double v : samples) quad += v * v;
  quad *= std::pow(2.0 * M_PI / M, 2);
  const double plancherel = sobolev_norm(f, 0.0);
  CHECK(std::sqrt(quad) == doctest::Approx(plancherel).epsilon(1e-10));
}

TEST_CASE("norm is monotone in the smoothness index") {
  const SpectralField f = random_field(9, 6, 1.0, 3, 3);
  double prev = sobolev_norm(f, -1.0);
  for (double s : {-0.5, 0.0, 0.5, 1.0, 2.0}) {
    const double cur = sobolev_norm(f, s);
    CHECK(cur >= prev);
    prev = cur;
  }
}

TEST_CASE("operations preserve Hermitian symmetry and reject bad modes") {
  SpectralField f = random_field(5, 4, 1.0, 2, 2);
  f.validate();
  const SpectralField g = truncate_to_band(f, 2);
  g.validate();
  CHECK(g.band() == 2);
  subtract(f, g).validate();

  CHECK_THROWS_AS(f.set_mode({0, 0, 0}, Coeff{}), Error);
  CHECK_THROWS_AS(f.set_mode({9, 0, 0}, Coeff{}), Error);   // outside band
  CHECK_THROWS_AS(f.set_mode({1, 0, 2}, Coeff{}), Error);   // 3rd entry in 2d
}
