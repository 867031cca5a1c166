#include <doctest.h>

#include <cmath>

#include "nlstokes/symbols.hpp"
#include "oracles.hpp"

using namespace nlstokes;

namespace {

KernelSet standard_set(int dim, double delta, KernelFamily diffusion_family,
                       bool with_mollifier = false,
                       KernelFamily mollifier_family = KernelFamily::constant) {
  RadialKernelProfile diff = RadialKernelProfile::constant();
  if (diffusion_family == KernelFamily::polynomial_bump)
    diff = RadialKernelProfile::polynomial_bump();
  if (diffusion_family == KernelFamily::fractional_truncated)
    diff = RadialKernelProfile::fractional(0.5, dim);
  RadialKernelProfile moll = RadialKernelProfile::constant();
  if (mollifier_family == KernelFamily::polynomial_bump)
    moll = RadialKernelProfile::polynomial_bump();
  std::optional<RadialKernelProfile> mopt;
  if (with_mollifier) mopt = moll;
  // For non-constant diffusion also vary the relaxation shape a little.
  return make_kernel_set(dim, delta, diff, RadialKernelProfile::constant(),
                         RadialKernelProfile::constant(), mopt);
}

}  // namespace

TEST_CASE("symbols vanish at xi = 0") {
  for (int d : {2, 3}) {
    SymbolTable table(standard_set(d, 0.1, KernelFamily::constant, true));
    CHECK(table.diffusion_symbol(0.0) == 0.0);
    CHECK(table.gradient_symbol(0.0) == 0.0);
    CHECK(table.relaxation_symbol(0.0) == 0.0);
    CHECK(table.mollifier_symbol(0.0) == 0.0);
  }
}

TEST_CASE("low-frequency windows at delta=0.1, |xi|=1") {
  for (int d : {2, 3}) {
    for (KernelFamily fam : {KernelFamily::constant, KernelFamily::polynomial_bump,
                             KernelFamily::fractional_truncated}) {
      const KernelSet ks = standard_set(d, 0.1, fam);
      SymbolTable table(ks);
      const double lam = table.diffusion_symbol(1.0);
      CHECK(lam >= 0.9995);
      CHECK(lam <= 1.0 + 1e-12);
      const double b = table.gradient_symbol(1.0);
      CHECK(b >= 0.999);
      CHECK(b <= 1.0 + 1e-12);
      const double c = table.relaxation_symbol(1.0);
      CHECK(c >= 0.5 * ks.relaxation_moment_lower);
      CHECK(c <= ks.relaxation_moment_upper);
    }
  }
}

TEST_CASE("oracle spot values") {
  // d=3 constant diffusion kernel at delta=0.5, |xi|=4 (high frequency)
  {
    const KernelSet ks = standard_set(3, 0.5, KernelFamily::constant);
    CHECK(ks.diffusion.amplitude() ==
          doctest::Approx(15.0 / (2.0 * M_PI)).epsilon(1e-14));
    SymbolTable table(ks);
    const double lam = table.diffusion_symbol(4.0);
    const double want = oracle::symbol(ks, oracle::SymbolKind::diffusion, 4.0);
    CHECK(lam == doctest::Approx(want).epsilon(1e-10));
    CHECK(lam >= 1.0 / (16.0 * 0.25));  // 0.25
    const double c = table.relaxation_symbol(4.0);
    CHECK(c == doctest::Approx(oracle::symbol(ks, oracle::SymbolKind::relaxation, 4.0))
                   .epsilon(1e-10));
  }
  // d=2 constant gradient kernel at delta=0.5, |xi|=2
  {
    const KernelSet ks = standard_set(2, 0.5, KernelFamily::constant);
    SymbolTable table(ks);
    const double b = table.gradient_symbol(2.0);
    CHECK(b == doctest::Approx(oracle::symbol(ks, oracle::SymbolKind::gradient, 2.0))
                   .epsilon(1e-10));
  }
}

TEST_CASE("mollifier symbol bounds and oracle value") {
  const KernelSet ks = standard_set(3, 0.1, KernelFamily::constant, true);
  SymbolTable table(ks);
  // delta |xi| = 0.5 < 1
  const double dm = table.mollifier_symbol(5.0);
  CHECK(dm <= (1.0 / 6.0) * 0.01 * 25.0);  // 0.0416667
  CHECK(dm >= 0.0);

  const KernelSet ks2 = standard_set(3, 0.5, KernelFamily::constant, true);
  SymbolTable table2(ks2);
  const double dm2 = table2.mollifier_symbol(10.0);
  CHECK(dm2 <= 2.0);
  CHECK(dm2 == doctest::Approx(oracle::symbol(ks2, oracle::SymbolKind::mollifier, 10.0))
                   .epsilon(1e-9));
}

TEST_CASE("mollifier symbol in d = 2 obeys the analogous bounds") {
  // the low-frequency coefficient generalizes to 1/(2d), here 1/4
  const KernelSet ks = standard_set(2, 0.1, KernelFamily::constant, true);
  SymbolTable table(ks);
  for (double xi : {1.0, 3.0, 5.0, 9.0}) {
    const double s = ks.delta * xi;
    const double dm = table.mollifier_symbol(xi);
    CHECK(dm >= 0.0);
    CHECK(dm <= 2.0);
    if (s < 1.0) CHECK(dm <= s * s / 4.0 + 1e-12);
  }
  const double want = oracle::symbol(ks, oracle::SymbolKind::mollifier, 5.0);
  CHECK(table.mollifier_symbol(5.0) == doctest::Approx(want).epsilon(1e-9));

  const BoundReport rep = certify_bounds(ks, 12, {0.1, 0.5}, 2);
  CHECK(rep.all_passed());
  bool saw_lowfreq = false;
  for (const auto& c : rep.checks)
    if (c.check_name == "moll_lowfreq") saw_lowfreq = true;
  CHECK(saw_lowfreq);
}

TEST_CASE("quadrature error estimates sit far below the values") {
  for (int d : {2, 3}) {
    SymbolTable table(standard_set(d, 0.5, KernelFamily::fractional_truncated));
    for (double xi : {1.0, 8.0, 32.0}) {
      const SymbolTuple t = table.evaluate(xi);
      CHECK(t.quadrature_error_estimate >= 0.0);
      CHECK(t.quadrature_error_estimate <= 1e-9 * (1.0 + t.diffusion));
    }
  }
}

TEST_CASE("oracle equivalence on a 20-point sample per family and dimension") {
  const std::vector<double> deltas = {0.05, 0.1, 0.2, 0.5};
  const std::vector<double> xis = {1.0, 2.0, 4.0, 8.0, 16.0};
  for (int d : {2, 3}) {
    for (KernelFamily fam : {KernelFamily::constant, KernelFamily::polynomial_bump,
                             KernelFamily::fractional_truncated}) {
      for (double delta : deltas) {
        const KernelSet ks = standard_set(d, delta, fam);
        SymbolTable table(ks);
        for (double xi : xis) {
          const SymbolTuple t = table.evaluate(xi);
          const double lam = oracle::symbol(ks, oracle::SymbolKind::diffusion, xi);
          const double b = oracle::symbol(ks, oracle::SymbolKind::gradient, xi);
          const double c = oracle::symbol(ks, oracle::SymbolKind::relaxation, xi);
          CHECK(std::abs(t.diffusion - lam) <= 1e-9 + 1e-9 * std::abs(lam));
          CHECK(std::abs(t.gradient - b) <= 1e-9 + 1e-9 * std::abs(b));
          CHECK(std::abs(t.relaxation - c) <= 1e-9 + 1e-9 * std::abs(c));
        }
      }
    }
  }
}

TEST_CASE("constant-kernel closed forms, including the oscillatory regime") {
  // elementary antiderivatives for the constant profile:
  //   d=3: lambda = (4 pi A / d^2) (1/3 - (sin s - s cos s)/s^3)
  //   d=2: lambda = (2 pi A / d^2) (1/2 - J1(s)/s)
  {
    const KernelSet ks = standard_set(3, 0.5, KernelFamily::constant);
    const double A = ks.diffusion.amplitude();
    SymbolTable table(ks);
    for (double xi : {4.0, 20.0, 144.0}) {  // s up to 72
      const double s = ks.delta * xi;
      const double want = 4.0 * M_PI * A / (ks.delta * ks.delta) *
                          (1.0 / 3.0 - (std::sin(s) - s * std::cos(s)) / (s * s * s));
      CHECK(table.diffusion_symbol(xi) == doctest::Approx(want).epsilon(1e-11));
    }
  }
  {
    const KernelSet ks = standard_set(2, 0.5, KernelFamily::constant);
    const double A = ks.diffusion.amplitude();
    SymbolTable table(ks);
    for (double xi : {4.0, 20.0, 144.0}) {
      const double s = ks.delta * xi;
      const double want = 2.0 * M_PI * A / (ks.delta * ks.delta) *
                          (0.5 - std::cyl_bessel_j(1, s) / s);
      CHECK(table.diffusion_symbol(xi) == doctest::Approx(want).epsilon(1e-11));
    }
  }
}

TEST_CASE("radial consistency: same |xi|^2 gives bitwise-equal symbols") {
  SymbolTable table(standard_set(2, 0.1, KernelFamily::constant));
  const SymbolTuple a = table.at_lattice(5);  // (1,2)
  const SymbolTuple b = table.at_lattice(5);  // (2,1)
  CHECK(a.diffusion == b.diffusion);
  CHECK(a.gradient == b.gradient);
  const SymbolTuple c = table.evaluate(std::sqrt(5.0));
  CHECK(c.diffusion == a.diffusion);
}

TEST_CASE("small-argument expansion stays inside the stated windows") {
  for (int d : {2, 3}) {
    const KernelSet ks = standard_set(d, 0.05, KernelFamily::constant);
    SymbolTable table(ks);
    for (double xi : {1.0, std::sqrt(2.0), 2.0}) {  // delta*xi <= 0.1
      const double s = ks.delta * xi;
      const double lam = table.diffusion_symbol(xi);
      CHECK(std::abs(lam - xi * xi) <= xi * xi * s * s / 20.0 + 1e-12);
      const double b = table.gradient_symbol(xi);
      CHECK(std::abs(b - xi) <= xi * s * s / 10.0 + 1e-12);
    }
  }
}

TEST_CASE("saddle term stays positive at high frequency") {
  // b may vanish beyond delta |xi| = 1; q never does
  const KernelSet ks = standard_set(3, 0.5, KernelFamily::constant);
  SymbolTable table(ks);
  for (double xi : {4.0, 16.0, 40.0, 64.0}) {
    const SymbolTuple t = table.evaluate(xi);
    CHECK(t.saddle_term(ks.delta) > 0.0);
  }
}

TEST_CASE("certify_bounds passes for constant kernels") {
  const KernelSet ks = standard_set(3, 0.1, KernelFamily::constant);
  const BoundReport rep = certify_bounds(ks, 16, {0.1}, 4);
  CHECK(!rep.checks.empty());
  CHECK(rep.all_passed());
}

TEST_CASE("certify_bounds with xi_max = 0 is empty") {
  const KernelSet ks = standard_set(2, 0.1, KernelFamily::constant);
  const BoundReport rep = certify_bounds(ks, 0, {0.1});
  CHECK(rep.checks.empty());
  CHECK(rep.all_passed());
}

TEST_CASE("fractional growth check passes with positive margin") {
  const KernelSet ks = standard_set(3, 0.25, KernelFamily::fractional_truncated);
  const BoundReport rep = certify_bounds(ks, 32, {0.25}, 4);
  CHECK(rep.all_passed());
  bool saw = false;
  for (const auto& c : rep.checks)
    if (c.check_name == "lambda_fractional_growth") {
      saw = true;
      CHECK(c.margin > 0.0);
    }
  CHECK(saw);
}

TEST_CASE("corrupted amplitude is caught by the bound checks") {
  KernelSet ks = standard_set(3, 0.1, KernelFamily::constant);
  ks.diffusion = ks.diffusion.with_amplitude(2.0 * ks.diffusion.amplitude());
  const BoundReport rep = certify_bounds(ks, 4, {0.1});
  CHECK(!rep.all_passed());
  bool upper_failed = false;
  for (const auto& c : rep.failures())
    if (c.check_name == "lambda_upper_low" || c.check_name == "lambda_upper_high")
      upper_failed = true;
  CHECK(upper_failed);
}

TEST_CASE("parallel precompute matches serial evaluation") {
  const KernelSet ks = standard_set(2, 0.1, KernelFamily::constant);
  SymbolTable serial(ks);
  SymbolTable parallel(ks);
  const auto keys = lattice_magnitudes(2, 8);
  parallel.precompute(keys, 4);
  for (auto k : keys) {
    const SymbolTuple a = serial.at_lattice(k);
    const SymbolTuple b = parallel.at_lattice(k);
    CHECK(a.diffusion == b.diffusion);
    CHECK(a.gradient == b.gradient);
    CHECK(a.relaxation == b.relaxation);
  }
}

TEST_CASE("missing mollifier raises") {
  SymbolTable table(standard_set(3, 0.1, KernelFamily::constant));
  CHECK_THROWS_AS(table.mollifier_symbol(1.0), Error);
}

TEST_CASE("lattice magnitudes enumerate representable |xi|^2") {
  const auto k2 = lattice_magnitudes(2, 4);
  // d=2: 1,2,4,5,8,9,10,13,16 are representable; 3,6,7 are not
  CHECK(std::find(k2.begin(), k2.end(), 3) == k2.end());
  CHECK(std::find(k2.begin(), k2.end(), 5) != k2.end());
  CHECK(k2.back() == 16);
  const auto k3 = lattice_magnitudes(3, 4);
  CHECK(std::find(k3.begin(), k3.end(), 7) == k3.end());  // not a sum of 3 squares
  CHECK(std::find(k3.begin(), k3.end(), 6) != k3.end());
}
