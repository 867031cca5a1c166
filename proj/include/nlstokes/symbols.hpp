#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "nlstokes/kernels.hpp"

namespace nlstokes {

// Fourier multipliers of the four convolution operators at one |xi|.
// The gradient/divergence symbol is the vector gradient * xi/|xi|; only the
// scalar part is stored.
struct SymbolTuple {
  double diffusion = 0.0;             // lambda_delta(|xi|)  >= 0
  double gradient = 0.0;              // b_delta(|xi|), scalar part
  double relaxation = 0.0;            // c_delta(|xi|)       >= 0
  std::optional<double> mollifier;    // d_delta(|xi|) in [0, 2] when present
  double quadrature_error_estimate = 0.0;

  // q = b^2 + delta^2 * c * lambda; positive for every xi != 0.
  double saddle_term(double delta) const {
    return gradient * gradient + delta * delta * relaxation * diffusion;
  }
};

// Evaluates the symbols by radial-angular quadrature of the unit-ball
// reduction and caches them per integer |xi|^2. Pure function of
// (KernelSet, |xi|, tolerance); safe for concurrent lookups.
class SymbolTable {
public:
  explicit SymbolTable(KernelSet kernels, double rel_tol = 1e-12,
                       int panel_budget = 1 << 14);

  const KernelSet& kernels() const { return kernels_; }
  double tolerance() const { return rel_tol_; }

  // Cached lookup keyed by integer |xi|^2.
  SymbolTuple at_lattice(std::int64_t xi_sq) const;
  // General evaluation; uses the lattice cache when |xi|^2 is integral.
  SymbolTuple evaluate(double xi_norm) const;

  double diffusion_symbol(double xi_norm) const;   // lambda
  double gradient_symbol(double xi_norm) const;    // b (scalar part)
  double relaxation_symbol(double xi_norm) const;  // c
  double mollifier_symbol(double xi_norm) const;   // d; throws missing_mollifier

  void precompute(const std::vector<std::int64_t>& keys, int threads = 1) const;
  std::size_t cache_size() const;

private:
  SymbolTuple compute(double xi_norm) const;

  KernelSet kernels_;
  double rel_tol_;
  int panel_budget_;
  mutable std::shared_mutex mutex_;
  mutable std::map<std::int64_t, SymbolTuple> cache_;
};

// All realizable |xi|^2 values for xi in Z^d \ {0} with |xi| <= xi_max.
std::vector<std::int64_t> lattice_magnitudes(int dim, int xi_max);

struct BoundCheck {
  double delta = 0.0;
  std::int64_t xi_sq = 0;
  double lambda = 0.0, b = 0.0, c = 0.0, q = 0.0;
  std::optional<double> d_moll;
  std::string check_name;
  double bound_value = 0.0;
  double margin = 0.0;  // >= 0 means the bound holds
  bool pass = false;
};

struct BoundReport {
  std::vector<BoundCheck> checks;
  double slack = 1e-8;
  bool all_passed() const;
  std::vector<BoundCheck> failures() const;
  // worst (smallest) margin seen per check name
  std::map<std::string, double> worst_margins() const;
};

// Evaluates all symbols on every realizable lattice magnitude |xi| <= xi_max
// for each delta and checks the frequency-split bounds:
//   high (delta|xi| > 1):  1/(16 d^2) <= lambda <= |xi|^2,
//                          m/(16 d^2) <= c <= M |xi|^2
//   low (0 < delta|xi| <= 1): |xi|^2 (1 - (d|xi|)^2/20) <= lambda <= |xi|^2,
//                          m |xi|^2 / 2 <= c <= M |xi|^2,
//                          |xi| (1 - (d|xi|)^2/10) <= b <= |xi|
//   q > 0 everywhere; for a fractional diffusion kernel additionally
//   lambda >= min{1, C1/6} delta^{2a-2} |xi|^{2a} at high frequency; when a
//   mollifier is present, d <= 2 everywhere and d <= (d|xi|)^2/(2*dim) at low
//   frequency.
// Violations become failed report rows, never exceptions.
BoundReport certify_bounds(const KernelSet& base, int xi_max,
                           const std::vector<double>& deltas, int threads = 1,
                           double slack = 1e-8, double rel_tol = 1e-12);

}  // namespace nlstokes
