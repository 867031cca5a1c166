#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nlstokes/fields.hpp"
#include "nlstokes/solver.hpp"

namespace nlstokes {

enum class CaseFamily {
  single_mode_shear,
  multi_mode_div_free,
  pressure_driven,
  with_divergence_data,
  random_band_limited,
};
const char* case_family_name(CaseFamily f);

// Exact (u, p) with f, g derived mode-by-mode so the pair solves the
// generalized Stokes system: f_hat = |xi|^2 u_hat + i xi p_hat,
// g_hat = i xi . u_hat.
struct ManufacturedCase {
  std::string name;
  int dim = 3;
  SpectralField velocity_exact{3, 3, 0};
  SpectralField pressure_exact{3, 1, 0};
  SpectralField body_force{3, 3, 0};
  SpectralField divergence_data{3, 1, 0};
};

// Band-limited cases (modes |xi| <= 4). The seed only matters for
// random_band_limited.
ManufacturedCase make_case(CaseFamily family, int dim, std::uint64_t seed = 0);

// Random case with divergence-free u (g = 0), coefficient magnitudes
// proportional to |xi|^{-decay} out to `band`.
ManufacturedCase make_random_case(int dim, std::uint64_t seed, int band, double decay);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Ordinary least squares on (log parameter, log error). Throws
// degenerate_fit on nonpositive errors, nonpositive or repeated parameters,
// or fewer than two points.
RateFit fit_rate(const std::vector<std::pair<double, double>>& points);

enum class SweepAxis { delta, band_limit };

struct SweepRecord {
  double parameter = 0.0;
  std::map<std::string, double> errors;
};

struct ConvergenceReport {
  SweepAxis axis = SweepAxis::delta;
  std::vector<SweepRecord> records;               // sorted by parameter
  std::map<std::string, RateFit> fitted;          // only with >= 3 records
  bool complete = true;
  std::string failure_reason;
};

// Solves the case for each delta and records the norms of u - u_delta and
// p - p_delta against the exact local solution: always "u_l2" and "p_l2";
// additionally "u_h_alpha" for a fractional diffusion kernel and "u_h_gamma",
// "p_h_gamma" for the mollified variant. Solver errors abort the sweep and
// leave a partial report flagged incomplete.
ConvergenceReport delta_sweep(const ManufacturedCase& mcase,
                              const KernelSet& kernels_template,
                              const std::vector<double>& deltas, int band,
                              Variant variant);

// Truncates the data (f, g) to each band, solves at that band, and records
// errors against the master-band solution of the same variant.
ConvergenceReport band_sweep(const SpectralField& f, const SpectralField& g,
                             const KernelSet& kernels,
                             const std::vector<int>& bands, int master_band,
                             Variant variant);

struct AcDiagramReport {
  // fixed band, delta sweep: ||u_delta^N - u^N|| (discrete nonlocal vs
  // discrete local)
  ConvergenceReport delta_at_fixed_band;
  // fixed delta, band sweep: ||u_delta^N - u_delta^master||
  ConvergenceReport band_at_fixed_delta;
  // joint refinement (delta_k, N_k) against the master-band local solution
  std::vector<SweepRecord> diagonal;
  bool triangle_ok = true;  // diagonal <= corner(i) + corner(ii) pointwise
  int master_band = 0;
};

// Corners of the asymptotic-compatibility diagram. The reference "exact"
// solutions use a master band 4x the largest tested band.
AcDiagramReport ac_diagram(const ManufacturedCase& mcase,
                           const KernelSet& kernels_template,
                           const std::vector<double>& deltas,
                           const std::vector<int>& bands, int fixed_band,
                           double fixed_delta);

}  // namespace nlstokes
