#pragma once

#include <functional>
#include <vector>

namespace nlstokes {

// Gauss-Legendre rule of the given order on [-1, 1]. Computed once per order
// and cached; thread-safe.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

struct QuadratureOptions {
  double rel_tol = 1e-12;
  double abs_tol = 0.0;       // absolute floor on the accepted error
  int panel_budget = 1 << 14; // max panels evaluated before giving up
  int initial_panels = 1;     // uniform pre-split of the interval
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels_used = 0;
};

// Panel-adaptive Gauss-Legendre on [lo, hi]. Each panel is accepted when the
// coarse/fine discrepancy falls under the tolerance prorated by panel width.
// Throws Error(quadrature_failure) when the panel budget is exhausted.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double lo, double hi,
                                    const QuadratureOptions& opt = {});

// Integrates [lo, hi] on a geometric mesh refined toward lo (panel edges
// lo + (hi-lo)*ratio^k). Intended for integrable endpoint singularities.
QuadratureResult integrate_graded(const std::function<double(double)>& f,
                                  double lo, double hi, double ratio,
                                  int levels,
                                  const QuadratureOptions& opt = {});

}  // namespace nlstokes
