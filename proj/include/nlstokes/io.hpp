#pragma once

#include <string>

#include <json.hpp>

#include "nlstokes/fields.hpp"
#include "nlstokes/kernels.hpp"
#include "nlstokes/lab.hpp"
#include "nlstokes/solver.hpp"
#include "nlstokes/symbols.hpp"

namespace nlstokes {

using json = nlohmann::json;

// {family, amplitude, alpha?, table?}
json profile_to_json(const RadialKernelProfile& p);
RadialKernelProfile profile_from_json(const json& j, int dim);

// {d, delta, kernels: {omega, omega_hat, omega_tilde, omega_bar?}}
json kernel_set_to_json(const KernelSet& ks);
KernelSet kernel_set_from_json(const json& j);

// {d, components, N, coeffs: [{xi: [...], re: [...], im: [...]}]}
json field_to_json(const SpectralField& f);
SpectralField field_from_json(const json& j);

// {variant, delta, N, residual_norm, kernel_set, velocity, pressure}
json solution_to_json(const StokesSolution& s, const KernelSet& ks);

// CSV with one row per grid point in lexicographic order:
// x1,..,xd,u1[,..,ud]
std::string samples_to_csv(const SpectralField& f, int points_per_dim);

// columns: axis_value, norm_name, error
std::string report_to_csv(const ConvergenceReport& r);
json report_summary_json(const ConvergenceReport& r);

// columns: delta, xi_sq, lambda, b, c, d_moll, q, check_name, bound_value,
// margin, pass
std::string bound_report_to_csv(const BoundReport& r);

// Doubles printed with 17 significant digits; LF line endings.
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace nlstokes
