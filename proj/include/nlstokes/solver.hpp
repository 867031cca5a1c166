#pragma once

#include <complex>
#include <functional>

#include "nlstokes/fields.hpp"
#include "nlstokes/kernels.hpp"
#include "nlstokes/symbols.hpp"

namespace nlstokes {

enum class Variant { nonlocal, local, mollified, nonlocal_fractional };
const char* variant_name(Variant v);

struct StokesProblem {
  SpectralField body_force;       // f, vector, mean-zero
  SpectralField divergence_data;  // g, scalar, mean-zero
  KernelSet kernels;
  Variant variant = Variant::nonlocal;
};

struct StokesSolution {
  SpectralField velocity;
  SpectralField pressure;
  Variant variant = Variant::nonlocal;
  double delta = 0.0;
  int band = 0;
  // max over modes of || A(xi) (u_hat, p_hat)^T - (f_hat, g_hat)^T ||_inf
  double residual_norm = 0.0;
};

// Dense (d+1) x (d+1) complex matrix, row-major in a fixed buffer.
struct ModeMatrix {
  int n = 0;
  std::array<std::complex<double>, 16> a{};
  std::complex<double>& at(int i, int j) { return a[static_cast<std::size_t>(i * n + j)]; }
  const std::complex<double>& at(int i, int j) const { return a[static_cast<std::size_t>(i * n + j)]; }
};

// Per-mode saddle matrix  [[lambda I_d, i b], [i b^T, delta^2 c]]  with
// b = gradient * xi/|xi|. Throws zero_frequency for xi = 0.
ModeMatrix assemble_mode_matrix(const SymbolTuple& sym, const Mode& xi,
                                double delta, int dim);

// Closed-form inverse [[ (1/lambda)(I - b b^T / q), -i b / q ],
//                      [ -i b^T / q,                 lambda / q ]].
// Throws singular_mode when lambda <= 0 or q <= 0.
ModeMatrix invert_mode_matrix(const SymbolTuple& sym, const Mode& xi,
                              double delta, int dim);

StokesSolution solve_nonlocal(const StokesProblem& p, int band, const SymbolTable& table);
StokesSolution solve_local(const StokesProblem& p, int band);

// Problem with every mode of f and g multiplied by factor(|xi|).
StokesProblem scale_problem_modes(const StokesProblem& p,
                                  const std::function<double(double)>& factor);

// Replaces the data by its mollified version: multiplication by
// (1 - d_delta(|xi|)) per mode. Requires a mollifier kernel.
StokesProblem mollify_problem(const StokesProblem& p, const SymbolTable& table);

StokesSolution solve_mollified(const StokesProblem& p, int band, const SymbolTable& table);

// Dispatch on p.variant; builds its own symbol table when needed.
StokesSolution solve(const StokesProblem& p, int band);

}  // namespace nlstokes
