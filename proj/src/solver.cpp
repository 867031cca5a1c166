#include "nlstokes/solver.hpp"

#include <cmath>
#include <set>

namespace nlstokes {

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::nonlocal: return "nonlocal";
    case Variant::local: return "local";
    case Variant::mollified: return "mollified";
    case Variant::nonlocal_fractional: return "nonlocal_fractional";
  }
  return "?";
}

namespace {

using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};

void check_problem(const StokesProblem& p) {
  p.body_force.validate();
  p.divergence_data.validate();
  const int d = p.kernels.dim;
  if (p.body_force.dim() != d || p.divergence_data.dim() != d)
    fail(ErrorCode::shape_mismatch, "problem dimension mismatch");
  if (p.body_force.components() != d)
    fail(ErrorCode::shape_mismatch, "body force must be a vector field");
  if (p.divergence_data.components() != 1)
    fail(ErrorCode::shape_mismatch, "divergence data must be a scalar field");
}

// canonical modes of f and g inside the band cube
std::set<Mode> solve_modes(const StokesProblem& p, int band) {
  std::set<Mode> modes;
  auto collect = [&](const SpectralField& f) {
    for (const auto& [xi, v] : f.coeffs()) {
      if (!mode_is_canonical(xi)) continue;
      bool inside = true;
      for (int a = 0; a < f.dim(); ++a)
        if (std::abs(xi[a]) > band) inside = false;
      if (inside) modes.insert(xi);
    }
  };
  collect(p.body_force);
  collect(p.divergence_data);
  return modes;
}

double mode_residual(const ModeMatrix& A, const std::array<cplx, 4>& sol,
                     const std::array<cplx, 4>& rhs) {
  double worst = 0.0;
  for (int i = 0; i < A.n; ++i) {
    cplx r = -rhs[static_cast<std::size_t>(i)];
    for (int j = 0; j < A.n; ++j)
      r += A.at(i, j) * sol[static_cast<std::size_t>(j)];
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace

ModeMatrix assemble_mode_matrix(const SymbolTuple& sym, const Mode& xi,
                                double delta, int dim) {
  const double xn = std::sqrt(static_cast<double>(mode_norm_sq(xi)));
  if (!(xn > 0.0)) fail(ErrorCode::zero_frequency, "xi = 0 has no mode matrix");
  ModeMatrix A;
  A.n = dim + 1;
  for (int i = 0; i < dim; ++i) A.at(i, i) = sym.diffusion;
  for (int i = 0; i < dim; ++i) {
    const double bi = sym.gradient * xi[i] / xn;
    A.at(i, dim) = kI * bi;
    A.at(dim, i) = kI * bi;
  }
  A.at(dim, dim) = delta * delta * sym.relaxation;
  return A;
}

ModeMatrix invert_mode_matrix(const SymbolTuple& sym, const Mode& xi,
                              double delta, int dim) {
  const double xn = std::sqrt(static_cast<double>(mode_norm_sq(xi)));
  if (!(xn > 0.0)) fail(ErrorCode::zero_frequency, "xi = 0 has no mode matrix");
  const double lambda = sym.diffusion;
  const double q = sym.saddle_term(delta);
  if (!(lambda > 0.0) || !(q > 0.0))
    fail(ErrorCode::singular_mode,
         "mode matrix is singular (lambda or q not positive); "
         "this signals a kernel or quadrature failure");
  ModeMatrix inv;
  inv.n = dim + 1;
  std::array<double, 3> b{};
  for (int i = 0; i < dim; ++i) b[static_cast<std::size_t>(i)] = sym.gradient * xi[i] / xn;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const double entry = ((i == j) ? 1.0 : 0.0) -
                           b[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)] / q;
      inv.at(i, j) = entry / lambda;
    }
  for (int i = 0; i < dim; ++i) {
    inv.at(i, dim) = -kI * b[static_cast<std::size_t>(i)] / q;
    inv.at(dim, i) = -kI * b[static_cast<std::size_t>(i)] / q;
  }
  inv.at(dim, dim) = lambda / q;
  return inv;
}

StokesSolution solve_nonlocal(const StokesProblem& p, int band,
                              const SymbolTable& table) {
  check_problem(p);
  const int d = p.kernels.dim;
  const double delta = p.kernels.delta;
  StokesSolution sol{SpectralField(d, d, band), SpectralField(d, 1, band),
                     p.variant, delta, band, 0.0};

  for (const Mode& xi : solve_modes(p, band)) {
    const SymbolTuple sym = table.at_lattice(mode_norm_sq(xi));
    const double xn = std::sqrt(static_cast<double>(mode_norm_sq(xi)));
    const double lambda = sym.diffusion;
    const double q = sym.saddle_term(delta);
    if (!(lambda > 0.0) || !(q > 0.0))
      fail(ErrorCode::singular_mode,
           "singular mode at |xi|^2 = " + std::to_string(mode_norm_sq(xi)));

    const Coeff fh = p.body_force.coeff(xi);
    const cplx gh = p.divergence_data.coeff(xi)[0];
    std::array<double, 3> b{};
    for (int i = 0; i < d; ++i) b[static_cast<std::size_t>(i)] = sym.gradient * xi[i] / xn;

    cplx bf{0.0, 0.0};
    for (int i = 0; i < d; ++i) bf += b[static_cast<std::size_t>(i)] * fh[static_cast<std::size_t>(i)];

    Coeff u{};
    for (int i = 0; i < d; ++i)
      u[static_cast<std::size_t>(i)] =
          (fh[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)] * bf / q) / lambda -
          kI * b[static_cast<std::size_t>(i)] * gh / q;
    const cplx pr = -kI * bf / q + lambda * gh / q;

    sol.velocity.set_mode(xi, u);
    if (pr != cplx(0.0, 0.0)) sol.pressure.set_mode(xi, Coeff{pr});

    const ModeMatrix A = assemble_mode_matrix(sym, xi, delta, d);
    std::array<cplx, 4> x{}, rhs{};
    for (int i = 0; i < d; ++i) {
      x[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i)];
      rhs[static_cast<std::size_t>(i)] = fh[static_cast<std::size_t>(i)];
    }
    x[static_cast<std::size_t>(d)] = pr;
    rhs[static_cast<std::size_t>(d)] = gh;
    sol.residual_norm = std::max(sol.residual_norm, mode_residual(A, x, rhs));
  }
  return sol;
}

StokesSolution solve_local(const StokesProblem& p, int band) {
  check_problem(p);
  const int d = p.kernels.dim;
  StokesSolution sol{SpectralField(d, d, band), SpectralField(d, 1, band),
                     Variant::local, p.kernels.delta, band, 0.0};

  for (const Mode& xi : solve_modes(p, band)) {
    const double nsq = static_cast<double>(mode_norm_sq(xi));
    const Coeff fh = p.body_force.coeff(xi);
    const cplx gh = p.divergence_data.coeff(xi)[0];

    cplx xf{0.0, 0.0};
    for (int i = 0; i < d; ++i) xf += static_cast<double>(xi[i]) * fh[static_cast<std::size_t>(i)];

    Coeff u{};
    for (int i = 0; i < d; ++i)
      u[static_cast<std::size_t>(i)] =
          (fh[static_cast<std::size_t>(i)] - static_cast<double>(xi[i]) * xf / nsq) / nsq -
          kI * static_cast<double>(xi[i]) * gh / nsq;
    const cplx pr = -kI * xf / nsq + gh;

    sol.velocity.set_mode(xi, u);
    if (pr != cplx(0.0, 0.0)) sol.pressure.set_mode(xi, Coeff{pr});

    // residual against the local saddle matrix (lambda = |xi|^2, b = xi, c term absent)
    double worst = 0.0;
    for (int i = 0; i < d; ++i) {
      cplx r = nsq * u[static_cast<std::size_t>(i)] + kI * static_cast<double>(xi[i]) * pr -
               fh[static_cast<std::size_t>(i)];
      worst = std::max(worst, std::abs(r));
    }
    cplx rdiv{0.0, 0.0};
    for (int i = 0; i < d; ++i) rdiv += kI * static_cast<double>(xi[i]) * u[static_cast<std::size_t>(i)];
    worst = std::max(worst, std::abs(rdiv - gh));
    sol.residual_norm = std::max(sol.residual_norm, worst);
  }
  return sol;
}

StokesProblem scale_problem_modes(const StokesProblem& p,
                                  const std::function<double(double)>& factor) {
  StokesProblem out = p;
  out.body_force = SpectralField(p.body_force.dim(), p.body_force.components(),
                                 p.body_force.band());
  out.divergence_data = SpectralField(p.divergence_data.dim(), 1,
                                      p.divergence_data.band());
  auto scaled = [&](const SpectralField& f, SpectralField& dst) {
    for (const auto& [xi, v] : f.coeffs()) {
      if (!mode_is_canonical(xi)) continue;
      const double s = factor(std::sqrt(static_cast<double>(mode_norm_sq(xi))));
      Coeff w{};
      for (int c = 0; c < f.components(); ++c)
        w[static_cast<std::size_t>(c)] = v[static_cast<std::size_t>(c)] * s;
      dst.set_mode(xi, w);
    }
  };
  scaled(p.body_force, out.body_force);
  scaled(p.divergence_data, out.divergence_data);
  return out;
}

StokesProblem mollify_problem(const StokesProblem& p, const SymbolTable& table) {
  if (!p.kernels.mollifier)
    fail(ErrorCode::missing_mollifier,
         "mollified model requires a mollifier kernel");
  return scale_problem_modes(
      p, [&](double xn) { return 1.0 - table.mollifier_symbol(xn); });
}

StokesSolution solve_mollified(const StokesProblem& p, int band,
                               const SymbolTable& table) {
  StokesSolution sol = solve_nonlocal(mollify_problem(p, table), band, table);
  sol.variant = Variant::mollified;
  return sol;
}

StokesSolution solve(const StokesProblem& p, int band) {
  if (p.variant == Variant::local) return solve_local(p, band);
  SymbolTable table(p.kernels);
  if (p.variant == Variant::mollified) return solve_mollified(p, band, table);
  StokesSolution sol = solve_nonlocal(p, band, table);
  sol.variant = p.variant;
  return sol;
}

}  // namespace nlstokes
