#include "nlstokes/lab.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace nlstokes {

const char* case_family_name(CaseFamily f) {
  switch (f) {
    case CaseFamily::single_mode_shear: return "single_mode_shear";
    case CaseFamily::multi_mode_div_free: return "multi_mode_div_free";
    case CaseFamily::pressure_driven: return "pressure_driven";
    case CaseFamily::with_divergence_data: return "with_divergence_data";
    case CaseFamily::random_band_limited: return "random_band_limited";
  }
  return "?";
}

namespace {

using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};

std::array<int, 3> cross(const std::array<int, 3>& a, const std::array<int, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

// Integer tangent vectors spanning the plane orthogonal to xi. Divergence-free
// coefficients built on them annihilate xi . u_hat exactly in floating point.
std::pair<std::array<int, 3>, std::array<int, 3>> integer_tangents(const Mode& xi) {
  std::array<int, 3> best{};
  for (int a = 0; a < 3; ++a) {
    std::array<int, 3> e{};
    e[static_cast<std::size_t>(a)] = 1;
    const auto t = cross(xi, e);
    if (t[0] != 0 || t[1] != 0 || t[2] != 0) {
      best = t;
      break;
    }
  }
  return {best, cross(xi, best)};
}

// f_hat = |xi|^2 u_hat + i xi p_hat and g_hat = i xi . u_hat over the union
// of populated modes.
void derive_data(ManufacturedCase& mc) {
  const int d = mc.dim;
  std::set<Mode> modes;
  for (const auto& [xi, v] : mc.velocity_exact.coeffs())
    if (mode_is_canonical(xi)) modes.insert(xi);
  for (const auto& [xi, v] : mc.pressure_exact.coeffs())
    if (mode_is_canonical(xi)) modes.insert(xi);

  const int band = std::max(mc.velocity_exact.band(), mc.pressure_exact.band());
  mc.body_force = SpectralField(d, d, band);
  mc.divergence_data = SpectralField(d, 1, band);

  for (const Mode& xi : modes) {
    const double nsq = static_cast<double>(mode_norm_sq(xi));
    const Coeff uh = mc.velocity_exact.coeff(xi);
    const cplx ph = mc.pressure_exact.coeff(xi)[0];

    Coeff fh{};
    bool f_nonzero = false;
    for (int i = 0; i < d; ++i) {
      fh[static_cast<std::size_t>(i)] =
          nsq * uh[static_cast<std::size_t>(i)] + kI * static_cast<double>(xi[i]) * ph;
      if (fh[static_cast<std::size_t>(i)] != cplx(0.0, 0.0)) f_nonzero = true;
    }
    cplx gh{0.0, 0.0};
    for (int i = 0; i < d; ++i)
      gh += kI * static_cast<double>(xi[i]) * uh[static_cast<std::size_t>(i)];

    if (f_nonzero) mc.body_force.set_mode(xi, fh);
    if (gh != cplx(0.0, 0.0)) mc.divergence_data.set_mode(xi, Coeff{gh});
  }
}

constexpr int kCaseBand = 4;

}  // namespace

ManufacturedCase make_case(CaseFamily family, int dim, std::uint64_t seed) {
  if (dim != 2 && dim != 3) fail(ErrorCode::validation, "dimension must be 2 or 3");
  ManufacturedCase mc;
  mc.name = case_family_name(family);
  mc.dim = dim;
  mc.velocity_exact = SpectralField(dim, dim, kCaseBand);
  mc.pressure_exact = SpectralField(dim, 1, kCaseBand);
  const double V = std::pow(2.0 * M_PI, dim - 1);  // transverse volume factor

  switch (family) {
    case CaseFamily::single_mode_shear: {
      // u = (sin x2, 0[, 0]), p = 0
      mc.velocity_exact.set_mode({0, 1, 0}, Coeff{cplx(0.0, -M_PI * V)});
      break;
    }
    case CaseFamily::pressure_driven: {
      // u = 0, p = cos x1
      mc.pressure_exact.set_mode({1, 0, 0}, Coeff{cplx(M_PI * V, 0.0)});
      break;
    }
    case CaseFamily::with_divergence_data: {
      // u = (sin x1, 0[, 0]), p = cos x1  =>  f = 0, g = cos x1
      mc.velocity_exact.set_mode({1, 0, 0}, Coeff{cplx(0.0, -M_PI * V)});
      mc.pressure_exact.set_mode({1, 0, 0}, Coeff{cplx(M_PI * V, 0.0)});
      break;
    }
    case CaseFamily::multi_mode_div_free: {
      const std::vector<Mode> modes_2d = {{0, 1, 0}, {1, 2, 0}, {2, -1, 0}, {1, 1, 0}};
      const std::vector<Mode> modes_3d = {{0, 1, 0}, {1, 2, 0}, {1, 0, 2}, {1, 1, 1}};
      const std::vector<cplx> w1 = {cplx(0.8, -0.3), cplx(-0.4, 0.5),
                                    cplx(0.6, 0.1), cplx(0.2, -0.7)};
      const std::vector<cplx> w2 = {cplx(-0.1, 0.4), cplx(0.3, 0.3),
                                    cplx(-0.5, 0.2), cplx(0.7, 0.6)};
      const auto& modes = (dim == 2) ? modes_2d : modes_3d;
      for (std::size_t k = 0; k < modes.size(); ++k) {
        const Mode& xi = modes[k];
        const auto [t1, t2] = integer_tangents(xi);
        Coeff u{};
        for (int i = 0; i < dim; ++i) {
          cplx val = w1[k] * static_cast<double>(t1[static_cast<std::size_t>(i)]);
          if (dim == 3)
            val += w2[k] * static_cast<double>(t2[static_cast<std::size_t>(i)]);
          u[static_cast<std::size_t>(i)] = V * val;
        }
        mc.velocity_exact.set_mode(xi, u);
      }
      mc.pressure_exact.set_mode({1, 0, 0}, Coeff{cplx(0.7 * V, 0.0)});
      mc.pressure_exact.set_mode({0, 2, 0}, Coeff{V * cplx(0.3, 0.2)});
      break;
    }
    case CaseFamily::random_band_limited: {
      ManufacturedCase rc = make_random_case(dim, seed, kCaseBand, 0.0);
      rc.name = mc.name;
      return rc;
    }
  }
  derive_data(mc);
  return mc;
}

ManufacturedCase make_random_case(int dim, std::uint64_t seed, int band,
                                  double decay) {
  if (dim != 2 && dim != 3) fail(ErrorCode::validation, "dimension must be 2 or 3");
  ManufacturedCase mc;
  mc.name = "random_band_limited";
  mc.dim = dim;
  mc.velocity_exact = SpectralField(dim, dim, band);
  mc.pressure_exact = SpectralField(dim, 1, band);
  const double V = std::pow(2.0 * M_PI, dim - 1);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 2.0 * M_PI);

  Mode xi{0, 0, 0};
  const int lo3 = (dim == 3) ? -band : 0;
  const int hi3 = (dim == 3) ? band : 0;
  const std::int64_t cap = static_cast<std::int64_t>(band) * band;
  for (xi[0] = -band; xi[0] <= band; ++xi[0])
    for (xi[1] = -band; xi[1] <= band; ++xi[1])
      for (xi[2] = lo3; xi[2] <= hi3; ++xi[2]) {
        if (!mode_is_canonical(xi)) continue;
        if (mode_norm_sq(xi) > cap) continue;  // Euclidean ball |xi| <= band
        const double mag =
            V * std::pow(static_cast<double>(mode_norm_sq(xi)), -0.5 * decay);
        const auto [t1, t2] = integer_tangents(xi);
        const cplx z1 = std::polar(mag, unif(rng));
        const cplx z2 = std::polar(mag, unif(rng));
        Coeff u{};
        for (int i = 0; i < dim; ++i) {
          cplx val = z1 * static_cast<double>(t1[static_cast<std::size_t>(i)]);
          if (dim == 3)
            val += z2 * static_cast<double>(t2[static_cast<std::size_t>(i)]);
          u[static_cast<std::size_t>(i)] = val;
        }
        mc.velocity_exact.set_mode(xi, u);
        mc.pressure_exact.set_mode(xi, Coeff{std::polar(mag, unif(rng))});
      }
  derive_data(mc);
  return mc;
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& points) {
  const std::size_t n = points.size();
  if (n < 2) fail(ErrorCode::degenerate_fit, "need at least two points to fit");
  for (const auto& [x, y] : points) {
    if (!(x > 0.0)) fail(ErrorCode::degenerate_fit, "parameters must be positive");
    if (!(y > 0.0)) fail(ErrorCode::degenerate_fit, "errors must be positive");
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (points[i].first == points[j].first)
        fail(ErrorCode::degenerate_fit, "repeated parameter value");

  double mx = 0.0, my = 0.0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    lx[i] = std::log(points[i].first);
    ly[i] = std::log(points[i].second);
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy > 0.0) {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
      ss_res += r * r;
    }
    fit.r_squared = 1.0 - ss_res / syy;
  } else {
    fit.r_squared = 1.0;
  }
  return fit;
}

namespace {

void fit_report(ConvergenceReport& report) {
  if (report.records.size() < 3) return;
  std::set<std::string> names;
  for (const auto& rec : report.records)
    for (const auto& [name, err] : rec.errors) names.insert(name);
  for (const std::string& name : names) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& rec : report.records) {
      auto it = rec.errors.find(name);
      if (it == rec.errors.end() || !(it->second > 0.0)) break;
      pts.emplace_back(rec.parameter, it->second);
    }
    if (pts.size() != report.records.size()) continue;
    RateFit fit = fit_rate(pts);
    // report the convergence order as a positive slope on both axes:
    // errors shrink like delta^p (raw slope +p) or like N^{-p} (raw slope -p)
    if (report.axis == SweepAxis::band_limit) fit.slope = -fit.slope;
    report.fitted[name] = fit;
  }
}

StokesSolution solve_variant(const StokesProblem& pb, int band,
                             const SymbolTable& table) {
  switch (pb.variant) {
    case Variant::local: return solve_local(pb, band);
    case Variant::mollified: return solve_mollified(pb, band, table);
    default: return solve_nonlocal(pb, band, table);
  }
}

}  // namespace

ConvergenceReport delta_sweep(const ManufacturedCase& mcase,
                              const KernelSet& kernels_template,
                              const std::vector<double>& deltas, int band,
                              Variant variant) {
  ConvergenceReport report;
  report.axis = SweepAxis::delta;
  std::vector<double> ds = deltas;
  std::sort(ds.begin(), ds.end());

  const bool fractional = kernels_template.diffusion.family() ==
                          KernelFamily::fractional_truncated;
  for (double delta : ds) {
    KernelSet ks = kernels_template;
    ks.delta = delta;
    StokesProblem pb{mcase.body_force, mcase.divergence_data, ks, variant};
    try {
      SymbolTable table(ks);
      const StokesSolution sol = solve_variant(pb, band, table);
      SweepRecord rec;
      rec.parameter = delta;
      const SpectralField du = subtract(mcase.velocity_exact, sol.velocity);
      const SpectralField dp = subtract(mcase.pressure_exact, sol.pressure);
      rec.errors["u_l2"] = sobolev_norm(du, 0.0);
      rec.errors["p_l2"] = sobolev_norm(dp, 0.0);
      if (fractional)
        rec.errors["u_h_alpha"] =
            sobolev_norm(du, kernels_template.diffusion.singular_exponent());
      if (variant == Variant::mollified) {
        const double gamma = kernels_template.mollifier_smoothness;
        rec.errors["u_h_gamma"] = sobolev_norm(du, gamma);
        rec.errors["p_h_gamma"] = sobolev_norm(dp, gamma);
      }
      report.records.push_back(std::move(rec));
    } catch (const Error& e) {
      report.complete = false;
      report.failure_reason = e.what();
      break;
    }
  }
  fit_report(report);
  return report;
}

ConvergenceReport band_sweep(const SpectralField& f, const SpectralField& g,
                             const KernelSet& kernels,
                             const std::vector<int>& bands, int master_band,
                             Variant variant) {
  ConvergenceReport report;
  report.axis = SweepAxis::band_limit;
  std::vector<int> ns = bands;
  std::sort(ns.begin(), ns.end());

  try {
    SymbolTable table(kernels);
    StokesProblem pb{f, g, kernels, variant};
    const StokesSolution ref = solve_variant(pb, master_band, table);
    for (int n : ns) {
      StokesProblem pbn{truncate_to_band(f, n), truncate_to_band(g, n), kernels,
                        variant};
      const StokesSolution sol = solve_variant(pbn, n, table);
      SweepRecord rec;
      rec.parameter = static_cast<double>(n);
      rec.errors["u_l2"] = sobolev_norm(subtract(ref.velocity, sol.velocity), 0.0);
      rec.errors["p_l2"] = sobolev_norm(subtract(ref.pressure, sol.pressure), 0.0);
      report.records.push_back(std::move(rec));
    }
  } catch (const Error& e) {
    report.complete = false;
    report.failure_reason = e.what();
  }
  fit_report(report);
  return report;
}

AcDiagramReport ac_diagram(const ManufacturedCase& mcase,
                           const KernelSet& kernels_template,
                           const std::vector<double>& deltas,
                           const std::vector<int>& bands, int fixed_band,
                           double fixed_delta) {
  AcDiagramReport out;
  out.master_band = 4 * *std::max_element(bands.begin(), bands.end());

  StokesProblem pb_local{mcase.body_force, mcase.divergence_data,
                         kernels_template, Variant::local};
  const StokesSolution local_master = solve_local(pb_local, out.master_band);
  const StokesSolution local_fixed = solve_local(pb_local, fixed_band);

  // corner (i): fixed band, delta -> 0, nonlocal vs local at the same band
  out.delta_at_fixed_band.axis = SweepAxis::delta;
  std::vector<double> ds = deltas;
  std::sort(ds.begin(), ds.end());
  for (double delta : ds) {
    KernelSet ks = kernels_template;
    ks.delta = delta;
    SymbolTable table(ks);
    StokesProblem pb{mcase.body_force, mcase.divergence_data, ks,
                     Variant::nonlocal};
    const StokesSolution sol = solve_nonlocal(pb, fixed_band, table);
    SweepRecord rec;
    rec.parameter = delta;
    rec.errors["u_l2"] =
        sobolev_norm(subtract(sol.velocity, local_fixed.velocity), 0.0);
    rec.errors["p_l2"] =
        sobolev_norm(subtract(sol.pressure, local_fixed.pressure), 0.0);
    out.delta_at_fixed_band.records.push_back(std::move(rec));
  }
  fit_report(out.delta_at_fixed_band);

  // corner (ii): fixed delta, band -> infinity, against the master band
  out.band_at_fixed_delta.axis = SweepAxis::band_limit;
  KernelSet ks_fixed = kernels_template;
  ks_fixed.delta = fixed_delta;
  SymbolTable table_fixed(ks_fixed);
  StokesProblem pb_fixed{mcase.body_force, mcase.divergence_data, ks_fixed,
                         Variant::nonlocal};
  const StokesSolution nonlocal_master =
      solve_nonlocal(pb_fixed, out.master_band, table_fixed);
  std::vector<int> ns = bands;
  std::sort(ns.begin(), ns.end());
  for (int n : ns) {
    const StokesSolution sol = solve_nonlocal(pb_fixed, n, table_fixed);
    SweepRecord rec;
    rec.parameter = static_cast<double>(n);
    rec.errors["u_l2"] =
        sobolev_norm(subtract(sol.velocity, nonlocal_master.velocity), 0.0);
    rec.errors["p_l2"] =
        sobolev_norm(subtract(sol.pressure, nonlocal_master.pressure), 0.0);
    out.band_at_fixed_delta.records.push_back(std::move(rec));
  }
  fit_report(out.band_at_fixed_delta);

  // diagonal: delta shrinking while the band grows, against the local master
  std::vector<double> ds_desc = ds;
  std::sort(ds_desc.begin(), ds_desc.end(), std::greater<>());
  const std::size_t len = std::min(ds_desc.size(), ns.size());
  out.triangle_ok = true;
  for (std::size_t k = 0; k < len; ++k) {
    KernelSet ks = kernels_template;
    ks.delta = ds_desc[k];
    SymbolTable table(ks);
    StokesProblem pb{mcase.body_force, mcase.divergence_data, ks,
                     Variant::nonlocal};
    const StokesSolution sol = solve_nonlocal(pb, ns[k], table);
    const StokesSolution local_n = solve_local(pb_local, ns[k]);

    const double e_diag =
        sobolev_norm(subtract(sol.velocity, local_master.velocity), 0.0);
    const double e_i =
        sobolev_norm(subtract(sol.velocity, local_n.velocity), 0.0);
    const double e_ii =
        sobolev_norm(subtract(local_n.velocity, local_master.velocity), 0.0);

    SweepRecord rec;
    rec.parameter = static_cast<double>(k);
    rec.errors["u_l2"] = e_diag;
    rec.errors["u_corner_i"] = e_i;
    rec.errors["u_corner_ii"] = e_ii;
    rec.errors["p_l2"] =
        sobolev_norm(subtract(sol.pressure, local_master.pressure), 0.0);
    out.diagonal.push_back(std::move(rec));

    const double slackv = 1e-12 * (e_i + e_ii + e_diag) + 1e-300;
    if (e_diag > e_i + e_ii + slackv) out.triangle_ok = false;
  }
  return out;
}

}  // namespace nlstokes
