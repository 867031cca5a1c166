// Python bindings for the core operations: kernels, symbols, fields,
// solves and sweeps.

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nlstokes/lab.hpp"
#include "nlstokes/symbols.hpp"

namespace py = pybind11;
using namespace nlstokes;

namespace {

RadialKernelProfile shape_by_name(const std::string& family, int dim, double alpha) {
  if (family == "constant") return RadialKernelProfile::constant();
  if (family == "polynomial_bump") return RadialKernelProfile::polynomial_bump();
  if (family == "fractional") return RadialKernelProfile::fractional(alpha, dim);
  fail(ErrorCode::validation, "unknown kernel family '" + family + "'");
}

KernelSet kernel_set_by_names(int dim, double delta, const std::string& diffusion,
                              const std::string& gradient,
                              const std::string& relaxation,
                              const std::string& mollifier, double alpha) {
  std::optional<RadialKernelProfile> moll;
  if (!mollifier.empty()) moll = shape_by_name(mollifier, dim, alpha);
  return make_kernel_set(dim, delta, shape_by_name(diffusion, dim, alpha),
                         shape_by_name(gradient, dim, alpha),
                         shape_by_name(relaxation, dim, alpha), moll);
}

CaseFamily family_by_name(const std::string& name) {
  if (name == "single_mode_shear") return CaseFamily::single_mode_shear;
  if (name == "multi_mode_div_free") return CaseFamily::multi_mode_div_free;
  if (name == "pressure_driven") return CaseFamily::pressure_driven;
  if (name == "with_divergence_data") return CaseFamily::with_divergence_data;
  if (name == "random_band_limited") return CaseFamily::random_band_limited;
  fail(ErrorCode::validation, "unknown case family '" + name + "'");
}

Variant variant_by_name(const std::string& name) {
  if (name == "nonlocal") return Variant::nonlocal;
  if (name == "local") return Variant::local;
  if (name == "mollified") return Variant::mollified;
  if (name == "nonlocal_fractional") return Variant::nonlocal_fractional;
  fail(ErrorCode::validation, "unknown variant '" + name + "'");
}

py::dict report_to_dict(const ConvergenceReport& rep) {
  py::dict out;
  py::list records;
  for (const auto& rec : rep.records) {
    py::dict r;
    r["axis_value"] = rec.parameter;
    py::dict errs;
    for (const auto& [name, err] : rec.errors) errs[name.c_str()] = err;
    r["errors"] = errs;
    records.append(r);
  }
  out["records"] = records;
  py::dict fits;
  for (const auto& [name, fit] : rep.fitted) {
    py::dict f;
    f["slope"] = fit.slope;
    f["intercept"] = fit.intercept;
    f["r_squared"] = fit.r_squared;
    fits[name.c_str()] = f;
  }
  out["fitted"] = fits;
  out["complete"] = rep.complete;
  return out;
}

}  // namespace

PYBIND11_MODULE(_nlstokes, m) {
  m.doc() = "Fourier spectral solver for the relaxed nonlocal Stokes system";

  py::register_exception<Error>(m, "NlstokesError");

  py::class_<RadialKernelProfile>(m, "RadialKernelProfile")
      .def_static("constant", &RadialKernelProfile::constant,
                  py::arg("amplitude") = 1.0)
      .def_static("polynomial_bump", &RadialKernelProfile::polynomial_bump,
                  py::arg("amplitude") = 1.0)
      .def_static("fractional", &RadialKernelProfile::fractional,
                  py::arg("alpha"), py::arg("dim"), py::arg("amplitude") = 1.0)
      .def_property_readonly("amplitude", &RadialKernelProfile::amplitude)
      .def_property_readonly("singular_exponent",
                             &RadialKernelProfile::singular_exponent)
      .def("value", &RadialKernelProfile::value, py::arg("r"));

  m.def("compute_moment", &compute_moment, py::arg("profile"), py::arg("k"),
        py::arg("dim"));
  m.def(
      "normalize",
      [](const RadialKernelProfile& shape, int dim, const std::string& role) {
        KernelRole r = KernelRole::diffusion;
        if (role == "gradient") r = KernelRole::gradient;
        else if (role == "relaxation") r = KernelRole::relaxation;
        else if (role == "mollifier") r = KernelRole::mollifier;
        else if (role != "diffusion")
          fail(ErrorCode::validation, "unknown role '" + role + "'");
        return normalize(shape, dim, r);
      },
      py::arg("shape"), py::arg("dim"), py::arg("role"));

  py::class_<KernelSet>(m, "KernelSet")
      .def_readonly("dim", &KernelSet::dim)
      .def_readonly("delta", &KernelSet::delta)
      .def_readonly("relaxation_moment_lower", &KernelSet::relaxation_moment_lower)
      .def_readonly("relaxation_moment_upper", &KernelSet::relaxation_moment_upper)
      .def_readonly("mollifier_smoothness", &KernelSet::mollifier_smoothness);

  m.def("make_kernel_set", &kernel_set_by_names, py::arg("dim"), py::arg("delta"),
        py::arg("diffusion") = "constant", py::arg("gradient") = "constant",
        py::arg("relaxation") = "constant", py::arg("mollifier") = "",
        py::arg("alpha") = 0.5);

  py::class_<SymbolTuple>(m, "SymbolTuple")
      .def_readonly("diffusion", &SymbolTuple::diffusion)
      .def_readonly("gradient", &SymbolTuple::gradient)
      .def_readonly("relaxation", &SymbolTuple::relaxation)
      .def_readonly("mollifier", &SymbolTuple::mollifier)
      .def("saddle_term", &SymbolTuple::saddle_term, py::arg("delta"));

  py::class_<SymbolTable>(m, "SymbolTable")
      .def(py::init<KernelSet, double, int>(), py::arg("kernels"),
           py::arg("rel_tol") = 1e-12, py::arg("panel_budget") = 1 << 14)
      .def("evaluate", &SymbolTable::evaluate, py::arg("xi_norm"))
      .def("lambda_symbol", &SymbolTable::diffusion_symbol, py::arg("xi_norm"))
      .def("b_symbol", &SymbolTable::gradient_symbol, py::arg("xi_norm"))
      .def("c_symbol", &SymbolTable::relaxation_symbol, py::arg("xi_norm"))
      .def("d_symbol", &SymbolTable::mollifier_symbol, py::arg("xi_norm"));

  m.def(
      "certify_bounds",
      [](const KernelSet& ks, int xi_max, const std::vector<double>& deltas,
         int threads, double slack) {
        const BoundReport rep = certify_bounds(ks, xi_max, deltas, threads, slack);
        py::dict out;
        out["all_passed"] = rep.all_passed();
        out["checks"] = rep.checks.size();
        py::dict worst;
        for (const auto& [name, margin] : rep.worst_margins())
          worst[name.c_str()] = margin;
        out["worst_margins"] = worst;
        py::list failures;
        for (const auto& c : rep.failures()) {
          py::dict f;
          f["delta"] = c.delta;
          f["xi_sq"] = c.xi_sq;
          f["check"] = c.check_name;
          f["margin"] = c.margin;
          failures.append(f);
        }
        out["failures"] = failures;
        return out;
      },
      py::arg("kernels"), py::arg("xi_max"), py::arg("deltas"),
      py::arg("threads") = 1, py::arg("slack") = 1e-8);

  py::class_<SpectralField>(m, "SpectralField")
      .def(py::init<int, int, int>(), py::arg("dim"), py::arg("components"),
           py::arg("band"))
      .def_property_readonly("dim", &SpectralField::dim)
      .def_property_readonly("components", &SpectralField::components)
      .def_property_readonly("band", &SpectralField::band)
      .def("set_mode",
           [](SpectralField& f, const std::vector<int>& xi,
              const std::vector<std::complex<double>>& value) {
             Mode m{0, 0, 0};
             for (std::size_t i = 0; i < xi.size() && i < 3; ++i)
               m[i] = xi[i];
             Coeff v{};
             for (std::size_t i = 0; i < value.size() && i < 3; ++i)
               v[i] = value[i];
             f.set_mode(m, v);
           })
      .def("coeff",
           [](const SpectralField& f, const std::vector<int>& xi) {
             Mode m{0, 0, 0};
             for (std::size_t i = 0; i < xi.size() && i < 3; ++i)
               m[i] = xi[i];
             const Coeff v = f.coeff(m);
             std::vector<std::complex<double>> out;
             for (int c = 0; c < f.components(); ++c)
               out.push_back(v[static_cast<std::size_t>(c)]);
             return out;
           })
      .def("mode_count", &SpectralField::mode_count);

  m.def("sobolev_norm", &sobolev_norm, py::arg("field"), py::arg("s"));
  m.def("sample_on_grid", &sample_on_grid, py::arg("field"),
        py::arg("points_per_dim"));
  m.def("grid_to_coeffs", &grid_to_coeffs, py::arg("samples"), py::arg("dim"),
        py::arg("components"), py::arg("band"), py::arg("points_per_dim"));
  m.def("random_field", &random_field, py::arg("seed"), py::arg("band"),
        py::arg("decay_exponent"), py::arg("dim"), py::arg("components"));
  m.def("subtract", &subtract, py::arg("a"), py::arg("b"));

  py::class_<ManufacturedCase>(m, "ManufacturedCase")
      .def_readonly("name", &ManufacturedCase::name)
      .def_readonly("dim", &ManufacturedCase::dim)
      .def_readonly("velocity_exact", &ManufacturedCase::velocity_exact)
      .def_readonly("pressure_exact", &ManufacturedCase::pressure_exact)
      .def_readonly("body_force", &ManufacturedCase::body_force)
      .def_readonly("divergence_data", &ManufacturedCase::divergence_data);

  m.def(
      "make_case",
      [](const std::string& family, int dim, std::uint64_t seed) {
        return make_case(family_by_name(family), dim, seed);
      },
      py::arg("family"), py::arg("dim"), py::arg("seed") = 0);

  py::class_<StokesSolution>(m, "StokesSolution")
      .def_readonly("velocity", &StokesSolution::velocity)
      .def_readonly("pressure", &StokesSolution::pressure)
      .def_readonly("delta", &StokesSolution::delta)
      .def_readonly("band", &StokesSolution::band)
      .def_readonly("residual_norm", &StokesSolution::residual_norm);

  m.def(
      "solve",
      [](const SpectralField& f, const SpectralField& g, const KernelSet& ks,
         const std::string& variant, int band) {
        StokesProblem pb{f, g, ks, variant_by_name(variant)};
        return solve(pb, band);
      },
      py::arg("body_force"), py::arg("divergence_data"), py::arg("kernels"),
      py::arg("variant"), py::arg("band"));

  m.def(
      "delta_sweep",
      [](const ManufacturedCase& mc, const KernelSet& ks,
         const std::vector<double>& deltas, int band, const std::string& variant) {
        return report_to_dict(delta_sweep(mc, ks, deltas, band,
                                          variant_by_name(variant)));
      },
      py::arg("case"), py::arg("kernels"), py::arg("deltas"), py::arg("band"),
      py::arg("variant") = "nonlocal");

  m.def("fit_rate", [](const std::vector<std::pair<double, double>>& pts) {
    const RateFit fit = fit_rate(pts);
    py::dict out;
    out["slope"] = fit.slope;
    out["intercept"] = fit.intercept;
    out["r_squared"] = fit.r_squared;
    return out;
  });

  m.attr("__version__") = "0.1.0";
}
