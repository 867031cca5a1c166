#include "nlstokes/io.hpp"

#include <cstdio>
#include <fstream>

namespace nlstokes {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json profile_to_json(const RadialKernelProfile& p) {
  json j;
  j["family"] = kernel_family_name(p.family());
  j["amplitude"] = p.amplitude();
  if (p.family() == KernelFamily::fractional_truncated)
    j["alpha"] = p.singular_exponent();
  if (p.family() == KernelFamily::custom) {
    json r = json::array(), v = json::array();
    for (const auto& row : p.table()) {
      r.push_back(row[0]);
      v.push_back(row[1]);
    }
    j["table"] = {{"r", r}, {"v", v}};
  }
  return j;
}

RadialKernelProfile profile_from_json(const json& j, int dim) {
  const std::string family = j.at("family").get<std::string>();
  const double amplitude = j.value("amplitude", 1.0);
  if (family == "constant") return RadialKernelProfile::constant(amplitude);
  if (family == "polynomial_bump")
    return RadialKernelProfile::polynomial_bump(amplitude);
  if (family == "fractional")
    return RadialKernelProfile::fractional(j.at("alpha").get<double>(), dim,
                                           amplitude);
  if (family == "custom") {
    const auto& t = j.at("table");
    const auto r = t.at("r").get<std::vector<double>>();
    const auto v = t.at("v").get<std::vector<double>>();
    if (r.size() != v.size())
      fail(ErrorCode::validation, "custom table r/v lengths differ");
    std::vector<std::array<double, 2>> table;
    table.reserve(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) table.push_back({r[i], v[i]});
    return RadialKernelProfile::custom(std::move(table), amplitude);
  }
  fail(ErrorCode::validation, "unknown kernel family '" + family + "'");
}

json kernel_set_to_json(const KernelSet& ks) {
  json j;
  j["d"] = ks.dim;
  j["delta"] = ks.delta;
  json kernels;
  kernels["omega"] = profile_to_json(ks.diffusion);
  kernels["omega_hat"] = profile_to_json(ks.gradient);
  kernels["omega_tilde"] = profile_to_json(ks.relaxation);
  kernels["omega_tilde"]["m"] = ks.relaxation_moment_lower;
  kernels["omega_tilde"]["M"] = ks.relaxation_moment_upper;
  if (ks.mollifier) {
    kernels["omega_bar"] = profile_to_json(*ks.mollifier);
    kernels["omega_bar"]["gamma"] = ks.mollifier_smoothness;
  }
  j["kernels"] = kernels;
  return j;
}

KernelSet kernel_set_from_json(const json& j) {
  const int dim = j.at("d").get<int>();
  const double delta = j.at("delta").get<double>();
  const auto& k = j.at("kernels");
  KernelSet ks;
  ks.dim = dim;
  ks.delta = delta;
  ks.diffusion = profile_from_json(k.at("omega"), dim);
  ks.gradient = profile_from_json(k.at("omega_hat"), dim);
  ks.relaxation = profile_from_json(k.at("omega_tilde"), dim);
  ks.relaxation_moment_lower = k.at("omega_tilde").value("m", 0.0);
  ks.relaxation_moment_upper = k.at("omega_tilde").value("M", 0.0);
  if (k.contains("omega_bar")) {
    ks.mollifier = profile_from_json(k.at("omega_bar"), dim);
    ks.mollifier_smoothness = k.at("omega_bar").value(
        "gamma", documented_smoothness(ks.mollifier->family()));
  }
  return ks;
}

json field_to_json(const SpectralField& f) {
  json j;
  j["d"] = f.dim();
  j["components"] = f.components();
  j["N"] = f.band();
  json coeffs = json::array();
  for (const auto& [xi, v] : f.coeffs()) {
    json entry;
    json jxi = json::array();
    for (int a = 0; a < f.dim(); ++a) jxi.push_back(xi[static_cast<std::size_t>(a)]);
    json re = json::array(), im = json::array();
    for (int c = 0; c < f.components(); ++c) {
      re.push_back(v[static_cast<std::size_t>(c)].real());
      im.push_back(v[static_cast<std::size_t>(c)].imag());
    }
    entry["xi"] = jxi;
    entry["re"] = re;
    entry["im"] = im;
    coeffs.push_back(entry);
  }
  j["coeffs"] = coeffs;
  return j;
}

SpectralField field_from_json(const json& j) {
  const int dim = j.at("d").get<int>();
  const int components = j.at("components").get<int>();
  const int band = j.at("N").get<int>();
  SpectralField f(dim, components, band);
  for (const auto& entry : j.at("coeffs")) {
    const auto xi_vec = entry.at("xi").get<std::vector<int>>();
    if (static_cast<int>(xi_vec.size()) != dim)
      fail(ErrorCode::shape_mismatch, "coefficient xi has wrong length");
    Mode xi{0, 0, 0};
    for (int a = 0; a < dim; ++a) xi[static_cast<std::size_t>(a)] = xi_vec[static_cast<std::size_t>(a)];
    const auto re = entry.at("re").get<std::vector<double>>();
    const auto im = entry.at("im").get<std::vector<double>>();
    if (static_cast<int>(re.size()) != components || re.size() != im.size())
      fail(ErrorCode::shape_mismatch, "coefficient arrays have wrong length");
    Coeff v{};
    for (int c = 0; c < components; ++c)
      v[static_cast<std::size_t>(c)] = {re[static_cast<std::size_t>(c)], im[static_cast<std::size_t>(c)]};
    f.set_mode(xi, v);
  }
  f.validate();
  return f;
}

json solution_to_json(const StokesSolution& s, const KernelSet& ks) {
  json j;
  j["variant"] = variant_name(s.variant);
  j["delta"] = s.delta;
  j["N"] = s.band;
  j["residual_norm"] = s.residual_norm;
  j["kernel_set"] = kernel_set_to_json(ks);
  j["velocity"] = field_to_json(s.velocity);
  j["pressure"] = field_to_json(s.pressure);
  return j;
}

std::string samples_to_csv(const SpectralField& f, int points_per_dim) {
  const std::vector<double> samples = sample_on_grid(f, points_per_dim);
  const int M = points_per_dim;
  const int d = f.dim();
  const int nc = f.components();
  const int M3 = (d == 3) ? M : 1;

  std::string out;
  for (int a = 0; a < d; ++a) out += "x" + std::to_string(a + 1) + ",";
  for (int c = 0; c < nc; ++c) {
    out += "u" + std::to_string(c + 1);
    out += (c + 1 < nc) ? "," : "\n";
  }
  auto x_of = [&](int j) { return -M_PI + 2.0 * M_PI * j / M; };
  std::size_t idx = 0;
  for (int j1 = 0; j1 < M; ++j1)
    for (int j2 = 0; j2 < M; ++j2)
      for (int j3 = 0; j3 < M3; ++j3) {
        out += format_double(x_of(j1)) + "," + format_double(x_of(j2));
        if (d == 3) out += "," + format_double(x_of(j3));
        for (int c = 0; c < nc; ++c) out += "," + format_double(samples[idx++]);
        out += "\n";
      }
  return out;
}

std::string report_to_csv(const ConvergenceReport& r) {
  std::string out = "axis_value,norm_name,error\n";
  for (const auto& rec : r.records)
    for (const auto& [name, err] : rec.errors)
      out += format_double(rec.parameter) + "," + name + "," +
             format_double(err) + "\n";
  return out;
}

json report_summary_json(const ConvergenceReport& r) {
  json j;
  j["axis"] = (r.axis == SweepAxis::delta) ? "delta" : "band_limit";
  j["complete"] = r.complete;
  if (!r.failure_reason.empty()) j["failure_reason"] = r.failure_reason;
  json fits;
  for (const auto& [name, fit] : r.fitted) {
    fits[name] = {{"slope", fit.slope},
                  {"intercept", fit.intercept},
                  {"r_squared", fit.r_squared}};
  }
  j["fitted"] = fits;
  json records = json::array();
  for (const auto& rec : r.records) {
    json e;
    for (const auto& [name, err] : rec.errors) e[name] = err;
    records.push_back({{"axis_value", rec.parameter}, {"errors", e}});
  }
  j["records"] = records;
  return j;
}

std::string bound_report_to_csv(const BoundReport& r) {
  std::string out =
      "delta,xi_sq,lambda,b,c,d_moll,q,check_name,bound_value,margin,pass\n";
  for (const auto& c : r.checks) {
    out += format_double(c.delta) + "," + std::to_string(c.xi_sq) + "," +
           format_double(c.lambda) + "," + format_double(c.b) + "," +
           format_double(c.c) + ",";
    out += c.d_moll ? format_double(*c.d_moll) : std::string("");
    out += "," + format_double(c.q) + "," + c.check_name + "," +
           format_double(c.bound_value) + "," + format_double(c.margin) + "," +
           (c.pass ? "1" : "0") + "\n";
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::validation, "cannot open '" + path + "' for writing");
  f << content;
}

}  // namespace nlstokes
