// Command-line front end: solve, sweep-delta, sweep-n, ac-diagram,
// check-symbols. A JSON config supplies parameters; individual flags
// override config fields; precedence flags > file > defaults.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "nlstokes/io.hpp"
#include "nlstokes/lab.hpp"

using namespace nlstokes;
namespace fs = std::filesystem;

namespace {

struct RunConfig {
  std::string command;
  int dimension = 3;
  double delta = 0.1;
  std::vector<double> deltas = {0.2, 0.1, 0.05, 0.025};
  int band = 16;
  std::vector<int> bands = {4, 8, 16};
  int master_band = 0;   // 0: twice the largest band
  int fixed_band = 0;    // 0: largest band
  double fixed_delta = 0.0;  // 0: 0.1 when swept, else the median
  int xi_max = 32;
  std::string case_family = "single_mode_shear";
  std::uint64_t seed = 42;
  int case_band = 4;
  double case_decay = 0.0;
  std::string variant = "nonlocal";
  json kernels = json::object();
  std::string out = "out";
  int threads = 0;  // 0: NLSTOKES_THREADS or hardware
  int samples_per_dim = 0;
  double quadrature_tolerance = 1e-12;
  double slack = 1e-8;
  json assert_slopes = json::object();  // norm name -> [lo, hi]
  std::string force_file;
  std::string divergence_file;
};

void apply_json(RunConfig& c, const json& j) {
  if (j.contains("dimension")) c.dimension = j["dimension"].get<int>();
  if (j.contains("delta")) c.delta = j["delta"].get<double>();
  if (j.contains("deltas")) c.deltas = j["deltas"].get<std::vector<double>>();
  if (j.contains("band")) c.band = j["band"].get<int>();
  if (j.contains("bands")) c.bands = j["bands"].get<std::vector<int>>();
  if (j.contains("master_band")) c.master_band = j["master_band"].get<int>();
  if (j.contains("fixed_band")) c.fixed_band = j["fixed_band"].get<int>();
  if (j.contains("fixed_delta")) c.fixed_delta = j["fixed_delta"].get<double>();
  if (j.contains("xi_max")) c.xi_max = j["xi_max"].get<int>();
  if (j.contains("case")) {
    const json& cs = j["case"];
    if (cs.contains("family")) c.case_family = cs["family"].get<std::string>();
    if (cs.contains("seed")) c.seed = cs["seed"].get<std::uint64_t>();
    if (cs.contains("band")) c.case_band = cs["band"].get<int>();
    if (cs.contains("decay")) c.case_decay = cs["decay"].get<double>();
  }
  if (j.contains("variant")) c.variant = j["variant"].get<std::string>();
  if (j.contains("kernels")) c.kernels = j["kernels"];
  if (j.contains("out")) c.out = j["out"].get<std::string>();
  if (j.contains("threads")) c.threads = j["threads"].get<int>();
  if (j.contains("samples_per_dim")) c.samples_per_dim = j["samples_per_dim"].get<int>();
  if (j.contains("quadrature_tolerance"))
    c.quadrature_tolerance = j["quadrature_tolerance"].get<double>();
  if (j.contains("slack")) c.slack = j["slack"].get<double>();
  if (j.contains("assert_slopes")) c.assert_slopes = j["assert_slopes"];
  if (j.contains("force_file")) c.force_file = j["force_file"].get<std::string>();
  if (j.contains("divergence_file"))
    c.divergence_file = j["divergence_file"].get<std::string>();
}

json config_echo(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["dimension"] = c.dimension;
  j["delta"] = c.delta;
  j["deltas"] = c.deltas;
  j["band"] = c.band;
  j["bands"] = c.bands;
  j["master_band"] = c.master_band;
  j["fixed_band"] = c.fixed_band;
  j["fixed_delta"] = c.fixed_delta;
  j["xi_max"] = c.xi_max;
  j["case"] = {{"family", c.case_family},
               {"seed", c.seed},
               {"band", c.case_band},
               {"decay", c.case_decay}};
  j["variant"] = c.variant;
  j["kernels"] = c.kernels;
  j["out"] = c.out;
  j["threads"] = c.threads;
  j["samples_per_dim"] = c.samples_per_dim;
  j["quadrature_tolerance"] = c.quadrature_tolerance;
  j["slack"] = c.slack;
  j["assert_slopes"] = c.assert_slopes;
  if (!c.force_file.empty()) j["force_file"] = c.force_file;
  if (!c.divergence_file.empty()) j["divergence_file"] = c.divergence_file;
  return j;
}

void validate_config(const RunConfig& c) {
  if (c.dimension != 2 && c.dimension != 3)
    fail(ErrorCode::validation, "dimension must be 2 or 3");
  auto check_delta = [](double d) {
    if (!(d > 0.0 && d < 1.0))
      fail(ErrorCode::validation, "delta must lie in (0,1)");
  };
  check_delta(c.delta);
  for (double d : c.deltas) check_delta(d);
  if (c.band < 1) fail(ErrorCode::validation, "band must be >= 1");
  for (int n : c.bands)
    if (n < 1) fail(ErrorCode::validation, "bands must be >= 1");
  if (c.xi_max < 0) fail(ErrorCode::validation, "xi_max must be >= 0");
}

int resolve_threads(const RunConfig& c) {
  if (c.threads > 0) return c.threads;
  if (const char* env = std::getenv("NLSTOKES_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

RadialKernelProfile shape_from(const json& kernels, const char* key, int dim) {
  if (!kernels.contains(key)) return RadialKernelProfile::constant();
  return profile_from_json(kernels[key], dim);
}

// Shapes are normalized per role; explicit "amplitude" entries override the
// normalization afterwards (deliberately unnormalized fixtures).
KernelSet build_kernels(const RunConfig& c, double delta) {
  const json& k = c.kernels;
  std::optional<RadialKernelProfile> moll;
  if (k.contains("mollifier") || c.variant == "mollified")
    moll = shape_from(k, "mollifier", c.dimension);
  KernelSet ks = make_kernel_set(c.dimension, delta,
                                 shape_from(k, "diffusion", c.dimension),
                                 shape_from(k, "gradient", c.dimension),
                                 shape_from(k, "relaxation", c.dimension), moll);
  auto override_amp = [&](const char* key, RadialKernelProfile& p) {
    if (k.contains(key) && k[key].contains("amplitude"))
      p = p.with_amplitude(k[key]["amplitude"].get<double>());
  };
  override_amp("diffusion", ks.diffusion);
  override_amp("gradient", ks.gradient);
  override_amp("relaxation", ks.relaxation);
  if (ks.mollifier) {
    RadialKernelProfile m = *ks.mollifier;
    override_amp("mollifier", m);
    ks.mollifier = m;
  }
  return ks;
}

Variant variant_from(const std::string& name) {
  if (name == "nonlocal") return Variant::nonlocal;
  if (name == "local") return Variant::local;
  if (name == "mollified") return Variant::mollified;
  if (name == "nonlocal_fractional") return Variant::nonlocal_fractional;
  fail(ErrorCode::validation, "unknown variant '" + name + "'");
}

CaseFamily family_from(const std::string& name) {
  if (name == "single_mode_shear") return CaseFamily::single_mode_shear;
  if (name == "multi_mode_div_free") return CaseFamily::multi_mode_div_free;
  if (name == "pressure_driven") return CaseFamily::pressure_driven;
  if (name == "with_divergence_data") return CaseFamily::with_divergence_data;
  if (name == "random_band_limited") return CaseFamily::random_band_limited;
  fail(ErrorCode::validation, "unknown case family '" + name + "'");
}

ManufacturedCase load_case(const RunConfig& c) {
  if (!c.force_file.empty() || !c.divergence_file.empty()) {
    ManufacturedCase mc;
    mc.name = "from_files";
    mc.dim = c.dimension;
    mc.velocity_exact = SpectralField(c.dimension, c.dimension, c.case_band);
    mc.pressure_exact = SpectralField(c.dimension, 1, c.case_band);
    mc.body_force = SpectralField(c.dimension, c.dimension, c.case_band);
    mc.divergence_data = SpectralField(c.dimension, 1, c.case_band);
    auto read = [](const std::string& path) {
      std::ifstream in(path);
      if (!in) fail(ErrorCode::validation, "cannot read '" + path + "'");
      json j;
      in >> j;
      return field_from_json(j);
    };
    if (!c.force_file.empty()) mc.body_force = read(c.force_file);
    if (!c.divergence_file.empty()) mc.divergence_data = read(c.divergence_file);
    // exact fields unknown for file data; leave empty
    return mc;
  }
  if (c.case_decay > 0.0 || c.case_band != 4)
    return make_random_case(c.dimension, c.seed, c.case_band, c.case_decay);
  return make_case(family_from(c.case_family), c.dimension, c.seed);
}

struct SlopeGate {
  bool all_pass = true;
  bool warned = false;
  json details = json::array();
};

// Applies the configured slope assertions to a report.
SlopeGate apply_gate(const ConvergenceReport& rep, const json& asserts) {
  SlopeGate gate;
  for (auto it = asserts.begin(); it != asserts.end(); ++it) {
    const std::string norm = it.key();
    const auto window = it.value().get<std::vector<double>>();
    json entry;
    entry["norm"] = norm;
    entry["window"] = window;
    auto fit = rep.fitted.find(norm);
    if (fit == rep.fitted.end()) {
      entry["status"] = "no_fit";
      gate.warned = true;
    } else {
      entry["slope"] = fit->second.slope;
      entry["r_squared"] = fit->second.r_squared;
      if (fit->second.r_squared < 0.98) {
        // a poor fit cannot support a rate claim
        entry["status"] = "poor_fit";
        gate.all_pass = false;
      } else {
        const bool ok = fit->second.slope >= window.at(0) &&
                        fit->second.slope <= window.at(1);
        entry["status"] = ok ? "pass" : "fail";
        if (!ok) gate.all_pass = false;
      }
    }
    gate.details.push_back(entry);
  }
  return gate;
}

void write_json(const fs::path& path, const json& j) {
  write_text_file(path.string(), j.dump(2) + "\n");
}

int cmd_solve(const RunConfig& cfg) {
  const KernelSet ks = build_kernels(cfg, cfg.delta);
  validate_normalization(ks);
  const ManufacturedCase mc = load_case(cfg);
  StokesProblem pb{mc.body_force, mc.divergence_data, ks,
                   variant_from(cfg.variant)};
  const StokesSolution sol = solve(pb, cfg.band);

  const fs::path out(cfg.out);
  fs::create_directories(out);
  write_json(out / "solution.json", solution_to_json(sol, ks));

  const int band = std::max(1, std::max(sol.velocity.band(), 1));
  const int M = cfg.samples_per_dim > 0 ? cfg.samples_per_dim : 2 * band + 2;
  // one row per grid point: coordinates, velocity components, pressure
  const auto u_csv = samples_to_csv(sol.velocity, M);
  const auto p_samples = sample_on_grid(sol.pressure, M);
  std::string csv;
  std::size_t row = 0, upos = 0;
  while (upos < u_csv.size()) {
    std::size_t eol = u_csv.find('\n', upos);
    std::string line = u_csv.substr(upos, eol - upos);
    if (row == 0) {
      csv += line + ",p\n";
    } else {
      csv += line + "," + format_double(p_samples[row - 1]) + "\n";
    }
    ++row;
    upos = eol + 1;
  }
  write_text_file((out / "samples.csv").string(), csv);

  json manifest;
  manifest["config"] = config_echo(cfg);
  manifest["residual_norm"] = sol.residual_norm;
  manifest["outputs"] = {"solution.json", "samples.csv"};
  write_json(out / "manifest.json", manifest);
  return 0;
}

int cmd_sweep_delta(const RunConfig& cfg) {
  const KernelSet ks = build_kernels(cfg, cfg.deltas.front());
  validate_normalization(ks);
  const ManufacturedCase mc = load_case(cfg);
  const ConvergenceReport rep =
      delta_sweep(mc, ks, cfg.deltas, cfg.band, variant_from(cfg.variant));

  json asserts = cfg.assert_slopes;
  if (asserts.empty()) asserts = {{"u_l2", {1.8, 2.2}}};
  SlopeGate gate = apply_gate(rep, asserts);
  if (rep.records.size() < 3) gate.warned = true;

  const fs::path out(cfg.out);
  fs::create_directories(out);
  write_text_file((out / "report.csv").string(), report_to_csv(rep));
  json summary = report_summary_json(rep);
  summary["assertions"] = gate.details;
  summary["all_assertions_pass"] = gate.all_pass;
  summary["warning"] = gate.warned;
  write_json(out / "summary.json", summary);
  json manifest;
  manifest["config"] = config_echo(cfg);
  manifest["outputs"] = {"report.csv", "summary.json"};
  write_json(out / "manifest.json", manifest);
  if (!rep.complete) return 4;
  return gate.all_pass ? 0 : 1;
}

int cmd_sweep_n(const RunConfig& cfg) {
  const KernelSet ks = build_kernels(cfg, cfg.delta);
  validate_normalization(ks);
  const ManufacturedCase mc = load_case(cfg);
  const int master = cfg.master_band > 0
                         ? cfg.master_band
                         : 2 * *std::max_element(cfg.bands.begin(), cfg.bands.end());
  const ConvergenceReport rep =
      band_sweep(mc.body_force, mc.divergence_data, ks, cfg.bands, master,
                 variant_from(cfg.variant));
  SlopeGate gate = apply_gate(rep, cfg.assert_slopes);
  if (rep.records.size() < 3) gate.warned = true;

  const fs::path out(cfg.out);
  fs::create_directories(out);
  write_text_file((out / "report.csv").string(), report_to_csv(rep));
  json summary = report_summary_json(rep);
  summary["master_band"] = master;
  summary["assertions"] = gate.details;
  summary["all_assertions_pass"] = gate.all_pass;
  summary["warning"] = gate.warned;
  write_json(out / "summary.json", summary);
  json manifest;
  manifest["config"] = config_echo(cfg);
  manifest["outputs"] = {"report.csv", "summary.json"};
  write_json(out / "manifest.json", manifest);
  if (!rep.complete) return 4;
  return gate.all_pass ? 0 : 1;
}

int cmd_ac_diagram(const RunConfig& cfg) {
  const KernelSet ks = build_kernels(cfg, cfg.delta);
  validate_normalization(ks);
  const ManufacturedCase mc = load_case(cfg);
  const int fixed_band =
      cfg.fixed_band > 0
          ? cfg.fixed_band
          : *std::max_element(cfg.bands.begin(), cfg.bands.end());
  double fixed_delta = cfg.fixed_delta;
  if (fixed_delta <= 0.0) {
    fixed_delta = cfg.deltas[cfg.deltas.size() / 2];
    for (double d : cfg.deltas)
      if (d == 0.1) fixed_delta = d;
  }
  const AcDiagramReport rep = ac_diagram(mc, ks, cfg.deltas, cfg.bands,
                                         fixed_band, fixed_delta);

  json asserts = cfg.assert_slopes;
  if (asserts.empty()) asserts = {{"u_l2", {1.8, 2.2}}};
  SlopeGate gate = apply_gate(rep.delta_at_fixed_band, asserts);

  const fs::path out(cfg.out);
  fs::create_directories(out);
  write_text_file((out / "report.csv").string(),
                  report_to_csv(rep.delta_at_fixed_band));
  write_text_file((out / "report_n.csv").string(),
                  report_to_csv(rep.band_at_fixed_delta));
  json summary;
  summary["delta_at_fixed_band"] = report_summary_json(rep.delta_at_fixed_band);
  summary["band_at_fixed_delta"] = report_summary_json(rep.band_at_fixed_delta);
  json diag = json::array();
  for (const auto& recd : rep.diagonal) {
    json e;
    for (const auto& [name, err] : recd.errors) e[name] = err;
    diag.push_back(e);
  }
  summary["diagonal"] = diag;
  summary["triangle_ok"] = rep.triangle_ok;
  summary["master_band"] = rep.master_band;
  summary["fixed_band"] = fixed_band;
  summary["fixed_delta"] = fixed_delta;
  summary["assertions"] = gate.details;
  const bool pass = gate.all_pass && rep.triangle_ok;
  summary["all_assertions_pass"] = pass;
  write_json(out / "summary.json", summary);
  json manifest;
  manifest["config"] = config_echo(cfg);
  manifest["outputs"] = {"report.csv", "report_n.csv", "summary.json"};
  write_json(out / "manifest.json", manifest);
  return pass ? 0 : 1;
}

int cmd_check_symbols(const RunConfig& cfg) {
  // deliberately skips normalization validation: corrupted kernels must be
  // caught by the bound checks themselves
  const KernelSet ks = build_kernels(cfg, cfg.deltas.front());
  const BoundReport rep = certify_bounds(ks, cfg.xi_max, cfg.deltas,
                                         resolve_threads(cfg), cfg.slack,
                                         cfg.quadrature_tolerance);
  const fs::path out(cfg.out);
  fs::create_directories(out);
  write_text_file((out / "report.csv").string(), bound_report_to_csv(rep));
  json summary;
  summary["all_passed"] = rep.all_passed();
  summary["checks"] = rep.checks.size();
  json worst;
  for (const auto& [name, margin] : rep.worst_margins()) worst[name] = margin;
  summary["worst_margins"] = worst;
  json fails = json::array();
  for (const auto& c : rep.failures()) {
    fails.push_back({{"delta", c.delta},
                     {"xi_sq", c.xi_sq},
                     {"check", c.check_name},
                     {"margin", c.margin}});
  }
  summary["failures"] = fails;
  write_json(out / "summary.json", summary);
  json manifest;
  manifest["config"] = config_echo(cfg);
  manifest["outputs"] = {"report.csv", "summary.json"};
  write_json(out / "manifest.json", manifest);
  if (!rep.all_passed()) {
    for (const auto& c : rep.failures())
      std::cerr << "bound violation: " << c.check_name << " at delta=" << c.delta
                << " |xi|^2=" << c.xi_sq << " margin=" << c.margin << "\n";
    return 1;
  }
  return 0;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::validation:
    case ErrorCode::divergent_moment:
    case ErrorCode::missing_mollifier:
      return 2;
    case ErrorCode::mean_not_zero:
    case ErrorCode::shape_mismatch:
    case ErrorCode::aliasing_risk:
    case ErrorCode::non_real_result:
    case ErrorCode::degenerate_fit:
      return 3;
    case ErrorCode::quadrature_failure:
    case ErrorCode::zero_frequency:
    case ErrorCode::singular_mode:
      return 4;
  }
  return 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral solver for the relaxed nonlocal Stokes system"};
  app.require_subcommand(1);

  std::string config_path;
  RunConfig flags;  // flag values land here before merging
  app.add_option("--config", config_path, "JSON config file");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--dimension", flags.dimension);
    sub->add_option("--delta", flags.delta);
    sub->add_option("--deltas", flags.deltas)->delimiter(',');
    sub->add_option("--band", flags.band);
    sub->add_option("--bands", flags.bands)->delimiter(',');
    sub->add_option("--master-band", flags.master_band);
    sub->add_option("--fixed-band", flags.fixed_band);
    sub->add_option("--fixed-delta", flags.fixed_delta);
    sub->add_option("--xi-max", flags.xi_max);
    sub->add_option("--case", flags.case_family);
    sub->add_option("--seed", flags.seed);
    sub->add_option("--case-band", flags.case_band);
    sub->add_option("--case-decay", flags.case_decay);
    sub->add_option("--variant", flags.variant);
    sub->add_option("--out", flags.out);
    sub->add_option("--threads", flags.threads);
    sub->add_option("--samples-per-dim", flags.samples_per_dim);
    sub->add_option("--force-file", flags.force_file);
    sub->add_option("--divergence-file", flags.divergence_file);
  };

  CLI::App* solve_cmd = app.add_subcommand("solve", "solve one problem");
  CLI::App* sweep_d = app.add_subcommand("sweep-delta", "horizon sweep");
  CLI::App* sweep_n = app.add_subcommand("sweep-n", "band-limit sweep");
  CLI::App* acd = app.add_subcommand("ac-diagram", "asymptotic compatibility diagram");
  CLI::App* chk = app.add_subcommand("check-symbols", "certify symbol bounds");
  for (CLI::App* sub : {solve_cmd, sweep_d, sweep_n, acd, chk}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) fail(ErrorCode::validation, "cannot read config '" + config_path + "'");
      json j;
      in >> j;
      apply_json(cfg, j);
    }
    // flags override file values
    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    auto take = [&](const char* name, auto member) {
      if (sub->count(name)) cfg.*member = flags.*member;
    };
    take("--dimension", &RunConfig::dimension);
    take("--delta", &RunConfig::delta);
    take("--deltas", &RunConfig::deltas);
    take("--band", &RunConfig::band);
    take("--bands", &RunConfig::bands);
    take("--master-band", &RunConfig::master_band);
    take("--fixed-band", &RunConfig::fixed_band);
    take("--fixed-delta", &RunConfig::fixed_delta);
    take("--xi-max", &RunConfig::xi_max);
    take("--case", &RunConfig::case_family);
    take("--seed", &RunConfig::seed);
    take("--case-band", &RunConfig::case_band);
    take("--case-decay", &RunConfig::case_decay);
    take("--variant", &RunConfig::variant);
    take("--out", &RunConfig::out);
    take("--threads", &RunConfig::threads);
    take("--samples-per-dim", &RunConfig::samples_per_dim);
    take("--force-file", &RunConfig::force_file);
    take("--divergence-file", &RunConfig::divergence_file);

    validate_config(cfg);

    if (cfg.command == "solve") return cmd_solve(cfg);
    if (cfg.command == "sweep-delta") return cmd_sweep_delta(cfg);
    if (cfg.command == "sweep-n") return cmd_sweep_n(cfg);
    if (cfg.command == "ac-diagram") return cmd_ac_diagram(cfg);
    if (cfg.command == "check-symbols") return cmd_check_symbols(cfg);
    fail(ErrorCode::validation, "unknown command");
  } catch (const Error& e) {
    json err;
    err["error"] = error_code_name(e.code());
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    try {
      fs::create_directories(cfg.out);
      write_text_file((fs::path(cfg.out) / "error.json").string(),
                      err.dump(2) + "\n");
    } catch (...) {
    }
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "{\"error\":\"Internal\",\"message\":\"" << e.what() << "\"}\n";
    return 4;
  }
  return 0;
}
