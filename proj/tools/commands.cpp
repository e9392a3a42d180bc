#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli.hpp"
#include "phcausal/backdoor.hpp"
#include "phcausal/dataset.hpp"
#include "phcausal/error.hpp"
#include "phcausal/fit_io.hpp"
#include "phcausal/frontdoor.hpp"
#include "phcausal/oracle.hpp"
#include "phcausal/simulate.hpp"

namespace phcausal::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path output_path(const std::optional<fs::path>& explicit_path, const GlobalOptions& g,
                     const std::string& default_name) {
  if (explicit_path) return *explicit_path;
  return g.out_dir.value_or(fs::path(".")) / default_name;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw ValidationError("cannot create directory '" + path.parent_path().string() + "'");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw ValidationError("failed writing '" + path.string() + "'");
}

ScenarioConfig scenario_with_overrides(const fs::path& path, const GlobalOptions& g) {
  ScenarioConfig c = load_scenario(path);
  if (g.seed) c.seed = *g.seed;
  return c;
}

json approx_json(const ApproxErrorReport& r) {
  return {{"max_cumhaz", r.max_cumhaz},
          {"mean_cumhaz", r.mean_cumhaz},
          {"max_relative_error", r.max_relative_error},
          {"exceeds_threshold", r.exceeds_threshold},
          {"bound_holds", r.bound_holds}};
}

json oracle_json(const OracleResult& r) {
  return {{"incidence", r.incidence}, {"standard_error", r.standard_error},
          {"n", r.n},                 {"events", r.events},
          {"x_value", r.x_value},     {"t", r.horizon_t},
          {"seed", r.seed},           {"nelson_aalen", r.nelson_aalen}};
}

}  // namespace

int cmd_simulate(const fs::path& config_path, const std::optional<fs::path>& out_path,
                 const GlobalOptions& g, std::ostream& log) {
  const ScenarioConfig c = scenario_with_overrides(config_path, g);
  const Dataset d = generate(c);
  const fs::path out = output_path(out_path, g, "dataset.csv");
  write_text(out, format_dataset_csv(d));
  if (!g.quiet) {
    log << "simulate: " << d.size() << " subjects, " << d.event_count() << " events -> "
        << out.string() << '\n';
  }
  return 0;
}

int cmd_fit(const fs::path& data_path, const std::vector<std::string>& covariates,
            const std::optional<fs::path>& out_path, const GlobalOptions& g, std::ostream& log) {
  const Dataset d = load_dataset(data_path);
  FitOptions opts;
  opts.covariates = covariates;
  const CoxFit fit = fit_cox(d, opts);
  const fs::path out = output_path(out_path, g, "fit.json");
  write_text(out, fit_to_json(fit) + "\n");
  if (!g.quiet) {
    log << "fit: " << fit.iterations << " iterations, converged=" << std::boolalpha
        << fit.converged << ", |score|=" << fit.final_score_norm << " -> " << out.string()
        << '\n';
  }
  return 0;
}

int cmd_backdoor(const fs::path& data_path, const fs::path& fit_path, const std::vector<double>& x,
                 const std::vector<double>& x0, double t, const std::optional<fs::path>& out_path,
                 const GlobalOptions& g, std::ostream& log) {
  const Dataset d = load_dataset(data_path);
  const CoxFit fit = load_fit(fit_path);
  std::vector<std::string> z_columns;
  for (const auto& name : fit.covariate_names) {
    if (std::find(d.z_names().begin(), d.z_names().end(), name) != d.z_names().end()) {
      z_columns.push_back(name);
    }
  }
  const BackdoorSummary s = compute_az(d, fit, z_columns, t);
  std::vector<double> xv = x;
  std::vector<double> x0v = x0;
  if (xv.empty()) xv.assign(s.roles.x_index.size(), 1.0);
  if (x0v.empty()) {
    for (std::size_t j : s.roles.x_index) x0v.push_back(fit.baseline_x0[j]);
  }
  const CausalEstimate rr = causal_rr_estimate(fit, s.roles, xv, x0v);
  const CausalEstimate at_x = do_cdf(fit, s, xv, t);
  const CausalEstimate at_x0 = do_cdf(fit, s, x0v, t);
  json j = {{"x", xv},
            {"x0", x0v},
            {"t", t},
            {"exposures", s.roles.x_names},
            {"adjustment_set", s.roles.z_names},
            {"a_z", s.a_z},
            {"mean_joint_risk", s.mean_joint_risk},
            {"max_cumhaz", s.max_cumhaz},
            {"rarity_warning", s.rarity_warning},
            {"causal_rr", rr.value},
            {"causal_rr_se", *rr.std_err},
            {"do_cdf_x", at_x.value},
            {"do_cdf_x_warning", at_x.rarity_warning},
            {"do_cdf_x0", at_x0.value},
            {"do_cdf_x0_warning", at_x0.rarity_warning},
            {"do_cumhaz_x", do_cumhaz(fit, s, xv, t)},
            {"paf", paf(d, fit, s, x0v)},
            {"approximation", approx_json(approx_error_report(fit, d, t))}};
  const fs::path out = output_path(out_path, g, "backdoor.json");
  write_text(out, j.dump(2) + "\n");
  if (!g.quiet) {
    log << "backdoor: causal_rr=" << rr.value << " do_cdf(x)=" << at_x.value << " -> "
        << out.string() << '\n';
    if (s.rarity_warning) {
      log << "warning: max cumulative hazard " << s.max_cumhaz
          << " exceeds 0.1; the rare-disease approximation is degraded\n";
    }
  }
  return 0;
}

int cmd_frontdoor(const fs::path& data_path, Contrast contrast, double t, std::size_t x_bins,
                  std::size_t z_bins, const std::optional<fs::path>& out_path,
                  const GlobalOptions& g, std::ostream& log) {
  if (!(t >= 0.0)) throw InvalidArgument("t: must be nonnegative");
  const Dataset d = load_dataset(data_path);
  const FrontdoorFit ff = fit_frontdoor(d);
  const auto& p = ff.params;
  const double h0 = ff.cox.baseline_cumhaz(t);
  FitOptions naive_opts;
  naive_opts.covariates = d.x_names();
  const CoxFit naive = fit_cox(d, naive_opts);
  json j = {{"x", contrast.x},
            {"x0", contrast.x0},
            {"t", t},
            {"params",
             {{"beta_x", p.beta_x},
              {"beta_z", p.beta_z},
              {"alpha", p.alpha},
              {"mu_x", p.mu_x},
              {"sigma_x", p.sigma_x},
              {"sigma_z", p.sigma_z}}},
            {"alpha_se", ff.alpha_se},
            {"beta_z_se", ff.beta_z_se},
            {"h0", h0},
            {"frontdoor_rr", frontdoor_causal_rr(p, contrast.x, contrast.x0)},
            {"frontdoor_rr_se", frontdoor_causal_rr_se(ff, contrast.x, contrast.x0)},
            {"mediation_rr", mediation_indirect_rr(p, contrast.x, contrast.x0)},
            {"naive_rr", std::exp(naive.beta[0] * (contrast.x - contrast.x0))},
            {"do_cdf_gaussian_x", frontdoor_do_cdf_gaussian(p, h0, contrast.x).value},
            {"do_cdf_gaussian_x0", frontdoor_do_cdf_gaussian(p, h0, contrast.x0).value},
            {"approximation", approx_json(approx_error_report(ff.cox, d, t))}};
  const Binning bins{x_bins, z_bins};
  for (const auto& [key, v] : {std::pair{"do_cdf_empirical_x", contrast.x},
                               std::pair{"do_cdf_empirical_x0", contrast.x0}}) {
    try {
      j[key] = frontdoor_do_cdf_empirical(d, ff.cox, v, t, bins).value;
    } catch (const InvalidArgument& e) {
      j[key] = nullptr;
      if (!g.quiet) log << "note: " << e.what() << '\n';
    }
  }
  const fs::path out = output_path(out_path, g, "frontdoor.json");
  write_text(out, j.dump(2) + "\n");
  if (!g.quiet) {
    log << "frontdoor: rr=" << j["frontdoor_rr"].get<double>() << " -> " << out.string() << '\n';
  }
  return 0;
}

int cmd_oracle(const fs::path& config_path, Contrast contrast, std::uint64_t n, double t,
               bool shared_streams, const std::optional<fs::path>& out_path,
               const GlobalOptions& g, std::ostream& log) {
  const ScenarioConfig c = scenario_with_overrides(config_path, g);
  const OracleRatio r = oracle_rr(c, contrast.x, contrast.x0, n, c.seed, t,
                                  shared_streams ? ArmStreams::Shared : ArmStreams::Independent);
  json j = {{"x", contrast.x},
            {"x0", contrast.x0},
            {"t", t},
            {"n", n},
            {"seed", c.seed},
            {"streams", shared_streams ? "shared" : "independent"},
            {"ratio", r.ratio},
            {"standard_error", r.standard_error},
            {"numerator", oracle_json(r.numerator)},
            {"denominator", oracle_json(r.denominator)}};
  const fs::path out = output_path(out_path, g, "oracle.json");
  write_text(out, j.dump(2) + "\n");
  if (!g.quiet) {
    log << "oracle: ratio=" << r.ratio << " (se " << r.standard_error << ") -> " << out.string()
        << '\n';
  }
  return 0;
}

int cmd_experiment(const fs::path& experiment_config_path, const GlobalOptions& g,
                   std::ostream& log) {
  ExperimentConfig cfg = load_experiment_config(experiment_config_path);
  if (g.seed) cfg.scenario.seed = *g.seed;
  if (g.out_dir) cfg.output_dir = *g.out_dir;
  const ExperimentResult res = run_experiment(cfg);
  if (cfg.emit_csv) write_text(cfg.output_dir / "estimates.csv", format_estimates_csv(res.rows));
  if (cfg.emit_json) write_text(cfg.output_dir / "report.json", res.report_json);
  if (!g.quiet) {
    log << "experiment: " << res.rows.size() << " estimate rows -> " << cfg.output_dir.string()
        << '\n';
  }
  return 0;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ValidationFailure*>(&e) != nullptr) return 2;
  if (dynamic_cast<const NumericalFailure*>(&e) != nullptr) return 3;
  return 1;
}

int run(int argc, const char* const* argv, std::ostream& err) {
  CLI::App app{"phcausal: causal estimands from proportional-hazards models"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  std::uint64_t seed = 0;
  std::string out_dir;
  auto* seed_opt = app.add_option("--seed", seed, "override the scenario seed");
  auto* out_dir_opt = app.add_option("--out-dir", out_dir, "directory for output files");
  app.add_flag("--quiet,-q", g.quiet, "suppress progress messages");

  std::string config;
  std::string data;
  std::string fit_file;
  std::string out;
  std::vector<std::string> covariates;
  std::vector<double> xs;
  std::vector<double> x0s;
  double t = 0.0;
  std::uint64_t n = 1000000;
  bool shared = false;
  std::size_t x_bins = 50;
  std::size_t z_bins = 50;

  auto* sim = app.add_subcommand("simulate", "simulate a cohort from a scenario config");
  sim->add_option("config", config, "scenario JSON")->required();
  sim->add_option("-o,--out", out, "dataset CSV (default <out-dir>/dataset.csv)");

  auto* fit = app.add_subcommand("fit", "fit a Cox model to a dataset");
  fit->add_option("data", data, "dataset CSV")->required();
  fit->add_option("--covariates", covariates, "covariates to fit (default: all)")
      ->delimiter(',');
  fit->add_option("-o,--out", out, "fit JSON (default <out-dir>/fit.json)");

  auto* bd = app.add_subcommand("backdoor", "backdoor estimates from a dataset and a fit");
  bd->add_option("data", data, "dataset CSV")->required();
  bd->add_option("--fit", fit_file, "fit JSON from `phcausal fit`")->required();
  bd->add_option("--x", xs, "exposure value(s)")->delimiter(',');
  bd->add_option("--x0", x0s, "reference exposure value(s)")->delimiter(',');
  bd->add_option("--t", t, "time horizon")->required();
  bd->add_option("-o,--out", out, "result JSON (default <out-dir>/backdoor.json)");

  auto* fd = app.add_subcommand("frontdoor", "frontdoor estimates from a dataset");
  fd->add_option("data", data, "dataset CSV")->required();
  fd->add_option("--x", xs, "exposure value")->expected(1);
  fd->add_option("--x0", x0s, "reference exposure value")->expected(1);
  fd->add_option("--t", t, "time horizon")->required();
  fd->add_option("--x-bins", x_bins, "quantile bins for x")->check(CLI::PositiveNumber);
  fd->add_option("--z-bins", z_bins, "quantile bins for z")->check(CLI::PositiveNumber);
  fd->add_option("-o,--out", out, "result JSON (default <out-dir>/frontdoor.json)");

  auto* orc = app.add_subcommand("oracle", "simulate do(X=x) / do(X=x0)");
  orc->add_option("config", config, "scenario JSON")->required();
  orc->add_option("--x", xs, "intervened exposure")->expected(1);
  orc->add_option("--x0", x0s, "reference exposure")->expected(1);
  orc->add_option("--n", n, "subjects per arm")->check(CLI::PositiveNumber);
  orc->add_option("--t", t, "time horizon")->required();
  orc->add_flag("--shared", shared, "draw both arms from one stream");
  orc->add_option("-o,--out", out, "result JSON (default <out-dir>/oracle.json)");

  auto* experiment = app.add_subcommand("experiment", "run the full pipeline from an experiment config");
  experiment->add_option("config", config, "experiment JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      std::cout << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 2;
  }
  if (seed_opt->count() > 0) g.seed = seed;
  if (out_dir_opt->count() > 0) g.out_dir = out_dir;
  const std::optional<fs::path> out_path =
      out.empty() ? std::nullopt : std::optional<fs::path>(out);
  const Contrast contrast{xs.empty() ? 1.0 : xs.front(), x0s.empty() ? 0.0 : x0s.front()};

  try {
    if (sim->parsed()) return cmd_simulate(config, out_path, g, err);
    if (fit->parsed()) return cmd_fit(data, covariates, out_path, g, err);
    if (bd->parsed()) return cmd_backdoor(data, fit_file, xs, x0s, t, out_path, g, err);
    if (fd->parsed()) return cmd_frontdoor(data, contrast, t, x_bins, z_bins, out_path, g, err);
    if (orc->parsed()) return cmd_oracle(config, contrast, n, t, shared, out_path, g, err);
    if (experiment->parsed()) return cmd_experiment(config, g, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return 2;
}

}  // namespace phcausal::cli
