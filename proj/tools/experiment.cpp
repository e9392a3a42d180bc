#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "phcausal/backdoor.hpp"
#include "phcausal/dataset.hpp"
#include "phcausal/error.hpp"
#include "phcausal/frontdoor.hpp"
#include "phcausal/oracle.hpp"
#include "phcausal/simulate.hpp"

namespace phcausal::cli {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
  throw ValidationError(field + ": " + what);
}

double number_at(const json& obj, const std::string& key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) invalid(path + key, "missing field");
  if (!it->is_number()) invalid(path + key, "expected a number");
  return it->get<double>();
}

json fit_summary(const CoxFit& fit) {
  json j;
  j["covariate_names"] = fit.covariate_names;
  j["beta"] = fit.beta;
  std::vector<double> se;
  for (std::size_t k = 0; k < fit.beta.size(); ++k) se.push_back(fit.std_error(k));
  j["std_err"] = se;
  j["iterations"] = fit.iterations;
  j["converged"] = fit.converged;
  j["final_score_norm"] = fit.final_score_norm;
  j["n_subjects"] = fit.n_subjects;
  j["n_events"] = fit.n_events;
  return j;
}

json approx_summary(const ApproxErrorReport& r, double t) {
  return {{"t", t},
          {"max_cumhaz", r.max_cumhaz},
          {"mean_cumhaz", r.mean_cumhaz},
          {"max_relative_error", r.max_relative_error},
          {"exceeds_threshold", r.exceeds_threshold},
          {"bound_holds", r.bound_holds}};
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json row_json(const EstimateRow& r) {
  return {{"method", r.method},
          {"x", optional_json(r.x)},
          {"x0", optional_json(r.x0)},
          {"t", r.t},
          {"estimate", r.estimate},
          {"std_err", optional_json(r.std_err)},
          {"oracle_value", optional_json(r.oracle_value)},
          {"oracle_se", optional_json(r.oracle_se)},
          {"rel_err", optional_json(r.rel_err)},
          {"rarity_flag", r.rarity_flag}};
}

// Oracle populations shared by every row of one experiment. Each distinct
// exposure value gets its own stream family, the natural course another.
class OracleTable {
 public:
  OracleTable(const ExperimentConfig& cfg) : cfg_(cfg) {
    for (const auto& c : cfg.contrasts) {
      for (double v : {c.x, c.x0}) {
        if (std::find(values_.begin(), values_.end(), v) == values_.end()) values_.push_back(v);
      }
    }
    if (!enabled()) return;
    const auto& sc = cfg.scenario;
    for (std::size_t k = 0; k < values_.size(); ++k) {
      do_.push_back(
          simulate_do_grid(sc, values_[k], cfg.oracle_n, sc.seed, cfg.horizon_grid, k + 1));
    }
    for (double t : cfg.horizon_grid) {
      factual_.push_back(simulate_factual(sc, cfg.oracle_n, sc.seed, t, 0));
    }
  }

  bool enabled() const { return cfg_.oracle_n > 0; }
  const std::vector<double>& values() const { return values_; }

  const OracleResult& intervened(double x, std::size_t t_index) const {
    const auto k = static_cast<std::size_t>(std::find(values_.begin(), values_.end(), x) -
                                            values_.begin());
    return do_[k][t_index];
  }
  const OracleResult& factual(std::size_t t_index) const { return factual_[t_index]; }

 private:
  const ExperimentConfig& cfg_;
  std::vector<double> values_;
  std::vector<std::vector<OracleResult>> do_;
  std::vector<OracleResult> factual_;
};

void attach_oracle(EstimateRow& row, double value, std::optional<double> se) {
  row.oracle_value = value;
  row.oracle_se = se;
  if (value != 0.0) row.rel_err = std::abs(row.estimate - value) / std::abs(value);
}

void add_ratio_rows(std::vector<EstimateRow>& rows, const OracleTable& oracle, const Contrast& c,
                    std::size_t ti, double t, const std::string& method, double estimate,
                    std::optional<double> se, bool rarity) {
  EstimateRow row{method, c.x, c.x0, t, estimate, se, {}, {}, {}, rarity};
  if (oracle.enabled()) {
    const OracleRatio r = oracle_ratio(oracle.intervened(c.x, ti), oracle.intervened(c.x0, ti));
    attach_oracle(row, r.ratio, r.standard_error);
  }
  rows.push_back(row);
}

void add_oracle_ratio_row(std::vector<EstimateRow>& rows, const OracleTable& oracle,
                          const Contrast& c, std::size_t ti, double t) {
  if (!oracle.enabled()) return;
  const OracleRatio r = oracle_ratio(oracle.intervened(c.x, ti), oracle.intervened(c.x0, ti));
  rows.push_back({"oracle", c.x, c.x0, t, r.ratio, r.standard_error, {}, {}, {}, false});
}

EstimateRow naive_row(const CoxFit& naive, const Contrast& c, double t) {
  const double rr = std::exp(naive.beta[0] * (c.x - c.x0));
  const double se = rr * std::abs(c.x - c.x0) * naive.std_error(0);
  return {"naive_rr", c.x, c.x0, t, rr, se, {}, {}, {}, false};
}

void run_backdoor(const ExperimentConfig& cfg, const Dataset& data, const OracleTable& oracle,
                  std::vector<EstimateRow>& rows, json& report) {
  const CoxFit fit = fit_cox(data);
  FitOptions naive_opts;
  naive_opts.covariates = data.x_names();
  const CoxFit naive = fit_cox(data, naive_opts);
  report["fits"] = {{"adjusted", fit_summary(fit)}, {"naive", fit_summary(naive)}};

  json per_t = json::array();
  for (std::size_t ti = 0; ti < cfg.horizon_grid.size(); ++ti) {
    const double t = cfg.horizon_grid[ti];
    const BackdoorSummary s = compute_az(data, fit, data.z_names(), t);
    per_t.push_back({{"t", t},
                     {"a_z", s.a_z},
                     {"mean_joint_risk", s.mean_joint_risk},
                     {"max_cumhaz", s.max_cumhaz},
                     {"rarity_warning", s.rarity_warning},
                     {"approximation", approx_summary(approx_error_report(fit, data, t), t)}});

    for (const auto& c : cfg.contrasts) {
      const double x[] = {c.x};
      const double x0[] = {c.x0};
      const CausalEstimate rr = causal_rr_estimate(fit, s.roles, x, x0);
      add_ratio_rows(rows, oracle, c, ti, t, "causal_rr", rr.value, rr.std_err,
                     s.rarity_warning);
      EstimateRow nv = naive_row(naive, c, t);
      if (oracle.enabled()) {
        const OracleRatio r =
            oracle_ratio(oracle.intervened(c.x, ti), oracle.intervened(c.x0, ti));
        attach_oracle(nv, r.ratio, r.standard_error);
      }
      rows.push_back(nv);
      add_oracle_ratio_row(rows, oracle, c, ti, t);
    }
    for (double v : oracle.values()) {
      const double x[] = {v};
      const CausalEstimate cdf = do_cdf(fit, s, x, t);
      EstimateRow row{"do_cdf", v, {}, t, cdf.value, {}, {}, {}, {}, cdf.rarity_warning};
      EstimateRow ch{"do_cumhaz", v, {}, t, do_cumhaz(fit, s, x, t), {}, {}, {}, {},
                     s.rarity_warning};
      if (oracle.enabled()) {
        const OracleResult& o = oracle.intervened(v, ti);
        attach_oracle(row, o.incidence, o.standard_error);
        attach_oracle(ch, o.nelson_aalen, std::nullopt);
      }
      rows.push_back(row);
      rows.push_back(ch);
    }
    std::vector<double> seen;
    for (const auto& c : cfg.contrasts) {
      if (std::find(seen.begin(), seen.end(), c.x0) != seen.end()) continue;
      seen.push_back(c.x0);
      const double x0[] = {c.x0};
      EstimateRow row{"paf", {}, c.x0, t, paf(data, fit, s, x0), {}, {}, {}, {},
                      s.rarity_warning};
      if (oracle.enabled()) {
        const OraclePaf o = oracle_paf(oracle.factual(ti), oracle.intervened(c.x0, ti));
        attach_oracle(row, o.paf, o.standard_error);
      }
      rows.push_back(row);
    }
  }
  report["backdoor"] = per_t;
}

void run_frontdoor(const ExperimentConfig& cfg, const Dataset& data, const OracleTable& oracle,
                   std::vector<EstimateRow>& rows, json& report) {
  const FrontdoorFit ff = fit_frontdoor(data);
  FitOptions naive_opts;
  naive_opts.covariates = data.x_names();
  const CoxFit naive = fit_cox(data, naive_opts);
  report["fits"] = {{"adjusted", fit_summary(ff.cox)}, {"naive", fit_summary(naive)}};
  const auto& p = ff.params;
  json fd = {{"beta_x", p.beta_x},     {"beta_z", p.beta_z},   {"alpha", p.alpha},
             {"mu_x", p.mu_x},         {"sigma_x", p.sigma_x}, {"sigma_z", p.sigma_z},
             {"alpha_se", ff.alpha_se}, {"beta_z_se", ff.beta_z_se}};
  json per_t = json::array();
  json skipped = json::array();

  const std::vector<double> xs = data.column(data.x_names().front());
  const auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
  for (std::size_t ti = 0; ti < cfg.horizon_grid.size(); ++ti) {
    const double t = cfg.horizon_grid[ti];
    const ApproxErrorReport approx = approx_error_report(ff.cox, data, t);
    const bool rare_violated = approx.max_cumhaz > kRarityThreshold;
    per_t.push_back({{"t", t},
                     {"h0", ff.cox.baseline_cumhaz(t)},
                     {"approximation", approx_summary(approx, t)}});
    for (const auto& c : cfg.contrasts) {
      add_ratio_rows(rows, oracle, c, ti, t, "frontdoor_rr", frontdoor_causal_rr(p, c.x, c.x0),
                     frontdoor_causal_rr_se(ff, c.x, c.x0), rare_violated);
      add_ratio_rows(rows, oracle, c, ti, t, "mediation_rr", mediation_indirect_rr(p, c.x, c.x0),
                     frontdoor_causal_rr_se(ff, c.x, c.x0), rare_violated);
      EstimateRow nv = naive_row(naive, c, t);
      if (oracle.enabled()) {
        const OracleRatio r =
            oracle_ratio(oracle.intervened(c.x, ti), oracle.intervened(c.x0, ti));
        attach_oracle(nv, r.ratio, r.standard_error);
      }
      rows.push_back(nv);
      add_oracle_ratio_row(rows, oracle, c, ti, t);
    }
    for (double v : oracle.values()) {
      const CausalEstimate g = frontdoor_do_cdf_gaussian(p, ff.cox.baseline_cumhaz(t), v);
      EstimateRow gr{"frontdoor_do_cdf_gaussian", v, {}, t, g.value, {}, {}, {}, {},
                     g.rarity_warning};
      std::optional<EstimateRow> er;
      if (v >= *xmin && v <= *xmax) {
        try {
          const CausalEstimate e = frontdoor_do_cdf_empirical(data, ff.cox, v, t);
          er = EstimateRow{"frontdoor_do_cdf_empirical", v, {}, t, e.value, {}, {}, {}, {},
                           e.rarity_warning};
        } catch (const EmptyStratumError& e) {
          skipped.push_back({{"x", v}, {"t", t}, {"reason", e.what()}});
        }
      } else {
        skipped.push_back({{"x", v}, {"t", t}, {"reason", "x outside observed support"}});
      }
      if (oracle.enabled()) {
        const OracleResult& o = oracle.intervened(v, ti);
        attach_oracle(gr, o.incidence, o.standard_error);
        if (er) attach_oracle(*er, o.incidence, o.standard_error);
      }
      rows.push_back(gr);
      if (er) rows.push_back(*er);
    }
  }
  fd["per_t"] = per_t;
  fd["empirical_skipped"] = skipped;
  report["frontdoor"] = fd;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view json_text,
                                         const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("experiment config: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) invalid("experiment config", "expected an object");
  ExperimentConfig cfg;

  const auto sc = j.find("scenario");
  if (sc == j.end()) invalid("scenario", "missing field");
  try {
    if (sc->is_string()) {
      std::filesystem::path p = sc->get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      cfg.scenario = load_scenario(p);
    } else {
      cfg.scenario = parse_scenario(sc->dump());
    }
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("scenario.") + e.what());
  }

  const auto cs = j.find("contrasts");
  if (cs == j.end()) invalid("contrasts", "missing field");
  if (!cs->is_array() || cs->empty()) invalid("contrasts", "expected a nonempty array");
  for (std::size_t i = 0; i < cs->size(); ++i) {
    const std::string path = "contrasts[" + std::to_string(i) + "].";
    const json& c = (*cs)[i];
    if (!c.is_object()) invalid(path.substr(0, path.size() - 1), "expected an object");
    Contrast con{number_at(c, "x", path), number_at(c, "x0", path)};
    if (!std::isfinite(con.x) || !std::isfinite(con.x0)) invalid(path + "x", "must be finite");
    cfg.contrasts.push_back(con);
  }

  const auto hg = j.find("horizon_grid");
  if (hg == j.end()) invalid("horizon_grid", "missing field");
  if (!hg->is_array() || hg->empty()) invalid("horizon_grid", "expected a nonempty array");
  for (std::size_t i = 0; i < hg->size(); ++i) {
    const std::string field = "horizon_grid[" + std::to_string(i) + "]";
    if (!(*hg)[i].is_number()) invalid(field, "expected a number");
    const double t = (*hg)[i].get<double>();
    if (!(t > 0.0) || t > cfg.scenario.horizon_t) {
      invalid(field, "must lie in (0, scenario.horizon_t]");
    }
    cfg.horizon_grid.push_back(t);
  }

  if (const auto on = j.find("oracle_n"); on != j.end()) {
    if (!on->is_number_integer() || on->get<std::int64_t>() < 0) {
      invalid("oracle_n", "expected a nonnegative integer");
    }
    cfg.oracle_n = on->get<std::uint64_t>();
  }
  if (const auto od = j.find("output_dir"); od != j.end()) {
    if (!od->is_string() || od->get<std::string>().empty()) {
      invalid("output_dir", "expected a nonempty string");
    }
    cfg.output_dir = od->get<std::string>();
  }
  if (const auto em = j.find("emit"); em != j.end()) {
    if (!em->is_array() || em->empty()) invalid("emit", "expected a nonempty array");
    cfg.emit_csv = false;
    cfg.emit_json = false;
    for (const auto& e : *em) {
      if (e == "csv") {
        cfg.emit_csv = true;
      } else if (e == "json") {
        cfg.emit_json = true;
      } else {
        invalid("emit", "entries must be \"csv\" or \"json\"");
      }
    }
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open experiment config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str(), path.parent_path());
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg.scenario);
  const Dataset data = generate(cfg.scenario);
  const OracleTable oracle(cfg);

  ExperimentResult out;
  json report;
  report["scenario"] = json::parse(scenario_to_json(cfg.scenario));
  report["oracle_n"] = cfg.oracle_n;
  report["horizon_grid"] = cfg.horizon_grid;
  json contrasts = json::array();
  for (const auto& c : cfg.contrasts) contrasts.push_back({{"x", c.x}, {"x0", c.x0}});
  report["contrasts"] = contrasts;
  report["dataset"] = {
      {"n", data.size()},
      {"events", data.event_count()},
      {"event_fraction", static_cast<double>(data.event_count()) / static_cast<double>(data.size())}};

  if (cfg.scenario.dag_kind == DagKind::Backdoor) {
    run_backdoor(cfg, data, oracle, out.rows, report);
  } else {
    run_frontdoor(cfg, data, oracle, out.rows, report);
  }
  json rows = json::array();
  for (const auto& r : out.rows) rows.push_back(row_json(r));
  report["estimates"] = rows;
  out.report_json = report.dump(2) + "\n";
  return out;
}

std::string format_estimates_csv(const std::vector<EstimateRow>& rows) {
  const auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : ""; };
  std::string out = "method,x,x0,t,estimate,std_err,oracle_value,oracle_se,rel_err,rarity_flag\n";
  for (const auto& r : rows) {
    out += r.method + ',' + opt(r.x) + ',' + opt(r.x0) + ',' + format_double(r.t) + ',' +
           format_double(r.estimate) + ',' + opt(r.std_err) + ',' + opt(r.oracle_value) + ',' +
           opt(r.oracle_se) + ',' + opt(r.rel_err) + ',' + (r.rarity_flag ? "1" : "0") + '\n';
  }
  return out;
}

}  // namespace phcausal::cli
