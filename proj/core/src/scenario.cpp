#include "phcausal/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "phcausal/error.hpp"

namespace phcausal {

using nlohmann::json;

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) {
    throw ValidationError(field + ": " + what);
  }
}

void require_nonnegative(double v, const std::string& field) {
  require(std::isfinite(v) && v >= 0.0, field, "must be finite and nonnegative");
}

void require_positive(double v, const std::string& field) {
  require(std::isfinite(v) && v > 0.0, field, "must be finite and positive");
}

void require_finite(double v, const std::string& field) {
  require(std::isfinite(v), field, "must be finite");
}

const json& member(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) {
    throw ValidationError(path.empty() ? std::string("config: expected an object")
                                       : path + ": expected an object");
  }
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ValidationError((path.empty() ? key : path + "." + key) + ": missing field");
  }
  return *it;
}

double number(const json& obj, const std::string& key, const std::string& path) {
  const json& v = member(obj, key, path);
  if (!v.is_number()) {
    throw ValidationError((path.empty() ? key : path + "." + key) + ": expected a number");
  }
  return v.get<double>();
}

std::uint64_t unsigned_integer(const json& obj, const std::string& key) {
  const json& v = member(obj, key, "");
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw ValidationError(key + ": expected a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

std::string kind_of(const json& v, const std::string& path) {
  if (v.is_string()) {
    return v.get<std::string>();
  }
  const json& k = member(v, "kind", path);
  if (!k.is_string()) {
    throw ValidationError(path + ".kind: expected a string");
  }
  return k.get<std::string>();
}

}  // namespace

void validate(const ScenarioConfig& c) {
  require(c.n_subjects >= 1, "n_subjects", "must be at least 1");
  require_positive(c.horizon_t, "horizon_t");
  require_nonnegative(c.censor_rate, "censor_rate");
  std::visit(
      [](const auto& h) {
        using H = std::decay_t<decltype(h)>;
        if constexpr (std::is_same_v<H, ExponentialHazard>) {
          require_positive(h.rate, "baseline_hazard.rate");
        } else {
          require_positive(h.shape, "baseline_hazard.shape");
          require_positive(h.scale, "baseline_hazard.scale");
        }
      },
      c.baseline_hazard);
  if (c.dag_kind == DagKind::Backdoor) {
    const auto* b = std::get_if<BackdoorCoefficients>(&c.coefficients);
    require(b != nullptr, "coefficients", "backdoor scenario needs backdoor coefficients");
    require_finite(b->a_zx, "coefficients.a_zx");
    require_nonnegative(b->sigma_x, "coefficients.sigma_x");
    require_finite(b->beta_x, "coefficients.beta_x");
    require_finite(b->beta_z, "coefficients.beta_z");
    if (const auto* bz = std::get_if<BernoulliZ>(&c.z_dist)) {
      require(bz->p >= 0.0 && bz->p <= 1.0, "z_dist.p", "must lie in [0, 1]");
    }
  } else {
    const auto* f = std::get_if<FrontdoorCoefficients>(&c.coefficients);
    require(f != nullptr, "coefficients", "frontdoor scenario needs frontdoor coefficients");
    require_finite(f->c_ux, "coefficients.c_ux");
    require_nonnegative(f->sigma_x, "coefficients.sigma_x");
    require_finite(f->alpha, "coefficients.alpha");
    require_nonnegative(f->sigma_z, "coefficients.sigma_z");
    require_finite(f->beta_z, "coefficients.beta_z");
    require_finite(f->beta_u, "coefficients.beta_u");
  }
}

const BackdoorCoefficients& backdoor_coefficients(const ScenarioConfig& config) {
  const auto* b = std::get_if<BackdoorCoefficients>(&config.coefficients);
  if (config.dag_kind != DagKind::Backdoor || b == nullptr) {
    throw InvalidArgument("scenario is not a backdoor scenario");
  }
  return *b;
}

const FrontdoorCoefficients& frontdoor_coefficients(const ScenarioConfig& config) {
  const auto* f = std::get_if<FrontdoorCoefficients>(&config.coefficients);
  if (config.dag_kind != DagKind::Frontdoor || f == nullptr) {
    throw InvalidArgument("scenario is not a frontdoor scenario");
  }
  return *f;
}

double baseline_cumhaz(const BaselineHazard& hazard, double t) {
  if (t <= 0.0) {
    return 0.0;
  }
  if (const auto* e = std::get_if<ExponentialHazard>(&hazard)) {
    return e->rate * t;
  }
  const auto& w = std::get<WeibullHazard>(hazard);
  return std::pow(t / w.scale, w.shape);
}

double inverse_survival_time(double u, double eta, const BaselineHazard& hazard) {
  if (!(u > 0.0 && u < 1.0)) {
    throw InvalidArgument("inverse_survival_time: u must lie in (0, 1)");
  }
  if (!std::isfinite(eta)) {
    throw InvalidArgument("inverse_survival_time: eta must be finite");
  }
  // -ln(1-u) * exp(-eta) is the target value of H_0(T).
  const double target = -std::log1p(-u) * std::exp(-eta);
  if (const auto* e = std::get_if<ExponentialHazard>(&hazard)) {
    return target / e->rate;
  }
  const auto& w = std::get<WeibullHazard>(hazard);
  return w.scale * std::pow(target, 1.0 / w.shape);
}

ScenarioConfig parse_scenario(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("scenario: malformed JSON: ") + e.what());
  }
  ScenarioConfig c;
  const json& kind = member(j, "dag_kind", "");
  require(kind.is_string(), "dag_kind", "expected \"Backdoor\" or \"Frontdoor\"");
  if (kind == "Backdoor") {
    c.dag_kind = DagKind::Backdoor;
  } else if (kind == "Frontdoor") {
    c.dag_kind = DagKind::Frontdoor;
  } else {
    throw ValidationError("dag_kind: expected \"Backdoor\" or \"Frontdoor\"");
  }
  c.n_subjects = unsigned_integer(j, "n_subjects");
  c.seed = unsigned_integer(j, "seed");
  c.horizon_t = number(j, "horizon_t", "");
  c.censor_rate = j.contains("censor_rate") ? number(j, "censor_rate", "") : 0.0;

  const json& bh = member(j, "baseline_hazard", "");
  const std::string bh_kind = kind_of(bh, "baseline_hazard");
  if (bh_kind == "Exponential") {
    c.baseline_hazard = ExponentialHazard{number(bh, "rate", "baseline_hazard")};
  } else if (bh_kind == "Weibull") {
    c.baseline_hazard = WeibullHazard{number(bh, "shape", "baseline_hazard"),
                                      number(bh, "scale", "baseline_hazard")};
  } else {
    throw ValidationError("baseline_hazard.kind: expected \"Exponential\" or \"Weibull\"");
  }

  const json& co = member(j, "coefficients", "");
  if (c.dag_kind == DagKind::Backdoor) {
    c.coefficients = BackdoorCoefficients{
        number(co, "a_zx", "coefficients"), number(co, "sigma_x", "coefficients"),
        number(co, "beta_x", "coefficients"), number(co, "beta_z", "coefficients")};
    if (j.contains("z_dist")) {
      const json& zd = j["z_dist"];
      const std::string zk = kind_of(zd, "z_dist");
      if (zk == "StandardNormal") {
        c.z_dist = StandardNormalZ{};
      } else if (zk == "Bernoulli") {
        c.z_dist = BernoulliZ{number(zd, "p", "z_dist")};
      } else {
        throw ValidationError("z_dist.kind: expected \"StandardNormal\" or \"Bernoulli\"");
      }
    }
  } else {
    c.coefficients = FrontdoorCoefficients{
        number(co, "c_ux", "coefficients"),   number(co, "sigma_x", "coefficients"),
        number(co, "alpha", "coefficients"),  number(co, "sigma_z", "coefficients"),
        number(co, "beta_z", "coefficients"), number(co, "beta_u", "coefficients")};
  }
  validate(c);
  return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open scenario file '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string scenario_to_json(const ScenarioConfig& c) {
  json j;
  j["dag_kind"] = c.dag_kind == DagKind::Backdoor ? "Backdoor" : "Frontdoor";
  j["n_subjects"] = c.n_subjects;
  j["seed"] = c.seed;
  if (const auto* e = std::get_if<ExponentialHazard>(&c.baseline_hazard)) {
    j["baseline_hazard"] = {{"kind", "Exponential"}, {"rate", e->rate}};
  } else {
    const auto& w = std::get<WeibullHazard>(c.baseline_hazard);
    j["baseline_hazard"] = {{"kind", "Weibull"}, {"shape", w.shape}, {"scale", w.scale}};
  }
  j["horizon_t"] = c.horizon_t;
  j["censor_rate"] = c.censor_rate;
  if (const auto* b = std::get_if<BackdoorCoefficients>(&c.coefficients)) {
    j["coefficients"] = {{"a_zx", b->a_zx},
                         {"sigma_x", b->sigma_x},
                         {"beta_x", b->beta_x},
                         {"beta_z", b->beta_z}};
    if (const auto* bz = std::get_if<BernoulliZ>(&c.z_dist)) {
      j["z_dist"] = {{"kind", "Bernoulli"}, {"p", bz->p}};
    } else {
      j["z_dist"] = {{"kind", "StandardNormal"}};
    }
  } else {
    const auto& f = std::get<FrontdoorCoefficients>(c.coefficients);
    j["coefficients"] = {{"c_ux", f.c_ux},     {"sigma_x", f.sigma_x}, {"alpha", f.alpha},
                         {"sigma_z", f.sigma_z}, {"beta_z", f.beta_z},   {"beta_u", f.beta_u}};
  }
  return j.dump(2);
}

}  // namespace phcausal
