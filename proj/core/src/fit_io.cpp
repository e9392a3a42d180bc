#include "phcausal/fit_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "phcausal/error.hpp"

namespace phcausal {

using nlohmann::json;

std::string fit_to_json(const CoxFit& fit) {
  json j;
  j["covariate_names"] = fit.covariate_names;
  j["beta"] = fit.beta;
  json cov = json::array();
  for (Eigen::Index r = 0; r < fit.covariance.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < fit.covariance.cols(); ++c) {
      row.push_back(fit.covariance(r, c));
    }
    cov.push_back(std::move(row));
  }
  j["covariance"] = std::move(cov);
  j["baseline_x0"] = fit.baseline_x0;
  j["iterations"] = fit.iterations;
  j["final_score_norm"] = fit.final_score_norm;
  j["converged"] = fit.converged;
  j["n_subjects"] = fit.n_subjects;
  j["n_events"] = fit.n_events;
  j["baseline_cumhaz"] = {{"knots", fit.baseline_cumhaz.knots()},
                          {"values", fit.baseline_cumhaz.values()}};
  return j.dump(2);
}

CoxFit parse_fit(std::string_view json_text) {
  CoxFit fit;
  try {
    const json j = json::parse(json_text);
    fit.covariate_names = j.at("covariate_names").get<std::vector<std::string>>();
    fit.beta = j.at("beta").get<std::vector<double>>();
    fit.baseline_x0 = j.at("baseline_x0").get<std::vector<double>>();
    const auto p = fit.beta.size();
    if (fit.covariate_names.size() != p || fit.baseline_x0.size() != p) {
      throw ValidationError("fit: beta, covariate_names and baseline_x0 differ in length");
    }
    const auto& cov = j.at("covariance");
    if (cov.size() != p) {
      throw ValidationError("fit.covariance: expected " + std::to_string(p) + " rows");
    }
    fit.covariance.resize(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    for (std::size_t r = 0; r < p; ++r) {
      const auto row = cov[r].get<std::vector<double>>();
      if (row.size() != p) {
        throw ValidationError("fit.covariance: row " + std::to_string(r) + " has wrong length");
      }
      for (std::size_t c = 0; c < p; ++c) {
        fit.covariance(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
      }
    }
    fit.iterations = j.at("iterations").get<int>();
    fit.final_score_norm = j.at("final_score_norm").get<double>();
    fit.converged = j.at("converged").get<bool>();
    fit.n_subjects = j.at("n_subjects").get<std::size_t>();
    fit.n_events = j.at("n_events").get<std::size_t>();
    const auto& h0 = j.at("baseline_cumhaz");
    fit.baseline_cumhaz = StepFunction(h0.at("knots").get<std::vector<double>>(),
                                       h0.at("values").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw ValidationError(std::string("fit file: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ValidationError(std::string("fit.baseline_cumhaz: ") + e.what());
  }
  return fit;
}

void save_fit(const CoxFit& fit, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ValidationError("cannot open '" + path.string() + "' for writing");
  }
  out << fit_to_json(fit) << '\n';
}

CoxFit load_fit(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("cannot open fit file '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_fit(buf.str());
}

}  // namespace phcausal
