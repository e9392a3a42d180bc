#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "phcausal/scenario.hpp"

namespace phcausal {

class LatentKey;

namespace detail {
/// Only the simulator, file I/O and the oracle mint keys.
LatentKey make_latent_key();
}  // namespace detail

/// Capability token for reading the unmeasured confounder U. Estimators never
/// hold one, so "unmeasured" is enforced by the type system.
class LatentKey {
 private:
  LatentKey() = default;
  friend LatentKey detail::make_latent_key();
};

class SubjectRecord {
 public:
  SubjectRecord() = default;
  SubjectRecord(double time, bool event, std::vector<double> x, std::vector<double> z)
      : time(time), event(event), x(std::move(x)), z(std::move(z)) {}

  double time = 0.0;
  bool event = false;
  std::vector<double> x;
  std::vector<double> z;

  bool has_latent() const noexcept { return u_latent_.has_value(); }
  double latent(LatentKey) const { return u_latent_.value(); }
  void set_latent(double u) { u_latent_ = u; }

  friend bool operator==(const SubjectRecord&, const SubjectRecord&) = default;

 private:
  std::optional<double> u_latent_;
};

using Provenance = std::variant<std::monostate, ScenarioConfig, std::filesystem::path>;

class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<SubjectRecord> records, std::vector<std::string> x_names,
          std::vector<std::string> z_names, Provenance provenance = {});

  const std::vector<SubjectRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  std::size_t event_count() const noexcept;
  bool has_latent() const noexcept;

  const std::vector<std::string>& x_names() const noexcept { return x_names_; }
  const std::vector<std::string>& z_names() const noexcept { return z_names_; }
  /// x columns followed by z columns.
  std::vector<std::string> covariate_names() const;
  const Provenance& provenance() const noexcept { return provenance_; }

  bool has_column(const std::string& name) const;
  /// Values of a named covariate column; throws InvalidArgument if unknown.
  std::vector<double> column(const std::string& name) const;

 private:
  std::vector<SubjectRecord> records_;
  std::vector<std::string> x_names_;
  std::vector<std::string> z_names_;
  Provenance provenance_;
};

/// CSV with header `time,event,<x cols>,<z cols>[,u_latent]`. Scalar covariates
/// are named x and z; vectors expand to x0,x1,... and z0,z1,...
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);
std::string format_dataset_csv(const Dataset& dataset);

/// Throws ParseError (with line number) on malformed rows and ValidationError
/// on non-finite values, nonpositive times or an empty body.
Dataset load_dataset(const std::filesystem::path& path);
Dataset parse_dataset_csv(std::string_view text);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

}  // namespace phcausal
