#include "phcausal/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "phcausal/error.hpp"

namespace phcausal {

LatentKey detail::make_latent_key() { return LatentKey{}; }

Dataset::Dataset(std::vector<SubjectRecord> records, std::vector<std::string> x_names,
                 std::vector<std::string> z_names, Provenance provenance)
    : records_(std::move(records)),
      x_names_(std::move(x_names)),
      z_names_(std::move(z_names)),
      provenance_(std::move(provenance)) {
  if (records_.empty()) {
    throw ValidationError("dataset is empty");
  }
  const bool latent = records_.front().has_latent();
  for (const auto& r : records_) {
    if (r.x.size() != x_names_.size() || r.z.size() != z_names_.size()) {
      throw ValidationError("dataset rows have inconsistent covariate dimensions");
    }
    if (r.has_latent() != latent) {
      throw ValidationError("u_latent must be present on every row or on none");
    }
    if (!std::isfinite(r.time) || r.time <= 0.0) {
      throw ValidationError("follow-up time must be finite and positive");
    }
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(r.x.begin(), r.x.end(), finite) ||
        !std::all_of(r.z.begin(), r.z.end(), finite)) {
      throw ValidationError("covariates must be finite");
    }
  }
}

std::size_t Dataset::event_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(records_.begin(), records_.end(), [](const auto& r) { return r.event; }));
}

bool Dataset::has_latent() const noexcept {
  return !records_.empty() && records_.front().has_latent();
}

std::vector<std::string> Dataset::covariate_names() const {
  std::vector<std::string> names = x_names_;
  names.insert(names.end(), z_names_.begin(), z_names_.end());
  return names;
}

bool Dataset::has_column(const std::string& name) const {
  return std::find(x_names_.begin(), x_names_.end(), name) != x_names_.end() ||
         std::find(z_names_.begin(), z_names_.end(), name) != z_names_.end();
}

std::vector<double> Dataset::column(const std::string& name) const {
  std::vector<double> out;
  out.reserve(records_.size());
  if (auto it = std::find(x_names_.begin(), x_names_.end(), name); it != x_names_.end()) {
    const auto k = static_cast<std::size_t>(it - x_names_.begin());
    for (const auto& r : records_) out.push_back(r.x[k]);
    return out;
  }
  if (auto it = std::find(z_names_.begin(), z_names_.end(), name); it != z_names_.end()) {
    const auto k = static_cast<std::size_t>(it - z_names_.begin());
    for (const auto& r : records_) out.push_back(r.z[k]);
    return out;
  }
  throw InvalidArgument("unknown covariate column '" + name + "'");
}

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) {
    throw InvalidArgument("cannot format value");
  }
  return std::string(buf, end);
}

std::string format_dataset_csv(const Dataset& dataset) {
  std::string out = "time,event";
  for (const auto& n : dataset.x_names()) out += "," + n;
  for (const auto& n : dataset.z_names()) out += "," + n;
  const bool latent = dataset.has_latent();
  if (latent) out += ",u_latent";
  out += '\n';
  const LatentKey key = detail::make_latent_key();
  for (const auto& r : dataset.records()) {
    out += format_double(r.time);
    out += r.event ? ",1" : ",0";
    for (double v : r.x) (out += ',') += format_double(v);
    for (double v : r.z) (out += ',') += format_double(v);
    if (latent) (out += ',') += format_double(r.latent(key));
    out += '\n';
  }
  return out;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ValidationError("cannot open '" + path.string() + "' for writing");
  }
  out << format_dataset_csv(dataset);
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_number(std::string_view field, std::size_t line, const std::string& column) {
  while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
  while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError(line, "column '" + column + "': not a number: '" + std::string(field) + "'");
  }
  if (!std::isfinite(value)) {
    throw ValidationError("line " + std::to_string(line) + ": column '" + column +
                          "' is not finite");
  }
  return value;
}

}  // namespace

Dataset parse_dataset_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  {
    std::size_t start = 0;
    while (start < text.size()) {
      std::size_t nl = text.find('\n', start);
      if (nl == std::string_view::npos) nl = text.size();
      std::string_view line = text.substr(start, nl - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      lines.push_back(line);
      start = nl + 1;
    }
  }
  if (lines.empty()) {
    throw ParseError(1, "missing header");
  }
  const auto header = split_fields(lines[0]);
  if (header.size() < 2 || header[0] != "time" || header[1] != "event") {
    throw ParseError(1, "header must start with 'time,event'");
  }
  enum class Role { X, Z, Latent };
  std::vector<Role> roles;
  std::vector<std::string> names;
  std::vector<std::string> x_names;
  std::vector<std::string> z_names;
  bool latent = false;
  for (std::size_t k = 2; k < header.size(); ++k) {
    const std::string name(header[k]);
    if (name == "u_latent") {
      if (latent || k + 1 != header.size()) {
        throw ParseError(1, "u_latent must appear once, as the last column");
      }
      latent = true;
      roles.push_back(Role::Latent);
    } else if (!name.empty() && name[0] == 'x' && z_names.empty()) {
      x_names.push_back(name);
      roles.push_back(Role::X);
    } else if (!name.empty() && name[0] == 'z') {
      z_names.push_back(name);
      roles.push_back(Role::Z);
    } else {
      throw ParseError(1, "unexpected column '" + name + "'");
    }
    names.push_back(name);
  }

  std::vector<SubjectRecord> records;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (lines[i].empty()) {
      if (i + 1 == lines.size()) break;
      throw ParseError(line_no, "blank line");
    }
    const auto fields = split_fields(lines[i]);
    if (fields.size() != header.size()) {
      throw ParseError(line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                                    std::to_string(fields.size()));
    }
    SubjectRecord r;
    r.time = parse_number(fields[0], line_no, "time");
    if (r.time <= 0.0) {
      throw ValidationError("line " + std::to_string(line_no) + ": time must be positive");
    }
    if (fields[1] == "1") {
      r.event = true;
    } else if (fields[1] == "0") {
      r.event = false;
    } else {
      throw ParseError(line_no, "event must be 0 or 1");
    }
    for (std::size_t k = 0; k < roles.size(); ++k) {
      const double v = parse_number(fields[k + 2], line_no, names[k]);
      switch (roles[k]) {
        case Role::X: r.x.push_back(v); break;
        case Role::Z: r.z.push_back(v); break;
        case Role::Latent: r.set_latent(v); break;
      }
    }
    records.push_back(std::move(r));
  }
  if (records.empty()) {
    throw ValidationError("dataset file has a header but no rows");
  }
  return Dataset(std::move(records), std::move(x_names), std::move(z_names));
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("cannot open dataset '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  Dataset parsed = parse_dataset_csv(buf.str());
  return Dataset(parsed.records(), parsed.x_names(), parsed.z_names(), path);
}

}  // namespace phcausal
