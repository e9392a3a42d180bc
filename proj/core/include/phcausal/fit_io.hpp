#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "phcausal/coxph.hpp"

namespace phcausal {

/// JSON form of a CoxFit, as written by `phcausal fit`.
std::string fit_to_json(const CoxFit& fit);
CoxFit parse_fit(std::string_view json_text);

void save_fit(const CoxFit& fit, const std::filesystem::path& path);
CoxFit load_fit(const std::filesystem::path& path);

}  // namespace phcausal
