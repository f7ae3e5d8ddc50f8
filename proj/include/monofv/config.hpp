#pragma once

#include "monofv/problems.hpp"

#include <filesystem>
#include <string>

namespace monofv {

/// JSON text for one case definition.
std::string case_to_json(const CaseConfig& c);

/// Parse a case definition. Missing keys keep their defaults, except that a
/// "base" key starts from the named catalog case and applies the remaining
/// keys as overrides (e.g. {"base": "minmax", "alpha": 1e-6, "sizes": [16]}).
CaseConfig case_from_json(const std::string& text);

CaseConfig load_case_file(const std::filesystem::path& path);

/// Resolve a --case argument: catalog name or path to a JSON file.
CaseConfig resolve_case(const std::string& name_or_path);

}  // namespace monofv
