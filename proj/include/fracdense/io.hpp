#pragma once

// JSON and CSV serialization of inputs and reports. Parse failures raise
// InputError so the CLI reports them with exit code 2.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracdense/density.hpp"
#include "fracdense/fraclap.hpp"
#include "fracdense/kernel_extension.hpp"
#include "fracdense/polyapprox.hpp"

namespace fracdense {

using Json = nlohmann::ordered_json;

/// Parses text as JSON, rethrowing syntax errors as InputError.
Json parse_json(const std::string& text, const std::string& what);
Json read_json_file(const std::filesystem::path& path);

/// {"ball": {"center", "radius"} (optional), "bumps": [{"center", "half_width", "amplitude"}]}
struct ExteriorInput {
  Ball ball{};
  ExteriorData data{};
};
ExteriorInput exterior_from_json(const Json& j);
Json to_json(const Ball& ball, const ExteriorData& data);

/// {"n": 1, "coeffs": [[degree, value], ...]}
Polynomial polynomial_from_json(const Json& j);
Json to_json(const Polynomial& p);

Json to_json(const MollifierPlan& plan);
Json to_json(const ResidualReport& report);
Json to_json(const SpanSolution& sol);
Json to_json(const ApproximationReport& report, bool include_timing = false);

/// %.17g formatting used by every CSV writer.
std::string format_double(double v);

/// Comma-separated table with a header row.
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows);

/// Writes through a temporary file in the same directory and renames it into
/// place, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// JSON text with two-space indentation and a trailing newline.
std::string dump_json(const Json& j);

}  // namespace fracdense
