#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "risdeploy/scenario.hpp"
#include "risdeploy/serving.hpp"

namespace risdeploy {

// File-system failures; the message carries the offending path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string_view tool_version();

// Locale-independent number formatting.
std::string format_value(double v);  // 10 significant digits
std::string format_rate(double v);   // 6 significant digits

// '#'-prefixed preamble: tool version, command, seed, RNG identity, kernel,
// near-field check and the one-line JSON echo of the scenario.
std::string output_header(std::string_view command, const ScenarioFile& scenario,
                          const std::vector<std::pair<std::string, std::string>>& extra = {});

// Recovers the scenario from a file's "# scenario: " echo line.
ScenarioFile parse_header_echo(std::string_view file_contents);

std::string near_field_note(const ScenarioFile& scenario);

// Rasters: header row "y\x,<x0>,<x1>,...", then one row per y (ascending).
std::string status_raster_csv(const FieldMap& field);
std::string rate_raster_csv(const FieldMap& field);

void write_text_file(const std::filesystem::path& path, std::string_view contents);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace risdeploy
