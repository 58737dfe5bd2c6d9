#include "risdeploy/output.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "risdeploy/cascade.hpp"
#include "risdeploy/channel.hpp"
#include "risdeploy/errors.hpp"
#include "risdeploy/rng.hpp"

#ifndef RISDEPLOY_VERSION
#define RISDEPLOY_VERSION "dev"
#endif

namespace risdeploy {

namespace {

constexpr std::string_view kEchoPrefix = "# scenario: ";

}  // namespace

std::string_view tool_version() { return RISDEPLOY_VERSION; }

std::string format_value(double v) { return fmt::format("{:.10g}", v); }
std::string format_rate(double v) { return fmt::format("{:.6g}", v); }

std::string near_field_note(const ScenarioFile& scenario) {
  const RisConfig& r = scenario.ris;
  const double n = static_cast<double>(r.element_count());
  const double d_fa = fraunhofer_distance(n, r.elem_a, r.elem_b, scenario.layout.wavelength);
  std::string note = fmt::format(
      "fraunhofer_distance_m={} (2*N*sqrt(a^2+b^2)/lambda, N={} elements)", format_value(d_fa),
      r.element_count());
  const bool reference_panel = r.n_rows == 200 && r.n_cols == 200 &&
                               scenario.layout.wavelength == 0.005 && r.elem_a == 0.0025 &&
                               r.elem_b == 0.0025;
  if (reference_panel) {
    note += "; the value usually quoted for this 0.5 m x 0.5 m panel is 400 m, which this"
            " formula does not reproduce (both keep the cell in the near field)";
  }
  return note;
}

std::string output_header(std::string_view command, const ScenarioFile& scenario,
                          const std::vector<std::pair<std::string, std::string>>& extra) {
  std::string h;
  h += fmt::format("# risdeploy {} {}\n", tool_version(), command);
  h += fmt::format("# seed: {}\n", scenario.run.seed);
  h += fmt::format("# rng: {}\n", RngStream::kIdentity);
  h += fmt::format("# kernel: {}\n", kernel_name(preferred_kernel()));
  h += fmt::format("# near_field: {}\n", near_field_note(scenario));
  for (const auto& [key, value] : extra) h += fmt::format("# {}: {}\n", key, value);
  h += std::string(kEchoPrefix) + to_json(scenario).dump() + "\n";
  return h;
}

ScenarioFile parse_header_echo(std::string_view file_contents) {
  std::istringstream in{std::string(file_contents)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(kEchoPrefix, 0) == 0) {
      try {
        return parse_scenario(nlohmann::json::parse(line.substr(kEchoPrefix.size())));
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(fmt::format("malformed scenario echo: {}", e.what()));
      }
    }
    if (line.empty() || line[0] != '#') break;
  }
  throw ConfigError("no scenario echo found in output header");
}

namespace {

template <class Cell>
std::string raster_csv(const FieldMap& field, Cell cell) {
  const UserGrid& g = field.grid;
  std::string out = "y\\x";
  for (double x : g.xs) out += "," + format_value(x);
  out += "\n";
  for (std::size_t row = 0; row < g.ys.size(); ++row) {
    out += format_value(g.ys[row]);
    for (std::size_t col = 0; col < g.xs.size(); ++col) {
      out += ",";
      out += cell(row * g.xs.size() + col);
    }
    out += "\n";
  }
  return out;
}

}  // namespace

std::string status_raster_csv(const FieldMap& field) {
  return raster_csv(field, [&](std::size_t p) {
    return std::to_string(static_cast<int>(field.status[p]));
  });
}

std::string rate_raster_csv(const FieldMap& field) {
  return raster_csv(field, [&](std::size_t p) { return format_rate(field.rate[p]); });
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError(fmt::format("{}: {}", path.parent_path().string(), ec.message()));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("{}: cannot open for writing", path.string()));
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError(fmt::format("{}: write failed", path.string()));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("{}: cannot open for reading", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace risdeploy
