#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace tsito {

enum class Format { csv, json };

Format parse_format(std::string_view name);

/// Scalar summary plus an optional table. The CSV form writes the summary as
/// leading "# key=value" lines and then the table; the JSON form nests the
/// table under "rows". Numbers use shortest round-trip text in both.
struct Report {
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::ordered_json>> rows;

  void add_row(std::vector<nlohmann::ordered_json> row);
};

std::string to_csv(const Report& r);
std::string to_json(const Report& r);

/// Writes <dir>/<stem>.<csv|json> and returns the path.
std::filesystem::path write_report(const Report& r, const std::filesystem::path& dir, const std::string& stem,
                                   Format format);

}  // namespace tsito
