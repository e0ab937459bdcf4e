#include "tsito/report.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace tsito {
namespace {

std::string scalar_text(const nlohmann::ordered_json& v) {
  switch (v.type()) {
    case nlohmann::json::value_t::number_float: {
      const double d = v.get<double>();
      char buf[64];
      return std::string(buf, std::to_chars(buf, buf + sizeof buf, d).ptr);
    }
    case nlohmann::json::value_t::string: return v.get<std::string>();
    case nlohmann::json::value_t::null: return "";
    default: return v.dump();
  }
}

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw std::invalid_argument("unknown format '" + std::string(name) + "' (csv|json)");
}

void Report::add_row(std::vector<nlohmann::ordered_json> row) {
  if (row.size() != columns.size()) throw std::logic_error("report row width does not match the columns");
  rows.push_back(std::move(row));
}

std::string to_csv(const Report& r) {
  std::string out;
  for (const auto& [key, value] : r.summary.items()) {
    out += "# " + key + "=" + (value.is_primitive() ? scalar_text(value) : value.dump()) + "\n";
  }
  for (std::size_t i = 0; i < r.columns.size(); ++i) out += (i ? "," : "") + r.columns[i];
  if (!r.columns.empty()) out += "\n";
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + scalar_text(row[i]);
    out += "\n";
  }
  return out;
}

std::string to_json(const Report& r) {
  nlohmann::ordered_json doc = r.summary;
  if (!r.columns.empty()) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : r.rows) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (std::size_t i = 0; i < row.size(); ++i) obj[r.columns[i]] = row[i];
      rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
  }
  return doc.dump(2) + "\n";
}

std::filesystem::path write_report(const Report& r, const std::filesystem::path& dir, const std::string& stem,
                                   Format format) {
  std::filesystem::create_directories(dir);
  const auto path = dir / (stem + (format == Format::csv ? ".csv" : ".json"));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << (format == Format::csv ? to_csv(r) : to_json(r));
  return path;
}

}  // namespace tsito
