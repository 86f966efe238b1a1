#include "table.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

namespace subharmonic::cli {
namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string csv_cell(const Cell& cell, int precision) {
  if (const auto* d = std::get_if<double>(&cell)) return format_number(*d, precision);
  if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  return csv_field(std::get<std::string>(cell));
}

std::string json_cell(const Cell& cell, int precision) {
  if (const auto* d = std::get_if<double>(&cell)) {
    return std::isfinite(*d) ? format_number(*d, precision) : "null";
  }
  if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  return nlohmann::json(std::get<std::string>(cell)).dump();
}

}  // namespace

std::string format_number(double x, int precision) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";  // folds -0
  return fmt::format("{:.{}g}", x, precision);
}

std::filesystem::path write_table(const Table& table, const OutputContext& ctx) {
  std::filesystem::create_directories(ctx.options.dir);
  const bool csv = ctx.options.format == OutputFormat::Csv;
  const auto path = ctx.options.dir / (table.name + (csv ? ".csv" : ".json"));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  const int p = ctx.options.precision;

  if (csv) {
    out << "# subharmonic " << ctx.command << '\n';
    out << "# config: " << ctx.resolved.dump() << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      out << (i ? "," : "") << table.columns[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i], p);
      out << '\n';
    }
  } else {
    out << "{\n\"header\": " << nlohmann::json{{"command", ctx.command}, {"config", ctx.resolved}}.dump()
        << ",\n\"columns\": " << nlohmann::json(table.columns).dump() << ",\n\"rows\": [";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      out << (r ? ",\n" : "\n") << '[';
      const auto& row = table.rows[r];
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << json_cell(row[i], p);
      out << ']';
    }
    out << "\n]\n}\n";
  }
  if (!out) throw ConfigError("failed writing " + path.string());
  return path;
}

}  // namespace subharmonic::cli
