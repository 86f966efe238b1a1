#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "run_config.hpp"

namespace subharmonic::cli {

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

/// Everything a command's output files share: destination, format and the
/// resolved configuration written into every header.
struct OutputContext {
  std::string command;
  OutputOptions options;
  nlohmann::json resolved;
};

std::string format_number(double x, int precision);

/// CSV: '#' header lines carrying the command and the compact resolved config,
/// then the column row and data. JSON: {"header", "columns", "rows"} with the
/// same number formatting. Returns the written path.
std::filesystem::path write_table(const Table& table, const OutputContext& ctx);

}  // namespace subharmonic::cli
