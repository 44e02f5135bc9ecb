#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace qbessel {

/// Keeps keys in insertion order, so columns survive a JSON round trip.
using Json = nlohmann::ordered_json;

struct Meta {
  double q = 0;
  double nu = 0;
  std::string base_mode;
  double eps = 0;
  std::string tool_version;
};

/// Rows of named cells; a cell is a number, a string or a bool.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;

  void add_row(std::vector<Json> row);
};

/// Numbers are written with 17 significant digits.
std::string to_csv(const Table& t);
Table from_csv(const std::string& text);

/// {"meta": {...}, "data": [{column: value, ...}, ...]}
Json to_json(const Meta& meta, const Table& t);
Meta meta_from_json(const Json& j);
Table table_from_json(const Json& j);

std::string format_number(double v);

}  // namespace qbessel
