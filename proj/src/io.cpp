#include "qbessel/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "qbessel/error.hpp"

namespace qbessel {

void Table::add_row(std::vector<Json> row) {
  if (row.size() != columns.size()) fail(ErrorKind::DomainError, "row width does not match the header");
  rows.push_back(std::move(row));
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string format_cell(const Json& cell) {
  if (cell.is_boolean()) return cell.get<bool>() ? "true" : "false";
  if (cell.is_number_integer()) return std::to_string(cell.get<long long>());
  if (cell.is_number_unsigned()) return std::to_string(cell.get<unsigned long long>());
  if (cell.is_number()) return format_number(cell.get<double>());
  if (cell.is_string()) return cell.get<std::string>();
  fail(ErrorKind::DomainError, "unsupported table cell");
}

Json parse_cell(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  if (s.empty()) return s;
  errno = 0;
  char* end = nullptr;
  if (s.find_first_of(".eEnNiI") == std::string::npos) {
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (*end == '\0' && errno == 0) return v;
  }
  errno = 0;
  const double d = std::strtod(s.c_str(), &end);
  if (*end == '\0' && errno == 0) return d;
  return s;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += t.columns[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_cell(row[i]);
    }
    out += '\n';
  }
  return out;
}

Table from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Table t;
  if (!std::getline(in, line)) fail(ErrorKind::DomainError, "CSV input is empty");
  t.columns = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<Json> row;
    for (const auto& cell : split(line)) row.push_back(parse_cell(cell));
    t.add_row(std::move(row));
  }
  return t;
}

Json to_json(const Meta& meta, const Table& t) {
  Json data = Json::array();
  for (const auto& row : t.rows) {
    Json record = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) record[t.columns[i]] = row[i];
    data.push_back(std::move(record));
  }
  return {{"meta",
           {{"q", meta.q},
            {"nu", meta.nu},
            {"base_mode", meta.base_mode},
            {"eps", meta.eps},
            {"tool_version", meta.tool_version}}},
          {"data", std::move(data)}};
}

Meta meta_from_json(const Json& j) {
  const auto& m = j.at("meta");
  Meta meta;
  meta.q = m.at("q").get<double>();
  meta.nu = m.at("nu").get<double>();
  meta.base_mode = m.at("base_mode").get<std::string>();
  meta.eps = m.at("eps").get<double>();
  meta.tool_version = m.at("tool_version").get<std::string>();
  return meta;
}

Table table_from_json(const Json& j) {
  Table t;
  const auto& data = j.at("data");
  if (data.empty()) return t;
  for (const auto& item : data.front().items()) t.columns.push_back(item.key());
  for (const auto& record : data) {
    std::vector<Json> row;
    for (const auto& c : t.columns) row.push_back(record.at(c));
    t.add_row(std::move(row));
  }
  return t;
}

}  // namespace qbessel
