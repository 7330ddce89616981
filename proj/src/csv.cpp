// Copyright 2026 The mipt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mipt/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

namespace mipt {

double CsvTable::tag_as_double(const std::string& key) const {
  return std::strtod(tag(key).c_str(), nullptr);
}

int CsvTable::tag_as_int(const std::string& key) const {
  return std::atoi(tag(key).c_str());
}

const std::string& CsvTable::tag(const std::string& key) const {
  auto it = tags.find(key);
  if (it == tags.end())
    throw std::runtime_error("CsvTable: missing tag '" + key + "'");
  return it->second;
}

int CsvTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  return -1;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

/// Shortest decimal rendering that round-trips a double exactly.
std::string format_value(double v) {
  char buf[40];
  if (v == static_cast<long long>(v) && std::abs(v) < 1e15) {
    std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(v));
    return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out << (i ? "," : "") << table.columns[i];
  out << "\n#";
  for (const auto& [k, v] : table.tags) out << " " << k << "=" << v;
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_value(row[i]);
    out << "\n";
  }
  if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_csv: cannot open " + path);
  CsvTable table;
  std::string line;
  int line_no = 0;

  if (!std::getline(in, line)) throw CsvError(path, 1, "missing header line");
  ++line_no;
  table.columns = split(line, ',');
  if (table.columns.empty() || table.columns[0].empty())
    throw CsvError(path, 1, "empty column header");

  if (!std::getline(in, line)) throw CsvError(path, 2, "missing tag line");
  ++line_no;
  if (line.empty() || line[0] != '#')
    throw CsvError(path, 2, "tag line must start with '#'");
  {
    std::istringstream tags(line.substr(1));
    std::string item;
    while (tags >> item) {
      auto eq = item.find('=');
      if (eq == std::string::npos)
        throw CsvError(path, 2, "malformed tag '" + item + "'");
      table.tags[item.substr(0, eq)] = item.substr(eq + 1);
    }
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto cells = split(line, ',');
    if (cells.size() != table.columns.size())
      throw CsvError(path, line_no, "expected " +
                                        std::to_string(table.columns.size()) +
                                        " fields, got " +
                                        std::to_string(cells.size()));
    std::vector<double> row(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      char* end = nullptr;
      row[i] = std::strtod(cells[i].c_str(), &end);
      if (end == cells[i].c_str() || *end != '\0')
        throw CsvError(path, line_no, "not a number: '" + cells[i] + "'");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace mipt
