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

#ifndef MIPT_CSV_HPP
#define MIPT_CSV_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace mipt {

/// Parse failure with the 1-based line number of the offending line.
class CsvError : public std::runtime_error {
 public:
  CsvError(const std::string& path, int line, const std::string& what)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + what),
        line_number(line) {}
  int line_number;
};

/// Numeric table with the 2-line header convention:
///   line 1: comma-separated column names
///   line 2: "# key=value key=value ..." tags (units, cell metadata)
struct CsvTable {
  std::vector<std::string> columns;
  std::map<std::string, std::string> tags;
  std::vector<std::vector<double>> rows;

  double tag_as_double(const std::string& key) const;
  int tag_as_int(const std::string& key) const;
  const std::string& tag(const std::string& key) const;
  int column_index(const std::string& name) const;  // -1 if absent
};

void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

}  // namespace mipt

#endif  // MIPT_CSV_HPP
