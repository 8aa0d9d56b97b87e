// Copyright 2026 The quenchsim authors
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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quench/common.hpp"

namespace quench {

/// Column-named table of pre-formatted cells, the unit of CSV output.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  int column_index(const std::string& name) const;  // -1 when absent
};

std::string csv_cell(double v);  // shortest round-trip formatting
std::string csv_cell(long long v);

/// CSV layout: "# config_hash=0x..." comment, header row, data rows. All
/// numbers go through csv_cell so reruns are byte-identical.
void write_table_csv(const std::string& path, std::uint64_t config_hash,
                     const Table& t);

/// Reads a CSV written by write_table_csv. A leading config-hash comment is
/// parsed into *hash_out when present (0 otherwise). Throws
/// std::runtime_error naming the file on open or format errors.
Table read_table_csv(const std::string& path, std::uint64_t* hash_out);

double table_double(const Table& t, int row, const std::string& column);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
bool file_exists(const std::string& path);

/// Current UTC time "YYYY-MM-DDTHH:MM:SSZ"; lives only in JSON metadata so
/// data files stay reproducible.
std::string utc_timestamp();

}  // namespace quench
