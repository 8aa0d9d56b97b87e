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

#include "quench/io.hpp"

#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "quench/config.hpp"
#include "quench/format.hpp"

namespace quench {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("table row width mismatch");
  }
  rows.push_back(std::move(row));
}

int Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return static_cast<int>(i);
  }
  return -1;
}

std::string csv_cell(double v) { return format_double(v); }

std::string csv_cell(long long v) { return std::to_string(v); }

void write_table_csv(const std::string& path, std::uint64_t config_hash,
                     const Table& t) {
  std::ostringstream out;
  out << "# config_hash=" << hash_hex(config_hash) << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out << ",";
    out << t.columns[i];
  }
  out << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      out << row[i];
    }
    out << "\n";
  }
  write_text_file(path, out.str());
}

Table read_table_csv(const std::string& path, std::uint64_t* hash_out) {
  if (hash_out) *hash_out = 0;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  Table t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string tag = "# config_hash=";
      if (hash_out && line.rfind(tag, 0) == 0) {
        const std::string hex = line.substr(tag.size());
        if (hex.size() == 18 && hex.rfind("0x", 0) == 0) {
          *hash_out = std::stoull(hex.substr(2), nullptr, 16);
        }
      }
      continue;
    }
    if (!have_header) {
      t.columns = split_csv_line(line);
      have_header = true;
    } else {
      auto row = split_csv_line(line);
      if (row.size() != t.columns.size()) {
        throw std::runtime_error("malformed CSV row in " + path);
      }
      t.rows.push_back(std::move(row));
    }
  }
  if (!have_header) throw std::runtime_error("empty CSV file: " + path);
  return t;
}

double table_double(const Table& t, int row, const std::string& column) {
  const int c = t.column_index(column);
  if (c < 0) throw std::runtime_error("missing CSV column: " + column);
  if (row < 0 || row >= static_cast<int>(t.rows.size())) {
    throw std::runtime_error("CSV row out of range");
  }
  return parse_double(t.rows[row][c]);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool file_exists(const std::string& path) {
  return std::filesystem::exists(path);
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return std::string(buf);
}

}  // namespace quench
