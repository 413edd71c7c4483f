/*
 * Copyright 2026 adasgd authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "adasgd/data_io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace adasgd {

namespace {

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no,
                             const std::string& why) {
  std::ostringstream os;
  os << path << ": line " << line_no << ": " << why;
  throw ConfigError(os.str());
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(field);
  return out;
}

double parse_double(const std::string& s, const std::string& path,
                    std::size_t line_no, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) {
      ++used;
    }
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    parse_fail(path, line_no, std::string("bad ") + what + " '" + s + "'");
  }
}

long parse_index(const std::string& s, const std::string& path,
                 std::size_t line_no, const char* what) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) {
      ++used;
    }
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    parse_fail(path, line_no, std::string("bad ") + what + " '" + s + "'");
  }
}

}  // namespace

SparseWeightedMatrix ingest_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("ingest_csv: cannot open " + path);
  }
  std::string line;
  std::size_t line_no = 0;
  int dims_m = 0;
  int dims_n = 0;
  int max_i = 0;
  int max_j = 0;
  std::vector<WeightedEntry> entries;
  int column_count = 0;  // 3 or 4, fixed by the first data line
  bool any_data = false;

  while (std::getline(in, line)) {
    ++line_no;
    // strip a trailing CR from windows-style files
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream is(line.substr(1));
      std::string word;
      if (is >> word && word == "dims") {
        if (!(is >> dims_m >> dims_n) || dims_m < 1 || dims_n < 1) {
          parse_fail(path, line_no, "malformed '# dims m n' header");
        }
      }
      continue;
    }
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != 3 && fields.size() != 4) {
      parse_fail(path, line_no, "expected 'i,j,value' or 'i,j,value,weight'");
    }
    if (column_count == 0) {
      column_count = static_cast<int>(fields.size());
    } else if (column_count != static_cast<int>(fields.size())) {
      parse_fail(path, line_no, "mixed 3- and 4-column rows");
    }
    WeightedEntry e;
    const long i1 = parse_index(fields[0], path, line_no, "row index");
    const long j1 = parse_index(fields[1], path, line_no, "column index");
    if (i1 < 1 || j1 < 1) {
      parse_fail(path, line_no, "indices are 1-based and positive");
    }
    e.i = static_cast<int>(i1 - 1);
    e.j = static_cast<int>(j1 - 1);
    e.value = parse_double(fields[2], path, line_no, "value");
    e.weight = column_count == 4
                   ? parse_double(fields[3], path, line_no, "weight")
                   : 0.0;
    if (column_count == 4 && e.weight < 0.0) {
      parse_fail(path, line_no, "negative weight");
    }
    max_i = std::max(max_i, e.i + 1);
    max_j = std::max(max_j, e.j + 1);
    entries.push_back(e);
    any_data = true;
  }
  if (!any_data) {
    throw ConfigError("ingest_csv: " + path + " has no data rows");
  }
  const int m = dims_m > 0 ? dims_m : max_i;
  const int n = dims_n > 0 ? dims_n : max_j;
  if (column_count == 3) {
    const double w = 1.0 / static_cast<double>(entries.size());
    for (WeightedEntry& e : entries) e.weight = w;
  } else {
    double total = 0.0;
    for (const WeightedEntry& e : entries) total += e.weight;
    if (!(total > 0.0)) {
      throw ConfigError("ingest_csv: " + path + ": weights sum to zero");
    }
    for (WeightedEntry& e : entries) e.weight /= total;
  }
  return SparseWeightedMatrix(m, n, std::move(entries));
}

void emit_csv(const SparseWeightedMatrix& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("emit_csv: cannot open " + path + " for writing");
  }
  out << "# dims " << data.rows() << " " << data.cols() << "\n";
  char buf[128];
  for (const WeightedEntry& e : data.entries()) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g", e.i + 1, e.j + 1,
                  e.value, e.weight);
    out << buf << "\n";
  }
  if (!out) {
    throw IoError("emit_csv: write to " + path + " failed");
  }
}

}  // namespace adasgd
