// Copyright 2026 The rmot Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rmot/csv.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>

#include "rmot/error.hpp"

namespace rmot {

namespace {

struct Header {
  Index dim = 0;
  bool has_weight = false;
};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

Header parse_header(const std::string& line) {
  const auto fields = split_csv_line(line);
  Header h;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    const std::string expected = "x" + std::to_string(k + 1);
    if (fields[k] == expected) {
      h.dim += 1;
    } else if (fields[k] == "w" && k + 1 == fields.size() && k > 0) {
      h.has_weight = true;
    } else {
      throw Error(ErrorCode::ParseError,
                  "line 1: header field '" + fields[k] + "', expected '" + expected + "'");
    }
  }
  require(h.dim >= 1, ErrorCode::ParseError, "line 1: header declares no coordinates");
  return h;
}

double parse_field(const std::string& field, Index line) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || field.empty()) {
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line) + ": non-numeric field '" + field + "'");
  }
  return value;
}

// Parses one data line into x (and the weight when present). Returns false on
// blank lines.
bool parse_row(const std::string& raw, const Header& h, Index line, double* x, double* w) {
  if (trim(raw).empty()) return false;
  const auto fields = split_csv_line(raw);
  const std::size_t expected = static_cast<std::size_t>(h.dim) + (h.has_weight ? 1 : 0);
  if (fields.size() != expected) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " +
                                           std::to_string(fields.size()) + " fields, expected " +
                                           std::to_string(expected));
  }
  for (Index k = 0; k < h.dim; ++k) x[k] = parse_field(fields[static_cast<std::size_t>(k)], line);
  if (h.has_weight && w != nullptr) *w = parse_field(fields.back(), line);
  return true;
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string::npos ? comma : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

PointCloud read_point_csv(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::ParseError, "missing header");
  const Header h = parse_header(line);

  std::vector<double> coords;
  std::vector<double> weights;
  std::vector<double> row(static_cast<std::size_t>(h.dim));
  Index line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    double w = 0.0;
    if (!parse_row(line, h, line_no, row.data(), &w)) continue;
    coords.insert(coords.end(), row.begin(), row.end());
    if (h.has_weight) weights.push_back(w);
  }
  const Index n = static_cast<Index>(coords.size()) / h.dim;
  require(n >= 1, ErrorCode::EmptySupport, "CSV has no data rows");

  PointCloud cloud;
  cloud.points = Eigen::Map<const RowMatrix>(coords.data(), n, h.dim);
  if (h.has_weight) cloud.weights = Eigen::Map<const Vector>(weights.data(), n);
  return cloud;
}

PointCloud read_point_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::IoError, "cannot open '" + path + "'");
  return read_point_csv(in);
}

void write_point_csv(std::ostream& out, const RowMatrix& points,
                     const std::optional<Vector>& weights) {
  for (Index k = 0; k < points.cols(); ++k) out << (k ? "," : "") << 'x' << k + 1;
  if (weights) out << ",w";
  out << '\n';
  for (Index i = 0; i < points.rows(); ++i) {
    for (Index k = 0; k < points.cols(); ++k) out << (k ? "," : "") << format_number(points(i, k));
    if (weights) out << ',' << format_number((*weights)[i]);
    out << '\n';
  }
}

CsvSampleStream::CsvSampleStream(const std::string& path) : in_(path), path_(path) {
  require(in_.good(), ErrorCode::IoError, "cannot open '" + path + "'");
  std::string line;
  require(static_cast<bool>(std::getline(in_, line)), ErrorCode::ParseError,
          path + ": missing header");
  const Header h = parse_header(line);
  dim_ = h.dim;
}

bool CsvSampleStream::next(Eigen::Ref<Vector> x) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != static_cast<std::size_t>(dim_) &&
        fields.size() != static_cast<std::size_t>(dim_) + 1) {
      throw Error(ErrorCode::ParseError, path_ + " line " + std::to_string(line_) +
                                             ": wrong number of fields");
    }
    for (Index k = 0; k < dim_; ++k) x[k] = parse_field(fields[static_cast<std::size_t>(k)], line_);
    ++rows_read_;
    return true;
  }
  return false;
}

}  // namespace rmot
