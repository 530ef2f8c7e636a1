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

#ifndef RMOT_CSV_HPP
#define RMOT_CSV_HPP

#include <fstream>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rmot/measures.hpp"

namespace rmot {

/// Point cloud as read from `x1,...,xd[,w]` CSV. The optional last column
/// carries unnormalized masses.
struct PointCloud {
  RowMatrix points;
  std::optional<Vector> weights;

  DiscreteMeasure to_measure() const { return discrete_from_points(points, weights); }
};

PointCloud read_point_csv(std::istream& in);
PointCloud read_point_csv(const std::string& path);

void write_point_csv(std::ostream& out, const RowMatrix& points,
                     const std::optional<Vector>& weights = std::nullopt);

/// Numbers in every CSV and console line use 12 significant digits.
std::string format_number(double value);

/// Splits one CSV line on commas and trims blanks around each field.
std::vector<std::string> split_csv_line(const std::string& line);

/// Reads samples row by row from a point CSV without loading the file. A
/// weight column, if present, is ignored.
class CsvSampleStream final : public SampleStream {
 public:
  explicit CsvSampleStream(const std::string& path);

  Index dim() const override { return dim_; }
  bool next(Eigen::Ref<Vector> x) override;
  /// Data rows consumed so far.
  Index rows_read() const noexcept { return rows_read_; }

 private:
  std::ifstream in_;
  std::string path_;
  Index dim_ = 0;
  Index line_ = 1;
  Index rows_read_ = 0;
};

}  // namespace rmot

#endif  // RMOT_CSV_HPP
