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

#ifndef RMOT_TOOLS_CLI_HPP
#define RMOT_TOOLS_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmot::cli {

enum class Subcommand { Run, Baseline, Coverage, Laguerre, Audit, Ingest };

struct CliConfig {
  Subcommand subcommand = Subcommand::Run;
  double eps = 0.1;
  /// Empty means "auto".
  std::optional<double> alpha = 0.0;
  std::optional<double> gamma;
  double c = 0.51;
  std::int64_t iters = 100'000;
  std::uint64_t seed = 0;
  double level = 0.95;
  std::string mu;
  std::string nu;
  std::string mu_stream;
  std::string in;
  std::string out;
  std::int64_t record_every = 1000;
  std::string solver = "sinkhorn";
  std::int64_t grid = 0;
  bool rescale_unit_box = false;
  int jobs = 0;
  std::int64_t reps = 200;
  std::string cost = "euclidean";
  double tol = 1e-9;
  std::int64_t max_iters = 100'000;
  std::string mode = "gradient";
  std::int64_t trials = 100;
};

/// Bad flag, bad value or missing input; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// --help was given; carries the text to print (exit code 0).
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses argv[1..]. Flags override values read from --config.
CliConfig parse_args(const std::vector<std::string>& args);

/// Runs the subcommand. CSV goes to config.out (standard output when
/// empty); summaries go to `log`. Returns the process exit code.
int execute(const CliConfig& config, std::ostream& log);

/// parse_args + execute with exit codes 0 (success), 1 (runtime failure)
/// and 2 (usage error).
int main_entry(const std::vector<std::string>& args);

}  // namespace rmot::cli

#endif  // RMOT_TOOLS_CLI_HPP
