// Copyright 2026 The stein-fisher Authors
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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "steinfisher/quadform.hpp"

namespace steinfisher {

/// Flat key=value configuration. Every key can also be given as a
/// command-line flag of the same name.
struct ExperimentConfig {
  std::string experiment;  ///< sum_rate | samplemean_rate | quadform_rate | kernel_check | negmoment | convert
  std::string dist = "gaussian";
  std::string link;
  std::string matrix;  ///< banded:<bandwidth> | random | file
  std::string matrix_path;
  std::vector<int> n_grid;
  std::size_t reps = 100000;
  int bins = 64;
  std::uint64_t seed = 1;
  std::string out;  ///< empty writes to stdout
  std::string format = "csv";
  double alpha = 1.0;
  std::string law = "gaussian_square";  ///< gaussian_square | one | stein_kernel:<dist>
  std::optional<double> fisher;
  bool record_timing = false;
  std::size_t pre_pass_reps = 100000;
};

std::vector<std::string> config_keys();

/// Sets one field from its textual value; ConfigError names the field.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Cross-field checks; ConfigError on the first violation.
void validate(const ExperimentConfig& config);

/// Dense text format: a line with n, then n rows of n reals. Blank lines and
/// lines starting with '#' are skipped. ParseError carries the line number.
CoefficientMatrix parse_matrix(std::istream& in);
CoefficientMatrix parse_matrix_file(const std::string& path);

struct ResultRow {
  std::string experiment;
  std::uint64_t n = 0;  ///< 0 for rows that summarize the whole n grid
  std::uint64_t reps = 0;
  std::uint64_t seed = 0;
  std::string estimator;
  double estimate = 0.0;
  double standard_error = 0.0;
  double guarded_fraction = 0.0;
  double wall_time_ms = 0.0;

  bool operator==(const ResultRow&) const = default;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::vector<std::string> notes;  ///< skipped grid points and similar remarks
};

ExperimentResult run(const ExperimentConfig& config);

inline constexpr std::string_view kSchemaLine = "# stein-fisher v1";

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out);
void write_json(const std::vector<ResultRow>& rows, std::ostream& out);
std::vector<ResultRow> read_csv(std::istream& in);
std::vector<ResultRow> read_json(std::istream& in);

}  // namespace steinfisher
