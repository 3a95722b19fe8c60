/*
 * Copyright 2026 The kerneldense Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kdense/erm.hpp"
#include "kdense/kernels.hpp"
#include "kdense/lab.hpp"
#include "kdense/prob_metrics.hpp"
#include "kdense/spectral.hpp"

namespace kdense::cli {

// Config files are flat `key = value` lines grouped under optional
// `[section]` headers. `#` starts a comment. Lists are comma separated;
// point lists separate points with `;`. See README.md for the keys each
// command accepts.
struct ConfigEntry {
  std::string value;
  int line = 0;
};

class ConfigDocument {
 public:
  // Throws ConfigError on malformed lines or duplicate keys.
  static ConfigDocument parse(const std::string& text);

  // Keys are "section.key", or plain "key" before any section header.
  const std::map<std::string, ConfigEntry>& entries() const noexcept { return entries_; }
  const ConfigEntry* find(const std::string& key) const;
  std::vector<std::string> sections() const;

 private:
  std::map<std::string, ConfigEntry> entries_;
  std::map<std::string, int> section_lines_;
};

std::string read_text_file(const std::filesystem::path& path);

// Levenshtein distance.
std::size_t edit_distance(const std::string& a, const std::string& b);

// Closest candidate within edit distance 2, if any.
std::optional<std::string> suggest_key(const std::string& key,
                                       const std::vector<std::string>& candidates);

struct FitJob {
  enum class Solver { kRidge, kSubgradient, kPairwise };

  Kernel kernel = GaussianRbf(1.0);
  Solver solver = Solver::kRidge;
  LossFunction loss = LossFunction::squared();
  FitConfig fit;
  // Training data CSV, relative paths resolved against the config file.
  std::filesystem::path data;
  std::optional<double> clip_bound;

  friend bool operator==(const FitJob&, const FitJob&) = default;
};

struct KernelEvalJob {
  Kernel kernel = GaussianRbf(1.0);
  std::vector<Point> points;
  Precision precision = Precision::kDouble;
};

struct PsiJob {
  PsiFunction psi = Psi2{};
  double grid_max = 10.0;
  int grid_n = 1000;
};

StudyConfig parse_study_config(const ConfigDocument& doc);
FitJob parse_fit_config(const ConfigDocument& doc, const std::filesystem::path& base_dir = {});
KernelEvalJob parse_kernel_eval_config(const ConfigDocument& doc);
PsiJob parse_psi_config(const ConfigDocument& doc);

enum class Command { kKernelEval, kFit, kStudy, kValidatePsi, kReport };

using ParsedConfig = std::variant<StudyConfig, FitJob, KernelEvalJob, PsiJob>;

// Reads and validates the config for `command`. Every invariant of the
// target type is checked here, with the offending key and line in the
// ConfigError message. kReport has no config file and is rejected.
ParsedConfig parse_config(const std::filesystem::path& path, Command command);

// Canonical text form; parse(emit(c)) == c.
std::string emit_study_config(const StudyConfig& cfg);
std::string emit_fit_config(const FitJob& job);

// Shortest decimal that round-trips the double (at most 17 significant
// digits).
std::string format_double(double value);

}  // namespace kdense::cli
