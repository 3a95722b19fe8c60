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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kdense/lab.hpp"

namespace kdense::cli {

inline constexpr std::string_view kReportHeader =
    "n,replicate,d_psi,ky_fan,sup_gap,l1_gap,risk_gap,wall_time_s";

// RFC 4180 field: quoted when it holds a comma, quote, CR or LF.
std::string csv_field(std::string_view value);

// Header plus one '\n'-terminated row per cell. Failed cells keep n and
// replicate and leave the metric fields empty.
std::string format_report_csv(const ConvergenceReport& report);
ConvergenceReport parse_report_csv(const std::string& text);

struct RunManifest {
  std::string command;
  std::uint64_t seed = 0;
  bool seed_overridden = false;
  std::uint64_t config_hash = 0;
  // Command-specific `key = value` lines, written in order.
  std::vector<std::pair<std::string, std::string>> extra;
};

std::string format_manifest(const RunManifest& m);

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

// Writes `contents` to `path`, throwing IoError on any failure.
void write_text_file(const std::filesystem::path& path, const std::string& contents);

// `<path>.manifest` next to the report.
std::filesystem::path manifest_path(const std::filesystem::path& report_path);

// CSV plus manifest. Throws IoError.
void emit_report(const ConvergenceReport& report, const RunManifest& manifest,
                 const std::filesystem::path& path);

}  // namespace kdense::cli
