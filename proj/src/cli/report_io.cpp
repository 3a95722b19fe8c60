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

#include "kdense/cli/report_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "kdense/cli/config.hpp"
#include "kdense/errors.hpp"
#include "kdense/version.hpp"

namespace kdense::cli {
namespace {

std::vector<std::string> split_csv_line(const std::string& line, int line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw InputError("report line " + std::to_string(line_no) + ": unterminated quote");
  fields.push_back(std::move(cur));
  return fields;
}

template <class T>
T parse_field(const std::string& s, int line_no) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw InputError("report line " + std::to_string(line_no) + ": bad field '" + s + "'");
  }
  return v;
}

}  // namespace

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_report_csv(const ConvergenceReport& report) {
  std::string out(kReportHeader);
  out += '\n';
  for (const ConvergenceCell& c : report.cells) {
    out += std::to_string(c.n) + ',' + std::to_string(c.replicate);
    for (double v : {c.d_psi, c.ky_fan, c.sup_gap, c.l1_gap, c.risk_gap, c.wall_time_s}) {
      out += ',';
      if (c.ok) out += csv_field(format_double(v));
    }
    out += '\n';
  }
  return out;
}

ConvergenceReport parse_report_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kReportHeader) {
    throw InputError("report must start with the header '" + std::string(kReportHeader) + "'");
  }
  ConvergenceReport report;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv_line(line, line_no);
    if (f.size() != 8) {
      throw InputError("report line " + std::to_string(line_no) + ": expected 8 fields, got " +
                       std::to_string(f.size()));
    }
    ConvergenceCell c;
    c.n = parse_field<std::size_t>(f[0], line_no);
    c.replicate = parse_field<std::size_t>(f[1], line_no);
    bool all_empty = true;
    for (std::size_t i = 2; i < 8; ++i) all_empty = all_empty && f[i].empty();
    if (all_empty) {
      c.ok = false;
    } else {
      double* slots[] = {&c.d_psi, &c.ky_fan, &c.sup_gap, &c.l1_gap, &c.risk_gap, &c.wall_time_s};
      for (std::size_t i = 0; i < 6; ++i) *slots[i] = parse_field<double>(f[i + 2], line_no);
    }
    report.cells.push_back(c);
  }
  return report;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_manifest(const RunManifest& m) {
  char hash[17];
  std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(m.config_hash));
  std::ostringstream os;
  os << "library = kdense " << kVersion << "\n";
  os << "command = " << m.command << "\n";
  os << "seed = " << m.seed << "\n";
  os << "seed_source = " << (m.seed_overridden ? "override" : "config") << "\n";
  os << "config_hash = fnv1a64:" << hash << "\n";
  for (const auto& [key, value] : m.extra) os << key << " = " << value << "\n";
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::filesystem::path manifest_path(const std::filesystem::path& report_path) {
  std::filesystem::path p = report_path;
  p += ".manifest";
  return p;
}

void emit_report(const ConvergenceReport& report, const RunManifest& manifest,
                 const std::filesystem::path& path) {
  write_text_file(path, format_report_csv(report));
  write_text_file(manifest_path(path), format_manifest(manifest));
}

}  // namespace kdense::cli
