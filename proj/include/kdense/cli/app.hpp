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

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "kdense/erm.hpp"

namespace kdense::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitNumerical = 2,
  kExitIo = 3,
};

// Entry point of the `kdense` tool. Never throws; failures map to ExitCode.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Rows of x₁,…,x_d,y. Blank lines and lines starting with '#' are skipped,
// as is a non-numeric first row (a header).
Dataset read_dataset_csv(const std::filesystem::path& path);

}  // namespace kdense::cli
