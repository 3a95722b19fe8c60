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

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "kdense/cli/app.hpp"
#include "kdense/cli/config.hpp"
#include "kdense/cli/report_io.hpp"
#include "kdense/errors.hpp"

namespace fs = std::filesystem;
using namespace kdense::cli;

namespace {

struct Sandbox {
  fs::path root;
  Sandbox() {
    root = fs::temp_directory_path() / ("kdense_cli_" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root / "out");
  }
  ~Sandbox() { fs::remove_all(root); }

  fs::path write(const std::string& name, const std::string& text) const {
    const fs::path p = root / name;
    std::ofstream(p) << text;
    return p;
  }

  std::set<fs::path> listing() const {
    std::set<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(root)) files.insert(e.path());
    return files;
  }
};

int run(const std::string& args) {
  const std::string cmd = std::string(KDENSE_TOOL_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kSmallStudy =
    "seed = 5\nreplicates = 2\ngrid_resolution = 501\n[schedule]\nsample_sizes = 16, 64\n";

}  // namespace

TEST_CASE("study succeeds and writes only into the output directory") {
  Sandbox sb;
  const auto cfg = sb.write("study.cfg", kSmallStudy);
  auto before = sb.listing();
  const fs::path out = sb.root / "out" / "report.csv";
  CHECK(run("study --config " + cfg.string() + " --out " + out.string()) == 0);
  auto after = sb.listing();
  std::set<fs::path> added;
  for (const auto& p : after) {
    if (!before.count(p)) added.insert(p);
  }
  CHECK(added == std::set<fs::path>{out, manifest_path(out)});
  const auto report = parse_report_csv(read_text_file(out));
  CHECK(report.cells.size() == 4);
  CHECK(read_text_file(manifest_path(out)).find("seed_source = config") != std::string::npos);

  const fs::path again = sb.root / "out" / "again.csv";
  CHECK(run("study --config " + cfg.string() + " --out " + again.string()) == 0);
  CHECK(read_text_file(out) == read_text_file(again));

  const fs::path seeded = sb.root / "out" / "seeded.csv";
  CHECK(run("study --seed 77 --config " + cfg.string() + " --out " + seeded.string() + " -vv") == 0);
  const std::string manifest = read_text_file(manifest_path(seeded));
  CHECK(manifest.find("seed = 77\n") != std::string::npos);
  CHECK(manifest.find("seed_source = override") != std::string::npos);
  CHECK(read_text_file(out) != read_text_file(seeded));

  CHECK(run("report " + out.string() + " --out " + (sb.root / "out" / "summary.csv").string()) == 0);
}

TEST_CASE("config errors exit 1") {
  Sandbox sb;
  const auto out = (sb.root / "out" / "r.csv").string();
  CHECK(run("study --config " + sb.write("bad.cfg", "[kernel]\ngamm = 1\n").string() + " --out " +
            out) == 1);
  CHECK(run("fit --config " +
            sb.write("fit.cfg", "data = d.csv\n[kernel]\ngamma = 1\n[fit]\nlambda = -1\n").string() +
            " --out " + out) == 1);
  CHECK(run("study --out " + out) == 1);
  CHECK(run("no-such-command") == 1);
  CHECK(run("validate-psi --config " +
            sb.write("psi.cfg", "psi = custom\npsi_grid = 0, 1, 2\npsi_values = 0, 1, 4\n").string()) ==
        1);
  CHECK(run("--help") == 0);
}

TEST_CASE("numerical failures exit 2") {
  Sandbox sb;
  const auto out = (sb.root / "out" / "r.csv").string();
  const auto far = sb.write("far.cfg", std::string(kSmallStudy) +
                                           "sampler = gaussian\nsampler_mean = 40\nsampler_sd = 0.01\n");
  CHECK(run("study --config " + far.string() + " --out " + out) == 2);
  CHECK(fs::exists(out));
  CHECK(parse_report_csv(read_text_file(out)).partial());

  std::string pts = "points = ";
  for (int i = 0; i < 100; ++i) pts += std::to_string((i + 0.5) / 100.0) + (i < 99 ? "; " : "\n");
  const auto dense = sb.write("dense.cfg", pts + "[kernel]\ngamma = 0.2\n");
  CHECK(run("kernel-eval --config " + dense.string() + " --out " + out) == 2);
  const auto ext = sb.write("ext.cfg", pts + "precision = extended\n[kernel]\ngamma = 0.2\n");
  CHECK(run("kernel-eval --config " + ext.string() + " --out " + out) == 0);
}

TEST_CASE("I/O failures exit 3") {
  Sandbox sb;
  const auto cfg = sb.write("study.cfg", kSmallStudy);
  CHECK(run("study --config " + cfg.string() + " --out " + (sb.root / "nope" / "r.csv").string()) ==
        3);
  CHECK(run("study --config " + (sb.root / "missing.cfg").string() + " --out " +
            (sb.root / "out" / "r.csv").string()) == 3);
  const auto fit_cfg = sb.write("fit.cfg", "data = absent.csv\n[kernel]\ngamma = 1\n");
  CHECK(run("fit --config " + fit_cfg.string() + " --out " + (sb.root / "out" / "m.csv").string()) ==
        3);
  CHECK(run("report " + (sb.root / "missing.csv").string()) == 3);
}

TEST_CASE("fit end to end") {
  Sandbox sb;
  std::string data = "x,y\n";
  for (int i = 0; i < 30; ++i) {
    const double x = i / 29.0;
    data += std::to_string(x) + "," + std::to_string(x * x) + "\n";
  }
  sb.write("train.csv", data);
  for (const char* solver : {"solver = ridge\n", "solver = subgradient\nloss = absolute\n",
                             "solver = pairwise\n"}) {
    const auto cfg = sb.write("fit.cfg", std::string("data = train.csv\n") + solver +
                                             "[kernel]\ngamma = 0.3\n[fit]\nmax_iters = 300\n");
    const fs::path out = sb.root / "out" / "model.csv";
    CHECK(run("fit --config " + cfg.string() + " --out " + out.string()) == 0);
    const std::string model = read_text_file(out);
    CHECK(model.rfind("c1,alpha\n", 0) == 0);
    CHECK(std::count(model.begin(), model.end(), '\n') == 31);
  }

  const auto dataset = read_dataset_csv(sb.root / "train.csv");
  CHECK(dataset.size() == 30);
  sb.write("bad.csv", "1,2\n3\n");
  CHECK_THROWS_AS(read_dataset_csv(sb.root / "bad.csv"), kdense::InputError);
}
