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

#include "kdense/cli/app.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>

#include "kdense/cli/config.hpp"
#include "kdense/cli/report_io.hpp"
#include "kdense/errors.hpp"
#include "kdense/rkhs.hpp"
#include "kdense/version.hpp"

namespace kdense::cli {
namespace {

struct Options {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int verbosity = 0;
};

void require_output(const std::string& out) {
  if (out.empty()) throw ConfigError("--out is required for this command");
  std::filesystem::path dir = std::filesystem::path(out).parent_path();
  if (dir.empty()) dir = ".";
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw IoError("output directory '" + dir.string() + "' does not exist");
  }
}

std::filesystem::path require_config(const Options& o) {
  if (o.config.empty()) throw ConfigError("--config is required for this command");
  const std::filesystem::path path(o.config);
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw IoError("config file '" + o.config + "' does not exist");
  }
  return path;
}

RunManifest base_manifest(const std::string& command, const std::filesystem::path& config) {
  RunManifest m;
  m.command = command;
  m.config_hash = fnv1a64(read_text_file(config));
  return m;
}

std::vector<double> parse_row(const std::string& line) {
  std::vector<double> row;
  std::istringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    const std::string f = b == std::string::npos ? "" : field.substr(b, e - b + 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc() || ptr != f.data() + f.size() || f.empty() || !std::isfinite(v)) {
      throw InputError("non-numeric field '" + f + "'");
    }
    row.push_back(v);
  }
  return row;
}

int cmd_kernel_eval(const Options& o, std::ostream& out) {
  const auto config = require_config(o);
  require_output(o.out);
  const KernelEvalJob job = std::get<KernelEvalJob>(parse_config(config, Command::kKernelEval));
  const SpectralCertificate cert = injectivity_probe(job.kernel, job.points, job.precision);
  const Eigen::MatrixXd k = gram_matrix(job.kernel, job.points);

  std::string csv;
  for (Eigen::Index i = 0; i < k.rows(); ++i) {
    for (Eigen::Index j = 0; j < k.cols(); ++j) {
      csv += (j ? "," : "") + format_double(k(i, j));
    }
    csv += '\n';
  }
  RunManifest m = base_manifest("kernel-eval", config);
  m.extra = {{"kernel", describe(job.kernel)},
             {"points", std::to_string(job.points.size())},
             {"min_eigenvalue", format_double(cert.min_eigenvalue)},
             {"threshold", format_double(cert.threshold)},
             {"certified", cert.certified ? "true" : "false"},
             {"digits", std::to_string(cert.digits)}};
  write_text_file(o.out, csv);
  write_text_file(manifest_path(o.out), format_manifest(m));

  out << describe(job.kernel) << " on " << job.points.size() << " points\n"
      << "min_eigenvalue = " << format_double(cert.min_eigenvalue) << " (threshold "
      << format_double(cert.threshold) << ", " << cert.digits << " digits)\n";
  if (!cert.certified) {
    throw NumericalError("Gram matrix positivity not certified; retry with precision = extended");
  }
  out << "injective on the given points\n";
  return kExitOk;
}

int cmd_fit(const Options& o, std::ostream& out, std::ostream& err) {
  const auto config = require_config(o);
  require_output(o.out);
  FitJob job = std::get<FitJob>(parse_config(config, Command::kFit));
  if (o.seed_given) job.fit.seed = o.seed;
  const Dataset data = read_dataset_csv(job.data);
  if (o.verbosity > 0) err << "fitting " << data.size() << " samples\n";

  RunManifest m = base_manifest("fit", config);
  m.seed = job.fit.seed;
  m.seed_overridden = o.seed_given;

  std::optional<RkhsFunction> f;
  switch (job.solver) {
    case FitJob::Solver::kRidge: {
      SpdSolveInfo info;
      f = fit_kernel_ridge(data, job.kernel, job.fit.lambda, &info);
      const double obj = regularized_objective(f->gram(), f->coefficients(), data, job.loss,
                                               job.fit.lambda);
      m.extra = {{"solver", "ridge"},
                 {"objective", format_double(obj)},
                 {"jitter_steps", std::to_string(info.jitter_steps)},
                 {"residual_norm", format_double(info.residual_norm)}};
      break;
    }
    case FitJob::Solver::kSubgradient:
    case FitJob::Solver::kPairwise: {
      const FitResult r = job.solver == FitJob::Solver::kSubgradient
                              ? fit_lipschitz_erm(data, job.kernel, job.loss, job.fit)
                              : fit_pairwise(data, job.kernel, PairwiseLoss::kRankingSquared,
                                             job.fit);
      f = r.function;
      m.extra = {{"solver", job.solver == FitJob::Solver::kSubgradient ? "subgradient" : "pairwise"},
                 {"objective", format_double(r.objective)},
                 {"iterations", std::to_string(r.iterations)},
                 {"gradient_norm", format_double(r.gradient_norm)},
                 {"converged", r.converged ? "true" : "false"}};
      break;
    }
  }
  m.extra.emplace_back("loss", job.loss.name());
  m.extra.emplace_back("rkhs_norm", format_double(rkhs_norm(*f)));
  m.extra.emplace_back("training_risk", format_double(empirical_risk(
                                            job.clip_bound ? clip(*f, *job.clip_bound)
                                                           : f->as_function(),
                                            data, job.loss)));

  std::string csv;
  const Eigen::Index d = f->dimension();
  for (Eigen::Index j = 0; j < d; ++j) csv += "c" + std::to_string(j + 1) + ",";
  csv += "alpha\n";
  for (std::size_t i = 0; i < f->centers().size(); ++i) {
    for (Eigen::Index j = 0; j < d; ++j) csv += format_double(f->centers()[i](j)) + ",";
    csv += format_double(f->coefficients()(static_cast<Eigen::Index>(i))) + "\n";
  }
  write_text_file(o.out, csv);
  write_text_file(manifest_path(o.out), format_manifest(m));
  for (const auto& [key, value] : m.extra) out << key << " = " << value << "\n";
  return kExitOk;
}

int cmd_study(const Options& o, std::ostream& out, std::ostream& err) {
  const auto config = require_config(o);
  require_output(o.out);
  StudyConfig cfg = std::get<StudyConfig>(parse_config(config, Command::kStudy));
  if (o.seed_given) cfg.seed = o.seed;
  if (o.verbosity > 0) err << "study configuration:\n" << emit_study_config(cfg);

  const ConvergenceReport report = run_study(cfg);
  std::size_t failed = 0;
  for (const ConvergenceCell& c : report.cells) {
    if (!c.ok) {
      ++failed;
      err << "cell n=" << c.n << " replicate=" << c.replicate << " failed: " << c.error << "\n";
    } else if (o.verbosity > 1) {
      err << "cell n=" << c.n << " replicate=" << c.replicate
          << " d_psi=" << format_double(c.d_psi) << " sup_gap=" << format_double(c.sup_gap)
          << "\n";
    }
  }
  RunManifest m = base_manifest("study", config);
  m.seed = cfg.seed;
  m.seed_overridden = o.seed_given;
  m.extra = {{"cells", std::to_string(report.cells.size())},
             {"failed_cells", std::to_string(failed)}};
  emit_report(report, m, o.out);

  for (const SizeSummary& s : summarize_by_size(report)) {
    out << "n=" << s.n << " d_psi=" << format_double(s.mean_d_psi)
        << " ky_fan=" << format_double(s.mean_ky_fan)
        << " sup_gap=" << format_double(s.mean_sup_gap) << "\n";
  }
  if (failed > 0) {
    err << failed << " of " << report.cells.size() << " cells failed; report is partial\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_validate_psi(const Options& o, std::ostream& out) {
  const auto config = require_config(o);
  if (!o.out.empty()) require_output(o.out);
  const PsiJob job = std::get<PsiJob>(parse_config(config, Command::kValidatePsi));
  const PsiValidationReport report = validate_psi(job.psi, job.grid_max, job.grid_n);

  std::ostringstream text;
  text << describe(job.psi) << "\n";
  for (PsiAxiom axiom : {PsiAxiom::kZeroAtOrigin, PsiAxiom::kPositive, PsiAxiom::kRange,
                         PsiAxiom::kMonotone, PsiAxiom::kSubadditive}) {
    text << to_string(axiom) << ": ";
    if (const auto v = report.first(axiom)) {
      text << "violated at a=" << format_double(v->a) << " b=" << format_double(v->b) << " ("
           << v->detail << ")\n";
    } else {
      text << "ok\n";
    }
  }
  out << text.str();
  if (!o.out.empty()) write_text_file(o.out, text.str());
  if (!report.passed()) throw ConfigError("psi fails " + std::to_string(report.violations.size()) +
                                          " of the admissibility checks");
  return kExitOk;
}

int cmd_report(const Options& o, const std::string& input, std::ostream& out) {
  if (!o.out.empty()) require_output(o.out);
  const ConvergenceReport report = parse_report_csv(read_text_file(input));
  std::string csv = "n,cells,mean_d_psi,mean_ky_fan,mean_sup_gap,mean_l1_gap,mean_risk_gap\n";
  for (const SizeSummary& s : summarize_by_size(report)) {
    csv += std::to_string(s.n) + "," + std::to_string(s.cells);
    for (double v : {s.mean_d_psi, s.mean_ky_fan, s.mean_sup_gap, s.mean_l1_gap, s.mean_risk_gap}) {
      csv += "," + format_double(v);
    }
    csv += "\n";
  }
  out << csv;
  if (report.partial()) out << "partial report: some cells failed\n";
  if (!o.out.empty()) write_text_file(o.out, csv);
  return kExitOk;
}

}  // namespace

Dataset read_dataset_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  std::vector<Point> inputs;
  std::vector<double> outputs;
  std::string line;
  int line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    std::vector<double> row;
    try {
      row = parse_row(line);
    } catch (const InputError& e) {
      if (inputs.empty() && width == 0) {
        width = static_cast<std::size_t>(-1);
        continue;
      }
      throw InputError(path.string() + " line " + std::to_string(line_no) + ": " + e.what());
    }
    if (row.size() < 2) {
      throw InputError(path.string() + " line " + std::to_string(line_no) +
                       ": need at least one input column and the output");
    }
    if (!inputs.empty() && row.size() != static_cast<std::size_t>(inputs.front().size()) + 1) {
      throw InputError(path.string() + " line " + std::to_string(line_no) +
                       ": inconsistent column count");
    }
    width = row.size();
    Point x(static_cast<Eigen::Index>(row.size() - 1));
    for (std::size_t j = 0; j + 1 < row.size(); ++j) x(static_cast<Eigen::Index>(j)) = row[j];
    inputs.push_back(std::move(x));
    outputs.push_back(row.back());
  }
  if (inputs.empty()) throw InputError(path.string() + ": no data rows");
  return Dataset(std::move(inputs), std::move(outputs));
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kernel approximation diagnostics and convergence studies", "kdense"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("kdense ") + kVersion);

  Options o;
  std::string report_input;
  std::vector<CLI::App*> subs;
  auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--out", o.out, "Output file; its directory must exist");
    sub->add_flag_function(
        "-v,--verbose", [&](std::int64_t count) { o.verbosity = static_cast<int>(count); },
        "Progress on stderr (-vv for more)");
    subs.push_back(sub);
    return sub;
  };
  auto with_config = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Config file")->required();
    return sub;
  };
  CLI::App* kernel_eval =
      with_config(add("kernel-eval", "Gram matrix and injectivity certificate for a point set"));
  CLI::App* fit = with_config(add("fit", "Fit a regularized kernel model to a CSV dataset"));
  CLI::App* study = with_config(add("study", "Run a convergence study and write a CSV report"));
  CLI::App* validate = with_config(add("validate-psi", "Check a psi function's admissibility"));
  CLI::App* report = add("report", "Summarize a study report by sample size");
  report->add_option("input", report_input, "Report CSV written by `study`")->required();
  for (CLI::App* sub : {fit, study}) {
    sub->add_option_function<std::uint64_t>(
        "--seed",
        [&](const std::uint64_t& s) {
          o.seed = s;
          o.seed_given = true;
        },
        "Override the config seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*kernel_eval) return cmd_kernel_eval(o, out);
    if (*fit) return cmd_fit(o, out, err);
    if (*study) return cmd_study(o, out, err);
    if (*validate) return cmd_validate_psi(o, out);
    if (*report) return cmd_report(o, report_input, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InputError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const VariantError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitConfig;
}

}  // namespace kdense::cli
