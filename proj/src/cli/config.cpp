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

#include "kdense/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "kdense/errors.hpp"

namespace kdense::cli {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string current;
  std::istringstream in(s);
  while (std::getline(in, current, sep)) parts.push_back(trim(current));
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

std::string display_key(const std::string& full) {
  const auto dot = full.find('.');
  if (dot == std::string::npos) return "'" + full + "'";
  return "'" + full.substr(dot + 1) + "' in [" + full.substr(0, dot) + "]";
}

// Typed access to a document restricted to a known key set.
class Reader {
 public:
  Reader(const ConfigDocument& doc, std::map<std::string, std::vector<std::string>> schema)
      : doc_(doc), schema_(std::move(schema)) {
    for (const auto& [full, entry] : doc_.entries()) {
      const auto dot = full.find('.');
      const std::string section = dot == std::string::npos ? "" : full.substr(0, dot);
      const std::string key = dot == std::string::npos ? full : full.substr(dot + 1);
      const auto it = schema_.find(section);
      if (it == schema_.end()) {
        std::vector<std::string> names;
        for (const auto& [s, keys] : schema_) {
          if (!s.empty()) names.push_back(s);
        }
        std::string msg = "unknown section [" + section + "]";
        if (auto hint = suggest_key(section, names)) msg += " (did you mean [" + *hint + "]?)";
        throw ConfigError(msg, entry.line);
      }
      if (std::find(it->second.begin(), it->second.end(), key) == it->second.end()) {
        std::string msg = "unknown key " + display_key(full);
        if (auto hint = suggest_key(key, it->second)) msg += " (did you mean '" + *hint + "'?)";
        throw ConfigError(msg, entry.line);
      }
    }
  }

  bool has(const std::string& key) const { return doc_.find(key) != nullptr; }
  int line(const std::string& key) const {
    const ConfigEntry* e = doc_.find(key);
    return e ? e->line : 0;
  }

  std::optional<std::string> text(const std::string& key) const {
    const ConfigEntry* e = doc_.find(key);
    if (!e) return std::nullopt;
    return e->value;
  }

  std::optional<double> number(const std::string& key) const {
    const ConfigEntry* e = doc_.find(key);
    if (!e) return std::nullopt;
    return to_double(e->value, key, e->line);
  }

  std::optional<std::uint64_t> integer(const std::string& key) const {
    const ConfigEntry* e = doc_.find(key);
    if (!e) return std::nullopt;
    std::uint64_t v = 0;
    const char* first = e->value.data();
    const char* last = first + e->value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
      throw ConfigError("key " + display_key(key) + " expects a nonnegative integer, got '" +
                            e->value + "'",
                        e->line);
    }
    return v;
  }

  std::optional<bool> boolean(const std::string& key) const {
    const ConfigEntry* e = doc_.find(key);
    if (!e) return std::nullopt;
    static const std::set<std::string> yes{"true", "yes", "on", "1"};
    static const std::set<std::string> no{"false", "no", "off", "0"};
    if (yes.count(e->value)) return true;
    if (no.count(e->value)) return false;
    throw ConfigError("key " + display_key(key) + " expects true or false, got '" + e->value + "'",
                      e->line);
  }

  std::optional<std::vector<double>> numbers(const std::string& key) const {
    const ConfigEntry* e = doc_.find(key);
    if (!e) return std::nullopt;
    std::vector<double> out;
    for (const std::string& part : split(e->value, ',')) out.push_back(to_double(part, key, e->line));
    if (out.empty()) throw ConfigError("key " + display_key(key) + " is an empty list", e->line);
    return out;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError("key " + display_key(key) + " " + what, line(key));
  }

  double positive(const std::string& key, double fallback) const {
    const double v = number(key).value_or(fallback);
    if (!(v > 0.0)) fail(key, "must be > 0 (got " + format_double(v) + ")");
    return v;
  }

  double nonnegative(const std::string& key, double fallback) const {
    const double v = number(key).value_or(fallback);
    if (!(v >= 0.0)) fail(key, "must be >= 0 (got " + format_double(v) + ")");
    return v;
  }

  std::string choice(const std::string& key, const std::string& fallback,
                     const std::vector<std::string>& options) const {
    const std::string v = text(key).value_or(fallback);
    if (std::find(options.begin(), options.end(), v) == options.end()) {
      std::string list;
      for (const auto& o : options) list += (list.empty() ? "" : ", ") + o;
      std::string msg = "must be one of {" + list + "}, got '" + v + "'";
      if (auto hint = suggest_key(v, options)) msg += " (did you mean '" + *hint + "'?)";
      fail(key, msg);
    }
    return v;
  }

 private:
  static double to_double(const std::string& s, const std::string& key, int line) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = first + s.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || s.empty() || !std::isfinite(v)) {
      throw ConfigError("key " + display_key(key) + " expects a finite number, got '" + s + "'",
                        line);
    }
    return v;
  }

  const ConfigDocument& doc_;
  std::map<std::string, std::vector<std::string>> schema_;
};

Point to_point(const std::vector<double>& v) {
  Point x(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) x(static_cast<Eigen::Index>(i)) = v[i];
  return x;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (double x : v) out += (out.empty() ? "" : ", ") + format_double(x);
  return out;
}

std::string join(const Point& p) {
  return join(std::vector<double>(p.data(), p.data() + p.size()));
}

PsiFunction read_psi(const Reader& r) {
  const std::string name = r.choice("psi", "psi2", {"psi1", "psi2", "custom"});
  if (name == "psi1") return Psi1{};
  if (name == "psi2") return Psi2{};
  const auto grid = r.numbers("psi_grid");
  const auto values = r.numbers("psi_values");
  if (!grid) r.fail("psi_grid", "is required when psi = custom");
  if (!values) r.fail("psi_values", "is required when psi = custom");
  try {
    return CustomPsi(*grid, *values);
  } catch (const InputError& e) {
    r.fail("psi_grid", std::string("is invalid: ") + e.what());
  }
}

void emit_psi(std::ostream& os, const PsiFunction& psi) {
  if (std::holds_alternative<Psi1>(psi)) {
    os << "psi = psi1\n";
  } else if (std::holds_alternative<Psi2>(psi)) {
    os << "psi = psi2\n";
  } else {
    const auto& c = std::get<CustomPsi>(psi);
    os << "psi = custom\npsi_grid = " << join(c.grid()) << "\npsi_values = " << join(c.values())
       << "\n";
  }
}

// [kernel] type/gamma/radius for point kernels with a fixed bandwidth.
Kernel read_point_kernel(const Reader& r) {
  const std::string type = r.choice("kernel.type", "gaussian", {"gaussian", "wendland"});
  if (type == "gaussian") {
    if (r.has("kernel.radius")) r.fail("kernel.radius", "only applies to type = wendland");
    if (!r.has("kernel.gamma")) r.fail("kernel.gamma", "is required for type = gaussian");
    return GaussianRbf(r.positive("kernel.gamma", 1.0));
  }
  if (r.has("kernel.gamma")) r.fail("kernel.gamma", "only applies to type = gaussian");
  if (!r.has("kernel.radius")) r.fail("kernel.radius", "is required for type = wendland");
  return WendlandC2(r.positive("kernel.radius", 1.0));
}

void emit_point_kernel(std::ostream& os, const Kernel& k) {
  os << "[kernel]\n";
  if (const auto* g = std::get_if<GaussianRbf>(&k)) {
    os << "type = gaussian\ngamma = " << format_double(g->gamma()) << "\n";
  } else {
    os << "type = wendland\nradius = " << format_double(std::get<WendlandC2>(k).support_radius())
       << "\n";
  }
}

TargetShape read_target_shape(const Reader& r) {
  const std::string type =
      r.choice("target.type", "indicator", {"indicator", "steps", "sign", "sine"});
  if (type == "indicator") {
    return IndicatorInterval{r.number("target.a").value_or(0.0),
                             r.number("target.b").value_or(0.5)};
  }
  if (type == "steps") {
    const auto spec = r.text("target.intervals");
    if (!spec) r.fail("target.intervals", "is required for type = steps");
    StepCombination steps;
    for (const std::string& item : split(*spec, ',')) {
      const auto parts = split(item, ':');
      if (parts.size() != 3) r.fail("target.intervals", "entries must look like a:b:level");
      std::vector<double> v;
      for (const auto& p : parts) {
        double x = 0.0;
        const auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), x);
        if (ec != std::errc() || ptr != p.data() + p.size() || p.empty()) {
          r.fail("target.intervals", "has a non-numeric entry '" + p + "'");
        }
        v.push_back(x);
      }
      steps.steps.push_back({v[0], v[1], v[2]});
    }
    return steps;
  }
  if (type == "sign") return Sign{r.number("target.offset").value_or(0.0)};
  return ContinuousSine{r.number("target.frequency").value_or(1.0)};
}

}  // namespace

ConfigDocument ConfigDocument::parse(const std::string& text) {
  ConfigDocument doc;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto comment = raw.find('#');
    const std::string line = trim(comment == std::string::npos ? raw : raw.substr(0, comment));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError("malformed section header '" + line + "'", line_no);
      }
      section = trim(line.substr(1, line.size() - 2));
      if (doc.section_lines_.count(section)) {
        throw ConfigError("duplicate section [" + section + "]", line_no);
      }
      doc.section_lines_[section] = line_no;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected 'key = value', got '" + line + "'", line_no);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key before '='", line_no);
    const std::string full = section.empty() ? key : section + "." + key;
    if (doc.entries_.count(full)) {
      throw ConfigError("duplicate key " + display_key(full) + " (first set on line " +
                            std::to_string(doc.entries_[full].line) + ")",
                        line_no);
    }
    doc.entries_[full] = {value, line_no};
  }
  return doc;
}

const ConfigEntry* ConfigDocument::find(const std::string& key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::string> ConfigDocument::sections() const {
  std::vector<std::string> out;
  for (const auto& [name, line] : section_lines_) out.push_back(name);
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::optional<std::string> suggest_key(const std::string& key,
                                       const std::vector<std::string>& candidates) {
  std::optional<std::string> best;
  std::size_t best_distance = 3;
  for (const auto& c : candidates) {
    const std::size_t dist = edit_distance(key, c);
    if (dist < best_distance) {
      best_distance = dist;
      best = c;
    }
  }
  return best;
}

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw InputError("cannot format number");
  return std::string(buf, ptr);
}

StudyConfig parse_study_config(const ConfigDocument& doc) {
  const Reader r(doc, {
      {"", {"seed", "replicates", "psi", "psi_grid", "psi_values", "eval_sample_size",
            "grid_resolution", "label_noise", "clip_bound", "record_timing", "threads"}},
      {"target", {"type", "a", "b", "intervals", "offset", "frequency", "domain_lower",
                  "domain_upper"}},
      {"kernel", {"type", "gamma", "radius", "scale"}},
      {"schedule", {"sample_sizes", "lambda_scale", "lambda_exponent", "sampler",
                    "sampler_mean", "sampler_sd"}},
  });
  StudyConfig cfg;
  cfg.seed = r.integer("seed").value_or(0);
  cfg.replicates = r.integer("replicates").value_or(1);
  if (cfg.replicates < 1) r.fail("replicates", "must be >= 1");
  cfg.psi = read_psi(r);
  cfg.eval_sample_size = r.integer("eval_sample_size").value_or(0);
  cfg.grid_resolution = r.integer("grid_resolution").value_or(10001);
  if (cfg.grid_resolution < 2) r.fail("grid_resolution", "must be >= 2");
  cfg.label_noise = r.nonnegative("label_noise", 0.0);
  if (r.has("clip_bound")) cfg.clip_bound = r.positive("clip_bound", 1.0);
  cfg.record_timing = r.boolean("record_timing").value_or(false);
  cfg.threads = r.integer("threads").value_or(1);

  cfg.target.shape = read_target_shape(r);
  const auto lower = r.numbers("target.domain_lower").value_or(std::vector<double>{0.0});
  const auto upper = r.numbers("target.domain_upper").value_or(std::vector<double>{1.0});
  if (lower.size() != upper.size()) {
    r.fail("target.domain_upper", "must have as many entries as domain_lower");
  }
  cfg.target.domain = Box{to_point(lower), to_point(upper)};
  try {
    cfg.target.validate();
  } catch (const InputError& e) {
    throw ConfigError(std::string("[target] ") + e.what(), r.line("target.type"));
  }

  const std::string family = r.choice("kernel.type", "gaussian", {"gaussian", "wendland"});
  cfg.kernel.family = family == "gaussian" ? KernelFamily::kGaussian : KernelFamily::kWendland;
  cfg.kernel.scale = r.positive("kernel.scale", 1.0);
  if (family == "gaussian") {
    if (r.has("kernel.radius")) r.fail("kernel.radius", "only applies to type = wendland");
    if (r.has("kernel.gamma")) cfg.kernel.fixed = r.positive("kernel.gamma", 1.0);
  } else {
    if (r.has("kernel.gamma")) r.fail("kernel.gamma", "only applies to type = gaussian");
    if (r.has("kernel.radius")) cfg.kernel.fixed = r.positive("kernel.radius", 1.0);
  }
  if (cfg.kernel.fixed && r.has("kernel.scale")) {
    r.fail("kernel.scale", "conflicts with a fixed bandwidth");
  }

  if (const auto sizes = r.numbers("schedule.sample_sizes")) {
    cfg.sample_sizes.clear();
    for (double s : *sizes) {
      if (!(s >= 1.0) || s != std::floor(s)) {
        r.fail("schedule.sample_sizes", "entries must be integers >= 1");
      }
      if (!cfg.sample_sizes.empty() && !(s > static_cast<double>(cfg.sample_sizes.back()))) {
        r.fail("schedule.sample_sizes", "must be strictly increasing");
      }
      cfg.sample_sizes.push_back(static_cast<std::size_t>(s));
    }
  }
  cfg.lambda.scale = r.positive("schedule.lambda_scale", 1.0);
  cfg.lambda.exponent = r.nonnegative("schedule.lambda_exponent", 1.0);
  const std::string sampler = r.choice("schedule.sampler", "uniform", {"uniform", "gaussian"});
  if (sampler == "uniform") {
    if (r.has("schedule.sampler_mean")) r.fail("schedule.sampler_mean", "needs sampler = gaussian");
    if (r.has("schedule.sampler_sd")) r.fail("schedule.sampler_sd", "needs sampler = gaussian");
    cfg.sampler = UniformSampler{};
  } else {
    cfg.sampler = TruncatedGaussianSampler{r.number("schedule.sampler_mean").value_or(0.5),
                                           r.positive("schedule.sampler_sd", 0.25)};
  }
  try {
    cfg.validate();
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

std::string emit_study_config(const StudyConfig& cfg) {
  std::ostringstream os;
  os << "seed = " << cfg.seed << "\n";
  os << "replicates = " << cfg.replicates << "\n";
  emit_psi(os, cfg.psi);
  os << "eval_sample_size = " << cfg.eval_sample_size << "\n";
  os << "grid_resolution = " << cfg.grid_resolution << "\n";
  os << "label_noise = " << format_double(cfg.label_noise) << "\n";
  if (cfg.clip_bound) os << "clip_bound = " << format_double(*cfg.clip_bound) << "\n";
  os << "record_timing = " << (cfg.record_timing ? "true" : "false") << "\n";
  os << "threads = " << cfg.threads << "\n";

  os << "\n[target]\n";
  const TargetShape& shape = cfg.target.shape;
  if (const auto* ind = std::get_if<IndicatorInterval>(&shape)) {
    os << "type = indicator\na = " << format_double(ind->a) << "\nb = " << format_double(ind->b)
       << "\n";
  } else if (const auto* steps = std::get_if<StepCombination>(&shape)) {
    os << "type = steps\nintervals = ";
    for (std::size_t i = 0; i < steps->steps.size(); ++i) {
      const Step& s = steps->steps[i];
      os << (i ? ", " : "") << format_double(s.a) << ":" << format_double(s.b) << ":"
         << format_double(s.level);
    }
    os << "\n";
  } else if (const auto* sign = std::get_if<Sign>(&shape)) {
    os << "type = sign\noffset = " << format_double(sign->offset) << "\n";
  } else {
    os << "type = sine\nfrequency = " << format_double(std::get<ContinuousSine>(shape).frequency)
       << "\n";
  }
  os << "domain_lower = " << join(cfg.target.domain.lower) << "\n";
  os << "domain_upper = " << join(cfg.target.domain.upper) << "\n";

  os << "\n[kernel]\n";
  const bool gaussian = cfg.kernel.family == KernelFamily::kGaussian;
  os << "type = " << (gaussian ? "gaussian" : "wendland") << "\n";
  if (cfg.kernel.fixed) {
    os << (gaussian ? "gamma = " : "radius = ") << format_double(*cfg.kernel.fixed) << "\n";
  } else {
    os << "scale = " << format_double(cfg.kernel.scale) << "\n";
  }

  os << "\n[schedule]\n";
  os << "sample_sizes = ";
  for (std::size_t i = 0; i < cfg.sample_sizes.size(); ++i) {
    os << (i ? ", " : "") << cfg.sample_sizes[i];
  }
  os << "\n";
  os << "lambda_scale = " << format_double(cfg.lambda.scale) << "\n";
  os << "lambda_exponent = " << format_double(cfg.lambda.exponent) << "\n";
  if (const auto* g = std::get_if<TruncatedGaussianSampler>(&cfg.sampler)) {
    os << "sampler = gaussian\nsampler_mean = " << format_double(g->mean)
       << "\nsampler_sd = " << format_double(g->sd) << "\n";
  } else {
    os << "sampler = uniform\n";
  }
  return os.str();
}

FitJob parse_fit_config(const ConfigDocument& doc, const std::filesystem::path& base_dir) {
  const Reader r(doc, {
      {"", {"seed", "data", "solver", "loss", "tau", "output_bound", "clip_bound"}},
      {"kernel", {"type", "gamma", "radius"}},
      {"fit", {"lambda", "max_iters", "step_size0", "tol"}},
  });
  FitJob job;
  job.kernel = read_point_kernel(r);
  const auto data = r.text("data");
  if (!data || data->empty()) r.fail("data", "is required (path to a CSV of x1,...,xd,y rows)");
  job.data = std::filesystem::path(*data);
  if (job.data.is_relative() && !base_dir.empty()) job.data = base_dir / job.data;

  const std::string solver = r.choice("solver", "ridge", {"ridge", "subgradient", "pairwise"});
  job.solver = solver == "ridge"         ? FitJob::Solver::kRidge
               : solver == "subgradient" ? FitJob::Solver::kSubgradient
                                         : FitJob::Solver::kPairwise;
  const std::string loss = r.choice("loss", "squared", {"squared", "absolute", "pinball"});
  if (loss != "pinball" && r.has("tau")) r.fail("tau", "only applies to loss = pinball");
  if (loss != "squared" && r.has("output_bound")) {
    r.fail("output_bound", "only applies to loss = squared");
  }
  if (loss == "squared") {
    job.loss = LossFunction::squared(r.positive("output_bound", 1.0));
  } else if (loss == "absolute") {
    job.loss = LossFunction::absolute();
  } else {
    const double tau = r.number("tau").value_or(0.5);
    if (!(tau > 0.0 && tau < 1.0)) r.fail("tau", "must lie in (0, 1)");
    job.loss = LossFunction::pinball(tau);
  }
  if (job.solver == FitJob::Solver::kRidge && loss != "squared") {
    r.fail("loss", "must be squared for solver = ridge");
  }
  if (job.solver == FitJob::Solver::kPairwise && loss != "squared") {
    r.fail("loss", "must be squared for solver = pairwise (ranking-squared loss)");
  }
  if (r.has("clip_bound")) job.clip_bound = r.positive("clip_bound", 1.0);

  job.fit.seed = r.integer("seed").value_or(0);
  job.fit.lambda = r.positive("fit.lambda", job.fit.lambda);
  const auto iters = r.integer("fit.max_iters").value_or(static_cast<std::uint64_t>(job.fit.max_iters));
  if (iters < 1 || iters > 100'000'000) r.fail("fit.max_iters", "must lie in [1, 1e8]");
  job.fit.max_iters = static_cast<int>(iters);
  job.fit.step_size0 = r.positive("fit.step_size0", job.fit.step_size0);
  job.fit.tol = r.positive("fit.tol", job.fit.tol);
  return job;
}

std::string emit_fit_config(const FitJob& job) {
  std::ostringstream os;
  os << "seed = " << job.fit.seed << "\n";
  os << "data = " << job.data.string() << "\n";
  switch (job.solver) {
    case FitJob::Solver::kRidge: os << "solver = ridge\n"; break;
    case FitJob::Solver::kSubgradient: os << "solver = subgradient\n"; break;
    case FitJob::Solver::kPairwise: os << "solver = pairwise\n"; break;
  }
  switch (job.loss.kind()) {
    case LossFunction::Kind::kSquared:
      os << "loss = squared\noutput_bound = " << format_double(job.loss.lipschitz_constant() / 4.0)
         << "\n";
      break;
    case LossFunction::Kind::kAbsolute: os << "loss = absolute\n"; break;
    case LossFunction::Kind::kPinball:
      os << "loss = pinball\ntau = " << format_double(job.loss.tau()) << "\n";
      break;
  }
  if (job.clip_bound) os << "clip_bound = " << format_double(*job.clip_bound) << "\n";
  os << "\n";
  emit_point_kernel(os, job.kernel);
  os << "\n[fit]\n";
  os << "lambda = " << format_double(job.fit.lambda) << "\n";
  os << "max_iters = " << job.fit.max_iters << "\n";
  os << "step_size0 = " << format_double(job.fit.step_size0) << "\n";
  os << "tol = " << format_double(job.fit.tol) << "\n";
  return os.str();
}

KernelEvalJob parse_kernel_eval_config(const ConfigDocument& doc) {
  const Reader r(doc, {{"", {"points", "precision"}}, {"kernel", {"type", "gamma", "radius"}}});
  KernelEvalJob job;
  job.kernel = read_point_kernel(r);
  const auto spec = r.text("points");
  if (!spec) r.fail("points", "is required (semicolon-separated points, e.g. 0,0; 1,0)");
  for (const std::string& item : split(*spec, ';')) {
    if (item.empty()) continue;
    std::vector<double> coords;
    for (const std::string& c : split(item, ',')) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc() || ptr != c.data() + c.size() || c.empty() || !std::isfinite(v)) {
        r.fail("points", "has a non-numeric coordinate '" + c + "'");
      }
      coords.push_back(v);
    }
    job.points.push_back(to_point(coords));
  }
  if (job.points.empty()) r.fail("points", "must list at least one point");
  for (const Point& p : job.points) {
    if (p.size() != job.points.front().size()) r.fail("points", "must share one dimension");
  }
  job.precision = r.choice("precision", "double", {"double", "extended"}) == "double"
                      ? Precision::kDouble
                      : Precision::kExtended;
  return job;
}

PsiJob parse_psi_config(const ConfigDocument& doc) {
  const Reader r(doc, {{"", {"psi", "psi_grid", "psi_values", "grid_max", "grid_n"}}});
  PsiJob job;
  job.psi = read_psi(r);
  job.grid_max = r.positive("grid_max", 10.0);
  const auto n = r.integer("grid_n").value_or(1000);
  if (n < 2 || n > 1'000'000) r.fail("grid_n", "must lie in [2, 1e6]");
  job.grid_n = static_cast<int>(n);
  return job;
}

ParsedConfig parse_config(const std::filesystem::path& path, Command command) {
  const ConfigDocument doc = ConfigDocument::parse(read_text_file(path));
  switch (command) {
    case Command::kStudy: return parse_study_config(doc);
    case Command::kFit: return parse_fit_config(doc, path.parent_path());
    case Command::kKernelEval: return parse_kernel_eval_config(doc);
    case Command::kValidatePsi: return parse_psi_config(doc);
    case Command::kReport: break;
  }
  throw ConfigError("the report command reads a report CSV, not a config file");
}

}  // namespace kdense::cli
