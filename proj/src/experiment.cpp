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


#include "steinfisher/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "steinfisher/distances.hpp"
#include "steinfisher/errors.hpp"
#include "steinfisher/estimate.hpp"
#include "steinfisher/moments.hpp"
#include "steinfisher/samplemean.hpp"

namespace steinfisher {

namespace {

const std::vector<std::string> kExperiments = {"sum_rate",     "samplemean_rate", "quadform_rate",
                                               "kernel_check", "negmoment",       "convert"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(std::string(key), "cannot parse '" + std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(std::string(key), "expected true or false, got '" + std::string(text) + "'");
}

std::vector<int> parse_grid(std::string_view key, std::string_view text) {
  std::vector<int> grid;
  std::string s(text);
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::string token;
  while (in >> token) grid.push_back(parse_number<int>(key, token));
  return grid;
}

bool is_rate(const std::string& experiment) {
  return experiment == "sum_rate" || experiment == "samplemean_rate" || experiment == "quadform_rate";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

using Clock = std::chrono::steady_clock;

struct Timer {
  bool enabled;
  Clock::time_point start = Clock::now();
  double elapsed_ms() const {
    if (!enabled) return 0.0;
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  }
};

class RowSink {
 public:
  RowSink(const ExperimentConfig& c, ExperimentResult& r) : config_(c), result_(r) {}

  void add(std::uint64_t n, std::string estimator, double estimate, double se = 0.0,
           double guarded = 0.0, double ms = 0.0) {
    result_.rows.push_back({config_.experiment, n, config_.reps, config_.seed, std::move(estimator),
                            estimate, se, guarded, ms});
  }

 private:
  const ExperimentConfig& config_;
  ExperimentResult& result_;
};

std::vector<DistributionSpec> iid(const std::string& name, int n) {
  return std::vector<DistributionSpec>(static_cast<std::size_t>(n), catalog_get(name));
}

// Shared tail of the three rate experiments: the upper estimate, the
// split-sample plug-in estimate and the empirical Kolmogorov distance at one n.
double score_rows(const ExperimentConfig& config, RowSink& sink, int n, const PairSource& source,
                  const Timer& timer) {
  const SamplingPlan plan{config.seed, kEvalTag, static_cast<std::uint64_t>(n), config.reps};
  const std::vector<ScorePair> eval = draw_pairs(source, plan);
  const UpperEstimate upper = fisher_distance_upper(eval);
  sink.add(n, "upper", upper.estimate, upper.standard_error, upper.guarded_fraction,
           timer.elapsed_ms());
  if (config.reps >= 10000) {
    const std::vector<ScorePair> fit = draw_pairs(source, fit_plan(plan));
    const BinnedScore score = fit_score(fit, {config.bins, 50});
    const PluginEstimate plugin = fisher_distance_plugin(eval, score);
    sink.add(n, "plugin", plugin.estimate, plugin.standard_error, upper.guarded_fraction,
             timer.elapsed_ms());
    std::vector<double> f;
    f.reserve(eval.size());
    for (const auto& p : eval) f.push_back(p.f_value);
    sink.add(n, "kolmogorov_empirical", kolmogorov_empirical(f), 0.0, 0.0, timer.elapsed_ms());
  }
  return upper.estimate;
}

void rate_rows(RowSink& sink, ExperimentResult& result,
               const std::vector<double>& ns, const std::vector<double>& errors) {
  if (ns.size() < 4) return;
  if (std::any_of(errors.begin(), errors.end(), [](double e) { return !(e > 0.0); })) {
    result.notes.push_back("rate fit skipped: some upper estimates are zero");
    return;
  }
  const RateFit fit = fit_rate(ns, errors);
  sink.add(0, "rate_slope", fit.slope);
  sink.add(0, "rate_intercept", fit.intercept);
  sink.add(0, "rate_r2", fit.r_squared);
}

CoefficientMatrix matrix_for(const ExperimentConfig& config, int n) {
  const std::string& m = config.matrix;
  if (m == "random") return random_matrix(n, config.seed);
  if (m == "file") return parse_matrix_file(config.matrix_path);
  if (m.rfind("banded:", 0) == 0) {
    return banded_matrix(n, parse_number<int>("matrix", std::string_view(m).substr(7)));
  }
  throw ConfigError("matrix", "expected banded:<bandwidth>, random or file, got '" + m + "'");
}

NonnegativeLaw law_from_name(const std::string& name) {
  if (name == "gaussian_square") return gaussian_square();
  if (name == "one") return constant_one();
  if (name.rfind("stein_kernel:", 0) == 0) return stein_kernel_law(catalog_get(name.substr(13)));
  throw ConfigError("law", "expected gaussian_square, one or stein_kernel:<dist>, got '" + name + "'");
}

void run_sum_or_samplemean(const ExperimentConfig& config, ExperimentResult& result, bool with_link) {
  RowSink sink(config, result);
  const SmoothLink link = with_link ? link_from_name(config.link) : identity_link();
  std::vector<double> ns, errors;
  for (int n : config.n_grid) {
    const Timer timer{config.record_timing};
    const SampleMeanModel model =
        make_sample_mean_model(link, iid(config.dist, n), config.pre_pass_reps, config.seed);
    if (!model.exact_moments) {
      sink.add(n, "pre_pass_sigma", model.sigma, model.sigma_se, 0.0, timer.elapsed_ms());
      sink.add(n, "pre_pass_mu", model.mu_h, model.mu_se, 0.0, timer.elapsed_ms());
    }
    const PairSource source = [&model](Stream& s) { return draw_score_pair_sm(model, s); };
    ns.push_back(n);
    errors.push_back(score_rows(config, sink, n, source, timer));
  }
  rate_rows(sink, result, ns, errors);
}

void run_quadform(const ExperimentConfig& config, ExperimentResult& result) {
  RowSink sink(config, result);
  std::vector<int> grid = config.n_grid;
  if (config.matrix == "file") grid = {static_cast<int>(parse_matrix_file(config.matrix_path).n())};
  std::vector<double> ns, errors;
  for (int n : grid) {
    const Timer timer{config.record_timing};
    const QuadFormModel model(matrix_for(config, n), iid(config.dist, n));
    const MatrixFunctionals mf = matrix_functionals(model.matrix);
    sink.add(n, "structural_factor", mf.structural_factor);
    sink.add(n, "berry_factor", mf.berry_factor);
    if (config.dist == "gaussian") {
      try {
        const double norm8 = gaussian_negative_moment_norm(model.matrix, 8.0);
        sink.add(n, "neg_norm8", norm8);
        sink.add(n, "fisher_bound_factor", fisher_bound_factor(model, norm8));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NotIntegrable) throw;
        result.notes.push_back("n=" + std::to_string(n) + ": " + e.what());
      }
    }
    const PairSource source = [&model](Stream& s) { return draw_score_pair(model, s); };
    ns.push_back(n);
    errors.push_back(score_rows(config, sink, n, source, timer));
  }
  rate_rows(sink, result, ns, errors);
}

void run_kernel_check(const ExperimentConfig& config, ExperimentResult& result) {
  RowSink sink(config, result);
  const DistributionSpec dist = catalog_get(config.dist);
  double worst = 0.0;
  constexpr int kPoints = 50;
  for (int i = 0; i < kPoints; ++i) {
    const double x = quantile(dist, 0.01 + 0.98 * i / (kPoints - 1));
    worst = std::max(worst, std::abs(dist.tau(x) - stein_kernel_by_quadrature(dist, x)));
  }
  sink.add(0, "kernel_max_abs_diff", worst);
  sink.add(0, "kernel_mean_minus_one", expectation(dist, dist.kernel.tau) - 1.0);
}

void run_negmoment(const ExperimentConfig& config, ExperimentResult& result) {
  RowSink sink(config, result);
  const NonnegativeLaw law = law_from_name(config.law);
  for (const TrendPoint& point : ujmld_trend(law, config.alpha, config.n_grid)) {
    if (!point.value) {
      result.notes.push_back("n=" + std::to_string(point.n) + " skipped: " + point.note);
      continue;
    }
    const double scale = std::pow(static_cast<double>(point.n), config.alpha);
    sink.add(point.n, "neg_moment", *point.value / scale);
    sink.add(point.n, "trend", *point.value);
  }
}

void run_convert(const ExperimentConfig& config, ExperimentResult& result) {
  RowSink sink(config, result);
  const DistanceReport r = convert(*config.fisher);
  sink.add(0, "fisher", r.fisher);
  sink.add(0, "uniform_density", r.uniform_density);
  sink.add(0, "kl", r.kl);
  sink.add(0, "wasserstein2", r.wasserstein2);
  sink.add(0, "total_variation", r.total_variation);
  sink.add(0, "total_variation_above_cap", r.total_variation_above_cap() ? 1.0 : 0.0);
  sink.add(0, "kolmogorov", r.kolmogorov);
  sink.add(0, "kolmogorov_above_cap", r.kolmogorov_above_cap() ? 1.0 : 0.0);
}

}  // namespace

std::vector<std::string> config_keys() {
  return {"experiment", "dist",   "link",   "matrix", "matrix_path",   "n_grid",
          "reps",       "bins",   "seed",   "out",    "format",        "alpha",
          "law",        "fisher", "record_timing",    "pre_pass_reps"};
}

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view raw) {
  const std::string_view value = trim(raw);
  const std::string k(key);
  if (key == "experiment") {
    c.experiment = value;
  } else if (key == "dist") {
    c.dist = value;
  } else if (key == "link") {
    c.link = value;
  } else if (key == "matrix") {
    c.matrix = value;
  } else if (key == "matrix_path") {
    c.matrix_path = value;
  } else if (key == "n_grid") {
    c.n_grid = parse_grid(k, value);
  } else if (key == "reps") {
    c.reps = parse_number<std::size_t>(k, value);
  } else if (key == "bins") {
    c.bins = parse_number<int>(k, value);
  } else if (key == "seed") {
    c.seed = parse_number<std::uint64_t>(k, value);
  } else if (key == "out") {
    c.out = value;
  } else if (key == "format") {
    c.format = value;
  } else if (key == "alpha") {
    c.alpha = parse_number<double>(k, value);
  } else if (key == "law") {
    c.law = value;
  } else if (key == "fisher") {
    c.fisher = parse_number<double>(k, value);
  } else if (key == "record_timing") {
    c.record_timing = parse_bool(k, value);
  } else if (key == "pre_pass_reps") {
    c.pre_pass_reps = parse_number<std::size_t>(k, value);
  } else {
    throw ConfigError(k, "unknown key");
  }
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig config;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(std::string_view(line).substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected key=value");
    }
    apply_setting(config, trim(body.substr(0, eq)), body.substr(eq + 1));
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

void validate(const ExperimentConfig& c) {
  if (std::find(kExperiments.begin(), kExperiments.end(), c.experiment) == kExperiments.end()) {
    throw ConfigError("experiment", "expected one of sum_rate, samplemean_rate, quadform_rate, "
                                    "kernel_check, negmoment, convert; got '" + c.experiment + "'");
  }
  if (c.format != "csv" && c.format != "json") throw ConfigError("format", "expected csv or json");
  for (std::size_t i = 0; i < c.n_grid.size(); ++i) {
    if (c.n_grid[i] <= 0) throw ConfigError("n_grid", "entries must be positive");
    if (i > 0 && c.n_grid[i] <= c.n_grid[i - 1]) throw ConfigError("n_grid", "must be strictly increasing");
  }
  if (c.bins < 1) throw ConfigError("bins", "must be positive");
  const bool needs_grid = c.experiment != "kernel_check" && c.experiment != "convert" &&
                          !(c.experiment == "quadform_rate" && c.matrix == "file");
  if (needs_grid && c.n_grid.empty()) throw ConfigError("n_grid", "required for " + c.experiment);
  if (is_rate(c.experiment) && c.reps < 1000) {
    throw ConfigError("reps", "rate experiments need at least 1000 replications");
  }
  if (c.experiment == "samplemean_rate") {
    if (c.link.empty()) throw ConfigError("link", "required for samplemean_rate");
    try {
      link_from_name(c.link);
    } catch (const Error& e) {
      throw ConfigError("link", e.what());
    }
  }
  if (c.experiment == "quadform_rate") {
    if (c.matrix.empty()) throw ConfigError("matrix", "required for quadform_rate");
    if (c.matrix == "file" && c.matrix_path.empty()) {
      throw ConfigError("matrix_path", "required when matrix=file");
    }
    if (c.matrix != "file" && c.matrix != "random" && c.matrix.rfind("banded:", 0) != 0) {
      throw ConfigError("matrix", "expected banded:<bandwidth>, random or file");
    }
    if (c.matrix != "file" && !c.n_grid.empty() && c.n_grid.front() < 2) {
      throw ConfigError("n_grid", "quadratic forms need n >= 2");
    }
  }
  if (is_rate(c.experiment) || c.experiment == "kernel_check") {
    try {
      catalog_get(c.dist);
    } catch (const Error& e) {
      throw ConfigError("dist", e.what());
    }
  }
  if (c.experiment == "negmoment" && !(c.alpha > 0.0)) throw ConfigError("alpha", "must be positive");
  if (c.experiment == "convert") {
    if (!c.fisher) throw ConfigError("fisher", "required for convert");
    if (!(*c.fisher >= 0.0)) throw ConfigError("fisher", "must be nonnegative");
  }
}

CoefficientMatrix parse_matrix(std::istream& in) {
  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      const std::string_view body = trim(line);
      if (!body.empty() && body.front() != '#') return true;
    }
    return false;
  };
  if (!next_line()) throw ParseError(line_no, "empty matrix file");
  const std::string_view first = trim(line);
  int n = 0;
  const auto [ptr, ec] = std::from_chars(first.data(), first.data() + first.size(), n);
  if (ec != std::errc() || ptr != first.data() + first.size() || n < 2) {
    throw ParseError(line_no, "first line must be the dimension n >= 2");
  }
  Eigen::MatrixXd a(n, n);
  for (int u = 0; u < n; ++u) {
    if (!next_line()) throw ParseError(line_no, "expected " + std::to_string(n) + " rows, got " + std::to_string(u));
    std::istringstream row(line);
    std::string token;
    int v = 0;
    while (row >> token) {
      if (v >= n) throw ParseError(line_no, "more than " + std::to_string(n) + " entries");
      double value = 0.0;
      const auto r = std::from_chars(token.data(), token.data() + token.size(), value);
      if (r.ec != std::errc() || r.ptr != token.data() + token.size()) {
        throw ParseError(line_no, "cannot parse '" + token + "'");
      }
      a(u, v++) = value;
    }
    if (v != n) throw ParseError(line_no, "expected " + std::to_string(n) + " entries, got " + std::to_string(v));
    if (a(u, u) != 0.0) throw ParseError(line_no, "nonzero diagonal entry");
    for (int w = 0; w < u; ++w) {
      const double scale = std::max({std::abs(a(u, w)), std::abs(a(w, u)), 1e-300});
      if (std::abs(a(u, w) - a(w, u)) > 1e-12 * scale) {
        throw ParseError(line_no, "asymmetric entry (" + std::to_string(u + 1) + ", " +
                                      std::to_string(w + 1) + ")");
      }
    }
  }
  if (next_line()) throw ParseError(line_no, "trailing data after " + std::to_string(n) + " rows");
  return CoefficientMatrix::from_upper_triangle(a);
}

CoefficientMatrix parse_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("matrix_path", "cannot open '" + path + "'");
  return parse_matrix(in);
}

ExperimentResult run(const ExperimentConfig& config) {
  validate(config);
  ExperimentResult result;
  const std::string& e = config.experiment;
  if (e == "sum_rate") {
    run_sum_or_samplemean(config, result, false);
  } else if (e == "samplemean_rate") {
    run_sum_or_samplemean(config, result, true);
  } else if (e == "quadform_rate") {
    run_quadform(config, result);
  } else if (e == "kernel_check") {
    run_kernel_check(config, result);
  } else if (e == "negmoment") {
    run_negmoment(config, result);
  } else {
    run_convert(config, result);
  }
  return result;
}

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  out << kSchemaLine << '\n'
      << "experiment,n,reps,seed,estimator,estimate,standard_error,guarded_fraction,wall_time_ms\n";
  for (const auto& r : rows) {
    out << r.experiment << ',' << r.n << ',' << r.reps << ',' << r.seed << ',' << r.estimator << ','
        << format_double(r.estimate) << ',' << format_double(r.standard_error) << ','
        << format_double(r.guarded_fraction) << ',' << format_double(r.wall_time_ms) << '\n';
  }
}

void write_json(const std::vector<ResultRow>& rows, std::ostream& out) {
  nlohmann::json doc;
  doc["schema"] = std::string(kSchemaLine.substr(2));
  doc["rows"] = nlohmann::json::array();
  for (const auto& r : rows) {
    doc["rows"].push_back({{"experiment", r.experiment},
                           {"n", r.n},
                           {"reps", r.reps},
                           {"seed", r.seed},
                           {"estimator", r.estimator},
                           {"estimate", r.estimate},
                           {"standard_error", r.standard_error},
                           {"guarded_fraction", r.guarded_fraction},
                           {"wall_time_ms", r.wall_time_ms}});
  }
  out << doc.dump(2) << '\n';
}

std::vector<ResultRow> read_csv(std::istream& in) {
  std::vector<ResultRow> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#' || line.rfind("experiment,", 0) == 0) continue;
    std::vector<std::string> cells;
    std::istringstream cell_stream(line);
    std::string cell;
    while (std::getline(cell_stream, cell, ',')) cells.push_back(cell);
    if (cells.size() != 9) throw ParseError(line_no, "expected 9 columns");
    ResultRow r;
    r.experiment = cells[0];
    r.n = std::stoull(cells[1]);
    r.reps = std::stoull(cells[2]);
    r.seed = std::stoull(cells[3]);
    r.estimator = cells[4];
    r.estimate = std::stod(cells[5]);
    r.standard_error = std::stod(cells[6]);
    r.guarded_fraction = std::stod(cells[7]);
    r.wall_time_ms = std::stod(cells[8]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ResultRow> read_json(std::istream& in) {
  const nlohmann::json doc = nlohmann::json::parse(in);
  std::vector<ResultRow> rows;
  for (const auto& j : doc.at("rows")) {
    rows.push_back({j.at("experiment").get<std::string>(), j.at("n").get<std::uint64_t>(),
                    j.at("reps").get<std::uint64_t>(), j.at("seed").get<std::uint64_t>(),
                    j.at("estimator").get<std::string>(), j.at("estimate").get<double>(),
                    j.at("standard_error").get<double>(), j.at("guarded_fraction").get<double>(),
                    j.at("wall_time_ms").get<double>()});
  }
  return rows;
}

}  // namespace steinfisher
