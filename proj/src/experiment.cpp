#include "goamp/experiment.hpp"

#include "goamp/baselines.hpp"
#include "goamp/state_evolution.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

namespace goamp {

const char* const kCsvHeader = "mode,algorithm,kappa,delta,trial,iteration,err_unnorm,err_normdir,wall_ms,flags";

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

[[noreturn]] void fail(const std::string& origin, const std::string& msg) { throw ConfigError(origin + ": " + msg); }

double to_double(const std::string& v, const std::string& origin) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) fail(origin, "not a number: '" + v + "'");
    return d;
  } catch (const std::logic_error&) {
    fail(origin, "not a number: '" + v + "'");
  }
}

long long to_int(const std::string& v, const std::string& origin) {
  try {
    std::size_t pos = 0;
    const long long i = std::stoll(v, &pos);
    if (pos != v.size()) fail(origin, "not an integer: '" + v + "'");
    return i;
  } catch (const std::logic_error&) {
    fail(origin, "not an integer: '" + v + "'");
  }
}

std::uint64_t to_u64(const std::string& v, const std::string& origin) {
  try {
    std::size_t pos = 0;
    if (!v.empty() && v[0] == '-') fail(origin, "seed must be non-negative");
    const unsigned long long i = std::stoull(v, &pos);
    if (pos != v.size()) fail(origin, "not an integer: '" + v + "'");
    return i;
  } catch (const std::logic_error&) {
    fail(origin, "not an integer: '" + v + "'");
  }
}

bool to_bool(const std::string& v, const std::string& origin) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(origin, "not a boolean: '" + v + "'");
}

std::vector<double> to_doubles(const std::string& v, const std::string& origin) {
  std::vector<double> out;
  for (const auto& s : split_list(v)) out.push_back(to_double(s, origin));
  if (out.empty()) fail(origin, "empty list");
  return out;
}

DampingConfig to_damping(const std::string& v, const std::string& origin) {
  const auto d = to_doubles(v, origin);
  if (d.size() != 2) fail(origin, "damping expects theta_x,theta_z");
  for (double t : d) {
    if (!(t > 0.0 && t <= 1.0)) fail(origin, "damping factors must lie in (0, 1]");
  }
  return {d[0], d[1]};
}

int default_iterations(const std::string& algorithm, Index k) {
  if (algorithm == "fista") return 1000;
  if (algorithm == "glasso") return 50;
  if (algorithm == "omp") return static_cast<int>(k);
  return 20;
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
  const auto threads = static_cast<std::size_t>(std::max(1, workers));
  if (threads == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(threads, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (const auto& f : flags) {
    if (!out.empty()) out += '|';
    out += f;
  }
  return out;
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r' || c == '|' || c == '"') c = ' ';
  }
  return s;
}

double direction_error_or_nan(const Vector& x_hat, const Vector& x) {
  return x_hat.norm() > 0.0 && x.norm() > 0.0 ? normalized_direction_error(x_hat, x) : kNaN;
}

struct GridPoint {
  Index m = 0;
  double kappa = 1.0;
  double delta = 0.0;
};

std::vector<GridPoint> simulation_grid(const ExperimentConfig& c) {
  std::vector<GridPoint> grid;
  for (Index m : c.m) {
    for (double kappa : c.kappa) grid.push_back({m, kappa, delta_of(c.n, c.k, m)});
  }
  return grid;
}

bool is_lasso(const std::string& a) { return a == "fista" || a == "glasso"; }

}  // namespace

void RawConfig::set(const std::string& key, const std::string& value, const std::string& origin) {
  entries[key] = {value, origin};
}

const std::vector<std::string>& known_config_keys() {
  static const std::vector<std::string> keys = {
      "mode",   "channel", "n",          "k",        "m",          "delta",          "kappa",
      "snr_db", "sigma2",  "law",        "power",    "two_point",  "algorithms",     "iterations",
      "trials", "damping", "damping_kappa1", "seed", "out",        "quantiles",      "workers",
      "trace",  "timing",  "lambda_tuning_trials", "lambda_grid_size", "se_iterations", "se_atoms",
      "chart_points", "chart_v_min"};
  return keys;
}

const std::vector<std::string>& known_algorithms() {
  static const std::vector<std::string> algs = {"goamp", "oamp", "gamp-ablation", "fista", "omp", "biht", "glasso"};
  return algs;
}

RawConfig parse_config_text(const std::string& text, const std::string& source) {
  RawConfig raw;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string origin = source + ":" + std::to_string(lineno);
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(origin, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) fail(origin, "missing key");
    if (raw.entries.count(key)) fail(origin, "duplicate key '" + key + "'");
    raw.set(key, trim(line.substr(eq + 1)), origin);
  }
  return raw;
}

RawConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

ExperimentConfig build_config(const RawConfig& raw) {
  ExperimentConfig c;
  const auto& keys = known_config_keys();
  for (const auto& [key, vo] : raw.entries) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) fail(vo.second, "unknown key '" + key + "'");
  }
  auto get = [&](const std::string& key) -> const std::pair<std::string, std::string>* {
    auto it = raw.entries.find(key);
    return it == raw.entries.end() ? nullptr : &it->second;
  };

  if (auto e = get("mode")) {
    const auto& v = e->first;
    if (v == "simulate") c.mode = Mode::Simulate;
    else if (v == "se") c.mode = Mode::Se;
    else if (v == "chart") c.mode = Mode::Chart;
    else if (v == "threshold") c.mode = Mode::Threshold;
    else fail(e->second, "unknown mode '" + v + "'");
  }
  if (auto e = get("channel")) {
    const auto& v = e->first;
    if (v == "linear") c.one_bit = false;
    else if (v == "onebit" || v == "one_bit" || v == "1bit") c.one_bit = true;
    else fail(e->second, "unknown channel '" + v + "' (linear, onebit)");
  }
  if (auto e = get("n")) c.n = to_int(e->first, e->second);
  if (auto e = get("k")) c.k = to_int(e->first, e->second);
  if (auto e = get("m")) {
    c.m.clear();
    for (const auto& s : split_list(e->first)) c.m.push_back(to_int(s, e->second));
    if (c.m.empty()) fail(e->second, "empty list");
  }
  if (auto e = get("delta")) c.delta = to_doubles(e->first, e->second);
  if (auto e = get("kappa")) c.kappa = to_doubles(e->first, e->second);
  if (auto e = get("snr_db")) c.snr_db = to_double(e->first, e->second);
  if (auto e = get("sigma2")) c.sigma2_given = to_double(e->first, e->second);
  if (c.snr_db && c.sigma2_given) {
    fail(get("sigma2")->second, "snr_db and sigma2 are mutually exclusive (snr_db set at " + get("snr_db")->second + ")");
  }

  double power = 1.0;
  if (auto e = get("power")) {
    power = to_double(e->first, e->second);
    if (!(power > 0.0)) fail(e->second, "power must be positive");
  }
  std::string law = "gaussian";
  std::string law_origin = "default";
  if (auto e = get("law")) {
    law = e->first;
    law_origin = e->second;
  }
  if (law == "gaussian") {
    c.law = NonzeroLaw::gaussian(power);
  } else if (law == "constant") {
    c.law = NonzeroLaw::constant(power);
  } else if (law == "two_point") {
    auto e = get("two_point");
    if (!e) fail(law_origin, "law = two_point needs two_point = a,b,p");
    const auto d = to_doubles(e->first, e->second);
    if (d.size() != 3) fail(e->second, "two_point expects a,b,p");
    try {
      c.law = NonzeroLaw::two_point(d[0], d[1], d[2]);
    } catch (const InvalidArgument& ex) {
      fail(e->second, ex.what());
    }
  } else {
    fail(law_origin, "unknown law '" + law + "' (gaussian, constant, two_point)");
  }

  if (auto e = get("algorithms")) {
    c.algorithms = split_list(e->first);
    if (c.algorithms.empty()) fail(e->second, "at least one algorithm is required");
    const auto& algs = known_algorithms();
    for (const auto& a : c.algorithms) {
      if (std::find(algs.begin(), algs.end(), a) == algs.end()) fail(e->second, "unknown algorithm '" + a + "'");
    }
  }
  if (auto e = get("iterations")) {
    const auto items = split_list(e->first);
    if (items.empty()) fail(e->second, "empty list");
    for (const auto& item : items) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) {
        const int it = static_cast<int>(to_int(item, e->second));
        if (it < 1) fail(e->second, "iterations must be positive");
        for (const auto& a : known_algorithms()) c.iterations[a] = it;
      } else {
        const std::string a = trim(item.substr(0, colon));
        const int it = static_cast<int>(to_int(trim(item.substr(colon + 1)), e->second));
        const auto& algs = known_algorithms();
        if (std::find(algs.begin(), algs.end(), a) == algs.end()) fail(e->second, "unknown algorithm '" + a + "'");
        if (it < 1) fail(e->second, "iterations must be positive");
        c.iterations[a] = it;
      }
    }
  }
  if (auto e = get("trials")) {
    c.trials = static_cast<int>(to_int(e->first, e->second));
    if (c.trials < 1) fail(e->second, "trials must be at least 1");
  } else if (c.mode == Mode::Simulate) {
    c.warnings.push_back("trials not set; using 100");
  }
  if (auto e = get("damping")) c.damping = to_damping(e->first, e->second);
  if (auto e = get("damping_kappa1")) c.damping_kappa1 = to_damping(e->first, e->second);
  if (auto e = get("seed")) c.seed = to_u64(e->first, e->second);
  if (auto e = get("out")) c.out = e->first;
  if (auto e = get("quantiles")) {
    c.quantiles = to_doubles(e->first, e->second);
    for (double q : c.quantiles) {
      if (!(q >= 0.0 && q <= 1.0)) fail(e->second, "quantiles must lie in [0, 1]");
    }
  }
  if (auto e = get("workers")) {
    c.workers = static_cast<int>(to_int(e->first, e->second));
    if (c.workers < 1) fail(e->second, "workers must be at least 1");
  }
  if (auto e = get("trace")) c.trace = to_bool(e->first, e->second);
  if (auto e = get("timing")) c.timing = to_bool(e->first, e->second);
  if (auto e = get("lambda_tuning_trials")) {
    c.lambda_tuning_trials = static_cast<int>(to_int(e->first, e->second));
    if (c.lambda_tuning_trials < 1) fail(e->second, "lambda_tuning_trials must be at least 1");
  }
  if (auto e = get("lambda_grid_size")) {
    c.lambda_grid_size = static_cast<int>(to_int(e->first, e->second));
    if (c.lambda_grid_size < 1) fail(e->second, "lambda_grid_size must be at least 1");
  }
  if (auto e = get("se_iterations")) {
    c.se_iterations = static_cast<int>(to_int(e->first, e->second));
    if (c.se_iterations < 1) fail(e->second, "se_iterations must be at least 1");
  }
  if (auto e = get("se_atoms")) {
    c.se_atoms = to_int(e->first, e->second);
    if (c.se_atoms < 0) fail(e->second, "se_atoms must be non-negative");
  }
  if (auto e = get("chart_points")) {
    c.chart_points = static_cast<int>(to_int(e->first, e->second));
    if (c.chart_points < 2) fail(e->second, "chart_points must be at least 2");
  }
  if (auto e = get("chart_v_min")) {
    c.chart_v_min = to_double(e->first, e->second);
    if (!(c.chart_v_min > 0.0)) fail(e->second, "chart_v_min must be positive");
  }

  if (c.snr_db) {
    c.sigma2 = power * std::pow(10.0, -*c.snr_db / 10.0);
  } else if (c.sigma2_given) {
    if (!(*c.sigma2_given >= 0.0)) fail(get("sigma2")->second, "sigma2 must be non-negative");
    c.sigma2 = *c.sigma2_given;
  }

  auto origin_of = [&](const std::string& key) {
    auto e = get(key);
    return e ? e->second : std::string("default");
  };
  if (c.k < 1 || c.k >= c.n) fail(origin_of("k"), "need 1 <= k < n");
  for (Index m : c.m) {
    if (m < 1 || m > c.n) fail(origin_of("m"), "need 1 <= m <= n");
    if (m < 2) fail(origin_of("m"), "need m >= 2");
  }
  for (double kappa : c.kappa) {
    if (!(kappa >= 1.0)) fail(origin_of("kappa"), "kappa must be at least 1");
  }
  for (double d : c.delta) {
    if (!(d > 0.0)) fail(origin_of("delta"), "delta must be positive");
  }
  if (c.mode == Mode::Simulate) {
    if (!OrthonormalDct::is_supported(c.n)) fail(origin_of("n"), "unsupported signal length for the DCT");
    for (Index m : c.m) {
      if (!OrthonormalDct::is_supported(m)) fail(origin_of("m"), "unsupported measurement length for the DCT");
    }
    for (const auto& a : c.algorithms) {
      if (a == "oamp" && c.one_bit) fail(origin_of("algorithms"), "oamp requires the linear channel");
      if (a == "omp" && c.iterations_for("omp") > *std::min_element(c.m.begin(), c.m.end())) {
        fail(origin_of("iterations"), "omp iterations exceed m");
      }
    }
  }
  return c;
}

int ExperimentConfig::iterations_for(const std::string& algorithm) const {
  auto it = iterations.find(algorithm);
  return it == iterations.end() ? default_iterations(algorithm, k) : it->second;
}

DampingConfig ExperimentConfig::damping_for(double kappa) const {
  return kappa == 1.0 && damping_kappa1 ? *damping_kappa1 : damping;
}

MeasurementChannel ExperimentConfig::channel() const {
  return one_bit ? MeasurementChannel::one_bit(sigma2) : MeasurementChannel::linear(sigma2);
}

double quantile(std::vector<double> values, double q) {
  values.erase(std::remove_if(values.begin(), values.end(), [](double v) { return std::isnan(v); }), values.end());
  if (values.empty()) return kNaN;
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const std::vector<ResultRecord>& records) {
  os << kCsvHeader << '\n';
  for (const auto& r : records) {
    os << r.mode << ',' << r.algorithm << ',' << format_double(r.kappa) << ',' << format_double(r.delta) << ','
       << r.trial << ',' << r.iteration << ',' << format_double(r.err_unnorm) << ',' << format_double(r.err_normdir)
       << ',' << format_double(r.wall_ms) << ',' << r.flags << '\n';
  }
}

void write_summary(std::ostream& os, const std::vector<SummaryRow>& summary, const std::vector<double>& quantiles) {
  os << "algorithm,kappa,delta,count,median_err_unnorm,mean_err_unnorm,median_err_normdir,mean_err_normdir";
  for (double q : quantiles) os << ",q" << format_double(q) << "_err_unnorm,q" << format_double(q) << "_err_normdir";
  os << '\n';
  for (const auto& s : summary) {
    os << s.algorithm << ',' << format_double(s.kappa) << ',' << format_double(s.delta) << ',' << s.count << ','
       << format_double(s.median_unnorm) << ',' << format_double(s.mean_unnorm) << ','
       << format_double(s.median_normdir) << ',' << format_double(s.mean_normdir);
    for (std::size_t i = 0; i < s.quantiles_unnorm.size(); ++i) {
      os << ',' << format_double(s.quantiles_unnorm[i]) << ',' << format_double(s.quantiles_normdir[i]);
    }
    os << '\n';
  }
}

namespace {

struct TrialOutput {
  std::vector<std::vector<ResultRecord>> per_algorithm;
};

struct LassoChoice {
  double scale = 1.0;  // lambda = scale * max|A^T y| / M
};

ResultRecord base_record(const std::string& alg, const GridPoint& g, int trial) {
  ResultRecord r;
  r.mode = "simulate";
  r.algorithm = alg;
  r.kappa = g.kappa;
  r.delta = g.delta;
  r.trial = trial;
  return r;
}

std::vector<double> lambda_scales(int count) {
  std::vector<double> scales(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double e = count == 1 ? 0.0 : -4.0 + 4.0 * i / (count - 1);
    scales[static_cast<std::size_t>(i)] = std::pow(10.0, e);
  }
  return scales;
}

ProblemInstance trial_problem(const ExperimentConfig& c, const GridPoint& g, int trial) {
  return make_problem(c.n, c.k, g.m, g.kappa, c.law, c.channel(), c.seed, static_cast<std::uint64_t>(trial));
}

Vector run_lasso(const ProblemInstance& p, int iterations, double scale) {
  const LinearMap a(*p.op);
  const double top = a.adjoint(p.y).cwiseAbs().maxCoeff() / static_cast<double>(p.m());
  LassoConfig cfg;
  cfg.lambda = scale * top;
  cfg.max_iters = iterations;
  return fista(a, p.y, cfg).x;
}

std::vector<ResultRecord> run_algorithm(const ExperimentConfig& c, const std::string& alg, const GridPoint& g,
                                        int trial, const ProblemInstance& p, const LassoChoice* lasso) {
  const auto start = std::chrono::steady_clock::now();
  const Vector& x = p.signal.values;
  std::vector<ResultRecord> rows;
  const int iters = c.iterations_for(alg);

  auto finish = [&](ResultRecord r, const Vector& x_hat, std::vector<std::string> flags) {
    r.err_unnorm = unnormalized_sq_error(x_hat, x);
    r.err_normdir = direction_error_or_nan(x_hat, x);
    if (std::isnan(r.err_normdir)) flags.push_back("zero_estimate");
    r.flags = join_flags(flags);
    return r;
  };

  if (alg == "goamp" || alg == "oamp" || alg == "gamp-ablation") {
    GoampOptions opts;
    opts.iterations = iters;
    opts.damping = c.damping_for(g.kappa);
    opts.matched_filter = alg == "gamp-ablation";
    const Trajectory traj = alg == "oamp" ? run_oamp_linear(p, opts) : run_goamp(p, opts);
    const double ms = c.timing ? elapsed_ms(start) : 0.0;
    const std::string flags = join_flags(traj.flags);
    const std::size_t first = c.trace ? 0 : traj.records.size() - 1;
    for (std::size_t i = first; i < traj.records.size(); ++i) {
      const auto& rec = traj.records[i];
      ResultRecord r = base_record(alg, g, trial);
      r.iteration = rec.t;
      r.err_unnorm = rec.err_unnorm;
      r.err_normdir = rec.err_normdir;
      r.wall_ms = i + 1 == traj.records.size() ? ms : 0.0;
      r.flags = flags;
      rows.push_back(r);
    }
    return rows;
  }

  ResultRecord r = base_record(alg, g, trial);
  r.iteration = iters;
  Vector x_hat;
  std::vector<std::string> flags;
  if (is_lasso(alg)) {
    x_hat = run_lasso(p, iters, lasso->scale);
    flags.push_back("lambda_scale=" + format_double(lasso->scale));
  } else if (alg == "omp") {
    auto res = omp(LinearMap(*p.op), p.y, iters);
    if (res.rank_deficient) flags.push_back("rank_deficient");
    x_hat = std::move(res.x);
  } else if (alg == "biht") {
    GreedyConfig cfg;
    cfg.k = c.k;
    cfg.max_iters = iters;
    const Vector y = p.channel.is_linear()
                         ? Vector(p.y.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; }))
                         : p.y;
    x_hat = biht(LinearMap(*p.op), y, cfg);
  }
  r.wall_ms = c.timing ? elapsed_ms(start) : 0.0;
  rows.push_back(finish(r, x_hat, flags));
  return rows;
}

std::vector<ResultRecord> failed_rows(const std::string& alg, const GridPoint& g, int trial, int iters,
                                      const std::string& what) {
  ResultRecord r = base_record(alg, g, trial);
  r.iteration = iters;
  r.err_unnorm = kNaN;
  r.err_normdir = kNaN;
  r.flags = "error:" + sanitize(what);
  return {r};
}

std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records, const ExperimentConfig& c,
                                  const std::vector<std::string>& algorithms, const std::vector<GridPoint>& grid) {
  std::vector<SummaryRow> out;
  for (const auto& alg : algorithms) {
    for (const auto& g : grid) {
      // Final row per trial: the last record of each (trial) block.
      std::map<int, const ResultRecord*> last;
      for (const auto& r : records) {
        if (r.algorithm == alg && r.kappa == g.kappa && r.delta == g.delta) last[r.trial] = &r;
      }
      if (last.empty()) continue;
      std::vector<double> eu;
      std::vector<double> en;
      for (const auto& [t, r] : last) {
        eu.push_back(r->err_unnorm);
        en.push_back(r->err_normdir);
      }
      auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        int n = 0;
        for (double x : v) {
          if (!std::isnan(x)) {
            s += x;
            ++n;
          }
        }
        return n ? s / n : kNaN;
      };
      SummaryRow s;
      s.algorithm = alg;
      s.kappa = g.kappa;
      s.delta = g.delta;
      s.count = static_cast<int>(last.size());
      s.median_unnorm = quantile(eu, 0.5);
      s.mean_unnorm = mean(eu);
      s.median_normdir = quantile(en, 0.5);
      s.mean_normdir = mean(en);
      for (double q : c.quantiles) {
        s.quantiles_unnorm.push_back(quantile(eu, q));
        s.quantiles_normdir.push_back(quantile(en, q));
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& c) {
  if (c.mode == Mode::Se) return run_se_curves(c);
  if (c.mode != Mode::Simulate) throw ConfigError("run_experiment: use emit_chart_table or emit_threshold_table");
  const auto grid = simulation_grid(c);
  const auto trials = static_cast<std::size_t>(c.trials);

  // Lasso regularization: one scale per (grid point, algorithm), picked by
  // median oracle error over the first few trials.
  std::vector<std::map<std::string, LassoChoice>> lasso(grid.size());
  const auto scales = lambda_scales(c.lambda_grid_size);
  std::vector<std::string> lasso_algs;
  for (const auto& a : c.algorithms) {
    if (is_lasso(a)) lasso_algs.push_back(a);
  }
  if (!lasso_algs.empty()) {
    const auto tune = static_cast<std::size_t>(std::min(c.lambda_tuning_trials, c.trials));
    const std::size_t per_grid = lasso_algs.size() * scales.size() * tune;
    std::vector<double> err(grid.size() * per_grid, kNaN);
    parallel_for(err.size(), c.workers, [&](std::size_t job) {
      const std::size_t gi = job / per_grid;
      std::size_t rest = job % per_grid;
      const std::size_t ai = rest / (scales.size() * tune);
      rest %= scales.size() * tune;
      const std::size_t si = rest / tune;
      const std::size_t ti = rest % tune;
      try {
        const auto p = trial_problem(c, grid[gi], static_cast<int>(ti));
        const Vector x_hat = run_lasso(p, c.iterations_for(lasso_algs[ai]), scales[si]);
        err[job] = c.one_bit ? direction_error_or_nan(x_hat, p.signal.values)
                             : unnormalized_sq_error(x_hat, p.signal.values);
      } catch (const std::exception&) {
        err[job] = kNaN;
      }
    });
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
      for (std::size_t ai = 0; ai < lasso_algs.size(); ++ai) {
        double best = std::numeric_limits<double>::infinity();
        LassoChoice choice{scales.back()};
        for (std::size_t si = 0; si < scales.size(); ++si) {
          const auto first = err.begin() + static_cast<std::ptrdiff_t>(gi * per_grid + (ai * scales.size() + si) * tune);
          const double med = quantile(std::vector<double>(first, first + static_cast<std::ptrdiff_t>(tune)), 0.5);
          if (med < best) {
            best = med;
            choice.scale = scales[si];
          }
        }
        lasso[gi][lasso_algs[ai]] = choice;
      }
    }
  }

  std::vector<TrialOutput> outputs(grid.size() * trials);
  parallel_for(outputs.size(), c.workers, [&](std::size_t job) {
    const std::size_t gi = job / trials;
    const int trial = static_cast<int>(job % trials);
    const auto& g = grid[gi];
    auto& out = outputs[job];
    out.per_algorithm.resize(c.algorithms.size());
    std::optional<ProblemInstance> p;
    std::string problem_error;
    try {
      p = trial_problem(c, g, trial);
    } catch (const std::exception& e) {
      problem_error = e.what();
    }
    for (std::size_t ai = 0; ai < c.algorithms.size(); ++ai) {
      const auto& alg = c.algorithms[ai];
      if (!p) {
        out.per_algorithm[ai] = failed_rows(alg, g, trial, c.iterations_for(alg), problem_error);
        continue;
      }
      try {
        const LassoChoice* choice = is_lasso(alg) ? &lasso[gi].at(alg) : nullptr;
        out.per_algorithm[ai] = run_algorithm(c, alg, g, trial, *p, choice);
      } catch (const std::exception& e) {
        out.per_algorithm[ai] = failed_rows(alg, g, trial, c.iterations_for(alg), e.what());
      }
    }
  });

  ExperimentResult result;
  for (std::size_t ai = 0; ai < c.algorithms.size(); ++ai) {
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
      for (std::size_t t = 0; t < trials; ++t) {
        const auto& rows = outputs[gi * trials + t].per_algorithm[ai];
        result.records.insert(result.records.end(), rows.begin(), rows.end());
      }
    }
  }
  result.summary = summarize(result.records, c, c.algorithms, grid);
  return result;
}

ExperimentResult run_se_curves(const ExperimentConfig& c) {
  std::vector<double> deltas = c.delta;
  if (deltas.empty()) {
    for (Index m : c.m) deltas.push_back(delta_of(c.n, c.k, m));
  }
  const Index atoms_m = c.m.front();
  std::vector<GridPoint> grid;
  for (double d : deltas) {
    for (double kappa : c.kappa) grid.push_back({atoms_m, kappa, d});
  }
  std::vector<std::vector<ResultRecord>> rows(grid.size());
  parallel_for(grid.size(), c.workers, [&](std::size_t i) {
    const auto& g = grid[i];
    SeConfig se;
    se.delta = g.delta;
    se.spectrum = limit_spectral_model(atoms_m, g.kappa, c.se_atoms);
    se.channel = c.channel();
    se.law = c.law;
    se.max_iterations = c.se_iterations;
    const auto traj = run_se_bayes(se);
    const std::size_t first = c.trace ? 0 : traj.states.size() - 1;
    for (std::size_t t = first; t < traj.states.size(); ++t) {
      ResultRecord r;
      r.mode = "se";
      r.algorithm = "goamp-se";
      r.kappa = g.kappa;
      r.delta = g.delta;
      r.trial = 0;
      r.iteration = traj.states[t].t;
      r.err_unnorm = traj.states[t].v_x_B2A;
      r.err_normdir = se_metric_normalized(std::clamp(traj.states[t].v_x_B2A, 0.0, c.law.power()), c.law.power());
      r.flags = traj.converged ? "converged" : "";
      rows[i].push_back(r);
    }
  });
  ExperimentResult result;
  for (const auto& r : rows) result.records.insert(result.records.end(), r.begin(), r.end());
  result.summary = summarize(result.records, c, {"goamp-se"}, grid);
  return result;
}

void emit_chart_table(const ExperimentConfig& c, std::ostream& os) {
  if (c.one_bit) throw ConfigError("chart: the SE chart is defined for the linear channel");
  const double delta = c.delta.empty() ? delta_of(c.n, c.k, c.m.front()) : c.delta.front();
  os << "mode,kappa,delta,series,index,v_B2A,v_A2B,crossings\n";
  for (double kappa : c.kappa) {
    SeConfig se;
    se.delta = delta;
    se.spectrum = limit_spectral_model(c.m.front(), kappa, c.se_atoms);
    se.channel = c.channel();
    se.law = c.law;
    se.max_iterations = c.se_iterations;
    const auto chart = se_chart(se, c.chart_v_min * c.law.power(), c.chart_points);
    const std::string prefix = "chart," + format_double(kappa) + "," + format_double(delta) + ",";
    const std::string cross = std::to_string(chart.crossings);
    for (std::size_t i = 0; i < chart.v_B2A.size(); ++i) {
      os << prefix << "module_a," << i << ',' << format_double(chart.v_B2A[i]) << ','
         << format_double(chart.module_a[i]) << ',' << cross << '\n';
    }
    for (std::size_t i = 0; i < chart.v_B2A.size(); ++i) {
      os << prefix << "module_b," << i << ',' << format_double(chart.module_b[i]) << ','
         << format_double(chart.module_a[i]) << ',' << cross << '\n';
    }
    for (const auto& s : chart.trajectory) {
      os << prefix << "trajectory," << s.t << ',' << format_double(s.v_x_B2A) << ',' << format_double(s.v_x_A2B)
         << ',' << cross << '\n';
    }
  }
}

void emit_threshold_table(const ExperimentConfig& c, std::ostream& os) {
  const double u_min = c.law.u_min();
  if (!(u_min > 0.0)) {
    throw ConfigError(
        "threshold: the reconstruction threshold needs a nonzero law with u_min > 0; the gaussian law has u_min = 0");
  }
  const double flat = 2.0 * (1.0 + c.sigma2 / (u_min * u_min));
  os << "mode,kappa,sigma2,u_min,delta_star,delta_star_flat\n";
  for (double kappa : c.kappa) {
    const auto spectrum = limit_spectral_model(c.m.front(), kappa, c.se_atoms);
    os << "threshold," << format_double(kappa) << ',' << format_double(c.sigma2) << ',' << format_double(u_min) << ','
       << format_double(reconstruction_threshold(spectrum, c.sigma2, u_min)) << ',' << format_double(flat) << '\n';
  }
}

}  // namespace goamp
