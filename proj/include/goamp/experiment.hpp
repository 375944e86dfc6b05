#pragma once

#include "goamp/core.hpp"
#include "goamp/goamp.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace goamp {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { Simulate, Se, Chart, Threshold };

struct ExperimentConfig {
  Mode mode = Mode::Simulate;
  bool one_bit = false;
  Index n = 65536;
  Index k = 16;
  std::vector<Index> m{200};
  std::vector<double> delta;  // se mode grid
  std::vector<double> kappa{1.0};
  std::optional<double> snr_db;
  std::optional<double> sigma2_given;
  double sigma2 = 0.0;  // resolved noise variance
  NonzeroLaw law = NonzeroLaw::gaussian(1.0);
  std::vector<std::string> algorithms{"goamp"};
  std::map<std::string, int> iterations;  // overrides of the per-algorithm defaults
  int trials = 100;
  DampingConfig damping;
  std::optional<DampingConfig> damping_kappa1;
  std::uint64_t seed = 1;
  std::string out;
  std::vector<double> quantiles{0.5};
  int workers = 1;
  bool trace = false;
  bool timing = true;
  int lambda_tuning_trials = 5;
  int lambda_grid_size = 15;
  int se_iterations = 50;
  Index se_atoms = 0;  // 0: one atom per row
  int chart_points = 401;
  double chart_v_min = 1e-12;
  std::vector<std::string> warnings;

  int iterations_for(const std::string& algorithm) const;
  DampingConfig damping_for(double kappa) const;
  MeasurementChannel channel() const;
};

/// key -> (value, origin) where origin names the file line or flag.
struct RawConfig {
  std::map<std::string, std::pair<std::string, std::string>> entries;

  void set(const std::string& key, const std::string& value, const std::string& origin);
};

RawConfig parse_config_text(const std::string& text, const std::string& source);
RawConfig parse_config_file(const std::string& path);
ExperimentConfig build_config(const RawConfig& raw);

const std::vector<std::string>& known_config_keys();
const std::vector<std::string>& known_algorithms();

struct ResultRecord {
  std::string mode;
  std::string algorithm;
  double kappa = 0.0;
  double delta = 0.0;
  int trial = 0;
  int iteration = 0;
  double err_unnorm = 0.0;
  double err_normdir = 0.0;
  double wall_ms = 0.0;
  std::string flags;
};

struct SummaryRow {
  std::string algorithm;
  double kappa = 0.0;
  double delta = 0.0;
  int count = 0;
  double median_unnorm = 0.0;
  double mean_unnorm = 0.0;
  double median_normdir = 0.0;
  double mean_normdir = 0.0;
  std::vector<double> quantiles_unnorm;
  std::vector<double> quantiles_normdir;
};

struct ExperimentResult {
  std::vector<ResultRecord> records;
  std::vector<SummaryRow> summary;
};

ExperimentResult run_experiment(const ExperimentConfig& config);
ExperimentResult run_se_curves(const ExperimentConfig& config);

extern const char* const kCsvHeader;

std::string format_double(double v);
void write_csv(std::ostream& os, const std::vector<ResultRecord>& records);
void write_summary(std::ostream& os, const std::vector<SummaryRow>& summary, const std::vector<double>& quantiles);

/// Chart mode: module-A and module-B curves plus the zigzag trajectory.
void emit_chart_table(const ExperimentConfig& config, std::ostream& os);
/// Threshold mode: delta_*(kappa) and the flat-spectrum bound.
void emit_threshold_table(const ExperimentConfig& config, std::ostream& os);

/// Quantile with linear interpolation; NaNs are ignored.
double quantile(std::vector<double> values, double q);

}  // namespace goamp
