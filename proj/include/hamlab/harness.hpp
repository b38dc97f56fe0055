#pragma once

#include "hamlab/bigcount.hpp"
#include "hamlab/count.hpp"
#include "hamlab/rng.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hamlab {

struct ExperimentConfig {
  std::string name;
  std::vector<int> n_values;
  std::vector<double> p_values;
  int trials = 1;
  Seed seed{};
  CounterCaps caps{};
  std::string output_path;
  int threads = 1;
  int factor_samples = 50;  // factor pipeline: conversions per trial
  int boosters = -1;        // factor pipeline: booster count, -1 means n

  /// Flat key=value text, '#' comments. Throws ParseError.
  static ExperimentConfig parse(std::istream& in);
  static ExperimentConfig from_file(const std::string& path);
  nlohmann::ordered_json to_json() const;
};

struct TrialRow {
  std::string experiment;
  int n = 0;
  double p = 0.0;
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  BigCount h;
  std::optional<double> normalized;
  std::vector<std::pair<std::string, std::string>> aux;

  friend bool operator==(const TrialRow&, const TrialRow&) = default;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<TrialRow> rows;
  nlohmann::ordered_json summary;
};

ExperimentResult experiment_expected_count(const ExperimentConfig& cfg);
ExperimentResult experiment_concentration(const ExperimentConfig& cfg);
ExperimentResult experiment_hitting_time(const ExperimentConfig& cfg);
ExperimentResult experiment_factor_pipeline(const ExperimentConfig& cfg);
ExperimentResult experiment_matchings(const ExperimentConfig& cfg);
/// Dispatch on cfg.name: expected | concentration | hitting | factor-pipeline | matchings.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Summary statistics computed from rows alone, so re-read rows reproduce it.
nlohmann::ordered_json summarize(const ExperimentConfig& cfg, const std::vector<TrialRow>& rows);

enum class ResultFormat { csv, json };

void write_results(const ExperimentResult& result, const std::string& path, ResultFormat format);
std::string results_to_csv(const std::vector<TrialRow>& rows);
nlohmann::ordered_json results_to_json(const ExperimentResult& result);
std::vector<TrialRow> rows_from_json(const nlohmann::ordered_json& doc);

/// Wilson score interval for k successes out of m.
std::pair<double, double> wilson_interval(std::uint64_t k, std::uint64_t m, double z = 1.959963984540054);

/// Shortest round-trip decimal for doubles; used in CSV and JSON text.
std::string format_double(double x);

}  // namespace hamlab
