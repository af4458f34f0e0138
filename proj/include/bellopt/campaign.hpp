#pragma once

// Seeded optimizer-vs-oracle campaigns: configuration, execution,
// aggregation across repetitions, and persisted outputs.

#include "bellopt/inequalities.hpp"
#include "bellopt/oracle.hpp"
#include "bellopt/snm.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace bellopt::harness {

/// Invalid configuration; `field()` is the dotted path of the culprit.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct StateSpec {
  enum class Kind { pure, noisy };
  Kind kind = Kind::pure;
  double gamma = 0.7853981633974483;
  double phi = 0.0;
  double p = 1.0;
  double lambda = 0.0;

  quantum::DensityMatrix build() const;
};

struct SnmOptimizer {
  snm::SnmConfig config;
};
struct GridOptimizer {
  int samples_per_dim = 3;
};
struct RandomOptimizer {
  long budget = 0;
};
using OptimizerSpec = std::variant<SnmOptimizer, GridOptimizer, RandomOptimizer>;

std::string optimizer_name(const OptimizerSpec& spec);

struct Campaign {
  StateSpec state;
  bell::Inequality inequality = bell::Chsh{};
  oracle::Response response = oracle::Response::identity;
  bool theta_only = false;
  /// Measure only the setting pairs the inequality reads.
  bool required_pairs_only = true;
  oracle::NoiseModel noise;
  OptimizerSpec optimizer = SnmOptimizer{};
  int repetitions = 1;
  std::uint64_t seed = 0;
  snm::Box box = snm::Box::uniform(8, 0.0, 6.283185307179586);
  std::optional<double> s_ref;
  /// Canonical form of the configuration this campaign was parsed from.
  nlohmann::json source = nlohmann::json::object();

  std::size_t knob_dimension() const;
  /// Oracle configuration for one repetition.
  oracle::OracleConfig oracle_config(std::uint64_t oracle_seed) const;
};

/// Default knob interval for a response function.
std::pair<double, double> default_knob_range(oracle::Response f);

/// Parses a campaign object. Missing fields take defaults; bad ones throw
/// ConfigError naming the field path.
Campaign parse_campaign(const nlohmann::json& j);
Campaign load_campaign(const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);

/// Sorted keys, two-space indent, trailing newline.
std::string canonical_dump(const nlohmann::json& j);

/// Deterministic per-repetition streams derived from the master seed.
struct RepetitionSeeds {
  std::uint64_t optimizer;
  std::uint64_t oracle;
};
RepetitionSeeds repetition_seeds(std::uint64_t master, int repetition);

enum class RefSource { horodecki, numeric_max, supplied };
std::string to_string(RefSource s);

struct AggregateRecord {
  long iteration = 0;
  double mean_delta = 0.0;
  double median_delta = 0.0;
  double std_delta = 0.0;  // sample standard deviation, 0 for one run
  double evals = 0.0;      // mean evaluations spent by this iteration

  bool operator==(const AggregateRecord&) const = default;
};

struct RunResult {
  int repetition = 0;
  RepetitionSeeds seeds{};
  snm::RunTrace trace;   // costs as minimized, i.e. -S
  double final_delta = 0.0;
  /// Noise-free functional value at the final best knobs.
  double realized_value = 0.0;
};

struct CampaignResult {
  double s_ref = 0.0;
  RefSource ref_source = RefSource::horodecki;
  std::vector<RunResult> runs;
  std::vector<AggregateRecord> aggregate;
};

struct RunOptions {
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Reference value for Delta: supplied, Horodecki (CHSH) or numeric maximum.
std::pair<double, RefSource> reference_value(const Campaign& c);

CampaignResult run_campaign(const Campaign& c, const RunOptions& opts = {});

/// Delta_i = |s_ref - S_best(i)| per repetition, aggregated per iteration.
/// Shorter traces hold their last value; empty traces are skipped.
std::vector<AggregateRecord> aggregate(const std::vector<snm::RunTrace>& traces, double s_ref);

/// S_best after `evaluations` oracle calls (the last record not exceeding
/// it); nullopt before the first record.
std::optional<double> best_value_at_evaluation(const snm::RunTrace& trace, long evaluations);

// Persistence -------------------------------------------------------------

inline constexpr const char* kCsvHeader = "iteration,mean_delta,median_delta,std_delta,evals";

void emit_csv(const std::vector<AggregateRecord>& series, const std::filesystem::path& path);
std::vector<AggregateRecord> read_csv(const std::filesystem::path& path);

nlohmann::json trace_to_json(const snm::RunTrace& trace);
snm::RunTrace trace_from_json(const nlohmann::json& j);

/// Single trace with the configuration echoed for provenance.
void emit_json(const snm::RunTrace& trace, const nlohmann::json& config,
               const std::filesystem::path& path);
std::pair<snm::RunTrace, nlohmann::json> read_json_trace(const std::filesystem::path& path);

/// Writes aggregate.csv and traces.json into `dir`.
void write_campaign_outputs(const Campaign& c, const CampaignResult& r,
                            const std::filesystem::path& dir);

// Comparison --------------------------------------------------------------

struct RankedOptimizer {
  std::string label;
  std::vector<double> final_deltas;
  double mean_final_delta = 0.0;
  double median_final_delta = 0.0;
  int rank = 0;        // 1 is best; tied entries share a rank
  bool tied = false;
};

/// Evaluation budget implied by an optimizer spec for a given dimension.
long evaluation_budget(const OptimizerSpec& spec, std::size_t dim);

/// Orders by median final Delta (lower is better), marking exact ties.
std::vector<RankedOptimizer> rank_optimizers(
    std::vector<std::pair<std::string, std::vector<double>>> final_deltas);

struct ComparisonEntry {
  std::string label;
  CampaignResult result;
};

struct Comparison {
  std::vector<ComparisonEntry> entries;
  std::vector<RankedOptimizer> ranking;
  long budget = 0;
  nlohmann::json config;
};

struct ComparisonPlan {
  std::vector<std::string> labels;
  std::vector<Campaign> campaigns;
};

/// {"campaign": {...}, "optimizers": [{"label": ..., "type": ..., ...}]}:
/// one campaign per optimizer, everything else shared.
ComparisonPlan parse_comparison(const nlohmann::json& j);

/// Runs campaigns that must share the oracle and the evaluation budget;
/// throws ConfigError on mismatched budgets or oracles.
Comparison compare_optimizers(const ComparisonPlan& plan, const RunOptions& opts = {});

/// Mean and median Delta after each evaluation count, from the first count
/// at which every run has a record.
struct EvaluationCurvePoint {
  long evaluation = 0;
  double mean_delta = 0.0;
  double median_delta = 0.0;
};
std::vector<EvaluationCurvePoint> evaluation_curve(const CampaignResult& r, long budget);

void write_comparison_outputs(const Comparison& cmp, const std::filesystem::path& dir);

// Sweeps -------------------------------------------------------------------

/// Parameter grid over gamma ("gamma"), events per pair ("events") or
/// chained settings ("k").
struct SweepPlan {
  std::string parameter;
  std::vector<double> values;
  std::vector<Campaign> campaigns;
};

/// {"campaign": {...}, "sweep": {"parameter": ..., "values": [...]}}
SweepPlan parse_sweep(const nlohmann::json& j);

struct SweepResult {
  std::vector<CampaignResult> results;
};

SweepResult run_sweep(const SweepPlan& plan, const RunOptions& opts = {});

/// sweep.csv plus one campaign directory per value.
void write_sweep_outputs(const SweepPlan& plan, const SweepResult& r,
                         const std::filesystem::path& dir);

}  // namespace bellopt::harness
