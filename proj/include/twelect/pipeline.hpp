#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twelect/models.hpp"
#include "twelect/synth.hpp"
#include "twelect/timeutil.hpp"

// End-to-end stages behind the command-line tool. Every stage writes its
// outputs plus a manifest (tool version, resolved options, input/output
// digests, row counts, wall time) into the output directory.

namespace twelect::pipeline {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Default output directory honoring the TWELECT_OUT environment variable,
// falling back to "out".
std::string default_out_dir();

struct IngestOptions {
  std::vector<std::string> tweet_files;  // JSON-lines shards, any order
  std::string query_dir;                 // one query JSON per party
  int64_t window_start = kDefaultWindowStart;
  int64_t window_end = kDefaultWindowEnd;
  std::string out_dir;
};

struct IngestSummary {
  uint64_t lines_in = 0;
  uint64_t records_out = 0;
  uint64_t tweets_out = 0;
  uint64_t users_out = 0;
  std::string records_path;  // records CSV with trailing text column
  std::string stats_path;
};

IngestSummary run_ingest(const IngestOptions& options);

struct TrainOptions {
  // group file stem -> labeled CSV path; must cover all seven groups.
  std::map<std::string, std::string> training_files;
  double alpha = 1.0;
  int ngram = 1;
  double holdout_fraction = 0.2;  // per-group evaluation split
  uint64_t seed = 7;
  std::string out_dir;
};

struct GroupMetrics {
  std::string group;
  uint64_t examples = 0;
  double f1_negative = 0.0;
  double f1_positive = 0.0;
  double roc_auc = 0.0;
};

struct TrainSummary {
  std::vector<GroupMetrics> metrics;
  std::vector<std::string> model_paths;  // one per group
  std::string metrics_path;
};

TrainSummary run_train(const TrainOptions& options);

struct ScoreOptions {
  std::string records_path;  // ingest output (text column required)
  std::string model_dir;     // train output
  std::string out_dir;
};

struct ScoreSummary {
  uint64_t records = 0;
  std::string records_path;  // scored records CSV, text column dropped
};

ScoreSummary run_score(const ScoreOptions& options);

struct ModelOptions {
  std::string records_path;             // scored records CSV
  std::vector<models::ModelSpec> specs; // empty means all nine models
  uint32_t n_resamples = 1000;
  uint64_t seed = 99;
  // true adds per-month rows for every model. A pooled whole-window row is
  // always written for non-ALT models; ALT only ever appears per month.
  bool monthly = true;
  std::vector<std::string> months;  // "YYYY-MM" filter; empty keeps all months
  std::string out_dir;
};

struct EstimateRow {
  std::string model;
  std::string month;  // "all" for the whole window
  double share_pct = 0.0;
  double q1_pct = 0.0;
  double median_pct = 0.0;
  double q3_pct = 0.0;
  uint64_t records = 0;
  uint64_t users = 0;
  uint32_t undefined_resamples = 0;
};

struct ModelSummary {
  std::vector<EstimateRow> rows;
  // One entry per (model, month) whose estimate or bootstrap was undefined;
  // such cells are skipped rather than aborting the run.
  std::vector<std::string> notes;
  std::string estimates_path;
};

ModelSummary run_model(const ModelOptions& options);

struct SweepOptions {
  std::string records_path;
  std::vector<double> x_low_grid;  // default 0.1..0.7 step 0.1
  std::vector<double> x_upp_grid;  // default 0.7..1.0 step 0.1
  uint32_t n_resamples = 200;
  uint64_t seed = 17;
  std::vector<std::string> months;  // "YYYY-MM" filter; empty keeps all months
  std::string out_dir;
};

// The sweep runs once per calendar month present in the records.
struct SweepSummary {
  std::vector<std::string> months;
  std::vector<std::vector<models::SweepCell>> cells_by_month;
  std::string sweep_path;
};

SweepSummary run_sweep(const SweepOptions& options);

struct GeoOptions {
  std::string records_path;
  std::string census_path;
  // Panel resampling runs when a model is given.
  std::optional<models::ModelSpec> panel_model;
  uint32_t panel_k = 1000;
  uint32_t panel_reps = 200;
  uint64_t seed = 23;
  std::string out_dir;
};

struct GeoSummary {
  double pearson_r = 0.0;
  double total_variation = 0.0;
  std::size_t geo_users = 0;
  std::optional<double> panel_median_pct;
  std::string report_path;
};

GeoSummary run_geo(const GeoOptions& options);

struct SynthOptions {
  std::string config_path;  // empty uses defaults
  // key=value assignments applied after the file, in order (same grammar).
  std::vector<std::pair<std::string, std::string>> overrides;
  bool text_mode = false;   // emit raw tweets + training CSVs instead of records
  std::string out_dir;
};

struct SynthSummary {
  synth::GroundTruth truth;
  std::string corpus_path;  // records CSV or tweets JSON lines
  std::string truth_path;
};

SynthSummary run_synth(const SynthOptions& options);

struct ReportOptions {
  std::string estimates_path;          // run_model output
  std::string reference_path;          // official result + poll aggregate JSON
  std::optional<std::string> geo_report_path;
  std::string out_dir;
};

struct ReportRow {
  std::string model;
  std::string month;
  double share_pct = 0.0;
  double q1_pct = 0.0;
  double median_pct = 0.0;
  double q3_pct = 0.0;
  double error_official_pp = 0.0;  // share - official
  double error_polls_pp = 0.0;     // share - poll aggregate
  double precision_pp = 0.0;       // q3 - q1
};

struct ReportSummary {
  std::vector<ReportRow> rows;
  double official_pct = 0.0;
  double polls_pct = 0.0;
  std::string report_path;
};

ReportSummary run_report(const ReportOptions& options);

// Renders rows as an aligned text table (used by the CLI after `report`).
std::string format_report_table(const ReportSummary& summary);

}  // namespace twelect::pipeline
