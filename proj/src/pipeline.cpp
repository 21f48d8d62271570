#include "twelect/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <span>

#include <json.hpp>

#include "twelect/corpus.hpp"
#include "twelect/csv.hpp"
#include "twelect/digest.hpp"
#include "twelect/errors.hpp"
#include "twelect/geo.hpp"
#include "twelect/nb.hpp"
#include "twelect/rng.hpp"
#include "twelect/stats.hpp"

namespace twelect::pipeline {
namespace {

using nlohmann::json;

struct StageTimer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  int64_t ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
  }
};

std::string resolve_out(const std::string& out_dir) {
  std::string dir = out_dir.empty() ? default_out_dir() : out_dir;
  std::filesystem::create_directories(dir);
  return dir;
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  return out;
}

void write_json_file(const std::string& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw InputError("failed while writing " + path);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw InputError("malformed JSON in " + path);
  return j;
}

json digest_paths(const std::vector<std::string>& paths) {
  json j = json::object();
  for (const auto& p : paths) j[p] = digest_hex(digest_file(p));
  return j;
}

// The manifest is the only artifact carrying wall-clock timings; analytical
// outputs must be byte-identical across reruns with the same inputs.
void write_manifest(const std::string& out_dir, const std::string& stage, json options,
                    json inputs, json outputs, json counts, int64_t wall_ms) {
  json j;
  j["tool_version"] = std::string(kToolVersion);
  j["stage"] = stage;
  j["options"] = std::move(options);
  j["inputs"] = std::move(inputs);
  j["outputs"] = std::move(outputs);
  j["counts"] = std::move(counts);
  j["wall_ms"] = wall_ms;
  write_json_file(join(out_dir, stage + "_manifest.json"), j);
}

double parse_csv_double(const std::string& field, long line, const std::string& path) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw InputError(path + ":" + std::to_string(line) + ": bad number '" + field + "'");
  }
  return v;
}

uint64_t parse_csv_u64(const std::string& field, long line, const std::string& path) {
  uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw InputError(path + ":" + std::to_string(line) + ": bad count '" + field + "'");
  }
  return v;
}

}  // namespace

std::string default_out_dir() {
  if (const char* env = std::getenv("TWELECT_OUT"); env && *env) return env;
  return "out";
}

// --- ingest ---------------------------------------------------------------

IngestSummary run_ingest(const IngestOptions& options) {
  StageTimer timer;
  if (options.tweet_files.empty()) throw ConfigError("ingest: no input files given");
  if (options.window_start >= options.window_end) {
    throw ConfigError("ingest: window start must precede window end");
  }
  corpus::IngestConfig config;
  config.window_start = options.window_start;
  config.window_end = options.window_end;
  config.queries = corpus::load_query_dir(options.query_dir);

  corpus::Ingestor ingestor(config);
  for (const auto& path : options.tweet_files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      ingestor.consume_line(line);
    }
  }
  auto output = ingestor.finish();

  const std::string out_dir = resolve_out(options.out_dir);
  IngestSummary summary;
  summary.lines_in = output.stats.lines_in;
  summary.records_out = output.stats.total_records;
  summary.tweets_out = output.stats.total_tweets;
  summary.users_out = output.stats.unique_users;
  summary.records_path = join(out_dir, "records.csv");
  summary.stats_path = join(out_dir, "ingest_stats.json");

  {
    auto out = open_out(summary.records_path);
    write_records_csv(out, output.records, output.texts);
    if (!out) throw InputError("failed while writing " + summary.records_path);
  }

  const auto& s = output.stats;
  json stats;
  stats["lines_in"] = s.lines_in;
  stats["parse_rejected"] = s.parse_rejected;
  stats["rejects_by_reason"] = json(s.rejects_by_reason);
  stats["non_spanish"] = s.non_spanish;
  stats["outside_window"] = s.outside_window;
  stats["matched_tweets"] = s.matched_tweets;
  stats["matched_records"] = s.matched_records;
  stats["duplicate_records"] = s.duplicate_records;
  stats["total_records"] = s.total_records;
  stats["total_tweets"] = s.total_tweets;
  stats["unique_users"] = s.unique_users;
  stats["geo_records"] = s.geo_records;
  stats["geo_tweets"] = s.geo_tweets;
  stats["geo_users"] = s.geo_users;
  stats["geo_tweet_ratio"] = s.geo_tweet_ratio();
  json by_month = json::object();
  for (const auto& [month, ms] : s.by_month) {
    by_month[to_string(month)] = {
        {"records", ms.records}, {"tweets", ms.tweets}, {"users", ms.users}};
  }
  stats["by_month"] = std::move(by_month);
  write_json_file(summary.stats_path, stats);

  json opts;
  opts["tweet_files"] = options.tweet_files;
  opts["query_dir"] = options.query_dir;
  opts["window_start"] = format_iso8601_utc(options.window_start);
  opts["window_end"] = format_iso8601_utc(options.window_end);
  std::vector<std::string> inputs = options.tweet_files;
  for (int p = 0; p < kNumParties; ++p) {
    std::string stem(party_code(static_cast<Party>(p)));
    for (auto& c : stem) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    inputs.push_back(join(options.query_dir, stem + ".json"));
  }
  json counts;
  counts["lines_in"] = s.lines_in;
  counts["records_out"] = s.total_records;
  counts["tweets_out"] = s.total_tweets;
  counts["users_out"] = s.unique_users;
  write_manifest(out_dir, "ingest", std::move(opts), digest_paths(inputs),
                 digest_paths({summary.records_path, summary.stats_path}), std::move(counts),
                 timer.ms());

  if (output.records.empty()) {
    throw UndefinedEstimateError("ingest: 0 records survived filtering (report at " +
                                 summary.stats_path + ")");
  }
  return summary;
}

// --- train ----------------------------------------------------------------

TrainSummary run_train(const TrainOptions& options) {
  StageTimer timer;
  for (const auto& [stem, path] : options.training_files) {
    if (!parse_group(stem)) throw ConfigError("train: unknown party group '" + stem + "'");
    (void)path;
  }
  for (int g = 0; g < kNumGroups; ++g) {
    const std::string stem(group_file_stem(static_cast<TrainingGroup>(g)));
    if (!options.training_files.count(stem)) {
      throw ConfigError("train: missing labeled data for group '" + stem + "'");
    }
  }

  const std::string out_dir = resolve_out(options.out_dir);
  TrainSummary summary;
  std::vector<std::string> inputs;
  for (int g = 0; g < kNumGroups; ++g) {
    const auto group = static_cast<TrainingGroup>(g);
    const std::string stem(group_file_stem(group));
    const std::string& data_path = options.training_files.at(stem);
    inputs.push_back(data_path);

    const auto examples = nb::load_labeled_csv(data_path);
    const auto [train_set, test_set] =
        nb::split_train_test(examples, 1.0 - options.holdout_fraction, options.seed);
    const auto model = nb::train_nb(train_set, options.alpha, options.ngram);
    const auto metrics = nb::evaluate(model, test_set);

    GroupMetrics gm;
    gm.group = stem;
    gm.examples = examples.size();
    gm.f1_negative = metrics.f1_n;
    gm.f1_positive = metrics.f1_p;
    gm.roc_auc = metrics.roc_auc;
    summary.metrics.push_back(gm);

    const std::string model_path = join(out_dir, "nb_" + stem + ".json");
    nb::save_model(model, model_path);
    summary.model_paths.push_back(model_path);
  }

  summary.metrics_path = join(out_dir, "train_metrics.csv");
  {
    auto out = open_out(summary.metrics_path);
    out << "group,examples,f1_n,f1_p,roc_auc\n";
    for (const auto& m : summary.metrics) {
      write_csv_row(out, {m.group, std::to_string(m.examples), format_double(m.f1_negative),
                          format_double(m.f1_positive), format_double(m.roc_auc)});
    }
    if (!out) throw InputError("failed while writing " + summary.metrics_path);
  }

  json opts;
  opts["training_files"] = json(options.training_files);
  opts["alpha"] = options.alpha;
  opts["ngram"] = options.ngram;
  opts["holdout_fraction"] = options.holdout_fraction;
  opts["seed"] = options.seed;
  json counts;
  for (const auto& m : summary.metrics) counts[m.group] = m.examples;
  auto outputs = summary.model_paths;
  outputs.push_back(summary.metrics_path);
  write_manifest(out_dir, "train", std::move(opts), digest_paths(inputs),
                 digest_paths(outputs), std::move(counts), timer.ms());
  return summary;
}

// --- score ----------------------------------------------------------------

ScoreSummary run_score(const ScoreOptions& options) {
  StageTimer timer;
  auto loaded = read_records_csv(options.records_path);
  if (!loaded.records.empty() && loaded.texts.size() != loaded.records.size()) {
    throw InputError("score: " + options.records_path +
                     " lacks the text column produced by ingest");
  }

  std::vector<nb::NBModel> group_models;
  std::vector<std::string> model_paths;
  group_models.reserve(kNumGroups);
  for (int g = 0; g < kNumGroups; ++g) {
    const std::string stem(group_file_stem(static_cast<TrainingGroup>(g)));
    model_paths.push_back(join(options.model_dir, "nb_" + stem + ".json"));
    group_models.push_back(nb::load_model(model_paths.back()));
  }

  for (size_t i = 0; i < loaded.records.size(); ++i) {
    auto& rec = loaded.records[i];
    const auto& model = group_models[static_cast<size_t>(training_group(rec.party))];
    rec.allegiance = nb::predict_allegiance(model, loaded.texts[i]);
  }

  const std::string out_dir = resolve_out(options.out_dir);
  ScoreSummary summary;
  summary.records = loaded.records.size();
  summary.records_path = join(out_dir, "scored.csv");
  {
    auto out = open_out(summary.records_path);
    write_records_csv(out, loaded.records);
    if (!out) throw InputError("failed while writing " + summary.records_path);
  }

  json opts;
  opts["records_path"] = options.records_path;
  opts["model_dir"] = options.model_dir;
  auto inputs = model_paths;
  inputs.push_back(options.records_path);
  json counts;
  counts["records"] = summary.records;
  write_manifest(out_dir, "score", std::move(opts), digest_paths(inputs),
                 digest_paths({summary.records_path}), std::move(counts), timer.ms());
  return summary;
}

// --- model ----------------------------------------------------------------

ModelSummary run_model(const ModelOptions& options) {
  StageTimer timer;
  if (options.n_resamples == 0) throw ConfigError("model: need at least one bootstrap resample");
  auto loaded = read_records_csv(options.records_path);
  if (loaded.records.empty()) {
    throw UndefinedEstimateError("model: no records in " + options.records_path);
  }
  require_scored(loaded.records);

  std::vector<models::ModelSpec> specs = options.specs;
  if (specs.empty()) {
    const auto all = models::all_models();
    specs.assign(all.begin(), all.end());
  }

  const RecordTable table = RecordTable::build(loaded.records);
  auto month_rows = monthly_partition_rows(loaded.records);

  for (const auto& m : options.months) {
    if (!parse_month(m)) throw ConfigError("model: bad month '" + m + "' (want YYYY-MM)");
  }
  const auto keep_month = [&](const std::string& label) {
    return options.months.empty() ||
           std::find(options.months.begin(), options.months.end(), label) !=
               options.months.end();
  };

  struct Partition {
    std::string label;
    std::vector<uint32_t> rows;  // empty means all rows
  };
  std::vector<Partition> parts;
  parts.push_back({"all", {}});
  for (auto& [month, rows] : month_rows) {
    if (keep_month(to_string(month))) parts.push_back({to_string(month), std::move(rows)});
  }

  const auto applies = [&](const models::ModelSpec& spec, const Partition& part) {
    // ALT is a per-month construct and never pools across months; the other
    // models always get the pooled row and, optionally, monthly rows.
    if (part.label == "all") return spec.family != models::ModelFamily::ALT;
    return spec.family == models::ModelFamily::ALT || options.monthly;
  };

  Rng seed_seq(options.seed);
  ModelSummary summary;
  std::vector<std::vector<std::optional<EstimateRow>>> grid(
      specs.size(), std::vector<std::optional<EstimateRow>>(parts.size()));

  models::UserScratch scratch;
  scratch.reset(table.users());
  std::vector<uint32_t> counts;
  std::vector<std::vector<double>> rep_shares(specs.size());
  std::vector<uint32_t> rep_undefined(specs.size());

  for (size_t pi = 0; pi < parts.size(); ++pi) {
    const auto& part = parts[pi];
    const uint64_t part_seed = seed_seq.next();
    std::vector<size_t> live;
    for (size_t si = 0; si < specs.size(); ++si) {
      if (applies(specs[si], part)) live.push_back(si);
    }
    if (live.empty()) continue;

    const std::span<const uint32_t> rows(part.rows);
    const uint32_t n_rows = rows.empty() ? table.rows() : static_cast<uint32_t>(rows.size());

    std::vector<size_t> defined;
    for (const size_t si : live) {
      const auto outcome = models::eval_share(table, specs[si], rows, {}, scratch);
      if (!outcome.share) {
        summary.notes.push_back(models::model_id(specs[si]) + " " + part.label +
                                ": undefined estimate");
        continue;
      }
      EstimateRow row;
      row.model = models::model_id(specs[si]);
      row.month = part.label;
      row.share_pct = *outcome.share * 100.0;
      row.records = outcome.records;
      row.users = outcome.users;
      grid[si][pi] = std::move(row);
      defined.push_back(si);
    }
    if (defined.empty()) continue;

    // One set of resample counts per replicate, shared by every model on
    // this partition; replicate i draws from the stream (partition seed, i).
    counts.assign(n_rows, 0);
    for (const size_t si : defined) {
      rep_shares[si].clear();
      rep_undefined[si] = 0;
    }
    for (uint32_t i = 0; i < options.n_resamples; ++i) {
      Rng rng = Rng::stream(part_seed, i);
      std::fill(counts.begin(), counts.end(), 0u);
      for (uint32_t j = 0; j < n_rows; ++j) ++counts[rng.below(n_rows)];
      for (const size_t si : defined) {
        const auto outcome = models::eval_share(table, specs[si], rows, counts, scratch);
        if (outcome.share) {
          rep_shares[si].push_back(*outcome.share);
        } else {
          ++rep_undefined[si];
        }
      }
    }
    for (const size_t si : defined) {
      if (2 * static_cast<uint64_t>(rep_undefined[si]) > options.n_resamples) {
        summary.notes.push_back(models::model_id(specs[si]) + " " + part.label +
                                ": bootstrap undefined on " +
                                std::to_string(rep_undefined[si]) + " of " +
                                std::to_string(options.n_resamples) + " resamples");
        grid[si][pi].reset();
        continue;
      }
      const auto box = stats::boxplot_summary(rep_shares[si]);
      auto& row = *grid[si][pi];
      row.q1_pct = box.q1 * 100.0;
      row.median_pct = box.median * 100.0;
      row.q3_pct = box.q3 * 100.0;
      row.undefined_resamples = rep_undefined[si];
    }
  }

  for (size_t si = 0; si < specs.size(); ++si) {
    for (size_t pi = 0; pi < parts.size(); ++pi) {
      if (grid[si][pi]) summary.rows.push_back(std::move(*grid[si][pi]));
    }
  }

  const std::string out_dir = resolve_out(options.out_dir);
  summary.estimates_path = join(out_dir, "estimates.csv");
  {
    auto out = open_out(summary.estimates_path);
    out << "model,month,share_pct,q1_pct,median_pct,q3_pct,records,users,"
           "undefined_resamples\n";
    for (const auto& r : summary.rows) {
      write_csv_row(out, {r.model, r.month, format_double(r.share_pct),
                          format_double(r.q1_pct), format_double(r.median_pct),
                          format_double(r.q3_pct), std::to_string(r.records),
                          std::to_string(r.users), std::to_string(r.undefined_resamples)});
    }
    if (!out) throw InputError("failed while writing " + summary.estimates_path);
  }

  json opts;
  {
    std::vector<std::string> ids;
    for (const auto& s : specs) ids.push_back(models::model_id(s));
    opts["models"] = ids;
    opts["records_path"] = options.records_path;
    opts["n_resamples"] = options.n_resamples;
    opts["seed"] = options.seed;
    opts["monthly"] = options.monthly;
    opts["months"] = options.months;
    for (const auto& s : specs) {
      if (s.family == models::ModelFamily::ALT) {
        opts["alt_x_low"] = s.bounds.x_low;
        opts["alt_x_upp"] = s.bounds.x_upp;
      }
    }
  }
  json counts_json;
  counts_json["records"] = loaded.records.size();
  counts_json["rows"] = summary.rows.size();
  counts_json["notes"] = summary.notes;
  write_manifest(out_dir, "model", std::move(opts), digest_paths({options.records_path}),
                 digest_paths({summary.estimates_path}), std::move(counts_json), timer.ms());
  return summary;
}

// --- sweep ----------------------------------------------------------------

SweepSummary run_sweep(const SweepOptions& options) {
  StageTimer timer;
  auto loaded = read_records_csv(options.records_path);
  if (loaded.records.empty()) {
    throw UndefinedEstimateError("sweep: no records in " + options.records_path);
  }
  require_scored(loaded.records);

  std::vector<double> x_low = options.x_low_grid;
  std::vector<double> x_upp = options.x_upp_grid;
  if (x_low.empty()) {
    for (int i = 1; i <= 7; ++i) x_low.push_back(i / 10.0);
  }
  if (x_upp.empty()) {
    for (int i = 7; i <= 10; ++i) x_upp.push_back(i / 10.0);
  }

  for (const auto& m : options.months) {
    if (!parse_month(m)) throw ConfigError("sweep: bad month '" + m + "' (want YYYY-MM)");
  }
  const auto by_month = monthly_partition(loaded.records);
  Rng seed_seq(options.seed);
  SweepSummary summary;
  for (const auto& [month, records] : by_month) {
    const std::string label = to_string(month);
    if (!options.months.empty() &&
        std::find(options.months.begin(), options.months.end(), label) ==
            options.months.end()) {
      continue;
    }
    const uint64_t month_seed = seed_seq.next();
    summary.months.push_back(label);
    summary.cells_by_month.push_back(
        models::alt_grid_sweep(records, x_low, x_upp, options.n_resamples, month_seed));
  }
  if (summary.months.empty()) {
    throw UndefinedEstimateError("sweep: no records in the requested months");
  }

  const std::string out_dir = resolve_out(options.out_dir);
  summary.sweep_path = join(out_dir, "sweep.csv");
  {
    auto out = open_out(summary.sweep_path);
    out << "month,x_low,x_upp,valid,share_pct,precision_iqr_pp,users\n";
    for (size_t m = 0; m < summary.months.size(); ++m) {
      for (const auto& cell : summary.cells_by_month[m]) {
        write_csv_row(
            out, {summary.months[m], format_double(cell.x_low), format_double(cell.x_upp),
                  cell.valid ? "1" : "0",
                  cell.share ? format_double(*cell.share * 100.0) : std::string(),
                  cell.precision_iqr_pp ? format_double(*cell.precision_iqr_pp) : std::string(),
                  std::to_string(cell.users)});
      }
    }
    if (!out) throw InputError("failed while writing " + summary.sweep_path);
  }

  json opts;
  opts["records_path"] = options.records_path;
  opts["x_low_grid"] = x_low;
  opts["x_upp_grid"] = x_upp;
  opts["n_resamples"] = options.n_resamples;
  opts["seed"] = options.seed;
  opts["months"] = options.months;
  json counts;
  counts["months"] = summary.months.size();
  counts["cells_per_month"] = x_low.size() * x_upp.size();
  write_manifest(out_dir, "sweep", std::move(opts), digest_paths({options.records_path}),
                 digest_paths({summary.sweep_path}), std::move(counts), timer.ms());
  return summary;
}

// --- geo ------------------------------------------------------------------

GeoSummary run_geo(const GeoOptions& options) {
  StageTimer timer;
  auto loaded = read_records_csv(options.records_path);
  if (loaded.records.empty()) {
    throw UndefinedEstimateError("geo: no records in " + options.records_path);
  }
  const auto census = load_census_csv(options.census_path);
  const auto report = geo::representativeness_report(loaded.records, census);

  GeoSummary summary;
  summary.pearson_r = report.r_population_twitter;
  summary.total_variation = geo::total_variation(report.population, report.twitter);
  summary.geo_users = report.geo_users;

  json j;
  j["geo_users"] = report.geo_users;
  j["distributions"] = {{"labels", report.population.labels},
                        {"population_pct", report.population.pct},
                        {"internet_pct", report.internet.pct},
                        {"twitter_pct", report.twitter.pct}};
  j["correlations"] = {{"population_internet", report.r_population_internet},
                       {"population_twitter", report.r_population_twitter},
                       {"internet_twitter", report.r_internet_twitter},
                       {"population_twitter_merged", report.r_population_twitter_merged},
                       {"internet_twitter_merged", report.r_internet_twitter_merged}};
  j["residuals_pp"] = {{"population_minus_internet", report.residual_internet_pp},
                       {"population_minus_twitter", report.residual_twitter_pp}};
  j["max_abs_diff_population_twitter"] =
      geo::max_abs_diff(report.population, report.twitter);
  j["total_variation_population_twitter"] = summary.total_variation;

  if (options.panel_model) {
    require_scored(loaded.records);
    const auto panel = geo::population_weighted_resample(
        loaded.records, report.population, options.panel_k, options.panel_reps,
        *options.panel_model, options.seed);
    summary.panel_median_pct = panel.box.median * 100.0;
    json quotas = json::array();
    for (const auto& q : panel.quotas) {
      quotas.push_back({{"state", std::string(state_code_str(q.state))},
                        {"quota", q.quota},
                        {"available", q.available}});
    }
    j["panel"] = {{"model", models::model_id(*options.panel_model)},
                  {"k", panel.k},
                  {"reps", panel.reps},
                  {"n_undefined", panel.n_undefined},
                  {"share_q1_pct", panel.box.q1 * 100.0},
                  {"share_median_pct", panel.box.median * 100.0},
                  {"share_q3_pct", panel.box.q3 * 100.0},
                  {"quotas", std::move(quotas)},
                  {"drawn_pct", panel.drawn.pct},
                  {"tv_drawn_vs_target", geo::total_variation(panel.drawn, report.population)},
                  {"notes", panel.notes},
                  {"seed", panel.seed}};
  }

  const std::string out_dir = resolve_out(options.out_dir);
  summary.report_path = join(out_dir, "geo_report.json");
  write_json_file(summary.report_path, j);

  json opts;
  opts["records_path"] = options.records_path;
  opts["census_path"] = options.census_path;
  if (options.panel_model) {
    opts["panel_model"] = models::model_id(*options.panel_model);
    opts["panel_k"] = options.panel_k;
    opts["panel_reps"] = options.panel_reps;
    opts["seed"] = options.seed;
  }
  json counts;
  counts["records"] = loaded.records.size();
  counts["geo_users"] = report.geo_users;
  write_manifest(out_dir, "geo", std::move(opts),
                 digest_paths({options.records_path, options.census_path}),
                 digest_paths({summary.report_path}), std::move(counts), timer.ms());
  return summary;
}

// --- synth ----------------------------------------------------------------

SynthSummary run_synth(const SynthOptions& options) {
  StageTimer timer;
  synth::GeneratorConfig config;
  if (!options.config_path.empty()) config = synth::load_generator_config(options.config_path);
  for (const auto& [key, value] : options.overrides) {
    synth::apply_generator_kv(config, key, value);
  }
  config.validate();

  const std::string out_dir = resolve_out(options.out_dir);
  SynthSummary summary;
  std::vector<std::string> outputs;
  if (options.text_mode) {
    const auto files = synth::write_text_corpus(config, out_dir);
    summary.truth = synth::read_truth_json(files.truth_path);
    summary.corpus_path = files.tweets_path;
    summary.truth_path = files.truth_path;
    outputs.push_back(files.tweets_path);
    outputs.insert(outputs.end(), files.training_paths.begin(), files.training_paths.end());
    outputs.push_back(files.truth_path);
  } else {
    const auto corpus = synth::generate_corpus(config);
    summary.truth = corpus.truth;
    summary.corpus_path = join(out_dir, "synth_records.csv");
    summary.truth_path = join(out_dir, "truth.json");
    {
      auto out = open_out(summary.corpus_path);
      write_records_csv(out, corpus.records);
      if (!out) throw InputError("failed while writing " + summary.corpus_path);
    }
    synth::write_truth_json(summary.truth, summary.truth_path);
    outputs.push_back(summary.corpus_path);
    outputs.push_back(summary.truth_path);
  }

  json opts;
  opts["config_path"] = options.config_path;
  json overrides = json::array();
  for (const auto& [key, value] : options.overrides) overrides.push_back(key + "=" + value);
  opts["overrides"] = std::move(overrides);
  opts["text_mode"] = options.text_mode;
  opts["seed"] = config.seed;
  opts["n_users"] = config.n_users;
  json inputs = json::object();
  if (!options.config_path.empty()) inputs = digest_paths({options.config_path});
  json counts;
  counts["n_partisan_users"] = summary.truth.n_partisan_users;
  counts["n_noise_users"] = summary.truth.n_noise_users;
  counts["n_records"] = summary.truth.n_records;
  counts["n_tweets"] = summary.truth.n_tweets;
  write_manifest(out_dir, "synth", std::move(opts), std::move(inputs), digest_paths(outputs),
                 std::move(counts), timer.ms());
  return summary;
}

// --- report ---------------------------------------------------------------

ReportSummary run_report(const ReportOptions& options) {
  StageTimer timer;
  const json reference = read_json_file(options.reference_path);
  if (!reference.is_object() || !reference.contains("official_share_pct") ||
      !reference.at("official_share_pct").is_number() ||
      !reference.contains("poll_aggregate_pct") ||
      !reference.at("poll_aggregate_pct").is_number()) {
    throw InputError("report: " + options.reference_path +
                     " needs numeric official_share_pct and poll_aggregate_pct");
  }
  ReportSummary summary;
  summary.official_pct = reference.at("official_share_pct").get<double>();
  summary.polls_pct = reference.at("poll_aggregate_pct").get<double>();

  std::ifstream in(options.estimates_path, std::ios::binary);
  if (!in) throw InputError("cannot open " + options.estimates_path);
  CsvReader reader(in);
  std::vector<std::string> fields;
  if (!reader.next(fields) || fields.size() != 9 || fields[0] != "model") {
    throw InputError("report: unexpected header in " + options.estimates_path);
  }
  while (reader.next(fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 9) {
      throw InputError("report: wrong field count at line " + std::to_string(reader.line()));
    }
    ReportRow row;
    row.model = fields[0];
    row.month = fields[1];
    row.share_pct = parse_csv_double(fields[2], reader.line(), options.estimates_path);
    row.q1_pct = parse_csv_double(fields[3], reader.line(), options.estimates_path);
    row.median_pct = parse_csv_double(fields[4], reader.line(), options.estimates_path);
    row.q3_pct = parse_csv_double(fields[5], reader.line(), options.estimates_path);
    (void)parse_csv_u64(fields[6], reader.line(), options.estimates_path);
    row.error_official_pp = row.share_pct - summary.official_pct;
    row.error_polls_pp = row.share_pct - summary.polls_pct;
    row.precision_pp = row.q3_pct - row.q1_pct;
    summary.rows.push_back(std::move(row));
  }

  json j;
  j["reference"] = reference;
  j["official_pct"] = summary.official_pct;
  j["polls_pct"] = summary.polls_pct;
  std::vector<std::string> inputs{options.estimates_path, options.reference_path};
  if (options.geo_report_path) {
    const json geo = read_json_file(*options.geo_report_path);
    json pass = json::object();
    if (geo.contains("correlations")) pass["correlations"] = geo.at("correlations");
    if (geo.contains("geo_users")) pass["geo_users"] = geo.at("geo_users");
    if (geo.contains("total_variation_population_twitter")) {
      pass["total_variation_population_twitter"] =
          geo.at("total_variation_population_twitter");
    }
    if (geo.contains("panel")) pass["panel"] = geo.at("panel");
    j["geo"] = std::move(pass);
    inputs.push_back(*options.geo_report_path);
  }
  json rows = json::array();
  for (const auto& r : summary.rows) {
    rows.push_back({{"model", r.model},
                    {"month", r.month},
                    {"share_pct", r.share_pct},
                    {"q1_pct", r.q1_pct},
                    {"median_pct", r.median_pct},
                    {"q3_pct", r.q3_pct},
                    {"error_official_pp", r.error_official_pp},
                    {"error_polls_pp", r.error_polls_pp},
                    {"precision_pp", r.precision_pp}});
  }
  j["rows"] = std::move(rows);

  const std::string out_dir = resolve_out(options.out_dir);
  summary.report_path = join(out_dir, "report.json");
  write_json_file(summary.report_path, j);
  const std::string table_path = join(out_dir, "report.txt");
  {
    auto out = open_out(table_path);
    out << format_report_table(summary);
    if (!out) throw InputError("failed while writing " + table_path);
  }

  json opts;
  opts["estimates_path"] = options.estimates_path;
  opts["reference_path"] = options.reference_path;
  if (options.geo_report_path) opts["geo_report_path"] = *options.geo_report_path;
  json counts;
  counts["rows"] = summary.rows.size();
  write_manifest(out_dir, "report", std::move(opts), digest_paths(inputs),
                 digest_paths({summary.report_path, table_path}), std::move(counts),
                 timer.ms());
  return summary;
}

std::string format_report_table(const ReportSummary& summary) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "reference: official %.2f%% | polls %.2f%%\n",
                summary.official_pct, summary.polls_pct);
  out += buf;
  std::snprintf(buf, sizeof buf, "%-5s %-8s %9s %9s %9s %9s %9s %9s %7s\n", "model", "month",
                "share%", "q1%", "median%", "q3%", "vs_off", "vs_polls", "iqr_pp");
  out += buf;
  for (const auto& r : summary.rows) {
    std::snprintf(buf, sizeof buf, "%-5s %-8s %9.2f %9.2f %9.2f %9.2f %+9.2f %+9.2f %7.2f\n",
                  r.model.c_str(), r.month.c_str(), r.share_pct, r.q1_pct, r.median_pct,
                  r.q3_pct, r.error_official_pp, r.error_polls_pp, r.precision_pp);
    out += buf;
  }
  return out;
}

}  // namespace twelect::pipeline
