// twelect: end-to-end toolkit for tweet-based vote-share estimation.
// Subcommands mirror the pipeline stages; see README.md for a walkthrough.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "twelect/errors.hpp"
#include "twelect/pipeline.hpp"

namespace {

using namespace twelect;

// A flat key=value file whose assignments are appended after the command
// line, so with every option set to take-last they override the flags.
std::vector<std::string> config_overrides(const std::vector<std::string>& args) {
  std::string path;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    }
  }
  std::vector<std::string> extra;
  if (path.empty()) return extra;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open config file: " + path);
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t\r");
    line = line.substr(begin, end - begin + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t");
      return s.substr(b, e - b + 1);
    };
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": empty key");
    }
    extra.push_back("--" + key + "=" + value);
  }
  return extra;
}

int64_t parse_time_flag(const std::string& value, const char* flag) {
  if (const auto iso = parse_iso8601(value)) return *iso;
  int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError(std::string(flag) + ": expected ISO-8601 or epoch seconds, got '" +
                      value + "'");
  }
  return v;
}

// Every scalar option takes the last occurrence so config-file assignments
// (appended after the flags) win.
CLI::Option* last_wins(CLI::Option* opt) {
  return opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

void add_config_flag(CLI::App* cmd, std::string& sink) {
  last_wins(cmd->add_option("--config", sink,
                            "key=value file; assignments override the flags"));
}

std::vector<models::ModelSpec> parse_model_list(const std::vector<std::string>& ids,
                                                models::AltBounds bounds) {
  std::vector<models::ModelSpec> specs;
  for (const auto& id : ids) {
    const auto spec = models::parse_model_id(id, bounds);
    if (!spec) {
      throw ConfigError("unknown model '" + id +
                        "' (want CVT CVU CAT CAU GVT GVU GAT GAU or ALT)");
    }
    specs.push_back(*spec);
  }
  return specs;
}

void print_metrics(const pipeline::TrainSummary& summary) {
  std::printf("%-12s %9s %8s %8s %8s\n", "group", "examples", "f1_n", "f1_p", "auc");
  for (const auto& m : summary.metrics) {
    std::printf("%-12s %9llu %8.4f %8.4f %8.4f\n", m.group.c_str(),
                static_cast<unsigned long long>(m.examples), m.f1_negative, m.f1_positive,
                m.roc_auc);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tweet-based vote-share estimation toolkit"};
  app.require_subcommand(1);

  std::string config_sink;  // consumed by the pre-scan; declared so CLI11 accepts it

  // --- ingest ---
  pipeline::IngestOptions ingest_opts;
  std::string window_start_str, window_end_str;
  auto* ingest = app.add_subcommand("ingest", "filter and party-match raw tweet JSON lines");
  ingest->add_option("--input", ingest_opts.tweet_files, "JSON-lines shard (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  last_wins(ingest->add_option("--queries", ingest_opts.query_dir, "per-party query directory")
                ->required()
                ->check(CLI::ExistingDirectory));
  last_wins(ingest->add_option("--window-start", window_start_str,
                               "ISO-8601 or epoch seconds (default 2020-12-01T05:00:00Z)"));
  last_wins(ingest->add_option("--window-end", window_end_str,
                               "ISO-8601 or epoch seconds (default 2021-05-31T05:00:00Z)"));
  last_wins(ingest->add_option("--out", ingest_opts.out_dir, "output directory"));
  add_config_flag(ingest, config_sink);

  // --- train ---
  pipeline::TrainOptions train_opts;
  std::string training_dir;
  auto* train = app.add_subcommand("train", "train the per-group connotation classifiers");
  last_wins(train
                ->add_option("--training-dir", training_dir,
                             "directory with <group>.csv labeled files for all 7 groups")
                ->required()
                ->check(CLI::ExistingDirectory));
  last_wins(train->add_option("--alpha", train_opts.alpha, "Laplace smoothing")
                ->check(CLI::PositiveNumber)
                ->capture_default_str());
  last_wins(train->add_option("--ngram", train_opts.ngram, "max n-gram order")
                ->check(CLI::PositiveNumber)
                ->capture_default_str());
  last_wins(train->add_option("--holdout", train_opts.holdout_fraction,
                              "held-out evaluation fraction")
                ->capture_default_str());
  last_wins(train->add_option("--seed", train_opts.seed, "split shuffle seed")
                ->capture_default_str());
  last_wins(train->add_option("--out", train_opts.out_dir, "output directory"));
  add_config_flag(train, config_sink);

  // --- score ---
  pipeline::ScoreOptions score_opts;
  auto* score = app.add_subcommand("score", "attach allegiance scores to ingested records");
  last_wins(score->add_option("--records", score_opts.records_path, "ingest records.csv")
                ->required()
                ->check(CLI::ExistingFile));
  last_wins(score->add_option("--models", score_opts.model_dir, "train output directory")
                ->required()
                ->check(CLI::ExistingDirectory));
  last_wins(score->add_option("--out", score_opts.out_dir, "output directory"));
  add_config_flag(score, config_sink);

  // --- model ---
  pipeline::ModelOptions model_opts;
  std::vector<std::string> model_ids;
  models::AltBounds model_bounds;
  auto* model = app.add_subcommand("model", "vote-share estimates with bootstrap quartiles");
  last_wins(model->add_option("--records", model_opts.records_path, "scored records CSV")
                ->required()
                ->check(CLI::ExistingFile));
  model->add_option("--models", model_ids, "model ids (default: all nine)");
  last_wins(model->add_option("--resamples", model_opts.n_resamples, "bootstrap replicates")
                ->capture_default_str());
  last_wins(model->add_option("--seed", model_opts.seed, "bootstrap seed")
                ->capture_default_str());
  model->add_flag("--monthly,!--no-monthly", model_opts.monthly,
                  "emit per-month rows for every model");
  model->add_option("--month", model_opts.months, "restrict to YYYY-MM (repeatable)");
  last_wins(model->add_option("--alt-low", model_bounds.x_low, "ALT lower bound")
                ->capture_default_str());
  last_wins(model->add_option("--alt-upp", model_bounds.x_upp, "ALT upper bound")
                ->capture_default_str());
  last_wins(model->add_option("--out", model_opts.out_dir, "output directory"));
  add_config_flag(model, config_sink);

  // --- sweep ---
  pipeline::SweepOptions sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "ALT (x_low, x_upp) grid sweep");
  last_wins(sweep->add_option("--records", sweep_opts.records_path, "scored records CSV")
                ->required()
                ->check(CLI::ExistingFile));
  sweep->add_option("--x-low", sweep_opts.x_low_grid, "x_low grid (default 0.1..0.7)");
  sweep->add_option("--x-upp", sweep_opts.x_upp_grid, "x_upp grid (default 0.7..1.0)");
  last_wins(sweep->add_option("--resamples", sweep_opts.n_resamples, "bootstrap replicates")
                ->capture_default_str());
  last_wins(sweep->add_option("--seed", sweep_opts.seed, "bootstrap seed")
                ->capture_default_str());
  sweep->add_option("--month", sweep_opts.months, "restrict to YYYY-MM (repeatable)");
  last_wins(sweep->add_option("--out", sweep_opts.out_dir, "output directory"));
  add_config_flag(sweep, config_sink);

  // --- geo ---
  pipeline::GeoOptions geo_opts;
  std::string panel_model_id;
  auto* geo = app.add_subcommand("geo", "regional representativeness and panel resampling");
  last_wins(geo->add_option("--records", geo_opts.records_path, "records CSV")
                ->required()
                ->check(CLI::ExistingFile));
  last_wins(geo->add_option("--census", geo_opts.census_path, "census CSV")
                ->required()
                ->check(CLI::ExistingFile));
  last_wins(geo->add_option("--panel-model", panel_model_id,
                            "run population-weighted panels under this model"));
  last_wins(geo->add_option("--panel-k", geo_opts.panel_k, "users per panel")
                ->capture_default_str());
  last_wins(geo->add_option("--panel-reps", geo_opts.panel_reps, "panel replicates")
                ->capture_default_str());
  last_wins(geo->add_option("--seed", geo_opts.seed, "panel seed")->capture_default_str());
  last_wins(geo->add_option("--out", geo_opts.out_dir, "output directory"));
  add_config_flag(geo, config_sink);

  // --- synth ---
  pipeline::SynthOptions synth_opts;
  std::vector<std::string> synth_sets;
  auto* synth = app.add_subcommand("synth", "generate a planted-truth synthetic corpus");
  last_wins(synth->add_option("--generator", synth_opts.config_path,
                              "generator key=value config file")
                ->check(CLI::ExistingFile));
  synth->add_option("--set", synth_sets, "generator override key=value (repeatable)");
  synth->add_flag("--text", synth_opts.text_mode,
                  "emit raw tweet JSON lines plus training CSVs instead of scored records");
  last_wins(synth->add_option("--out", synth_opts.out_dir, "output directory"));
  add_config_flag(synth, config_sink);

  // --- report ---
  pipeline::ReportOptions report_opts;
  std::string geo_report_path;
  auto* report = app.add_subcommand("report", "compare estimates against reference results");
  last_wins(report->add_option("--estimates", report_opts.estimates_path, "estimates CSV")
                ->required()
                ->check(CLI::ExistingFile));
  last_wins(report->add_option("--reference", report_opts.reference_path,
                               "reference constants JSON")
                ->required()
                ->check(CLI::ExistingFile));
  last_wins(report->add_option("--geo-report", geo_report_path,
                               "geo_report.json to fold into the report")
                ->check(CLI::ExistingFile));
  last_wins(report->add_option("--out", report_opts.out_dir, "output directory"));
  add_config_flag(report, config_sink);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    const auto extra = config_overrides(args);
    args.insert(args.end(), extra.begin(), extra.end());
    std::reverse(args.begin(), args.end());  // CLI11 vector parse is back-to-front
    app.parse(args);

    if (*ingest) {
      if (!window_start_str.empty()) {
        ingest_opts.window_start = parse_time_flag(window_start_str, "--window-start");
      }
      if (!window_end_str.empty()) {
        ingest_opts.window_end = parse_time_flag(window_end_str, "--window-end");
      }
      const auto summary = pipeline::run_ingest(ingest_opts);
      std::printf("ingest: %llu lines -> %llu records, %llu tweets, %llu users\n",
                  static_cast<unsigned long long>(summary.lines_in),
                  static_cast<unsigned long long>(summary.records_out),
                  static_cast<unsigned long long>(summary.tweets_out),
                  static_cast<unsigned long long>(summary.users_out));
      std::printf("records: %s\nstats:   %s\n", summary.records_path.c_str(),
                  summary.stats_path.c_str());
    } else if (*train) {
      for (int g = 0; g < kNumGroups; ++g) {
        const std::string stem(group_file_stem(static_cast<TrainingGroup>(g)));
        train_opts.training_files[stem] = training_dir + "/" + stem + ".csv";
      }
      const auto summary = pipeline::run_train(train_opts);
      print_metrics(summary);
      std::printf("metrics: %s\n", summary.metrics_path.c_str());
    } else if (*score) {
      const auto summary = pipeline::run_score(score_opts);
      std::printf("score: %llu records -> %s\n",
                  static_cast<unsigned long long>(summary.records),
                  summary.records_path.c_str());
    } else if (*model) {
      model_bounds.validate();
      model_opts.specs = parse_model_list(model_ids, model_bounds);
      if (model_opts.specs.empty() &&
          (model_bounds.x_low != models::AltBounds{}.x_low ||
           model_bounds.x_upp != models::AltBounds{}.x_upp)) {
        const auto all = models::all_models(model_bounds);
        model_opts.specs.assign(all.begin(), all.end());
      }
      const auto summary = pipeline::run_model(model_opts);
      for (const auto& r : summary.rows) {
        std::printf("%-4s %-8s share %6.2f%%  iqr [%6.2f, %6.2f]\n", r.model.c_str(),
                    r.month.c_str(), r.share_pct, r.q1_pct, r.q3_pct);
      }
      for (const auto& note : summary.notes) std::printf("note: %s\n", note.c_str());
      std::printf("estimates: %s\n", summary.estimates_path.c_str());
    } else if (*sweep) {
      const auto summary = pipeline::run_sweep(sweep_opts);
      std::printf("sweep: %zu month(s) -> %s\n", summary.months.size(),
                  summary.sweep_path.c_str());
    } else if (*geo) {
      if (!panel_model_id.empty()) {
        const auto spec = models::parse_model_id(panel_model_id);
        if (!spec) throw ConfigError("unknown model '" + panel_model_id + "'");
        geo_opts.panel_model = *spec;
      }
      const auto summary = pipeline::run_geo(geo_opts);
      std::printf("geo: %zu geo users, r(population, twitter) = %.4f, TV = %.4f\n",
                  summary.geo_users, summary.pearson_r, summary.total_variation);
      if (summary.panel_median_pct) {
        std::printf("panel median share: %.2f%%\n", *summary.panel_median_pct);
      }
      std::printf("report: %s\n", summary.report_path.c_str());
    } else if (*synth) {
      for (const auto& kv : synth_sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
          throw ConfigError("--set expects key=value, got '" + kv + "'");
        }
        synth_opts.overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
      }
      const auto summary = pipeline::run_synth(synth_opts);
      std::printf("synth: %llu records, %llu tweets, planted share %.4f\n",
                  static_cast<unsigned long long>(summary.truth.n_records),
                  static_cast<unsigned long long>(summary.truth.n_tweets),
                  summary.truth.planted_share);
      std::printf("corpus: %s\ntruth:  %s\n", summary.corpus_path.c_str(),
                  summary.truth_path.c_str());
    } else if (*report) {
      if (!geo_report_path.empty()) report_opts.geo_report_path = geo_report_path;
      const auto summary = pipeline::run_report(report_opts);
      std::fputs(pipeline::format_report_table(summary).c_str(), stdout);
      std::printf("report: %s\n", summary.report_path.c_str());
    }
    return kOk;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const InputError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kInputError;
  } catch (const UndefinedEstimateError& e) {
    std::fprintf(stderr, "degenerate estimate: %s\n", e.what());
    return kDegenerateEstimate;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
