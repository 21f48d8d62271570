#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twelect/records.hpp"
#include "twelect/states.hpp"
#include "twelect/timeutil.hpp"

namespace twelect::synth {

// Tweet volume per user: P(X = k) proportional to k^-alpha for k in
// [minimum, cap], sampled by inverse CDF.
struct ParetoSpec {
  double alpha = 1.8;
  uint32_t minimum = 1;
  uint32_t cap = 500;
};

// Uniform on [mean - spread, mean + spread] clamped to [0, 1].
struct BandSpec {
  double mean = 0.5;
  double spread = 0.1;
};

enum class NoiseBehavior {
  kSingleCoalition,  // each noise user sticks to one randomly chosen side
  kBothCoalitions,   // every tweet picks a side independently
};

struct GeneratorConfig {
  uint64_t seed = 1;
  uint32_t n_users = 2000;

  // Partisan population. Users are partisan unless assigned to the noise
  // pool; partisan users get a home coalition (ruling with probability
  // ruling_user_frac, or the per-state share when set).
  double ruling_user_frac = 0.5;
  double noise_user_frac = 0.0;
  NoiseBehavior noise_behavior = NoiseBehavior::kSingleCoalition;

  // Behavior knobs.
  ParetoSpec tweets_per_user;
  BandSpec supporter{0.85, 0.10};  // allegiance toward the home coalition
  BandSpec detractor{0.15, 0.10};  // allegiance in attack tweets
  double ruling_attack_prob = 0.0;      // home=ruling tweet targets opposition instead
  double opposition_attack_prob = 0.0;  // home=opposition tweet targets ruling instead
  double cross_mention_prob = 0.0;      // tweet mentions both sides (two records)
  double hyperactive_frac = 0.0;        // share of partisan users with boosted volume
  double hyperactive_mult = 1.0;        // volume multiplier for that pool
  std::optional<Coalition> hyperactive_side;  // restrict the pool to one side

  // Geography. Users are placed in a state with probability geo_frac
  // (otherwise no geodata) using state_weights; foreign_frac of the geo pool
  // is placed abroad instead. geo_frac > 0 requires positive weight mass.
  double geo_frac = 0.0;
  double foreign_frac = 0.0;
  std::array<double, kNumStates> state_weights{};
  std::optional<std::array<double, kNumStates>> state_ruling_share;

  // Timestamps are uniform over [window_start, window_end).
  int64_t window_start = kDefaultWindowStart;
  int64_t window_end = kDefaultWindowEnd;

  // Text mode only: fraction of emitted lines in a non-Spanish language.
  double foreign_lang_frac = 0.0;

  void validate() const;  // throws ConfigError
};

struct GroundTruth {
  double planted_share = 0.0;       // configured ruling share among partisans
  double realized_user_share = 0.0; // fraction of partisan users drawn ruling
  uint32_t n_partisan_users = 0;
  uint32_t n_noise_users = 0;
  uint64_t n_records = 0;
  uint64_t n_tweets = 0;
};

struct SynthCorpus {
  std::vector<AllegianceRecord> records;  // output order: (timestamp, tweet_id, party)
  GroundTruth truth;
};

// Deterministic in config.seed.
SynthCorpus generate_corpus(const GeneratorConfig& config);

struct NamedConfig {
  std::string name;
  std::string note;
  GeneratorConfig config;
};

// Stress variants derived from a base configuration:
//   baseline        base as given
//   negativity      one side attacks the other far more often
//   capital_skew    Mexico City over-represented and politically atypical
//   hyperactive     a small partisan minority posts at many times base volume
std::vector<NamedConfig> distortion_suite(const GeneratorConfig& base);

// One config assignment in the flat key grammar. Per-state keys use
// suffixes, e.g. "state_weight.MX = 20.4" and "state_ruling_share.MX = 0.2";
// "state_ruling_share.default" seeds all 32 entries and must come first.
// Throws ConfigError on unknown keys or unparseable values.
void apply_generator_kv(GeneratorConfig& config, const std::string& key,
                        const std::string& value);

// Flat key=value file, '#' comments, one assignment per line.
GeneratorConfig load_generator_config(const std::string& path);

struct TextCorpusFiles {
  std::string tweets_path;                  // JSON lines
  std::vector<std::string> training_paths;  // one labeled CSV per party group
  std::string truth_path;                   // ground-truth JSON
};

// Emits a raw corpus the full pipeline can ingest: tweet JSON lines whose
// text embeds party keywords plus sentiment words drawn to match the planted
// allegiance, labeled training CSVs built from the same vocabulary, and the
// ground truth. Place fields use state names rather than codes.
TextCorpusFiles write_text_corpus(const GeneratorConfig& config, const std::string& out_dir);

void write_truth_json(const GroundTruth& truth, const std::string& path);
GroundTruth read_truth_json(const std::string& path);

}  // namespace twelect::synth
