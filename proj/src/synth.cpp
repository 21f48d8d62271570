#include "twelect/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "twelect/csv.hpp"
#include "twelect/errors.hpp"
#include "twelect/rng.hpp"
#include "twelect/text.hpp"

namespace twelect::synth {
namespace {

using nlohmann::json;

constexpr std::array<Party, 3> kRulingParties{Party::MORENA, Party::PT, Party::PVEM};
constexpr std::array<Party, 7> kOppositionParties{Party::PAN, Party::PRI, Party::PRD,
                                                  Party::MC,  Party::PES, Party::FXM,
                                                  Party::RSP};

void require_prob(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError(std::string("generator: ") + name + " must lie in [0,1]");
  }
}

// Inverse-CDF sampler over {minimum..cap} with P(k) proportional to k^-alpha.
struct ParetoSampler {
  std::vector<double> cdf;
  uint32_t minimum = 1;

  explicit ParetoSampler(const ParetoSpec& spec) : minimum(spec.minimum) {
    cdf.reserve(spec.cap - spec.minimum + 1);
    double total = 0.0;
    for (uint32_t k = spec.minimum; k <= spec.cap; ++k) {
      total += std::pow(static_cast<double>(k), -spec.alpha);
      cdf.push_back(total);
    }
    for (double& c : cdf) c /= total;
  }

  uint32_t draw(Rng& rng) const {
    const double u = rng.unit();
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    const auto idx = static_cast<uint32_t>(it == cdf.end() ? cdf.size() - 1
                                                           : it - cdf.begin());
    return minimum + idx;
  }
};

double band_draw(const BandSpec& band, Rng& rng) {
  const double a = rng.uniform(band.mean - band.spread, band.mean + band.spread);
  return std::clamp(a, 0.0, 1.0);
}

Party pick_party(Coalition side, Rng& rng) {
  if (side == Coalition::Ruling) {
    return kRulingParties[rng.below(kRulingParties.size())];
  }
  return kOppositionParties[rng.below(kOppositionParties.size())];
}

std::string user_label(uint32_t u) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "u%07u", u);
  return buf;
}

std::string tweet_label(uint64_t t) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "t%010llu", static_cast<unsigned long long>(t));
  return buf;
}

struct UserPlan {
  bool noise = false;
  Coalition home = Coalition::Ruling;     // partisan home or single-side noise pick
  std::optional<StateCode> state;
  bool foreign = false;
  uint32_t tweets = 0;
};

// Everything about one user decided from the stream, shared by both modes.
struct Generator {
  const GeneratorConfig& cfg;
  ParetoSampler pareto;
  std::vector<double> state_cdf;  // empty when geo disabled
  GroundTruth truth;

  explicit Generator(const GeneratorConfig& config) : cfg(config), pareto(config.tweets_per_user) {
    if (cfg.geo_frac > 0.0) {
      double total = 0.0;
      for (const double w : cfg.state_weights) {
        if (w < 0.0) throw ConfigError("generator: state weights must be non-negative");
        total += w;
      }
      if (total <= 0.0) {
        throw ConfigError("generator: geo_frac > 0 needs a state weight distribution");
      }
      double acc = 0.0;
      state_cdf.reserve(kNumStates);
      for (const double w : cfg.state_weights) {
        acc += w / total;
        state_cdf.push_back(acc);
      }
    }
    truth.planted_share = planted_share();
  }

  double planted_share() const {
    const double p_state = cfg.geo_frac * (1.0 - cfg.foreign_frac);
    double share = (1.0 - p_state) * cfg.ruling_user_frac;
    if (p_state > 0.0) {
      double prev = 0.0;
      for (int s = 0; s < kNumStates; ++s) {
        const double w = state_cdf[static_cast<size_t>(s)] - prev;
        prev = state_cdf[static_cast<size_t>(s)];
        const double state_share = cfg.state_ruling_share
                                       ? (*cfg.state_ruling_share)[static_cast<size_t>(s)]
                                       : cfg.ruling_user_frac;
        share += p_state * w * state_share;
      }
    }
    return share;
  }

  UserPlan plan_user(Rng& rng) {
    UserPlan plan;
    plan.noise = rng.bernoulli(cfg.noise_user_frac);
    if (rng.bernoulli(cfg.geo_frac)) {
      if (rng.bernoulli(cfg.foreign_frac)) {
        plan.foreign = true;
      } else {
        const double u = rng.unit();
        const auto it = std::lower_bound(state_cdf.begin(), state_cdf.end(), u);
        plan.state = static_cast<StateCode>(
            it == state_cdf.end() ? kNumStates - 1 : it - state_cdf.begin());
      }
    }
    double ruling_prob = cfg.ruling_user_frac;
    if (plan.state && cfg.state_ruling_share) {
      ruling_prob = (*cfg.state_ruling_share)[static_cast<size_t>(*plan.state)];
    }
    if (plan.noise) {
      plan.home = rng.bernoulli(0.5) ? Coalition::Ruling : Coalition::Opposition;
      ++truth.n_noise_users;
    } else {
      plan.home = rng.bernoulli(ruling_prob) ? Coalition::Ruling : Coalition::Opposition;
      ++truth.n_partisan_users;
      if (plan.home == Coalition::Ruling) ++realized_ruling_;
    }
    plan.tweets = pareto.draw(rng);
    if (!plan.noise && cfg.hyperactive_frac > 0.0 &&
        (!cfg.hyperactive_side || *cfg.hyperactive_side == plan.home) &&
        rng.bernoulli(cfg.hyperactive_frac)) {
      plan.tweets = static_cast<uint32_t>(
          std::llround(static_cast<double>(plan.tweets) * cfg.hyperactive_mult));
      plan.tweets = std::max(plan.tweets, 1u);
    }
    return plan;
  }

  void finish_truth() {
    truth.realized_user_share =
        truth.n_partisan_users
            ? static_cast<double>(realized_ruling_) / static_cast<double>(truth.n_partisan_users)
            : 0.0;
  }

  uint64_t realized_ruling_ = 0;
};

// One emitted mention: coalition label plus planted allegiance.
struct Mention {
  Coalition side;
  double allegiance;
};

// The tweet-level draw shared by records mode and text mode: which side(s)
// the tweet references and with what allegiance.
std::vector<Mention> draw_mentions(const GeneratorConfig& cfg, const UserPlan& plan, Rng& rng) {
  std::vector<Mention> out;
  if (plan.noise) {
    const Coalition side = cfg.noise_behavior == NoiseBehavior::kSingleCoalition
                               ? plan.home
                               : (rng.bernoulli(0.5) ? Coalition::Ruling
                                                     : Coalition::Opposition);
    out.push_back({side, rng.unit()});
    return out;
  }
  const Coalition other =
      plan.home == Coalition::Ruling ? Coalition::Opposition : Coalition::Ruling;
  const double attack_prob = plan.home == Coalition::Ruling ? cfg.ruling_attack_prob
                                                            : cfg.opposition_attack_prob;
  if (rng.bernoulli(attack_prob)) {
    out.push_back({other, band_draw(cfg.detractor, rng)});
    if (rng.bernoulli(cfg.cross_mention_prob)) {
      out.push_back({plan.home, band_draw(cfg.supporter, rng)});
    }
  } else {
    out.push_back({plan.home, band_draw(cfg.supporter, rng)});
    if (rng.bernoulli(cfg.cross_mention_prob)) {
      out.push_back({other, band_draw(cfg.detractor, rng)});
    }
  }
  return out;
}

// Vocabulary for text mode. Party tokens line up with the stock query specs;
// sentiment words are split so the classifier has signal to learn.
std::string_view party_token(Party p) {
  switch (p) {
    case Party::MORENA: return "morena";
    case Party::PT: return "pt";
    case Party::PVEM: return "pvem";
    case Party::PAN: return "pan";
    case Party::PRI: return "pri";
    case Party::PRD: return "prd";
    case Party::MC: return "movimiento ciudadano";
    case Party::PES: return "pes";
    case Party::FXM: return "fxm";
    case Party::RSP: return "rsp";
  }
  return "?";
}

constexpr std::array<std::string_view, 10> kPositiveWords{
    "apoyo",   "excelente", "ganará", "votaré", "confianza",
    "aplauso", "esperanza", "mejor",  "rumbo",  "propuesta"};
constexpr std::array<std::string_view, 10> kNegativeWords{
    "corrupto", "fracaso", "mentira", "vergüenza", "pésimo",
    "robo",     "desastre", "nunca",  "malo",      "basura"};

std::string sentiment_text(Party party, double allegiance, Rng& rng) {
  std::string text(party_token(party));
  const uint32_t words = 3 + static_cast<uint32_t>(rng.below(5));
  for (uint32_t w = 0; w < words; ++w) {
    text.push_back(' ');
    if (rng.bernoulli(allegiance)) {
      text += kPositiveWords[rng.below(kPositiveWords.size())];
    } else {
      text += kNegativeWords[rng.below(kNegativeWords.size())];
    }
  }
  return text;
}

std::string json_escape_minimal(const std::string& s) {
  json j = s;
  return j.dump();
}

}  // namespace

void GeneratorConfig::validate() const {
  if (n_users < 1) throw ConfigError("generator: n_users must be >= 1");
  require_prob(ruling_user_frac, "ruling_user_frac");
  require_prob(noise_user_frac, "noise_user_frac");
  require_prob(ruling_attack_prob, "ruling_attack_prob");
  require_prob(opposition_attack_prob, "opposition_attack_prob");
  require_prob(cross_mention_prob, "cross_mention_prob");
  require_prob(hyperactive_frac, "hyperactive_frac");
  require_prob(geo_frac, "geo_frac");
  require_prob(foreign_frac, "foreign_frac");
  require_prob(foreign_lang_frac, "foreign_lang_frac");
  require_prob(supporter.mean, "supporter.mean");
  require_prob(detractor.mean, "detractor.mean");
  if (supporter.spread < 0.0 || detractor.spread < 0.0) {
    throw ConfigError("generator: band spreads must be non-negative");
  }
  if (hyperactive_mult < 1.0) throw ConfigError("generator: hyperactive_mult must be >= 1");
  if (!(tweets_per_user.alpha > 0.0)) throw ConfigError("generator: pareto alpha must be > 0");
  if (tweets_per_user.minimum < 1 || tweets_per_user.cap < tweets_per_user.minimum) {
    throw ConfigError("generator: pareto needs 1 <= minimum <= cap");
  }
  if (window_start >= window_end) throw ConfigError("generator: window start must precede end");
  if (state_ruling_share) {
    for (const double s : *state_ruling_share) require_prob(s, "state_ruling_share");
  }
  if (geo_frac > 0.0) {
    double total = 0.0;
    for (const double w : state_weights) {
      if (w < 0.0) throw ConfigError("generator: state weights must be non-negative");
      total += w;
    }
    if (total <= 0.0) {
      throw ConfigError("generator: geo_frac > 0 needs a state weight distribution");
    }
  }
}

SynthCorpus generate_corpus(const GeneratorConfig& config) {
  config.validate();
  Generator gen(config);
  Rng rng(config.seed);
  SynthCorpus corpus;
  uint64_t tweet_counter = 0;
  for (uint32_t u = 0; u < config.n_users; ++u) {
    const UserPlan plan = gen.plan_user(rng);
    const std::string user_id = user_label(u);
    for (uint32_t t = 0; t < plan.tweets; ++t) {
      const int64_t ts =
          config.window_start +
          static_cast<int64_t>(rng.below(static_cast<uint64_t>(config.window_end - config.window_start)));
      const std::string tweet_id = tweet_label(tweet_counter++);
      ++gen.truth.n_tweets;
      for (const Mention& mention : draw_mentions(config, plan, rng)) {
        AllegianceRecord rec;
        rec.tweet_id = tweet_id;
        rec.user_id = user_id;
        if (plan.state) {
          rec.region = state_code_str(*plan.state);
          rec.country = "MX";
        } else if (plan.foreign) {
          rec.country = "US";
        }
        rec.party = pick_party(mention.side, rng);
        rec.allegiance = mention.allegiance;
        rec.timestamp = ts;
        rec.coalition = mention.side;
        corpus.records.push_back(std::move(rec));
        ++gen.truth.n_records;
      }
    }
  }
  gen.finish_truth();
  corpus.truth = gen.truth;
  std::sort(corpus.records.begin(), corpus.records.end(),
            [](const AllegianceRecord& a, const AllegianceRecord& b) {
              return std::tie(a.timestamp, a.tweet_id, a.party) <
                     std::tie(b.timestamp, b.tweet_id, b.party);
            });
  return corpus;
}

std::vector<NamedConfig> distortion_suite(const GeneratorConfig& base) {
  base.validate();
  std::vector<NamedConfig> suite;
  suite.push_back({"baseline", "base configuration as given", base});

  {
    GeneratorConfig c = base;
    c.ruling_attack_prob = 0.05;
    c.opposition_attack_prob = 0.60;
    suite.push_back({"negativity",
                     "opposition supporters mostly attack the ruling side, so most "
                     "ruling-labeled records carry low allegiance",
                     c});
  }
  {
    GeneratorConfig c = base;
    c.geo_frac = 1.0;
    c.foreign_frac = 0.0;
    // Over-weight Mexico City to 20.4% of users; other states keep their
    // base proportions inside the remaining 79.6%.
    double other_total = 0.0;
    for (int s = 0; s < kNumStates; ++s) {
      if (static_cast<StateCode>(s) != StateCode::MX) {
        other_total += c.state_weights[static_cast<size_t>(s)];
      }
    }
    if (other_total <= 0.0) {
      throw ConfigError("capital_skew variant needs base weights for the other states");
    }
    for (int s = 0; s < kNumStates; ++s) {
      auto& w = c.state_weights[static_cast<size_t>(s)];
      w = static_cast<StateCode>(s) == StateCode::MX ? 20.4 : 79.6 * w / other_total;
    }
    std::array<double, kNumStates> shares;
    shares.fill(0.46);
    shares[static_cast<size_t>(StateCode::MX)] = 0.20;
    c.state_ruling_share = shares;
    suite.push_back({"capital_skew",
                     "Mexico City holds 20.4% of users and leans far from the other "
                     "states, so the unweighted estimate is biased",
                     c});
  }
  {
    GeneratorConfig c = base;
    c.hyperactive_frac = 0.01;
    c.hyperactive_mult = 50.0;
    c.hyperactive_side = Coalition::Opposition;
    suite.push_back({"hyperactive",
                     "1% of opposition supporters post at 50x volume, splitting the "
                     "tweet-based and user-based models",
                     c});
  }
  return suite;
}

namespace {

double parse_double_kv(const std::string& value, const std::string& key) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("bad number for " + key);
  }
  return v;
}

uint64_t parse_u64_kv(const std::string& value, const std::string& key) {
  uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("bad integer for " + key);
  }
  return v;
}

int64_t parse_time_kv(const std::string& value, const std::string& key) {
  if (const auto iso = parse_iso8601(value)) return *iso;
  int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("bad timestamp for " + key + " (ISO-8601 or epoch seconds)");
  }
  return v;
}

}  // namespace

void apply_generator_kv(GeneratorConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "seed") {
    cfg.seed = parse_u64_kv(value, key);
  } else if (key == "n_users") {
    cfg.n_users = static_cast<uint32_t>(parse_u64_kv(value, key));
  } else if (key == "ruling_user_frac") {
    cfg.ruling_user_frac = parse_double_kv(value, key);
  } else if (key == "noise_user_frac") {
    cfg.noise_user_frac = parse_double_kv(value, key);
  } else if (key == "noise_behavior") {
    if (value == "single") {
      cfg.noise_behavior = NoiseBehavior::kSingleCoalition;
    } else if (value == "both") {
      cfg.noise_behavior = NoiseBehavior::kBothCoalitions;
    } else {
      throw ConfigError("noise_behavior must be single or both");
    }
  } else if (key == "pareto_alpha") {
    cfg.tweets_per_user.alpha = parse_double_kv(value, key);
  } else if (key == "pareto_min") {
    cfg.tweets_per_user.minimum = static_cast<uint32_t>(parse_u64_kv(value, key));
  } else if (key == "pareto_cap") {
    cfg.tweets_per_user.cap = static_cast<uint32_t>(parse_u64_kv(value, key));
  } else if (key == "supporter_mean") {
    cfg.supporter.mean = parse_double_kv(value, key);
  } else if (key == "supporter_spread") {
    cfg.supporter.spread = parse_double_kv(value, key);
  } else if (key == "detractor_mean") {
    cfg.detractor.mean = parse_double_kv(value, key);
  } else if (key == "detractor_spread") {
    cfg.detractor.spread = parse_double_kv(value, key);
  } else if (key == "ruling_attack_prob") {
    cfg.ruling_attack_prob = parse_double_kv(value, key);
  } else if (key == "opposition_attack_prob") {
    cfg.opposition_attack_prob = parse_double_kv(value, key);
  } else if (key == "cross_mention_prob") {
    cfg.cross_mention_prob = parse_double_kv(value, key);
  } else if (key == "hyperactive_frac") {
    cfg.hyperactive_frac = parse_double_kv(value, key);
  } else if (key == "hyperactive_mult") {
    cfg.hyperactive_mult = parse_double_kv(value, key);
  } else if (key == "hyperactive_side") {
    if (value == "ruling") {
      cfg.hyperactive_side = Coalition::Ruling;
    } else if (value == "opposition") {
      cfg.hyperactive_side = Coalition::Opposition;
    } else if (value == "both") {
      cfg.hyperactive_side.reset();
    } else {
      throw ConfigError("hyperactive_side must be ruling, opposition or both");
    }
  } else if (key == "geo_frac") {
    cfg.geo_frac = parse_double_kv(value, key);
  } else if (key == "foreign_frac") {
    cfg.foreign_frac = parse_double_kv(value, key);
  } else if (key == "foreign_lang_frac") {
    cfg.foreign_lang_frac = parse_double_kv(value, key);
  } else if (key == "window_start") {
    cfg.window_start = parse_time_kv(value, key);
  } else if (key == "window_end") {
    cfg.window_end = parse_time_kv(value, key);
  } else if (key.rfind("state_weight.", 0) == 0) {
    const auto state = parse_state_code(key.substr(13));
    if (!state) throw ConfigError("unknown state in " + key);
    cfg.state_weights[static_cast<size_t>(*state)] = parse_double_kv(value, key);
  } else if (key == "state_ruling_share.default") {
    if (cfg.state_ruling_share) {
      throw ConfigError("state_ruling_share.default must precede per-state keys");
    }
    std::array<double, kNumStates> shares;
    shares.fill(parse_double_kv(value, key));
    cfg.state_ruling_share = shares;
  } else if (key.rfind("state_ruling_share.", 0) == 0) {
    const auto state = parse_state_code(key.substr(19));
    if (!state) throw ConfigError("unknown state in " + key);
    if (!cfg.state_ruling_share) {
      std::array<double, kNumStates> shares;
      shares.fill(cfg.ruling_user_frac);
      cfg.state_ruling_share = shares;
    }
    (*cfg.state_ruling_share)[static_cast<size_t>(*state)] = parse_double_kv(value, key);
  } else {
    throw ConfigError("unknown generator key '" + key + "'");
  }
}

GeneratorConfig load_generator_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open generator config: " + path);
  GeneratorConfig cfg;
  std::string line;
  long line_no = 0;
  const auto strip = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = strip(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    try {
      apply_generator_kv(cfg, strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

TextCorpusFiles write_text_corpus(const GeneratorConfig& config, const std::string& out_dir) {
  config.validate();
  std::filesystem::create_directories(out_dir);
  const auto dir = std::filesystem::path(out_dir);

  TextCorpusFiles files;
  files.tweets_path = (dir / "tweets.jsonl").string();
  std::ofstream tweets(files.tweets_path, std::ios::binary);
  if (!tweets) throw InputError("cannot write " + files.tweets_path);

  Generator gen(config);
  Rng rng(config.seed);
  uint64_t tweet_counter = 0;
  for (uint32_t u = 0; u < config.n_users; ++u) {
    const UserPlan plan = gen.plan_user(rng);
    const std::string user_id = user_label(u);
    for (uint32_t t = 0; t < plan.tweets; ++t) {
      const int64_t ts =
          config.window_start +
          static_cast<int64_t>(rng.below(static_cast<uint64_t>(config.window_end - config.window_start)));
      const std::string tweet_id = tweet_label(tweet_counter++);
      ++gen.truth.n_tweets;
      const auto mentions = draw_mentions(config, plan, rng);
      std::string text;
      for (const Mention& mention : mentions) {
        const Party party = pick_party(mention.side, rng);
        if (!text.empty()) text += " y ";
        text += sentiment_text(party, mention.allegiance, rng);
        ++gen.truth.n_records;
      }
      const bool foreign_lang = rng.bernoulli(config.foreign_lang_frac);
      tweets << "{\"id\":\"" << tweet_id << "\",\"author_id\":\"" << user_id
             << "\",\"created_at\":\"" << format_iso8601_utc(ts) << "\",\"lang\":\""
             << (foreign_lang ? "en" : "es") << "\",\"text\":" << json_escape_minimal(text);
      if (plan.state) {
        tweets << ",\"country\":\"MX\",\"region\":"
               << json_escape_minimal(std::string(state_name(*plan.state)));
      } else if (plan.foreign) {
        tweets << ",\"country\":\"US\",\"region\":\"California\"";
      }
      tweets << "}\n";
    }
  }
  gen.finish_truth();
  if (!tweets) throw InputError("failed while writing " + files.tweets_path);
  tweets.close();

  // Labeled examples per party group, drawn from the same vocabulary with a
  // 10% word-level label flip so metrics stay away from exactly 1.
  const auto training_dir = dir / "training";
  std::filesystem::create_directories(training_dir);
  for (int g = 0; g < kNumGroups; ++g) {
    const auto group = static_cast<TrainingGroup>(g);
    Party rep = Party::MORENA;
    for (int p = 0; p < kNumParties; ++p) {
      if (training_group(static_cast<Party>(p)) == group) {
        rep = static_cast<Party>(p);
        break;
      }
    }
    Rng grng = Rng::stream(config.seed, 0x7261696eULL + static_cast<uint64_t>(g));
    const auto path = training_dir / (std::string(group_file_stem(group)) + ".csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << "text,label\n";
    std::vector<std::string> row(2);
    for (int i = 0; i < 400; ++i) {
      for (const char label : {'p', 'n'}) {
        const double band = label == 'p' ? 0.9 : 0.1;
        row[0] = sentiment_text(rep, band, grng);
        row[1] = std::string(1, label);
        write_csv_row(out, row);
      }
    }
    files.training_paths.push_back(path.string());
  }

  files.truth_path = (dir / "truth.json").string();
  write_truth_json(gen.truth, files.truth_path);
  return files;
}

void write_truth_json(const GroundTruth& truth, const std::string& path) {
  json j;
  j["planted_share"] = truth.planted_share;
  j["realized_user_share"] = truth.realized_user_share;
  j["n_partisan_users"] = truth.n_partisan_users;
  j["n_noise_users"] = truth.n_noise_users;
  j["n_records"] = truth.n_records;
  j["n_tweets"] = truth.n_tweets;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << j.dump(2) << '\n';
}

GroundTruth read_truth_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  const json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) throw InputError("bad ground-truth file: " + path);
  try {
    GroundTruth t;
    t.planted_share = j.at("planted_share").get<double>();
    t.realized_user_share = j.at("realized_user_share").get<double>();
    t.n_partisan_users = j.at("n_partisan_users").get<uint32_t>();
    t.n_noise_users = j.at("n_noise_users").get<uint32_t>();
    t.n_records = j.at("n_records").get<uint64_t>();
    t.n_tweets = j.at("n_tweets").get<uint64_t>();
    return t;
  } catch (const json::exception& e) {
    throw InputError(std::string("bad ground-truth file: ") + e.what());
  }
}

}  // namespace twelect::synth
