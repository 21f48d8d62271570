#include "twelect/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "twelect/errors.hpp"
#include "twelect/states.hpp"
#include "twelect/text.hpp"

namespace twelect::corpus {
namespace {

using nlohmann::json;

// id/author_id appear both as strings and as integers in archival exports.
std::optional<std::string> id_field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) return std::nullopt;
  if (it->is_string()) {
    auto s = it->get<std::string>();
    if (s.empty()) return std::nullopt;
    return s;
  }
  if (it->is_number_unsigned() || it->is_number_integer()) {
    return std::to_string(it->get<int64_t>());
  }
  return std::nullopt;
}

std::string optional_string(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it != j.end() && it->is_string()) return it->get<std::string>();
  return {};
}

std::vector<std::string> phrase_tokens(const std::string& phrase) { return tokenize(phrase); }

bool contains_phrase(std::span<const std::string> tokens,
                     std::span<const std::string> phrase) {
  if (phrase.empty() || phrase.size() > tokens.size()) return false;
  for (size_t i = 0; i + phrase.size() <= tokens.size(); ++i) {
    bool hit = true;
    for (size_t k = 0; k < phrase.size(); ++k) {
      if (tokens[i + k] != phrase[k]) {
        hit = false;
        break;
      }
    }
    if (hit) return true;
  }
  return false;
}

// Forms that satisfy the "keywords contain the party name" rule.
std::vector<std::string_view> party_name_forms(Party p) {
  switch (p) {
    case Party::MORENA: return {"morena"};
    case Party::PT: return {"pt", "partido del trabajo"};
    case Party::PVEM: return {"pvem", "partido verde"};
    case Party::PAN: return {"pan", "acción nacional"};
    case Party::PRI: return {"pri", "revolucionario institucional"};
    case Party::PRD: return {"prd", "revolución democrática"};
    case Party::MC: return {"mc", "movimiento ciudadano"};
    case Party::PES: return {"pes", "encuentro solidario"};
    case Party::FXM: return {"fxm", "fuerza por méxico"};
    case Party::RSP: return {"rsp", "redes sociales progresistas"};
  }
  return {};
}

}  // namespace

ParsedLine parse_tweet_record(std::string_view line) {
  ParsedLine out;
  const json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    out.reject_reason = "malformed json";
    return out;
  }
  if (!j.is_object()) {
    out.reject_reason = "not an object";
    return out;
  }
  TweetRecord t;
  if (auto id = id_field(j, "id")) {
    t.tweet_id = std::move(*id);
  } else {
    out.reject_reason = "missing id";
    return out;
  }
  if (auto id = id_field(j, "author_id")) {
    t.user_id = std::move(*id);
  } else {
    out.reject_reason = "missing author_id";
    return out;
  }
  const auto created = j.find("created_at");
  if (created == j.end() || !created->is_string()) {
    out.reject_reason = "missing created_at";
    return out;
  }
  if (auto ts = parse_iso8601(created->get<std::string>())) {
    t.created_at = *ts;
  } else {
    out.reject_reason = "bad created_at";
    return out;
  }
  const auto text = j.find("text");
  if (text == j.end() || !text->is_string()) {
    out.reject_reason = "missing text";
    return out;
  }
  t.text = text->get<std::string>();
  const auto lang = j.find("lang");
  if (lang == j.end() || !lang->is_string()) {
    out.reject_reason = "missing lang";
    return out;
  }
  t.lang = lang->get<std::string>();
  t.country = optional_string(j, "country");
  t.region = optional_string(j, "region");
  t.place_name = optional_string(j, "place_name");
  out.record = std::move(t);
  return out;
}

void QuerySpec::validate() const {
  if (keywords.empty()) {
    throw ConfigError(std::string(party_code(party)) + " query: keywords must be non-empty");
  }
  const auto forms = party_name_forms(party);
  bool named = false;
  for (const auto& k : keywords) {
    const std::string norm = lower_utf8(k);
    for (const auto form : forms) {
      if (norm.find(form) != std::string::npos) {
        named = true;
        break;
      }
    }
    if (named) break;
  }
  if (!named) {
    throw ConfigError(std::string(party_code(party)) +
                      " query: keywords must include the party name");
  }
  for (const auto& h : hashtags) {
    if (h.empty() || h[0] != '#') {
      throw ConfigError(std::string(party_code(party)) + " query: hashtag '" + h +
                        "' must start with '#'");
    }
  }
  for (const auto& h : handles) {
    if (h.empty() || h[0] != '@') {
      throw ConfigError(std::string(party_code(party)) + " query: handle '" + h +
                        "' must start with '@'");
    }
  }
  for (const auto& list : {keywords, hashtags, handles, exclusions}) {
    for (const auto& phrase : list) {
      if (tokenize(phrase).empty()) {
        throw ConfigError(std::string(party_code(party)) + " query: phrase '" + phrase +
                          "' has no matchable tokens");
      }
    }
  }
}

QuerySpec load_query_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open query spec: " + path);
  const json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    throw InputError("query spec is not a JSON object: " + path);
  }
  QuerySpec q;
  const auto party = j.find("party");
  if (party == j.end() || !party->is_string()) {
    throw InputError("query spec missing party: " + path);
  }
  const auto parsed = parse_party(party->get<std::string>());
  if (!parsed) throw InputError("query spec has unknown party: " + path);
  q.party = *parsed;
  const auto read_list = [&](const char* key, std::vector<std::string>& out) {
    const auto it = j.find(key);
    if (it == j.end()) return;
    if (!it->is_array()) throw InputError(std::string("query spec: ") + key + " must be a list");
    for (const auto& v : *it) {
      if (!v.is_string()) throw InputError(std::string("query spec: ") + key + " must hold strings");
      out.push_back(v.get<std::string>());
    }
  };
  read_list("keywords", q.keywords);
  read_list("hashtags", q.hashtags);
  read_list("handles", q.handles);
  read_list("exclusions", q.exclusions);
  q.validate();
  return q;
}

std::vector<QuerySpec> load_query_dir(const std::string& dir) {
  std::vector<QuerySpec> specs;
  for (int i = 0; i < kNumParties; ++i) {
    const auto party = static_cast<Party>(i);
    std::string stem = lower_utf8(party_code(party));
    const auto path = std::filesystem::path(dir) / (stem + ".json");
    if (!std::filesystem::exists(path)) {
      throw InputError("missing query spec for " + std::string(party_code(party)) + ": " +
                       path.string());
    }
    QuerySpec q = load_query_spec(path.string());
    if (q.party != party) {
      throw InputError("query spec " + path.string() + " declares a different party");
    }
    specs.push_back(std::move(q));
  }
  return specs;
}

CompiledQuery compile_query(const QuerySpec& q) {
  CompiledQuery c;
  c.party = q.party;
  for (const auto& list : {q.keywords, q.hashtags, q.handles}) {
    for (const auto& phrase : list) c.include.push_back(phrase_tokens(phrase));
  }
  for (const auto& phrase : q.exclusions) c.exclude.push_back(phrase_tokens(phrase));
  return c;
}

bool match_compiled(std::span<const std::string> tokens, const CompiledQuery& q) {
  bool hit = false;
  for (const auto& phrase : q.include) {
    if (contains_phrase(tokens, phrase)) {
      hit = true;
      break;
    }
  }
  if (!hit) return false;
  for (const auto& phrase : q.exclude) {
    if (contains_phrase(tokens, phrase)) return false;
  }
  return true;
}

bool match_party_query(const TweetRecord& tweet, const QuerySpec& query) {
  const auto tokens = tokenize(tweet.text);
  return match_party_query_tokens(tokens, query);
}

bool match_party_query_tokens(std::span<const std::string> tokens, const QuerySpec& query) {
  return match_compiled(tokens, compile_query(query));
}

bool filter_window(const TweetRecord& tweet, int64_t start, int64_t end) {
  return start <= tweet.created_at && tweet.created_at < end;
}

bool filter_language(const TweetRecord& tweet) {
  return tweet.lang == "es" || tweet.lang.rfind("es-", 0) == 0;
}

bool has_geodata(const TweetRecord& tweet) {
  return resolve_state(tweet.region, tweet.country, tweet.place_name).has_value();
}

Ingestor::Ingestor(IngestConfig config) : config_(std::move(config)) {
  if (config_.window_start >= config_.window_end) {
    throw ConfigError("ingest window must satisfy start < end");
  }
  if (config_.queries.empty()) throw ConfigError("ingest needs at least one query spec");
  compiled_.reserve(config_.queries.size());
  for (const auto& q : config_.queries) {
    q.validate();
    compiled_.push_back(compile_query(q));
  }
}

void Ingestor::consume_line(std::string_view line) {
  ++stats_.lines_in;
  ParsedLine parsed = parse_tweet_record(line);
  if (!parsed.record) {
    ++stats_.parse_rejected;
    ++stats_.rejects_by_reason[parsed.reject_reason];
    return;
  }
  const TweetRecord& t = *parsed.record;
  if (!filter_language(t)) {
    ++stats_.non_spanish;
    return;
  }
  if (!filter_window(t, config_.window_start, config_.window_end)) {
    ++stats_.outside_window;
    return;
  }
  const auto tokens = tokenize(t.text);
  const auto state = resolve_state(t.region, t.country, t.place_name);
  bool any = false;
  for (size_t qi = 0; qi < compiled_.size(); ++qi) {
    if (!match_compiled(tokens, compiled_[qi])) continue;
    any = true;
    ++stats_.matched_records;
    Row row;
    row.rec.tweet_id = t.tweet_id;
    row.rec.user_id = t.user_id;
    row.rec.region = state ? std::string(state_code_str(*state)) : std::string();
    row.rec.country = t.country;
    row.rec.party = compiled_[qi].party;
    row.rec.timestamp = t.created_at;
    row.rec.coalition = coalition_of(compiled_[qi].party);
    row.text = t.text;
    rows_.push_back(std::move(row));
  }
  if (any) ++stats_.matched_tweets;
}

IngestOutput Ingestor::finish() {
  // First pass: canonical total order so identical (tweet_id, party) pairs
  // are adjacent and the survivor of deduplication does not depend on shard
  // order.
  std::sort(rows_.begin(), rows_.end(), [](const Row& a, const Row& b) {
    const auto key = [](const Row& r) {
      return std::tie(r.rec.tweet_id, r.rec.party, r.rec.timestamp, r.rec.user_id,
                      r.rec.region, r.rec.country, r.text);
    };
    return key(a) < key(b);
  });
  std::vector<Row> unique_rows;
  unique_rows.reserve(rows_.size());
  for (auto& row : rows_) {
    if (!unique_rows.empty() &&
        unique_rows.back().rec.tweet_id == row.rec.tweet_id &&
        unique_rows.back().rec.party == row.rec.party) {
      ++stats_.duplicate_records;
      continue;
    }
    unique_rows.push_back(std::move(row));
  }
  rows_ = std::move(unique_rows);

  // Second pass: downstream consumers get a time-ordered stream.
  std::sort(rows_.begin(), rows_.end(), [](const Row& a, const Row& b) {
    return std::tie(a.rec.timestamp, a.rec.tweet_id, a.rec.party) <
           std::tie(b.rec.timestamp, b.rec.tweet_id, b.rec.party);
  });

  IngestOutput out;
  out.records.reserve(rows_.size());
  out.texts.reserve(rows_.size());
  std::unordered_set<std::string_view> tweets, users, geo_tweets, geo_users;
  struct MonthSets {
    std::unordered_set<std::string_view> tweets, users;
  };
  std::map<MonthKey, MonthSets> month_sets;
  for (auto& row : rows_) {
    const auto& r = row.rec;
    tweets.insert(r.tweet_id);
    users.insert(r.user_id);
    if (r.has_geodata()) {
      ++stats_.geo_records;
      geo_tweets.insert(r.tweet_id);
      geo_users.insert(r.user_id);
    }
    auto& ms = month_sets[month_of(r.timestamp)];
    ms.tweets.insert(r.tweet_id);
    ms.users.insert(r.user_id);
    out.records.push_back(row.rec);
    out.texts.push_back(std::move(row.text));
  }
  stats_.total_records = out.records.size();
  stats_.total_tweets = tweets.size();
  stats_.unique_users = users.size();
  stats_.geo_tweets = geo_tweets.size();
  stats_.geo_users = geo_users.size();
  for (auto& [month, sets] : month_sets) {
    MonthStats m;
    m.tweets = sets.tweets.size();
    m.users = sets.users.size();
    stats_.by_month[month] = m;
  }
  for (const auto& r : out.records) ++stats_.by_month[month_of(r.timestamp)].records;
  out.stats = stats_;
  rows_.clear();
  return out;
}

}  // namespace twelect::corpus
