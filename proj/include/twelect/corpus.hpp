#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twelect/party.hpp"
#include "twelect/records.hpp"
#include "twelect/timeutil.hpp"

namespace twelect::corpus {

// One archived tweet as parsed from a JSON-lines export.
struct TweetRecord {
  std::string tweet_id;
  std::string user_id;
  int64_t created_at = 0;  // epoch seconds UTC
  std::string text;
  std::string lang;        // ISO-639-1
  std::string country;     // optional
  std::string region;      // optional state identifier
  std::string place_name;  // optional
};

struct ParsedLine {
  std::optional<TweetRecord> record;
  std::string reject_reason;  // set when record is absent
};

// Parses one JSON-lines record. Required keys: id, author_id, created_at,
// text, lang. Missing optional geo keys yield empty fields; malformed JSON
// or missing/unparseable required fields reject the line with a reason.
ParsedLine parse_tweet_record(std::string_view line);

// Per-party query: keyword/hashtag/handle phrases that select tweets, plus
// exclusion phrases that veto them.
struct QuerySpec {
  Party party = Party::MORENA;
  std::vector<std::string> keywords;
  std::vector<std::string> hashtags;    // single tokens starting with '#'
  std::vector<std::string> handles;     // single tokens starting with '@'
  std::vector<std::string> exclusions;  // phrases

  // Invariants: keywords contain the party name; hashtags/handles carry
  // their prefix. Throws ConfigError.
  void validate() const;
};

QuerySpec load_query_spec(const std::string& path);
// Loads <dir>/<party>.json for every party; all ten must be present.
std::vector<QuerySpec> load_query_dir(const std::string& dir);

// Query phrases pre-tokenized, so bulk matching tokenizes each side once.
struct CompiledQuery {
  Party party = Party::MORENA;
  std::vector<std::vector<std::string>> include;  // keywords + hashtags + handles
  std::vector<std::vector<std::string>> exclude;
};

CompiledQuery compile_query(const QuerySpec& query);

// Case-insensitive phrase match on normalized tokens (URLs stripped,
// diacritics preserved): true iff any keyword/hashtag/handle matches and no
// exclusion phrase does. Total function.
bool match_party_query(const TweetRecord& tweet, const QuerySpec& query);

// Match against pre-tokenized text (one tokenization per tweet).
bool match_party_query_tokens(std::span<const std::string> tokens, const QuerySpec& query);
bool match_compiled(std::span<const std::string> tokens, const CompiledQuery& query);

// Half-open window test: start <= created_at < end.
bool filter_window(const TweetRecord& tweet, int64_t start, int64_t end);

// Spanish-language post-filter ("es" or "es-*").
bool filter_language(const TweetRecord& tweet);

// True iff the geo attributes resolve to a Mexican federal entity.
bool has_geodata(const TweetRecord& tweet);

struct MonthStats {
  uint64_t records = 0;
  uint64_t tweets = 0;  // distinct tweet ids
  uint64_t users = 0;   // distinct user ids
};

struct CorpusStats {
  uint64_t lines_in = 0;
  uint64_t parse_rejected = 0;
  uint64_t non_spanish = 0;
  uint64_t outside_window = 0;
  uint64_t matched_tweets = 0;    // tweets matching >= 1 query
  uint64_t matched_records = 0;   // (tweet, party) pairs before dedup
  uint64_t duplicate_records = 0; // removed by (tweet_id, party) dedup
  uint64_t total_records = 0;     // emitted
  uint64_t total_tweets = 0;      // distinct tweet ids emitted
  uint64_t unique_users = 0;
  uint64_t geo_records = 0;
  uint64_t geo_tweets = 0;
  uint64_t geo_users = 0;
  std::map<std::string, uint64_t> rejects_by_reason;
  std::map<MonthKey, MonthStats> by_month;

  double geo_tweet_ratio() const {
    return total_tweets ? static_cast<double>(geo_tweets) / static_cast<double>(total_tweets) : 0.0;
  }
};

struct IngestConfig {
  int64_t window_start = kDefaultWindowStart;
  int64_t window_end = kDefaultWindowEnd;
  std::vector<QuerySpec> queries;
};

struct IngestOutput {
  std::vector<AllegianceRecord> records;  // sorted by (timestamp, tweet_id, party)
  std::vector<std::string> texts;         // aligned with records
  CorpusStats stats;
};

// Streaming ingester: feed raw JSON lines in any order (shard order does not
// affect the output), then finish() sorts, deduplicates on (tweet_id, party)
// and fills the stats.
class Ingestor {
 public:
  explicit Ingestor(IngestConfig config);

  void consume_line(std::string_view line);
  IngestOutput finish();

 private:
  struct Row {
    AllegianceRecord rec;
    std::string text;
  };

  IngestConfig config_;
  std::vector<CompiledQuery> compiled_;
  std::vector<Row> rows_;
  CorpusStats stats_;
};

}  // namespace twelect::corpus
