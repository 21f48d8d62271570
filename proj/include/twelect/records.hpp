#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twelect/party.hpp"
#include "twelect/timeutil.hpp"

namespace twelect {

// One row of the analysis matrix: a tweet matched to a party, optionally
// carrying a resolved state and an allegiance score. A tweet referencing k
// parties appears as k records.
struct AllegianceRecord {
  std::string tweet_id;
  std::string user_id;
  std::string region;   // resolved state code, empty when no usable geodata
  std::string country;  // ISO country code or empty
  Party party = Party::MORENA;
  std::optional<double> allegiance;  // in [0,1] once scored
  int64_t timestamp = 0;             // epoch seconds UTC
  Coalition coalition = Coalition::Ruling;

  bool has_geodata() const { return !region.empty(); }
};

// Shortest decimal rendering that round-trips exactly (std::to_chars), the
// one number format used in every CSV we emit.
std::string format_double(double v);

// Columns: tweet_id,user_id,region,country,party,allegiance,date,coalition
// with `date` as ISO-8601 UTC and an optional trailing `text` column used
// between ingest and score.
inline constexpr std::string_view kRecordCsvHeader =
    "tweet_id,user_id,region,country,party,allegiance,date,coalition";

void write_records_csv(std::ostream& out, std::span<const AllegianceRecord> records,
                       std::span<const std::string> texts = {});

struct LoadedRecords {
  std::vector<AllegianceRecord> records;
  std::vector<std::string> texts;  // non-empty only if the file had a text column
};

LoadedRecords read_records_csv(const std::string& path);

// Rows that require a score before use in the election models.
void require_scored(std::span<const AllegianceRecord> records);

// Buckets records by the Mexico-City-midnight calendar month. The union of
// buckets is the input; buckets are disjoint.
std::map<MonthKey, std::vector<AllegianceRecord>> monthly_partition(
    std::span<const AllegianceRecord> records);

// Same partition but as row indices into the input span.
std::map<MonthKey, std::vector<uint32_t>> monthly_partition_rows(
    std::span<const AllegianceRecord> records);

// Column-oriented view used by the models and the bootstrap inner loop.
// Users get dense indices in order of first appearance.
struct RecordTable {
  std::vector<uint32_t> user;       // dense user index per row
  std::vector<uint8_t> coalition;   // 0 ruling / 1 opposition
  std::vector<uint8_t> geo;         // 1 when the record has a resolved state
  std::vector<double> allegiance;
  std::vector<std::string> user_ids;  // dense index -> user id

  uint32_t rows() const { return static_cast<uint32_t>(coalition.size()); }
  uint32_t users() const { return static_cast<uint32_t>(user_ids.size()); }

  // Requires every record scored; throws InputError otherwise.
  static RecordTable build(std::span<const AllegianceRecord> records);
};

}  // namespace twelect
