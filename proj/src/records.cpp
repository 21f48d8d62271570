#include "twelect/records.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <unordered_map>

#include "twelect/csv.hpp"
#include "twelect/errors.hpp"

namespace twelect {

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

namespace {

std::string_view coalition_str(Coalition c) {
  return c == Coalition::Ruling ? "ruling" : "opposition";
}

}  // namespace

void write_records_csv(std::ostream& out, std::span<const AllegianceRecord> records,
                       std::span<const std::string> texts) {
  const bool with_text = !texts.empty();
  if (with_text && texts.size() != records.size()) {
    throw ConfigError("records/texts length mismatch");
  }
  out << kRecordCsvHeader;
  if (with_text) out << ",text";
  out.put('\n');
  std::vector<std::string> row;
  for (size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    row.assign({r.tweet_id, r.user_id, r.region, r.country, std::string(party_code(r.party)),
                r.allegiance ? format_double(*r.allegiance) : std::string(),
                format_iso8601_utc(r.timestamp), std::string(coalition_str(r.coalition))});
    if (with_text) row.push_back(texts[i]);
    write_csv_row(out, row);
  }
}

LoadedRecords read_records_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open records file: " + path);
  CsvReader reader(in);
  std::vector<std::string> fields;
  if (!reader.next(fields)) throw InputError("records: empty file " + path);
  bool with_text = false;
  if (fields.size() == 9 && fields[8] == "text") {
    with_text = true;
  } else if (fields.size() != 8) {
    throw InputError("records: unexpected header in " + path);
  }
  static const char* kNames[8] = {"tweet_id", "user_id", "region",    "country",
                                  "party",    "allegiance", "date",   "coalition"};
  for (int i = 0; i < 8; ++i) {
    if (fields[static_cast<size_t>(i)] != kNames[i]) {
      throw InputError("records: unexpected header in " + path);
    }
  }

  LoadedRecords out;
  while (reader.next(fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    const auto expected = static_cast<size_t>(with_text ? 9 : 8);
    if (fields.size() != expected) {
      throw InputError("records: wrong field count at line " + std::to_string(reader.line()));
    }
    AllegianceRecord r;
    r.tweet_id = fields[0];
    r.user_id = fields[1];
    r.region = fields[2];
    r.country = fields[3];
    const auto party = parse_party(fields[4]);
    if (!party) {
      throw InputError("records: unknown party '" + fields[4] + "' at line " +
                       std::to_string(reader.line()));
    }
    r.party = *party;
    if (!fields[5].empty()) {
      double a = 0.0;
      const auto [ptr, ec] =
          std::from_chars(fields[5].data(), fields[5].data() + fields[5].size(), a);
      if (ec != std::errc() || ptr != fields[5].data() + fields[5].size() || a < 0.0 ||
          a > 1.0) {
        throw InputError("records: bad allegiance at line " + std::to_string(reader.line()));
      }
      r.allegiance = a;
    }
    const auto t = parse_iso8601(fields[6]);
    if (!t) throw InputError("records: bad date at line " + std::to_string(reader.line()));
    r.timestamp = *t;
    if (fields[7] == "ruling") {
      r.coalition = Coalition::Ruling;
    } else if (fields[7] == "opposition") {
      r.coalition = Coalition::Opposition;
    } else {
      throw InputError("records: bad coalition at line " + std::to_string(reader.line()));
    }
    if (r.coalition != coalition_of(r.party)) {
      throw InputError("records: coalition does not match party at line " +
                       std::to_string(reader.line()));
    }
    if (r.tweet_id.empty() || r.user_id.empty()) {
      throw InputError("records: empty id at line " + std::to_string(reader.line()));
    }
    out.records.push_back(std::move(r));
    if (with_text) out.texts.push_back(fields[8]);
  }
  return out;
}

void require_scored(std::span<const AllegianceRecord> records) {
  for (size_t i = 0; i < records.size(); ++i) {
    if (!records[i].allegiance) {
      throw InputError("record " + records[i].tweet_id + "/" +
                       std::string(party_code(records[i].party)) + " has no allegiance score");
    }
  }
}

std::map<MonthKey, std::vector<AllegianceRecord>> monthly_partition(
    std::span<const AllegianceRecord> records) {
  std::map<MonthKey, std::vector<AllegianceRecord>> buckets;
  for (const auto& r : records) buckets[month_of(r.timestamp)].push_back(r);
  return buckets;
}

std::map<MonthKey, std::vector<uint32_t>> monthly_partition_rows(
    std::span<const AllegianceRecord> records) {
  std::map<MonthKey, std::vector<uint32_t>> buckets;
  for (size_t i = 0; i < records.size(); ++i) {
    buckets[month_of(records[i].timestamp)].push_back(static_cast<uint32_t>(i));
  }
  return buckets;
}

RecordTable RecordTable::build(std::span<const AllegianceRecord> records) {
  require_scored(records);
  RecordTable t;
  t.user.reserve(records.size());
  t.coalition.reserve(records.size());
  t.geo.reserve(records.size());
  t.allegiance.reserve(records.size());
  std::unordered_map<std::string_view, uint32_t> dense;
  dense.reserve(records.size());
  for (const auto& r : records) {
    const auto [it, inserted] =
        dense.emplace(std::string_view(r.user_id), static_cast<uint32_t>(t.user_ids.size()));
    if (inserted) t.user_ids.push_back(r.user_id);
    t.user.push_back(it->second);
    t.coalition.push_back(static_cast<uint8_t>(r.coalition));
    t.geo.push_back(r.has_geodata() ? 1 : 0);
    t.allegiance.push_back(*r.allegiance);
  }
  return t;
}

}  // namespace twelect
