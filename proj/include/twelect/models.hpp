#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twelect/records.hpp"

namespace twelect::models {

enum class Scope : uint8_t { Complete, Geo };

// VT/VU volumetric, AT/AU allegiance-sum, ALT positive-allegiance.
enum class ModelFamily : uint8_t { VT, VU, AT, AU, ALT };

struct AltBounds {
  double x_low = 0.6;
  double x_upp = 1.0;

  void validate() const;  // 0 <= x_low <= x_upp <= 1
};

struct ModelSpec {
  ModelFamily family = ModelFamily::VT;
  Scope scope = Scope::Complete;  // ALT always runs on the complete data
  AltBounds bounds;               // used by ALT only
};

// The nine canonical ids: CVT CVU CAT CAU GVT GVU GAT GAU ALT.
std::string model_id(const ModelSpec& spec);
std::optional<ModelSpec> parse_model_id(std::string_view id, AltBounds alt_bounds = {});
std::array<ModelSpec, 9> all_models(AltBounds alt_bounds = {});

struct VoteShareEstimate {
  std::string model;
  std::string month;  // filled by monthly drivers, may stay empty
  double ruling_share = 0.0;
  uint64_t records_used = 0;
  uint64_t users_used = 0;

  double opposition_share() const { return 1.0 - ruling_share; }
};

// Per-user mean allegiance toward each coalition, exact arithmetic means.
struct UserAllegiance {
  std::string user_id;
  std::optional<double> mean_ruling;       // absent when n_ruling == 0
  std::optional<double> mean_opposition;
  uint64_t n_ruling = 0;
  uint64_t n_opposition = 0;
};

std::vector<UserAllegiance> user_mean_allegiance(std::span<const AllegianceRecord> records);

// --- Weighted evaluation core -------------------------------------------
//
// All model shares reduce to passes over a RecordTable restricted to a row
// subset, with optional per-row multiplicities (bootstrap resample counts).
// Empty `rows` means all rows; empty `counts` means multiplicity 1. The
// returned share is absent when the estimate is undefined.

struct ShareOutcome {
  std::optional<double> share;
  uint64_t records = 0;  // weighted records in scope
  uint64_t users = 0;    // distinct users counted (meaning varies per family)
};

// Reusable per-user accumulators so the bootstrap loop does not reallocate.
class UserScratch {
 public:
  void reset(uint32_t n_users);

  std::vector<double> sum0, sum1;    // weighted allegiance sums per user
  std::vector<uint64_t> cnt0, cnt1;  // weighted record counts per user
  std::vector<uint32_t> touched;

  void clear_touched();
  void touch(uint32_t u) {
    if (cnt0[u] == 0 && cnt1[u] == 0 && sum0[u] == 0.0 && sum1[u] == 0.0) touched.push_back(u);
  }
};

ShareOutcome eval_share(const RecordTable& table, const ModelSpec& spec,
                        std::span<const uint32_t> rows, std::span<const uint32_t> counts,
                        UserScratch& scratch);

// Row indices with geodata, preserving order (empty `rows` = all rows).
std::vector<uint32_t> geo_rows(const RecordTable& table, std::span<const uint32_t> rows = {});

// --- Spec-level operations (throw UndefinedEstimateError) ----------------

// Volumetric tweet model: each record in scope is one vote.
VoteShareEstimate model_vt(std::span<const AllegianceRecord> records, Scope scope);
// Volumetric user model: per-user majority of coalition mentions; ties are
// excluded from the electorate.
VoteShareEstimate model_vu(std::span<const AllegianceRecord> records, Scope scope);
// Allegiance tweet model: coalition shares of summed allegiance.
VoteShareEstimate model_at(std::span<const AllegianceRecord> records, Scope scope);
// Allegiance user model: totals of per-user mean allegiances.
VoteShareEstimate model_au(std::span<const AllegianceRecord> records, Scope scope);
// Positive-allegiance model: a user votes for a coalition when their mean
// allegiance toward it lies in [x_low, x_upp] and their mean toward the
// other side is below x_low (or they have no records on that side); users
// positive toward both coalitions are excluded. Complete data only.
VoteShareEstimate model_alt(std::span<const AllegianceRecord> records, AltBounds bounds = {});

struct SweepCell {
  double x_low = 0.0;
  double x_upp = 0.0;
  bool valid = false;           // x_low <= x_upp
  std::optional<double> share;  // absent when undefined on this cell
  // Bootstrap q3-q1 in percentage points; absent when the cell's estimate or
  // bootstrap is undefined.
  std::optional<double> precision_iqr_pp;
  uint64_t users = 0;  // classified voters
};

// One ALT sub-model per (x_low, x_upp) grid pair with bootstrap precision.
// Throws ConfigError on an empty grid.
std::vector<SweepCell> alt_grid_sweep(std::span<const AllegianceRecord> records,
                                      std::span<const double> x_low_grid,
                                      std::span<const double> x_upp_grid,
                                      uint32_t n_resamples, uint64_t seed);

}  // namespace twelect::models
