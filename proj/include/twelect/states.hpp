#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace twelect {

// The 32 Mexican federal entities (31 states + Mexico City), two-letter
// codes, alphabetical. MX is Mexico City, MC the State of Mexico.
enum class StateCode : uint8_t {
  AS, BC, BS, CC, CH, CL, CM, CS, DG, GR, GT, HG, JC, MC, MN, MS,
  MX, NL, NT, OC, PL, QR, QT, SL, SP, SR, TC, TL, TS, VZ, YN, ZS,
};

inline constexpr int kNumStates = 32;

std::string_view state_code_str(StateCode s);
std::string_view state_name(StateCode s);
std::optional<StateCode> parse_state_code(std::string_view code);

// Resolves a tweet's geo attributes to a federal entity. `region` is tried
// as a code or known alias first, then `place_name` against the static alias
// table. A non-Mexico country code makes the record unresolvable.
std::optional<StateCode> resolve_state(std::string_view region,
                                       std::string_view country,
                                       std::string_view place_name);

struct CensusRow {
  StateCode state;
  int64_t population = 0;
  int64_t internet_users = 0;
};

// CSV with header state_code,population,internet_users; requires all 32
// entities exactly once, counts >= 0 and internet_users <= population.
std::vector<CensusRow> load_census_csv(const std::string& path);

// Per-region percentages summing to 100. Labels are state codes in enum
// order, or a merged composite like "MX+HG+MC".
struct RegionDistribution {
  std::vector<std::string> labels;
  std::vector<double> pct;

  // Normalizes raw counts over all 32 states (absent states get 0).
  // Throws UndefinedEstimateError if the total is zero.
  static RegionDistribution from_counts(const std::vector<double>& counts_by_state);

  double total() const;
  // Throws InputError if labels are malformed or percentages do not sum to
  // 100 within 1e-9.
  void validate() const;
};

}  // namespace twelect
