#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twelect/models.hpp"
#include "twelect/records.hpp"
#include "twelect/states.hpp"
#include "twelect/stats.hpp"

namespace twelect::geo {

// Assigns each geo-tagged user to their modal state. Ties break toward the
// state of the user's most recent record; equal timestamps break toward the
// larger tweet id. Records without a resolved region are ignored.
std::map<std::string, StateCode> assign_user_states(std::span<const AllegianceRecord> records);

// Unique users per state as percentages (32 labels, code order). Throws
// UndefinedEstimateError when no user carries geodata.
RegionDistribution aggregate_users_by_state(std::span<const AllegianceRecord> records);

// Folds MX, HG and MC into one "MX+HG+MC" bucket appended after the other 29
// states (30 labels total). Mass-preserving. Throws InputError unless the
// input is exactly the 32-state universe.
RegionDistribution merge_greater_mexico_city(const RegionDistribution& d);

// Census columns as 32-state percentage distributions.
RegionDistribution census_population_distribution(std::span<const CensusRow> census);
RegionDistribution census_internet_distribution(std::span<const CensusRow> census);

// Distance helpers over a shared label universe (inputs in percent):
// max_s |p_s - q_s| and 0.5 * sum_s |p_s - q_s|, both rescaled to [0,1].
double max_abs_diff(const RegionDistribution& a, const RegionDistribution& b);
double total_variation(const RegionDistribution& a, const RegionDistribution& b);

struct PanelQuota {
  StateCode state;
  uint32_t quota = 0;      // users drawn from this state per panel
  uint32_t available = 0;  // distinct users assigned to this state
};

// Largest-remainder apportionment of k panel slots proportional to target
// percentages, capped at each state's available pool (shortfall redistributed
// by the same rule; states with zero pool get zero with a note). Throws
// UndefinedEstimateError if all pools together cannot fill k slots.
std::vector<PanelQuota> panel_quotas(const RegionDistribution& target,
                                     const std::map<std::string, StateCode>& user_states,
                                     uint32_t k);

struct PanelResampleResult {
  uint32_t k = 0;
  uint32_t reps = 0;
  uint32_t n_undefined = 0;
  std::vector<double> shares;  // defined per-panel shares, replicate order
  stats::BoxStats box;
  std::vector<PanelQuota> quotas;
  RegionDistribution drawn;  // realized panel state mix (32 labels, percent)
  std::vector<std::string> notes;  // quota redistribution warnings
  uint64_t seed = 0;
};

// Draws `reps` stratified panels of k unique users matching the target state
// distribution, evaluates the model on each panel's records, and summarizes.
// Panel i draws from the stream seed xor i. Throws UndefinedEstimateError
// when more than half the panels leave the model undefined.
PanelResampleResult population_weighted_resample(std::span<const AllegianceRecord> records,
                                                 const RegionDistribution& target, uint32_t k,
                                                 uint32_t reps, const models::ModelSpec& spec,
                                                 uint64_t seed);

// Census-vs-observed comparison. Residuals follow the reference-minus-
// observed convention (population% - internet%, population% - twitter%).
struct RepresentativenessReport {
  RegionDistribution population;  // 32 states, percent
  RegionDistribution internet;
  RegionDistribution twitter;  // unique geo users
  double r_population_internet = 0.0;
  double r_population_twitter = 0.0;
  double r_internet_twitter = 0.0;
  double r_population_twitter_merged = 0.0;  // greater-Mexico-City merge
  double r_internet_twitter_merged = 0.0;
  std::vector<double> residual_internet_pp;
  std::vector<double> residual_twitter_pp;
  std::size_t geo_users = 0;
};

// Census rows must cover all 32 states.
RepresentativenessReport representativeness_report(std::span<const AllegianceRecord> records,
                                                   std::span<const CensusRow> census);

}  // namespace twelect::geo
