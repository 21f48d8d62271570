#include "twelect/geo.hpp"

#include <algorithm>
#include <array>
#include <unordered_map>

#include "twelect/errors.hpp"
#include "twelect/rng.hpp"

namespace twelect::geo {
namespace {

constexpr std::array<StateCode, 3> kGreaterMexicoCity{StateCode::MX, StateCode::HG,
                                                      StateCode::MC};

bool is_merged_away(StateCode s) {
  return s == StateCode::MX || s == StateCode::HG || s == StateCode::MC;
}

void require_state_universe(const RegionDistribution& d, const char* who) {
  if (d.labels.size() != static_cast<size_t>(kNumStates)) {
    throw InputError(std::string(who) + ": expected the 32-state universe");
  }
  for (int i = 0; i < kNumStates; ++i) {
    if (d.labels[static_cast<size_t>(i)] != state_code_str(static_cast<StateCode>(i))) {
      throw InputError(std::string(who) + ": expected state codes in canonical order");
    }
  }
}

void require_same_universe(const RegionDistribution& a, const RegionDistribution& b,
                           const char* who) {
  if (a.labels != b.labels) {
    throw InputError(std::string(who) + ": region label universes differ");
  }
}

// population and internet counts indexed by state enum; throws unless every
// state appears exactly once.
std::pair<std::vector<double>, std::vector<double>> census_counts(
    std::span<const CensusRow> census) {
  std::vector<double> population(kNumStates, 0.0), internet(kNumStates, 0.0);
  std::array<bool, kNumStates> seen{};
  for (const auto& row : census) {
    const auto i = static_cast<size_t>(row.state);
    if (seen[i]) {
      throw InputError("census rows repeat state " + std::string(state_code_str(row.state)));
    }
    seen[i] = true;
    population[i] = static_cast<double>(row.population);
    internet[i] = static_cast<double>(row.internet_users);
  }
  for (int i = 0; i < kNumStates; ++i) {
    if (!seen[static_cast<size_t>(i)]) {
      throw InputError("census rows missing state " +
                       std::string(state_code_str(static_cast<StateCode>(i))));
    }
  }
  return {std::move(population), std::move(internet)};
}

}  // namespace

std::map<std::string, StateCode> assign_user_states(std::span<const AllegianceRecord> records) {
  struct StateAgg {
    uint64_t count = 0;
    int64_t last_ts = 0;
    std::string_view last_tweet;
  };
  std::map<std::string, std::unordered_map<StateCode, StateAgg>> per_user;
  for (const auto& r : records) {
    if (!r.has_geodata()) continue;
    const auto state = parse_state_code(r.region);
    if (!state) throw InputError("record " + r.tweet_id + ": unknown region " + r.region);
    auto& agg = per_user[r.user_id][*state];
    ++agg.count;
    if (agg.count == 1 || std::tie(r.timestamp, r.tweet_id) >
                              std::tie(agg.last_ts, agg.last_tweet)) {
      agg.last_ts = r.timestamp;
      agg.last_tweet = r.tweet_id;
    }
  }
  std::map<std::string, StateCode> out;
  for (const auto& [user, states] : per_user) {
    StateCode best = StateCode::AS;
    const StateAgg* best_agg = nullptr;
    for (int i = 0; i < kNumStates; ++i) {  // enum order for determinism
      const auto it = states.find(static_cast<StateCode>(i));
      if (it == states.end()) continue;
      const StateAgg& agg = it->second;
      if (!best_agg ||
          std::tie(agg.count, agg.last_ts, agg.last_tweet) >
              std::tie(best_agg->count, best_agg->last_ts, best_agg->last_tweet)) {
        best = static_cast<StateCode>(i);
        best_agg = &agg;
      }
    }
    out.emplace(user, best);
  }
  return out;
}

RegionDistribution aggregate_users_by_state(std::span<const AllegianceRecord> records) {
  const auto user_states = assign_user_states(records);
  std::vector<double> counts(kNumStates, 0.0);
  for (const auto& [user, state] : user_states) counts[static_cast<size_t>(state)] += 1.0;
  return RegionDistribution::from_counts(counts);  // throws when no geo users
}

RegionDistribution merge_greater_mexico_city(const RegionDistribution& d) {
  require_state_universe(d, "merge");
  RegionDistribution out;
  double merged = 0.0;
  for (int i = 0; i < kNumStates; ++i) {
    const auto s = static_cast<StateCode>(i);
    if (is_merged_away(s)) {
      merged += d.pct[static_cast<size_t>(i)];
      continue;
    }
    out.labels.emplace_back(state_code_str(s));
    out.pct.push_back(d.pct[static_cast<size_t>(i)]);
  }
  std::string merged_label;
  for (const auto s : kGreaterMexicoCity) {
    if (!merged_label.empty()) merged_label.push_back('+');
    merged_label += state_code_str(s);
  }
  out.labels.push_back(std::move(merged_label));
  out.pct.push_back(merged);
  return out;
}

RegionDistribution census_population_distribution(std::span<const CensusRow> census) {
  return RegionDistribution::from_counts(census_counts(census).first);
}

RegionDistribution census_internet_distribution(std::span<const CensusRow> census) {
  return RegionDistribution::from_counts(census_counts(census).second);
}

double max_abs_diff(const RegionDistribution& a, const RegionDistribution& b) {
  require_same_universe(a, b, "max_abs_diff");
  double worst = 0.0;
  for (size_t i = 0; i < a.pct.size(); ++i) {
    worst = std::max(worst, std::abs(a.pct[i] - b.pct[i]));
  }
  return worst / 100.0;
}

double total_variation(const RegionDistribution& a, const RegionDistribution& b) {
  require_same_universe(a, b, "total_variation");
  double sum = 0.0;
  for (size_t i = 0; i < a.pct.size(); ++i) sum += std::abs(a.pct[i] - b.pct[i]);
  return sum / 200.0;
}

std::vector<PanelQuota> panel_quotas(const RegionDistribution& target,
                                     const std::map<std::string, StateCode>& user_states,
                                     uint32_t k) {
  require_state_universe(target, "panel quotas");
  if (k == 0) throw ConfigError("panel size must be positive");

  std::array<uint32_t, kNumStates> available{};
  for (const auto& [user, state] : user_states) ++available[static_cast<size_t>(state)];

  uint64_t pool_total = 0;
  for (int i = 0; i < kNumStates; ++i) {
    if (target.pct[static_cast<size_t>(i)] > 0.0) pool_total += available[static_cast<size_t>(i)];
  }
  if (pool_total < k) {
    throw UndefinedEstimateError("panel quotas: only " + std::to_string(pool_total) +
                                 " users available for a panel of " + std::to_string(k));
  }

  std::array<uint32_t, kNumStates> quota{};
  std::array<bool, kNumStates> active{};
  for (int i = 0; i < kNumStates; ++i) {
    active[static_cast<size_t>(i)] =
        target.pct[static_cast<size_t>(i)] > 0.0 && available[static_cast<size_t>(i)] > 0;
  }

  uint32_t remaining = k;
  while (remaining > 0) {
    double weight_total = 0.0;
    for (int i = 0; i < kNumStates; ++i) {
      if (active[static_cast<size_t>(i)]) weight_total += target.pct[static_cast<size_t>(i)];
    }
    if (weight_total <= 0.0) {
      throw UndefinedEstimateError("panel quotas: target weight exhausted before filling k");
    }
    // Largest-remainder apportionment of `remaining` slots over active states.
    std::array<uint32_t, kNumStates> step{};
    std::vector<std::pair<double, int>> remainders;  // (-fraction, state) for stable sort
    uint32_t assigned = 0;
    for (int i = 0; i < kNumStates; ++i) {
      if (!active[static_cast<size_t>(i)]) continue;
      const double exact =
          static_cast<double>(remaining) * target.pct[static_cast<size_t>(i)] / weight_total;
      const auto floor_part = static_cast<uint32_t>(exact);
      step[static_cast<size_t>(i)] = floor_part;
      assigned += floor_part;
      remainders.emplace_back(-(exact - static_cast<double>(floor_part)), i);
    }
    std::sort(remainders.begin(), remainders.end());
    for (uint32_t leftover = remaining - assigned; leftover > 0; --leftover) {
      // round-robin over the largest remainders; ties resolved by state order
      const int state = remainders[(remaining - assigned) - leftover].second;
      ++step[static_cast<size_t>(state)];
    }
    // Clamp states whose pool cannot take their allotment and loop for the
    // shortfall; the clamped states leave the active set.
    remaining = 0;
    for (int i = 0; i < kNumStates; ++i) {
      if (!active[static_cast<size_t>(i)] || step[static_cast<size_t>(i)] == 0) continue;
      const uint32_t room = available[static_cast<size_t>(i)] - quota[static_cast<size_t>(i)];
      const uint32_t take = std::min(step[static_cast<size_t>(i)], room);
      quota[static_cast<size_t>(i)] += take;
      remaining += step[static_cast<size_t>(i)] - take;
      if (quota[static_cast<size_t>(i)] == available[static_cast<size_t>(i)]) {
        active[static_cast<size_t>(i)] = false;
      }
    }
  }

  std::vector<PanelQuota> out;
  out.reserve(kNumStates);
  for (int i = 0; i < kNumStates; ++i) {
    out.push_back(PanelQuota{static_cast<StateCode>(i), quota[static_cast<size_t>(i)],
                             available[static_cast<size_t>(i)]});
  }
  return out;
}

PanelResampleResult population_weighted_resample(std::span<const AllegianceRecord> records,
                                                 const RegionDistribution& target, uint32_t k,
                                                 uint32_t reps, const models::ModelSpec& spec,
                                                 uint64_t seed) {
  if (reps == 0) throw ConfigError("panel resampling needs at least one repetition");
  const auto user_states = assign_user_states(records);

  PanelResampleResult result;
  result.k = k;
  result.reps = reps;
  result.seed = seed;
  result.quotas = panel_quotas(target, user_states, k);
  for (const auto& q : result.quotas) {
    if (target.pct[static_cast<size_t>(q.state)] > 0.0 && q.available == 0) {
      result.notes.push_back(std::string("no users in ") +
                             std::string(state_code_str(q.state)) +
                             "; its weight was redistributed");
    }
  }

  const RecordTable table = RecordTable::build(records);
  std::unordered_map<std::string_view, uint32_t> dense;
  dense.reserve(table.users());
  for (uint32_t u = 0; u < table.users(); ++u) dense.emplace(table.user_ids[u], u);

  // CSR layout: rows of each dense user, in row order.
  std::vector<uint32_t> row_offset(table.users() + 1, 0);
  for (uint32_t r = 0; r < table.rows(); ++r) ++row_offset[table.user[r] + 1];
  for (uint32_t u = 0; u < table.users(); ++u) row_offset[u + 1] += row_offset[u];
  std::vector<uint32_t> user_rows(table.rows());
  {
    std::vector<uint32_t> cursor(row_offset.begin(), row_offset.end() - 1);
    for (uint32_t r = 0; r < table.rows(); ++r) user_rows[cursor[table.user[r]]++] = r;
  }

  // Per-state pools of dense user indices, in user-id order (deterministic).
  std::array<std::vector<uint32_t>, kNumStates> pools;
  for (const auto& [user, state] : user_states) {
    pools[static_cast<size_t>(state)].push_back(dense.at(user));
  }

  models::UserScratch scratch;
  scratch.reset(table.users());
  std::vector<uint32_t> panel_rows;
  std::vector<std::pair<uint32_t*, uint32_t*>> undo;  // swapped element pairs
  result.shares.reserve(reps);

  for (uint32_t rep = 0; rep < reps; ++rep) {
    Rng rng = Rng::stream(seed, rep);
    panel_rows.clear();
    undo.clear();
    for (const auto& q : result.quotas) {
      if (q.quota == 0) continue;
      auto& pool = pools[static_cast<size_t>(q.state)];
      // Partial Fisher-Yates for `quota` unique users; swaps undone below so
      // every repetition sees the identical pool order.
      for (uint32_t j = 0; j < q.quota; ++j) {
        const auto pick =
            j + static_cast<uint32_t>(rng.below(static_cast<uint64_t>(pool.size()) - j));
        std::swap(pool[j], pool[pick]);
        undo.emplace_back(&pool[j], &pool[pick]);
        const uint32_t u = pool[j];
        for (uint32_t idx = row_offset[u]; idx < row_offset[u + 1]; ++idx) {
          panel_rows.push_back(user_rows[idx]);
        }
      }
    }
    for (auto it = undo.rbegin(); it != undo.rend(); ++it) std::swap(*it->first, *it->second);

    const models::ShareOutcome outcome = eval_share(table, spec, panel_rows, {}, scratch);
    if (outcome.share) {
      result.shares.push_back(*outcome.share);
    } else {
      ++result.n_undefined;
    }
  }
  if (2 * static_cast<uint64_t>(result.n_undefined) > reps) {
    throw UndefinedEstimateError("panel resampling: model undefined on " +
                                 std::to_string(result.n_undefined) + " of " +
                                 std::to_string(reps) + " panels");
  }
  result.box = stats::boxplot_summary(result.shares);

  std::vector<double> drawn_counts(kNumStates, 0.0);
  for (const auto& q : result.quotas) {
    drawn_counts[static_cast<size_t>(q.state)] = static_cast<double>(q.quota);
  }
  result.drawn = RegionDistribution::from_counts(drawn_counts);
  return result;
}

RepresentativenessReport representativeness_report(std::span<const AllegianceRecord> records,
                                                   std::span<const CensusRow> census) {
  RepresentativenessReport report;
  report.population = census_population_distribution(census);
  report.internet = census_internet_distribution(census);
  report.twitter = aggregate_users_by_state(records);
  report.geo_users = assign_user_states(records).size();

  report.r_population_internet =
      stats::pearson_r(report.population.pct, report.internet.pct, "population", "internet").r;
  report.r_population_twitter =
      stats::pearson_r(report.population.pct, report.twitter.pct, "population", "twitter").r;
  report.r_internet_twitter =
      stats::pearson_r(report.internet.pct, report.twitter.pct, "internet", "twitter").r;

  const RegionDistribution pop_merged = merge_greater_mexico_city(report.population);
  const RegionDistribution net_merged = merge_greater_mexico_city(report.internet);
  const RegionDistribution twt_merged = merge_greater_mexico_city(report.twitter);
  report.r_population_twitter_merged =
      stats::pearson_r(pop_merged.pct, twt_merged.pct, "population", "twitter").r;
  report.r_internet_twitter_merged =
      stats::pearson_r(net_merged.pct, twt_merged.pct, "internet", "twitter").r;

  report.residual_internet_pp = stats::residuals(report.population, report.internet);
  report.residual_twitter_pp = stats::residuals(report.population, report.twitter);
  return report;
}

}  // namespace twelect::geo
