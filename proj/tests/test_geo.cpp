#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "twelect/errors.hpp"
#include "twelect/geo.hpp"
#include "twelect/models.hpp"
#include "twelect/records.hpp"
#include "twelect/states.hpp"

#include "oracles.hpp"

using namespace twelect;
using models::ModelFamily;
using models::ModelSpec;
using models::Scope;

namespace {

int g_tid = 0;

AllegianceRecord geo_rec(const std::string& user, const char* state, Coalition c = Coalition::Ruling,
                         double a = 0.8, int64_t ts = 1606798800) {
  AllegianceRecord r;
  r.tweet_id = "t" + std::to_string(g_tid++);
  r.user_id = user;
  r.region = state ? state : "";
  r.country = state ? "MX" : "";
  r.party = c == Coalition::Ruling ? Party::MORENA : Party::PAN;
  r.coalition = c;
  r.allegiance = a;
  r.timestamp = ts;
  return r;
}

const ModelSpec kVT{ModelFamily::VT, Scope::Complete, {}};

// census where percentage weight of state s is proportional to the supplied
// counts; all 32 states present
std::vector<CensusRow> toy_census(const std::vector<int64_t>& pop,
                                  const std::vector<int64_t>& net) {
  std::vector<CensusRow> rows;
  for (int s = 0; s < kNumStates; ++s) {
    rows.push_back({static_cast<StateCode>(s), pop[s], net[s]});
  }
  return rows;
}

}  // namespace

TEST_CASE("users land in their modal state") {
  std::vector<AllegianceRecord> recs;
  recs.push_back(geo_rec("a", "MX"));
  recs.push_back(geo_rec("a", "MX"));
  recs.push_back(geo_rec("a", "MX"));
  recs.push_back(geo_rec("a", "JC"));
  recs.push_back(geo_rec("b", nullptr));  // never located
  const auto states = geo::assign_user_states(recs);
  REQUIRE(states.size() == 1);
  CHECK(states.at("a") == StateCode::MX);

  // 1-1 tie: the more recent record wins
  std::vector<AllegianceRecord> tie;
  tie.push_back(geo_rec("c", "NL", Coalition::Ruling, 0.8, 1606800000));
  tie.push_back(geo_rec("c", "YN", Coalition::Ruling, 0.8, 1606900000));
  CHECK(geo::assign_user_states(tie).at("c") == StateCode::YN);

  // same timestamp: the larger tweet id wins
  std::vector<AllegianceRecord> flat;
  flat.push_back(geo_rec("d", "GT"));
  flat.push_back(geo_rec("d", "QR"));
  flat[0].tweet_id = "t9";
  flat[1].tweet_id = "t8";
  CHECK(geo::assign_user_states(flat).at("d") == StateCode::GT);
  std::swap(flat[0].tweet_id, flat[1].tweet_id);
  CHECK(geo::assign_user_states(flat).at("d") == StateCode::QR);

  CHECK(geo::assign_user_states({}).empty());
}

TEST_CASE("state aggregation normalizes unique users") {
  std::vector<AllegianceRecord> recs;
  recs.push_back(geo_rec("a", "MX"));
  recs.push_back(geo_rec("a", "MX"));  // same user counted once
  recs.push_back(geo_rec("b", "MX"));
  recs.push_back(geo_rec("c", "JC"));
  recs.push_back(geo_rec("d", "JC"));
  const auto d = geo::aggregate_users_by_state(recs);
  CHECK(d.pct[static_cast<size_t>(StateCode::MX)] == 50.0);
  CHECK(d.pct[static_cast<size_t>(StateCode::JC)] == 50.0);
  CHECK(d.pct[static_cast<size_t>(StateCode::ZS)] == 0.0);
  CHECK_NOTHROW(d.validate());

  const std::vector<AllegianceRecord> dark = {geo_rec("x", nullptr)};
  CHECK_THROWS_AS(geo::aggregate_users_by_state(dark), UndefinedEstimateError);
}

TEST_CASE("greater Mexico City merge folds three states into one bucket") {
  const auto uniform = RegionDistribution::from_counts(std::vector<double>(kNumStates, 1.0));
  const auto merged = geo::merge_greater_mexico_city(uniform);
  REQUIRE(merged.labels.size() == 30);
  CHECK(merged.labels.back() == "MX+HG+MC");
  CHECK(merged.pct.back() == doctest::Approx(3.0 * 100.0 / 32.0).epsilon(1e-12));
  CHECK(merged.pct.back() == doctest::Approx(9.375).epsilon(1e-12));
  CHECK(merged.total() == doctest::Approx(100.0).epsilon(1e-9));
  for (const auto& label : merged.labels) {
    CHECK(label != "MX");
    CHECK(label != "HG");
    CHECK(label != "MC");
  }

  // the other 29 states keep their mass and order
  size_t j = 0;
  for (int s = 0; s < kNumStates; ++s) {
    const auto code = std::string(state_code_str(static_cast<StateCode>(s)));
    if (code == "MX" || code == "HG" || code == "MC") continue;
    CHECK(merged.labels[j] == code);
    CHECK(merged.pct[j] == uniform.pct[s]);
    ++j;
  }

  CHECK_THROWS_AS(geo::merge_greater_mexico_city(merged), InputError);
}

TEST_CASE("census distributions") {
  const auto census = load_census_csv(std::string(TWELECT_SOURCE_DIR) + "/data/census_2020.csv");
  const auto pop = geo::census_population_distribution(census);
  const auto net = geo::census_internet_distribution(census);
  CHECK_NOTHROW(pop.validate());
  CHECK_NOTHROW(net.validate());
  CHECK(pop.pct[static_cast<size_t>(StateCode::MX)] == doctest::Approx(7.31).epsilon(0.02));
  CHECK(pop.pct[static_cast<size_t>(StateCode::MC)] ==
        doctest::Approx(100.0 * 16992418.0 / 126014024.0).epsilon(1e-12));
  // Mexico City is better connected than its population share
  CHECK(net.pct[static_cast<size_t>(StateCode::MX)] >
        pop.pct[static_cast<size_t>(StateCode::MX)]);
}

TEST_CASE("distribution distances") {
  std::vector<double> ca(kNumStates, 0.0), cb(kNumStates, 0.0);
  ca[0] = 60.0;
  ca[1] = 40.0;
  cb[0] = 50.0;
  cb[1] = 30.0;
  cb[2] = 20.0;
  const auto a = RegionDistribution::from_counts(ca);
  const auto b = RegionDistribution::from_counts(cb);
  // |60-50| + |40-30| + |0-20| = 40 -> tv = 0.2; max diff 20pp -> 0.2
  CHECK(geo::total_variation(a, b) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(geo::max_abs_diff(a, b) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(geo::total_variation(a, a) == 0.0);
  CHECK(geo::total_variation(a, b) == doctest::Approx(oracle::tv_pct(a.pct, b.pct)).epsilon(1e-12));

  auto odd = a;
  odd.labels[0] = "AS+BC";
  CHECK_THROWS_AS(geo::total_variation(a, odd), InputError);
}

TEST_CASE("panel quotas follow largest remainders") {
  std::map<std::string, StateCode> users;
  const auto fill = [&](StateCode s, int n) {
    for (int i = 0; i < n; ++i) {
      users.emplace(std::string(state_code_str(s)) + "_" + std::to_string(i), s);
    }
  };
  fill(StateCode::MX, 50);
  fill(StateCode::JC, 50);
  fill(StateCode::NL, 50);

  std::vector<double> counts(kNumStates, 0.0);
  counts[static_cast<size_t>(StateCode::MX)] = 50.0;
  counts[static_cast<size_t>(StateCode::JC)] = 30.0;
  counts[static_cast<size_t>(StateCode::NL)] = 20.0;
  auto target = RegionDistribution::from_counts(counts);

  auto quotas = geo::panel_quotas(target, users, 10);
  uint32_t total = 0;
  for (const auto& q : quotas) {
    total += q.quota;
    if (q.state == StateCode::MX) CHECK(q.quota == 5);
    if (q.state == StateCode::JC) CHECK(q.quota == 3);
    if (q.state == StateCode::NL) CHECK(q.quota == 2);
    if (q.state == StateCode::ZS) CHECK(q.quota == 0);
  }
  CHECK(total == 10);

  // fractional shares: 55/30/15 of 7 = 3.85/2.10/1.05 -> floors 3/2/1,
  // the largest remainder (.85) takes the leftover slot
  counts[static_cast<size_t>(StateCode::MX)] = 55.0;
  counts[static_cast<size_t>(StateCode::JC)] = 30.0;
  counts[static_cast<size_t>(StateCode::NL)] = 15.0;
  target = RegionDistribution::from_counts(counts);
  quotas = geo::panel_quotas(target, users, 7);
  for (const auto& q : quotas) {
    if (q.state == StateCode::MX) CHECK(q.quota == 4);
    if (q.state == StateCode::JC) CHECK(q.quota == 2);
    if (q.state == StateCode::NL) CHECK(q.quota == 1);
  }

  // a thin pool caps its state and pushes the shortfall elsewhere
  std::map<std::string, StateCode> thin = users;
  std::erase_if(thin, [](const auto& kv) {
    return kv.second == StateCode::MX && kv.first != "MX_0";
  });
  quotas = geo::panel_quotas(target, thin, 7);
  total = 0;
  for (const auto& q : quotas) {
    total += q.quota;
    if (q.state == StateCode::MX) {
      CHECK(q.quota == 1);
      CHECK(q.available == 1);
    }
  }
  CHECK(total == 7);

  CHECK_THROWS_AS(geo::panel_quotas(target, users, 0), ConfigError);
  CHECK_THROWS_AS(geo::panel_quotas(target, users, 200), UndefinedEstimateError);
  CHECK_THROWS_AS(geo::panel_quotas(target, {}, 1), UndefinedEstimateError);
}

TEST_CASE("population-weighted panels match their target mix") {
  // 40 users in each of four states, everyone geo-tagged, ruling share
  // identical everywhere so weighting cannot move the estimate
  std::vector<AllegianceRecord> recs;
  const char* codes[] = {"MX", "JC", "NL", "PL"};
  int uid = 0;
  for (const char* code : codes) {
    for (int u = 0; u < 40; ++u, ++uid) {
      const auto user = "u" + std::to_string(uid);
      const bool ruling = u % 2 == 0;
      recs.push_back(geo_rec(user, code,
                             ruling ? Coalition::Ruling : Coalition::Opposition, 0.8));
      recs.push_back(geo_rec(user, code,
                             ruling ? Coalition::Ruling : Coalition::Opposition, 0.6));
    }
  }

  std::vector<double> counts(kNumStates, 0.0);
  counts[static_cast<size_t>(StateCode::MX)] = 40.0;
  counts[static_cast<size_t>(StateCode::JC)] = 30.0;
  counts[static_cast<size_t>(StateCode::NL)] = 20.0;
  counts[static_cast<size_t>(StateCode::PL)] = 10.0;
  const auto target = RegionDistribution::from_counts(counts);

  const auto res = geo::population_weighted_resample(recs, target, 20, 50, kVT, 11);
  CHECK(res.k == 20);
  CHECK(res.reps == 50);
  CHECK(res.n_undefined == 0);
  CHECK(res.shares.size() == 50);
  CHECK(res.notes.empty());
  uint32_t qsum = 0;
  for (const auto& q : res.quotas) qsum += q.quota;
  CHECK(qsum == 20);
  // exact apportionment here: 8/6/4/2
  CHECK(geo::total_variation(res.drawn, target) < 1e-9);
  CHECK(res.box.median == doctest::Approx(0.5).epsilon(0.05));

  // deterministic under the same seed
  const auto res2 = geo::population_weighted_resample(recs, target, 20, 50, kVT, 11);
  REQUIRE(res2.shares.size() == res.shares.size());
  for (size_t i = 0; i < res.shares.size(); ++i) CHECK(res2.shares[i] == res.shares[i]);

  // a target state with no pool gets redistributed, with a note
  std::vector<double> wide = counts;
  wide[static_cast<size_t>(StateCode::YN)] = 10.0;
  const auto res3 = geo::population_weighted_resample(
      recs, RegionDistribution::from_counts(wide), 20, 20, kVT, 13);
  REQUIRE(res3.notes.size() == 1);
  CHECK(res3.notes[0].find("YN") != std::string::npos);
  CHECK(res3.drawn.pct[static_cast<size_t>(StateCode::YN)] == 0.0);
}

TEST_CASE("panel weighting corrects a capital-heavy sample") {
  // the observed sample over-represents MX 3:1; the target wants 1:1.
  // MX users lean ruling, JC users lean opposition, so the unweighted
  // estimate is biased upward and the weighted one recenters.
  std::vector<AllegianceRecord> recs;
  int uid = 0;
  for (int u = 0; u < 150; ++u, ++uid) {
    recs.push_back(geo_rec("u" + std::to_string(uid), "MX",
                           u % 4 ? Coalition::Ruling : Coalition::Opposition));
  }
  for (int u = 0; u < 50; ++u, ++uid) {
    recs.push_back(geo_rec("u" + std::to_string(uid), "JC",
                           u % 4 ? Coalition::Opposition : Coalition::Ruling));
  }
  std::vector<double> counts(kNumStates, 0.0);
  counts[static_cast<size_t>(StateCode::MX)] = 50.0;
  counts[static_cast<size_t>(StateCode::JC)] = 50.0;
  const auto target = RegionDistribution::from_counts(counts);

  const auto weighted = geo::population_weighted_resample(recs, target, 80, 200, kVT, 21);
  // raw data: (112 + 13) ruling of 200; panels should sit near 50%
  CHECK(models::model_vt(recs, Scope::Complete).ruling_share > 0.6);
  CHECK(weighted.box.median == doctest::Approx(0.5).epsilon(0.1));
  CHECK(geo::total_variation(weighted.drawn, target) < 0.01);
}

TEST_CASE("representativeness report on a proportional corpus") {
  // populations 1000*(s+1), internet half of that, and s+1 twitter users per
  // state: all three distributions coincide
  std::vector<int64_t> pop(kNumStates), net(kNumStates);
  std::vector<AllegianceRecord> recs;
  int uid = 0;
  for (int s = 0; s < kNumStates; ++s) {
    pop[s] = 1000 * (s + 1);
    net[s] = 500 * (s + 1);
    for (int u = 0; u <= s; ++u) {
      recs.push_back(geo_rec("u" + std::to_string(uid++),
                             std::string(state_code_str(static_cast<StateCode>(s))).c_str()));
    }
  }
  const auto census = toy_census(pop, net);
  const auto report = geo::representativeness_report(recs, census);
  CHECK(report.geo_users == 32 * 33 / 2);
  CHECK(report.r_population_internet == 1.0);
  CHECK(report.r_population_twitter == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(report.r_internet_twitter == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(report.r_population_twitter_merged == doctest::Approx(1.0).epsilon(1e-9));
  for (const double d : report.residual_internet_pp) CHECK(std::abs(d) < 1e-9);
  for (const double d : report.residual_twitter_pp) CHECK(std::abs(d) < 1e-9);
  CHECK(report.r_population_twitter <= 1.0);  // clamped
}

TEST_CASE("identical observed and internet mixes give identical correlations") {
  // twitter user counts exactly half the internet counts -> same percentages
  std::vector<int64_t> pop(kNumStates), net(kNumStates);
  std::vector<AllegianceRecord> recs;
  int uid = 0;
  Rng rng(3);
  for (int s = 0; s < kNumStates; ++s) {
    const auto users = 1 + rng.below(6);
    pop[s] = 1000 + static_cast<int64_t>(rng.below(5000));
    net[s] = static_cast<int64_t>(users) * 2;
    for (uint64_t u = 0; u < users; ++u) {
      recs.push_back(geo_rec("u" + std::to_string(uid++),
                             std::string(state_code_str(static_cast<StateCode>(s))).c_str()));
    }
  }
  const auto report = geo::representativeness_report(recs, toy_census(pop, net));
  CHECK(report.r_population_twitter == report.r_population_internet);
  CHECK(report.r_internet_twitter == 1.0);
  // both residual vectors subtract the same observed mix from population
  REQUIRE(report.residual_internet_pp.size() == report.residual_twitter_pp.size());
  for (size_t i = 0; i < report.residual_internet_pp.size(); ++i) {
    CHECK(report.residual_internet_pp[i] == report.residual_twitter_pp[i]);
  }
}

TEST_CASE("representativeness report on a mixed synthetic corpus") {
  const auto census = load_census_csv(std::string(TWELECT_SOURCE_DIR) + "/data/census_2020.csv");
  const auto recs = oracle::random_corpus(81, 3000, 400, 0.9);
  const auto report = geo::representativeness_report(recs, census);
  CHECK(report.geo_users > 0);
  for (const double r : {report.r_population_internet, report.r_population_twitter,
                         report.r_internet_twitter, report.r_population_twitter_merged,
                         report.r_internet_twitter_merged}) {
    CHECK(r >= -1.0);
    CHECK(r <= 1.0);
  }
  CHECK(report.residual_internet_pp.size() == kNumStates);
  CHECK(report.residual_twitter_pp.size() == kNumStates);
  CHECK(std::abs(stats::neumaier_sum(report.residual_twitter_pp)) < 1e-9);
  CHECK_NOTHROW(report.twitter.validate());

  const std::vector<AllegianceRecord> dark = {geo_rec("x", nullptr)};
  CHECK_THROWS_AS(geo::representativeness_report(dark, census), UndefinedEstimateError);
}
