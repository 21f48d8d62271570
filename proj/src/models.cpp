#include "twelect/models.hpp"

#include <algorithm>
#include <cmath>

#include "twelect/errors.hpp"
#include "twelect/rng.hpp"
#include "twelect/stats.hpp"

namespace twelect::models {

void AltBounds::validate() const {
  if (!(0.0 <= x_low && x_low <= x_upp && x_upp <= 1.0)) {
    throw ConfigError("positive-allegiance bounds need 0 <= x_low <= x_upp <= 1");
  }
}

std::string model_id(const ModelSpec& spec) {
  if (spec.family == ModelFamily::ALT) return "ALT";
  std::string id = spec.scope == Scope::Geo ? "G" : "C";
  switch (spec.family) {
    case ModelFamily::VT: id += "VT"; break;
    case ModelFamily::VU: id += "VU"; break;
    case ModelFamily::AT: id += "AT"; break;
    case ModelFamily::AU: id += "AU"; break;
    case ModelFamily::ALT: break;
  }
  return id;
}

std::optional<ModelSpec> parse_model_id(std::string_view id, AltBounds alt_bounds) {
  std::string upper(id);
  for (char& c : upper) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 32);
  }
  if (upper == "ALT") return ModelSpec{ModelFamily::ALT, Scope::Complete, alt_bounds};
  if (upper.size() != 3 || (upper[0] != 'C' && upper[0] != 'G')) return std::nullopt;
  const Scope scope = upper[0] == 'G' ? Scope::Geo : Scope::Complete;
  const std::string_view fam = std::string_view(upper).substr(1);
  ModelFamily family;
  if (fam == "VT") {
    family = ModelFamily::VT;
  } else if (fam == "VU") {
    family = ModelFamily::VU;
  } else if (fam == "AT") {
    family = ModelFamily::AT;
  } else if (fam == "AU") {
    family = ModelFamily::AU;
  } else {
    return std::nullopt;
  }
  return ModelSpec{family, scope, alt_bounds};
}

std::array<ModelSpec, 9> all_models(AltBounds alt_bounds) {
  std::array<ModelSpec, 9> out;
  int i = 0;
  for (const Scope scope : {Scope::Complete, Scope::Geo}) {
    for (const ModelFamily fam :
         {ModelFamily::VT, ModelFamily::VU, ModelFamily::AT, ModelFamily::AU}) {
      out[i++] = ModelSpec{fam, scope, alt_bounds};
    }
  }
  out[i] = ModelSpec{ModelFamily::ALT, Scope::Complete, alt_bounds};
  return out;
}

std::vector<UserAllegiance> user_mean_allegiance(std::span<const AllegianceRecord> records) {
  const RecordTable table = RecordTable::build(records);
  std::vector<double> sum0(table.users(), 0.0), sum1(table.users(), 0.0);
  std::vector<uint64_t> cnt0(table.users(), 0), cnt1(table.users(), 0);
  for (uint32_t r = 0; r < table.rows(); ++r) {
    const uint32_t u = table.user[r];
    if (table.coalition[r] == 0) {
      sum0[u] += table.allegiance[r];
      ++cnt0[u];
    } else {
      sum1[u] += table.allegiance[r];
      ++cnt1[u];
    }
  }
  std::vector<UserAllegiance> out;
  out.reserve(table.users());
  for (uint32_t u = 0; u < table.users(); ++u) {
    UserAllegiance ua;
    ua.user_id = table.user_ids[u];
    ua.n_ruling = cnt0[u];
    ua.n_opposition = cnt1[u];
    if (cnt0[u]) ua.mean_ruling = sum0[u] / static_cast<double>(cnt0[u]);
    if (cnt1[u]) ua.mean_opposition = sum1[u] / static_cast<double>(cnt1[u]);
    out.push_back(std::move(ua));
  }
  return out;
}

void UserScratch::reset(uint32_t n_users) {
  sum0.assign(n_users, 0.0);
  sum1.assign(n_users, 0.0);
  cnt0.assign(n_users, 0);
  cnt1.assign(n_users, 0);
  touched.clear();
  touched.reserve(n_users);
}

void UserScratch::clear_touched() {
  for (const uint32_t u : touched) {
    sum0[u] = sum1[u] = 0.0;
    cnt0[u] = cnt1[u] = 0;
  }
  touched.clear();
}

namespace {

// Iterates the row subset honoring scope and multiplicities.
template <typename Fn>
void for_each_row(const RecordTable& table, Scope scope, std::span<const uint32_t> rows,
                  std::span<const uint32_t> counts, Fn&& fn) {
  const bool geo_only = scope == Scope::Geo;
  const auto visit = [&](uint32_t row, uint64_t mult) {
    if (mult == 0) return;
    if (geo_only && !table.geo[row]) return;
    fn(row, mult);
  };
  if (rows.empty()) {
    for (uint32_t r = 0; r < table.rows(); ++r) visit(r, counts.empty() ? 1 : counts[r]);
  } else {
    for (size_t j = 0; j < rows.size(); ++j) {
      visit(rows[j], counts.empty() ? 1 : counts[j]);
    }
  }
}

ShareOutcome eval_vt(const RecordTable& table, Scope scope, std::span<const uint32_t> rows,
                     std::span<const uint32_t> counts, UserScratch& scratch) {
  uint64_t ruling = 0, total = 0;
  scratch.clear_touched();
  for_each_row(table, scope, rows, counts, [&](uint32_t r, uint64_t mult) {
    total += mult;
    if (table.coalition[r] == 0) ruling += mult;
    const uint32_t u = table.user[r];
    scratch.touch(u);
    ++scratch.cnt0[u];  // presence marker for the distinct-user count
  });
  ShareOutcome out;
  out.records = total;
  out.users = scratch.touched.size();
  if (total > 0) out.share = static_cast<double>(ruling) / static_cast<double>(total);
  return out;
}

ShareOutcome eval_vu(const RecordTable& table, Scope scope, std::span<const uint32_t> rows,
                     std::span<const uint32_t> counts, UserScratch& scratch) {
  scratch.clear_touched();
  uint64_t total = 0;
  for_each_row(table, scope, rows, counts, [&](uint32_t r, uint64_t mult) {
    total += mult;
    const uint32_t u = table.user[r];
    scratch.touch(u);
    (table.coalition[r] == 0 ? scratch.cnt0[u] : scratch.cnt1[u]) += mult;
  });
  uint64_t ruling_voters = 0, opposition_voters = 0;
  for (const uint32_t u : scratch.touched) {
    if (scratch.cnt0[u] > scratch.cnt1[u]) {
      ++ruling_voters;
    } else if (scratch.cnt1[u] > scratch.cnt0[u]) {
      ++opposition_voters;
    }
    // ties sit out
  }
  ShareOutcome out;
  out.records = total;
  out.users = ruling_voters + opposition_voters;
  if (out.users > 0) {
    out.share = static_cast<double>(ruling_voters) / static_cast<double>(out.users);
  }
  return out;
}

ShareOutcome eval_at(const RecordTable& table, Scope scope, std::span<const uint32_t> rows,
                     std::span<const uint32_t> counts, UserScratch& scratch) {
  scratch.clear_touched();
  double s0 = 0.0, s1 = 0.0;
  uint64_t total = 0;
  for_each_row(table, scope, rows, counts, [&](uint32_t r, uint64_t mult) {
    total += mult;
    const double a = table.allegiance[r] * static_cast<double>(mult);
    if (table.coalition[r] == 0) {
      s0 += a;
    } else {
      s1 += a;
    }
    const uint32_t u = table.user[r];
    scratch.touch(u);
    ++scratch.cnt0[u];
  });
  ShareOutcome out;
  out.records = total;
  out.users = scratch.touched.size();
  if (s0 + s1 > 0.0) out.share = s0 / (s0 + s1);
  return out;
}

ShareOutcome eval_au(const RecordTable& table, Scope scope, std::span<const uint32_t> rows,
                     std::span<const uint32_t> counts, UserScratch& scratch) {
  scratch.clear_touched();
  uint64_t total = 0;
  for_each_row(table, scope, rows, counts, [&](uint32_t r, uint64_t mult) {
    total += mult;
    const uint32_t u = table.user[r];
    scratch.touch(u);
    const double a = table.allegiance[r] * static_cast<double>(mult);
    if (table.coalition[r] == 0) {
      scratch.sum0[u] += a;
      scratch.cnt0[u] += mult;
    } else {
      scratch.sum1[u] += a;
      scratch.cnt1[u] += mult;
    }
  });
  double t0 = 0.0, t1 = 0.0;
  for (const uint32_t u : scratch.touched) {
    if (scratch.cnt0[u]) t0 += scratch.sum0[u] / static_cast<double>(scratch.cnt0[u]);
    if (scratch.cnt1[u]) t1 += scratch.sum1[u] / static_cast<double>(scratch.cnt1[u]);
  }
  ShareOutcome out;
  out.records = total;
  out.users = scratch.touched.size();
  if (t0 + t1 > 0.0) out.share = t0 / (t0 + t1);
  return out;
}

ShareOutcome eval_alt(const RecordTable& table, const AltBounds& bounds,
                      std::span<const uint32_t> rows, std::span<const uint32_t> counts,
                      UserScratch& scratch) {
  scratch.clear_touched();
  uint64_t total = 0;
  for_each_row(table, Scope::Complete, rows, counts, [&](uint32_t r, uint64_t mult) {
    total += mult;
    const uint32_t u = table.user[r];
    scratch.touch(u);
    const double a = table.allegiance[r] * static_cast<double>(mult);
    if (table.coalition[r] == 0) {
      scratch.sum0[u] += a;
      scratch.cnt0[u] += mult;
    } else {
      scratch.sum1[u] += a;
      scratch.cnt1[u] += mult;
    }
  });
  uint64_t ruling_voters = 0, opposition_voters = 0;
  for (const uint32_t u : scratch.touched) {
    const bool has0 = scratch.cnt0[u] > 0;
    const bool has1 = scratch.cnt1[u] > 0;
    const double m0 = has0 ? scratch.sum0[u] / static_cast<double>(scratch.cnt0[u]) : 0.0;
    const double m1 = has1 ? scratch.sum1[u] / static_cast<double>(scratch.cnt1[u]) : 0.0;
    // Positive toward both sides is implicitly excluded: the other-side mean
    // then fails the `< x_low` test for both coalitions.
    if (has0 && bounds.x_low <= m0 && m0 <= bounds.x_upp && (!has1 || m1 < bounds.x_low)) {
      ++ruling_voters;
    } else if (has1 && bounds.x_low <= m1 && m1 <= bounds.x_upp &&
               (!has0 || m0 < bounds.x_low)) {
      ++opposition_voters;
    }
  }
  ShareOutcome out;
  out.records = total;
  out.users = ruling_voters + opposition_voters;
  if (out.users > 0) {
    out.share = static_cast<double>(ruling_voters) / static_cast<double>(out.users);
  }
  return out;
}

VoteShareEstimate finish_estimate(const ModelSpec& spec, const ShareOutcome& outcome) {
  if (!outcome.share) {
    throw UndefinedEstimateError(model_id(spec) + ": no defined estimate on this input");
  }
  VoteShareEstimate e;
  e.model = model_id(spec);
  e.ruling_share = *outcome.share;
  e.records_used = outcome.records;
  e.users_used = outcome.users;
  return e;
}

VoteShareEstimate run_model(std::span<const AllegianceRecord> records, const ModelSpec& spec) {
  spec.bounds.validate();
  const RecordTable table = RecordTable::build(records);
  UserScratch scratch;
  scratch.reset(table.users());
  return finish_estimate(spec, eval_share(table, spec, {}, {}, scratch));
}

}  // namespace

ShareOutcome eval_share(const RecordTable& table, const ModelSpec& spec,
                        std::span<const uint32_t> rows, std::span<const uint32_t> counts,
                        UserScratch& scratch) {
  if (!rows.empty() && !counts.empty() && rows.size() != counts.size()) {
    throw ConfigError("row subset and multiplicities must align");
  }
  if (rows.empty() && !counts.empty() && counts.size() != table.rows()) {
    throw ConfigError("full-table multiplicities must cover every row");
  }
  switch (spec.family) {
    case ModelFamily::VT: return eval_vt(table, spec.scope, rows, counts, scratch);
    case ModelFamily::VU: return eval_vu(table, spec.scope, rows, counts, scratch);
    case ModelFamily::AT: return eval_at(table, spec.scope, rows, counts, scratch);
    case ModelFamily::AU: return eval_au(table, spec.scope, rows, counts, scratch);
    case ModelFamily::ALT: return eval_alt(table, spec.bounds, rows, counts, scratch);
  }
  throw ConfigError("unknown model family");
}

std::vector<uint32_t> geo_rows(const RecordTable& table, std::span<const uint32_t> rows) {
  std::vector<uint32_t> out;
  if (rows.empty()) {
    for (uint32_t r = 0; r < table.rows(); ++r) {
      if (table.geo[r]) out.push_back(r);
    }
  } else {
    for (const uint32_t r : rows) {
      if (table.geo[r]) out.push_back(r);
    }
  }
  return out;
}

VoteShareEstimate model_vt(std::span<const AllegianceRecord> records, Scope scope) {
  return run_model(records, ModelSpec{ModelFamily::VT, scope, {}});
}

VoteShareEstimate model_vu(std::span<const AllegianceRecord> records, Scope scope) {
  return run_model(records, ModelSpec{ModelFamily::VU, scope, {}});
}

VoteShareEstimate model_at(std::span<const AllegianceRecord> records, Scope scope) {
  return run_model(records, ModelSpec{ModelFamily::AT, scope, {}});
}

VoteShareEstimate model_au(std::span<const AllegianceRecord> records, Scope scope) {
  return run_model(records, ModelSpec{ModelFamily::AU, scope, {}});
}

VoteShareEstimate model_alt(std::span<const AllegianceRecord> records, AltBounds bounds) {
  return run_model(records, ModelSpec{ModelFamily::ALT, Scope::Complete, bounds});
}

std::vector<SweepCell> alt_grid_sweep(std::span<const AllegianceRecord> records,
                                      std::span<const double> x_low_grid,
                                      std::span<const double> x_upp_grid,
                                      uint32_t n_resamples, uint64_t seed) {
  if (x_low_grid.empty() || x_upp_grid.empty()) {
    throw ConfigError("sweep grids must be non-empty");
  }
  for (const auto grid : {x_low_grid, x_upp_grid}) {
    for (const double x : grid) {
      if (!(0.0 <= x && x <= 1.0)) throw ConfigError("sweep grid values must lie in [0,1]");
    }
  }
  const RecordTable table = RecordTable::build(records);
  UserScratch scratch;
  scratch.reset(table.users());
  Rng cell_seeder(seed);
  std::vector<SweepCell> cells;
  cells.reserve(x_low_grid.size() * x_upp_grid.size());
  for (const double x_low : x_low_grid) {
    for (const double x_upp : x_upp_grid) {
      const uint64_t cell_seed = cell_seeder.next();
      SweepCell cell;
      cell.x_low = x_low;
      cell.x_upp = x_upp;
      cell.valid = x_low <= x_upp;
      if (!cell.valid) {
        cells.push_back(cell);
        continue;
      }
      const ModelSpec spec{ModelFamily::ALT, Scope::Complete, AltBounds{x_low, x_upp}};
      const ShareOutcome point = eval_share(table, spec, {}, {}, scratch);
      if (point.share) {
        cell.share = point.share;
        cell.users = point.users;
        if (n_resamples > 0) {
          try {
            const auto boot = stats::bootstrap_share(table, spec, {}, n_resamples, cell_seed);
            cell.precision_iqr_pp = 100.0 * (boot.box.q3 - boot.box.q1);
          } catch (const UndefinedEstimateError&) {
            // degenerate bootstrap on this cell: leave precision absent
          }
        }
      }
      cells.push_back(cell);
    }
  }
  return cells;
}

}  // namespace twelect::models
