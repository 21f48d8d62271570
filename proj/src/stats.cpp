#include "twelect/stats.hpp"

#include <algorithm>
#include <cmath>

#include "twelect/errors.hpp"
#include "twelect/rng.hpp"

namespace twelect::stats {

double neumaier_sum(std::span<const double> values) {
  double sum = 0.0;
  double comp = 0.0;
  for (const double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw ConfigError("quantile of empty data");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("quantile probability outside [0,1]");
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

BoxStats boxplot_summary(std::span<const double> values) {
  if (values.empty()) throw ConfigError("boxplot of empty data");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  BoxStats box;
  box.q1 = quantile_sorted(sorted, 0.25);
  box.median = quantile_sorted(sorted, 0.5);
  box.q3 = quantile_sorted(sorted, 0.75);
  return box;
}

BootstrapResult bootstrap_share(const RecordTable& table, const models::ModelSpec& spec,
                                std::span<const uint32_t> rows, uint32_t n_resamples,
                                uint64_t seed) {
  const uint32_t n_rows = rows.empty() ? table.rows() : static_cast<uint32_t>(rows.size());
  if (n_rows == 0) throw ConfigError("bootstrap needs at least one record");
  if (n_resamples == 0) throw ConfigError("bootstrap needs at least one resample");

  BootstrapResult result;
  result.n_resamples = n_resamples;
  result.seed = seed;
  result.shares.reserve(n_resamples);

  models::UserScratch scratch;
  scratch.reset(table.users());
  std::vector<uint32_t> counts(n_rows, 0);
  for (uint32_t i = 0; i < n_resamples; ++i) {
    Rng rng = Rng::stream(seed, i);
    std::fill(counts.begin(), counts.end(), 0);
    for (uint32_t k = 0; k < n_rows; ++k) ++counts[rng.below(n_rows)];
    const models::ShareOutcome outcome = eval_share(table, spec, rows, counts, scratch);
    if (outcome.share) {
      result.shares.push_back(*outcome.share);
    } else {
      ++result.n_undefined;
    }
  }
  if (2 * static_cast<uint64_t>(result.n_undefined) > n_resamples) {
    throw UndefinedEstimateError(model_id(spec) + ": bootstrap undefined on " +
                                 std::to_string(result.n_undefined) + " of " +
                                 std::to_string(n_resamples) + " resamples");
  }
  result.box = boxplot_summary(result.shares);
  return result;
}

BootstrapResult bootstrap_share(std::span<const AllegianceRecord> records,
                                const models::ModelSpec& spec, uint32_t n_resamples,
                                uint64_t seed) {
  const RecordTable table = RecordTable::build(records);
  return bootstrap_share(table, spec, {}, n_resamples, seed);
}

CorrelationReport pearson_r(std::span<const double> x, std::span<const double> y,
                            std::string label_x, std::string label_y) {
  if (x.size() != y.size()) throw ConfigError("correlation series differ in length");
  if (x.size() < 2) throw ConfigError("correlation needs at least two points");
  const auto n = static_cast<double>(x.size());
  const double mean_x = neumaier_sum(x) / n;
  const double mean_y = neumaier_sum(y) / n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw UndefinedEstimateError("correlation undefined: a series has zero variance");
  }
  CorrelationReport report;
  report.r = sxy / std::sqrt(sxx * syy);
  report.r = std::clamp(report.r, -1.0, 1.0);
  report.n = x.size();
  report.label_x = std::move(label_x);
  report.label_y = std::move(label_y);
  return report;
}

std::vector<double> residuals(const RegionDistribution& reference,
                              const RegionDistribution& observed) {
  reference.validate();
  observed.validate();
  if (reference.labels != observed.labels) {
    throw InputError("residuals need identical region label universes");
  }
  std::vector<double> out(reference.pct.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = reference.pct[i] - observed.pct[i];
  return out;
}

}  // namespace twelect::stats
