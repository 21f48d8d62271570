#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "twelect/models.hpp"
#include "twelect/states.hpp"

namespace twelect::stats {

// Neumaier compensated summation; order-independent to well below 1e-12 for
// the magnitudes used here.
double neumaier_sum(std::span<const double> values);

struct BoxStats {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

// p-quantile of an ascending-sorted span by linear interpolation between
// order statistics (h = (n-1)p).
double quantile_sorted(std::span<const double> sorted, double p);

// Median and quartiles; input copied and sorted. Throws ConfigError on empty
// input.
BoxStats boxplot_summary(std::span<const double> values);

struct BootstrapResult {
  uint32_t n_resamples = 0;     // requested
  uint32_t n_undefined = 0;     // resamples on which the model was undefined
  std::vector<double> shares;   // defined per-resample shares, replicate order
  BoxStats box;
  uint64_t seed = 0;
};

// Draws |rows| records with replacement per resample (replicate i uses the
// stream seed xor i), recomputes the model share each time, and summarizes
// with median and quartiles. User statistics are recomputed per resample.
// Throws ConfigError on empty input and UndefinedEstimateError when more
// than half the resamples are undefined.
BootstrapResult bootstrap_share(const RecordTable& table, const models::ModelSpec& spec,
                                std::span<const uint32_t> rows, uint32_t n_resamples,
                                uint64_t seed);

BootstrapResult bootstrap_share(std::span<const AllegianceRecord> records,
                                const models::ModelSpec& spec, uint32_t n_resamples,
                                uint64_t seed);

struct CorrelationReport {
  double r = 0.0;
  std::size_t n = 0;
  std::string label_x;
  std::string label_y;
};

// Product-moment coefficient. Throws ConfigError on length mismatch or
// n < 2, UndefinedEstimateError on zero variance.
CorrelationReport pearson_r(std::span<const double> x, std::span<const double> y,
                            std::string label_x = {}, std::string label_y = {});

// Per-state reference% - observed%; label universes must match exactly.
// Output sums to zero within 1e-9 for valid distributions.
std::vector<double> residuals(const RegionDistribution& reference,
                              const RegionDistribution& observed);

}  // namespace twelect::stats
