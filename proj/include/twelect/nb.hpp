#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace twelect::nb {

// Manually labeled tweet: 'n' negative or 'p' positive connotation.
struct LabeledExample {
  std::string text;
  char label = 'n';
};

// CSV with header text,label.
std::vector<LabeledExample> load_labeled_csv(const std::string& path);

// token -> dense column index, insertion-ordered.
struct Vocabulary {
  std::vector<std::string> tokens;
  std::unordered_map<std::string, int32_t> index;

  int32_t add(const std::string& token);
  int32_t find(const std::string& token) const;  // -1 when absent
  int32_t size() const { return static_cast<int32_t>(tokens.size()); }
};

// Multinomial Naive Bayes over token counts, Laplace-smoothed, log-space.
struct NBModel {
  double alpha = 1.0;
  int ngram = 1;
  int64_t docs_n = 0;
  int64_t docs_p = 0;
  double prior_n = 0.0;  // document-frequency priors
  double prior_p = 0.0;
  Vocabulary vocab;
  std::vector<double> loglik_n;  // log (count + alpha) / (total + alpha |V|)
  std::vector<double> loglik_p;

  double log_prior_odds() const;  // log(prior_p / prior_n)
};

// priors = class document frequencies; token likelihoods Laplace-smoothed
// with `alpha`. Throws ConfigError on alpha <= 0 or single-class input.
NBModel train_nb(std::span<const LabeledExample> examples, double alpha = 1.0, int ngram = 1);

// log posterior odds of the positive class for a tokenized document.
// Unknown tokens are skipped; per-token deltas accumulate left to right, so
// appending a token adds exactly (loglik_p - loglik_n) of that token.
double log_odds(const NBModel& model, std::span<const std::string> tokens);

// Posterior probability of positive connotation, in [0,1]. A document with
// no in-vocabulary tokens scores exactly prior_p.
double predict_allegiance(const NBModel& model, std::string_view text);
double predict_allegiance_tokens(const NBModel& model, std::span<const std::string> tokens);

// Stratified split: per class, round(fraction * N) examples go to train,
// shuffled deterministically by `seed`. Throws ConfigError unless
// 0 < fraction < 1 and every class has >= 2 examples.
std::pair<std::vector<LabeledExample>, std::vector<LabeledExample>> split_train_test(
    std::span<const LabeledExample> examples, double fraction = 0.85, uint64_t seed = 7);

struct ClassifierMetrics {
  // Confusion counts at threshold 0.5 (predicted positive iff A >= 0.5).
  int64_t tp = 0, fp = 0, tn = 0, fn = 0;
  double f1_n = 0.0;
  double f1_p = 0.0;
  double roc_auc = 0.0;
};

// F1 per class from confusion counts plus rank-statistic ROC AUC (ties get
// average rank). A single-class or empty test set leaves AUC undefined and
// throws UndefinedEstimateError.
ClassifierMetrics evaluate(const NBModel& model, std::span<const LabeledExample> test);

// Self-describing JSON artifact; reload is bit-exact (shortest round-trip
// doubles).
std::string model_to_json(const NBModel& model);
NBModel model_from_json(std::string_view json_text);
void save_model(const NBModel& model, const std::string& path);
NBModel load_model(const std::string& path);

}  // namespace twelect::nb
