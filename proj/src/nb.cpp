#include "twelect/nb.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "twelect/csv.hpp"
#include "twelect/errors.hpp"
#include "twelect/rng.hpp"
#include "twelect/text.hpp"

namespace twelect::nb {

using nlohmann::json;

std::vector<LabeledExample> load_labeled_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open training file: " + path);
  CsvReader reader(in);
  std::vector<std::string> fields;
  if (!reader.next(fields) || fields.size() != 2 || fields[0] != "text" ||
      fields[1] != "label") {
    throw InputError("training file needs header text,label: " + path);
  }
  std::vector<LabeledExample> out;
  while (reader.next(fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 2) {
      throw InputError(path + ": expected 2 fields at line " + std::to_string(reader.line()));
    }
    if (fields[1] != "n" && fields[1] != "p") {
      throw InputError(path + ": label must be n or p at line " + std::to_string(reader.line()));
    }
    out.push_back({std::move(fields[0]), fields[1][0]});
  }
  return out;
}

int32_t Vocabulary::add(const std::string& token) {
  const auto [it, inserted] = index.emplace(token, size());
  if (inserted) tokens.push_back(token);
  return it->second;
}

int32_t Vocabulary::find(const std::string& token) const {
  const auto it = index.find(token);
  return it == index.end() ? -1 : it->second;
}

double NBModel::log_prior_odds() const { return std::log(prior_p / prior_n); }

NBModel train_nb(std::span<const LabeledExample> examples, double alpha, int ngram) {
  if (!(alpha > 0.0)) throw ConfigError("smoothing alpha must be positive");
  if (ngram < 1) throw ConfigError("ngram order must be >= 1");
  NBModel m;
  m.alpha = alpha;
  m.ngram = ngram;

  std::vector<std::vector<std::string>> docs;
  docs.reserve(examples.size());
  for (const auto& ex : examples) {
    if (ex.label != 'n' && ex.label != 'p') throw ConfigError("labels must be n or p");
    (ex.label == 'p' ? m.docs_p : m.docs_n) += 1;
    docs.push_back(tokenize_ngrams(ex.text, ngram));
    for (const auto& tok : docs.back()) m.vocab.add(tok);
  }
  if (m.docs_n == 0 || m.docs_p == 0) {
    throw ConfigError("training needs examples of both classes");
  }
  const auto n_docs = static_cast<double>(m.docs_n + m.docs_p);
  m.prior_n = static_cast<double>(m.docs_n) / n_docs;
  m.prior_p = static_cast<double>(m.docs_p) / n_docs;

  const auto v = static_cast<size_t>(m.vocab.size());
  std::vector<int64_t> count_n(v, 0), count_p(v, 0);
  int64_t total_n = 0, total_p = 0;
  for (size_t i = 0; i < examples.size(); ++i) {
    const bool pos = examples[i].label == 'p';
    for (const auto& tok : docs[i]) {
      const auto col = static_cast<size_t>(m.vocab.find(tok));
      if (pos) {
        ++count_p[col];
        ++total_p;
      } else {
        ++count_n[col];
        ++total_n;
      }
    }
  }
  m.loglik_n.resize(v);
  m.loglik_p.resize(v);
  const double denom_n = static_cast<double>(total_n) + alpha * static_cast<double>(v);
  const double denom_p = static_cast<double>(total_p) + alpha * static_cast<double>(v);
  for (size_t t = 0; t < v; ++t) {
    m.loglik_n[t] = std::log((static_cast<double>(count_n[t]) + alpha) / denom_n);
    m.loglik_p[t] = std::log((static_cast<double>(count_p[t]) + alpha) / denom_p);
  }
  return m;
}

double log_odds(const NBModel& model, std::span<const std::string> tokens) {
  double lo = model.log_prior_odds();
  for (const auto& tok : tokens) {
    const int32_t col = model.vocab.find(tok);
    if (col >= 0) lo += model.loglik_p[static_cast<size_t>(col)] -
                        model.loglik_n[static_cast<size_t>(col)];
  }
  return lo;
}

double predict_allegiance_tokens(const NBModel& model, std::span<const std::string> tokens) {
  bool any = false;
  double lo = model.log_prior_odds();
  for (const auto& tok : tokens) {
    const int32_t col = model.vocab.find(tok);
    if (col < 0) continue;
    any = true;
    lo += model.loglik_p[static_cast<size_t>(col)] - model.loglik_n[static_cast<size_t>(col)];
  }
  if (!any) return model.prior_p;  // exact prior fallback
  return 1.0 / (1.0 + std::exp(-lo));
}

double predict_allegiance(const NBModel& model, std::string_view text) {
  const auto tokens = tokenize_ngrams(text, model.ngram);
  return predict_allegiance_tokens(model, tokens);
}

std::pair<std::vector<LabeledExample>, std::vector<LabeledExample>> split_train_test(
    std::span<const LabeledExample> examples, double fraction, uint64_t seed) {
  if (!(fraction > 0.0) || !(fraction < 1.0)) {
    throw ConfigError("train fraction must lie strictly between 0 and 1");
  }
  std::vector<size_t> idx_n, idx_p;
  for (size_t i = 0; i < examples.size(); ++i) {
    if (examples[i].label != 'n' && examples[i].label != 'p') {
      throw ConfigError("labels must be n or p");
    }
    (examples[i].label == 'p' ? idx_p : idx_n).push_back(i);
  }
  if (idx_n.size() < 2 || idx_p.size() < 2) {
    throw ConfigError("each class needs at least 2 examples to split");
  }
  Rng rng(seed);
  std::vector<LabeledExample> train, test;
  for (auto* idx : {&idx_n, &idx_p}) {
    auto& ids = *idx;
    for (size_t i = ids.size(); i > 1; --i) {  // Fisher-Yates
      std::swap(ids[i - 1], ids[rng.below(i)]);
    }
    const auto n_train =
        static_cast<size_t>(std::llround(fraction * static_cast<double>(ids.size())));
    for (size_t i = 0; i < ids.size(); ++i) {
      (i < n_train ? train : test).push_back(examples[ids[i]]);
    }
  }
  return {std::move(train), std::move(test)};
}

ClassifierMetrics evaluate(const NBModel& model, std::span<const LabeledExample> test) {
  ClassifierMetrics m;
  std::vector<std::pair<double, char>> scored;  // (A, label)
  scored.reserve(test.size());
  for (const auto& ex : test) {
    const double a = predict_allegiance(model, ex.text);
    scored.emplace_back(a, ex.label);
    const bool actual_p = ex.label == 'p';
    const bool predicted_p = a >= 0.5;
    if (actual_p && predicted_p) ++m.tp;
    if (!actual_p && predicted_p) ++m.fp;
    if (!actual_p && !predicted_p) ++m.tn;
    if (actual_p && !predicted_p) ++m.fn;
  }
  const int64_t n_p = m.tp + m.fn;
  const int64_t n_n = m.tn + m.fp;
  if (n_p == 0 || n_n == 0) {
    throw UndefinedEstimateError("evaluation needs both classes in the test set");
  }
  const auto f1 = [](int64_t tp, int64_t fp, int64_t fn) {
    const int64_t denom = 2 * tp + fp + fn;
    return denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
  };
  m.f1_p = f1(m.tp, m.fp, m.fn);
  m.f1_n = f1(m.tn, m.fn, m.fp);

  // Mann-Whitney rank statistic; tied scores share their average rank.
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  double rank_sum_p = 0.0;
  size_t i = 0;
  while (i < scored.size()) {
    size_t j = i;
    while (j < scored.size() && scored[j].first == scored[i].first) ++j;
    const double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (size_t k = i; k < j; ++k) {
      if (scored[k].second == 'p') rank_sum_p += avg_rank;
    }
    i = j;
  }
  const auto dp = static_cast<double>(n_p);
  const auto dn = static_cast<double>(n_n);
  m.roc_auc = (rank_sum_p - dp * (dp + 1.0) / 2.0) / (dp * dn);
  return m;
}

std::string model_to_json(const NBModel& model) {
  json j;
  j["format"] = "twelect-nb-1";
  j["alpha"] = model.alpha;
  j["ngram"] = model.ngram;
  j["docs"] = {{"n", model.docs_n}, {"p", model.docs_p}};
  j["prior"] = {{"n", model.prior_n}, {"p", model.prior_p}};
  j["vocab"] = model.vocab.tokens;
  j["loglik_n"] = model.loglik_n;
  j["loglik_p"] = model.loglik_p;
  return j.dump(2);
}

NBModel model_from_json(std::string_view json_text) {
  const json j = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object() || j.value("format", "") != "twelect-nb-1") {
    throw InputError("not a twelect-nb-1 model artifact");
  }
  try {
    NBModel m;
    m.alpha = j.at("alpha").get<double>();
    m.ngram = j.at("ngram").get<int>();
    m.docs_n = j.at("docs").at("n").get<int64_t>();
    m.docs_p = j.at("docs").at("p").get<int64_t>();
    m.prior_n = j.at("prior").at("n").get<double>();
    m.prior_p = j.at("prior").at("p").get<double>();
    for (const auto& tok : j.at("vocab")) m.vocab.add(tok.get<std::string>());
    m.loglik_n = j.at("loglik_n").get<std::vector<double>>();
    m.loglik_p = j.at("loglik_p").get<std::vector<double>>();
    if (m.loglik_n.size() != static_cast<size_t>(m.vocab.size()) ||
        m.loglik_p.size() != static_cast<size_t>(m.vocab.size())) {
      throw InputError("model artifact: likelihood tables do not match vocabulary");
    }
    return m;
  } catch (const json::exception& e) {
    throw InputError(std::string("model artifact: ") + e.what());
  }
}

void save_model(const NBModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write model artifact: " + path);
  out << model_to_json(model) << '\n';
}

NBModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open model artifact: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return model_from_json(text);
}

}  // namespace twelect::nb
