#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "twelect/errors.hpp"
#include "twelect/nb.hpp"
#include "twelect/text.hpp"

#include "oracles.hpp"

using namespace twelect;
using nb::LabeledExample;

namespace {

// Smallest interesting model: one doc per class, one token each. With
// alpha=1 and |V|=2 every likelihood is 2/3 or 1/3.
std::vector<LabeledExample> toy() {
  return {{"bueno", 'p'}, {"malo", 'n'}};
}

std::vector<LabeledExample> skewed() {
  return {{"malo", 'n'}, {"bueno", 'p'}, {"genial bueno", 'p'}, {"excelente", 'p'}};
}

}  // namespace

TEST_CASE("toy model likelihoods and posterior") {
  const auto model = nb::train_nb(toy());
  CHECK(model.docs_n == 1);
  CHECK(model.docs_p == 1);
  CHECK(model.prior_p == 0.5);
  CHECK(model.log_prior_odds() == 0.0);
  REQUIRE(model.vocab.size() == 2);
  const auto b = model.vocab.find("bueno");
  const auto m = model.vocab.find("malo");
  REQUIRE(b >= 0);
  REQUIRE(m >= 0);
  CHECK(std::exp(model.loglik_p[b]) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(std::exp(model.loglik_p[m]) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(std::exp(model.loglik_n[m]) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  // P(p | "bueno") = (1/2 * 2/3) / (1/2 * 2/3 + 1/2 * 1/3) = 2/3
  CHECK(nb::predict_allegiance(model, "bueno") ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(nb::predict_allegiance(model, "malo") ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(nb::predict_allegiance(model, "bueno") ==
        doctest::Approx(oracle::nb_posterior(toy(), "bueno", 1.0)).epsilon(1e-12));
}

TEST_CASE("duplicating the training set shifts likelihoods, not priors") {
  const auto base = skewed();
  std::vector<LabeledExample> doubled = base;
  doubled.insert(doubled.end(), base.begin(), base.end());
  const auto m1 = nb::train_nb(base);
  const auto m2 = nb::train_nb(doubled);
  CHECK(m1.prior_p == 0.75);
  CHECK(m2.prior_p == m1.prior_p);  // 6/8 == 3/4 bitwise
  CHECK(m2.prior_n == m1.prior_n);
  CHECK(m2.docs_p == 2 * m1.docs_p);

  // per-token: log((2c + a) / (2T + a|V|)); verify one token by hand
  const auto idx = m2.vocab.find("bueno");
  REQUIRE(idx >= 0);
  const double V = m2.vocab.size();
  // class p in `base`: counts bueno=2, total tokens=4
  CHECK(m2.loglik_p[idx] == doctest::Approx(std::log((2 * 2 + 1) / (2 * 4 + V))).epsilon(1e-15));
  for (const auto& ex : base) {
    CHECK(nb::predict_allegiance(m2, ex.text) ==
          doctest::Approx(oracle::nb_posterior(doubled, ex.text, 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("likelihoods normalize over the vocabulary") {
  const auto docs = oracle::random_labeled(21);
  const auto model = nb::train_nb(docs);
  double sum_n = 0.0, sum_p = 0.0;
  for (int32_t i = 0; i < model.vocab.size(); ++i) {
    sum_n += std::exp(model.loglik_n[i]);
    sum_p += std::exp(model.loglik_p[i]);
  }
  CHECK(sum_n == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sum_p == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("degenerate documents fall back to the prior") {
  const auto balanced = nb::train_nb(toy());
  CHECK(nb::predict_allegiance(balanced, "") == 0.5);
  CHECK(nb::predict_allegiance(balanced, "zzz desconocido") == 0.5);

  const auto model = nb::train_nb(skewed());
  CHECK(model.prior_p == 0.75);
  CHECK(nb::predict_allegiance(model, "") == model.prior_p);
  CHECK(nb::predict_allegiance(model, "zzz desconocido") == model.prior_p);
  CHECK(nb::predict_allegiance(model, "https://solo.un.enlace") == model.prior_p);
}

TEST_CASE("class-exclusive tokens pull the right way") {
  const auto model = nb::train_nb(skewed());
  CHECK(nb::predict_allegiance(model, "genial") > 0.5);
  CHECK(nb::predict_allegiance(model, "malo") < 0.5);
  CHECK(nb::predict_allegiance(model, "malo malo malo") <
        nb::predict_allegiance(model, "malo"));
}

TEST_CASE("appending a token adds its likelihood ratio exactly") {
  const auto docs = oracle::random_labeled(33);
  const auto model = nb::train_nb(docs);
  std::vector<std::string> tokens = {"w0", "w1"};
  const auto idx = model.vocab.find("w2");
  REQUIRE(idx >= 0);
  const double before = nb::log_odds(model, tokens);
  tokens.push_back("w2");
  const double after = nb::log_odds(model, tokens);
  CHECK(after == before + (model.loglik_p[idx] - model.loglik_n[idx]));
}

TEST_CASE("training input validation") {
  CHECK_THROWS_AS(nb::train_nb(toy(), 0.0), ConfigError);
  CHECK_THROWS_AS(nb::train_nb(toy(), -1.0), ConfigError);
  CHECK_THROWS_AS(nb::train_nb(toy(), 1.0, 0), ConfigError);
  const std::vector<LabeledExample> mono = {{"a", 'p'}, {"b", 'p'}};
  CHECK_THROWS_AS(nb::train_nb(mono), ConfigError);
  const std::vector<LabeledExample> bad = {{"a", 'p'}, {"b", 'x'}};
  CHECK_THROWS_AS(nb::train_nb(bad), ConfigError);
  CHECK_THROWS_AS(nb::train_nb({}), ConfigError);
}

TEST_CASE("stratified split") {
  std::vector<LabeledExample> docs;
  for (int i = 0; i < 100; ++i) docs.push_back({"n" + std::to_string(i), 'n'});
  for (int i = 0; i < 100; ++i) docs.push_back({"p" + std::to_string(i), 'p'});

  const auto [train, test] = nb::split_train_test(docs, 0.85, 7);
  CHECK(train.size() == 170);
  CHECK(test.size() == 30);
  const auto count = [](std::span<const LabeledExample> v, char c) {
    return std::count_if(v.begin(), v.end(), [&](const auto& e) { return e.label == c; });
  };
  CHECK(count(train, 'n') == 85);
  CHECK(count(train, 'p') == 85);
  CHECK(count(test, 'n') == 15);
  CHECK(count(test, 'p') == 15);

  // deterministic per seed
  const auto [train2, test2] = nb::split_train_test(docs, 0.85, 7);
  REQUIRE(train2.size() == train.size());
  for (size_t i = 0; i < train.size(); ++i) CHECK(train2[i].text == train[i].text);

  // union preserved
  std::multiset<std::string> all, got;
  for (const auto& e : docs) all.insert(e.text);
  for (const auto& e : train) got.insert(e.text);
  for (const auto& e : test) got.insert(e.text);
  CHECK(all == got);

  // a different seed shuffles differently (with 200 items this is certain
  // enough to assert)
  const auto [train3, test3] = nb::split_train_test(docs, 0.85, 8);
  bool any_diff = false;
  for (size_t i = 0; i < train.size(); ++i) any_diff |= train3[i].text != train[i].text;
  CHECK(any_diff);

  CHECK_THROWS_AS(nb::split_train_test(docs, 0.0), ConfigError);
  CHECK_THROWS_AS(nb::split_train_test(docs, 1.0), ConfigError);
  const std::vector<LabeledExample> tiny = {{"a", 'n'}, {"b", 'p'}, {"c", 'p'}};
  CHECK_THROWS_AS(nb::split_train_test(tiny, 0.85), ConfigError);
}

TEST_CASE("evaluation confusion, F1 and AUC against the reference scorer") {
  // frozen reference quartet: scores {.9 p, .7 p, .6 n, .2 n}
  const std::vector<oracle::ScoredCase> quartet = {
      {0.9, 'p'}, {0.7, 'p'}, {0.6, 'n'}, {0.2, 'n'}};
  const auto qm = oracle::eval_scores(quartet);
  CHECK(qm.tp == 2);
  CHECK(qm.fp == 1);
  CHECK(qm.tn == 1);
  CHECK(qm.fn == 0);
  CHECK(qm.f1_p == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(qm.auc == 1.0);

  for (uint64_t seed = 100; seed < 112; ++seed) {
    const auto docs = oracle::random_labeled(seed, 12, 60);
    const auto n_neg = std::count_if(docs.begin(), docs.end(),
                                     [](const auto& e) { return e.label == 'n'; });
    if (n_neg < 4 || docs.size() - n_neg < 4) continue;  // split needs both classes twice
    const auto [train, test] = nb::split_train_test(docs, 0.7, seed);
    const auto model = nb::train_nb(train);
    bool both = false, seen_n = false, seen_p = false;
    for (const auto& e : test) {
      (e.label == 'p' ? seen_p : seen_n) = true;
    }
    both = seen_n && seen_p;
    if (!both) {
      CHECK_THROWS_AS(nb::evaluate(model, test), UndefinedEstimateError);
      continue;
    }
    const auto metrics = nb::evaluate(model, test);
    std::vector<oracle::ScoredCase> cases;
    for (const auto& e : test) {
      cases.push_back({nb::predict_allegiance(model, e.text), e.label});
    }
    const auto ref = oracle::eval_scores(cases);
    CHECK(metrics.tp == ref.tp);
    CHECK(metrics.fp == ref.fp);
    CHECK(metrics.tn == ref.tn);
    CHECK(metrics.fn == ref.fn);
    CHECK(metrics.f1_n == doctest::Approx(ref.f1_n).epsilon(1e-12));
    CHECK(metrics.f1_p == doctest::Approx(ref.f1_p).epsilon(1e-12));
    CHECK(metrics.roc_auc == doctest::Approx(ref.auc).epsilon(1e-12));
  }

  const auto model = nb::train_nb(toy());
  const std::vector<LabeledExample> mono = {{"bueno", 'p'}};
  CHECK_THROWS_AS(nb::evaluate(model, mono), UndefinedEstimateError);
  CHECK_THROWS_AS(nb::evaluate(model, {}), UndefinedEstimateError);
}

TEST_CASE("posterior matches the reference implementation across corpora") {
  for (uint64_t seed = 0; seed < 25; ++seed) {
    const auto docs = oracle::random_labeled(seed);
    const auto model = nb::train_nb(docs);
    for (const auto& e : docs) {
      CHECK(nb::predict_allegiance(model, e.text) ==
            doctest::Approx(oracle::nb_posterior(docs, e.text, 1.0)).epsilon(1e-12));
    }
    // and on unseen text mixing known/unknown tokens
    CHECK(nb::predict_allegiance(model, "w0 zzz w1") ==
          doctest::Approx(oracle::nb_posterior(docs, "w0 zzz w1", 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("model artifact round-trips bit-exactly") {
  const auto docs = oracle::random_labeled(55, 14, 40);
  const auto model = nb::train_nb(docs);
  const auto json1 = nb::model_to_json(model);
  const auto json2 = nb::model_to_json(nb::train_nb(docs));
  CHECK(json1 == json2);  // retraining is deterministic

  const auto tmp = std::filesystem::temp_directory_path() / "twelect_nb_rt.json";
  nb::save_model(model, tmp.string());
  const auto loaded = nb::load_model(tmp.string());
  CHECK(loaded.alpha == model.alpha);
  CHECK(loaded.ngram == model.ngram);
  CHECK(loaded.prior_p == model.prior_p);
  CHECK(loaded.vocab.tokens == model.vocab.tokens);
  REQUIRE(loaded.loglik_p.size() == model.loglik_p.size());
  for (size_t i = 0; i < model.loglik_p.size(); ++i) {
    CHECK(loaded.loglik_p[i] == model.loglik_p[i]);
    CHECK(loaded.loglik_n[i] == model.loglik_n[i]);
  }
  for (const auto& e : docs) {
    CHECK(nb::predict_allegiance(loaded, e.text) == nb::predict_allegiance(model, e.text));
  }
  std::filesystem::remove(tmp);

  CHECK_THROWS_AS(nb::model_from_json("{}"), InputError);
  CHECK_THROWS_AS(nb::model_from_json("not json"), InputError);
  CHECK_THROWS_AS(nb::load_model("/no/such/model.json"), InputError);
}

TEST_CASE("labeled CSV loader validates") {
  const auto tmp = std::filesystem::temp_directory_path() / "twelect_labeled.csv";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << "text,label\n\"hola, amigo\",p\nfatal,n\n";
  }
  const auto docs = nb::load_labeled_csv(tmp.string());
  REQUIRE(docs.size() == 2);
  CHECK(docs[0].text == "hola, amigo");
  CHECK(docs[0].label == 'p');
  CHECK(docs[1].label == 'n');

  {
    std::ofstream out(tmp, std::ios::binary);
    out << "texto,etiqueta\nx,p\n";
  }
  CHECK_THROWS_AS(nb::load_labeled_csv(tmp.string()), InputError);
  {
    std::ofstream out(tmp, std::ios::binary);
    out << "text,label\nx,q\n";
  }
  CHECK_THROWS_AS(nb::load_labeled_csv(tmp.string()), InputError);
  std::filesystem::remove(tmp);
  CHECK_THROWS_AS(nb::load_labeled_csv("/no/such/file.csv"), InputError);
}

TEST_CASE("bigram models see phrases") {
  const std::vector<LabeledExample> docs = {
      {"no bueno", 'n'}, {"muy bueno", 'p'}, {"muy malo", 'n'}, {"bueno", 'p'}};
  const auto model = nb::train_nb(docs, 1.0, 2);
  CHECK(model.ngram == 2);
  CHECK(model.vocab.find("no bueno") >= 0);
  CHECK(model.vocab.find("muy bueno") >= 0);
  // the bigram under ngram=2 separates what unigrams alone cannot
  CHECK(nb::predict_allegiance(model, "no bueno") < 0.5);
  CHECK(nb::predict_allegiance(model, "muy bueno") > 0.5);
  // posterior still matches the reference scorer at order 2
  for (const auto& e : docs) {
    CHECK(nb::predict_allegiance(model, e.text) ==
          doctest::Approx(oracle::nb_posterior(docs, e.text, 1.0, 2)).epsilon(1e-12));
  }
}
