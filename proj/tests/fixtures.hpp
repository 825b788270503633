#pragma once

// Generators for toy training problems shared by the unit and acceptance tests.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "codemix/corpus.hpp"
#include "codemix/models.hpp"
#include "codemix/vectorize.hpp"

namespace fixtures {

inline codemix::SparseVector from_dense(const std::vector<double>& dense) {
  codemix::SparseVector v;
  v.dimension = dense.size();
  for (std::size_t j = 0; j < dense.size(); ++j) {
    if (dense[j] != 0.0) v.entries.push_back({static_cast<std::uint32_t>(j), dense[j]});
  }
  return v;
}

struct Problem {
  std::vector<codemix::SparseVector> X;
  std::vector<codemix::Sentiment> y;
};

// Dense random features in [-1, 1] with roughly a third of them zeroed.
inline Problem random_problem(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Problem p;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> d(dim);
    for (auto& x : d) x = rng() % 3 == 0 ? 0.0 : u(rng);
    p.X.push_back(from_dense(d));
    p.y.push_back(codemix::kAllSentiments[i < 3 ? i : rng() % 3]);
  }
  return p;
}

// Non-negative integer counts, every class present. With `balanced` the
// labels cycle through the classes so the priors are equal when 3 divides n.
inline Problem count_problem(std::mt19937_64& rng, std::size_t n, std::size_t dim,
                             bool balanced = false) {
  Problem p;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> d(dim);
    for (auto& x : d) x = static_cast<double>(rng() % 4);
    p.X.push_back(from_dense(d));
    p.y.push_back(codemix::kAllSentiments[i < 3 || balanced ? i % 3 : rng() % 3]);
  }
  return p;
}

// Class c owns features [3c, 3c + 3) with values in [0.5, 1.5]; the
// remaining `noise` features carry small values shared by all classes.
inline Problem separable_problem(std::mt19937_64& rng, std::size_t per_class, std::size_t noise) {
  std::uniform_real_distribution<double> strong(0.5, 1.5);
  std::uniform_real_distribution<double> weak(0.0, 0.1);
  const std::size_t dim = 9 + noise;
  Problem p;
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < per_class; ++i) {
      std::vector<double> d(dim, 0.0);
      for (std::size_t k = 0; k < 3; ++k) {
        if (k == 0 || rng() % 2) d[3 * c + k] = strong(rng);
      }
      for (std::size_t k = 9; k < dim; ++k) d[k] = weak(rng);
      p.X.push_back(from_dense(d));
      p.y.push_back(codemix::kAllSentiments[c]);
    }
  }
  return p;
}

// Configuration under which train_svm reaches zero hinge loss on
// separable_problem data.
inline codemix::models::TrainConfig separable_svm_config(std::uint64_t seed) {
  auto cfg = codemix::models::TrainConfig::defaults(codemix::models::ModelKind::kSvm);
  cfg.l2_lambda = 0.0;
  cfg.learning_rate = 0.5;
  cfg.epochs = 200;
  cfg.batch_size = 4;
  cfg.seed = seed;
  return cfg;
}

// Dense W x + b computed independently of LinearModel::scores.
inline std::array<double, 3> dense_scores(const codemix::models::LinearModel& m,
                                          const std::vector<double>& x) {
  std::array<double, 3> s{};
  for (std::size_t c = 0; c < 3; ++c) {
    s[c] = m.bias[c];
    for (std::size_t j = 0; j < x.size(); ++j) s[c] += m.weights[c * m.dimension + j] * x[j];
  }
  return s;
}

// Central finite-difference gradient of `objective` at `m`, compared with
// `analytic` (same layout: weights then bias). Returns the relative error
// |a - n| / max(|a|, |n|) over the whole parameter vector.
template <typename Objective>
double gradient_check(codemix::models::LinearModel m, const codemix::models::LinearModel& analytic,
                      Objective objective, double eps = 1e-5) {
  double diff = 0.0, norm_a = 0.0, norm_n = 0.0;
  auto compare = [&](double& param, double a) {
    const double saved = param;
    param = saved + eps;
    const double up = objective(m);
    param = saved - eps;
    const double down = objective(m);
    param = saved;
    const double numeric = (up - down) / (2 * eps);
    diff += (a - numeric) * (a - numeric);
    norm_a += a * a;
    norm_n += numeric * numeric;
  };
  for (std::size_t k = 0; k < m.weights.size(); ++k) compare(m.weights[k], analytic.weights[k]);
  for (std::size_t c = 0; c < 3; ++c) compare(m.bias[c], analytic.bias[c]);
  const double scale = std::sqrt(std::max(norm_a, norm_n));
  return scale == 0.0 ? std::sqrt(diff) : std::sqrt(diff) / scale;
}

// Tweets whose sentiment is carried by class-specific words mixed with
// shared filler, in both languages. Labels cycle Negative, Neutral, Positive.
inline codemix::Dataset synthetic_corpus(std::mt19937_64& rng, std::size_t n,
                                         const std::string& id_prefix = "t") {
  using codemix::LangTag;
  struct Word {
    const char* text;
    LangTag lang;
  };
  static const std::vector<std::vector<Word>> cue = {
      {{"malo", LangTag::kLang2}, {"terrible", LangTag::kLang1}, {"hate", LangTag::kLang1},
       {"triste", LangTag::kLang2}, {"awful", LangTag::kLang1}, {"odio", LangTag::kLang2}},
      {{"meeting", LangTag::kLang1}, {"horario", LangTag::kLang2}, {"update", LangTag::kLang1},
       {"info", LangTag::kLang1}, {"reunion", LangTag::kLang2}, {"schedule", LangTag::kLang1}},
      {{"love", LangTag::kLang1}, {"feliz", LangTag::kLang2}, {"amazing", LangTag::kLang1},
       {"bueno", LangTag::kLang2}, {"happy", LangTag::kLang1}, {"genial", LangTag::kLang2}}};
  static const std::vector<Word> filler = {
      {"the", LangTag::kLang1}, {"que", LangTag::kLang2}, {"y", LangTag::kLang2},
      {"and", LangTag::kLang1}, {"el", LangTag::kLang2}, {"today", LangTag::kLang1},
      {"lol", LangTag::kOther}, {"pero", LangTag::kLang2}, {"@amigo", LangTag::kOther},
      {"#TodoBien", LangTag::kOther}, {"so", LangTag::kLang1}, {"la", LangTag::kLang2}};
  codemix::Dataset d;
  d.name = "synthetic";
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i % 3;
    codemix::Tweet t;
    t.id = id_prefix + std::to_string(i);
    t.sentiment = codemix::kAllSentiments[c];
    std::vector<Word> words;
    for (std::size_t k = 0, m = 2 + rng() % 3; k < m; ++k) words.push_back(cue[c][rng() % cue[c].size()]);
    for (std::size_t k = 0, m = 2 + rng() % 4; k < m; ++k) words.push_back(filler[rng() % filler.size()]);
    for (std::size_t k = words.size(); k > 1; --k) std::swap(words[k - 1], words[rng() % k]);
    for (const Word& w : words) t.tokens.push_back({w.text, w.lang});
    d.tweets.push_back(std::move(t));
  }
  return d;
}

}  // namespace fixtures
