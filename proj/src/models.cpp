#include "codemix/models.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>

#include <fmt/format.h>

#include "codemix/error.hpp"
#include "codemix/text.hpp"

namespace codemix::models {

namespace {

constexpr std::array<std::string_view, 3> kKindNames = {"lr", "mnb", "svm"};
constexpr std::array<std::string_view, 3> kKindDisplay = {"LR", "MNB", "SVM"};

double dot(std::span<const double> row, const SparseVector& x) {
  double sum = 0.0;
  for (const auto& e : x.entries) sum += row[e.index] * e.weight;
  return sum;
}

std::size_t check_shapes(std::span<const SparseVector> X, std::span<const Sentiment> y) {
  if (X.size() != y.size()) {
    throw DataError(fmt::format("{} feature vectors but {} labels", X.size(), y.size()));
  }
  if (X.empty()) throw DataError("no training samples");
  const std::size_t dim = X.front().dimension;
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (X[i].dimension != dim) {
      throw DataError(fmt::format("sample {} has dimension {}, expected {}", i,
                                  X[i].dimension, dim));
    }
    for (const auto& e : X[i].entries) {
      if (e.index >= dim) {
        throw DataError(fmt::format("sample {} has index {} >= dimension {}", i,
                                    e.index, dim));
      }
    }
  }
  return dim;
}

// ln(sum exp(s)), stable.
double log_sum_exp(const ClassScores& s) {
  const double mx = *std::max_element(s.begin(), s.end());
  double sum = 0.0;
  for (double v : s) sum += std::exp(v - mx);
  return mx + std::log(sum);
}

double squared_norm(const std::vector<double>& w) {
  double sum = 0.0;
  for (double v : w) sum += v * v;
  return sum;
}

// d(loss)/d(score_c) for one sample; written into `coef`.
using ScoreGradient = void (*)(const ClassScores& scores, Sentiment label,
                               ClassScores& coef);

void softmax_gradient(const ClassScores& scores, Sentiment label, ClassScores& coef) {
  const double lse = log_sum_exp(scores);
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    coef[c] = std::exp(scores[c] - lse) - (c == ordinal(label) ? 1.0 : 0.0);
  }
}

void hinge_gradient(const ClassScores& scores, Sentiment label, ClassScores& coef) {
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const double target = c == ordinal(label) ? 1.0 : -1.0;
    coef[c] = target * scores[c] < 1.0 ? -target : 0.0;
  }
}

using Objective = double (*)(const LinearModel&, std::span<const SparseVector>,
                             std::span<const Sentiment>, double);

// Mini-batch (sub)gradient descent shared by LR and SVM. The weights are
// kept as scale * v so the L2 shrinkage of a step costs O(1) instead of
// O(classes * dimension).
LinearModel descend(ModelKind kind, std::span<const SparseVector> X,
                    std::span<const Sentiment> y, const TrainConfig& cfg,
                    ScoreGradient score_gradient, Objective objective,
                    const EpochObserver& observer) {
  cfg.validate();
  const std::size_t dim = check_shapes(X, y);
  const std::size_t n = X.size();
  const std::size_t batch =
      cfg.batch_size <= 0 ? n : std::min<std::size_t>(cfg.batch_size, n);
  const double decay = 1.0 - cfg.learning_rate * cfg.l2_lambda;
  if (decay <= 0.0) {
    throw ConfigError("learning_rate * l2_lambda must be < 1 for stable shrinkage");
  }

  std::vector<double> v(kNumClasses * dim, 0.0);
  double scale = 1.0;
  ClassScores bias{};
  auto row = [&](std::size_t c) { return std::span<const double>(v).subspan(c * dim, dim); };

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(cfg.seed);

  std::vector<ClassScores> coefs(batch);
  LinearModel model = LinearModel::zeros(kind, dim);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    // Fisher-Yates with a fixed reduction so runs agree across standard
    // libraries.
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);

    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t end = std::min(start + batch, n);
      for (std::size_t k = start; k < end; ++k) {
        const SparseVector& x = X[order[k]];
        ClassScores s;
        for (std::size_t c = 0; c < kNumClasses; ++c) {
          s[c] = scale * dot(row(c), x) + bias[c];
        }
        score_gradient(s, y[order[k]], coefs[k - start]);
      }

      const double step = cfg.learning_rate / static_cast<double>(end - start);
      scale *= decay;
      for (std::size_t k = start; k < end; ++k) {
        const SparseVector& x = X[order[k]];
        for (std::size_t c = 0; c < kNumClasses; ++c) {
          const double g = coefs[k - start][c];
          if (g == 0.0) continue;
          const double wstep = step * g / scale;
          double* vc = v.data() + c * dim;
          for (const auto& e : x.entries) vc[e.index] -= wstep * e.weight;
          bias[c] -= step * g;
        }
      }
      if (scale < 1e-9) {
        for (double& w : v) w *= scale;
        scale = 1.0;
      }
    }

    for (std::size_t i = 0; i < v.size(); ++i) model.weights[i] = scale * v[i];
    model.bias = bias;
    const double value = objective(model, X, y, cfg.l2_lambda);
    if (!std::isfinite(value)) {
      throw NumericError(fmt::format("non-finite {} training objective at epoch {}",
                                     to_string(kind), epoch));
    }
    if (observer) observer(epoch, model, value);
  }
  return model;
}

std::vector<double> parse_doubles(std::string_view line, std::size_t line_no) {
  std::vector<double> out;
  for (auto field : split_whitespace(line)) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
      throw ParseError(line_no, "invalid number '" + std::string(field) + "'");
    }
    out.push_back(value);
  }
  return out;
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  return kKindNames[static_cast<std::size_t>(kind)];
}

std::string_view display_name(ModelKind kind) {
  return kKindDisplay[static_cast<std::size_t>(kind)];
}

ModelKind parse_model_kind(std::string_view text) {
  const std::string lowered = ascii_lower(text);
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (lowered == kKindNames[i]) return static_cast<ModelKind>(i);
  }
  throw ConfigError("unknown model '" + std::string(text) +
                    "' (expected lr, mnb or svm)");
}

TrainConfig TrainConfig::defaults(ModelKind kind) {
  TrainConfig cfg;
  cfg.kind = kind;
  cfg.learning_rate = kind == ModelKind::kLogisticRegression ? 0.1 : 0.05;
  return cfg;
}

void TrainConfig::validate() const {
  if (!(l2_lambda >= 0.0) || !std::isfinite(l2_lambda)) {
    throw ConfigError(fmt::format("l2_lambda must be >= 0, got {}", l2_lambda));
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError(fmt::format("learning_rate must be > 0, got {}", learning_rate));
  }
  if (epochs < 1) throw ConfigError(fmt::format("epochs must be >= 1, got {}", epochs));
  if (batch_size < 0) {
    throw ConfigError(fmt::format("batch_size must be >= 0, got {}", batch_size));
  }
  if (!(mnb_alpha > 0.0) || !std::isfinite(mnb_alpha)) {
    throw ConfigError(fmt::format("mnb_alpha must be > 0, got {}", mnb_alpha));
  }
}

LinearModel LinearModel::zeros(ModelKind kind, std::size_t dimension) {
  LinearModel m;
  m.kind = kind;
  m.dimension = dimension;
  m.weights.assign(kNumClasses * dimension, 0.0);
  return m;
}

ClassScores LinearModel::scores(const SparseVector& x) const {
  ClassScores s;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    s[c] = dot(std::span<const double>(weights).subspan(c * dimension, dimension), x) +
           bias[c];
  }
  return s;
}

ClassScores MnbModel::scores(const SparseVector& x) const {
  ClassScores s;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    s[c] = log_prior[c] +
           dot(std::span<const double>(log_likelihood).subspan(c * dimension, dimension), x);
  }
  return s;
}

Sentiment argmax(const ClassScores& scores) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumClasses; ++c) {
    if (scores[c] > scores[best]) best = c;
  }
  return static_cast<Sentiment>(best);
}

Classifier::Classifier(LinearModel m) : model_(std::move(m)) {}
Classifier::Classifier(MnbModel m) : model_(std::move(m)) {}

ModelKind Classifier::kind() const {
  if (const auto* lin = linear()) return lin->kind;
  return ModelKind::kNaiveBayes;
}

std::size_t Classifier::dimension() const {
  return std::visit([](const auto& m) { return m.dimension; }, model_);
}

ClassScores Classifier::predict_scores(const SparseVector& x) const {
  if (x.dimension != dimension()) {
    throw DataError(fmt::format("feature dimension {} does not match model dimension {}",
                                x.dimension, dimension()));
  }
  return std::visit([&](const auto& m) { return m.scores(x); }, model_);
}

Sentiment Classifier::predict(const SparseVector& x) const {
  return argmax(predict_scores(x));
}

void Classifier::save(std::ostream& out) const {
  out << "model v1 " << to_string(kind()) << ' ' << dimension() << '\n';
  fmt::memory_buffer buf;
  auto write_row = [&](double head, std::span<const double> rest, bool head_last) {
    buf.clear();
    if (!head_last) fmt::format_to(std::back_inserter(buf), "{:.17g}", head);
    for (double w : rest) {
      if (buf.size() > 0) buf.push_back(' ');
      fmt::format_to(std::back_inserter(buf), "{:.17g}", w);
    }
    if (head_last) {
      if (buf.size() > 0) buf.push_back(' ');
      fmt::format_to(std::back_inserter(buf), "{:.17g}", head);
    }
    buf.push_back('\n');
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  };
  const std::size_t dim = dimension();
  if (const auto* lin = linear()) {
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      write_row(lin->bias[c], std::span<const double>(lin->weights).subspan(c * dim, dim),
                true);
    }
  } else {
    const auto* nb = naive_bayes();
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      write_row(nb->log_prior[c],
                std::span<const double>(nb->log_likelihood).subspan(c * dim, dim), false);
    }
    out << fmt::format("alpha {:.17g}\n", nb->alpha);
  }
}

Classifier Classifier::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing model header");
  auto header = split_whitespace(line);
  if (header.size() != 4 || header[0] != "model" || header[1] != "v1") {
    throw ParseError(1, "expected 'model v1 <kind> <dimension>'");
  }
  ModelKind kind;
  try {
    kind = parse_model_kind(header[2]);
  } catch (const ConfigError& e) {
    throw ParseError(1, e.what());
  }
  std::size_t dim = 0;
  {
    auto [ptr, ec] = std::from_chars(header[3].data(), header[3].data() + header[3].size(), dim);
    if (ec != std::errc() || ptr != header[3].data() + header[3].size()) {
      throw ParseError(1, "invalid dimension '" + std::string(header[3]) + "'");
    }
  }

  std::vector<std::vector<double>> rows;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (!std::getline(in, line)) {
      throw ParseError(2 + c, "missing parameter row for class " + std::to_string(c));
    }
    rows.push_back(parse_doubles(line, 2 + c));
    if (rows.back().size() != dim + 1) {
      throw ParseError(2 + c, fmt::format("expected {} values, got {}", dim + 1,
                                          rows.back().size()));
    }
    for (double v : rows.back()) {
      if (!std::isfinite(v)) throw ParseError(2 + c, "non-finite parameter");
    }
  }

  if (kind != ModelKind::kNaiveBayes) {
    LinearModel m = LinearModel::zeros(kind, dim);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      std::copy(rows[c].begin(), rows[c].end() - 1, m.weights.begin() + c * dim);
      m.bias[c] = rows[c].back();
    }
    return Classifier(std::move(m));
  }

  MnbModel m;
  m.dimension = dim;
  m.log_likelihood.resize(kNumClasses * dim);
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    m.log_prior[c] = rows[c].front();
    std::copy(rows[c].begin() + 1, rows[c].end(), m.log_likelihood.begin() + c * dim);
  }
  if (!std::getline(in, line)) throw ParseError(5, "missing 'alpha' line");
  auto fields = split_whitespace(line);
  if (fields.size() != 2 || fields[0] != "alpha") {
    throw ParseError(5, "expected 'alpha <value>'");
  }
  m.alpha = parse_doubles(fields[1], 5).front();
  return Classifier(std::move(m));
}

void Classifier::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  save(out);
  if (!out) throw DataError("write to '" + path + "' failed");
}

Classifier Classifier::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  return load(in);
}

TrainResult fit_with_trace(std::span<const SparseVector> X,
                           std::span<const Sentiment> y, const TrainConfig& cfg) {
  cfg.validate();
  check_shapes(X, y);
  if (X.size() < kNumClasses) {
    throw DataError(fmt::format("need at least {} samples, got {}", kNumClasses, X.size()));
  }
  std::array<bool, kNumClasses> present{};
  for (Sentiment s : y) present[ordinal(s)] = true;
  for (Sentiment s : kAllSentiments) {
    if (!present[ordinal(s)]) {
      throw DataError("class '" + std::string(codemix::to_string(s)) +
                      "' is absent from the training labels");
    }
  }

  TrainResult result;
  auto record = [&](int, const LinearModel&, double objective) {
    result.epoch_objective.push_back(objective);
  };
  switch (cfg.kind) {
    case ModelKind::kLogisticRegression:
      result.classifier = Classifier(train_logistic(X, y, cfg, record));
      break;
    case ModelKind::kSvm:
      result.classifier = Classifier(train_svm(X, y, cfg, record));
      break;
    case ModelKind::kNaiveBayes:
      result.classifier = Classifier(train_naive_bayes(X, y, cfg.mnb_alpha));
      break;
  }
  return result;
}

Classifier fit(std::span<const SparseVector> X, std::span<const Sentiment> y,
               const TrainConfig& cfg) {
  return fit_with_trace(X, y, cfg).classifier;
}

LinearModel train_logistic(std::span<const SparseVector> X,
                           std::span<const Sentiment> y, const TrainConfig& cfg,
                           const EpochObserver& observer) {
  return descend(ModelKind::kLogisticRegression, X, y, cfg, softmax_gradient,
                 logistic_objective, observer);
}

LinearModel train_svm(std::span<const SparseVector> X, std::span<const Sentiment> y,
                      const TrainConfig& cfg, const EpochObserver& observer) {
  return descend(ModelKind::kSvm, X, y, cfg, hinge_gradient, svm_objective, observer);
}

NaiveBayesParameters naive_bayes_parameters(
    std::span<const std::size_t> class_counts,
    std::span<const std::vector<double>> class_term_totals, double alpha) {
  if (class_counts.size() != class_term_totals.size()) {
    throw DataError("class count and term total tables disagree on class count");
  }
  if (!(alpha > 0.0)) throw ConfigError("naive Bayes alpha must be > 0");
  const std::size_t n = std::accumulate(class_counts.begin(), class_counts.end(), std::size_t{0});
  if (n == 0) throw DataError("naive Bayes needs at least one sample");
  const std::size_t dim = class_term_totals.empty() ? 0 : class_term_totals.front().size();

  NaiveBayesParameters p;
  for (std::size_t c = 0; c < class_counts.size(); ++c) {
    const auto& tf = class_term_totals[c];
    if (tf.size() != dim) throw DataError("ragged term total table");
    p.log_prior.push_back(std::log(static_cast<double>(class_counts[c]) /
                                   static_cast<double>(n)));
    const double denom =
        std::accumulate(tf.begin(), tf.end(), 0.0) + alpha * static_cast<double>(dim);
    std::vector<double> row(dim);
    for (std::size_t t = 0; t < dim; ++t) row[t] = std::log((tf[t] + alpha) / denom);
    p.log_likelihood.push_back(std::move(row));
  }
  return p;
}

MnbModel train_naive_bayes(std::span<const SparseVector> X,
                           std::span<const Sentiment> y, double alpha) {
  const std::size_t dim = check_shapes(X, y);
  std::vector<std::size_t> counts(kNumClasses, 0);
  std::vector<std::vector<double>> totals(kNumClasses, std::vector<double>(dim, 0.0));
  for (std::size_t i = 0; i < X.size(); ++i) {
    const std::size_t c = ordinal(y[i]);
    ++counts[c];
    for (const auto& e : X[i].entries) {
      if (e.weight < 0.0) {
        throw DataError(fmt::format("naive Bayes needs non-negative features; sample {} "
                                    "has {} at index {}",
                                    i, e.weight, e.index));
      }
      totals[c][e.index] += e.weight;
    }
  }
  auto p = naive_bayes_parameters(counts, totals, alpha);

  MnbModel m;
  m.dimension = dim;
  m.alpha = alpha;
  m.log_likelihood.reserve(kNumClasses * dim);
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    m.log_prior[c] = p.log_prior[c];
    m.log_likelihood.insert(m.log_likelihood.end(), p.log_likelihood[c].begin(),
                            p.log_likelihood[c].end());
  }
  return m;
}

double logistic_objective(const LinearModel& m, std::span<const SparseVector> X,
                          std::span<const Sentiment> y, double l2_lambda) {
  double loss = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const ClassScores s = m.scores(X[i]);
    loss += log_sum_exp(s) - s[ordinal(y[i])];
  }
  return loss / static_cast<double>(X.size()) + 0.5 * l2_lambda * squared_norm(m.weights);
}

LinearModel logistic_gradient(const LinearModel& m, std::span<const SparseVector> X,
                              std::span<const Sentiment> y, double l2_lambda) {
  LinearModel g = LinearModel::zeros(m.kind, m.dimension);
  const double inv_n = 1.0 / static_cast<double>(X.size());
  ClassScores coef;
  for (std::size_t i = 0; i < X.size(); ++i) {
    softmax_gradient(m.scores(X[i]), y[i], coef);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      for (const auto& e : X[i].entries) g.weight(c, e.index) += inv_n * coef[c] * e.weight;
      g.bias[c] += inv_n * coef[c];
    }
  }
  for (std::size_t k = 0; k < g.weights.size(); ++k) g.weights[k] += l2_lambda * m.weights[k];
  return g;
}

double hinge_loss(const LinearModel& m, std::span<const SparseVector> X,
                  std::span<const Sentiment> y) {
  double loss = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const ClassScores s = m.scores(X[i]);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      const double target = c == ordinal(y[i]) ? 1.0 : -1.0;
      loss += std::max(0.0, 1.0 - target * s[c]);
    }
  }
  return loss / static_cast<double>(X.size());
}

double svm_objective(const LinearModel& m, std::span<const SparseVector> X,
                     std::span<const Sentiment> y, double l2_lambda) {
  return hinge_loss(m, X, y) + 0.5 * l2_lambda * squared_norm(m.weights);
}

}  // namespace codemix::models
