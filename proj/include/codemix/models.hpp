#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "codemix/corpus.hpp"
#include "codemix/vectorize.hpp"

namespace codemix::models {

enum class ModelKind { kLogisticRegression, kNaiveBayes, kSvm };

/// "lr", "mnb", "svm".
std::string_view to_string(ModelKind kind);
/// Case-insensitive short name. Throws ConfigError.
ModelKind parse_model_kind(std::string_view text);
/// "LR", "MNB", "SVM".
std::string_view display_name(ModelKind kind);

using ClassScores = std::array<double, kNumClasses>;

struct TrainConfig {
  ModelKind kind = ModelKind::kSvm;
  double l2_lambda = 1e-4;
  double learning_rate = 0.05;
  int epochs = 50;
  int batch_size = 32;  // 0 means full batch
  double mnb_alpha = 1.0;
  std::uint64_t seed = 0;

  /// Per-kind defaults: LR lr=0.1, SVM lr=0.05, both lambda=1e-4, 50 epochs,
  /// batch 32; MNB alpha=1.
  static TrainConfig defaults(ModelKind kind);

  /// Throws ConfigError on out-of-range fields.
  void validate() const;
};

/// LR and SVM parameters. Row c of `weights` scores class c (class order
/// Negative, Neutral, Positive); stored row-major.
struct LinearModel {
  ModelKind kind = ModelKind::kLogisticRegression;
  std::size_t dimension = 0;
  std::vector<double> weights;
  ClassScores bias{};

  static LinearModel zeros(ModelKind kind, std::size_t dimension);

  double& weight(std::size_t c, std::size_t j) { return weights[c * dimension + j]; }
  double weight(std::size_t c, std::size_t j) const { return weights[c * dimension + j]; }

  /// W x + b.
  ClassScores scores(const SparseVector& x) const;

  bool operator==(const LinearModel&) const = default;
};

struct MnbModel {
  std::size_t dimension = 0;
  ClassScores log_prior{};
  std::vector<double> log_likelihood;  // [class * dimension + term]
  double alpha = 1.0;

  double log_likelihood_at(std::size_t c, std::size_t j) const {
    return log_likelihood[c * dimension + j];
  }

  /// log_prior + x . log_likelihood.
  ClassScores scores(const SparseVector& x) const;

  bool operator==(const MnbModel&) const = default;
};

/// A fitted LR, MNB or SVM model behind one predict contract.
class Classifier {
 public:
  Classifier() = default;
  explicit Classifier(LinearModel m);
  explicit Classifier(MnbModel m);

  ModelKind kind() const;
  std::size_t dimension() const;

  /// Raw class scores: logits (LR), margins (SVM) or log-joint (MNB).
  /// Throws DataError on a dimension mismatch.
  ClassScores predict_scores(const SparseVector& x) const;
  /// argmax of predict_scores; ties go to the lowest class ordinal.
  Sentiment predict(const SparseVector& x) const;

  const LinearModel* linear() const { return std::get_if<LinearModel>(&model_); }
  const MnbModel* naive_bayes() const { return std::get_if<MnbModel>(&model_); }

  /// `model v1 <kind> <dimension>` then one line per class, values printed
  /// with 17 significant digits. LR/SVM lines hold the weights followed by
  /// the bias; MNB lines hold the log prior followed by the log likelihoods,
  /// and a final `alpha <value>` line.
  void save(std::ostream& out) const;
  static Classifier load(std::istream& in);
  void save_file(const std::string& path) const;
  static Classifier load_file(const std::string& path);

  bool operator==(const Classifier&) const = default;

 private:
  std::variant<LinearModel, MnbModel> model_;
};

/// First index of the maximum.
Sentiment argmax(const ClassScores& scores);

/// Called after every epoch (1-based) with the current parameters and the
/// full-batch training objective.
using EpochObserver =
    std::function<void(int epoch, const LinearModel& model, double objective)>;

struct TrainResult {
  Classifier classifier;
  std::vector<double> epoch_objective;  // empty for MNB
};

/// Checks the preconditions (|X| = |y| >= 3, every class present, uniform
/// dimension) and dispatches on cfg.kind. Throws DataError on bad input and
/// NumericError (naming the epoch) when the objective stops being finite.
TrainResult fit_with_trace(std::span<const SparseVector> X,
                           std::span<const Sentiment> y, const TrainConfig& cfg);
Classifier fit(std::span<const SparseVector> X, std::span<const Sentiment> y,
               const TrainConfig& cfg);

// The trainers below only check shapes, so they also accept data in which
// some classes are missing.

/// Mini-batch gradient descent on mean softmax cross-entropy + (lambda/2)|W|^2.
/// Batches are drawn from a permutation reshuffled every epoch from cfg.seed.
LinearModel train_logistic(std::span<const SparseVector> X,
                           std::span<const Sentiment> y, const TrainConfig& cfg,
                           const EpochObserver& observer = {});

/// One-vs-rest hinge loss + (lambda/2)|w_c|^2 per class, mini-batch
/// subgradient descent with the same batching as train_logistic.
LinearModel train_svm(std::span<const SparseVector> X, std::span<const Sentiment> y,
                      const TrainConfig& cfg, const EpochObserver& observer = {});

/// Closed-form multinomial naive Bayes with additive smoothing `alpha`.
/// Feature values must be non-negative.
MnbModel train_naive_bayes(std::span<const SparseVector> X,
                           std::span<const Sentiment> y, double alpha);

/// Naive Bayes estimates for an arbitrary number of classes:
///   log_prior[c] = ln(count_c / n)
///   log_likelihood[c][t] = ln((tf[c][t] + alpha) / (sum_t tf[c][t] + alpha * dim))
struct NaiveBayesParameters {
  std::vector<double> log_prior;
  std::vector<std::vector<double>> log_likelihood;
};
NaiveBayesParameters naive_bayes_parameters(
    std::span<const std::size_t> class_counts,
    std::span<const std::vector<double>> class_term_totals, double alpha);

/// Full-batch objectives and gradients, used by the trainers' epoch checks
/// and by the gradient tests.
double logistic_objective(const LinearModel& m, std::span<const SparseVector> X,
                          std::span<const Sentiment> y, double l2_lambda);
/// Gradient with respect to (weights, bias), returned in LinearModel shape.
LinearModel logistic_gradient(const LinearModel& m, std::span<const SparseVector> X,
                              std::span<const Sentiment> y, double l2_lambda);

/// Sum over classes of the one-vs-rest mean hinge loss (no regularizer).
double hinge_loss(const LinearModel& m, std::span<const SparseVector> X,
                  std::span<const Sentiment> y);
/// hinge_loss + (lambda/2)|W|^2.
double svm_objective(const LinearModel& m, std::span<const SparseVector> X,
                     std::span<const Sentiment> y, double l2_lambda);

}  // namespace codemix::models
