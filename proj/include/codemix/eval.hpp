#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "codemix/corpus.hpp"

namespace codemix::eval {

/// counts[gold][predicted], class order Negative, Neutral, Positive.
struct ConfusionMatrix {
  std::array<std::array<std::size_t, kNumClasses>, kNumClasses> counts{};

  std::size_t total() const;
  std::size_t trace() const;

  bool operator==(const ConfusionMatrix&) const = default;
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  bool operator==(const ClassMetrics&) const = default;
};

struct EvalReport {
  ConfusionMatrix confusion;
  std::array<ClassMetrics, kNumClasses> per_class{};
  double macro_f1 = 0.0;  // unweighted mean of the three per-class F1 values
  double accuracy = 0.0;

  const ClassMetrics& operator[](Sentiment s) const { return per_class[ordinal(s)]; }
};

/// Precision, recall and F1 per class (0 whenever a denominator is 0), their
/// macro average, and accuracy. Throws DataError on a length mismatch or
/// empty input.
EvalReport score(std::span<const Sentiment> gold, std::span<const Sentiment> pred);

/// Aligned table: confusion matrix, then per-class P/R/F1, accuracy and
/// macro-F1.
std::string format_human(const EvalReport& r);

/// `metric.<name>=<value>` lines, 6 decimal places: accuracy, macro_f1,
/// {precision,recall,f1}_<class>, and confusion_<gold>_<pred> counts.
std::string format_machine(const EvalReport& r);

struct GridRow {
  std::string system;
  std::string doc_mode;  // e.g. "concatenated docs per class"
  double macro_f1 = 0.0;
};

/// "52.60%" for 0.526.
std::string format_percent(double fraction);

/// System | TF-IDF Input | Dev Avg F1-Score, as an aligned plain-text table
/// or as CSV.
std::string comparison_grid(std::span<const GridRow> rows, bool csv = false);

}  // namespace codemix::eval
