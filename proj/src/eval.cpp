#include "codemix/eval.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "codemix/error.hpp"

namespace codemix::eval {

namespace {

double safe_div(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::size_t ConfusionMatrix::total() const {
  std::size_t sum = 0;
  for (const auto& row : counts) {
    for (std::size_t v : row) sum += v;
  }
  return sum;
}

std::size_t ConfusionMatrix::trace() const {
  std::size_t sum = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c) sum += counts[c][c];
  return sum;
}

EvalReport score(std::span<const Sentiment> gold, std::span<const Sentiment> pred) {
  if (gold.size() != pred.size()) {
    throw DataError(fmt::format("{} gold labels but {} predictions", gold.size(),
                                pred.size()));
  }
  if (gold.empty()) throw DataError("cannot score zero predictions");

  EvalReport r;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    ++r.confusion.counts[ordinal(gold[i])][ordinal(pred[i])];
  }
  double f1_sum = 0.0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    double tp = static_cast<double>(r.confusion.counts[c][c]);
    double predicted = 0.0, actual = 0.0;
    for (std::size_t k = 0; k < kNumClasses; ++k) {
      predicted += static_cast<double>(r.confusion.counts[k][c]);
      actual += static_cast<double>(r.confusion.counts[c][k]);
    }
    ClassMetrics& m = r.per_class[c];
    m.precision = safe_div(tp, predicted);
    m.recall = safe_div(tp, actual);
    m.f1 = safe_div(2.0 * m.precision * m.recall, m.precision + m.recall);
    f1_sum += m.f1;
  }
  r.macro_f1 = f1_sum / static_cast<double>(kNumClasses);
  r.accuracy = static_cast<double>(r.confusion.trace()) /
               static_cast<double>(r.confusion.total());
  return r;
}

std::string format_human(const EvalReport& r) {
  std::string out = fmt::format("{:<10}{:>10}{:>10}{:>10}\n", "gold\\pred", "negative",
                                "neutral", "positive");
  for (Sentiment g : kAllSentiments) {
    const auto& row = r.confusion.counts[ordinal(g)];
    out += fmt::format("{:<10}{:>10}{:>10}{:>10}\n", to_string(g), row[0], row[1], row[2]);
  }
  out += '\n';
  out += fmt::format("{:<10}{:>10}{:>10}{:>10}\n", "class", "precision", "recall", "f1");
  for (Sentiment s : kAllSentiments) {
    const ClassMetrics& m = r[s];
    out += fmt::format("{:<10}{:>10.4f}{:>10.4f}{:>10.4f}\n", to_string(s), m.precision,
                       m.recall, m.f1);
  }
  out += '\n';
  out += fmt::format("accuracy  {:.4f}\nmacro-F1  {:.4f} ({})\n", r.accuracy, r.macro_f1,
                     format_percent(r.macro_f1));
  return out;
}

std::string format_machine(const EvalReport& r) {
  std::string out;
  out += fmt::format("metric.accuracy={:.6f}\n", r.accuracy);
  out += fmt::format("metric.macro_f1={:.6f}\n", r.macro_f1);
  for (Sentiment s : kAllSentiments) {
    const ClassMetrics& m = r[s];
    out += fmt::format("metric.precision_{}={:.6f}\n", to_string(s), m.precision);
    out += fmt::format("metric.recall_{}={:.6f}\n", to_string(s), m.recall);
    out += fmt::format("metric.f1_{}={:.6f}\n", to_string(s), m.f1);
  }
  for (Sentiment g : kAllSentiments) {
    for (Sentiment p : kAllSentiments) {
      out += fmt::format("metric.confusion_{}_{}={}\n", to_string(g), to_string(p),
                         r.confusion.counts[ordinal(g)][ordinal(p)]);
    }
  }
  return out;
}

std::string format_percent(double fraction) {
  return fmt::format("{:.2f}%", fraction * 100.0);
}

std::string comparison_grid(std::span<const GridRow> rows, bool csv) {
  const std::array<std::string, 3> header = {"System", "TF-IDF Input", "Dev Avg F1-Score"};
  if (csv) {
    std::string out = header[0] + "," + header[1] + "," + header[2] + "\n";
    for (const GridRow& r : rows) {
      out += csv_field(r.system) + "," + csv_field(r.doc_mode) + "," +
             format_percent(r.macro_f1) + "\n";
    }
    return out;
  }

  std::size_t w0 = header[0].size(), w1 = header[1].size(), w2 = header[2].size();
  for (const GridRow& r : rows) {
    w0 = std::max(w0, r.system.size());
    w1 = std::max(w1, r.doc_mode.size());
    w2 = std::max(w2, format_percent(r.macro_f1).size());
  }
  auto line = [&](const std::string& a, const std::string& b, const std::string& c) {
    return fmt::format("{:<{}}  {:<{}}  {:>{}}\n", a, w0, b, w1, c, w2);
  };
  std::string out = line(header[0], header[1], header[2]);
  out += std::string(w0, '-') + "  " + std::string(w1, '-') + "  " + std::string(w2, '-') + "\n";
  for (const GridRow& r : rows) out += line(r.system, r.doc_mode, format_percent(r.macro_f1));
  return out;
}

}  // namespace codemix::eval
