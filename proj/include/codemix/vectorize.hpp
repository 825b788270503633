#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "codemix/corpus.hpp"

namespace codemix {

/// Sparse vector with strictly increasing indices and no stored zeros.
struct SparseVector {
  struct Entry {
    std::uint32_t index;
    double weight;

    bool operator==(const Entry&) const = default;
  };

  std::vector<Entry> entries;
  std::size_t dimension = 0;

  bool empty() const { return entries.empty(); }
  double norm() const;
  /// Dense copy; test and debugging use only.
  std::vector<double> to_dense() const;

  bool operator==(const SparseVector&) const = default;
};

}  // namespace codemix

namespace codemix::vectorize {

enum class DocMode { kPerClassConcatenated, kAllDocuments };

/// "concatenated" / "all".
std::string_view to_string(DocMode mode);
/// Accepts the short names above plus the long forms "concatenated docs per
/// class" and "all documents". Throws ConfigError otherwise.
DocMode parse_doc_mode(std::string_view text);
/// Long human label, as used in result tables.
std::string_view label(DocMode mode);

struct Analyzer {
  enum class Kind { kWord, kChar };

  Kind kind = Kind::kWord;
  int ngram_min = 1;
  int ngram_max = 1;

  static Analyzer word(int lo = 1, int hi = 1) { return {Kind::kWord, lo, hi}; }
  static Analyzer chars(int lo = 2, int hi = 5) { return {Kind::kChar, lo, hi}; }

  /// Throws ConfigError unless 1 <= ngram_min <= ngram_max <= 8.
  void validate() const;

  bool operator==(const Analyzer&) const = default;
};

/// "1-1" style range text.
std::string format_ngram_range(const Analyzer& a);
/// Parses "lo-hi" (or a single "n"). Throws ConfigError.
Analyzer parse_ngram_range(Analyzer::Kind kind, std::string_view text);

/// Lowercases, splits on runs of bytes that are neither ASCII alphanumerics
/// nor part of a multi-byte UTF-8 sequence.
std::vector<std::string> word_tokens(std::string_view text);

/// All n-grams of `text` under `a`, in extraction order, with repeats.
/// Word n-grams are tokens joined by one space. Char n-grams are taken over
/// UTF-8 codepoints of the lowercased, whitespace-normalized text.
std::vector<std::string> extract_terms(std::string_view text, const Analyzer& a);

class Vocabulary {
 public:
  Vocabulary() = default;

  /// Terms sorted lexicographically (byte order) get indices 0..size-1.
  /// Document frequency counts each document at most once. Throws DataError
  /// on an empty document list.
  static Vocabulary fit(std::span<const std::string> docs, const Analyzer& a);

  /// Rebuilds from persisted state. Throws DataError if the invariants
  /// (sorted unique terms, 1 <= df <= n_documents) do not hold.
  static Vocabulary from_parts(Analyzer a, std::vector<std::string> terms,
                               std::vector<std::uint32_t> df,
                               std::uint32_t n_documents);

  const Analyzer& analyzer() const { return analyzer_; }
  std::size_t size() const { return terms_.size(); }
  std::uint32_t n_documents() const { return n_documents_; }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<std::uint32_t>& document_frequency() const { return df_; }

  /// Index of `term`, or -1 when out of vocabulary.
  std::int64_t index_of(std::string_view term) const;
  /// ln((1 + N) / (1 + df)) + 1.
  double idf(std::size_t index) const;

  bool operator==(const Vocabulary&) const = default;

 private:
  Analyzer analyzer_;
  std::vector<std::string> terms_;  // sorted, so lookup is a binary search
  std::vector<std::uint32_t> df_;
  std::uint32_t n_documents_ = 0;
};

/// Training documents for `mode`. AllDocuments: `texts` unchanged.
/// PerClassConcatenated: three documents (Negative, Neutral, Positive), each
/// the space-join of that class's texts in dataset order. `texts[i]` is the
/// preprocessed text of `d.tweets[i]`.
std::vector<std::string> prepare_documents(const Dataset& d, DocMode mode,
                                           std::span<const std::string> texts);

/// Word and char TF-IDF blocks concatenated into one feature space; word
/// features first.
class TfIdfModel {
 public:
  TfIdfModel() = default;
  TfIdfModel(Vocabulary word, Vocabulary chars, DocMode mode);

  static TfIdfModel fit(std::span<const std::string> docs, DocMode mode,
                        const Analyzer& word = Analyzer::word(),
                        const Analyzer& chars = Analyzer::chars());

  /// tf = raw count, weight = tf * idf, then L2-normalized over the whole
  /// concatenated vector. Out-of-vocabulary terms are ignored.
  SparseVector transform(std::string_view text) const;
  std::vector<SparseVector> transform_batch(std::span<const std::string> texts) const;

  const Vocabulary& word_vocab() const { return word_; }
  const Vocabulary& char_vocab() const { return char_; }
  DocMode mode() const { return mode_; }
  std::size_t dimension() const { return word_.size() + char_.size(); }

  void save(std::ostream& out) const;
  static TfIdfModel load(std::istream& in);
  void save_file(const std::string& path) const;
  static TfIdfModel load_file(const std::string& path);

  bool operator==(const TfIdfModel&) const = default;

 private:
  Vocabulary word_;
  Vocabulary char_;
  DocMode mode_ = DocMode::kAllDocuments;
};

/// Backslash escapes for '\\', '\t', '\n' and '\r'.
std::string escape_term(std::string_view term);
/// Inverse of escape_term. Throws DataError on a dangling or unknown escape.
std::string unescape_term(std::string_view text);

}  // namespace codemix::vectorize
