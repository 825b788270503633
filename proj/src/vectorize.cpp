#include "codemix/vectorize.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "codemix/error.hpp"
#include "codemix/text.hpp"

namespace codemix {

double SparseVector::norm() const {
  double sum = 0.0;
  for (const Entry& e : entries) sum += e.weight * e.weight;
  return std::sqrt(sum);
}

std::vector<double> SparseVector::to_dense() const {
  std::vector<double> dense(dimension, 0.0);
  for (const Entry& e : entries) dense[e.index] = e.weight;
  return dense;
}

}  // namespace codemix

namespace codemix::vectorize {

namespace {

constexpr int kMaxNgram = 8;

bool is_word_byte(char c) { return is_ascii_alnum(c) || is_non_ascii(c); }

int parse_int(std::string_view text, const char* what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(std::string("invalid ") + what + " '" + std::string(text) + "'");
  }
  return value;
}

template <typename Int>
Int parse_count(std::string_view text, std::size_t line) {
  Int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(line, "expected a non-negative integer, got '" +
                               std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::string_view to_string(DocMode mode) {
  return mode == DocMode::kPerClassConcatenated ? "concatenated" : "all";
}

std::string_view label(DocMode mode) {
  return mode == DocMode::kPerClassConcatenated ? "concatenated docs per class"
                                                : "all documents";
}

DocMode parse_doc_mode(std::string_view text) {
  for (DocMode m : {DocMode::kPerClassConcatenated, DocMode::kAllDocuments}) {
    if (text == to_string(m) || text == label(m)) return m;
  }
  throw ConfigError("unknown doc mode '" + std::string(text) +
                    "' (expected 'concatenated' or 'all')");
}

void Analyzer::validate() const {
  if (ngram_min < 1 || ngram_min > ngram_max || ngram_max > kMaxNgram) {
    throw ConfigError("invalid n-gram range " + format_ngram_range(*this) +
                      " (need 1 <= min <= max <= 8)");
  }
}

std::string format_ngram_range(const Analyzer& a) {
  return std::to_string(a.ngram_min) + "-" + std::to_string(a.ngram_max);
}

Analyzer parse_ngram_range(Analyzer::Kind kind, std::string_view text) {
  Analyzer a{kind, 0, 0};
  auto dash = text.find('-');
  if (dash == std::string_view::npos) {
    a.ngram_min = a.ngram_max = parse_int(text, "n-gram range");
  } else {
    a.ngram_min = parse_int(text.substr(0, dash), "n-gram range");
    a.ngram_max = parse_int(text.substr(dash + 1), "n-gram range");
  }
  a.validate();
  return a;
}

std::vector<std::string> word_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !is_word_byte(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && is_word_byte(text[i])) ++i;
    if (i > start) out.push_back(ascii_lower(text.substr(start, i - start)));
  }
  return out;
}

std::vector<std::string> extract_terms(std::string_view text, const Analyzer& a) {
  std::vector<std::string> out;
  if (a.kind == Analyzer::Kind::kWord) {
    const auto tokens = word_tokens(text);
    for (int n = a.ngram_min; n <= a.ngram_max; ++n) {
      for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string gram = tokens[i];
        for (int k = 1; k < n; ++k) {
          gram += ' ';
          gram += tokens[i + k];
        }
        out.push_back(std::move(gram));
      }
    }
    return out;
  }

  const std::string normalized = ascii_lower(normalize_whitespace(text));
  const auto units = utf8_units(normalized);
  for (int n = a.ngram_min; n <= a.ngram_max; ++n) {
    for (std::size_t i = 0; i + n <= units.size(); ++i) {
      const char* begin = units[i].data();
      const char* end = units[i + n - 1].data() + units[i + n - 1].size();
      out.emplace_back(begin, end);
    }
  }
  return out;
}

Vocabulary Vocabulary::fit(std::span<const std::string> docs, const Analyzer& a) {
  a.validate();
  if (docs.empty()) throw DataError("cannot fit a vocabulary on zero documents");

  // (term, doc) pairs, deduplicated per document, then counted per term.
  std::vector<std::string> all_terms;
  for (const std::string& doc : docs) {
    auto terms = extract_terms(doc, a);
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    std::move(terms.begin(), terms.end(), std::back_inserter(all_terms));
  }
  std::sort(all_terms.begin(), all_terms.end());

  Vocabulary v;
  v.analyzer_ = a;
  v.n_documents_ = static_cast<std::uint32_t>(docs.size());
  for (std::size_t i = 0; i < all_terms.size();) {
    std::size_t j = i + 1;
    while (j < all_terms.size() && all_terms[j] == all_terms[i]) ++j;
    v.terms_.push_back(std::move(all_terms[i]));
    v.df_.push_back(static_cast<std::uint32_t>(j - i));
    i = j;
  }
  return v;
}

Vocabulary Vocabulary::from_parts(Analyzer a, std::vector<std::string> terms,
                                  std::vector<std::uint32_t> df,
                                  std::uint32_t n_documents) {
  a.validate();
  if (n_documents == 0) throw DataError("vocabulary with zero documents");
  if (terms.size() != df.size()) throw DataError("term/df count mismatch");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i > 0 && !(terms[i - 1] < terms[i])) {
      throw DataError("vocabulary terms are not strictly sorted at index " +
                      std::to_string(i));
    }
    if (df[i] < 1 || df[i] > n_documents) {
      throw DataError("document frequency " + std::to_string(df[i]) +
                      " out of range for term index " + std::to_string(i));
    }
  }
  Vocabulary v;
  v.analyzer_ = a;
  v.terms_ = std::move(terms);
  v.df_ = std::move(df);
  v.n_documents_ = n_documents;
  return v;
}

std::int64_t Vocabulary::index_of(std::string_view term) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), term,
                             [](const std::string& a, std::string_view b) { return a < b; });
  if (it == terms_.end() || *it != term) return -1;
  return it - terms_.begin();
}

double Vocabulary::idf(std::size_t index) const {
  return std::log((1.0 + n_documents_) / (1.0 + df_[index])) + 1.0;
}

std::vector<std::string> prepare_documents(const Dataset& d, DocMode mode,
                                           std::span<const std::string> texts) {
  if (texts.size() != d.size()) {
    throw DataError("got " + std::to_string(texts.size()) + " texts for " +
                    std::to_string(d.size()) + " tweets");
  }
  if (mode == DocMode::kAllDocuments) return {texts.begin(), texts.end()};

  std::vector<std::string> docs(kNumClasses);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Tweet& t = d.tweets[i];
    if (!t.sentiment) {
      throw DataError("tweet '" + t.id +
                      "' has no label; per-class documents need labels");
    }
    std::string& doc = docs[ordinal(*t.sentiment)];
    if (!doc.empty()) doc += ' ';
    doc += texts[i];
  }
  return docs;
}

TfIdfModel::TfIdfModel(Vocabulary word, Vocabulary chars, DocMode mode)
    : word_(std::move(word)), char_(std::move(chars)), mode_(mode) {
  if (word_.analyzer().kind != Analyzer::Kind::kWord ||
      char_.analyzer().kind != Analyzer::Kind::kChar) {
    throw DataError("TF-IDF model needs a word block followed by a char block");
  }
}

TfIdfModel TfIdfModel::fit(std::span<const std::string> docs, DocMode mode,
                           const Analyzer& word, const Analyzer& chars) {
  if (word.kind != Analyzer::Kind::kWord || chars.kind != Analyzer::Kind::kChar) {
    throw ConfigError("expected a word analyzer and a char analyzer");
  }
  return TfIdfModel(Vocabulary::fit(docs, word), Vocabulary::fit(docs, chars), mode);
}

SparseVector TfIdfModel::transform(std::string_view text) const {
  std::vector<std::uint32_t> hits;
  std::uint32_t offset = 0;
  for (const Vocabulary* vocab : {&word_, &char_}) {
    for (const std::string& term : extract_terms(text, vocab->analyzer())) {
      auto idx = vocab->index_of(term);
      if (idx >= 0) hits.push_back(offset + static_cast<std::uint32_t>(idx));
    }
    offset += static_cast<std::uint32_t>(vocab->size());
  }
  std::sort(hits.begin(), hits.end());

  SparseVector v;
  v.dimension = dimension();
  for (std::size_t i = 0; i < hits.size();) {
    std::size_t j = i + 1;
    while (j < hits.size() && hits[j] == hits[i]) ++j;
    const std::uint32_t index = hits[i];
    const double idf = index < word_.size() ? word_.idf(index)
                                            : char_.idf(index - word_.size());
    v.entries.push_back({index, static_cast<double>(j - i) * idf});
    i = j;
  }
  const double norm = v.norm();
  if (norm > 0.0) {
    for (auto& e : v.entries) e.weight /= norm;
  }
  return v;
}

std::vector<SparseVector> TfIdfModel::transform_batch(
    std::span<const std::string> texts) const {
  std::vector<SparseVector> out;
  out.reserve(texts.size());
  for (const std::string& t : texts) out.push_back(transform(t));
  return out;
}

std::string escape_term(std::string_view term) {
  std::string out;
  out.reserve(term.size());
  for (char c : term) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_term(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '\\') {
      out += text[i];
      continue;
    }
    if (++i == text.size()) throw DataError("dangling escape in term");
    switch (text[i]) {
      case '\\': out += '\\'; break;
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default:
        throw DataError(std::string("unknown escape '\\") + text[i] + "' in term");
    }
  }
  return out;
}

void TfIdfModel::save(std::ostream& out) const {
  out << "tfidf v1 " << to_string(mode_) << ' '
      << format_ngram_range(word_.analyzer()) << ' '
      << format_ngram_range(char_.analyzer()) << ' ' << word_.n_documents() << ' '
      << char_.n_documents() << '\n';
  for (const auto& [block, vocab] : {std::pair{'w', &word_}, std::pair{'c', &char_}}) {
    for (std::size_t i = 0; i < vocab->size(); ++i) {
      out << block << '\t' << escape_term(vocab->terms()[i]) << '\t' << i << '\t'
          << vocab->document_frequency()[i] << '\n';
    }
  }
}

TfIdfModel TfIdfModel::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing tfidf header");
  auto header = split_whitespace(line);
  if (header.size() != 7 || header[0] != "tfidf" || header[1] != "v1") {
    throw ParseError(1, "expected 'tfidf v1 <mode> <word_ngrams> <char_ngrams> "
                        "<n_docs_word> <n_docs_char>'");
  }
  DocMode mode;
  Analyzer word, chars;
  try {
    mode = parse_doc_mode(header[2]);
    word = parse_ngram_range(Analyzer::Kind::kWord, header[3]);
    chars = parse_ngram_range(Analyzer::Kind::kChar, header[4]);
  } catch (const ConfigError& e) {
    throw ParseError(1, e.what());
  }
  const auto n_word = parse_count<std::uint32_t>(header[5], 1);
  const auto n_char = parse_count<std::uint32_t>(header[6], 1);

  std::vector<std::string> terms[2];
  std::vector<std::uint32_t> dfs[2];
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (std::size_t tab; (tab = rest.find('\t')) != rest.npos;) {
      fields.push_back(rest.substr(0, tab));
      rest.remove_prefix(tab + 1);
    }
    fields.push_back(rest);
    if (fields.size() != 4 || (fields[0] != "w" && fields[0] != "c")) {
      throw ParseError(line_no, "expected '<w|c>\\t<term>\\t<index>\\t<df>'");
    }
    const int block = fields[0] == "w" ? 0 : 1;
    const auto index = parse_count<std::size_t>(fields[2], line_no);
    if (index != terms[block].size()) {
      throw ParseError(line_no, "term index " + std::to_string(index) +
                                    " out of sequence");
    }
    try {
      terms[block].push_back(unescape_term(fields[1]));
    } catch (const DataError& e) {
      throw ParseError(line_no, e.what());
    }
    dfs[block].push_back(parse_count<std::uint32_t>(fields[3], line_no));
  }
  return TfIdfModel(
      Vocabulary::from_parts(word, std::move(terms[0]), std::move(dfs[0]), n_word),
      Vocabulary::from_parts(chars, std::move(terms[1]), std::move(dfs[1]), n_char),
      mode);
}

void TfIdfModel::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  save(out);
  if (!out) throw DataError("write to '" + path + "' failed");
}

TfIdfModel TfIdfModel::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  return load(in);
}

}  // namespace codemix::vectorize
