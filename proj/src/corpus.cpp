#include "codemix/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <unordered_set>

#include "codemix/csv.hpp"
#include "codemix/error.hpp"
#include "codemix/text.hpp"

namespace codemix {

namespace {

constexpr std::array<std::string_view, kNumClasses> kSentimentNames = {
    "negative", "neutral", "positive"};

constexpr std::array<std::string_view, kNumLangTags> kLangTagNames = {
    "lang1", "lang2", "other", "ne", "unk", "ambiguous", "mixed", "fw"};

std::string stem_of(const std::string& path) {
  auto slash = path.find_last_of('/');
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  auto dot = base.find_last_of('.');
  return dot == std::string::npos || dot == 0 ? base : base.substr(0, dot);
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  return in;
}

class BlockParser {
 public:
  explicit BlockParser(std::string name) { out_.name = std::move(name); }

  void feed(std::string_view line) {
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line.empty()) {
      if (current_) {
        finish_block();
      } else {
        ++pending_blanks_;
      }
      return;
    }
    if (!current_) {
      // Exactly one blank line between blocks, none before the first.
      if (pending_blanks_ > 0) throw ParseError(line_no_ - 1, "empty block");
      start_block(line);
      return;
    }
    add_token(line);
  }

  Dataset finish() {
    if (current_) finish_block();
    return std::move(out_);
  }

 private:
  void start_block(std::string_view line) {
    auto fields = split_whitespace(line);
    if (fields.empty() || fields[0] != "meta" || fields.size() < 2 ||
        fields.size() > 3) {
      throw ParseError(line_no_, "malformed meta line '" + std::string(line) +
                                     "' (expected 'meta <id> [<sentiment>]')");
    }
    Tweet t;
    t.id = std::string(fields[1]);
    if (fields.size() == 3) {
      t.sentiment = parse_sentiment(fields[2]);
      if (!t.sentiment) {
        throw ParseError(line_no_,
                         "unknown sentiment '" + std::string(fields[2]) + "'");
      }
    }
    if (!seen_ids_.insert(t.id).second) {
      throw ParseError(line_no_, "duplicate tweet id '" + t.id + "'");
    }
    current_ = std::move(t);
    meta_line_ = line_no_;
  }

  void add_token(std::string_view line) {
    auto tab = line.find('\t');
    if (tab == std::string_view::npos || line.find('\t', tab + 1) != line.npos) {
      throw ParseError(line_no_, "expected '<token>\\t<lang_tag>', got '" +
                                     std::string(line) + "'");
    }
    auto text = line.substr(0, tab);
    auto tag_text = line.substr(tab + 1);
    if (text.empty()) throw ParseError(line_no_, "empty token");
    auto tag = parse_lang_tag(tag_text);
    if (!tag) {
      throw ParseError(line_no_,
                       "unknown language tag '" + std::string(tag_text) + "'");
    }
    current_->tokens.push_back(Token{std::string(text), *tag});
  }

  void finish_block() {
    if (current_->tokens.empty()) {
      throw ParseError(meta_line_, "empty block for tweet '" + current_->id + "'");
    }
    out_.tweets.push_back(std::move(*current_));
    current_.reset();
    pending_blanks_ = 0;
  }

  Dataset out_;
  std::optional<Tweet> current_;
  std::unordered_set<std::string> seen_ids_;
  std::size_t line_no_ = 0;
  std::size_t meta_line_ = 0;
  std::size_t pending_blanks_ = 0;
};

}  // namespace

std::string_view to_string(Sentiment s) { return kSentimentNames[ordinal(s)]; }

std::optional<Sentiment> parse_sentiment(std::string_view text) {
  std::string lowered = ascii_lower(text);
  for (Sentiment s : kAllSentiments) {
    if (lowered == to_string(s)) return s;
  }
  return std::nullopt;
}

std::string_view to_string(LangTag tag) {
  return kLangTagNames[static_cast<std::size_t>(tag)];
}

std::optional<LangTag> parse_lang_tag(std::string_view text) {
  for (std::size_t i = 0; i < kNumLangTags; ++i) {
    if (kLangTagNames[i] == text) return static_cast<LangTag>(i);
  }
  return std::nullopt;
}

std::string Tweet::text() const {
  std::string out;
  for (const Token& tok : tokens) {
    if (!out.empty()) out += ' ';
    out += tok.text;
  }
  return out;
}

Dataset parse_conll(std::istream& in, std::string name) {
  BlockParser parser(std::move(name));
  std::string line;
  while (std::getline(in, line)) parser.feed(line);
  return parser.finish();
}

Dataset parse_conll_file(const std::string& path, std::string name) {
  auto in = open_or_throw(path);
  return parse_conll(in, name.empty() ? stem_of(path) : std::move(name));
}

std::string serialize_conll(const Dataset& d) {
  std::string out;
  for (std::size_t i = 0; i < d.tweets.size(); ++i) {
    const Tweet& t = d.tweets[i];
    if (i > 0) out += '\n';
    out += "meta ";
    out += t.id;
    if (t.sentiment) {
      out += ' ';
      out += to_string(*t.sentiment);
    }
    out += '\n';
    for (const Token& tok : t.tokens) {
      out += tok.text;
      out += '\t';
      out += to_string(tok.lang);
      out += '\n';
    }
  }
  return out;
}

Dataset parse_monolingual_csv(std::istream& in, const CsvColumns& columns,
                              std::string name, LangTag lang) {
  csv::Reader reader(in);
  auto header = reader.next();
  if (!header) throw ConfigError("CSV input has no header row");

  auto column_index = [&](const std::string& col) {
    auto it = std::find(header->begin(), header->end(), col);
    if (it == header->end()) {
      throw ConfigError("CSV header has no column named '" + col + "'");
    }
    return static_cast<std::size_t>(it - header->begin());
  };
  const std::size_t label_col = column_index(columns.label);
  const std::size_t text_col = column_index(columns.text);
  const std::size_t needed = std::max(label_col, text_col) + 1;

  Dataset out;
  out.name = std::move(name);
  std::size_t row = 0;
  while (auto record = reader.next()) {
    if (record->size() == 1 && record->front().empty()) continue;  // blank line
    if (record->size() < needed) {
      throw ParseError(row, "expected at least " + std::to_string(needed) +
                                " fields, got " + std::to_string(record->size()),
                       "row");
    }
    Tweet t;
    t.id = std::to_string(row);
    t.sentiment = parse_sentiment((*record)[label_col]);
    if (!t.sentiment) {
      throw ParseError(row, "unknown sentiment '" + (*record)[label_col] + "'",
                       "row");
    }
    for (auto word : split_whitespace((*record)[text_col])) {
      t.tokens.push_back(Token{std::string(word), lang});
    }
    if (t.tokens.empty()) throw ParseError(row, "empty text", "row");
    out.tweets.push_back(std::move(t));
    ++row;
  }
  return out;
}

Dataset parse_monolingual_csv_file(const std::string& path,
                                   const CsvColumns& columns, std::string name,
                                   LangTag lang) {
  auto in = open_or_throw(path);
  return parse_monolingual_csv(in, columns,
                               name.empty() ? stem_of(path) : std::move(name),
                               lang);
}

ClassDistribution class_distribution(const Dataset& d) {
  ClassDistribution dist;
  for (const Tweet& t : d.tweets) {
    if (!t.sentiment) {
      throw DataError("tweet '" + t.id + "' in '" + d.name + "' has no label");
    }
    ++dist.counts[ordinal(*t.sentiment)];
    ++dist.total;
  }
  return dist;
}

Dataset concat_datasets(const Dataset& a, const Dataset& b) {
  Dataset out;
  out.name = a.name + "+" + b.name;
  out.tweets.reserve(a.size() + b.size());
  // Same-named sources would still collide, so the second one is marked.
  const std::string prefix_a = a.name + ":";
  const std::string prefix_b = (a.name == b.name ? b.name + "'" : b.name) + ":";
  for (const auto& [src, prefix] : {std::pair{&a, &prefix_a}, std::pair{&b, &prefix_b}}) {
    for (Tweet t : src->tweets) {
      t.id = *prefix + t.id;
      out.tweets.push_back(std::move(t));
    }
  }
  return out;
}

}  // namespace codemix
