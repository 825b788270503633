#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace codemix {

// Ordinals follow the class order used everywhere else (confusion matrices,
// model rows, tie-breaking): Negative < Neutral < Positive.
enum class Sentiment { kNegative = 0, kNeutral = 1, kPositive = 2 };

inline constexpr std::size_t kNumClasses = 3;
inline constexpr std::array<Sentiment, kNumClasses> kAllSentiments = {
    Sentiment::kNegative, Sentiment::kNeutral, Sentiment::kPositive};

constexpr std::size_t ordinal(Sentiment s) { return static_cast<std::size_t>(s); }

/// Lowercase name: "negative", "neutral" or "positive".
std::string_view to_string(Sentiment s);
/// Case-insensitive. Returns nullopt for anything else.
std::optional<Sentiment> parse_sentiment(std::string_view text);

// Word-level language annotation. Lang1 is English, Lang2 is Spanish.
enum class LangTag { kLang1, kLang2, kOther, kNe, kUnk, kAmbiguous, kMixed, kFw };

inline constexpr std::size_t kNumLangTags = 8;

std::string_view to_string(LangTag tag);
/// Exact lowercase match only.
std::optional<LangTag> parse_lang_tag(std::string_view text);

struct Token {
  std::string text;
  LangTag lang = LangTag::kLang1;

  bool operator==(const Token&) const = default;
};

struct Tweet {
  std::string id;
  std::vector<Token> tokens;
  std::optional<Sentiment> sentiment;

  /// Tokens joined by single spaces.
  std::string text() const;

  bool operator==(const Tweet&) const = default;
};

struct Dataset {
  std::string name;
  std::vector<Tweet> tweets;

  std::size_t size() const { return tweets.size(); }
  bool empty() const { return tweets.empty(); }

  bool operator==(const Dataset&) const = default;
};

struct ClassDistribution {
  std::array<std::size_t, kNumClasses> counts{};
  std::size_t total = 0;

  std::size_t operator[](Sentiment s) const { return counts[ordinal(s)]; }
  bool operator==(const ClassDistribution&) const = default;
};

/// Reads the tweet block format:
///
///   meta <id> [<sentiment>]
///   <token>\t<lang_tag>
///   ...
///   <blank line>
///
/// The meta line fields may be separated by spaces or tabs. Throws
/// ParseError (with a 1-based line number) on malformed meta lines, unknown
/// language tags, empty blocks and duplicate ids.
Dataset parse_conll(std::istream& in, std::string name = "data");
Dataset parse_conll_file(const std::string& path, std::string name = "");

/// Writes `d` in the block format read by parse_conll.
std::string serialize_conll(const Dataset& d);

struct CsvColumns {
  std::string label = "label";
  std::string text = "text";
};

/// Monolingual auxiliary data: one tweet per CSV row, text whitespace
/// tokenized and every token tagged `lang`. Ids are the 0-based data-row
/// indices. A missing column is a ConfigError; a bad row is a ParseError
/// carrying the row index.
Dataset parse_monolingual_csv(std::istream& in, const CsvColumns& columns,
                              std::string name = "aux",
                              LangTag lang = LangTag::kLang1);
Dataset parse_monolingual_csv_file(const std::string& path,
                                   const CsvColumns& columns,
                                   std::string name = "",
                                   LangTag lang = LangTag::kLang1);

/// Throws DataError naming the first unlabeled tweet.
ClassDistribution class_distribution(const Dataset& d);

/// `a` followed by `b`. Ids are prefixed with "<dataset name>:" so the two
/// sources cannot collide.
Dataset concat_datasets(const Dataset& a, const Dataset& b);

}  // namespace codemix
