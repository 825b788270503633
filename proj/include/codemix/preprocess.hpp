#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

// Tweet normalization. Every rule is a pure function returning
// whitespace-normalized text (single spaces, no leading/trailing space).
namespace codemix::preprocess {

/// Maps emoji codepoint sequences and ASCII emoticons to a textual name.
///
/// Keys made only of ASCII bytes (emoticons such as ":)" or "<3") match only
/// at token boundaries: they must start at the beginning of the text, after
/// whitespace or right after another match, and must not be followed by an
/// ASCII letter or digit. Keys containing non-ASCII bytes match anywhere.
class EmojiLexicon {
 public:
  EmojiLexicon() = default;

  /// `key<TAB>name` lines; '#'-prefixed lines and blank lines are skipped.
  /// Throws ParseError on a malformed line, an empty key or name, or a key
  /// repeated with a different name.
  static EmojiLexicon parse(std::istream& in);
  static EmojiLexicon load(const std::string& path);

  /// Same validation as parse. Repeating an identical entry is a no-op.
  void add(std::string key, std::string name);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t max_key_length() const { return max_key_length_; }
  const std::map<std::string, std::string, std::less<>>& entries() const {
    return entries_;
  }

 private:
  std::map<std::string, std::string, std::less<>> entries_;
  std::size_t max_key_length_ = 0;
};

struct PipelineConfig {
  bool replace_emoji = true;
  bool remove_mentions = true;
  bool remove_non_ascii = true;
  bool replace_urls = true;
  bool collapse_elongation = true;
  bool segment_hashtags = true;
  int elongation_min_run = 3;

  static PipelineConfig identity() {
    return {false, false, false, false, false, false, 3};
  }

  bool operator==(const PipelineConfig&) const = default;
};

/// Throws ConfigError when elongation_min_run < 2.
void validate(const PipelineConfig& cfg);

/// Longest-match-first replacement of lexicon entries by their names.
std::string replace_emoji(std::string_view text, const EmojiLexicon& lex);

/// Drops every whitespace-delimited token that starts with '@'.
std::string remove_mentions(std::string_view text);

/// Deletes every byte >= 0x80, i.e. every non-ASCII codepoint of valid UTF-8.
std::string remove_non_ascii(std::string_view text);

/// Grammar: scheme "://" rest | "www." rest | label ("." label)* "." tld
/// [("/" | "?") rest], labels [A-Za-z0-9-]+, tld one of a fixed list of ten.
bool is_url(std::string_view token);

/// Replaces URL-shaped tokens (see is_url) with the token "URL".
std::string replace_urls(std::string_view text);

/// Reduces every run of at least `min_run` copies of the same letter
/// (case-insensitively) to its first character. Digits and punctuation are
/// never collapsed.
std::string collapse_elongation(std::string_view text, int min_run = 3);

/// "#HereWeGoAgain" -> "Here We Go Again". Leading '#'s are dropped and the
/// body is split at lower->upper case changes, letter<->digit changes, '_'
/// and '#'.
std::string segment_hashtags(std::string_view text);

/// Enabled rules in the order emoji, mentions, URLs, elongation, hashtags,
/// non-ASCII, repeated until the output stops changing.
std::string run_pipeline(std::string_view text, const PipelineConfig& cfg,
                         const EmojiLexicon& lex);

}  // namespace codemix::preprocess
