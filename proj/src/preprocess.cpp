#include "codemix/preprocess.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <regex>

#include "codemix/error.hpp"
#include "codemix/text.hpp"

namespace codemix::preprocess {

namespace {

bool all_ascii(std::string_view s) {
  return std::none_of(s.begin(), s.end(), is_non_ascii);
}

template <typename TokenFn>
std::string map_tokens(std::string_view text, TokenFn&& fn) {
  std::string out;
  out.reserve(text.size());
  for (auto token : split_whitespace(text)) {
    std::string mapped = fn(token);
    if (mapped.empty()) continue;
    if (!out.empty()) out += ' ';
    out += mapped;
  }
  return out;
}

}  // namespace

EmojiLexicon EmojiLexicon::parse(std::istream& in) {
  EmojiLexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(line_no, "expected '<key>\\t<name>'");
    }
    try {
      lex.add(line.substr(0, tab), line.substr(tab + 1));
    } catch (const DataError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return lex;
}

EmojiLexicon EmojiLexicon::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open emoji lexicon '" + path + "'");
  return parse(in);
}

void EmojiLexicon::add(std::string key, std::string name) {
  name = normalize_whitespace(name);
  if (key.empty()) throw DataError("empty lexicon key");
  if (name.empty()) throw DataError("empty name for lexicon key '" + key + "'");
  auto [it, inserted] = entries_.try_emplace(key, name);
  if (!inserted && it->second != name) {
    throw DataError("lexicon key '" + key + "' maps to both '" + it->second +
                    "' and '" + name + "'");
  }
  max_key_length_ = std::max(max_key_length_, key.size());
}

void validate(const PipelineConfig& cfg) {
  if (cfg.elongation_min_run < 2) {
    throw ConfigError("elongation_min_run must be >= 2, got " +
                      std::to_string(cfg.elongation_min_run));
  }
}

std::string replace_emoji(std::string_view text, const EmojiLexicon& lex) {
  const std::string s = normalize_whitespace(text);
  const auto& entries = lex.entries();
  const std::size_t n = s.size();

  std::string out;
  out.reserve(n + n / 2);
  std::size_t last_match_end = 0;
  std::size_t i = 0;
  while (i < n) {
    const bool at_boundary = i == 0 || is_ascii_space(s[i - 1]) || i == last_match_end;
    std::size_t match_len = 0;
    const std::string* name = nullptr;
    for (std::size_t len = std::min(lex.max_key_length(), n - i); len > 0; --len) {
      std::string_view key(s.data() + i, len);
      auto it = entries.find(key);
      if (it == entries.end()) continue;
      if (all_ascii(key)) {
        const bool closed = i + len == n || !is_ascii_alnum(s[i + len]);
        if (!at_boundary || !closed) continue;
      }
      match_len = len;
      name = &it->second;
      break;
    }
    if (name != nullptr) {
      out += ' ';
      out += *name;
      out += ' ';
      i += match_len;
      last_match_end = i;
    } else {
      out += s[i++];
    }
  }
  return normalize_whitespace(out);
}

std::string remove_mentions(std::string_view text) {
  return map_tokens(text, [](std::string_view tok) {
    return tok.front() == '@' ? std::string() : std::string(tok);
  });
}

std::string remove_non_ascii(std::string_view text) {
  std::string kept;
  kept.reserve(text.size());
  std::copy_if(text.begin(), text.end(), std::back_inserter(kept),
               [](char c) { return !is_non_ascii(c); });
  return normalize_whitespace(kept);
}

bool is_url(std::string_view token) {
  static const std::regex kScheme(R"(^[a-z][a-z0-9+.\-]*://.+$)",
                                  std::regex::icase | std::regex::optimize);
  static const std::regex kWww(R"(^www\..+$)",
                               std::regex::icase | std::regex::optimize);
  static const std::regex kBareDomain(
      R"(^[a-z0-9\-]+(\.[a-z0-9\-]+)*\.(com|org|net|edu|gov|io|co|es|mx|uk)([/?].*)?$)",
      std::regex::icase | std::regex::optimize);
  return std::regex_match(token.begin(), token.end(), kScheme) ||
         std::regex_match(token.begin(), token.end(), kWww) ||
         std::regex_match(token.begin(), token.end(), kBareDomain);
}

std::string replace_urls(std::string_view text) {
  return map_tokens(text, [](std::string_view tok) {
    return is_url(tok) ? std::string("URL") : std::string(tok);
  });
}

std::string collapse_elongation(std::string_view text, int min_run) {
  const std::size_t threshold = static_cast<std::size_t>(std::max(min_run, 2));
  const std::string s = normalize_whitespace(text);
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = i + 1;
    if (is_ascii_alpha(s[i])) {
      const char folded = to_ascii_lower(s[i]);
      while (j < s.size() && to_ascii_lower(s[j]) == folded) ++j;
    }
    if (j - i >= threshold) {
      out += s[i];
    } else {
      out.append(s, i, j - i);
    }
    i = j;
  }
  return out;
}

std::string segment_hashtags(std::string_view text) {
  return map_tokens(text, [](std::string_view tok) {
    if (tok.front() != '#') return std::string(tok);
    tok.remove_prefix(std::min(tok.find_first_not_of('#'), tok.size()));

    std::string out;
    bool piece_open = false;
    char prev = '\0';
    for (char c : tok) {
      if (c == '_' || c == '#') {
        piece_open = false;
        prev = '\0';
        continue;
      }
      const bool boundary =
          (is_ascii_lower(prev) && is_ascii_upper(c)) ||
          (is_ascii_alpha(prev) && is_ascii_digit(c)) ||
          (is_ascii_digit(prev) && is_ascii_alpha(c));
      if (piece_open && boundary) piece_open = false;
      if (!piece_open && !out.empty()) out += ' ';
      out += c;
      piece_open = true;
      prev = c;
    }
    return out;
  });
}

std::string run_pipeline(std::string_view text, const PipelineConfig& cfg,
                         const EmojiLexicon& lex) {
  // A later rule can expose input for an earlier one ("#@x" -> "@x",
  // "é:)" -> ":)"), so the sequence is applied until it reaches a fixed point.
  constexpr int kMaxPasses = 16;
  std::string current = normalize_whitespace(text);
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    std::string s = current;
    if (cfg.replace_emoji) s = replace_emoji(s, lex);
    if (cfg.remove_mentions) s = remove_mentions(s);
    if (cfg.replace_urls) s = replace_urls(s);
    if (cfg.collapse_elongation) s = collapse_elongation(s, cfg.elongation_min_run);
    if (cfg.segment_hashtags) s = segment_hashtags(s);
    if (cfg.remove_non_ascii) s = remove_non_ascii(s);
    if (s == current) break;
    current = std::move(s);
  }
  return current;
}

}  // namespace codemix::preprocess
