#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>

#include <fmt/format.h>

#include "codemix/cli.hpp"
#include "codemix/error.hpp"
#include "codemix/text.hpp"

#ifndef CODEMIX_DEFAULT_LEXICON
#define CODEMIX_DEFAULT_LEXICON "data/emoji_lexicon.tsv"
#endif

namespace codemix::cli {

namespace {

bool parse_bool(const std::string& key, const std::string& value) {
  const std::string v = ascii_lower(value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("'" + key + "' expects a boolean, got '" + value + "'");
}

template <typename Number>
Number parse_number(const std::string& key, const std::string& value) {
  Number out{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("'" + key + "' expects a number, got '" + value + "'");
  }
  return out;
}

struct KeySpec {
  std::string section;
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

KeySpec bool_key(std::string section, bool preprocess::PipelineConfig::*field) {
  return {std::move(section),
          [field](RunConfig& c, const std::string& k, const std::string& v) {
            c.pipeline.*field = parse_bool(k, v);
          },
          [field](const RunConfig& c) {
            return std::string(c.pipeline.*field ? "true" : "false");
          }};
}

KeySpec string_key(std::string section, std::string RunConfig::*field) {
  return {std::move(section),
          [field](RunConfig& c, const std::string&, const std::string& v) { c.*field = v; },
          [field](const RunConfig& c) { return c.*field; }};
}

const std::map<std::string, KeySpec>& key_table() {
  static const std::map<std::string, KeySpec> table = [] {
    using models::ModelKind;
    std::map<std::string, KeySpec> t;
    t["train"] = string_key("data", &RunConfig::train_path);
    t["dev"] = string_key("data", &RunConfig::dev_path);
    t["aux_csv"] = string_key("data", &RunConfig::aux_csv_path);
    t["lexicon"] = string_key("data", &RunConfig::lexicon_path);
    t["aux_label_column"] = {
        "data", [](RunConfig& c, const std::string&, const std::string& v) { c.aux_columns.label = v; },
        [](const RunConfig& c) { return c.aux_columns.label; }};
    t["aux_text_column"] = {
        "data", [](RunConfig& c, const std::string&, const std::string& v) { c.aux_columns.text = v; },
        [](const RunConfig& c) { return c.aux_columns.text; }};
    t["aux_lang"] = {"data",
                     [](RunConfig& c, const std::string& k, const std::string& v) {
                       auto tag = parse_lang_tag(v);
                       if (!tag || (*tag != LangTag::kLang1 && *tag != LangTag::kLang2)) {
                         throw ConfigError("'" + k + "' must be lang1 or lang2, got '" + v + "'");
                       }
                       c.aux_lang = *tag;
                     },
                     [](const RunConfig& c) { return std::string(to_string(c.aux_lang)); }};

    t["replace_emoji"] = bool_key("preprocess", &preprocess::PipelineConfig::replace_emoji);
    t["remove_mentions"] = bool_key("preprocess", &preprocess::PipelineConfig::remove_mentions);
    t["remove_non_ascii"] = bool_key("preprocess", &preprocess::PipelineConfig::remove_non_ascii);
    t["replace_urls"] = bool_key("preprocess", &preprocess::PipelineConfig::replace_urls);
    t["collapse_elongation"] =
        bool_key("preprocess", &preprocess::PipelineConfig::collapse_elongation);
    t["segment_hashtags"] = bool_key("preprocess", &preprocess::PipelineConfig::segment_hashtags);
    t["elongation_min_run"] = {
        "preprocess",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.pipeline.elongation_min_run = parse_number<int>(k, v);
          preprocess::validate(c.pipeline);
        },
        [](const RunConfig& c) { return std::to_string(c.pipeline.elongation_min_run); }};

    t["doc_mode"] = {"vectorize",
                     [](RunConfig& c, const std::string&, const std::string& v) {
                       c.doc_mode = vectorize::parse_doc_mode(v);
                     },
                     [](const RunConfig& c) { return std::string(vectorize::to_string(c.doc_mode)); }};
    t["word_ngrams"] = {"vectorize",
                        [](RunConfig& c, const std::string&, const std::string& v) {
                          c.word = vectorize::parse_ngram_range(vectorize::Analyzer::Kind::kWord, v);
                        },
                        [](const RunConfig& c) { return vectorize::format_ngram_range(c.word); }};
    t["char_ngrams"] = {"vectorize",
                        [](RunConfig& c, const std::string&, const std::string& v) {
                          c.chars = vectorize::parse_ngram_range(vectorize::Analyzer::Kind::kChar, v);
                        },
                        [](const RunConfig& c) { return vectorize::format_ngram_range(c.chars); }};

    t["model"] = {"model",
                  [](RunConfig& c, const std::string&, const std::string& v) {
                    c.train.kind = models::parse_model_kind(v);
                    if (!c.learning_rate_explicit) {
                      c.train.learning_rate =
                          models::TrainConfig::defaults(c.train.kind).learning_rate;
                    }
                  },
                  [](const RunConfig& c) { return std::string(models::to_string(c.train.kind)); }};
    t["l2_lambda"] = {"model",
                      [](RunConfig& c, const std::string& k, const std::string& v) {
                        c.train.l2_lambda = parse_number<double>(k, v);
                      },
                      [](const RunConfig& c) { return fmt::format("{}", c.train.l2_lambda); }};
    t["learning_rate"] = {"model",
                          [](RunConfig& c, const std::string& k, const std::string& v) {
                            c.train.learning_rate = parse_number<double>(k, v);
                            c.learning_rate_explicit = true;
                          },
                          [](const RunConfig& c) { return fmt::format("{}", c.train.learning_rate); }};
    t["epochs"] = {"model",
                   [](RunConfig& c, const std::string& k, const std::string& v) {
                     c.train.epochs = parse_number<int>(k, v);
                   },
                   [](const RunConfig& c) { return std::to_string(c.train.epochs); }};
    t["batch_size"] = {"model",
                       [](RunConfig& c, const std::string& k, const std::string& v) {
                         c.train.batch_size = parse_number<int>(k, v);
                       },
                       [](const RunConfig& c) { return std::to_string(c.train.batch_size); }};
    t["mnb_alpha"] = {"model",
                      [](RunConfig& c, const std::string& k, const std::string& v) {
                        c.train.mnb_alpha = parse_number<double>(k, v);
                      },
                      [](const RunConfig& c) { return fmt::format("{}", c.train.mnb_alpha); }};

    t["seed"] = {"run",
                 [](RunConfig& c, const std::string& k, const std::string& v) {
                   c.train.seed = parse_number<std::uint64_t>(k, v);
                 },
                 [](const RunConfig& c) { return std::to_string(c.train.seed); }};
    t["out"] = string_key("run", &RunConfig::out_dir);
    return t;
  }();
  return table;
}

const KeySpec& spec_for(const std::string& key) {
  auto it = key_table().find(key);
  if (it == key_table().end()) throw ConfigError("unknown config key '" + key + "'");
  return it->second;
}

}  // namespace

const std::vector<std::pair<std::string, std::vector<std::string>>>& config_sections() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> sections = {
      {"data",
       {"train", "dev", "aux_csv", "aux_label_column", "aux_text_column", "aux_lang", "lexicon"}},
      {"preprocess",
       {"replace_emoji", "remove_mentions", "remove_non_ascii", "replace_urls",
        "collapse_elongation", "segment_hashtags", "elongation_min_run"}},
      {"vectorize", {"doc_mode", "word_ngrams", "char_ngrams"}},
      {"model", {"model", "l2_lambda", "learning_rate", "epochs", "batch_size", "mnb_alpha"}},
      {"run", {"seed", "out"}},
  };
  return sections;
}

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  spec_for(key).set(cfg, key, value);
}

std::string get_config_value(const RunConfig& cfg, const std::string& key) {
  return spec_for(key).get(cfg);
}

std::vector<std::pair<std::string, std::string>> parse_config_text(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string section;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = normalize_whitespace(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(fmt::format("line {}: bad section header", line_no));
      section = normalize_whitespace(line.substr(1, line.size() - 2));
      auto known = std::find_if(config_sections().begin(), config_sections().end(),
                                [&](const auto& s) { return s.first == section; });
      if (known == config_sections().end()) {
        throw ConfigError(fmt::format("line {}: unknown section [{}]", line_no, section));
      }
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(fmt::format("line {}: expected 'key = value'", line_no));
    }
    std::string key = normalize_whitespace(line.substr(0, eq));
    std::string value = normalize_whitespace(line.substr(eq + 1));
    auto it = key_table().find(key);
    if (it == key_table().end()) {
      throw ConfigError(fmt::format("line {}: unknown key '{}'", line_no, key));
    }
    if (it->second.section != section) {
      throw ConfigError(fmt::format("line {}: key '{}' belongs in [{}]", line_no, key,
                                    it->second.section));
    }
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

std::string render_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& [section, keys] : config_sections()) {
    if (!out.empty()) out += '\n';
    out += "[" + section + "]\n";
    for (const std::string& key : keys) {
      const std::string value = get_config_value(cfg, key);
      out += key + (value.empty() ? " =\n" : " = " + value + "\n");
    }
  }
  return out;
}

std::string default_lexicon_path() { return CODEMIX_DEFAULT_LEXICON; }

RunConfig load_config_file(const std::string& path) {
  RunConfig cfg;
  cfg.lexicon_path = default_lexicon_path();
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    for (const auto& [key, value] : parse_config_text(in)) set_config_value(cfg, key, value);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return cfg;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", hash);
}

}  // namespace codemix::cli
