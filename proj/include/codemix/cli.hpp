#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "codemix/corpus.hpp"
#include "codemix/eval.hpp"
#include "codemix/models.hpp"
#include "codemix/preprocess.hpp"
#include "codemix/vectorize.hpp"

namespace codemix::cli {

/// Everything a train / grid / preprocess run depends on.
struct RunConfig {
  // [data]
  std::string train_path;
  std::string dev_path;
  std::string aux_csv_path;
  CsvColumns aux_columns;
  LangTag aux_lang = LangTag::kLang1;
  std::string lexicon_path;
  // [preprocess]
  preprocess::PipelineConfig pipeline;
  // [vectorize]
  vectorize::DocMode doc_mode = vectorize::DocMode::kPerClassConcatenated;
  vectorize::Analyzer word = vectorize::Analyzer::word();
  vectorize::Analyzer chars = vectorize::Analyzer::chars();
  // [model]
  models::TrainConfig train = models::TrainConfig::defaults(models::ModelKind::kSvm);
  // Once set, changing `model` no longer resets the per-model learning rate.
  bool learning_rate_explicit = false;
  // [run]
  std::string out_dir = "model";
};

/// Config keys, grouped by section, in canonical order.
const std::vector<std::pair<std::string, std::vector<std::string>>>& config_sections();

/// Applies `key = value` to `cfg`. Throws ConfigError for unknown keys or
/// bad values.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);
std::string get_config_value(const RunConfig& cfg, const std::string& key);

/// Flat `key = value` file with `[section]` headers. '#' and ';' start
/// comment lines. Every key must appear under its own section. Returns
/// the key/value pairs in file order.
std::vector<std::pair<std::string, std::string>> parse_config_text(std::istream& in);

/// Canonical config text: every key under its section, sorted as in
/// config_sections(). Reading it back reproduces `cfg`.
std::string render_config(const RunConfig& cfg);

/// Emoji lexicon shipped with the sources.
std::string default_lexicon_path();

/// Loads `path` (if non-empty) over the defaults.
RunConfig load_config_file(const std::string& path);

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(const std::string& text);

/// Fitted artifacts of one train run.
struct TrainedSystem {
  vectorize::TfIdfModel vectorizer;
  models::Classifier classifier;
};

/// Preprocesses every tweet of `d`.
std::vector<std::string> preprocess_dataset(const Dataset& d,
                                            const preprocess::PipelineConfig& cfg,
                                            const preprocess::EmojiLexicon& lex);

/// Fits the vectorizer on `texts` (prepared per cfg.doc_mode) and the
/// classifier on the per-tweet vectors. `texts[i]` is the preprocessed text
/// of `train.tweets[i]`.
TrainedSystem train_system(const Dataset& train, const std::vector<std::string>& texts,
                           const RunConfig& cfg);

std::vector<Sentiment> predict_all(const TrainedSystem& system,
                                   const std::vector<std::string>& texts);

/// Gold labels of a fully labeled dataset; throws DataError otherwise.
std::vector<Sentiment> gold_labels(const Dataset& d);

/// Entry point shared by the `codemix` binary and the tests. `args` excludes
/// the program name. Returns the process exit code: 0 success, 2 config
/// error, 3 data error, 4 numeric failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace codemix::cli
