#include <atomic>
#include <deque>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "codemix/cli.hpp"
#include "codemix/error.hpp"

namespace codemix::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kVectorizerFile = "vectorizer.tfidf";
constexpr const char* kModelFile = "model.txt";
constexpr const char* kConfigFile = "config.ini";
constexpr const char* kManifestFile = "manifest.txt";

// Re-raises a library error with `where` prepended, keeping its kind.
template <typename Fn>
auto with_context(const std::string& where, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.kind(), where + ": " + e.what());
  }
}

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw ConfigError(std::string("no ") + what + " path given");
  if (!fs::is_regular_file(path)) {
    throw ConfigError(std::string(what) + " path '" + path + "' does not exist");
  }
}

preprocess::EmojiLexicon load_lexicon(const RunConfig& cfg) {
  const std::string path = cfg.lexicon_path.empty() ? default_lexicon_path() : cfg.lexicon_path;
  require_file(path, "lexicon");
  return with_context(path, [&] { return preprocess::EmojiLexicon::load(path); });
}

Dataset load_conll(const std::string& path, const char* what, const std::string& name) {
  require_file(path, what);
  return with_context(path, [&] { return parse_conll_file(path, name); });
}

struct TrainingSet {
  Dataset data;
  std::size_t task_size = 0;
  std::size_t aux_size = 0;
};

TrainingSet load_training_set(const RunConfig& cfg) {
  TrainingSet set;
  set.data = load_conll(cfg.train_path, "train", "train");
  set.task_size = set.data.size();
  if (!cfg.aux_csv_path.empty()) {
    require_file(cfg.aux_csv_path, "aux_csv");
    Dataset aux = with_context(cfg.aux_csv_path, [&] {
      return parse_monolingual_csv_file(cfg.aux_csv_path, cfg.aux_columns, "aux", cfg.aux_lang);
    });
    set.aux_size = aux.size();
    set.data = concat_datasets(set.data, aux);
  }
  return set;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw DataError("write to '" + path.string() + "' failed");
}

struct LoadedSystem {
  RunConfig cfg;
  TrainedSystem system;
  preprocess::EmojiLexicon lexicon;
};

LoadedSystem load_system(const std::string& dir) {
  if (dir.empty()) throw ConfigError("no model directory given");
  if (!fs::is_directory(dir)) throw ConfigError("model directory '" + dir + "' does not exist");
  LoadedSystem loaded;
  const fs::path root(dir);
  loaded.cfg = load_config_file((root / kConfigFile).string());
  const std::string vec_path = (root / kVectorizerFile).string();
  const std::string model_path = (root / kModelFile).string();
  loaded.system.vectorizer =
      with_context(vec_path, [&] { return vectorize::TfIdfModel::load_file(vec_path); });
  loaded.system.classifier =
      with_context(model_path, [&] { return models::Classifier::load_file(model_path); });
  if (loaded.system.vectorizer.dimension() != loaded.system.classifier.dimension()) {
    throw DataError(fmt::format("dimension mismatch: vectorizer has {} features, model has {}",
                                loaded.system.vectorizer.dimension(),
                                loaded.system.classifier.dimension()));
  }
  loaded.lexicon = load_lexicon(loaded.cfg);
  return loaded;
}

std::string manifest_text(const RunConfig& cfg, const TrainingSet& set,
                          const TrainedSystem& system) {
  const std::string config = render_config(cfg);
  const ClassDistribution dist = class_distribution(set.data);
  std::string out = "codemix manifest v1\n";
  out += "config_hash=" + fnv1a_hex(config) + "\n";
  out += fmt::format("seed={}\n", cfg.train.seed);
  out += fmt::format("model={}\n", models::to_string(cfg.train.kind));
  out += fmt::format("doc_mode={}\n", vectorize::to_string(cfg.doc_mode));
  out += fmt::format("train_size={}\n", set.task_size);
  out += fmt::format("aux_size={}\n", set.aux_size);
  for (Sentiment s : kAllSentiments) {
    out += fmt::format("class_{}={}\n", to_string(s), dist[s]);
  }
  out += fmt::format("word_features={}\n", system.vectorizer.word_vocab().size());
  out += fmt::format("char_features={}\n", system.vectorizer.char_vocab().size());
  out += fmt::format("dimension={}\n", system.vectorizer.dimension());
  return out;
}

int cmd_train(const RunConfig& cfg, std::ostream& out) {
  const auto lex = load_lexicon(cfg);
  const TrainingSet set = load_training_set(cfg);
  const auto texts = preprocess_dataset(set.data, cfg.pipeline, lex);
  const TrainedSystem system = train_system(set.data, texts, cfg);

  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create '" + cfg.out_dir + "': " + ec.message());
  system.vectorizer.save_file((dir / kVectorizerFile).string());
  system.classifier.save_file((dir / kModelFile).string());
  write_text(dir / kConfigFile, render_config(cfg));
  const std::string manifest = manifest_text(cfg, set, system);
  write_text(dir / kManifestFile, manifest);

  out << "wrote " << (dir / kModelFile).string() << ", " << (dir / kVectorizerFile).string()
      << "\n"
      << manifest;
  return 0;
}

int cmd_eval(const std::string& model_dir, const std::string& data_path, std::ostream& out) {
  const LoadedSystem loaded = load_system(model_dir);
  const Dataset data = load_conll(data_path, "data", "eval");
  const auto gold = gold_labels(data);
  const auto texts = preprocess_dataset(data, loaded.cfg.pipeline, loaded.lexicon);
  const auto pred = predict_all(loaded.system, texts);
  const eval::EvalReport report = eval::score(gold, pred);
  out << eval::format_human(report) << '\n' << eval::format_machine(report);
  return 0;
}

int cmd_predict(const std::string& model_dir, const std::string& data_path,
                const std::string& out_path, std::ostream& out) {
  const LoadedSystem loaded = load_system(model_dir);
  const Dataset data = load_conll(data_path, "data", "test");
  const auto texts = preprocess_dataset(data, loaded.cfg.pipeline, loaded.lexicon);
  const auto pred = predict_all(loaded.system, texts);
  std::string lines;
  for (std::size_t i = 0; i < data.size(); ++i) {
    lines += data.tweets[i].id + "\t" + std::string(to_string(pred[i])) + "\n";
  }
  if (out_path.empty() || out_path == "-") {
    out << lines;
  } else {
    write_text(out_path, lines);
  }
  return 0;
}

int cmd_preprocess(const RunConfig& cfg, const std::string& data_path,
                   const std::string& format, const std::string& out_path, std::ostream& out) {
  const auto lex = load_lexicon(cfg);
  std::vector<std::string> inputs;
  if (format == "conll") {
    const Dataset data = load_conll(data_path, "data", "input");
    for (const Tweet& t : data.tweets) inputs.push_back(t.text());
  } else {
    require_file(data_path, "data");
    std::ifstream in(data_path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + data_path + "'");
    for (std::string line; std::getline(in, line);) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      inputs.push_back(std::move(line));
    }
  }
  std::string lines;
  for (const std::string& text : inputs) {
    lines += preprocess::run_pipeline(text, cfg.pipeline, lex) + "\n";
  }
  if (out_path.empty() || out_path == "-") {
    out << lines;
  } else {
    write_text(out_path, lines);
  }
  return 0;
}

struct GridCell {
  models::ModelKind kind;
  vectorize::DocMode mode;
  double macro_f1 = 0.0;
  std::exception_ptr error;
};

int cmd_grid(const RunConfig& cfg, int jobs, bool csv, std::ostream& out) {
  const auto lex = load_lexicon(cfg);
  const TrainingSet set = load_training_set(cfg);
  const Dataset dev = load_conll(cfg.dev_path, "dev", "dev");
  const auto gold = gold_labels(dev);
  const auto train_texts = preprocess_dataset(set.data, cfg.pipeline, lex);
  const auto dev_texts = preprocess_dataset(dev, cfg.pipeline, lex);

  std::vector<GridCell> cells;
  for (auto kind : {models::ModelKind::kLogisticRegression, models::ModelKind::kNaiveBayes,
                    models::ModelKind::kSvm}) {
    for (auto mode : {vectorize::DocMode::kPerClassConcatenated, vectorize::DocMode::kAllDocuments}) {
      cells.push_back(GridCell{kind, mode, 0.0, nullptr});
    }
  }

  auto run_cell = [&](GridCell& cell) {
    try {
      RunConfig cell_cfg = cfg;
      set_config_value(cell_cfg, "model", std::string(models::to_string(cell.kind)));
      cell_cfg.doc_mode = cell.mode;
      const TrainedSystem system = train_system(set.data, train_texts, cell_cfg);
      cell.macro_f1 = eval::score(gold, predict_all(system, dev_texts)).macro_f1;
    } catch (...) {
      cell.error = std::current_exception();
    }
  };

  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (jobs == 1) {
    for (GridCell& cell : cells) run_cell(cell);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (int w = 0; w < std::min<int>(jobs, static_cast<int>(cells.size())); ++w) {
      workers.emplace_back([&] {
        for (std::size_t i; (i = next++) < cells.size();) run_cell(cells[i]);
      });
    }
    for (auto& t : workers) t.join();
  }
  for (const GridCell& cell : cells) {
    if (cell.error) std::rethrow_exception(cell.error);
  }

  std::vector<eval::GridRow> rows;
  const GridCell* best = &cells.front();
  for (const GridCell& cell : cells) {
    rows.push_back({std::string(models::display_name(cell.kind)),
                    std::string(vectorize::label(cell.mode)), cell.macro_f1});
    if (cell.macro_f1 > best->macro_f1) best = &cell;
  }
  out << eval::comparison_grid(rows, csv) << '\n';
  for (const GridCell& cell : cells) {
    out << fmt::format("grid.{}.{}.macro_f1={:.6f}\n", models::to_string(cell.kind),
                       vectorize::to_string(cell.mode), cell.macro_f1);
  }
  out << fmt::format("grid.best={}.{}\n", models::to_string(best->kind),
                     vectorize::to_string(best->mode));
  return 0;
}

// --key options for every config key, applied over the config file.
class ConfigFlags {
 public:
  void attach(CLI::App* app) {
    app->add_option("--config", config_path_, "Config file (flat key = value, [sections])");
    for (const auto& [section, keys] : config_sections()) {
      for (const std::string& key : keys) {
        auto& slot = values_.emplace_back(key, std::string());
        options_.push_back(
            app->add_option("--" + key, slot.second, "[" + section + "] " + key));
      }
    }
  }

  RunConfig resolve() const {
    RunConfig cfg = load_config_file(config_path_);
    if (const char* env = std::getenv("CODEMIX_SEED"); env != nullptr && *env != '\0') {
      try {
        set_config_value(cfg, "seed", env);
      } catch (const ConfigError& e) {
        throw ConfigError(std::string("CODEMIX_SEED: ") + e.what());
      }
    }
    for (std::size_t i = 0; i < options_.size(); ++i) {
      if (options_[i]->count() > 0) set_config_value(cfg, values_[i].first, values_[i].second);
    }
    cfg.train.validate();
    preprocess::validate(cfg.pipeline);
    return cfg;
  }

 private:
  std::string config_path_;
  std::deque<std::pair<std::string, std::string>> values_;  // stable addresses
  std::vector<CLI::Option*> options_;
};

}  // namespace

std::vector<std::string> preprocess_dataset(const Dataset& d,
                                            const preprocess::PipelineConfig& cfg,
                                            const preprocess::EmojiLexicon& lex) {
  std::vector<std::string> texts;
  texts.reserve(d.size());
  for (const Tweet& t : d.tweets) texts.push_back(preprocess::run_pipeline(t.text(), cfg, lex));
  return texts;
}

std::vector<Sentiment> gold_labels(const Dataset& d) {
  std::vector<Sentiment> gold;
  gold.reserve(d.size());
  for (const Tweet& t : d.tweets) {
    if (!t.sentiment) throw DataError("tweet '" + t.id + "' in '" + d.name + "' has no label");
    gold.push_back(*t.sentiment);
  }
  return gold;
}

TrainedSystem train_system(const Dataset& train, const std::vector<std::string>& texts,
                           const RunConfig& cfg) {
  const auto docs = vectorize::prepare_documents(train, cfg.doc_mode, texts);
  TrainedSystem system;
  system.vectorizer = vectorize::TfIdfModel::fit(docs, cfg.doc_mode, cfg.word, cfg.chars);
  const auto X = system.vectorizer.transform_batch(texts);
  system.classifier = models::fit(X, gold_labels(train), cfg.train);
  return system;
}

std::vector<Sentiment> predict_all(const TrainedSystem& system,
                                   const std::vector<std::string>& texts) {
  std::vector<Sentiment> out;
  out.reserve(texts.size());
  for (const std::string& t : texts) {
    out.push_back(system.classifier.predict(system.vectorizer.transform(t)));
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sentiment classification for code-mixed (Spanish-English) tweets", "codemix"};
  app.require_subcommand(1);

  ConfigFlags train_flags, grid_flags, pre_flags;
  std::string model_dir, data_path, out_path, format = "conll";
  int jobs = 1;
  bool csv = false;

  auto* train = app.add_subcommand("train", "Fit vectorizer and classifier, write artifacts");
  train_flags.attach(train);

  auto* evaluate = app.add_subcommand("eval", "Score a trained model on a labeled dataset");
  evaluate->add_option("--model-dir", model_dir, "Directory written by 'train'")->required();
  evaluate->add_option("--data", data_path, "Labeled tweet block file")->required();

  auto* predict = app.add_subcommand("predict", "Write '<id>\\t<label>' predictions");
  predict->add_option("--model-dir", model_dir, "Directory written by 'train'")->required();
  predict->add_option("--data", data_path, "Tweet block file (labels optional)")->required();
  predict->add_option("--out", out_path, "Prediction file ('-' for stdout)");

  auto* pre = app.add_subcommand("preprocess", "Print one normalized line per tweet");
  pre_flags.attach(pre);
  pre->add_option("--data", data_path, "Input file")->required();
  pre->add_option("--format", format, "Input format")->check(CLI::IsMember({"conll", "lines"}));
  pre->add_option("--output", out_path, "Output file ('-' for stdout)");

  auto* grid = app.add_subcommand("grid", "Train/evaluate every model x TF-IDF input cell");
  grid_flags.attach(grid);
  grid->add_option("--jobs", jobs, "Parallel cells (0 = hardware threads)");
  grid->add_flag("--csv", csv, "Render the grid as CSV");

  std::vector<const char*> argv{"codemix"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ErrorKind::kConfig);
  }

  try {
    if (train->parsed()) return cmd_train(train_flags.resolve(), out);
    if (evaluate->parsed()) return cmd_eval(model_dir, data_path, out);
    if (predict->parsed()) return cmd_predict(model_dir, data_path, out_path, out);
    if (pre->parsed()) return cmd_preprocess(pre_flags.resolve(), data_path, format, out_path, out);
    if (grid->parsed()) return cmd_grid(grid_flags.resolve(), jobs, csv, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return static_cast<int>(ErrorKind::kConfig);
}

}  // namespace codemix::cli
