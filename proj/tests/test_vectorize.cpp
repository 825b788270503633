#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "codemix/error.hpp"
#include "codemix/vectorize.hpp"
#include "oracles.hpp"

using namespace codemix;
using namespace codemix::vectorize;

namespace {

std::string random_doc(std::mt19937& rng) {
  static const std::vector<std::string> words = {
      "hola", "Hola", "amigo", "the", "love", "LOVE", "que", "bueno", "bad", "sad", "ni\xc3\xb1o",
      "caf\xc3\xa9", "x", "a1", "2020", "lol", "jaja", "it's", "y", "no", "\xe2\x9d\xa4"};
  static const std::vector<std::string> seps = {" ", "  ", "\t", ", ", "!", " - ", "."};
  std::string out;
  const int n = 1 + rng() % 10;
  for (int i = 0; i < n; ++i) {
    if (i) out += seps[rng() % seps.size()];
    out += words[rng() % words.size()];
  }
  return out;
}

Tweet labeled(std::string id, std::string text, Sentiment s) {
  Tweet t;
  t.id = std::move(id);
  t.tokens.push_back({std::move(text), LangTag::kLang1});
  t.sentiment = s;
  return t;
}

}  // namespace

TEST_CASE("names and ranges") {
  CHECK(to_string(DocMode::kPerClassConcatenated) == "concatenated");
  CHECK(to_string(DocMode::kAllDocuments) == "all");
  CHECK(parse_doc_mode("all documents") == DocMode::kAllDocuments);
  CHECK(parse_doc_mode("concatenated docs per class") == DocMode::kPerClassConcatenated);
  CHECK_THROWS_AS(parse_doc_mode("some"), ConfigError);

  CHECK(parse_ngram_range(Analyzer::Kind::kChar, "2-5") == Analyzer::chars(2, 5));
  CHECK(parse_ngram_range(Analyzer::Kind::kWord, "3") == Analyzer::word(3, 3));
  CHECK(format_ngram_range(Analyzer::word(1, 2)) == "1-2");
  CHECK_THROWS_AS(parse_ngram_range(Analyzer::Kind::kWord, "2-1"), ConfigError);
  CHECK_THROWS_AS(parse_ngram_range(Analyzer::Kind::kWord, "0-1"), ConfigError);
  CHECK_THROWS_AS(parse_ngram_range(Analyzer::Kind::kWord, "1-9"), ConfigError);
  CHECK_THROWS_AS(parse_ngram_range(Analyzer::Kind::kWord, "a-b"), ConfigError);
}

TEST_CASE("term extraction") {
  CHECK(word_tokens("Hola, que TAL!") == std::vector<std::string>{"hola", "que", "tal"});
  CHECK(word_tokens("it's ni\xc3\xb1o") == std::vector<std::string>{"it", "s", "ni\xc3\xb1o"});
  CHECK(extract_terms("a b c", Analyzer::word(1, 2)) ==
        std::vector<std::string>{"a", "b", "c", "a b", "b c"});
  CHECK(extract_terms("Ab  c", Analyzer::chars(2, 3)) ==
        std::vector<std::string>{"ab", "b ", " c", "ab ", "b c"});
  CHECK(extract_terms("\xc3\xb1o", Analyzer::chars(2, 2)) == std::vector<std::string>{"\xc3\xb1o"});
  CHECK(extract_terms("a", Analyzer::chars(2, 5)).empty());

  std::mt19937 rng(11);
  for (int i = 0; i < 500; ++i) {
    const std::string doc = random_doc(rng);
    CAPTURE(doc);
    CHECK(extract_terms(doc, Analyzer::word(1, 3)) == oracle::terms(doc, true, 1, 3));
    CHECK(extract_terms(doc, Analyzer::chars(2, 5)) == oracle::terms(doc, false, 2, 5));
  }
}

TEST_CASE("vocabulary fit") {
  SUBCASE("word unigrams") {
    const std::vector<std::string> docs = {"a b", "b c"};
    auto v = Vocabulary::fit(docs, Analyzer::word());
    CHECK(v.terms() == std::vector<std::string>{"a", "b", "c"});
    CHECK(v.document_frequency() == std::vector<std::uint32_t>{1, 2, 1});
    CHECK(v.n_documents() == 2);
    CHECK(v.index_of("b") == 1);
    CHECK(v.index_of("z") == -1);
    CHECK(v.idf(0) == doctest::Approx(std::log(3.0 / 2.0) + 1.0));
    CHECK(v.idf(1) == doctest::Approx(1.0));
  }
  SUBCASE("char bigrams") {
    const std::vector<std::string> docs = {"ab"};
    auto v = Vocabulary::fit(docs, Analyzer::chars(2, 2));
    CHECK(v.terms() == std::vector<std::string>{"ab"});
    CHECK(v.document_frequency() == std::vector<std::uint32_t>{1});
  }
  SUBCASE("repeats inside one document count once") {
    const std::vector<std::string> docs = {"a a a", "a"};
    auto v = Vocabulary::fit(docs, Analyzer::word());
    CHECK(v.document_frequency() == std::vector<std::uint32_t>{2});
  }
  SUBCASE("empty document list") {
    CHECK_THROWS_AS(Vocabulary::fit(std::vector<std::string>{}, Analyzer::word()), DataError);
  }
  SUBCASE("from_parts validates") {
    CHECK_THROWS_AS(Vocabulary::from_parts(Analyzer::word(), {"b", "a"}, {1, 1}, 2), DataError);
    CHECK_THROWS_AS(Vocabulary::from_parts(Analyzer::word(), {"a", "a"}, {1, 1}, 2), DataError);
    CHECK_THROWS_AS(Vocabulary::from_parts(Analyzer::word(), {"a"}, {3}, 2), DataError);
    CHECK_THROWS_AS(Vocabulary::from_parts(Analyzer::word(), {"a"}, {0}, 2), DataError);
    CHECK_THROWS_AS(Vocabulary::from_parts(Analyzer::word(), {"a"}, {1, 1}, 2), DataError);
  }
}

TEST_CASE("transform") {
  SUBCASE("single document single term has weight one") {
    auto m = TfIdfModel::fit(std::vector<std::string>{"a"}, DocMode::kAllDocuments);
    auto v = m.transform("a");
    REQUIRE(v.entries.size() == 1);
    CHECK(v.entries[0].index == 0);
    CHECK(v.entries[0].weight == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("out-of-vocabulary text maps to the zero vector") {
    auto m = TfIdfModel::fit(std::vector<std::string>{"hola amigo"}, DocMode::kAllDocuments);
    auto v = m.transform("zzz");
    CHECK(v.empty());
    CHECK(v.dimension == m.dimension());
    CHECK(v.norm() == 0.0);
    CHECK(m.transform("").empty());
  }
  SUBCASE("word features precede char features") {
    auto m = TfIdfModel::fit(std::vector<std::string>{"ab cd"}, DocMode::kAllDocuments,
                             Analyzer::word(), Analyzer::chars(2, 2));
    CHECK(m.word_vocab().size() == 2);
    CHECK(m.dimension() == m.word_vocab().size() + m.char_vocab().size());
    auto v = m.transform("ab");
    REQUIRE(v.entries.size() == 2);
    CHECK(v.entries[0].index == 0);
    CHECK(v.entries[1].index >= 2);
  }
  SUBCASE("analyzer kinds are checked") {
    CHECK_THROWS_AS(TfIdfModel::fit(std::vector<std::string>{"a"}, DocMode::kAllDocuments,
                                    Analyzer::chars(), Analyzer::word()),
                    ConfigError);
  }
}

TEST_CASE("transform matches the dense oracle") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::string> docs(1 + rng() % 8);
    for (auto& d : docs) d = random_doc(rng);
    const int whi = 1 + rng() % 2;
    const int clo = 1 + rng() % 3;
    const int chi = clo + rng() % 3;
    auto m = TfIdfModel::fit(docs, DocMode::kAllDocuments, Analyzer::word(1, whi),
                             Analyzer::chars(clo, chi));
    const auto w = oracle::fit_block(docs, true, 1, whi);
    const auto c = oracle::fit_block(docs, false, clo, chi);
    REQUIRE(m.word_vocab().terms() == w.vocab);
    REQUIRE(m.char_vocab().terms() == c.vocab);

    std::vector<std::string> probes = docs;
    for (int i = 0; i < 5; ++i) probes.push_back(random_doc(rng));
    const auto batch = m.transform_batch(probes);
    for (std::size_t i = 0; i < probes.size(); ++i) {
      CAPTURE(probes[i]);
      const auto v = m.transform(probes[i]);
      CHECK(v == batch[i]);
      CHECK(v == m.transform(probes[i]));
      const auto dense = v.to_dense();
      const auto expect = oracle::tfidf(w, c, probes[i], 1, whi, clo, chi);
      REQUIRE(dense.size() == expect.size());
      double max_err = 0;
      for (std::size_t k = 0; k < dense.size(); ++k) {
        max_err = std::max(max_err, std::abs(dense[k] - expect[k]));
      }
      CHECK(max_err <= 1e-12);
      CHECK((v.empty() || std::abs(v.norm() - 1.0) <= 1e-12));
      for (std::size_t k = 1; k < v.entries.size(); ++k) {
        CHECK(v.entries[k - 1].index < v.entries[k].index);
      }
      for (const auto& e : v.entries) {
        CHECK(e.weight > 0.0);
        CHECK(e.index < m.dimension());
      }
    }
  }
}

TEST_CASE("prepare_documents") {
  Dataset d;
  d.tweets = {labeled("1", "good day", Sentiment::kPositive),
              labeled("2", "bad day", Sentiment::kNegative),
              labeled("3", "great", Sentiment::kPositive)};
  const std::vector<std::string> texts = {"good day", "bad day", "great"};

  auto concat = prepare_documents(d, DocMode::kPerClassConcatenated, texts);
  CHECK(concat == std::vector<std::string>{"bad day", "", "good day great"});
  CHECK(prepare_documents(d, DocMode::kAllDocuments, texts) == texts);

  SUBCASE("always three documents") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
      Dataset r;
      std::vector<std::string> t;
      const int n = rng() % 20;
      for (int i = 0; i < n; ++i) {
        t.push_back(random_doc(rng));
        r.tweets.push_back(labeled(std::to_string(i), t.back(), kAllSentiments[rng() % 3]));
      }
      CHECK(prepare_documents(r, DocMode::kPerClassConcatenated, t).size() == 3);
      CHECK(prepare_documents(r, DocMode::kAllDocuments, t).size() == t.size());
    }
  }
  SUBCASE("unlabeled tweet") {
    d.tweets[1].sentiment.reset();
    CHECK_THROWS_AS(prepare_documents(d, DocMode::kPerClassConcatenated, texts), DataError);
    CHECK(prepare_documents(d, DocMode::kAllDocuments, texts).size() == 3);
  }
  SUBCASE("size mismatch") {
    CHECK_THROWS_AS(prepare_documents(d, DocMode::kAllDocuments, std::vector<std::string>{"x"}),
                    DataError);
  }
}

TEST_CASE("persistence") {
  SUBCASE("escapes round trip") {
    for (const std::string s : {"", "plain", "a\tb", "back\\slash", "line\nbreak\r", "\\t"}) {
      CHECK(unescape_term(escape_term(s)) == s);
      CHECK(escape_term(s).find('\t') == std::string::npos);
      CHECK(escape_term(s).find('\n') == std::string::npos);
    }
    CHECK_THROWS_AS(unescape_term("a\\"), DataError);
    CHECK_THROWS_AS(unescape_term("\\q"), DataError);
  }
  SUBCASE("model round trip") {
    std::mt19937 rng(3);
    std::vector<std::string> docs(12);
    for (auto& d : docs) d = random_doc(rng);
    docs.push_back("tab\there and\nnewline \\ slash");
    auto m = TfIdfModel::fit(docs, DocMode::kPerClassConcatenated, Analyzer::word(1, 2),
                             Analyzer::chars(1, 4));
    std::stringstream buf;
    m.save(buf);
    auto back = TfIdfModel::load(buf);
    CHECK(back == m);
    for (const auto& d : docs) CHECK(back.transform(d) == m.transform(d));
  }
  SUBCASE("corrupt input") {
    std::istringstream bad_header("tfidf v2 all 1-1 2-5 0 0\n");
    CHECK_THROWS_AS(TfIdfModel::load(bad_header), DataError);
    std::istringstream skipped("tfidf v1 all 1-1 2-5 2 2\nw\ta\t1\t1\n");
    CHECK_THROWS_AS(TfIdfModel::load(skipped), DataError);
    std::istringstream short_line("tfidf v1 all 1-1 2-5 2 2\nw\ta\t0\n");
    CHECK_THROWS_AS(TfIdfModel::load(short_line), DataError);
    std::istringstream empty("");
    CHECK_THROWS_AS(TfIdfModel::load(empty), DataError);
  }
}
