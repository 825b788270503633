#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "codemix/corpus.hpp"
#include "codemix/error.hpp"

using namespace codemix;

namespace {

Dataset parse(const std::string& text) {
  std::istringstream in(text);
  return parse_conll(in, "t");
}

Dataset csv(const std::string& text) {
  std::istringstream in(text);
  return parse_monolingual_csv(in, CsvColumns{}, "aux");
}

template <typename Fn>
std::string error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

Dataset labeled(const std::string& name, std::size_t neg, std::size_t neu, std::size_t pos) {
  Dataset d;
  d.name = name;
  std::size_t id = 0;
  for (auto [s, n] : {std::pair{Sentiment::kNegative, neg}, std::pair{Sentiment::kNeutral, neu},
                      std::pair{Sentiment::kPositive, pos}}) {
    for (std::size_t i = 0; i < n; ++i) {
      d.tweets.push_back(Tweet{std::to_string(id++), {Token{"x", LangTag::kLang1}}, s});
    }
  }
  return d;
}

Dataset random_dataset(std::mt19937& rng) {
  const std::string alphabet = "abcXYZ019.,!?@#<>:)(";
  Dataset d;
  d.name = "gen";
  const int n = rng() % 6;
  for (int i = 0; i < n; ++i) {
    Tweet t;
    t.id = std::to_string(i * 7 + rng() % 7);
    if (rng() % 4 != 0) t.sentiment = static_cast<Sentiment>(rng() % 3);
    const int len = 1 + rng() % 5;
    for (int k = 0; k < len; ++k) {
      std::string text;
      const int chars = 1 + rng() % 6;
      for (int c = 0; c < chars; ++c) text += alphabet[rng() % alphabet.size()];
      if (rng() % 5 == 0) text += "\xc3\xb1";  // n-tilde
      t.tokens.push_back(Token{text, static_cast<LangTag>(rng() % kNumLangTags)});
    }
    d.tweets.push_back(std::move(t));
  }
  return d;
}

}  // namespace

TEST_CASE("enums have the documented cardinality and order") {
  CHECK(kAllSentiments.size() == 3);
  CHECK(ordinal(Sentiment::kNegative) < ordinal(Sentiment::kNeutral));
  CHECK(ordinal(Sentiment::kNeutral) < ordinal(Sentiment::kPositive));
  for (std::size_t i = 0; i < kNumLangTags; ++i) {
    auto tag = static_cast<LangTag>(i);
    CHECK(parse_lang_tag(to_string(tag)) == tag);
  }
  CHECK(parse_sentiment("POSITIVE") == Sentiment::kPositive);
  CHECK(parse_sentiment("Neutral") == Sentiment::kNeutral);
  CHECK_FALSE(parse_sentiment("meh"));
  CHECK_FALSE(parse_lang_tag("LANG1"));
}

TEST_CASE("parse_conll reads a labeled Spanglish block") {
  Dataset d = parse("meta 1 positive\nha\tlang2\nu\tlang1\n");
  REQUIRE(d.size() == 1);
  const Tweet& t = d.tweets[0];
  CHECK(t.id == "1");
  CHECK(t.sentiment == Sentiment::kPositive);
  REQUIRE(t.tokens.size() == 2);
  CHECK(t.tokens[0] == Token{"ha", LangTag::kLang2});
  CHECK(t.tokens[1] == Token{"u", LangTag::kLang1});
  CHECK(t.text() == "ha u");
}

TEST_CASE("parse_conll handles multiple blocks, unlabeled tweets and tab-separated meta") {
  Dataset d = parse(
      "meta\t7\tnegative\nno\tlang1\n\nmeta 8\nhola\tlang2\n:)\tother\n\n");
  REQUIRE(d.size() == 2);
  CHECK(d.tweets[0].sentiment == Sentiment::kNegative);
  CHECK_FALSE(d.tweets[1].sentiment);
  CHECK(d.tweets[1].tokens[1].lang == LangTag::kOther);
}

TEST_CASE("parse_conll accepts CRLF line endings") {
  Dataset d = parse("meta 1 neutral\r\nok\tlang1\r\n\r\nmeta 2 neutral\r\nya\tlang2\r\n");
  CHECK(d.size() == 2);
  CHECK(d.tweets[0].tokens[0].text == "ok");
}

TEST_CASE("empty stream gives an empty dataset") { CHECK(parse("").empty()); }

TEST_CASE("parse_conll errors carry line numbers") {
  SUBCASE("unknown lang tag names the tag and its line") {
    auto msg = error_of([] { parse("meta 1 positive\nok\tlang1\nxyz\tfoo\n"); });
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("'foo'") != std::string::npos);
    try {
      parse("meta 1 positive\nok\tlang1\nxyz\tfoo\n");
    } catch (const ParseError& e) {
      CHECK(e.position() == 3);
      CHECK(e.kind() == ErrorKind::kData);
    }
  }
  SUBCASE("malformed meta line") {
    auto msg = error_of([] { parse("meta 1 positive\nok\tlang1\n\nid 2 positive\nx\tlang1\n"); });
    CHECK(msg.find("line 4") != std::string::npos);
    CHECK(msg.find("malformed meta") != std::string::npos);
    CHECK(!error_of([] { parse("meta\nx\tlang1\n"); }).empty());
    CHECK(!error_of([] { parse("meta 1 positive extra\nx\tlang1\n"); }).empty());
  }
  SUBCASE("unknown sentiment is rejected, not coerced") {
    CHECK(error_of([] { parse("meta 1 meh\nx\tlang1\n"); }).find("'meh'") != std::string::npos);
  }
  SUBCASE("empty block") {
    CHECK(error_of([] { parse("meta 1 positive\n\n"); }).find("empty block") != std::string::npos);
    CHECK(error_of([] { parse("meta 1 positive\nx\tlang1\n\n\nmeta 2\ny\tlang1\n"); })
              .find("empty block") != std::string::npos);
    CHECK(error_of([] { parse("\nmeta 2\ny\tlang1\n"); }).find("line 1") != std::string::npos);
  }
  SUBCASE("token lines need exactly one tab and a non-empty token") {
    CHECK(!error_of([] { parse("meta 1\nno tab here\n"); }).empty());
    CHECK(!error_of([] { parse("meta 1\na\tb\tlang1\n"); }).empty());
    CHECK(!error_of([] { parse("meta 1\n\tlang1\n"); }).empty());
  }
  SUBCASE("duplicate ids") {
    CHECK(error_of([] { parse("meta 1\na\tlang1\n\nmeta 1\nb\tlang1\n"); })
              .find("duplicate") != std::string::npos);
  }
}

TEST_CASE("trailing blank lines at end of file are tolerated") {
  CHECK(parse("meta 1\na\tlang1\n\n\n").size() == 1);
}

TEST_CASE("serialize/parse round trip on generated corpora") {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 300; ++trial) {
    Dataset d = random_dataset(rng);
    // ids must be unique
    std::sort(d.tweets.begin(), d.tweets.end(),
              [](const Tweet& a, const Tweet& b) { return a.id < b.id; });
    d.tweets.erase(std::unique(d.tweets.begin(), d.tweets.end(),
                               [](const Tweet& a, const Tweet& b) { return a.id == b.id; }),
                   d.tweets.end());
    const std::string text = serialize_conll(d);
    std::istringstream in(text);
    Dataset back = parse_conll(in, "gen");
    CHECK(back == d);
    CHECK(serialize_conll(back) == text);
  }
}

TEST_CASE("parsing is order-stable") {
  const std::string text = "meta b positive\nx\tlang1\n\nmeta a negative\ny\tlang2\n";
  Dataset first = parse(text);
  CHECK(first == parse(text));
  CHECK(first.tweets[0].id == "b");
}

TEST_CASE("fuzzed block input only produces structured errors") {
  std::mt19937 rng(99);
  const std::string pieces[] = {"meta", " ", "\t", "\n", "\n\n", "1", "positive", "lang1",
                                "foo", "x", "\r", "\xff", "neutral", "meta 3"};
  for (int trial = 0; trial < 2000; ++trial) {
    std::string text;
    const int n = rng() % 20;
    for (int i = 0; i < n; ++i) text += pieces[rng() % std::size(pieces)];
    try {
      parse(text);
    } catch (const Error&) {
      // structured failure is fine
    }
  }
}

TEST_CASE("parse_monolingual_csv") {
  SUBCASE("rows become Lang1-tagged tweets") {
    Dataset d = csv("label,text\npositive,I love this\nnegative,\"so bad, really\"\n");
    REQUIRE(d.size() == 2);
    CHECK(d.tweets[0].sentiment == Sentiment::kPositive);
    CHECK(d.tweets[1].sentiment == Sentiment::kNegative);
    CHECK(d.tweets[0].tokens.size() == 3);
    CHECK(d.tweets[1].text() == "so bad, really");
    for (const Token& t : d.tweets[0].tokens) CHECK(t.lang == LangTag::kLang1);
  }
  SUBCASE("header only gives an empty dataset") { CHECK(csv("label,text\n").empty()); }
  SUBCASE("quoted fields with embedded quotes and newlines") {
    Dataset d = csv("id,text,label\n1,\"say \"\"hi\"\"\nthere\",Neutral\r\n");
    REQUIRE(d.size() == 1);
    CHECK(d.tweets[0].text() == "say \"hi\" there");
  }
  SUBCASE("Lang2 tagging on request") {
    std::istringstream in("label,text\npositive,hola amigo\n");
    Dataset d = parse_monolingual_csv(in, {}, "es", LangTag::kLang2);
    CHECK(d.tweets[0].tokens[1].lang == LangTag::kLang2);
  }
  SUBCASE("bad label reports the row index") {
    try {
      csv("label,text\npositive,ok\nmeh,hmm\n");
      FAIL("expected an error");
    } catch (const ParseError& e) {
      CHECK(e.position() == 1);
      CHECK(std::string(e.what()).find("row 1") != std::string::npos);
    }
  }
  SUBCASE("missing column is a config error") {
    try {
      csv("sentiment,text\npositive,ok\n");
      FAIL("expected an error");
    } catch (const ConfigError& e) {
      CHECK(e.kind() == ErrorKind::kConfig);
    }
  }
  SUBCASE("unterminated quote") { CHECK(!error_of([] { csv("label,text\npositive,\"open\n"); }).empty()); }
}

TEST_CASE("class_distribution") {
  SUBCASE("table-sized training split") {
    auto dist = class_distribution(labeled("train", 2023, 3974, 6005));
    CHECK(dist[Sentiment::kNegative] == 2023);
    CHECK(dist[Sentiment::kNeutral] == 3974);
    CHECK(dist[Sentiment::kPositive] == 6005);
    CHECK(dist.total == 12002);
  }
  SUBCASE("table-sized development split") {
    auto dist = class_distribution(labeled("dev", 506, 994, 1498));
    CHECK(dist.counts == std::array<std::size_t, 3>{506, 994, 1498});
    CHECK(dist.total == 2998);
  }
  SUBCASE("empty") {
    auto dist = class_distribution(Dataset{});
    CHECK(dist.total == 0);
    CHECK(dist.counts == std::array<std::size_t, 3>{0, 0, 0});
  }
  SUBCASE("unlabeled tweet is named") {
    Dataset d = parse("meta 1 positive\na\tlang1\n\nmeta 42\nb\tlang1\n");
    CHECK(error_of([&] { class_distribution(d); }).find("'42'") != std::string::npos);
  }
}

TEST_CASE("concat_datasets") {
  SUBCASE("train plus translated auxiliary data") {
    Dataset train = labeled("train", 2023, 3974, 6005);
    Dataset aux = labeled("t4sa", 8000, 8000, 8000);
    Dataset all = concat_datasets(train, aux);
    CHECK(all.size() == 36002);
    auto dist = class_distribution(all);
    CHECK(dist.counts == std::array<std::size_t, 3>{10023, 11974, 14005});
    CHECK(all.tweets.front().id == "train:0");
    CHECK(all.tweets.back().id == "t4sa:23999");
  }
  SUBCASE("distribution is additive") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
      Dataset a = labeled("a", rng() % 5, rng() % 5, rng() % 5);
      Dataset b = labeled("b", rng() % 5, rng() % 5, rng() % 5);
      auto da = class_distribution(a), db = class_distribution(b);
      auto dc = class_distribution(concat_datasets(a, b));
      for (std::size_t c = 0; c < 3; ++c) CHECK(dc.counts[c] == da.counts[c] + db.counts[c]);
      CHECK(dc.total == da.total + db.total);
    }
  }
  SUBCASE("d + empty keeps d with prefixed ids") {
    Dataset d = labeled("d", 1, 1, 0);
    Dataset out = concat_datasets(d, Dataset{"e", {}});
    REQUIRE(out.size() == 2);
    CHECK(out.tweets[0].id == "d:0");
    CHECK(out.tweets[1].id == "d:1");
    CHECK(out.tweets[0].tokens == d.tweets[0].tokens);
  }
  SUBCASE("two singletons keep order; same names stay distinct") {
    Dataset a = labeled("x", 1, 0, 0), b = labeled("x", 0, 0, 1);
    Dataset out = concat_datasets(a, b);
    REQUIRE(out.size() == 2);
    CHECK(out.tweets[0].sentiment == Sentiment::kNegative);
    CHECK(out.tweets[1].sentiment == Sentiment::kPositive);
    CHECK(out.tweets[0].id != out.tweets[1].id);
  }
}
