#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "viralens/emotion.hpp"
#include "viralens/errors.hpp"

using namespace viralens;

#ifndef VIRALENS_TEST_DATA
#define VIRALENS_TEST_DATA "tests/data"
#endif

namespace {

Lexicon parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_lexicon(in, "inline");
}

Lexicon tiny_lexicon() {
  return parse_text(
      "#emotions\tanger,disgust,joy,sadness,fear\n"
      "mad\tanger\n"
      "vile\tdisgust\n"
      "glad\tjoy\n"
      "blue\tsadness\n"
      "eek\tfear\n");
}

} // namespace

TEST_SUITE("emotion") {

TEST_CASE("bundled mini lexicon loads with fixed category counts") {
  Lexicon lex = load_lexicon(std::string(VIRALENS_TEST_DATA) + "/mini_lexicon.tsv");
  auto counts = lex.category_counts();
  REQUIRE(counts.size() == 5);
  CHECK(counts[0] == 4); // anger
  CHECK(counts[1] == 2); // disgust
  CHECK(counts[2] == 5); // joy
  CHECK(counts[3] == 3); // sadness
  CHECK(counts[4] == 2); // fear
}

TEST_CASE("lexicon stats survive a save/parse round trip") {
  Lexicon lex = load_lexicon(std::string(VIRALENS_TEST_DATA) + "/mini_lexicon.tsv");
  std::ostringstream out;
  save_lexicon(lex, out);
  Lexicon again = parse_text(out.str());
  CHECK(again.emotions.names == lex.emotions.names);
  CHECK(again.category_counts() == lex.category_counts());
  CHECK(again.entries.size() == lex.entries.size());
}

TEST_CASE("duplicate entries collapse, conflicts fail") {
  Lexicon lex = parse_text(
      "#emotions\tanger,joy\n"
      "good\tjoy\n"
      "good\tjoy\n");
  CHECK(lex.entries.size() == 1);

  CHECK_THROWS_AS(parse_text("#emotions\tanger,joy\n"
                             "good\tjoy\n"
                             "good\tanger\n"),
                  LoadError);
  CHECK_THROWS_AS(parse_text("#emotions\tanger,joy\n"
                             "good\tserenity\n"),
                  LoadError);
  CHECK_THROWS_AS(parse_text(""), LoadError);
  CHECK_THROWS_AS(parse_text("#emotions\tanger,joy\n"), LoadError);
}

TEST_CASE("occupation fractions") {
  Lexicon lex = tiny_lexicon();
  std::vector<std::string> tokens = {"mad", "glad", "mad", "glad", "noise"};
  EmotionDistribution d = infer_distribution(tokens, lex);
  CHECK_FALSE(d.neutral);
  CHECK(d.occupations[0] == 0.5);
  CHECK(d.occupations[2] == 0.5);
  CHECK(d.occupations[1] == 0.0);

  std::vector<std::string> neutral_tokens = {"noise", "more", "words"};
  EmotionDistribution n = infer_distribution(neutral_tokens, lex);
  CHECK(n.neutral);
  for (double o : n.occupations) CHECK(o == 0.0);

  std::vector<std::string> repeated = {"glad", "glad", "glad"};
  CHECK(infer_distribution(repeated, lex).occupations[2] == 1.0);
}

TEST_CASE("non-neutral occupations sum to one and ignore token order") {
  Lexicon lex = tiny_lexicon();
  std::mt19937_64 rng(13);
  std::vector<std::string> pool = {"mad", "vile", "glad", "blue", "eek", "meh", "words"};
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> tokens;
    std::size_t len = 1 + rng() % 12;
    for (std::size_t i = 0; i < len; ++i) tokens.push_back(pool[rng() % pool.size()]);
    EmotionDistribution d = infer_distribution(tokens, lex);
    if (!d.neutral) {
      double sum = 0;
      for (double o : d.occupations) sum += o;
      CHECK(std::abs(sum - 1.0) < 1e-9);
    }
    std::vector<std::string> shuffled = tokens;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(infer_distribution(shuffled, lex).occupations == d.occupations);
  }
}

TEST_CASE("corpus coverage") {
  Lexicon lex = tiny_lexicon();
  Corpus corpus;
  auto add = [&](const std::string& id, std::vector<std::string> tokens) {
    NewsItem item;
    item.id = id;
    item.tokens = std::move(tokens);
    item.author = {"u", 0, 0, false};
    corpus.items.push_back(std::move(item));
  };
  add("a", {"mad"});
  add("b", {"glad", "noise"});
  add("c", {"noise"});
  corpus.rebuild_index();

  auto cov = corpus_coverage(corpus, lex);
  REQUIRE(cov.has_value());
  CHECK(*cov == doctest::Approx(2.0 / 3.0));

  auto stats = coverage_stats(corpus, lex);
  REQUIRE(stats.has_value());
  CHECK(stats->token_coverage == doctest::Approx(0.5)); // 2 of 4 tokens

  corpus.items.erase(corpus.items.begin() + 2);
  CHECK(*corpus_coverage(corpus, lex) == 1.0);

  Corpus empty;
  CHECK_FALSE(corpus_coverage(empty, lex).has_value());
}

TEST_CASE("rank aggregation of scorer probabilities") {
  RankDistribution one = rank_aggregate({{0.5, 0.2, 0.1, 0.1, 0.1}}, 1);
  CHECK(one.histogram[0][0] == 1); // emotion 0 at rank 1

  // Two scorers agreeing on a strict order: point masses of weight 2.
  std::vector<double> strict = {0.4, 0.3, 0.15, 0.1, 0.05};
  RankDistribution two = rank_aggregate({strict, strict}, 9);
  for (std::size_t e = 0; e < 5; ++e) {
    CHECK(two.histogram[e][e] == 2);
    for (std::size_t r = 0; r < 5; ++r)
      if (r != e) CHECK(two.histogram[e][r] == 0);
  }

  CHECK_THROWS_AS(rank_aggregate({{0.5, 0.5}, {0.2, 0.3, 0.5}}, 1), ConfigError);
}

TEST_CASE("tied probabilities break uniformly at random") {
  // Mean rank of every emotion converges to (K+1)/2 = 3 under uniform
  // tie-breaking; 1e5 draws put the Monte-Carlo error well inside 0.02.
  const int draws = 100000;
  std::vector<double> sums(5, 0.0);
  std::vector<std::vector<double>> equal = {{0.2, 0.2, 0.2, 0.2, 0.2}};
  for (int seed = 0; seed < draws; ++seed) {
    RankDistribution d = rank_aggregate(equal, static_cast<std::uint64_t>(seed));
    for (std::size_t e = 0; e < 5; ++e) sums[e] += d.mean_ranks()[e];
  }
  for (std::size_t e = 0; e < 5; ++e)
    CHECK(std::abs(sums[e] / draws - 3.0) < 0.02);
}

TEST_CASE("rank aggregation is deterministic for a fixed seed") {
  std::vector<std::vector<double>> scores = {{0.2, 0.2, 0.2, 0.2, 0.2},
                                             {0.3, 0.3, 0.2, 0.1, 0.1}};
  RankDistribution a = rank_aggregate(scores, 1234);
  RankDistribution b = rank_aggregate(scores, 1234);
  CHECK(a.histogram == b.histogram);
}

} // TEST_SUITE
