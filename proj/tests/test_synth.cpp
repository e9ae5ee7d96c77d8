#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "viralens/cascade.hpp"
#include "viralens/emotion.hpp"
#include "viralens/errors.hpp"
#include "viralens/inference.hpp"
#include "viralens/synth.hpp"

using namespace viralens;

TEST_SUITE("synth") {

TEST_CASE("config validation") {
  SynthConfig zero;
  zero.n_items = 0;
  CHECK_THROWS_AS(generate_corpus(zero), ConfigError);

  SynthConfig bad_conc;
  bad_conc.n_items = 10;
  bad_conc.fake_mixture.concentration = {1, 1, 1, 1, 0};
  CHECK_THROWS_AS(generate_corpus(bad_conc), ConfigError);

  SynthConfig all_neutral;
  all_neutral.n_items = 50;
  all_neutral.neutral_probability = 1.0; // zero-variance emotion regressors
  CHECK_THROWS_AS(generate_corpus(all_neutral), ConfigError);

  SynthConfig narrow;
  narrow.n_items = 5;
  narrow.fake_mixture.anger_range = {{0.99999, 1.0}};
  narrow.true_mixture.anger_range = {{0.99999, 1.0}};
  CHECK_THROWS_AS(generate_corpus(narrow), ConfigError);
}

TEST_CASE("identical seeds give bitwise-identical corpora") {
  SynthConfig config = planted_config(123, 200);
  SynthResult a = generate_corpus(config);
  SynthResult b = generate_corpus(config);
  std::ostringstream sa, sb;
  save_corpus(a.corpus, sa);
  save_corpus(b.corpus, sb);
  CHECK(sa.str() == sb.str());

  config.seed = 124;
  SynthResult c = generate_corpus(config);
  std::ostringstream sc;
  save_corpus(c.corpus, sc);
  CHECK(sa.str() != sc.str());
}

TEST_CASE("ground truth echoes the planted model") {
  SynthConfig config = planted_config(9, 50);
  SynthResult result = generate_corpus(config);
  CHECK(result.truth.retweet_model.anger == 15.0);
  CHECK(result.truth.retweet_model.joy == -10.0);
  CHECK(result.truth.seed == 9);
  CHECK(result.truth.n_items == 50);
  CHECK(result.corpus.items.size() == 50);
}

TEST_CASE("generated tokens reproduce the sampled occupations") {
  SynthConfig config = planted_config(77, 300);
  SynthResult result = generate_corpus(config);
  Lexicon lex = synthetic_lexicon();
  std::size_t neutral = 0;
  for (const auto& item : result.corpus.items) {
    EmotionDistribution d = infer_distribution(item.tokens, lex);
    if (d.neutral) {
      ++neutral;
      continue;
    }
    double sum = 0;
    for (double o : d.occupations) sum += o;
    CHECK(std::abs(sum - 1.0) < 1e-9);
    // Occupations land on the m-token lattice.
    double anger = d.occupations[0] * config.emotional_tokens;
    CHECK(std::abs(anger - std::round(anger)) < 1e-9);
  }
  CHECK(neutral > 0); // default neutral share is 12.9%
  CHECK(neutral < result.corpus.items.size() / 2);
}

TEST_CASE("cascade generator shapes") {
  CascadeConfig star;
  DiffusionTree s = generate_cascade(star, 1000, 5);
  CHECK(std::abs(*structural_virality(s) - 1.998) < 1e-12); // 2(n-1)/n

  CascadeConfig chain;
  chain.shape = CascadeShape::ChainMix;
  chain.chain_probability = 1.0;
  DiffusionTree path = generate_cascade(chain, 4, 5);
  CHECK(std::abs(*structural_virality(path) - 5.0 / 3.0) < 1e-12);
  CHECK(std::abs(*structural_virality(path) - oracles::bruteforce_virality(path)) < 1e-12);

  CascadeConfig pa;
  pa.shape = CascadeShape::Preferential;
  double v_small = *structural_virality(generate_cascade(pa, 200, 8));
  double v_big = *structural_virality(generate_cascade(pa, 3000, 8));
  CHECK(v_small > 2.0);
  CHECK(v_big > v_small); // virality grows with n under preferential growth

  DiffusionTree t1 = generate_cascade(pa, 64, 99);
  DiffusionTree t2 = generate_cascade(pa, 64, 99);
  for (std::size_t i = 0; i < t1.nodes.size(); ++i)
    CHECK(t1.nodes[i].parent == t2.nodes[i].parent);
}

TEST_CASE("separation preset splits anger at 0.2") {
  SynthResult result = generate_corpus(separation_config(31, 600));
  Lexicon lex = synthetic_lexicon();
  for (const auto& item : result.corpus.items) {
    EmotionDistribution d = infer_distribution(item.tokens, lex);
    if (item.label == Label::Fake) CHECK(d.occupations[0] >= 0.2);
    else CHECK(d.occupations[0] < 0.2);
  }
}

TEST_CASE("single-seed coefficient recovery sanity") {
  SynthResult result = generate_corpus(planted_config(2025, 4000));
  Lexicon lex = synthetic_lexicon();
  std::unordered_map<std::string, EmotionDistribution> emotions;
  for (const auto& item : result.corpus.items)
    emotions.emplace(item.id, infer_distribution(item.tokens, lex));

  ModelSpec spec;
  spec.response = Response::Retweets48h;
  DesignMatrix design = build_design(result.corpus, emotions, spec, lex.emotions);
  std::vector<const NewsItem*> items;
  for (const auto& item : result.corpus.items) items.push_back(&item);
  auto y = build_response(items, Response::Retweets48h);
  RegressionResult fit = fit_linear(design, y);

  double anger = *fit.coefficient("anger");
  double se = *fit.se("anger");
  CHECK(std::abs(anger - 15.0) < 4.0 * se);
  double joy = *fit.coefficient("joy");
  CHECK(std::abs(joy + 10.0) < 4.0 * *fit.se("joy"));
  double follower = *fit.coefficient("follower");
  CHECK(std::abs(follower - 2.0) < 4.0 * *fit.se("follower"));
}

} // TEST_SUITE
