#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "viralens/errors.hpp"
#include "viralens/intervention.hpp"

using namespace viralens;

namespace {

// Items plus matching emotion map for the corpus-level interfaces.
struct TaggedCorpus {
  Corpus corpus;
  std::unordered_map<std::string, EmotionDistribution> emotions;
  EmotionSet set = EmotionSet::basic5();

  void add(const std::string& id, double anger, Label label, std::size_t retweets) {
    NewsItem item = helpers::make_item(id, 100 + corpus.items.size() * 13, retweets, label);
    PartialFeatures f;
    f.mention = corpus.items.size() % 2 == 0;
    f.hashtag = false;
    f.location = false;
    f.date = false;
    f.url = false;
    f.emergency = false;
    f.length = 20 + static_cast<std::int64_t>(corpus.items.size() % 7);
    item.provided_features = f;
    corpus.items.push_back(std::move(item));
    EmotionDistribution d;
    d.neutral = anger == 0.0;
    d.occupations = {anger, 0.0, d.neutral ? 0.0 : 1.0 - anger, 0.0, 0.0};
    emotions.emplace(id, std::move(d));
  }
  void finish() { corpus.rebuild_index(); }
};

} // namespace

TEST_SUITE("intervention") {

TEST_CASE("beta vanishes at the grid ends") {
  std::vector<double> hf = {0.1, 0.3, 0.6};
  std::vector<double> ht = {0.0, 0.2, 0.4};
  auto grid = theta_grid(10);
  InterventionReport report = beta_sweep(hf, ht, grid);

  CHECK(report.beta_values.front() == 0.0); // theta 0 tags everything
  CHECK(report.beta_values.back() == 0.0);  // theta 1 > max anger here

  std::vector<double> beyond = {1.5};
  InterventionReport outside = beta_sweep(hf, ht, beyond);
  CHECK(outside.beta_values[0] == 0.0);
}

TEST_CASE("beta is piecewise constant between observed occupations") {
  std::vector<double> hf = {0.25, 0.55};
  std::vector<double> ht = {0.15};
  std::vector<double> inside = {0.3, 0.4, 0.5}; // same gap (0.25, 0.55]
  InterventionReport r = beta_sweep(hf, ht, inside);
  CHECK(r.beta_values[0] == r.beta_values[1]);
  CHECK(r.beta_values[1] == r.beta_values[2]);
}

TEST_CASE("tagged fractions are nonincreasing in theta") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unif(0, 1);
  std::vector<double> hf(50), ht(70);
  for (double& v : hf) v = unif(rng);
  for (double& v : ht) v = unif(rng);
  auto grid = theta_grid(20);
  InterventionReport r = beta_sweep(hf, ht, grid);
  double prev_prevented = 2.0, prev_affected = 2.0;
  for (double theta : grid) {
    double prevented = 0, affected = 0;
    for (double v : hf) prevented += v >= theta;
    for (double v : ht) affected += v >= theta;
    prevented /= hf.size();
    affected /= ht.size();
    CHECK(prevented <= prev_prevented);
    CHECK(affected <= prev_affected);
    prev_prevented = prevented;
    prev_affected = affected;
  }
  CHECK(r.best_theta >= 0.0);
}

TEST_CASE("argmax ties resolve to the smallest theta") {
  std::vector<double> hf = {0.9};
  std::vector<double> ht = {0.1};
  // beta = 1 for every theta in (0.1, 0.9]; first such grid point wins.
  auto grid = theta_grid(10);
  InterventionReport r = beta_sweep(hf, ht, grid);
  CHECK(r.best_theta == doctest::Approx(0.2));
  CHECK(r.prevented_hf_fraction == 1.0);
  CHECK(r.affected_ht_fraction == 0.0);

  std::vector<double> empty;
  CHECK_THROWS_AS(beta_sweep(empty, ht, grid), ConfigError);
}

TEST_CASE("tagging report slices at one threshold") {
  TaggedCorpus tc;
  tc.add("f1", 0.5, Label::Fake, 50);
  tc.add("f2", 0.3, Label::Fake, 50);
  tc.add("f3", 0.1, Label::Fake, 50);
  tc.add("t1", 0.25, Label::True, 50);
  tc.add("t2", 0.05, Label::True, 50);
  tc.add("lf", 0.9, Label::Fake, 1); // lowly retweeted: outside the slice
  tc.finish();
  auto groups = assign_groups(tc.corpus, {1000, 10});

  auto report = tagging_report(tc.corpus, 0.2, groups, tc.emotions, tc.set);
  REQUIRE(report.has_value());
  CHECK(report->prevented_hf_fraction == doctest::Approx(2.0 / 3.0));
  CHECK(report->affected_ht_fraction == doctest::Approx(0.5));
  CHECK(report->tagged_h_items == 3);
  REQUIRE(report->tagged_fake_share.has_value());
  CHECK(*report->tagged_fake_share == doctest::Approx(2.0 / 3.0));

  // All tagged items fake
  auto high = tagging_report(tc.corpus, 0.26, groups, tc.emotions, tc.set);
  REQUIRE(high.has_value());
  CHECK(*high->tagged_fake_share == 1.0);

  // Nothing above threshold: zero fractions, share undefined
  auto none = tagging_report(tc.corpus, 0.95, groups, tc.emotions, tc.set);
  REQUIRE(none.has_value());
  CHECK(none->prevented_hf_fraction == 0.0);
  CHECK(none->affected_ht_fraction == 0.0);
  CHECK_FALSE(none->tagged_fake_share.has_value());

  // No H items at all
  TaggedCorpus quiet;
  quiet.add("a", 0.4, Label::Fake, 1);
  quiet.finish();
  auto missing = tagging_report(quiet.corpus, 0.2, assign_groups(quiet.corpus, {1000, 10}),
                                quiet.emotions, quiet.set);
  CHECK_FALSE(missing.has_value());
}

TEST_CASE("odds-ratio interpretation arithmetic") {
  // OR = 2.65 reads as 165% more likely; OR = 1 as 0%.
  CHECK((2.65 - 1.0) * 100.0 == doctest::Approx(165.0));

  TaggedCorpus tc;
  std::mt19937_64 rng(321);
  std::uniform_real_distribution<double> unif(0, 1);
  for (int i = 0; i < 120; ++i) {
    bool fake = i % 2 == 0;
    double anger = fake ? (0.25 + 0.5 * unif(rng)) : (0.5 * unif(rng));
    tc.add((fake ? "f" : "t") + std::to_string(i), anger, fake ? Label::Fake : Label::True, 40);
  }
  tc.finish();

  std::vector<const NewsItem*> hf, ht;
  for (const auto& item : tc.corpus.items)
    (item.label == Label::Fake ? hf : ht).push_back(&item);

  HAngerResult res = h_anger_logit(hf, ht, 0.2, tc.emotions, tc.set,
                                   {"follower", "length"});
  CHECK(res.odds_ratio == std::exp(*res.fit.coefficient("h_anger")));
  CHECK(res.percent_more_likely == doctest::Approx((res.odds_ratio - 1.0) * 100.0));
  CHECK(res.odds_ratio > 1.0); // anger is genuinely enriched in the fake set
}

TEST_CASE("null coupling keeps the odds ratio near one") {
  // Anger independent of the label: the 95% interval for beta_h_anger
  // should cover zero in at least 90% of seeded replications.
  int covered = 0;
  const int replications = 50;
  for (int seed = 0; seed < replications; ++seed) {
    TaggedCorpus tc;
    std::mt19937_64 rng(9000 + seed);
    std::uniform_real_distribution<double> unif(0, 1);
    for (int i = 0; i < 300; ++i) {
      bool fake = i % 2 == 0;
      double anger = unif(rng) * 0.6; // same law for both labels
      tc.add((fake ? "f" : "t") + std::to_string(i), anger,
             fake ? Label::Fake : Label::True, 40);
    }
    tc.finish();
    std::vector<const NewsItem*> hf, ht;
    for (const auto& item : tc.corpus.items)
      (item.label == Label::Fake ? hf : ht).push_back(&item);
    HAngerResult res = h_anger_logit(hf, ht, 0.2, tc.emotions, tc.set, {"follower"});
    double beta = *res.fit.coefficient("h_anger");
    double se = *res.fit.se("h_anger");
    if (std::abs(beta) <= 1.96 * se) ++covered;
  }
  CHECK(covered >= 45);
}

} // TEST_SUITE
