#ifndef VIRALENS_INTERVENTION_HPP
#define VIRALENS_INTERVENTION_HPP

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "viralens/corpus.hpp"
#include "viralens/emotion.hpp"
#include "viralens/inference.hpp"
#include "viralens/partition.hpp"

namespace viralens {

// Anger-tagging tradeoff: beta(theta) = share of highly retweeted fake news
// tagged at threshold theta minus the share of highly retweeted true news
// tagged. "Tagged" means anger occupation >= theta.
struct InterventionReport {
  std::vector<double> theta_grid;
  std::vector<double> beta_values;
  double best_theta = 0.0;
  double prevented_hf_fraction = 0.0; // at best_theta
  double affected_ht_fraction = 0.0;  // at best_theta
  std::optional<double> tagged_fake_share;
};

// Thresholds i/steps_per_unit for i = 0..steps_per_unit; building the grid
// by division keeps grid points bit-identical to token-quantized
// occupations (k/m values).
std::vector<double> theta_grid(int steps_per_unit);

InterventionReport beta_sweep(std::span<const double> hf_anger,
                              std::span<const double> ht_anger,
                              std::span<const double> grid);

struct TaggingReport {
  double theta = 0.0;
  double prevented_hf_fraction = 0.0;
  double affected_ht_fraction = 0.0;
  std::optional<double> tagged_fake_share; // among tagged H items; nullopt if none tagged
  std::size_t tagged_h_items = 0;
};

// Impact slice at one threshold over the labeled H items of a corpus.
// nullopt when the corpus has no labeled H items.
std::optional<TaggingReport> tagging_report(
    const Corpus& corpus, double theta,
    const std::unordered_map<std::string, GroupTag>& groups,
    const std::unordered_map<std::string, EmotionDistribution>& emotions,
    const EmotionSet& emotion_set);

struct HAngerResult {
  RegressionResult fit;
  double odds_ratio = 1.0;
  double percent_more_likely = 0.0; // (OR - 1) * 100
};

// Logit of fake-vs-true over HF+HT items with the binary regressor
// h_anger = 1{anger occupation > theta} (strict, unlike the sweep) plus the
// standard control set.
HAngerResult h_anger_logit(std::span<const NewsItem* const> hf_items,
                           std::span<const NewsItem* const> ht_items, double theta,
                           const std::unordered_map<std::string, EmotionDistribution>& emotions,
                           const EmotionSet& emotion_set,
                           const std::vector<std::string>& controls = ModelSpec{}.controls,
                           const FeatureConfig& features = {});

} // namespace viralens

#endif
