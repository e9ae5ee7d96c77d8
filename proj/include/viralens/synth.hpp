#ifndef VIRALENS_SYNTH_HPP
#define VIRALENS_SYNTH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "viralens/cascade.hpp"
#include "viralens/corpus.hpp"
#include "viralens/emotion.hpp"

namespace viralens {

// Dirichlet concentration over the five-category emotion set, with an
// optional rejection window on the raw anger draw for planted separations.
struct EmotionMixtureConfig {
  std::vector<double> concentration = {2.0, 2.0, 2.0, 2.0, 2.0};
  std::optional<std::pair<double, double>> anger_range;
};

// Count process for retweet volume: the mean is linear in the emotion
// occupations and in log10(1+followers); counts are negative-binomial
// around it (Gamma-Poisson mixture with shape `dispersion`). The default
// intercept keeps counts straddling the retweet threshold of 10 so both
// retweet bands are populated.
struct RetweetModel {
  double intercept = 12.0;
  double anger = 15.0;
  double joy = -10.0;
  double other = 0.0;
  double log_followers = 2.0;
  double dispersion = 5.0;
  double half_life_seconds = 3600.0; // exponential retweet delay
};

// Logistic model for P(fake).
struct LabelModel {
  double intercept = 0.0;
  double log_followers = 0.0;
};

// Followers ~ round(10^Normal(mean, sd)); heavy tail across magnitudes.
struct FollowerDistribution {
  double log10_mean = 2.2;
  double log10_sd = 1.0;
};

enum class CascadeShape { Star, Preferential, ChainMix };

struct CascadeConfig {
  CascadeShape shape = CascadeShape::Star;
  double chain_probability = 0.5; // ChainMix: extend the chain vs. attach to root
};

// Bernoulli rates for the binary content controls plus length/topic noise.
struct FeatureNoise {
  double mention = 0.30;
  double hashtag = 0.25;
  double location = 0.10;
  double date = 0.15;
  double url = 0.20;
  double emergency = 0.05;
  double mean_length = 100.0;
  std::vector<std::string> topics = {"society", "finance", "entertainment"};
  std::vector<double> topic_weights = {0.5, 0.3, 0.2};
};

struct SynthConfig {
  std::size_t n_items = 1000;
  std::uint64_t seed = 1;
  EmotionMixtureConfig fake_mixture;
  EmotionMixtureConfig true_mixture;
  double neutral_probability = 0.129;
  int emotional_tokens = 20; // occupations quantize to multiples of 1/m
  RetweetModel retweet_model;
  LabelModel label_model;
  FollowerDistribution followers;
  CascadeConfig cascade;
  FeatureNoise features;
};

struct GroundTruth {
  RetweetModel retweet_model;
  LabelModel label_model;
  std::uint64_t seed = 0;
  std::size_t n_items = 0;
};

struct SynthResult {
  Corpus corpus;
  GroundTruth truth;
};

// Deterministic per seed, including under parallel generation (items use
// derived sub-seeds). Throws ConfigError on empty or degenerate configs
// (zero-variance anger/joy regressors).
SynthResult generate_corpus(const SynthConfig& config);

// Fixed five-emotion lexicon matching the tokens generate_corpus emits.
Lexicon synthetic_lexicon();

// Standalone cascade with n nodes (root included).
DiffusionTree generate_cascade(const CascadeConfig& config, std::size_t n,
                               std::uint64_t seed);

// Preset: planted retweet-model coefficients (anger +15, joy -10).
SynthConfig planted_config(std::uint64_t seed, std::size_t n_items = 20000);
// Preset: null coupling, all emotion coefficients zero.
SynthConfig null_config(std::uint64_t seed, std::size_t n_items = 20000);
// Preset: fake-news anger occupations >= 0.2 and true-news < 0.2, so the
// tagging sweep peaks at theta = 0.2.
SynthConfig separation_config(std::uint64_t seed, std::size_t n_items = 4000);

} // namespace viralens

#endif
