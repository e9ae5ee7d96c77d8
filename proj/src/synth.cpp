#include "viralens/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "viralens/errors.hpp"
#include "viralens/util.hpp"

namespace viralens {

namespace {

// Hand-rolled samplers over mt19937_64 raw words; std::distributions are
// not pinned by the standard, these keep corpora bit-reproducible.
double unit_co(std::mt19937_64& rng) { // [0, 1)
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double unit_oc(std::mt19937_64& rng) { // (0, 1]
  return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

double normal_sample(std::mt19937_64& rng) {
  double u1 = unit_oc(rng);
  double u2 = unit_co(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double exponential_sample(std::mt19937_64& rng, double rate) {
  return -std::log(unit_oc(rng)) / rate;
}

// Marsaglia-Tsang, boosted for shape < 1.
double gamma_sample(std::mt19937_64& rng, double shape) {
  if (shape < 1.0) {
    double g = gamma_sample(rng, shape + 1.0);
    return g * std::pow(unit_oc(rng), 1.0 / shape);
  }
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal_sample(rng);
    double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    double v = t * t * t;
    double u = unit_oc(rng);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::vector<double> dirichlet_sample(std::mt19937_64& rng, const std::vector<double>& conc) {
  std::vector<double> out(conc.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < conc.size(); ++i) {
    out[i] = gamma_sample(rng, conc[i]);
    sum += out[i];
  }
  if (sum <= 0.0) sum = 1.0;
  for (double& v : out) v /= sum;
  return out;
}

std::int64_t poisson_sample(std::mt19937_64& rng, double mu) {
  std::int64_t total = 0;
  while (mu > 400.0) { // Knuth's product method underflows for huge means
    total += poisson_sample(rng, 400.0);
    mu -= 400.0;
  }
  double limit = std::exp(-mu);
  double p = 1.0;
  std::int64_t k = 0;
  do {
    ++k;
    p *= unit_oc(rng);
  } while (p > limit);
  return total + k - 1;
}

std::int64_t negative_binomial_sample(std::mt19937_64& rng, double mean, double shape) {
  double lambda = gamma_sample(rng, shape) * (mean / shape);
  return poisson_sample(rng, lambda);
}

std::int64_t follower_sample(std::mt19937_64& rng, const FollowerDistribution& dist) {
  double v = std::pow(10.0, dist.log10_mean + dist.log10_sd * normal_sample(rng));
  v = std::min(v, 1e12);
  return static_cast<std::int64_t>(std::llround(v));
}

bool bernoulli(std::mt19937_64& rng, double p) { return unit_co(rng) < p; }

// Largest-remainder rounding of m*probs to integer counts summing to m.
std::vector<int> quantize_simplex(const std::vector<double>& probs, int m) {
  std::vector<int> counts(probs.size());
  std::vector<std::pair<double, std::size_t>> fractions;
  int assigned = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    double scaled = probs[i] * static_cast<double>(m);
    counts[i] = static_cast<int>(std::floor(scaled));
    assigned += counts[i];
    fractions.emplace_back(scaled - std::floor(scaled), i);
  }
  std::sort(fractions.begin(), fractions.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (int r = 0; r < m - assigned; ++r) ++counts[fractions[static_cast<std::size_t>(r)].second];
  return counts;
}

const char* const kEmotionTerms[5][4] = {
    {"fury_term", "rage_term", "outrage_term", "wrath_term"},
    {"gross_term", "repulsed_term", "nausea_term", "disdain_term"},
    {"cheer_term", "delight_term", "glee_term", "bliss_term"},
    {"grief_term", "sorrow_term", "mourn_term", "gloom_term"},
    {"dread_term", "panic_term", "scare_term", "horror_term"}};

const char* const kFillerTerms[6] = {"report_term", "city_term",  "market_term",
                                     "street_term", "photo_term", "video_term"};

} // namespace

Lexicon synthetic_lexicon() {
  Lexicon lex;
  lex.emotions = EmotionSet::basic5();
  for (std::size_t e = 0; e < 5; ++e)
    for (const char* term : kEmotionTerms[e])
      lex.entries.emplace(term, static_cast<std::uint32_t>(e));
  return lex;
}

DiffusionTree generate_cascade(const CascadeConfig& config, std::size_t n,
                               std::uint64_t seed) {
  if (n < 1) throw ConfigError("cascade needs at least one node");
  DiffusionTree tree;
  tree.news_id = "cascade";
  tree.root_time = 0;
  tree.nodes.reserve(n);
  tree.nodes.push_back({"root", 0, 0});

  std::mt19937_64 rng(seed);
  // Preferential attachment via the repeated-endpoints list.
  std::vector<std::size_t> endpoints{0};

  for (std::size_t k = 1; k < n; ++k) {
    std::size_t parent = 0;
    switch (config.shape) {
      case CascadeShape::Star:
        parent = 0;
        break;
      case CascadeShape::Preferential:
        parent = endpoints[static_cast<std::size_t>(rng() % endpoints.size())];
        break;
      case CascadeShape::ChainMix:
        parent = unit_co(rng) < config.chain_probability ? k - 1 : 0;
        break;
    }
    tree.nodes.push_back({"n" + std::to_string(k), parent, static_cast<std::int64_t>(k)});
    endpoints.push_back(parent);
    endpoints.push_back(k);
  }
  return tree;
}

namespace {

NewsItem generate_item(const SynthConfig& config, std::size_t index, std::uint64_t item_seed) {
  std::mt19937_64 rng(item_seed);
  NewsItem item;
  item.id = "s" + std::to_string(index);
  item.created_at = 1400000000 + static_cast<std::int64_t>(index) * 7200;
  item.author.user_id = "a" + std::to_string(index);
  item.author.followers = follower_sample(rng, config.followers);
  item.author.friends = follower_sample(rng, config.followers);

  double lf = std::log10(1.0 + static_cast<double>(item.author.followers));
  double fake_logit = config.label_model.intercept + config.label_model.log_followers * lf;
  bool fake = bernoulli(rng, 1.0 / (1.0 + std::exp(-fake_logit)));
  item.label = fake ? Label::Fake : Label::True;
  item.author.verified = !fake;

  // Emotion occupations, quantized so the lexicon pipeline reproduces them
  // exactly from tokens.
  std::vector<int> counts(5, 0);
  bool neutral = bernoulli(rng, config.neutral_probability);
  if (!neutral) {
    const EmotionMixtureConfig& mixture = fake ? config.fake_mixture : config.true_mixture;
    std::vector<double> probs;
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 10000)
        throw ConfigError("anger_range rejection failed; window too narrow");
      probs = dirichlet_sample(rng, mixture.concentration);
      if (!mixture.anger_range) break;
      if (probs[0] >= mixture.anger_range->first && probs[0] <= mixture.anger_range->second)
        break;
    }
    counts = quantize_simplex(probs, config.emotional_tokens);
  }

  for (std::size_t e = 0; e < 5; ++e)
    for (int c = 0; c < counts[e]; ++c) item.tokens.push_back(kEmotionTerms[e][c % 4]);
  std::size_t fillers = 3 + static_cast<std::size_t>(rng() % 5);
  for (std::size_t c = 0; c < fillers; ++c)
    item.tokens.push_back(kFillerTerms[(index + c) % 6]);

  double total = 0.0;
  for (int c : counts) total += c;
  double anger = total > 0 ? counts[0] / total : 0.0;
  double disgust = total > 0 ? counts[1] / total : 0.0;
  double joy = total > 0 ? counts[2] / total : 0.0;
  double sadness = total > 0 ? counts[3] / total : 0.0;
  double fear = total > 0 ? counts[4] / total : 0.0;
  double other = disgust + sadness + fear;

  PartialFeatures feats;
  feats.mention = bernoulli(rng, config.features.mention);
  feats.hashtag = bernoulli(rng, config.features.hashtag);
  feats.location = bernoulli(rng, config.features.location);
  feats.date = bernoulli(rng, config.features.date);
  feats.url = bernoulli(rng, config.features.url);
  feats.emergency = bernoulli(rng, config.features.emergency);
  double len = config.features.mean_length * (1.0 + 0.25 * normal_sample(rng));
  feats.length = std::max<std::int64_t>(1, std::llround(len));
  item.provided_features = feats;
  item.emergency = feats.emergency;

  if (!config.features.topics.empty()) {
    double total_w = std::accumulate(config.features.topic_weights.begin(),
                                     config.features.topic_weights.end(), 0.0);
    double pick = unit_co(rng) * total_w;
    std::size_t t = 0;
    for (; t + 1 < config.features.topics.size(); ++t) {
      pick -= config.features.topic_weights[t];
      if (pick <= 0.0) break;
    }
    item.topic = config.features.topics[t];
  }

  const RetweetModel& rm = config.retweet_model;
  double mu = rm.intercept + rm.anger * anger + rm.joy * joy + rm.other * other +
              rm.log_followers * lf;
  mu = std::max(mu, 0.05);
  auto n_retweets = negative_binomial_sample(rng, mu, rm.dispersion);

  double rate = std::log(2.0) / rm.half_life_seconds;
  item.retweets.reserve(static_cast<std::size_t>(n_retweets));
  std::vector<std::int64_t> endpoints{-1}; // -1 = root, k = k-th retweet
  for (std::int64_t k = 0; k < n_retweets; ++k) {
    RetweetEvent ev;
    ev.event_id = item.id + "-r" + std::to_string(k);
    ev.news_id = item.id;
    ev.created_at = item.created_at +
                    static_cast<std::int64_t>(std::llround(exponential_sample(rng, rate)));
    ev.user.user_id = item.id + "-u" + std::to_string(k);
    ev.user.followers = follower_sample(rng, config.followers);
    std::int64_t parent = -1;
    switch (config.cascade.shape) {
      case CascadeShape::Star:
        break; // parent absent: direct retweet of the root
      case CascadeShape::Preferential:
        parent = endpoints[static_cast<std::size_t>(rng() % endpoints.size())];
        break;
      case CascadeShape::ChainMix:
        if (k > 0 && unit_co(rng) < config.cascade.chain_probability) parent = k - 1;
        break;
    }
    if (parent >= 0) ev.parent_id = item.id + "-r" + std::to_string(parent);
    endpoints.push_back(parent);
    endpoints.push_back(k);
    item.retweets.push_back(std::move(ev));
  }
  return item;
}

} // namespace

SynthResult generate_corpus(const SynthConfig& config) {
  if (config.n_items == 0) throw ConfigError("n_items must be >= 1");
  if (config.emotional_tokens < 1) throw ConfigError("emotional_tokens must be >= 1");
  for (const auto& mixture : {config.fake_mixture, config.true_mixture}) {
    if (mixture.concentration.size() != 5)
      throw ConfigError("emotion mixture needs 5 concentration values");
    for (double c : mixture.concentration)
      if (c <= 0.0) throw ConfigError("Dirichlet concentrations must be positive");
  }
  if (config.retweet_model.dispersion <= 0.0)
    throw ConfigError("dispersion must be positive");
  if (config.retweet_model.half_life_seconds <= 0.0)
    throw ConfigError("half life must be positive");
  if (config.neutral_probability < 0.0 || config.neutral_probability > 1.0)
    throw ConfigError("neutral probability must lie in [0, 1]");

  SynthResult result;
  result.truth.retweet_model = config.retweet_model;
  result.truth.label_model = config.label_model;
  result.truth.seed = config.seed;
  result.truth.n_items = config.n_items;

  result.corpus.items.resize(config.n_items);
  auto* items = result.corpus.items.data();
  parallel_for(config.n_items, [&](std::size_t i) {
    items[i] = generate_item(config, i, derive_seed(config.seed, i));
  });

  result.corpus.manifest.files.push_back("synthetic:seed=" + std::to_string(config.seed));
  result.corpus.manifest.news_accepted = config.n_items;
  for (const auto& item : result.corpus.items)
    result.corpus.manifest.retweets_accepted += item.retweets.size();
  result.corpus.rebuild_index();

  if (config.n_items >= 2) {
    Lexicon lex = synthetic_lexicon();
    double anger_min = 2.0, anger_max = -1.0, joy_min = 2.0, joy_max = -1.0;
    for (const auto& item : result.corpus.items) {
      auto dist = infer_distribution(item.tokens, lex);
      anger_min = std::min(anger_min, dist.occupations[0]);
      anger_max = std::max(anger_max, dist.occupations[0]);
      joy_min = std::min(joy_min, dist.occupations[2]);
      joy_max = std::max(joy_max, dist.occupations[2]);
    }
    if (anger_min == anger_max || joy_min == joy_max)
      throw ConfigError("degenerate config: zero-variance emotion regressors");
  }
  return result;
}

SynthConfig planted_config(std::uint64_t seed, std::size_t n_items) {
  SynthConfig config;
  config.seed = seed;
  config.n_items = n_items;
  return config; // defaults already plant anger +15 / joy -10
}

SynthConfig null_config(std::uint64_t seed, std::size_t n_items) {
  SynthConfig config;
  config.seed = seed;
  config.n_items = n_items;
  config.retweet_model.anger = 0.0;
  config.retweet_model.joy = 0.0;
  config.retweet_model.other = 0.0;
  return config;
}

SynthConfig separation_config(std::uint64_t seed, std::size_t n_items) {
  SynthConfig config;
  config.seed = seed;
  config.n_items = n_items;
  config.neutral_probability = 0.0;
  config.fake_mixture.concentration = {9.0, 2.75, 2.75, 2.75, 2.75};
  config.fake_mixture.anger_range = {{0.2, 1.0}};
  config.true_mixture.concentration = {2.0, 4.5, 4.5, 4.5, 4.5};
  config.true_mixture.anger_range = {{0.0, 0.15}};
  // Retweet volume independent of emotions so the plant survives the H cut.
  config.retweet_model.anger = 0.0;
  config.retweet_model.joy = 0.0;
  config.retweet_model.other = 0.0;
  config.retweet_model.log_followers = 0.0;
  config.retweet_model.intercept = 40.0;
  config.retweet_model.dispersion = 10.0;
  return config;
}

} // namespace viralens
