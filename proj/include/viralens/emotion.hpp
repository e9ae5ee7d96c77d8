#ifndef VIRALENS_EMOTION_HPP
#define VIRALENS_EMOTION_HPP

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "viralens/corpus.hpp"

namespace viralens {

struct EmotionSet {
  std::vector<std::string> names;

  static EmotionSet basic5();   // anger, disgust, joy, sadness, fear
  static EmotionSet nrc8();     // basic5 plus surprise, anticipation, trust

  std::size_t size() const { return names.size(); }
  std::optional<std::size_t> index_of(const std::string& name) const;
};

struct Lexicon {
  EmotionSet emotions;
  std::unordered_map<std::string, std::uint32_t> entries; // term -> category index

  std::vector<std::size_t> category_counts() const;
};

// TSV with a "#emotions<TAB>name1,name2,..." header line followed by
// "term<TAB>category" entries. Duplicate identical entries collapse;
// conflicting categories, unknown categories and empty files are errors.
Lexicon load_lexicon(const std::string& path);
Lexicon parse_lexicon(std::istream& in, const std::string& source_name);
void save_lexicon(const Lexicon& lexicon, std::ostream& out);

// Per-item occupation vector. Neutral items (no lexicon hit) carry all
// zeros; otherwise occupations sum to 1.
struct EmotionDistribution {
  std::vector<double> occupations;
  bool neutral = true;

  double occupation(std::size_t category) const { return occupations[category]; }
};

EmotionDistribution infer_distribution(std::span<const std::string> tokens,
                                       const Lexicon& lexicon);

// Fraction of items that are non-neutral; nullopt for an empty corpus.
std::optional<double> corpus_coverage(const Corpus& corpus, const Lexicon& lexicon);

struct CoverageStats {
  double item_coverage = 0.0;  // fraction of items with >= 1 emotional term
  double token_coverage = 0.0; // fraction of token occurrences in the lexicon
  std::size_t items = 0;
  std::size_t tokens = 0;
};

std::optional<CoverageStats> coverage_stats(const Corpus& corpus, const Lexicon& lexicon);

// Histogram of ranks (1 = most probable) per emotion, aggregated across
// scorers; histogram[e][r-1] counts scorers ranking emotion e at rank r.
struct RankDistribution {
  std::size_t categories = 0;
  std::size_t scorers = 0;
  std::vector<std::vector<std::uint32_t>> histogram;

  std::vector<double> mean_ranks() const;
};

// Ranks each scorer's probability vector by descending probability; exact
// ties break uniformly at random. The generator is consumed in scorer order
// then emotion-index order, so a fixed seed gives a fixed result.
RankDistribution rank_aggregate(const std::vector<std::vector<double>>& scores,
                                std::uint64_t seed);

} // namespace viralens

#endif
