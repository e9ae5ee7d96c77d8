#ifndef VIRALENS_KEYWORDS_HPP
#define VIRALENS_KEYWORDS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "viralens/corpus.hpp"
#include "viralens/emotion.hpp"

namespace viralens {

// Sparse TF-IDF rows over a shared vocabulary. IDF is ln-scaled with
// add-one document-frequency smoothing: ln((1+N)/(1+df)) + 1.
struct TermMatrix {
  std::vector<std::string> vocabulary;
  std::vector<double> idf;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows;
};

TermMatrix build_term_matrix(std::span<const NewsItem* const> items);

struct KeywordScore {
  std::string term;
  double chi2 = 0.0;
  double mutual_information = 0.0;
  std::size_t chi2_rank = 0;
  std::size_t mi_rank = 0;
  double combined_rank = 0.0;
};

struct KeywordReport {
  std::size_t requested = 0;
  std::vector<KeywordScore> keywords; // sorted by combined rank
};

// Scores every term of the joint vocabulary by 2x2 presence-table
// chi-square and mutual information, combines the two rankings by their
// mean, and keeps the top k. Ties break on the lexicographic term order.
KeywordReport score_keywords(std::span<const NewsItem* const> positive,
                             std::span<const NewsItem* const> negative, std::size_t k);

// Keyword counts per emotion category; terms outside the lexicon count as
// neutral (last slot).
std::vector<std::size_t> keyword_emotion_profile(const KeywordReport& report,
                                                 const Lexicon& lexicon);

// Stratified k-fold accuracy of a logit classifier on TF-IDF features of
// the top chi-square terms, with term selection done inside each training
// fold. Deterministic for a fixed seed.
double separability_cv(std::span<const NewsItem* const> positive,
                       std::span<const NewsItem* const> negative, std::size_t folds,
                       std::size_t top_terms, std::uint64_t seed);

} // namespace viralens

#endif
