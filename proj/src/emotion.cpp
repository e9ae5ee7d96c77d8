#include "viralens/emotion.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "viralens/errors.hpp"

namespace viralens {

EmotionSet EmotionSet::basic5() {
  return {{"anger", "disgust", "joy", "sadness", "fear"}};
}

EmotionSet EmotionSet::nrc8() {
  return {{"anger", "disgust", "joy", "sadness", "fear", "surprise", "anticipation", "trust"}};
}

std::optional<std::size_t> EmotionSet::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  return std::nullopt;
}

std::vector<std::size_t> Lexicon::category_counts() const {
  std::vector<std::size_t> counts(emotions.size(), 0);
  for (const auto& [term, cat] : entries) ++counts[cat];
  return counts;
}

Lexicon parse_lexicon(std::istream& in, const std::string& source_name) {
  std::string line;
  std::size_t line_number = 0;
  auto fail = [&](const std::string& reason) -> LoadError {
    std::ostringstream msg;
    msg << source_name << ":" << line_number << ": " << reason;
    return LoadError(msg.str());
  };

  if (!std::getline(in, line)) throw LoadError(source_name + ": empty lexicon file");
  ++line_number;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::string header_tag = "#emotions\t";
  if (line.rfind(header_tag, 0) != 0)
    throw fail("expected \"#emotions<TAB>name1,name2,...\" header");

  Lexicon lex;
  {
    std::stringstream names(line.substr(header_tag.size()));
    std::string name;
    while (std::getline(names, name, ',')) {
      if (name.empty()) throw fail("empty emotion name in header");
      if (lex.emotions.index_of(name)) throw fail("duplicate emotion name \"" + name + "\"");
      lex.emotions.names.push_back(name);
    }
  }
  if (lex.emotions.size() < 2) throw fail("emotion set needs at least 2 categories");

  std::size_t loaded = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw fail("expected term<TAB>category");
    std::string term = line.substr(0, tab);
    std::string category = line.substr(tab + 1);
    if (term.empty()) throw fail("empty term");
    auto cat = lex.emotions.index_of(category);
    if (!cat) throw fail("unknown category \"" + category + "\"");
    auto [it, inserted] = lex.entries.emplace(term, static_cast<std::uint32_t>(*cat));
    if (!inserted && it->second != *cat)
      throw fail("term \"" + term + "\" already mapped to \"" +
                 lex.emotions.names[it->second] + "\"");
    ++loaded;
  }
  if (loaded == 0) throw LoadError(source_name + ": lexicon has no entries");
  return lex;
}

Lexicon load_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open lexicon file: " + path);
  return parse_lexicon(in, path);
}

void save_lexicon(const Lexicon& lexicon, std::ostream& out) {
  out << "#emotions\t";
  for (std::size_t i = 0; i < lexicon.emotions.size(); ++i) {
    if (i) out << ',';
    out << lexicon.emotions.names[i];
  }
  out << '\n';
  std::vector<std::pair<std::string, std::uint32_t>> sorted(lexicon.entries.begin(),
                                                            lexicon.entries.end());
  std::sort(sorted.begin(), sorted.end());
  for (const auto& [term, cat] : sorted)
    out << term << '\t' << lexicon.emotions.names[cat] << '\n';
}

EmotionDistribution infer_distribution(std::span<const std::string> tokens,
                                       const Lexicon& lexicon) {
  EmotionDistribution dist;
  dist.occupations.assign(lexicon.emotions.size(), 0.0);
  std::size_t emotional = 0;
  for (const auto& token : tokens) {
    auto it = lexicon.entries.find(token);
    if (it == lexicon.entries.end()) continue;
    dist.occupations[it->second] += 1.0;
    ++emotional;
  }
  if (emotional == 0) return dist; // neutral, all zeros
  dist.neutral = false;
  for (double& o : dist.occupations) o /= static_cast<double>(emotional);
  return dist;
}

std::optional<double> corpus_coverage(const Corpus& corpus, const Lexicon& lexicon) {
  auto stats = coverage_stats(corpus, lexicon);
  if (!stats) return std::nullopt;
  return stats->item_coverage;
}

std::optional<CoverageStats> coverage_stats(const Corpus& corpus, const Lexicon& lexicon) {
  if (corpus.items.empty()) return std::nullopt;
  CoverageStats stats;
  stats.items = corpus.items.size();
  std::size_t covered_items = 0;
  std::size_t covered_tokens = 0;
  for (const auto& item : corpus.items) {
    bool hit = false;
    for (const auto& token : item.tokens) {
      ++stats.tokens;
      if (lexicon.entries.count(token)) {
        ++covered_tokens;
        hit = true;
      }
    }
    if (hit) ++covered_items;
  }
  stats.item_coverage = static_cast<double>(covered_items) / static_cast<double>(stats.items);
  stats.token_coverage = stats.tokens == 0
                             ? 0.0
                             : static_cast<double>(covered_tokens) / static_cast<double>(stats.tokens);
  return stats;
}

std::vector<double> RankDistribution::mean_ranks() const {
  std::vector<double> means(categories, 0.0);
  if (scorers == 0) return means;
  for (std::size_t e = 0; e < categories; ++e) {
    double sum = 0.0;
    for (std::size_t r = 0; r < categories; ++r)
      sum += static_cast<double>(histogram[e][r]) * static_cast<double>(r + 1);
    means[e] = sum / static_cast<double>(scorers);
  }
  return means;
}

RankDistribution rank_aggregate(const std::vector<std::vector<double>>& scores,
                                std::uint64_t seed) {
  RankDistribution out;
  if (scores.empty()) return out;
  const std::size_t k = scores.front().size();
  out.categories = k;
  out.scorers = scores.size();
  out.histogram.assign(k, std::vector<std::uint32_t>(k, 0));

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(k);
  std::vector<std::uint64_t> tiebreak(k);
  for (const auto& probs : scores) {
    if (probs.size() != k)
      throw ConfigError("scorer probability vectors have mismatched lengths");
    for (double p : probs)
      if (p < 0.0) throw ConfigError("negative probability in scorer vector");
    // Raw generator words as tie-break keys keep the draw uniform over
    // tied orders and bit-reproducible.
    for (std::size_t e = 0; e < k; ++e) tiebreak[e] = rng();
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (probs[a] != probs[b]) return probs[a] > probs[b];
      if (tiebreak[a] != tiebreak[b]) return tiebreak[a] < tiebreak[b];
      return a < b;
    });
    for (std::size_t rank = 0; rank < k; ++rank) ++out.histogram[order[rank]][rank];
  }
  return out;
}

} // namespace viralens
