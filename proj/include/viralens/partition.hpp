#ifndef VIRALENS_PARTITION_HPP
#define VIRALENS_PARTITION_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "viralens/corpus.hpp"

namespace viralens {

// Follower threshold x and retweet threshold y; >= threshold is High.
struct PartitionConfig {
  std::int64_t follower_threshold = 1000;
  std::int64_t retweet_threshold = 10;
};

enum class Band { Low, High };

// Cell tag: follower band, retweet band, veracity. Unlabeled items carry
// only the band pair ("LH"); labeled items read e.g. "LHF".
struct GroupTag {
  Band followers = Band::Low;
  Band retweets = Band::Low;
  std::optional<bool> fake; // nullopt for unlabeled

  std::string code() const;
};

GroupTag tag_item(const NewsItem& item, const PartitionConfig& config);

// Pattern grammar for group selection, after the cell naming scheme:
//   3 letters: follower band, retweet band, label    (LHF, HLT, ...)
//   2 letters: retweet band, label                   (LT = LLT+HLT, HF, ...)
//   1 letter : L/H retweet band or T/F label
struct GroupFilter {
  std::optional<Band> followers;
  std::optional<Band> retweets;
  std::optional<bool> fake;

  bool matches(const GroupTag& tag) const;
  static GroupFilter parse(const std::string& pattern); // throws ConfigError
};

// Division score D over the eight cells:
//   D = (LHF/F - LHT/T) + (HLF/F - HLT/T) - |LLF/F - LLT/T| - |HHF/F - HHT/T|
// nullopt when either label class is empty. Algebraically D <= 0 always.
std::optional<double> division_score(const Corpus& corpus, const PartitionConfig& config);

struct DivisionSurface {
  std::vector<std::int64_t> x_grid;
  std::vector<std::int64_t> y_grid;
  // scores[i][j] for (x_grid[i], y_grid[j]); nullopt = undefined
  std::vector<std::vector<std::optional<double>>> scores;
  std::optional<PartitionConfig> best; // smallest (x, y) among the argmax set
};

// Grid evaluation of D; default grids are powers of ten, x in 10..10^4 and
// y in 10..10^8.
DivisionSurface optimize_division(const Corpus& corpus,
                                  std::span<const std::int64_t> x_grid,
                                  std::span<const std::int64_t> y_grid);
DivisionSurface optimize_division(const Corpus& corpus);

std::vector<std::int64_t> default_x_grid();
std::vector<std::int64_t> default_y_grid();

std::unordered_map<std::string, GroupTag> assign_groups(const Corpus& corpus,
                                                        const PartitionConfig& config);

// Follower-decile user groups G0..G7 with bounds 10^1..10^7.
constexpr std::size_t kUserGroups = 8;
std::size_t follower_group(std::int64_t followers);

// Antisymmetric matrix of information-dominance values between user groups.
struct DominanceMatrix {
  std::array<std::array<std::optional<double>, kUserGroups>, kUserGroups> id{};
  std::array<std::size_t, kUserGroups> users{};          // N_j
  std::array<std::size_t, kUserGroups> authored_items{}; // M_i
};

// ID(Gi,Gj) = (TC_ij - TC_ji) / (TC_ij + TC_ji), where TC averages the
// product of per-item transmission share and coverage over the items
// authored in Gi. Entries are undefined when either group authored nothing
// or both transmission coverages vanish.
DominanceMatrix information_dominance(const Corpus& corpus);

} // namespace viralens

#endif
