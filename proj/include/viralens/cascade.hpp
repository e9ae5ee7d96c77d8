#ifndef VIRALENS_CASCADE_HPP
#define VIRALENS_CASCADE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "viralens/corpus.hpp"

namespace viralens {

// Rooted retweet tree. Node 0 is the news author; retweet nodes follow in
// input order, each holding the index of its parent node.
struct DiffusionTree {
  struct Node {
    std::string event_id;
    std::size_t parent = 0; // index into nodes, 0 = root
    std::int64_t created_at = 0;
  };

  std::string news_id;
  std::int64_t root_time = 0;
  std::vector<Node> nodes; // nodes[0] is the root; nodes[0].parent == 0

  std::size_t size() const { return nodes.size(); }
  std::size_t retweet_count() const { return nodes.empty() ? 0 : nodes.size() - 1; }
};

// Per-bin fractions of retweets over the item's lifecycle.
struct TimelineProfile {
  std::int64_t bin_width = 0;
  std::vector<double> proportions;
};

// Unknown or missing parent ids attach to the root (broadcast assumption).
// Cyclic parent references throw StructureError.
DiffusionTree build_tree(const NewsItem& item);

// Mean shortest-path distance over all ordered node pairs of the undirected
// tree: 2 * sum over edges of s*(n-s) / (n*(n-1)), where s is the subtree
// size under the edge. Exact; needs at least two nodes.
std::optional<double> structural_virality(const DiffusionTree& tree);

// Bin k holds the fraction of retweets with offset in [k*bin, (k+1)*bin).
TimelineProfile timeline_profile(const DiffusionTree& tree, std::int64_t bin_width);

// Retweets posted no later than `window` seconds after the root.
std::size_t retweets_within(const DiffusionTree& tree, std::int64_t window);

} // namespace viralens

#endif
