#include "viralens/cascade.hpp"

#include <unordered_map>

#include "viralens/errors.hpp"

namespace viralens {

DiffusionTree build_tree(const NewsItem& item) {
  DiffusionTree tree;
  tree.news_id = item.id;
  tree.root_time = item.created_at;
  tree.nodes.reserve(item.retweets.size() + 1);
  tree.nodes.push_back({item.id, 0, item.created_at});

  std::unordered_map<std::string, std::size_t> by_event;
  by_event.reserve(item.retweets.size());
  for (std::size_t i = 0; i < item.retweets.size(); ++i)
    by_event.emplace(item.retweets[i].event_id, i + 1);

  for (const auto& ev : item.retweets) {
    std::size_t parent = 0;
    if (ev.parent_id) {
      auto it = by_event.find(*ev.parent_id);
      if (it != by_event.end()) parent = it->second;
    }
    tree.nodes.push_back({ev.event_id, parent, ev.created_at});
  }

  // Every parent chain must terminate at the root. state: 0 unvisited,
  // 1 on current walk, 2 proven to reach root.
  std::vector<unsigned char> state(tree.nodes.size(), 0);
  state[0] = 2;
  std::vector<std::size_t> walk;
  for (std::size_t i = 1; i < tree.nodes.size(); ++i) {
    if (state[i] == 2) continue;
    walk.clear();
    std::size_t cur = i;
    while (state[cur] == 0) {
      state[cur] = 1;
      walk.push_back(cur);
      cur = tree.nodes[cur].parent;
    }
    if (state[cur] == 1)
      throw StructureError("cyclic parent references in retweets of \"" + item.id + "\"");
    for (std::size_t v : walk) state[v] = 2;
  }
  return tree;
}

std::optional<double> structural_virality(const DiffusionTree& tree) {
  const std::size_t n = tree.size();
  if (n < 2) return std::nullopt;

  std::vector<std::vector<std::size_t>> children(n);
  for (std::size_t i = 1; i < n; ++i) children[tree.nodes[i].parent].push_back(i);

  // Iterative post-order accumulation of subtree sizes.
  std::vector<std::size_t> subtree(n, 1);
  std::vector<std::size_t> order;
  order.reserve(n);
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (std::size_t c : children[v]) stack.push_back(c);
  }
  for (std::size_t k = order.size(); k-- > 1;) {
    std::size_t v = order[k];
    subtree[tree.nodes[v].parent] += subtree[v];
  }

  // Each edge (v, parent) is crossed by s*(n-s) unordered node pairs.
  double crossings = 0.0;
  for (std::size_t v = 1; v < n; ++v) {
    double s = static_cast<double>(subtree[v]);
    crossings += s * (static_cast<double>(n) - s);
  }
  return 2.0 * crossings / (static_cast<double>(n) * static_cast<double>(n - 1));
}

TimelineProfile timeline_profile(const DiffusionTree& tree, std::int64_t bin_width) {
  if (bin_width <= 0) throw ConfigError("timeline bin width must be positive");
  TimelineProfile profile;
  profile.bin_width = bin_width;
  const std::size_t retweets = tree.retweet_count();
  if (retweets == 0) return profile;

  std::vector<std::size_t> counts;
  for (std::size_t i = 1; i < tree.nodes.size(); ++i) {
    std::int64_t offset = tree.nodes[i].created_at - tree.root_time;
    auto bin = static_cast<std::size_t>(offset / bin_width);
    if (bin >= counts.size()) counts.resize(bin + 1, 0);
    ++counts[bin];
  }
  profile.proportions.reserve(counts.size());
  for (std::size_t c : counts)
    profile.proportions.push_back(static_cast<double>(c) / static_cast<double>(retweets));
  return profile;
}

std::size_t retweets_within(const DiffusionTree& tree, std::int64_t window) {
  if (window <= 0) throw ConfigError("retweet window must be positive");
  std::size_t count = 0;
  for (std::size_t i = 1; i < tree.nodes.size(); ++i)
    if (tree.nodes[i].created_at - tree.root_time <= window) ++count;
  return count;
}

} // namespace viralens
