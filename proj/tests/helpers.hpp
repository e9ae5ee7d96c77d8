#ifndef VIRALENS_TESTS_HELPERS_HPP
#define VIRALENS_TESTS_HELPERS_HPP

#include <random>
#include <string>
#include <vector>

#include "viralens/cascade.hpp"
#include "viralens/corpus.hpp"

namespace helpers {

// Bare-bones item for partition/cascade tests: the retweet events carry
// only what the counting paths look at.
inline viralens::NewsItem make_item(const std::string& id, std::int64_t followers,
                                    std::size_t retweet_count, viralens::Label label,
                                    std::int64_t created_at = 1000) {
  viralens::NewsItem item;
  item.id = id;
  item.tokens = {"token"};
  item.created_at = created_at;
  item.author = {"author-" + id, followers, 0, false};
  item.label = label;
  item.retweets.reserve(retweet_count);
  for (std::size_t k = 0; k < retweet_count; ++k) {
    viralens::RetweetEvent ev;
    ev.event_id = id + "-r" + std::to_string(k);
    ev.news_id = id;
    ev.created_at = created_at + static_cast<std::int64_t>(k) + 1;
    ev.user = {"user-" + id + "-" + std::to_string(k), 10, 0, false};
    item.retweets.push_back(std::move(ev));
  }
  return item;
}

inline viralens::Corpus make_corpus(std::vector<viralens::NewsItem> items) {
  viralens::Corpus corpus;
  corpus.items = std::move(items);
  corpus.manifest.news_accepted = corpus.items.size();
  corpus.rebuild_index();
  return corpus;
}

// Uniform random recursive tree: node k attaches to a uniform earlier node.
inline viralens::DiffusionTree random_tree(std::size_t n, std::mt19937_64& rng) {
  viralens::DiffusionTree tree;
  tree.news_id = "random";
  tree.root_time = 0;
  tree.nodes.push_back({"root", 0, 0});
  for (std::size_t k = 1; k < n; ++k) {
    std::size_t parent = rng() % k;
    tree.nodes.push_back({"n" + std::to_string(k), parent, static_cast<std::int64_t>(k)});
  }
  return tree;
}

} // namespace helpers

#endif
