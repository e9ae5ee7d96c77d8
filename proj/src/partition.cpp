#include "viralens/partition.hpp"

#include <cmath>

#include "viralens/errors.hpp"

namespace viralens {

std::string GroupTag::code() const {
  std::string s;
  s += followers == Band::Low ? 'L' : 'H';
  s += retweets == Band::Low ? 'L' : 'H';
  if (fake) s += *fake ? 'F' : 'T';
  return s;
}

GroupTag tag_item(const NewsItem& item, const PartitionConfig& config) {
  GroupTag tag;
  tag.followers = item.author.followers >= config.follower_threshold ? Band::High : Band::Low;
  tag.retweets = static_cast<std::int64_t>(item.retweets.size()) >= config.retweet_threshold
                     ? Band::High
                     : Band::Low;
  if (item.label == Label::True) tag.fake = false;
  else if (item.label == Label::Fake) tag.fake = true;
  return tag;
}

bool GroupFilter::matches(const GroupTag& tag) const {
  if (followers && tag.followers != *followers) return false;
  if (retweets && tag.retweets != *retweets) return false;
  if (fake) {
    if (!tag.fake || *tag.fake != *fake) return false;
  }
  return true;
}

GroupFilter GroupFilter::parse(const std::string& pattern) {
  auto band = [](char c) -> std::optional<Band> {
    if (c == 'L') return Band::Low;
    if (c == 'H') return Band::High;
    return std::nullopt;
  };
  auto veracity = [](char c) -> std::optional<bool> {
    if (c == 'T') return false;
    if (c == 'F') return true;
    return std::nullopt;
  };
  GroupFilter f;
  switch (pattern.size()) {
    case 3: {
      auto fb = band(pattern[0]);
      auto rb = band(pattern[1]);
      auto v = veracity(pattern[2]);
      if (!fb || !rb || !v) break;
      f.followers = fb;
      f.retweets = rb;
      f.fake = v;
      return f;
    }
    case 2: {
      auto rb = band(pattern[0]);
      auto v = veracity(pattern[1]);
      if (!rb || !v) break;
      f.retweets = rb;
      f.fake = v;
      return f;
    }
    case 1: {
      if (auto rb = band(pattern[0])) {
        f.retweets = rb;
        return f;
      }
      if (auto v = veracity(pattern[0])) {
        f.fake = v;
        return f;
      }
      break;
    }
    default:
      break;
  }
  throw ConfigError("unknown group pattern \"" + pattern + "\"");
}

namespace {

struct CellCounts {
  // [follower band][retweet band], labeled items only
  double t[2][2] = {{0, 0}, {0, 0}};
  double f[2][2] = {{0, 0}, {0, 0}};
  double n_true = 0;
  double n_fake = 0;
};

CellCounts count_cells(const Corpus& corpus, const PartitionConfig& config) {
  CellCounts c;
  for (const auto& item : corpus.items) {
    if (item.label == Label::Unlabeled) continue;
    GroupTag tag = tag_item(item, config);
    int fb = tag.followers == Band::High ? 1 : 0;
    int rb = tag.retweets == Band::High ? 1 : 0;
    if (item.label == Label::True) {
      c.t[fb][rb] += 1;
      c.n_true += 1;
    } else {
      c.f[fb][rb] += 1;
      c.n_fake += 1;
    }
  }
  return c;
}

} // namespace

std::optional<double> division_score(const Corpus& corpus, const PartitionConfig& config) {
  if (config.follower_threshold < 1 || config.retweet_threshold < 1)
    throw ConfigError("partition thresholds must be >= 1");
  CellCounts c = count_cells(corpus, config);
  if (c.n_true == 0 || c.n_fake == 0) return std::nullopt;

  auto ft = [&](int fb, int rb) { return c.t[fb][rb] / c.n_true; };
  auto ff = [&](int fb, int rb) { return c.f[fb][rb] / c.n_fake; };
  // L=0, H=1; cells named (follower, retweet)
  double lh = ff(0, 1) - ft(0, 1);
  double hl = ff(1, 0) - ft(1, 0);
  double ll = std::abs(ff(0, 0) - ft(0, 0));
  double hh = std::abs(ff(1, 1) - ft(1, 1));
  return lh + hl - ll - hh;
}

std::vector<std::int64_t> default_x_grid() {
  return {10, 100, 1000, 10000};
}

std::vector<std::int64_t> default_y_grid() {
  std::vector<std::int64_t> g;
  std::int64_t v = 10;
  for (int i = 0; i < 8; ++i, v *= 10) g.push_back(v);
  return g;
}

DivisionSurface optimize_division(const Corpus& corpus,
                                  std::span<const std::int64_t> x_grid,
                                  std::span<const std::int64_t> y_grid) {
  if (x_grid.empty() || y_grid.empty())
    throw ConfigError("division grids must be non-empty");
  DivisionSurface surface;
  surface.x_grid.assign(x_grid.begin(), x_grid.end());
  surface.y_grid.assign(y_grid.begin(), y_grid.end());
  surface.scores.assign(x_grid.size(),
                        std::vector<std::optional<double>>(y_grid.size()));

  std::optional<double> best_score;
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    for (std::size_t j = 0; j < y_grid.size(); ++j) {
      auto d = division_score(corpus, {x_grid[i], y_grid[j]});
      surface.scores[i][j] = d;
      if (!d) continue;
      // Strict improvement only: grid order is ascending x then ascending y,
      // so ties resolve to the lexicographically smallest tuple.
      if (!best_score || *d > *best_score) {
        best_score = d;
        surface.best = PartitionConfig{x_grid[i], y_grid[j]};
      }
    }
  }
  return surface;
}

DivisionSurface optimize_division(const Corpus& corpus) {
  auto xs = default_x_grid();
  auto ys = default_y_grid();
  return optimize_division(corpus, xs, ys);
}

std::unordered_map<std::string, GroupTag> assign_groups(const Corpus& corpus,
                                                        const PartitionConfig& config) {
  std::unordered_map<std::string, GroupTag> groups;
  groups.reserve(corpus.items.size());
  for (const auto& item : corpus.items) groups.emplace(item.id, tag_item(item, config));
  return groups;
}

std::size_t follower_group(std::int64_t followers) {
  std::int64_t bound = 10;
  for (std::size_t g = 0; g + 1 < kUserGroups; ++g) {
    if (followers < bound) return g;
    bound *= 10;
  }
  return kUserGroups - 1;
}

DominanceMatrix information_dominance(const Corpus& corpus) {
  DominanceMatrix out;

  // N_j: unique users over authors and retweeters; first sighting fixes the
  // follower count.
  std::unordered_map<std::string, std::size_t> user_group;
  auto see_user = [&](const AuthorProfile& u) {
    user_group.emplace(u.user_id, follower_group(u.followers));
  };
  for (const auto& item : corpus.items) {
    see_user(item.author);
    for (const auto& ev : item.retweets) see_user(ev.user);
  }
  for (const auto& [id, g] : user_group) ++out.users[g];

  // TC accumulators: tc[i][j] = sum over items authored in Gi of T*C.
  double tc[kUserGroups][kUserGroups] = {};
  for (const auto& item : corpus.items) {
    std::size_t gi = follower_group(item.author.followers);
    ++out.authored_items[gi];
    if (item.retweets.empty()) continue;
    std::size_t counts[kUserGroups] = {};
    std::size_t total = 0;
    for (const auto& ev : item.retweets) {
      ++counts[follower_group(ev.user.followers)];
      ++total;
    }
    for (std::size_t j = 0; j < kUserGroups; ++j) {
      if (counts[j] == 0 || out.users[j] == 0) continue;
      double transmission = static_cast<double>(counts[j]) / static_cast<double>(total);
      double coverage = static_cast<double>(counts[j]) / static_cast<double>(out.users[j]);
      tc[gi][j] += transmission * coverage;
    }
  }

  for (std::size_t i = 0; i < kUserGroups; ++i) {
    for (std::size_t j = 0; j < kUserGroups; ++j) {
      if (out.authored_items[i] == 0 || out.authored_items[j] == 0) continue;
      double tij = tc[i][j] / static_cast<double>(out.authored_items[i]);
      double tji = tc[j][i] / static_cast<double>(out.authored_items[j]);
      double denom = tij + tji;
      if (denom == 0.0) continue;
      out.id[i][j] = (tij - tji) / denom;
    }
  }
  return out;
}

} // namespace viralens
