#include "viralens/intervention.hpp"

#include <algorithm>
#include <cmath>

#include "viralens/errors.hpp"

namespace viralens {

std::vector<double> theta_grid(int steps_per_unit) {
  if (steps_per_unit < 1) throw ConfigError("theta grid needs at least 1 step");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(steps_per_unit) + 1);
  for (int i = 0; i <= steps_per_unit; ++i)
    grid.push_back(static_cast<double>(i) / static_cast<double>(steps_per_unit));
  return grid;
}

namespace {

double fraction_at_least(std::span<const double> values, double theta) {
  std::size_t count = 0;
  for (double v : values)
    if (v >= theta) ++count;
  return static_cast<double>(count) / static_cast<double>(values.size());
}

} // namespace

InterventionReport beta_sweep(std::span<const double> hf_anger,
                              std::span<const double> ht_anger,
                              std::span<const double> grid) {
  if (hf_anger.empty() || ht_anger.empty())
    throw ConfigError("beta sweep requires non-empty HF and HT sets");
  if (grid.empty()) throw ConfigError("beta sweep requires a non-empty grid");

  InterventionReport report;
  report.theta_grid.assign(grid.begin(), grid.end());
  report.beta_values.reserve(grid.size());

  double best = -2.0;
  for (double theta : grid) {
    double prevented = fraction_at_least(hf_anger, theta);
    double affected = fraction_at_least(ht_anger, theta);
    double beta = prevented - affected;
    report.beta_values.push_back(beta);
    // Strict improvement keeps the smallest theta on ties (ascending grid).
    if (beta > best) {
      best = beta;
      report.best_theta = theta;
      report.prevented_hf_fraction = prevented;
      report.affected_ht_fraction = affected;
    }
  }
  return report;
}

std::optional<TaggingReport> tagging_report(
    const Corpus& corpus, double theta,
    const std::unordered_map<std::string, GroupTag>& groups,
    const std::unordered_map<std::string, EmotionDistribution>& emotions,
    const EmotionSet& emotion_set) {
  auto anger = emotion_set.index_of("anger");
  if (!anger) throw ConfigError("emotion set has no anger category");

  std::size_t hf = 0, ht = 0, hf_tagged = 0, ht_tagged = 0;
  for (const auto& item : corpus.items) {
    auto git = groups.find(item.id);
    if (git == groups.end()) continue;
    const GroupTag& tag = git->second;
    if (tag.retweets != Band::High || !tag.fake) continue;
    auto eit = emotions.find(item.id);
    if (eit == emotions.end())
      throw ModelError("missing emotion distribution for item \"" + item.id + "\"");
    bool tagged = eit->second.occupations[*anger] >= theta;
    if (*tag.fake) {
      ++hf;
      if (tagged) ++hf_tagged;
    } else {
      ++ht;
      if (tagged) ++ht_tagged;
    }
  }
  if (hf + ht == 0) return std::nullopt;

  TaggingReport report;
  report.theta = theta;
  report.prevented_hf_fraction =
      hf == 0 ? 0.0 : static_cast<double>(hf_tagged) / static_cast<double>(hf);
  report.affected_ht_fraction =
      ht == 0 ? 0.0 : static_cast<double>(ht_tagged) / static_cast<double>(ht);
  report.tagged_h_items = hf_tagged + ht_tagged;
  if (report.tagged_h_items > 0)
    report.tagged_fake_share =
        static_cast<double>(hf_tagged) / static_cast<double>(report.tagged_h_items);
  return report;
}

HAngerResult h_anger_logit(std::span<const NewsItem* const> hf_items,
                           std::span<const NewsItem* const> ht_items, double theta,
                           const std::unordered_map<std::string, EmotionDistribution>& emotions,
                           const EmotionSet& emotion_set,
                           const std::vector<std::string>& controls,
                           const FeatureConfig& features) {
  if (hf_items.empty() || ht_items.empty())
    throw ConfigError("H-Anger logit requires non-empty HF and HT sets");
  auto anger = emotion_set.index_of("anger");
  if (!anger) throw ConfigError("emotion set has no anger category");

  std::vector<const NewsItem*> items(hf_items.begin(), hf_items.end());
  items.insert(items.end(), ht_items.begin(), ht_items.end());

  ModelSpec spec;
  spec.response = Response::FakeIndicator;
  spec.emotion_terms.clear(); // h_anger replaces the occupation columns
  spec.controls = controls;
  DesignMatrix design = build_design(items, emotions, spec, emotion_set, features);

  // Insert the binary regressor right after the intercept, then re-check
  // independence against the retained controls.
  Eigen::VectorXd h_anger(static_cast<Eigen::Index>(items.size()));
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& dist = emotions.at(items[i]->id);
    h_anger[static_cast<Eigen::Index>(i)] = dist.occupations[*anger] > theta ? 1.0 : 0.0;
  }
  Eigen::MatrixXd with_col(design.values.rows(), design.values.cols() + 1);
  with_col.col(0) = design.values.col(0);
  with_col.col(1) = h_anger;
  with_col.rightCols(design.values.cols() - 1) = design.values.rightCols(design.values.cols() - 1);

  DesignMatrix augmented;
  augmented.row_ids = design.row_ids;
  augmented.columns.push_back(design.columns[0]);
  augmented.columns.push_back("h_anger");
  augmented.columns.insert(augmented.columns.end(), design.columns.begin() + 1,
                           design.columns.end());
  augmented.dropped_columns = design.dropped_columns;

  auto keep = detail::independent_columns(with_col);
  augmented.values.resize(with_col.rows(), static_cast<Eigen::Index>(keep.size()));
  std::vector<std::string> kept_names;
  Eigen::Index out = 0;
  std::size_t ki = 0;
  for (Eigen::Index c = 0; c < with_col.cols(); ++c) {
    if (ki < keep.size() && keep[ki] == c) {
      augmented.values.col(out++) = with_col.col(c);
      kept_names.push_back(augmented.columns[static_cast<std::size_t>(c)]);
      ++ki;
    } else {
      augmented.dropped_columns.emplace_back(augmented.columns[static_cast<std::size_t>(c)],
                                             "collinear with retained columns");
    }
  }
  augmented.columns = std::move(kept_names);
  if (!augmented.column_index("h_anger"))
    throw ModelError("h_anger column dropped as collinear; threshold separates nothing");

  std::vector<double> y;
  y.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) y.push_back(i < hf_items.size() ? 1.0 : 0.0);

  HAngerResult result;
  result.fit = fit_logit(augmented, y);
  double beta = *result.fit.coefficient("h_anger");
  result.odds_ratio = std::exp(beta);
  result.percent_more_likely = (result.odds_ratio - 1.0) * 100.0;
  return result;
}

} // namespace viralens
