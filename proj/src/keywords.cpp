#include "viralens/keywords.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include <Eigen/Dense>

#include "viralens/errors.hpp"
#include "viralens/inference.hpp"

namespace viralens {

TermMatrix build_term_matrix(std::span<const NewsItem* const> items) {
  TermMatrix tm;
  std::unordered_map<std::string, std::uint32_t> vocab_index;
  std::vector<std::size_t> df;

  std::vector<std::unordered_map<std::uint32_t, std::uint32_t>> counts(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (const auto& token : items[i]->tokens) {
      auto [it, inserted] =
          vocab_index.emplace(token, static_cast<std::uint32_t>(tm.vocabulary.size()));
      if (inserted) {
        tm.vocabulary.push_back(token);
        df.push_back(0);
      }
      if (counts[i][it->second]++ == 0) ++df[it->second];
    }
  }

  const double n = static_cast<double>(items.size());
  tm.idf.resize(tm.vocabulary.size());
  for (std::size_t t = 0; t < tm.vocabulary.size(); ++t)
    tm.idf[t] = std::log((1.0 + n) / (1.0 + static_cast<double>(df[t]))) + 1.0;

  tm.rows.resize(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto& row = tm.rows[i];
    row.reserve(counts[i].size());
    for (const auto& [term, tf] : counts[i])
      row.emplace_back(term, static_cast<double>(tf) * tm.idf[term]);
    std::sort(row.begin(), row.end());
  }
  return tm;
}

namespace {

// Presence counts per term: docs in each class containing it.
struct PresenceTable {
  std::vector<std::string> terms;
  std::vector<std::size_t> pos_docs; // a
  std::vector<std::size_t> neg_docs; // b
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
};

PresenceTable presence_counts(std::span<const NewsItem* const> positive,
                              std::span<const NewsItem* const> negative) {
  PresenceTable table;
  table.n_pos = positive.size();
  table.n_neg = negative.size();
  std::unordered_map<std::string, std::size_t> index;
  auto scan = [&](std::span<const NewsItem* const> items, bool is_pos) {
    std::unordered_set<std::string> seen;
    for (const NewsItem* item : items) {
      seen.clear();
      for (const auto& token : item->tokens) {
        if (!seen.insert(token).second) continue;
        auto [it, inserted] = index.emplace(token, table.terms.size());
        if (inserted) {
          table.terms.push_back(token);
          table.pos_docs.push_back(0);
          table.neg_docs.push_back(0);
        }
        if (is_pos) ++table.pos_docs[it->second];
        else ++table.neg_docs[it->second];
      }
    }
  };
  scan(positive, true);
  scan(negative, false);
  return table;
}

double chi_square_2x2(double a, double b, double c, double d) {
  double n = a + b + c + d;
  double denom = (a + b) * (c + d) * (a + c) * (b + d);
  if (denom == 0.0) return 0.0;
  double diff = a * d - b * c;
  return n * diff * diff / denom;
}

double mutual_information_2x2(double a, double b, double c, double d) {
  double n = a + b + c + d;
  auto cell = [&](double joint, double margin_row, double margin_col) {
    if (joint == 0.0) return 0.0;
    double p = joint / n;
    return p * std::log(p * n * n / (margin_row * margin_col));
  };
  // rows: term present/absent; cols: positive/negative class
  return cell(a, a + b, a + c) + cell(b, a + b, b + d) + cell(c, c + d, a + c) +
         cell(d, c + d, b + d);
}

// Ranks descending by score; equal scores rank by term order. Returns
// 1-based ranks aligned with the term list.
std::vector<std::size_t> rank_by(const std::vector<std::string>& terms,
                                 const std::vector<double>& score) {
  std::vector<std::size_t> order(terms.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (score[x] != score[y]) return score[x] > score[y];
    return terms[x] < terms[y];
  });
  std::vector<std::size_t> rank(terms.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) rank[order[pos]] = pos + 1;
  return rank;
}

} // namespace

KeywordReport score_keywords(std::span<const NewsItem* const> positive,
                             std::span<const NewsItem* const> negative, std::size_t k) {
  if (positive.empty() || negative.empty())
    throw ConfigError("keyword scoring requires non-empty item sets");
  if (k == 0) throw ConfigError("keyword count must be >= 1");

  PresenceTable table = presence_counts(positive, negative);
  if (table.terms.empty()) throw ModelError("empty vocabulary");

  const std::size_t m = table.terms.size();
  std::vector<double> chi2(m), mi(m);
  for (std::size_t t = 0; t < m; ++t) {
    double a = static_cast<double>(table.pos_docs[t]);
    double b = static_cast<double>(table.neg_docs[t]);
    double c = static_cast<double>(table.n_pos) - a;
    double d = static_cast<double>(table.n_neg) - b;
    chi2[t] = chi_square_2x2(a, b, c, d);
    mi[t] = mutual_information_2x2(a, b, c, d);
  }

  auto chi2_rank = rank_by(table.terms, chi2);
  auto mi_rank = rank_by(table.terms, mi);

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    double cx = static_cast<double>(chi2_rank[x] + mi_rank[x]);
    double cy = static_cast<double>(chi2_rank[y] + mi_rank[y]);
    if (cx != cy) return cx < cy;
    return table.terms[x] < table.terms[y];
  });

  KeywordReport report;
  report.requested = std::min(k, m);
  report.keywords.reserve(report.requested);
  for (std::size_t pos = 0; pos < report.requested; ++pos) {
    std::size_t t = order[pos];
    KeywordScore ks;
    ks.term = table.terms[t];
    ks.chi2 = chi2[t];
    ks.mutual_information = mi[t];
    ks.chi2_rank = chi2_rank[t];
    ks.mi_rank = mi_rank[t];
    ks.combined_rank = 0.5 * static_cast<double>(chi2_rank[t] + mi_rank[t]);
    report.keywords.push_back(std::move(ks));
  }
  return report;
}

std::vector<std::size_t> keyword_emotion_profile(const KeywordReport& report,
                                                 const Lexicon& lexicon) {
  std::vector<std::size_t> profile(lexicon.emotions.size() + 1, 0);
  for (const auto& kw : report.keywords) {
    auto it = lexicon.entries.find(kw.term);
    if (it == lexicon.entries.end()) ++profile.back();
    else ++profile[it->second];
  }
  return profile;
}

namespace {

// Logit training for fold evaluation: runs the shared IRLS but keeps the
// diverged coefficients on separation, since sign(eta) still classifies.
Eigen::VectorXd fold_logit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  auto keep = detail::independent_columns(x);
  Eigen::MatrixXd xr(x.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) xr.col(static_cast<Eigen::Index>(c)) = x.col(keep[c]);

  FitOptions options;
  options.max_iterations = 50;
  auto outcome = detail::irls_logit(xr, y, options);

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(x.cols());
  for (std::size_t c = 0; c < keep.size(); ++c) beta[keep[c]] = outcome.beta[static_cast<Eigen::Index>(c)];
  return beta;
}

} // namespace

double separability_cv(std::span<const NewsItem* const> positive,
                       std::span<const NewsItem* const> negative, std::size_t folds,
                       std::size_t top_terms, std::uint64_t seed) {
  if (folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
  if (positive.size() < folds || negative.size() < folds)
    throw ConfigError("each class needs at least one item per fold");
  if (top_terms == 0) throw ConfigError("top_terms must be >= 1");

  // Stratified fold assignment: shuffle within class, deal round-robin.
  std::mt19937_64 rng(seed);
  struct Doc {
    const NewsItem* item;
    int label;
    std::size_t fold;
  };
  std::vector<Doc> docs;
  auto deal = [&](std::span<const NewsItem* const> items, int label) {
    std::vector<std::size_t> idx(items.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t i = 0; i < idx.size(); ++i)
      docs.push_back({items[idx[i]], label, i % folds});
  };
  deal(positive, 1);
  deal(negative, 0);

  double correct = 0.0;
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<const NewsItem*> train_pos, train_neg;
    std::vector<const Doc*> test;
    for (const auto& doc : docs) {
      if (doc.fold == f) test.push_back(&doc);
      else if (doc.label == 1) train_pos.push_back(doc.item);
      else train_neg.push_back(doc.item);
    }

    // Feature selection strictly inside the training fold, by chi-square.
    KeywordReport scored = score_keywords(train_pos, train_neg,
                                          std::numeric_limits<std::size_t>::max());
    std::vector<const KeywordScore*> by_chi2;
    by_chi2.reserve(scored.keywords.size());
    for (const auto& kw : scored.keywords) by_chi2.push_back(&kw);
    std::sort(by_chi2.begin(), by_chi2.end(), [](const KeywordScore* a, const KeywordScore* b) {
      return a->chi2_rank < b->chi2_rank;
    });
    if (by_chi2.size() > top_terms) by_chi2.resize(top_terms);
    KeywordReport selected;
    selected.requested = by_chi2.size();
    for (const KeywordScore* kw : by_chi2) selected.keywords.push_back(*kw);
    std::unordered_map<std::string, std::size_t> feature_index;
    for (const auto& kw : selected.keywords)
      feature_index.emplace(kw.term, feature_index.size());

    std::vector<const NewsItem*> train_items(train_pos);
    train_items.insert(train_items.end(), train_neg.begin(), train_neg.end());
    TermMatrix tm = build_term_matrix(train_items);
    std::unordered_map<std::string, double> idf;
    for (std::size_t t = 0; t < tm.vocabulary.size(); ++t) idf.emplace(tm.vocabulary[t], tm.idf[t]);

    auto featurize = [&](const NewsItem* item) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(feature_index.size() + 1));
      row[0] = 1.0; // intercept
      std::unordered_map<std::size_t, double> tf;
      for (const auto& token : item->tokens) {
        auto it = feature_index.find(token);
        if (it != feature_index.end()) tf[it->second] += 1.0;
      }
      for (const auto& [col, count] : tf) {
        auto w = idf.find(selected.keywords[col].term);
        double weight = w == idf.end() ? 1.0 : w->second;
        row[static_cast<Eigen::Index>(col + 1)] = count * weight;
      }
      return row;
    };

    Eigen::MatrixXd x(static_cast<Eigen::Index>(train_items.size()),
                      static_cast<Eigen::Index>(feature_index.size() + 1));
    Eigen::VectorXd y(static_cast<Eigen::Index>(train_items.size()));
    for (std::size_t i = 0; i < train_items.size(); ++i) {
      x.row(static_cast<Eigen::Index>(i)) = featurize(train_items[i]).transpose();
      y[static_cast<Eigen::Index>(i)] = i < train_pos.size() ? 1.0 : 0.0;
    }

    Eigen::VectorXd beta = fold_logit(x, y);
    for (const Doc* doc : test) {
      double eta = featurize(doc->item).dot(beta);
      int predicted = eta > 0.0 ? 1 : 0;
      if (predicted == doc->label) correct += 1.0;
    }
  }
  return correct / static_cast<double>(docs.size());
}

} // namespace viralens
