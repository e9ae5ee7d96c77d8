#include "viralens/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "viralens/errors.hpp"
#include "viralens/stats.hpp"

namespace viralens {

std::optional<std::size_t> DesignMatrix::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  return std::nullopt;
}

std::optional<double> RegressionResult::coefficient(const std::string& term) const {
  for (std::size_t i = 0; i < terms.size(); ++i)
    if (terms[i] == term) return coefficients[static_cast<Eigen::Index>(i)];
  return std::nullopt;
}

std::optional<double> RegressionResult::se(const std::string& term) const {
  for (std::size_t i = 0; i < terms.size(); ++i)
    if (terms[i] == term) return robust_se[static_cast<Eigen::Index>(i)];
  return std::nullopt;
}

namespace {

double apply_transform(double raw, const std::string& transform) {
  if (transform == "log10p") return std::log10(1.0 + raw);
  return raw;
}

std::string transform_for(const ModelSpec& spec, const std::string& variable,
                          const std::string& fallback) {
  auto it = spec.transforms.find(variable);
  if (it == spec.transforms.end()) return fallback;
  if (it->second != "raw" && it->second != "log10p")
    throw ConfigError("unknown transform \"" + it->second + "\" for " + variable);
  return it->second;
}

} // namespace

DesignMatrix build_design(std::span<const NewsItem* const> items,
                          const std::unordered_map<std::string, EmotionDistribution>& emotions,
                          const ModelSpec& spec, const EmotionSet& emotion_set,
                          const FeatureConfig& feature_config) {
  if (items.empty()) throw ModelError("design matrix needs at least one row");

  const std::size_t n = items.size();
  auto anger_idx = emotion_set.index_of("anger");
  auto joy_idx = emotion_set.index_of("joy");

  std::vector<std::string> names;
  std::vector<Eigen::VectorXd> cols;
  auto add_column = [&](const std::string& name, Eigen::VectorXd v) {
    names.push_back(name);
    cols.push_back(std::move(v));
  };

  add_column("(Intercept)", Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n)));

  // Emotion occupations. Neutral items contribute zeros throughout.
  std::vector<const EmotionDistribution*> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = emotions.find(items[i]->id);
    if (it == emotions.end())
      throw ModelError("missing emotion distribution for item \"" + items[i]->id + "\"");
    if (it->second.occupations.size() != emotion_set.size())
      throw ModelError("emotion distribution size mismatch for item \"" + items[i]->id + "\"");
    dist[i] = &it->second;
  }
  for (const auto& term : spec.emotion_terms) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    if (term == "other_emotions") {
      for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t e = 0; e < emotion_set.size(); ++e) {
          if (anger_idx && e == *anger_idx) continue;
          if (joy_idx && e == *joy_idx) continue;
          sum += dist[i]->occupations[e];
        }
        v[static_cast<Eigen::Index>(i)] = sum;
      }
    } else {
      auto e = emotion_set.index_of(term);
      if (!e) throw ConfigError("unknown emotion term \"" + term + "\"");
      for (std::size_t i = 0; i < n; ++i)
        v[static_cast<Eigen::Index>(i)] = dist[i]->occupations[*e];
    }
    add_column(term, std::move(v));
  }

  // Content and author controls.
  bool want_topics = false;
  std::vector<std::optional<ContentFeatures>> feats(n);
  auto features_of = [&](std::size_t i) -> const ContentFeatures& {
    if (!feats[i]) feats[i] = extract_features(*items[i], feature_config);
    return *feats[i];
  };
  for (const auto& control : spec.controls) {
    if (control == "topic_dummies") {
      want_topics = true;
      continue;
    }
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    if (control == "follower" || control == "friend") {
      std::string tr = transform_for(spec, control, "log10p");
      for (std::size_t i = 0; i < n; ++i) {
        double raw = static_cast<double>(control == "follower" ? items[i]->author.followers
                                                               : items[i]->author.friends);
        v[static_cast<Eigen::Index>(i)] = apply_transform(raw, tr);
      }
    } else if (control == "length") {
      std::string tr = transform_for(spec, control, "raw");
      for (std::size_t i = 0; i < n; ++i)
        v[static_cast<Eigen::Index>(i)] =
            apply_transform(static_cast<double>(features_of(i).length), tr);
    } else if (control == "mention" || control == "hashtag" || control == "location" ||
               control == "date" || control == "url" || control == "emergency") {
      for (std::size_t i = 0; i < n; ++i) {
        const ContentFeatures& f = features_of(i);
        bool bit = control == "mention"    ? f.mention
                   : control == "hashtag"  ? f.hashtag
                   : control == "location" ? f.location
                   : control == "date"     ? f.date
                   : control == "url"      ? f.url
                                           : f.emergency;
        v[static_cast<Eigen::Index>(i)] = bit ? 1.0 : 0.0;
      }
    } else {
      throw ConfigError("unknown control variable \"" + control + "\"");
    }
    add_column(control, std::move(v));
  }

  if (want_topics) {
    std::map<std::string, std::size_t> counts;
    for (std::size_t i = 0; i < n; ++i)
      if (items[i]->topic) ++counts[*items[i]->topic];
    if (counts.size() > 1) {
      // Most frequent topic becomes the reference level (ties favor the
      // lexicographically smaller name, which std::map order gives us).
      std::string reference;
      std::size_t best = 0;
      for (const auto& [topic, c] : counts) {
        if (c > best) {
          best = c;
          reference = topic;
        }
      }
      for (const auto& [topic, c] : counts) {
        if (topic == reference) continue;
        Eigen::VectorXd v(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i)
          v[static_cast<Eigen::Index>(i)] =
              items[i]->topic && *items[i]->topic == topic ? 1.0 : 0.0;
        add_column("topic=" + topic, std::move(v));
      }
    }
  }

  Eigen::MatrixXd full(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(names.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    full.col(static_cast<Eigen::Index>(c)) = cols[c];

  auto keep = detail::independent_columns(full);
  DesignMatrix design;
  design.row_ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) design.row_ids.push_back(items[i]->id);

  std::set<Eigen::Index> kept(keep.begin(), keep.end());
  design.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(keep.size()));
  Eigen::Index out = 0;
  for (Eigen::Index c = 0; c < full.cols(); ++c) {
    if (kept.count(c)) {
      design.values.col(out++) = full.col(c);
      design.columns.push_back(names[static_cast<std::size_t>(c)]);
    } else {
      bool zero = full.col(c).cwiseAbs().maxCoeff() == 0.0;
      design.dropped_columns.emplace_back(
          names[static_cast<std::size_t>(c)],
          zero ? "all-zero column" : "collinear with retained columns");
    }
  }
  if (design.columns.empty()) throw ModelError("no regressors left after rank repair");
  return design;
}

DesignMatrix build_design(const Corpus& corpus,
                          const std::unordered_map<std::string, EmotionDistribution>& emotions,
                          const ModelSpec& spec, const EmotionSet& emotion_set,
                          const FeatureConfig& feature_config) {
  std::vector<const NewsItem*> items;
  items.reserve(corpus.items.size());
  for (const auto& item : corpus.items) items.push_back(&item);
  return build_design(items, emotions, spec, emotion_set, feature_config);
}

std::vector<double> build_response(std::span<const NewsItem* const> items,
                                   Response response, const ResponseConfig& config) {
  std::vector<double> y;
  y.reserve(items.size());
  for (const NewsItem* item : items) {
    switch (response) {
      case Response::FakeIndicator:
        if (item->label == Label::Unlabeled)
          throw ModelError("unlabeled item \"" + item->id + "\" in a fake-indicator model");
        y.push_back(item->label == Label::Fake ? 1.0 : 0.0);
        break;
      case Response::Retweets48h: {
        std::size_t count = 0;
        for (const auto& ev : item->retweets)
          if (ev.created_at - item->created_at <= config.window_seconds) ++count;
        y.push_back(static_cast<double>(count));
        break;
      }
      case Response::HNewsIndicator:
        y.push_back(static_cast<std::int64_t>(item->retweets.size()) >=
                            config.h_retweet_threshold
                        ? 1.0
                        : 0.0);
        break;
    }
  }
  return y;
}

namespace detail {

std::vector<Eigen::Index> independent_columns(const Eigen::MatrixXd& m, double tol) {
  std::vector<Eigen::Index> kept;
  std::vector<Eigen::VectorXd> basis; // orthonormal
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    Eigen::VectorXd v = m.col(c);
    double original = v.norm();
    if (original == 0.0) continue;
    // Two projection passes for numerical stability.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) v -= b.dot(v) * b;
    double residual = v.norm();
    if (residual <= tol * original) continue;
    basis.push_back(v / residual);
    kept.push_back(c);
  }
  return kept;
}

IrlsOutcome irls_logit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                       const FitOptions& options) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  IrlsOutcome out;
  out.beta = Eigen::VectorXd::Zero(p);

  auto log_likelihood = [&](const Eigen::VectorXd& beta) {
    Eigen::VectorXd eta = x * beta;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      // y*eta - log(1 + exp(eta)), stable against large |eta|
      double e = eta[i];
      ll += y[i] * e - (e > 0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e)));
    }
    return ll;
  };

  // Complete separation in floating point stalls rather than diverges: the
  // clamped weights cap the step size and |beta| creeps logarithmically,
  // never crossing a blow-up threshold. A perfect classification margin
  // beyond kSaturationMargin (every probability within ~3e-7 of its label)
  // identifies the same condition, so both tests run.
  constexpr double kSaturationMargin = 15.0;
  auto classification_margin = [&](const Eigen::VectorXd& beta) {
    Eigen::VectorXd eta = x * beta;
    double margin = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i)
      margin = std::min(margin, y[i] > 0.5 ? eta[i] : -eta[i]);
    return margin;
  };
  auto mark_separated = [&](double ll) {
    out.separated = true;
    out.log_likelihood = ll;
    double max_beta = out.beta.cwiseAbs().maxCoeff();
    for (Eigen::Index j = 0; j < p; ++j)
      if (std::abs(out.beta[j]) > 0.5 * max_beta) out.suspect_columns.push_back(j);
  };

  double prev_ll = log_likelihood(out.beta);
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    Eigen::VectorXd eta = x * out.beta;
    Eigen::VectorXd mu(n), w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double m = 1.0 / (1.0 + std::exp(-eta[i]));
      mu[i] = m;
      w[i] = std::max(m * (1.0 - m), 1e-10);
    }
    Eigen::MatrixXd xtwx = x.transpose() * w.asDiagonal() * x;
    Eigen::VectorXd rhs = x.transpose() * (y - mu);
    Eigen::LDLT<Eigen::MatrixXd> solver(xtwx);
    if (solver.info() != Eigen::Success)
      throw ModelError("information matrix is singular");
    Eigen::VectorXd step = solver.solve(rhs);

    out.beta += step;
    out.iterations = iter;
    double ll = log_likelihood(out.beta);

    if (ll >= prev_ll && (out.beta.cwiseAbs().maxCoeff() > options.separation_threshold ||
                          classification_margin(out.beta) > kSaturationMargin)) {
      mark_separated(ll);
      return out;
    }
    prev_ll = ll;
    if (step.cwiseAbs().maxCoeff() < options.tol) {
      out.converged = true;
      break;
    }
  }
  // Ran out of iterations while classifying perfectly: the likelihood has
  // no finite maximizer.
  if (!out.converged && classification_margin(out.beta) > 0.0) {
    mark_separated(prev_ll);
    return out;
  }
  out.log_likelihood = prev_ll;
  return out;
}

} // namespace detail

namespace {

Eigen::VectorXd to_eigen(const std::vector<double>& y) {
  return Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
}

// bread * meat * bread with the HC1 factor n/(n-p); symmetrized so the
// result is PSD up to roundoff.
Eigen::MatrixXd sandwich(const Eigen::MatrixXd& bread, const Eigen::MatrixXd& x,
                         const Eigen::VectorXd& residuals, bool hc0) {
  const auto n = static_cast<double>(x.rows());
  const auto p = static_cast<double>(x.cols());
  Eigen::MatrixXd meat = x.transpose() * residuals.array().square().matrix().asDiagonal() * x;
  Eigen::MatrixXd cov = bread * meat * bread;
  if (!hc0) cov *= n / (n - p);
  return 0.5 * (cov + cov.transpose());
}

void fill_wald(RegressionResult& res, const Eigen::MatrixXd& cov, bool t_dist, double df) {
  const Eigen::Index p = res.coefficients.size();
  res.robust_cov = cov;
  res.robust_se.resize(p);
  res.p_values.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    double se = std::sqrt(std::max(cov(j, j), 0.0));
    res.robust_se[j] = se;
    if (se == 0.0) {
      res.p_values[j] = res.coefficients[j] == 0.0 ? 1.0 : 0.0;
      continue;
    }
    double z = res.coefficients[j] / se;
    double pval = t_dist ? 2.0 * (1.0 - students_t_cdf(std::abs(z), df))
                         : std::erfc(std::abs(z) / std::sqrt(2.0));
    res.p_values[j] = std::clamp(pval, 0.0, 1.0);
  }
}

} // namespace

RegressionResult fit_logit(const DesignMatrix& design, const std::vector<double>& y,
                           const FitOptions& options) {
  const Eigen::Index n = design.values.rows();
  if (static_cast<Eigen::Index>(y.size()) != n)
    throw ModelError("response length does not match design rows");
  double ones = 0;
  for (double v : y) {
    if (v != 0.0 && v != 1.0) throw ModelError("logit response must be 0/1");
    ones += v;
  }
  if (ones == 0 || ones == static_cast<double>(n))
    throw ModelError("logit response has a single class");

  Eigen::VectorXd yv = to_eigen(y);
  auto outcome = detail::irls_logit(design.values, yv, options);
  if (outcome.separated) {
    std::string cols;
    for (auto j : outcome.suspect_columns) {
      if (!cols.empty()) cols += ", ";
      cols += design.columns[static_cast<std::size_t>(j)];
    }
    throw SeparationError("logit did not converge: separation suspected on {" + cols + "}");
  }

  RegressionResult res;
  res.model = ModelKind::Logit;
  res.terms = design.columns;
  res.coefficients = outcome.beta;
  res.n = static_cast<std::size_t>(n);
  res.iterations = outcome.iterations;
  res.converged = outcome.converged;
  res.log_likelihood = outcome.log_likelihood;

  Eigen::VectorXd eta = design.values * outcome.beta;
  Eigen::VectorXd mu(n), w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    mu[i] = 1.0 / (1.0 + std::exp(-eta[i]));
    w[i] = std::max(mu[i] * (1.0 - mu[i]), 1e-10);
  }
  Eigen::MatrixXd xtwx = design.values.transpose() * w.asDiagonal() * design.values;
  Eigen::MatrixXd bread = xtwx.ldlt().solve(
      Eigen::MatrixXd::Identity(design.values.cols(), design.values.cols()));
  fill_wald(res, sandwich(bread, design.values, yv - mu, options.hc0),
            /*t_dist=*/false, 0.0);
  return res;
}

RegressionResult fit_linear(const DesignMatrix& design, const std::vector<double>& y,
                            const FitOptions& options) {
  const Eigen::Index n = design.values.rows();
  const Eigen::Index p = design.values.cols();
  if (static_cast<Eigen::Index>(y.size()) != n)
    throw ModelError("response length does not match design rows");
  if (n <= p) throw ModelError("linear model needs more rows than columns");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design.values);
  if (qr.rank() < p) throw ModelError("design matrix is rank deficient");
  Eigen::VectorXd yv = to_eigen(y);
  Eigen::VectorXd beta = qr.solve(yv);

  RegressionResult res;
  res.model = ModelKind::Linear;
  res.terms = design.columns;
  res.coefficients = beta;
  res.n = static_cast<std::size_t>(n);
  res.iterations = 1;
  res.converged = true;

  Eigen::VectorXd residuals = yv - design.values * beta;
  double tss = (yv.array() - yv.mean()).square().sum();
  double rss = residuals.squaredNorm();
  res.r_squared = tss == 0.0 ? 1.0 : 1.0 - rss / tss;

  Eigen::MatrixXd xtx = design.values.transpose() * design.values;
  Eigen::MatrixXd bread = xtx.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
  fill_wald(res, sandwich(bread, design.values, residuals, options.hc0),
            /*t_dist=*/true, static_cast<double>(n - p));
  return res;
}

double composition_shift_effect(const RegressionResult& result, double d_anger,
                                double d_joy, double d_other) {
  auto term = [&](const std::string& name, double delta) {
    if (delta == 0.0) return 0.0;
    auto beta = result.coefficient(name);
    if (!beta)
      throw ModelError("model has no \"" + name + "\" column for a nonzero shift");
    return *beta * delta;
  };
  return term("anger", d_anger) + term("joy", d_joy) + term("other_emotions", d_other);
}

} // namespace viralens
