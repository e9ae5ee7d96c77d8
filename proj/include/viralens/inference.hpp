#ifndef VIRALENS_INFERENCE_HPP
#define VIRALENS_INFERENCE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "viralens/corpus.hpp"
#include "viralens/emotion.hpp"

namespace viralens {

enum class Response { FakeIndicator, Retweets48h, HNewsIndicator };
enum class ModelKind { Logit, Linear };

struct ModelSpec {
  Response response = Response::FakeIndicator;
  // "anger", "joy", "other_emotions", or any emotion-set category name.
  std::vector<std::string> emotion_terms = {"anger", "joy", "other_emotions"};
  std::vector<std::string> controls = {"follower", "friend",   "mention",
                                       "hashtag",  "location", "date",
                                       "url",      "length",   "emergency",
                                       "topic_dummies"};
  // Per-variable transform override; recognized: "log10p" (default for
  // follower/friend), "raw".
  std::map<std::string, std::string> transforms;
};

struct DesignMatrix {
  std::vector<std::string> row_ids;
  std::vector<std::string> columns; // "(Intercept)" first
  Eigen::MatrixXd values;
  std::vector<std::pair<std::string, std::string>> dropped_columns; // name, reason

  std::optional<std::size_t> column_index(const std::string& name) const;
};

// Assembles intercept, emotion occupations, content/user controls and topic
// dummies (most frequent topic is the reference level). Columns that would
// make the matrix rank deficient are dropped greedily, later-specified
// columns first, with reasons recorded.
DesignMatrix build_design(std::span<const NewsItem* const> items,
                          const std::unordered_map<std::string, EmotionDistribution>& emotions,
                          const ModelSpec& spec, const EmotionSet& emotion_set,
                          const FeatureConfig& features = {});
DesignMatrix build_design(const Corpus& corpus,
                          const std::unordered_map<std::string, EmotionDistribution>& emotions,
                          const ModelSpec& spec, const EmotionSet& emotion_set,
                          const FeatureConfig& features = {});

struct ResponseConfig {
  std::int64_t window_seconds = 48 * 3600;
  std::int64_t h_retweet_threshold = 10;
};

// Response vector aligned with the item span. FakeIndicator requires
// labeled items.
std::vector<double> build_response(std::span<const NewsItem* const> items,
                                   Response response, const ResponseConfig& config = {});

struct FitOptions {
  double tol = 1e-8;
  int max_iterations = 100;
  bool hc0 = false; // HC1 small-sample factor n/(n-p) unless set
  double separation_threshold = 1e3;
};

struct RegressionResult {
  ModelKind model = ModelKind::Linear;
  std::vector<std::string> terms;
  Eigen::VectorXd coefficients;
  Eigen::VectorXd robust_se;
  Eigen::VectorXd p_values;
  Eigen::MatrixXd robust_cov;
  std::size_t n = 0;
  double log_likelihood = 0.0; // logit
  double r_squared = 0.0;      // linear
  int iterations = 0;
  bool converged = false;

  std::optional<double> coefficient(const std::string& term) const;
  std::optional<double> se(const std::string& term) const;
};

// Maximum-likelihood logit via iteratively reweighted least squares with an
// HC1 sandwich covariance. Throws ModelError on a one-class response and
// SeparationError when the data are linearly separable.
RegressionResult fit_logit(const DesignMatrix& design, const std::vector<double>& y,
                           const FitOptions& options = {});

// Least squares with HC1 sandwich covariance and R^2.
RegressionResult fit_linear(const DesignMatrix& design, const std::vector<double>& y,
                            const FitOptions& options = {});

// Predicted response change for a shift in emotion composition:
// beta_anger*d_anger + beta_joy*d_joy + beta_other*d_other. A nonzero shift
// on a column absent from the model is an error.
double composition_shift_effect(const RegressionResult& result, double d_anger,
                                double d_joy, double d_other);

namespace detail {

// Greedy selection of linearly independent columns in the given order
// (modified Gram-Schmidt with a relative tolerance).
std::vector<Eigen::Index> independent_columns(const Eigen::MatrixXd& m, double tol = 1e-9);

struct IrlsOutcome {
  Eigen::VectorXd beta;
  int iterations = 0;
  bool converged = false;
  bool separated = false;
  double log_likelihood = 0.0;
  std::vector<Eigen::Index> suspect_columns;
};

IrlsOutcome irls_logit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                       const FitOptions& options);

} // namespace detail

} // namespace viralens

#endif
