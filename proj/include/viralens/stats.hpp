#ifndef VIRALENS_STATS_HPP
#define VIRALENS_STATS_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace viralens {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

// Two-sided two-sample Kolmogorov-Smirnov test. The statistic is the exact
// sup of |ECDF_a - ECDF_b|; the p-value uses the asymptotic Kolmogorov
// series with effective size n1*n2/(n1+n2). Throws on empty samples.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

// Complementary Kolmogorov distribution Q(lambda) = 2 * sum_k (-1)^(k-1)
// exp(-2 k^2 lambda^2), truncated when a term drops below 1e-12.
double kolmogorov_survival(double lambda);

enum class TTestVariant { Welch, Pooled };

struct TTestResult {
  double t = 0.0;
  double p_value = 1.0;
  double df = 0.0;
};

// Two-sample t test; Welch by default. Returns nullopt when the standard
// error vanishes (zero variance on both sides). Requires >= 2 observations
// per sample.
std::optional<TTestResult> t_two_sample(std::span<const double> a,
                                        std::span<const double> b,
                                        TTestVariant variant = TTestVariant::Welch);

// P(T <= t) for Student's t with df degrees of freedom, via the regularized
// incomplete beta function (continued fraction, tolerance 1e-10).
double students_t_cdf(double t, double df);

// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

// Sorted unique values paired with exceedance fractions P(X >= value).
std::vector<std::pair<double, double>> ccdf_points(std::span<const double> sample);

// Each motivation mean minus the mean of all four, removing per-subject
// response-scale bias.
std::array<double, 4> debias_motivations(double m1, double m2, double m3, double m4);

} // namespace viralens

#endif
