#include "viralens/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "viralens/errors.hpp"

namespace viralens {

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ConfigError("K-S test requires non-empty samples");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());

  const auto n1 = sa.size();
  const auto n2 = sb.size();
  double d = 0.0;
  std::size_t ia = 0, ib = 0;
  while (ia < n1 || ib < n2) {
    double v = std::numeric_limits<double>::infinity();
    if (ia < n1) v = sa[ia];
    if (ib < n2 && sb[ib] < v) v = sb[ib];
    while (ia < n1 && sa[ia] == v) ++ia;
    while (ib < n2 && sb[ib] == v) ++ib;
    double gap = std::abs(static_cast<double>(ia) / static_cast<double>(n1) -
                          static_cast<double>(ib) / static_cast<double>(n2));
    if (gap > d) d = gap;
  }

  KsResult res;
  res.statistic = d;
  res.n1 = n1;
  res.n2 = n2;
  if (d == 0.0) {
    res.p_value = 1.0;
    return res;
  }
  double ne = static_cast<double>(n1) * static_cast<double>(n2) /
              (static_cast<double>(n1) + static_cast<double>(n2));
  res.p_value = kolmogorov_survival(std::sqrt(ne) * d);
  return res;
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  const double t2 = -2.0 * lambda * lambda;
  for (int k = 1; k <= 100000; ++k) {
    double term = std::exp(t2 * static_cast<double>(k) * static_cast<double>(k));
    sum += sign * term;
    if (term < 1e-12) break;
    sign = -sign;
  }
  double p = 2.0 * sum;
  return std::clamp(p, 0.0, 1.0);
}

namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0; // unbiased
  std::size_t n = 0;
};

Moments moments(std::span<const double> x) {
  Moments m;
  m.n = x.size();
  for (double v : x) m.mean += v;
  m.mean /= static_cast<double>(m.n);
  for (double v : x) m.var += (v - m.mean) * (v - m.mean);
  m.var /= static_cast<double>(m.n - 1);
  return m;
}

} // namespace

std::optional<TTestResult> t_two_sample(std::span<const double> a,
                                        std::span<const double> b,
                                        TTestVariant variant) {
  if (a.size() < 2 || b.size() < 2)
    throw ConfigError("t test requires at least 2 observations per sample");
  Moments ma = moments(a);
  Moments mb = moments(b);
  double na = static_cast<double>(ma.n), nb = static_cast<double>(mb.n);

  double se, df;
  if (variant == TTestVariant::Pooled) {
    double pooled = ((na - 1.0) * ma.var + (nb - 1.0) * mb.var) / (na + nb - 2.0);
    se = std::sqrt(pooled * (1.0 / na + 1.0 / nb));
    df = na + nb - 2.0;
  } else {
    double va = ma.var / na, vb = mb.var / nb;
    se = std::sqrt(va + vb);
    df = (va + vb) * (va + vb) /
         (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    if (!std::isfinite(df)) df = na + nb - 2.0;
  }
  if (se == 0.0 || !std::isfinite(se)) return std::nullopt;

  TTestResult res;
  res.t = (ma.mean - mb.mean) / se;
  res.df = df;
  res.p_value = 2.0 * (1.0 - students_t_cdf(std::abs(res.t), df));
  res.p_value = std::clamp(res.p_value, 0.0, 1.0);
  return res;
}

namespace {

// Continued fraction for the incomplete beta function (Lentz's method).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-10;
  constexpr double kTiny = 1e-300;

  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

} // namespace

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                    a * std::log(x) + b * std::log1p(-x);
  double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double students_t_cdf(double t, double df) {
  if (df <= 0.0) throw ConfigError("degrees of freedom must be positive");
  if (t == 0.0) return 0.5;
  double x = df / (df + t * t);
  double tail = 0.5 * incomplete_beta(df / 2.0, 0.5, x);
  return t > 0.0 ? 1.0 - tail : tail;
}

std::vector<std::pair<double, double>> ccdf_points(std::span<const double> sample) {
  if (sample.empty()) throw ConfigError("CCDF of an empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());

  std::vector<std::pair<double, double>> points;
  std::size_t i = 0;
  while (i < sorted.size()) {
    double v = sorted[i];
    // P(X >= v) = fraction of observations at or above v
    points.emplace_back(v, static_cast<double>(sorted.size() - i) / n);
    while (i < sorted.size() && sorted[i] == v) ++i;
  }
  return points;
}

std::array<double, 4> debias_motivations(double m1, double m2, double m3, double m4) {
  double mean = (m1 + m2 + m3 + m4) / 4.0;
  return {m1 - mean, m2 - mean, m3 - mean, m4 - mean};
}

} // namespace viralens
