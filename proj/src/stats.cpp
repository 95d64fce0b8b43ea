#include "melorig/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "melorig/errors.hpp"

namespace melorig {

namespace {

constexpr double kIncBetaTol = 1e-14;
constexpr int kIncBetaMaxIter = 300;

// Continued fraction for the regularized incomplete beta, modified Lentz.
double incbeta_cf(double a, double b, double x) {
  const double tiny = 1e-300;
  double qab = a + b;
  double qap = a + 1.0;
  double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kIncBetaMaxIter; ++m) {
    double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kIncBetaTol) return h;
  }
  return h;
}

double incbeta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double lfront = a * std::log(x) + b * std::log1p(-x) -
                  (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
  double front = std::exp(lfront);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * incbeta_cf(a, b, x) / a;
  return 1.0 - front * incbeta_cf(b, a, 1.0 - x) / b;
}

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s / static_cast<double>(v.size() - 1);
}

void require_same_length(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    raise(Errc::LengthMismatch, "input lengths differ: " + std::to_string(x.size()) +
                                    " vs " + std::to_string(y.size()));
}

}  // namespace

double student_t_sf(double t, double df) {
  if (!(df > 0.0)) raise(Errc::BadDf, "degrees of freedom must be positive");
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return t > 0.0 ? 0.0 : 1.0;
  double x = df / (df + t * t);
  double half_tail = 0.5 * incbeta(0.5 * df, 0.5, x);
  return t >= 0.0 ? half_tail : 1.0 - half_tail;
}

double student_t_two_sided_quantile(double alpha, double df) {
  if (!(df > 0.0)) raise(Errc::BadDf, "degrees of freedom must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) raise(Errc::BadDf, "alpha must be in (0,1)");
  auto two_sided = [df](double q) { return 2.0 * student_t_sf(q, df); };
  double lo = 0.0, hi = 1.0;
  while (two_sided(hi) > alpha) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) return hi;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-16 * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    if (two_sided(mid) > alpha)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

RegressionResult linear_regression(std::span<const double> x, std::span<const double> y) {
  require_same_length(x, y);
  std::size_t n = x.size();
  if (n < 3) raise(Errc::TooFewSamples, "linear regression needs at least 3 points");
  double mx = mean_of(x), my = mean_of(y);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0) raise(Errc::DegenerateX, "x values are constant");

  RegressionResult r;
  r.n = n;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double denom = std::sqrt(sxx * syy);
  r.r = denom == 0.0 ? 0.0 : std::clamp(sxy / denom, -1.0, 1.0);
  r.r_squared = r.r * r.r;
  double ssr = std::max(0.0, syy - r.slope * sxy);
  double df = static_cast<double>(n - 2);
  r.stderr_slope = std::sqrt(ssr / df / sxx);
  if (r.stderr_slope == 0.0) {
    r.p_value = 0.0;  // perfect fit
  } else {
    r.p_value = 2.0 * student_t_sf(std::fabs(r.slope / r.stderr_slope), df);
  }
  return r;
}

OlsResult ols_no_intercept(std::span<const double> y, std::span<const double> x) {
  require_same_length(x, y);
  std::size_t n = x.size();
  if (n < 2) raise(Errc::TooFewSamples, "no-intercept OLS needs at least 2 points");
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  if (sxx == 0.0) raise(Errc::DegenerateX, "x values are all zero");

  OlsResult o;
  o.n = n;
  o.coef = sxy / sxx;

  std::vector<double> e(n);
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    e[i] = y[i] - o.coef * x[i];
    ssr += e[i] * e[i];
  }

  double nd = static_cast<double>(n);
  double df = nd - 1.0;
  o.std_err = std::sqrt(ssr / df / sxx);
  if (o.std_err == 0.0) {
    o.t_stat = o.coef == 0.0 ? 0.0
                             : std::copysign(std::numeric_limits<double>::infinity(), o.coef);
    o.p_value = 0.0;  // perfect fit
    o.ci_low = o.ci_high = o.coef;
    o.f_stat = std::numeric_limits<double>::infinity();
  } else {
    o.t_stat = o.coef / o.std_err;
    o.p_value = 2.0 * student_t_sf(std::fabs(o.t_stat), df);
    double tcrit = student_t_two_sided_quantile(0.05, df);
    o.ci_low = o.coef - tcrit * o.std_err;
    o.ci_high = o.coef + tcrit * o.std_err;
    o.f_stat = o.t_stat * o.t_stat;
  }

  o.r2_uncentered = syy == 0.0 ? 1.0 : 1.0 - ssr / syy;
  o.r2_adj_uncentered = 1.0 - (1.0 - o.r2_uncentered) * nd / df;

  if (ssr > 0.0) {
    o.log_likelihood =
        -0.5 * nd * (std::log(2.0 * std::numbers::pi) + std::log(ssr / nd) + 1.0);
  } else {
    o.log_likelihood = std::numeric_limits<double>::infinity();
  }
  o.aic = 2.0 - 2.0 * o.log_likelihood;
  o.bic = std::log(nd) - 2.0 * o.log_likelihood;

  double dnum = 0.0;
  for (std::size_t i = 1; i < n; ++i) dnum += (e[i] - e[i - 1]) * (e[i] - e[i - 1]);
  o.durbin_watson = ssr > 0.0 ? dnum / ssr : 0.0;

  // Jarque-Bera conventions: biased moments about the residual mean, raw
  // kurtosis (normal = 3).
  double me = 0.0;
  for (double v : e) me += v;
  me /= nd;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : e) {
    double d = v - me;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= nd;
  m3 /= nd;
  m4 /= nd;
  if (m2 > 0.0) {
    o.skew = m3 / std::pow(m2, 1.5);
    o.kurtosis = m4 / (m2 * m2);
  } else {
    o.skew = 0.0;
    o.kurtosis = 3.0;
  }
  o.jarque_bera =
      nd / 6.0 * (o.skew * o.skew + 0.25 * (o.kurtosis - 3.0) * (o.kurtosis - 3.0));
  o.jb_p = std::exp(-0.5 * o.jarque_bera);  // chi-squared(2) survival
  return o;
}

TTestResult welch_t_test(std::span<const double> a, std::span<const double> b,
                         bool pooled) {
  if (a.size() < 2 || b.size() < 2)
    raise(Errc::TooFewSamples, "both samples need at least 2 values");
  TTestResult t;
  t.n_a = a.size();
  t.n_b = b.size();
  t.mean_a = mean_of(a);
  t.mean_b = mean_of(b);
  double va = sample_variance(a, t.mean_a);
  double vb = sample_variance(b, t.mean_b);
  if (va == 0.0 && vb == 0.0)
    raise(Errc::ZeroVariance, "both samples have zero variance");

  double na = static_cast<double>(t.n_a), nb = static_cast<double>(t.n_b);
  double se;
  if (pooled) {
    double sp2 = ((na - 1.0) * va + (nb - 1.0) * vb) / (na + nb - 2.0);
    se = std::sqrt(sp2 * (1.0 / na + 1.0 / nb));
    t.df = na + nb - 2.0;
  } else {
    double qa = va / na, qb = vb / nb;
    se = std::sqrt(qa + qb);
    t.df = (qa + qb) * (qa + qb) /
           (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
  }
  t.t_stat = (t.mean_a - t.mean_b) / se;
  t.p_value = 2.0 * student_t_sf(std::fabs(t.t_stat), t.df);
  return t;
}

PairwiseReport pairwise_group_tests(const std::map<std::string, std::vector<double>>& groups,
                                    double alpha, bool pooled) {
  if (groups.size() < 2)
    raise(Errc::TooFewSamples, "need at least 2 groups, have " +
                                   std::to_string(groups.size()));
  PairwiseReport report;
  for (auto ia = groups.begin(); ia != groups.end(); ++ia) {
    for (auto ib = std::next(ia); ib != groups.end(); ++ib) {
      try {
        PairwiseTest pt;
        pt.group_a = ia->first;
        pt.group_b = ib->first;
        pt.test = welch_t_test(ia->second, ib->second, pooled);
        pt.significant = pt.test.p_value < alpha;
        report.tests.push_back(std::move(pt));
      } catch (const Error& err) {
        report.failures.push_back({ia->first, ib->first, err.what()});
      }
    }
  }
  return report;
}

QuadraticFit quadratic_fit(std::span<const double> x, std::span<const double> y) {
  require_same_length(x, y);
  std::size_t n = x.size();
  if (n < 4) raise(Errc::TooFewSamples, "quadratic fit needs at least 4 points");

  // Solve in units of max|x| so popularity-scale regressors (~1e6, x^4
  // ~1e24) keep the normal equations well conditioned; unscale at the end.
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::fabs(v));
  if (scale == 0.0) scale = 1.0;

  // Normal equations A c = r for the basis (1, x, x^2).
  double a[3][3] = {};
  double r[3] = {};
  for (std::size_t i = 0; i < n; ++i) {
    double xs = x[i] / scale;
    double p[3] = {1.0, xs, xs * xs};
    for (int j = 0; j < 3; ++j) {
      r[j] += p[j] * y[i];
      for (int k = 0; k < 3; ++k) a[j][k] += p[j] * p[k];
    }
  }

  // Gaussian elimination with partial pivoting.
  int perm[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int best = col;
    for (int row = col + 1; row < 3; ++row)
      if (std::fabs(a[perm[row]][col]) > std::fabs(a[perm[best]][col])) best = row;
    std::swap(perm[col], perm[best]);
    double pivot = a[perm[col]][col];
    if (std::fabs(pivot) < 1e-12 * static_cast<double>(n))
      raise(Errc::SingularSystem, "quadratic design matrix is singular");
    for (int row = col + 1; row < 3; ++row) {
      double f = a[perm[row]][col] / pivot;
      for (int k = col; k < 3; ++k) a[perm[row]][k] -= f * a[perm[col]][k];
      r[perm[row]] -= f * r[perm[col]];
    }
  }
  double c[3];
  for (int col = 2; col >= 0; --col) {
    double s = r[perm[col]];
    for (int k = col + 1; k < 3; ++k) s -= a[perm[col]][k] * c[k];
    c[col] = s / a[perm[col]][col];
  }

  QuadraticFit q;
  q.n = n;
  q.c0 = c[0];
  q.c1 = c[1] / scale;
  q.c2 = c[2] / (scale * scale);
  double my = mean_of(y);
  double ssr = 0.0, sst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double fit = q.c0 + q.c1 * x[i] + q.c2 * x[i] * x[i];
    ssr += (y[i] - fit) * (y[i] - fit);
    sst += (y[i] - my) * (y[i] - my);
  }
  q.r_squared = sst == 0.0 ? 1.0 : 1.0 - ssr / sst;
  return q;
}

std::string format_stat(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s = buf;
  std::size_t dot = s.find('.');
  std::size_t last = s.size();
  while (last - 1 > dot + 1 && s[last - 1] == '0') --last;
  s.resize(last);
  return s;
}

std::string format_ttest_result(const TTestResult& t) {
  return "t=" + format_stat(t.t_stat) + ", p=" + format_stat(t.p_value);
}

}  // namespace melorig
