#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace melorig {

// Upper tail P(T > t) for Student's t with df degrees of freedom (df may be
// fractional, as Welch produces). Evaluated through the regularized
// incomplete beta function.
double student_t_sf(double t, double df);

// Two-sided critical value: smallest q with P(|T| > q) == alpha.
double student_t_two_sided_quantile(double alpha, double df);

struct RegressionResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r = 0.0;
  double r_squared = 0.0;
  double p_value = 0.0;       // two-sided, slope != 0, df = n - 2
  double stderr_slope = 0.0;
  std::size_t n = 0;
};

// Least squares with intercept. Throws LengthMismatch on unequal inputs,
// TooFewSamples below 3 points, DegenerateX when x has no variance.
RegressionResult linear_regression(std::span<const double> x, std::span<const double> y);

struct OlsResult {
  double coef = 0.0;
  double std_err = 0.0;
  double t_stat = 0.0;
  double p_value = 0.0;  // two-sided, df = n - 1
  double ci_low = 0.0;   // 95% interval for coef
  double ci_high = 0.0;
  double r2_uncentered = 0.0;
  double r2_adj_uncentered = 0.0;
  double f_stat = 0.0;
  double log_likelihood = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  double durbin_watson = 0.0;
  double jarque_bera = 0.0;
  double jb_p = 0.0;
  double skew = 0.0;
  double kurtosis = 0.0;
  std::size_t n = 0;
};

// Single-regressor least squares through the origin, endog first, with the
// summary statistics a regression report quotes (uncentered R2s, F,
// Gaussian log-likelihood with AIC/BIC, Durbin-Watson, Jarque-Bera on the
// residuals). Throws LengthMismatch, TooFewSamples (< 2), DegenerateX when
// x is all zero.
OlsResult ols_no_intercept(std::span<const double> y, std::span<const double> x);

struct TTestResult {
  double t_stat = 0.0;
  double df = 0.0;
  double p_value = 0.0;  // two-sided
  double mean_a = 0.0;
  double mean_b = 0.0;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
};

// Unequal-variance (Welch) two-sample t test by default; `pooled` switches
// to the classic equal-variance form with df = n_a + n_b - 2. Throws
// TooFewSamples when either side has < 2 points, ZeroVariance when both
// sample variances vanish.
TTestResult welch_t_test(std::span<const double> a, std::span<const double> b,
                         bool pooled = false);

struct PairwiseTest {
  std::string group_a;
  std::string group_b;
  TTestResult test;
  bool significant = false;  // p < alpha, strict
};

struct PairwiseFailure {
  std::string group_a;
  std::string group_b;
  std::string message;
};

struct PairwiseReport {
  std::vector<PairwiseTest> tests;
  std::vector<PairwiseFailure> failures;
};

// Every unordered pair of groups, lexicographic by (first, second) name.
// Throws TooFewSamples when fewer than two groups arrive; per-pair errors
// are collected, not thrown.
PairwiseReport pairwise_group_tests(const std::map<std::string, std::vector<double>>& groups,
                                    double alpha = 0.05, bool pooled = false);

struct QuadraticFit {
  double c0 = 0.0;  // y = c0 + c1 x + c2 x^2
  double c1 = 0.0;
  double c2 = 0.0;
  double r_squared = 0.0;
  std::size_t n = 0;
};

// Normal equations with partial pivoting. Throws LengthMismatch,
// TooFewSamples (< 4), SingularSystem when the design collapses.
QuadraticFit quadratic_fit(std::span<const double> x, std::span<const double> y);

// Fixed-point rendering used in the pairwise tables: four decimals with
// trailing zeros trimmed, at least one decimal kept ("5.348", "0.0",
// "0.0001").
std::string format_stat(double v);

// "t=<stat>, p=<p>" with format_stat on both.
std::string format_ttest_result(const TTestResult& t);

}  // namespace melorig
