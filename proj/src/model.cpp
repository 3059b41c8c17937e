#include "netmle/model.hpp"
#include "netmle/rng.hpp"

#include <cmath>

namespace netmle {

double logistic(double x) {
  if (x >= 0) {
    const double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double log1pexp(double x) {
  if (x > 0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

Mat DyadCovariates::inner(const Vec& gamma) const {
  Mat e = Mat::Zero(n_, n_);
  if (p_ == 0) return e;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      if (i == j) continue;
      const double* zij = at(i, j);
      double s = 0;
      for (int k = 0; k < p_; ++k) s += zij[k] * gamma[k];
      e(i, j) = s;
    }
  return e;
}

double dyad_prob(const ModelParams& params, const DyadCovariates& z, int i,
                 int j) {
  if (i == j) throw std::domain_error("dyad_prob: i == j");
  double eta = params.alpha[i] + params.beta[j];
  const double* zij = z.at(i, j);
  for (int k = 0; k < z.p(); ++k) eta += zij[k] * params.gamma[k];
  return logistic(eta);
}

Mat prob_matrix(const ModelParams& params, const DyadCovariates& z) {
  const int n = params.n();
  Mat pm = z.inner(params.gamma);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      pm(i, j) = (i == j) ? 0.0
                          : logistic(pm(i, j) + params.alpha[i] + params.beta[j]);
  return pm;
}

double log_likelihood(const DirectedGraph& g, const DyadCovariates& z,
                      const ModelParams& params) {
  const int n = g.n();
  if (z.n() != n || params.n() != n)
    throw std::invalid_argument("log_likelihood: dimension mismatch");
  Mat eta = z.inner(params.gamma);
  double ll = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double e = eta(i, j) + params.alpha[i] + params.beta[j];
      if (g.edge(i, j)) ll += e;
      ll -= log1pexp(e);
    }
  return ll;
}

Score score(const DirectedGraph& g, const DyadCovariates& z,
            const ModelParams& params) {
  const int n = g.n();
  const int p = z.p();
  if (z.n() != n || params.n() != n)
    throw std::invalid_argument("score: dimension mismatch");
  Mat pm = prob_matrix(params, z);
  Score s{Vec::Zero(p), Vec::Zero(2 * n - 1)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double r = (g.edge(i, j) ? 1.0 : 0.0) - pm(i, j);
      const double* zij = z.at(i, j);
      for (int k = 0; k < p; ++k) s.gamma[k] += r * zij[k];
      s.theta[i] += r;
      if (j < n - 1) s.theta[n + j] += r;
    }
  return s;
}

double realized_kappa(const DyadCovariates& z, const Vec& gamma) {
  double kappa = 0;
  for (int i = 0; i < z.n(); ++i)
    for (int j = 0; j < z.n(); ++j) {
      if (i == j) continue;
      const double* zij = z.at(i, j);
      double s = 0;
      for (int k = 0; k < z.p(); ++k) s += zij[k] * gamma[k];
      kappa = std::max(kappa, std::abs(s));
    }
  return kappa;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("normal_quantile: p must be in (0,1)");
  // Acklam's approximation
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1 - plow;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= phigh) {
    double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    double q = std::sqrt(-2 * std::log(1 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  // one Halley refinement against erfc
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2 * M_PI) * std::exp(x * x / 2);
  x = x - u / (1 + x * u / 2);
  return x;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace netmle
