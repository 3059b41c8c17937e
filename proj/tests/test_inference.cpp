#include <cmath>
#include <random>

#include "doctest.h"
#include "netmle/inference.hpp"
#include "netmle/model.hpp"
#include "oracle.hpp"

using namespace netmle;

TEST_CASE("theta standard errors at zero parameters") {
  const int n = 100;
  FisherBlocks b = build_V(DyadCovariates(n, 0), ModelParams::zeros(n, 0));
  Vec se = theta_standard_errors(b);
  // 1/v_ii = 4/(n-1) and the extension scalar contributes another 4/(n-1)
  const double expected = std::sqrt(8.0 / (n - 1));
  for (int i = 0; i < n; ++i)
    CHECK(se[i] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("bias vanishes when every probability is one half") {
  const int n = 8, p = 2;
  std::mt19937 gen(31);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  DyadCovariates z(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int k = 0; k < p; ++k) z.at(i, j)[k] = unif(gen);
    }
  Mat probs = Mat::Constant(n, n, 0.5);
  probs.diagonal().setZero();
  Vec b = gamma_bias(probs, z);
  CHECK(b.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("bias vanishes under antisymmetric covariates") {
  const int n = 6, p = 1;
  std::mt19937 gen(37);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  DyadCovariates z(n, p);
  Mat probs = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = unif(gen);
      z.at(i, j)[0] = v;
      z.at(j, i)[0] = -v;
      const double q = 0.2 + 0.6 * unif(gen);
      probs(i, j) = q;
      probs(j, i) = q;
    }
  Vec b = gamma_bias(probs, z);
  CHECK(std::abs(b[0]) < 1e-14);
}

TEST_CASE("bias matches an independent direct summation") {
  const int n = 20, p = 2;
  std::mt19937 gen(41);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  DyadCovariates z(n, p);
  Mat probs = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int k = 0; k < p; ++k) z.at(i, j)[k] = unif(gen);
      probs(i, j) = 0.05 + 0.9 * unif(gen);
    }
  Vec b = gamma_bias(probs, z);

  // naive two-loop oracle in long double
  for (int k = 0; k < p; ++k) {
    long double total = 0;
    for (int i = 0; i < n; ++i) {
      long double num = 0, den = 0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const long double pij = probs(i, j);
        num += pij * (1 - pij) * (1 - 2 * pij) * z.at(i, j)[k];
        den += pij * (1 - pij);
      }
      total += num / den;
    }
    for (int j = 0; j < n; ++j) {
      long double num = 0, den = 0;
      for (int i = 0; i < n; ++i) {
        if (i == j) continue;
        const long double pij = probs(i, j);
        num += pij * (1 - pij) * (1 - 2 * pij) * z.at(i, j)[k];
        den += pij * (1 - pij);
      }
      total += num / den;
    }
    total /= 2 * std::sqrt((long double)n * (n - 1));
    CHECK(b[k] == doctest::Approx((double)total).epsilon(1e-12));
  }
}

TEST_CASE("homogeneity statistics and their guards") {
  const int n = 5;
  ModelParams m = ModelParams::zeros(n, 0);
  m.alpha << 1.0, 0.2, -0.3, 0.0, 0.5;
  m.beta << 0.4, -0.1, 0.3, 0.2, 0.0;
  FisherBlocks b = build_V(DyadCovariates(n, 0), m);

  const double xi = homogeneity_stat(m, b, PairKind::Xi, 0, 1);
  CHECK(xi == doctest::Approx((m.alpha[0] - m.alpha[1]) /
                              std::sqrt(1 / b.v_diag[0] + 1 / b.v_diag[1])));
  const double zeta = homogeneity_stat(m, b, PairKind::Zeta, 0, 1);
  CHECK(zeta ==
        doctest::Approx((m.alpha[0] - m.beta[1]) /
                        std::sqrt(1 / b.v_diag[0] + 1 / b.v_diag[n + 1])));
  const double eta = homogeneity_stat(m, b, PairKind::Eta, 0, 2);
  CHECK(eta ==
        doctest::Approx((m.beta[0] - m.beta[2]) /
                        std::sqrt(1 / b.v_diag[n] + 1 / b.v_diag[n + 2])));
  // null-centering shifts the numerator
  CHECK(homogeneity_stat(m, b, PairKind::Xi, 0, 1, m.alpha[0] - m.alpha[1]) ==
        doctest::Approx(0.0));

  CHECK_THROWS_AS((void)homogeneity_stat(m, b, PairKind::Xi, 2, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)homogeneity_stat(m, b, PairKind::Eta, 0, n - 1),
                  std::out_of_range);
}

TEST_CASE("gamma inference ties the pieces together") {
  std::mt19937 gen(43);
  auto inst = oracle::random_solvable_instance(12, 2, gen);
  FitResult fr = fit(inst.g, inst.z);
  REQUIRE(fr.exists);
  FisherBlocks b = build_V(inst.z, fr.params);
  InferenceReport rep = gamma_inference(inst.z, fr.params, b, 0.95);

  const int n = 12;
  const double N = n * (n - 1.0);
  // bc identity: gamma_bc = gamma - info^{-1} B / sqrt(N)
  Vec delta = rep.info * (rep.gamma_hat - rep.gamma_bc) * std::sqrt(N);
  CHECK((delta - rep.bias_b).cwiseAbs().maxCoeff() < 1e-10);
  // CI symmetry about its center
  CHECK(((rep.ci_lo + rep.ci_hi) / 2 - rep.gamma_bc).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK(((rep.ci_lo_raw + rep.ci_hi_raw) / 2 - rep.gamma_hat)
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  // raw and corrected intervals share the same half-width
  CHECK(((rep.ci_hi - rep.ci_lo) - (rep.ci_hi_raw - rep.ci_lo_raw))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  CHECK((rep.se_gamma.array() > 0).all());
  for (int k = 0; k < 2; ++k) {
    CHECK(rep.p_values[k] > 0.0);
    CHECK(rep.p_values[k] <= 1.0);
  }
}

TEST_CASE("zero bias leaves gamma unchanged") {
  // empty covariate effect at the symmetric point: probabilities 1/2
  const int n = 10, p = 1;
  DyadCovariates z(n, p);
  std::mt19937 gen(47);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) z.at(i, j)[0] = unif(gen);
  ModelParams m = ModelParams::zeros(n, p);
  FisherBlocks b = build_V(z, m);
  InferenceReport rep = gamma_inference(z, m, b, 0.95);
  CHECK((rep.gamma_bc - rep.gamma_hat).cwiseAbs().maxCoeff() < 1e-14);
}
