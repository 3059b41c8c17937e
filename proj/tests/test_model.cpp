#include <cmath>
#include <random>

#include "doctest.h"
#include "netmle/model.hpp"
#include "oracle.hpp"

using namespace netmle;

namespace {

DyadCovariates zero_z(int n, int p = 0) { return DyadCovariates(n, p); }

ModelParams random_params(int n, int p, std::mt19937& gen) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  ModelParams m = ModelParams::zeros(n, p);
  for (int i = 0; i < n; ++i) {
    m.alpha[i] = unif(gen);
    m.beta[i] = unif(gen);
  }
  m.beta[n - 1] = 0.0;
  for (int k = 0; k < p; ++k) m.gamma[k] = unif(gen);
  return m;
}

DyadCovariates random_z(int n, int p, std::mt19937& gen) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  DyadCovariates z(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int k = 0; k < p; ++k) z.at(i, j)[k] = unif(gen);
    }
  return z;
}

DirectedGraph random_graph(int n, std::mt19937& gen, double dens = 0.5) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  DirectedGraph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) g.set_edge(i, j, u01(gen) < dens);
  return g;
}

}  // namespace

TEST_CASE("dyad probability at zero parameters is one half") {
  ModelParams m = ModelParams::zeros(4, 0);
  CHECK(dyad_prob(m, zero_z(4), 0, 1) == doctest::Approx(0.5).epsilon(1e-15));

  ModelParams m2 = ModelParams::zeros(4, 2);
  m2.gamma << 1.0, 1.5;
  CHECK(dyad_prob(m2, zero_z(4, 2), 2, 3) ==
        doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("dyad probability matches a high-precision logistic evaluation") {
  // sigma(1 - 1 + 0.2*1 + 0.4*1.5) = sigma(0.8), evaluated with mpmath
  ModelParams m = ModelParams::zeros(4, 2);
  m.gamma << 1.0, 1.5;
  m.alpha[0] = 1.0;
  m.beta[1] = -1.0;
  DyadCovariates z(4, 2);
  z.at(0, 1)[0] = 0.2;
  z.at(0, 1)[1] = 0.4;
  CHECK(dyad_prob(m, z, 0, 1) ==
        doctest::Approx(0.689974481127612442633874061948).epsilon(1e-14));
}

TEST_CASE("dyad probability rejects the diagonal") {
  ModelParams m = ModelParams::zeros(4, 0);
  CHECK_THROWS_AS((void)dyad_prob(m, zero_z(4), 2, 2), std::domain_error);
}

TEST_CASE("dyad probability is stable at extreme arguments") {
  ModelParams m = ModelParams::zeros(3, 0);
  m.alpha[0] = 700.0;
  CHECK(dyad_prob(m, zero_z(3), 0, 1) == doctest::Approx(1.0));
  m.alpha[0] = -700.0;
  const double lo = dyad_prob(m, zero_z(3), 0, 1);
  CHECK(lo > 0.0);
  CHECK(lo < 1e-300);
}

TEST_CASE("log-likelihood of empty and complete graphs at zero parameters") {
  const int n = 7;
  ModelParams m = ModelParams::zeros(n, 0);
  DirectedGraph empty(n), full(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) full.set_edge(i, j, true);
  const double expected = -n * (n - 1) * std::log(2.0);
  CHECK(log_likelihood(empty, zero_z(n), m) ==
        doctest::Approx(expected).epsilon(1e-14));
  CHECK(log_likelihood(full, zero_z(n), m) ==
        doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("log-likelihood matches a term-by-term long-double summation") {
  std::mt19937 gen(7);
  const int n = 5, p = 2;
  ModelParams m = random_params(n, p, gen);
  DyadCovariates z = random_z(n, p, gen);
  DirectedGraph g = random_graph(n, gen);

  long double ll = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      long double e = m.alpha[i] + m.beta[j];
      for (int k = 0; k < p; ++k) e += (long double)z.at(i, j)[k] * m.gamma[k];
      if (g.edge(i, j)) ll += e;
      ll -= std::log(1.0L + std::exp(e));
    }
  CHECK(log_likelihood(g, z, m) ==
        doctest::Approx((double)ll).epsilon(1e-12));
}

TEST_CASE("score equals the central finite-difference gradient") {
  std::mt19937 gen(11);
  const int n = 6, p = 2;
  ModelParams m = random_params(n, p, gen);
  DyadCovariates z = random_z(n, p, gen);
  DirectedGraph g = random_graph(n, gen);
  Score s = score(g, z, m);

  const double h = 1e-6;
  auto ll_at = [&](const ModelParams& mm) { return log_likelihood(g, z, mm); };
  for (int k = 0; k < p; ++k) {
    ModelParams up = m, dn = m;
    up.gamma[k] += h;
    dn.gamma[k] -= h;
    const double fd = (ll_at(up) - ll_at(dn)) / (2 * h);
    CHECK(s.gamma[k] == doctest::Approx(fd).epsilon(1e-6));
  }
  for (int i = 0; i < n; ++i) {
    ModelParams up = m, dn = m;
    up.alpha[i] += h;
    dn.alpha[i] -= h;
    const double fd = (ll_at(up) - ll_at(dn)) / (2 * h);
    CHECK(s.theta[i] == doctest::Approx(fd).epsilon(1e-6));
  }
  for (int j = 0; j < n - 1; ++j) {
    ModelParams up = m, dn = m;
    up.beta[j] += h;
    dn.beta[j] -= h;
    const double fd = (ll_at(up) - ll_at(dn)) / (2 * h);
    CHECK(s.theta[n + j] == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("score at the empty graph with zero parameters") {
  const int n = 5;
  DirectedGraph g(n);
  Score s = score(g, zero_z(n), ModelParams::zeros(n, 0));
  for (int i = 0; i < n; ++i)
    CHECK(s.theta[i] == doctest::Approx(-(n - 1) / 2.0).epsilon(1e-14));
}

TEST_CASE("score vanishes at the joint MLE") {
  std::mt19937 gen(3);
  auto inst = oracle::random_solvable_instance(8, 2, gen);
  auto mle = oracle::joint_newton_mle(inst.g, inst.z);
  REQUIRE(mle.has_value());
  Score s = score(inst.g, inst.z, *mle);
  CHECK(s.gamma.cwiseAbs().maxCoeff() < 1e-8);
  CHECK(s.theta.cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("likelihood is invariant under the alpha/beta shift") {
  std::mt19937 gen(5);
  const int n = 6, p = 2;
  ModelParams m = random_params(n, p, gen);
  DyadCovariates z = random_z(n, p, gen);
  DirectedGraph g = random_graph(n, gen);
  const double base = log_likelihood(g, z, m);
  for (double c : {0.3, -1.7, 4.0}) {
    ModelParams shifted = m;
    shifted.alpha.array() -= c;
    shifted.beta.array() += c;
    CHECK(log_likelihood(g, z, shifted) ==
          doctest::Approx(base).epsilon(1e-10));
  }
}

TEST_CASE("theta score components satisfy the degree-sum identity") {
  std::mt19937 gen(9);
  const int n = 7, p = 1;
  for (int rep = 0; rep < 5; ++rep) {
    ModelParams m = random_params(n, p, gen);
    DyadCovariates z = random_z(n, p, gen);
    DirectedGraph g = random_graph(n, gen);
    Score s = score(g, z, m);
    Mat pm = prob_matrix(m, z);
    double rhs = g.in_degrees()[n - 1];
    for (int k = 0; k < n - 1; ++k) rhs -= pm(k, n - 1);
    const double lhs =
        s.theta.head(n).sum() - s.theta.tail(n - 1).sum();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("dyad probability is monotone in each parameter") {
  ModelParams m = ModelParams::zeros(3, 1);
  m.gamma[0] = 0.7;
  DyadCovariates z(3, 1);
  z.at(0, 1)[0] = 0.4;
  const double base = dyad_prob(m, z, 0, 1);
  ModelParams up = m;
  up.alpha[0] += 0.1;
  CHECK(dyad_prob(up, z, 0, 1) > base);
  up = m;
  up.beta[1] += 0.1;
  CHECK(dyad_prob(up, z, 0, 1) > base);
  up = m;
  up.gamma[0] += 0.1;
  CHECK(dyad_prob(up, z, 0, 1) > base);
}

TEST_CASE("realized covariate magnitude diagnostic") {
  DyadCovariates z(3, 1);
  z.at(0, 1)[0] = -2.0;
  z.at(1, 0)[0] = 0.5;
  Vec gamma(1);
  gamma << 1.5;
  CHECK(realized_kappa(z, gamma) == doctest::Approx(3.0));
}
