#pragma once

#include "netmle/types.hpp"

namespace netmle {

// logistic(x), branch-stable for |x| up to ~700
double logistic(double x);

// log(1 + exp(x)) without overflow
double log1pexp(double x);

// P(a_ij = 1) = logistic(Z_ij.gamma + alpha_i + beta_j)
double dyad_prob(const ModelParams& params, const DyadCovariates& z, int i,
                 int j);

// Full probability matrix; diagonal is zero.
Mat prob_matrix(const ModelParams& params, const DyadCovariates& z);

double log_likelihood(const DirectedGraph& g, const DyadCovariates& z,
                      const ModelParams& params);

struct Score {
  Vec gamma;  // p
  Vec theta;  // 2n-1: d_i - sum_k p_ik, then b_j - sum_k p_kj for j<n
};

Score score(const DirectedGraph& g, const DyadCovariates& z,
            const ModelParams& params);

// Largest |Z_ij . gamma| over dyads; reported as a diagnostic.
double realized_kappa(const DyadCovariates& z, const Vec& gamma);

}  // namespace netmle
