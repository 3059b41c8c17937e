#include "netmle/inference.hpp"

#include <cmath>

#include "netmle/model.hpp"
#include "netmle/rng.hpp"

namespace netmle {

Vec theta_standard_errors(const FisherBlocks& blocks) {
  ApproxInverse s = build_S(blocks);
  Vec se(2 * blocks.n - 1);
  for (int i = 0; i < se.size(); ++i)
    se[i] = std::sqrt(s.s_diag[i] + s.s_const);
  return se;
}

double homogeneity_stat(const ModelParams& params, const FisherBlocks& blocks,
                        PairKind kind, int i, int j, double null_diff) {
  const int n = blocks.n;
  auto check = [n](int idx, bool beta_side) {
    const int hi = beta_side ? n - 1 : n;
    if (idx < 0 || idx >= hi)
      throw std::out_of_range("homogeneity_stat: node index");
  };
  double diff = 0, var = 0;
  switch (kind) {
    case PairKind::Xi:
      check(i, false);
      check(j, false);
      if (i == j) throw std::invalid_argument("homogeneity_stat: i == j");
      diff = params.alpha[i] - params.alpha[j];
      var = 1.0 / blocks.v_diag[i] + 1.0 / blocks.v_diag[j];
      break;
    case PairKind::Zeta:
      check(i, false);
      check(j, true);
      diff = params.alpha[i] - params.beta[j];
      var = 1.0 / blocks.v_diag[i] + 1.0 / blocks.v_diag[n + j];
      break;
    case PairKind::Eta:
      check(i, true);
      check(j, true);
      if (i == j) throw std::invalid_argument("homogeneity_stat: i == j");
      diff = params.beta[i] - params.beta[j];
      var = 1.0 / blocks.v_diag[n + i] + 1.0 / blocks.v_diag[n + j];
      break;
  }
  return (diff - null_diff) / std::sqrt(var);
}

Vec gamma_bias(const Mat& probs, const DyadCovariates& z) {
  const int n = z.n();
  const int p = z.p();
  const double N = static_cast<double>(n) * (n - 1);

  Mat row_num = Mat::Zero(n, p), col_num = Mat::Zero(n, p);
  Vec row_den = Vec::Zero(n), col_den = Vec::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double pij = probs(i, j);
      const double w = pij * (1.0 - pij);
      const double t = w * (1.0 - 2.0 * pij);
      Eigen::Map<const Vec> zij(z.at(i, j), p);
      row_num.row(i) += t * zij.transpose();
      col_num.row(j) += t * zij.transpose();
      row_den[i] += w;
      col_den[j] += w;
    }
  Vec b = Vec::Zero(p);
  for (int i = 0; i < n; ++i) {
    if (row_den[i] <= 0 || col_den[i] <= 0)
      throw std::domain_error("gamma_bias: degenerate node weight");
    b += row_num.row(i).transpose() / row_den[i];
    b += col_num.row(i).transpose() / col_den[i];
  }
  return b / (2.0 * std::sqrt(N));
}

InferenceReport gamma_inference(const DyadCovariates& z,
                                const ModelParams& params,
                                const FisherBlocks& blocks, double level,
                                InfoMode mode) {
  const int n = params.n();
  const int p = params.p();
  const double N = static_cast<double>(n) * (n - 1);

  InferenceReport rep;
  rep.ci_level = level;
  rep.info_mode = mode;
  rep.se_theta = theta_standard_errors(blocks);
  rep.gamma_hat = params.gamma;
  rep.info = profile_information(blocks, mode);

  if (p == 0) {
    rep.gamma_bc = rep.gamma_hat;
    rep.se_gamma = rep.bias_b = Vec();
    return rep;
  }

  Mat probs = prob_matrix(params, z);
  rep.bias_b = gamma_bias(probs, z);

  Eigen::LDLT<Mat> ldlt(rep.info);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("gamma_inference: singular information");
  rep.gamma_bc = rep.gamma_hat - ldlt.solve(rep.bias_b) / std::sqrt(N);

  Mat info_inv = ldlt.solve(Mat::Identity(p, p));
  rep.se_gamma = (info_inv.diagonal() / N).cwiseSqrt();

  const double zq = normal_quantile(0.5 + level / 2.0);
  rep.ci_lo = rep.gamma_bc - zq * rep.se_gamma;
  rep.ci_hi = rep.gamma_bc + zq * rep.se_gamma;
  rep.ci_lo_raw = rep.gamma_hat - zq * rep.se_gamma;
  rep.ci_hi_raw = rep.gamma_hat + zq * rep.se_gamma;

  rep.z_stats = rep.gamma_bc.cwiseQuotient(rep.se_gamma);
  rep.p_values = Vec(p);
  for (int k = 0; k < p; ++k)
    rep.p_values[k] = 2.0 * normal_cdf(-std::abs(rep.z_stats[k]));
  return rep;
}

}  // namespace netmle
