#pragma once

#include "netmle/estimation.hpp"
#include "netmle/fisher.hpp"
#include "netmle/types.hpp"

namespace netmle {

struct InferenceReport {
  Vec se_theta;    // 2n-1 entries, sqrt of the surrogate-inverse diagonal
  Vec gamma_hat;
  Vec gamma_bc;
  Vec se_gamma;
  Vec bias_b;
  double ci_level = 0.95;
  Mat info;        // per-dyad-normalized profile information
  InfoMode info_mode = InfoMode::Exact;
  Vec ci_lo, ci_hi;          // centered at gamma_bc
  Vec ci_lo_raw, ci_hi_raw;  // centered at gamma_hat
  Vec z_stats, p_values;     // gamma_bc against zero
};

// se_i = sqrt(1/v_ii + 1/v_{2n,2n}).
Vec theta_standard_errors(const FisherBlocks& blocks);

enum class PairKind { Xi, Zeta, Eta };

// Standardized difference of fitted degree parameters:
//   Xi:   (alpha_i - alpha_j - null_diff) / sqrt(1/v_ii + 1/v_jj)
//   Zeta: (alpha_i - beta_j  - null_diff) / sqrt(1/v_ii + 1/v_{n+j,n+j})
//   Eta:  (beta_i  - beta_j  - null_diff) / sqrt(1/v_{n+i,n+i} + 1/v_{n+j,n+j})
// null_diff = 0 tests equality; pass the true difference for calibration.
double homogeneity_stat(const ModelParams& params, const FisherBlocks& blocks,
                        PairKind kind, int i, int j, double null_diff = 0.0);

// Plug-in bias of the profile score, averaged over both degree directions.
Vec gamma_bias(const Mat& probs, const DyadCovariates& z);

InferenceReport gamma_inference(const DyadCovariates& z,
                                const ModelParams& params,
                                const FisherBlocks& blocks,
                                double level = 0.95,
                                InfoMode mode = InfoMode::Exact);

}  // namespace netmle
