#pragma once

#include "netmle/types.hpp"

namespace netmle {

// Information blocks at a parameter point. Sign convention: h_gg and h_gt
// store the positive-definite forms -H_gamma,gamma and -H_gamma,theta.
struct FisherBlocks {
  int n = 0;
  int p = 0;
  Mat w;        // n x n weights p_ij(1 - p_ij), zero diagonal
  Vec v_diag;   // length 2n-1: row sums of w, then column sums for j < n
  Vec v_ext;    // length 2n-1 extension row; nonzero only on the alpha block
  double v_ext_total = 0.0;
  Mat h_gt;     // p x (2n-1)
  Mat h_gg;     // p x p
  Vec u;        // p: sum over i != n of w_in Z_in (anchored-column mass)
  double m = 0.0, M = 0.0;  // min/max off-diagonal weight
  bool clamped = false;     // true if any p_ij hit the conditioning guard

  Mat dense_V() const;
};

FisherBlocks build_V(const DyadCovariates& z, const ModelParams& params);

// Closed-form surrogate for V^{-1}: diagonal reciprocals plus a signed
// constant, + within the alpha-alpha and beta-beta blocks, - across.
struct ApproxInverse {
  int n = 0;
  Vec s_diag;        // 1/v_ii, length 2n-1
  double s_const = 0.0;

  double entry(int i, int j) const {
    const double base = (i == j) ? s_diag[i] : 0.0;
    const bool bi = i < n, bj = j < n;
    return base + (bi == bj ? s_const : -s_const);
  }
};

ApproxInverse build_S(const FisherBlocks& blocks);

enum class InfoMode { Exact, Approx };

// Per-dyad-normalized profile information for gamma:
//   exact:  (h_gg - h_gt V^{-1} h_gt^T) / (n(n-1))
//   approx: V^{-1} replaced by the closed-form surrogate, assembled as two
//           rank-structured sums plus the anchored-column outer product.
Mat profile_information(const FisherBlocks& blocks, InfoMode mode);

}  // namespace netmle
