#include "netmle/fisher.hpp"

#include "netmle/model.hpp"

namespace netmle {

namespace {
constexpr double kProbGuard = 1e-12;
}

FisherBlocks build_V(const DyadCovariates& z, const ModelParams& params) {
  const int n = params.n();
  const int p = params.p();
  if (z.n() != n) throw std::invalid_argument("build_V: dimension mismatch");

  FisherBlocks b;
  b.n = n;
  b.p = p;
  b.w = Mat::Zero(n, n);
  b.m = 1.0;
  b.M = 0.0;

  Mat pm = prob_matrix(params, z);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      double pij = pm(i, j);
      if (pij < kProbGuard || pij > 1.0 - kProbGuard) {
        b.clamped = true;
        pij = std::min(1.0 - kProbGuard, std::max(kProbGuard, pij));
      }
      const double wij = pij * (1.0 - pij);
      b.w(i, j) = wij;
      b.m = std::min(b.m, wij);
      b.M = std::max(b.M, wij);
      pm(i, j) = pij;
    }

  b.v_diag = Vec::Zero(2 * n - 1);
  for (int i = 0; i < n; ++i) b.v_diag[i] = b.w.row(i).sum();
  for (int j = 0; j < n - 1; ++j) b.v_diag[n + j] = b.w.col(j).sum();

  // Extension row: v_{2n,i} = v_ii - sum of row i off-diagonal entries.
  // For i <= n this leaves the weight of the anchored column, w_in; for the
  // beta block it vanishes.
  b.v_ext = Vec::Zero(2 * n - 1);
  for (int i = 0; i < n - 1; ++i) b.v_ext[i] = b.w(i, n - 1);
  b.v_ext_total = b.v_ext.sum();

  b.h_gg = Mat::Zero(p, p);
  b.h_gt = Mat::Zero(p, 2 * n - 1);
  b.u = Vec::Zero(p);
  if (p > 0) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const double wij = b.w(i, j);
        Eigen::Map<const Vec> zij(z.at(i, j), p);
        b.h_gg.noalias() += wij * zij * zij.transpose();
        b.h_gt.col(i) += wij * zij;
        if (j < n - 1) b.h_gt.col(n + j) += wij * zij;
        if (j == n - 1) b.u += wij * zij;
      }
  }
  return b;
}

Mat FisherBlocks::dense_V() const {
  Mat V = Mat::Zero(2 * n - 1, 2 * n - 1);
  for (int i = 0; i < 2 * n - 1; ++i) V(i, i) = v_diag[i];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n - 1; ++j) {
      if (i == j) continue;
      V(i, n + j) = w(i, j);
      V(n + j, i) = w(i, j);
    }
  return V;
}

ApproxInverse build_S(const FisherBlocks& blocks) {
  ApproxInverse s;
  s.n = blocks.n;
  const int dim = 2 * blocks.n - 1;
  s.s_diag = Vec::Zero(dim);
  for (int i = 0; i < dim; ++i) {
    if (blocks.v_diag[i] <= 0)
      throw std::domain_error("build_S: zero diagonal entry");
    s.s_diag[i] = 1.0 / blocks.v_diag[i];
  }
  if (blocks.v_ext_total <= 0)
    throw std::domain_error("build_S: degenerate extension scalar");
  s.s_const = 1.0 / blocks.v_ext_total;
  return s;
}

Mat profile_information(const FisherBlocks& blocks, InfoMode mode) {
  const int n = blocks.n;
  const int p = blocks.p;
  const double N = static_cast<double>(n) * (n - 1);
  if (p == 0) return Mat(0, 0);

  Mat correction(p, p);
  if (mode == InfoMode::Exact) {
    Mat V = blocks.dense_V();
    Eigen::LDLT<Mat> ldlt(V);
    if (ldlt.info() != Eigen::Success)
      throw std::runtime_error("profile_information: singular information");
    correction.noalias() =
        blocks.h_gt * ldlt.solve(blocks.h_gt.transpose());
  } else {
    // Two rank-structured sums over the diagonal reciprocals plus the
    // anchored-column outer product over the extension scalar.
    correction.setZero();
    for (int i = 0; i < 2 * n - 1; ++i)
      correction.noalias() +=
          blocks.h_gt.col(i) * blocks.h_gt.col(i).transpose() /
          blocks.v_diag[i];
    correction.noalias() +=
        blocks.u * blocks.u.transpose() / blocks.v_ext_total;
  }
  Mat info = (blocks.h_gg - correction) / N;
  return 0.5 * (info + info.transpose());
}

}  // namespace netmle
