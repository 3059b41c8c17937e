#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace netmle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using IVec = Eigen::VectorXi;

// n-node directed adjacency, dense, no self-loops.
class DirectedGraph {
 public:
  explicit DirectedGraph(int n) : n_(n), adj_(static_cast<size_t>(n) * n, 0) {
    if (n < 2) throw std::invalid_argument("DirectedGraph: need n >= 2");
  }

  int n() const { return n_; }

  bool edge(int i, int j) const { return adj_[idx(i, j)] != 0; }

  void set_edge(int i, int j, bool present) {
    if (i == j) throw std::invalid_argument("DirectedGraph: self-loop");
    adj_[idx(i, j)] = present ? 1 : 0;
  }

  IVec out_degrees() const {
    IVec d = IVec::Zero(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) d[i] += adj_[idx(i, j)];
    return d;
  }

  IVec in_degrees() const {
    IVec b = IVec::Zero(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) b[j] += adj_[idx(i, j)];
    return b;
  }

  int num_edges() const {
    int m = 0;
    for (auto a : adj_) m += a;
    return m;
  }

 private:
  size_t idx(int i, int j) const { return static_cast<size_t>(i) * n_ + j; }
  int n_;
  std::vector<std::uint8_t> adj_;
};

// Dense p-vector per ordered pair (i,j). Diagonal slots exist but are zero
// and never read.
class DyadCovariates {
 public:
  DyadCovariates(int n, int p)
      : n_(n), p_(p), z_(static_cast<size_t>(n) * n * (p > 0 ? p : 1), 0.0) {}

  int n() const { return n_; }
  int p() const { return p_; }

  double* at(int i, int j) { return z_.data() + idx(i, j); }
  const double* at(int i, int j) const { return z_.data() + idx(i, j); }

  Eigen::Map<const Vec> vec(int i, int j) const {
    return Eigen::Map<const Vec>(at(i, j), p_);
  }

  void set(int i, int j, const Vec& v) {
    for (int k = 0; k < p_; ++k) at(i, j)[k] = v[k];
  }

  // eta0(i,j) = Z_ij . gamma
  Mat inner(const Vec& gamma) const;

 private:
  size_t idx(int i, int j) const {
    return (static_cast<size_t>(i) * n_ + j) * (p_ > 0 ? p_ : 1);
  }
  int n_, p_;
  std::vector<double> z_;
};

// (alpha, beta, gamma) with beta[n-1] anchored at 0.
struct ModelParams {
  Vec alpha;  // n
  Vec beta;   // n, beta[n-1] == 0
  Vec gamma;  // p

  static ModelParams zeros(int n, int p) {
    return ModelParams{Vec::Zero(n), Vec::Zero(n), Vec::Zero(p)};
  }

  int n() const { return static_cast<int>(alpha.size()); }
  int p() const { return static_cast<int>(gamma.size()); }

  // theta = (alpha_1..n, beta_1..n-1)
  Vec theta() const {
    Vec t(2 * n() - 1);
    t.head(n()) = alpha;
    t.tail(n() - 1) = beta.head(n() - 1);
    return t;
  }
};

enum class CovTransform { AbsDiff, Equal };

// Node attributes plus per-column rules producing Z_ij = g(X_i, X_j).
struct NodeCovariates {
  Mat x;  // n x q
  std::vector<CovTransform> transforms;  // size q

  DyadCovariates to_dyads() const {
    const int n = static_cast<int>(x.rows());
    const int q = static_cast<int>(x.cols());
    if (static_cast<int>(transforms.size()) != q)
      throw std::invalid_argument("NodeCovariates: one transform per column");
    DyadCovariates z(n, q);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        for (int k = 0; k < q; ++k) {
          double v = transforms[k] == CovTransform::AbsDiff
                         ? std::abs(x(i, k) - x(j, k))
                         : (x(i, k) == x(j, k) ? 1.0 : 0.0);
          z.at(i, j)[k] = v;
        }
      }
    return z;
  }
};

}  // namespace netmle
