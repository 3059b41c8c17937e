#pragma once

#include <optional>

#include "netmle/fisher.hpp"
#include "netmle/types.hpp"

namespace netmle {

struct FitConfig {
  double tol_theta = 1e-8;
  double tol_gamma = 1e-8;
  int max_outer = 200;
  int max_inner = 5000;
  // 0 means "use 30 + 2 log n".
  double divergence_bound = 0.0;
  // Half-width of the box constraint on each gamma coordinate; a fit that
  // ends pinned to the box is reported as nonexistent.
  double gamma_box = 50.0;
  // Exact dense V solve for the gamma Newton step and reported information;
  // the surrogate inverse is used above this size regardless.
  int exact_inverse_max_n = 2000;

  double effective_divergence_bound(int n) const {
    return divergence_bound > 0 ? divergence_bound
                                : 30.0 + 2.0 * std::log(static_cast<double>(n));
  }
};

enum class ThetaStatus { Converged, Diverged, IterationCap };

struct ThetaResult {
  Vec alpha;
  Vec beta;  // beta[n-1] == 0
  ThetaStatus status = ThetaStatus::Diverged;
  int iters = 0;
};

// Fixed-point solve of the degree equations at fixed gamma, alternating full
// alpha- and beta-sweeps, with the beta anchor re-imposed every sweep.
ThetaResult solve_theta_given_gamma(const DirectedGraph& g,
                                    const DyadCovariates& z, const Vec& gamma,
                                    const ModelParams& init,
                                    const FitConfig& cfg);

enum class Existence { DefinitelyNonexistent, Unknown };

// Necessary degree screen: any d_i or b_j in {0, n-1} rules the MLE out.
Existence check_existence(const DirectedGraph& g);

struct FitResult {
  ModelParams params;
  bool converged = false;
  bool exists = false;
  int outer_iters = 0;
  int inner_iters = 0;
  double final_score_norm = 0.0;
  double loglik = 0.0;
  bool gamma_box_active = false;
  double kappa = 0.0;  // realized max |Z_ij . gamma|
  InfoMode info_mode = InfoMode::Exact;
};

FitResult fit(const DirectedGraph& g, const DyadCovariates& z,
              const FitConfig& cfg = {},
              const std::optional<ModelParams>& init = std::nullopt);

}  // namespace netmle
