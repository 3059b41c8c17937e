#include "netmle/estimation.hpp"

#include <cmath>
#include <limits>

#include "netmle/model.hpp"

namespace netmle {

Existence check_existence(const DirectedGraph& g) {
  const int n = g.n();
  IVec d = g.out_degrees(), b = g.in_degrees();
  for (int i = 0; i < n; ++i)
    if (d[i] == 0 || d[i] == n - 1 || b[i] == 0 || b[i] == n - 1)
      return Existence::DefinitelyNonexistent;
  return Existence::Unknown;
}

ThetaResult solve_theta_given_gamma(const DirectedGraph& g,
                                    const DyadCovariates& z, const Vec& gamma,
                                    const ModelParams& init,
                                    const FitConfig& cfg) {
  const int n = g.n();
  const double bound = cfg.effective_divergence_bound(n);
  IVec di = g.out_degrees(), bi = g.in_degrees();
  Vec d = di.cast<double>(), b = bi.cast<double>();

  ThetaResult res;
  res.alpha = init.alpha;
  res.beta = init.beta;
  for (int i = 0; i < n; ++i)
    if (di[i] == 0 || bi[i] == 0) return res;  // boundary: no finite solution

  Mat eta0 = z.inner(gamma);
  Vec alpha = res.alpha, beta = res.beta;
  Vec alpha_new(n), beta_new(n);

  for (int it = 1; it <= cfg.max_inner; ++it) {
    // alpha sweep: alpha_i = log d_i - log sum_k e^{beta_k+eta0}/(1+e^{full})
    for (int i = 0; i < n; ++i) {
      double s = 0;
      for (int k = 0; k < n; ++k) {
        if (k == i) continue;
        const double base = beta[k] + eta0(i, k);
        s += std::exp(base - log1pexp(alpha[i] + base));
      }
      alpha_new[i] = std::log(d[i]) - std::log(s);
    }
    // beta sweep against the fresh alpha
    for (int j = 0; j < n; ++j) {
      double s = 0;
      for (int k = 0; k < n; ++k) {
        if (k == j) continue;
        const double base = alpha_new[k] + eta0(k, j);
        s += std::exp(base - log1pexp(base + beta[j]));
      }
      beta_new[j] = std::log(b[j]) - std::log(s);
    }
    // Re-impose the anchor each sweep; the common drift otherwise slows the
    // iteration down by orders of magnitude.
    const double c = beta_new[n - 1];
    beta_new.array() -= c;
    alpha_new.array() += c;

    const double change =
        std::max((alpha_new - alpha).cwiseAbs().maxCoeff(),
                 (beta_new - beta).cwiseAbs().maxCoeff());
    alpha = alpha_new;
    beta = beta_new;
    res.iters = it;
    if (!alpha.allFinite() || !beta.allFinite() ||
        alpha.cwiseAbs().maxCoeff() > bound ||
        beta.cwiseAbs().maxCoeff() > bound) {
      res.status = ThetaStatus::Diverged;
      return res;
    }
    if (change < cfg.tol_theta) {
      res.alpha = alpha;
      res.beta = beta;
      res.status = ThetaStatus::Converged;
      return res;
    }
  }
  res.alpha = alpha;
  res.beta = beta;
  res.status = ThetaStatus::IterationCap;
  return res;
}

namespace {

// Profile score in gamma: sum over dyads of (a_ij - p_ij) Z_ij.
Vec gamma_score(const DirectedGraph& g, const DyadCovariates& z,
                const ModelParams& params) {
  const int n = g.n(), p = z.p();
  Mat pm = prob_matrix(params, z);
  Vec s = Vec::Zero(p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double r = (g.edge(i, j) ? 1.0 : 0.0) - pm(i, j);
      Eigen::Map<const Vec> zij(z.at(i, j), p);
      s += r * zij;
    }
  return s;
}

ModelParams initial_params(const DirectedGraph& g, int p) {
  const int n = g.n();
  Vec d = g.out_degrees().cast<double>(), b = g.in_degrees().cast<double>();
  const double scale = 0.5 * std::log((d.mean() + b.mean()) / 2.0 + 1.0);
  ModelParams init = ModelParams::zeros(n, p);
  for (int i = 0; i < n; ++i) {
    init.alpha[i] = std::log(d[i] + 0.5) - scale;
    init.beta[i] = std::log(b[i] + 0.5) - scale;
  }
  init.beta.array() -= init.beta[n - 1];
  return init;
}

}  // namespace

FitResult fit(const DirectedGraph& g, const DyadCovariates& z,
              const FitConfig& cfg, const std::optional<ModelParams>& init) {
  const int n = g.n();
  const int p = z.p();
  if (z.n() != n) throw std::invalid_argument("fit: dimension mismatch");

  FitResult res;
  res.params = init ? *init : initial_params(g, p);
  res.info_mode = n <= cfg.exact_inverse_max_n ? InfoMode::Exact
                                               : InfoMode::Approx;
  if (check_existence(g) == Existence::DefinitelyNonexistent) return res;

  ModelParams cur = res.params;
  for (int outer = 1; outer <= cfg.max_outer; ++outer) {
    res.outer_iters = outer;
    ThetaResult ts = solve_theta_given_gamma(g, z, cur.gamma, cur, cfg);
    res.inner_iters += ts.iters;
    if (ts.status != ThetaStatus::Converged) {
      res.params = cur;
      return res;  // exists stays false
    }
    cur.alpha = ts.alpha;
    cur.beta = ts.beta;

    if (p == 0) {
      res.converged = true;
      break;
    }

    FisherBlocks blocks = build_V(z, cur);
    Mat info = profile_information(blocks, res.info_mode);
    Vec score_g = gamma_score(g, z, cur);
    const double N = static_cast<double>(n) * (n - 1);
    Vec step = info.ldlt().solve(score_g / N);
    if (!step.allFinite()) {
      res.params = cur;
      return res;
    }

    // Line search on the profile likelihood: each trial gamma gets its own
    // theta re-solve (warm-started), otherwise steps near the optimum look
    // like descents at the frozen theta and get halved away.
    const double ll0 = log_likelihood(g, z, cur);
    ModelParams trial = cur;
    double scale = 1.0;
    bool accepted = false;
    for (int h = 0; h < 30; ++h) {
      trial.gamma = (cur.gamma + scale * step)
                        .cwiseMax(-cfg.gamma_box)
                        .cwiseMin(cfg.gamma_box);
      ThetaResult tts = solve_theta_given_gamma(g, z, trial.gamma, cur, cfg);
      res.inner_iters += tts.iters;
      if (tts.status == ThetaStatus::Converged) {
        trial.alpha = tts.alpha;
        trial.beta = tts.beta;
        if (log_likelihood(g, z, trial) >= ll0) {
          accepted = true;
          break;
        }
      }
      scale *= 0.5;
    }
    if (!accepted) {
      res.converged = true;  // no profile ascent left within resolution
      break;
    }
    const double change = (trial.gamma - cur.gamma).cwiseAbs().maxCoeff();
    cur = trial;
    if (change < cfg.tol_gamma) {
      res.converged = true;
      break;
    }
  }

  // Polish with full (undamped) Newton steps: near the optimum the likelihood
  // gain drops below double-precision noise before the parameters stop
  // moving, so the ascent check above cannot drive the last few digits.
  if (res.converged && p > 0) {
    FitConfig tight = cfg;
    tight.tol_theta = std::min(cfg.tol_theta, 1e-12);
    double prev_change = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 10; ++it) {
      ThetaResult ts = solve_theta_given_gamma(g, z, cur.gamma, cur, tight);
      if (ts.status != ThetaStatus::Converged) break;
      res.inner_iters += ts.iters;
      cur.alpha = ts.alpha;
      cur.beta = ts.beta;
      FisherBlocks blocks = build_V(z, cur);
      Mat info = profile_information(blocks, res.info_mode);
      Vec step = info.ldlt().solve(gamma_score(g, z, cur) /
                                   (static_cast<double>(n) * (n - 1)));
      if (!step.allFinite()) break;
      const double change = step.cwiseAbs().maxCoeff();
      if (change >= prev_change || change > 1e-3) break;
      cur.gamma = (cur.gamma + step)
                      .cwiseMax(-cfg.gamma_box)
                      .cwiseMin(cfg.gamma_box);
      prev_change = change;
      if (change < 1e-13) break;
    }
    ThetaResult ts = solve_theta_given_gamma(g, z, cur.gamma, cur, tight);
    if (ts.status == ThetaStatus::Converged) {
      res.inner_iters += ts.iters;
      cur.alpha = ts.alpha;
      cur.beta = ts.beta;
    }
  }

  res.params = cur;
  res.gamma_box_active =
      p > 0 && cur.gamma.cwiseAbs().maxCoeff() >= cfg.gamma_box - 1e-12;
  res.exists = res.converged && !res.gamma_box_active;
  res.loglik = log_likelihood(g, z, cur);
  Score sc = score(g, z, cur);
  double norm = sc.theta.cwiseAbs().maxCoeff();
  if (p > 0) norm = std::max(norm, sc.gamma.cwiseAbs().maxCoeff());
  res.final_score_norm = norm;
  res.kappa = realized_kappa(z, cur.gamma);
  return res;
}

}  // namespace netmle
