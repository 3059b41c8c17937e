#include "netmle/simulation.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "netmle/inference.hpp"
#include "netmle/model.hpp"

namespace netmle {

double regime_L(LRegime regime, int n) {
  const double ln = std::log(static_cast<double>(n));
  switch (regime) {
    case LRegime::Zero: return 0.0;
    case LRegime::LogLog: return std::log(ln);
    case LRegime::SqrtLog: return std::sqrt(ln);
    case LRegime::Log: return ln;
  }
  throw std::logic_error("regime_L: bad regime");
}

std::string regime_name(LRegime regime) {
  switch (regime) {
    case LRegime::Zero: return "zero";
    case LRegime::LogLog: return "loglog";
    case LRegime::SqrtLog: return "sqrtlog";
    case LRegime::Log: return "log";
  }
  throw std::logic_error("regime_name: bad regime");
}

LRegime regime_from_name(const std::string& name) {
  if (name == "zero") return LRegime::Zero;
  if (name == "loglog") return LRegime::LogLog;
  if (name == "sqrtlog") return LRegime::SqrtLog;
  if (name == "log") return LRegime::Log;
  throw std::invalid_argument("unknown regime: " + name);
}

std::vector<std::pair<int, int>> SimDesign::effective_pairs() const {
  if (!pairs.empty()) return pairs;
  return {{0, 1}, {n / 2 - 1, n / 2}, {n - 2, n - 1}};
}

ModelParams make_truth(const SimDesign& design) {
  const int n = design.n;
  const double L = regime_L(design.regime, n);
  ModelParams truth =
      ModelParams::zeros(n, static_cast<int>(design.gamma_star.size()));
  for (int i = 0; i < n; ++i)
    truth.alpha[i] = (n - 1 - i) * L / (n - 1);
  truth.beta = truth.alpha;
  truth.beta[n - 1] = 0.0;
  truth.gamma = design.gamma_star;
  return truth;
}

NodeCovariates make_covariates(int n, int p, Rng& rng) {
  NodeCovariates cov;
  cov.x = Mat(n, p);
  cov.transforms.assign(p, CovTransform::AbsDiff);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < p; ++k) cov.x(i, k) = rng.beta22();
  return cov;
}

DirectedGraph sample_graph(const ModelParams& params, const DyadCovariates& z,
                           Rng& rng) {
  const int n = params.n();
  DirectedGraph g(n);
  Mat pm = prob_matrix(params, z);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      g.set_edge(i, j, rng.bernoulli(pm(i, j)));
    }
  return g;
}

namespace {

struct RepOutcome {
  bool screened = false;
  bool exists = false;
  std::vector<bool> pair_covered;
  std::vector<double> pair_length;
  std::vector<double> xi;  // truth-centered, per monitored pair
  Vec gamma_hat, gamma_bc, se_gamma;
};

RepOutcome run_replicate(const SimDesign& design, const ModelParams& truth,
                         int rep) {
  const int p = static_cast<int>(design.gamma_star.size());
  Rng rng(design.seed, static_cast<std::uint64_t>(rep));
  NodeCovariates cov = make_covariates(design.n, p, rng);
  DyadCovariates z = cov.to_dyads();
  DirectedGraph g = sample_graph(truth, z, rng);

  RepOutcome out;
  if (check_existence(g) == Existence::DefinitelyNonexistent) {
    out.screened = true;
    return out;
  }
  FitResult fr = fit(g, z, design.fit_cfg);
  if (!fr.exists) return out;
  out.exists = true;

  FisherBlocks blocks = build_V(z, fr.params);
  InferenceReport rep_inf =
      gamma_inference(z, fr.params, blocks, design.level, fr.info_mode);

  const double zq = normal_quantile(0.5 + design.level / 2.0);
  for (auto [i, j] : design.effective_pairs()) {
    const double diff_hat = fr.params.alpha[i] - fr.params.alpha[j];
    const double diff_true = truth.alpha[i] - truth.alpha[j];
    const double se =
        std::sqrt(1.0 / blocks.v_diag[i] + 1.0 / blocks.v_diag[j]);
    out.pair_covered.push_back(std::abs(diff_hat - diff_true) <= zq * se);
    out.pair_length.push_back(2.0 * zq * se);
    out.xi.push_back((diff_hat - diff_true) / se);
  }
  out.gamma_hat = rep_inf.gamma_hat;
  out.gamma_bc = rep_inf.gamma_bc;
  out.se_gamma = rep_inf.se_gamma;
  return out;
}

}  // namespace

SimTable run_campaign(const SimDesign& design) {
  if (design.reps < 1) throw std::invalid_argument("run_campaign: reps >= 1");
  const int p = static_cast<int>(design.gamma_star.size());
  const ModelParams truth = make_truth(design);
  const auto pairs = design.effective_pairs();
  for (auto [i, j] : pairs)
    if (i < 0 || j < 0 || i >= design.n || j >= design.n || i == j)
      throw std::invalid_argument("run_campaign: bad pair");

  std::vector<RepOutcome> outcomes(design.reps);
  unsigned workers = design.threads > 0
                         ? static_cast<unsigned>(design.threads)
                         : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, design.reps);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int rep = next.fetch_add(1);
      if (rep >= design.reps) return;
      outcomes[rep] = run_replicate(design, truth, rep);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  SimTable table;
  table.design = design;
  table.reps = design.reps;
  for (size_t k = 0; k < pairs.size(); ++k)
    table.pairs.push_back(PairCell{pairs[k].first, pairs[k].second, 0, 0, 0});
  for (int k = 0; k < p; ++k) table.gamma.push_back(GammaCell{k});

  const double zq = normal_quantile(0.5 + design.level / 2.0);
  for (int rep = 0; rep < design.reps; ++rep) {
    const RepOutcome& out = outcomes[rep];
    if (out.screened) ++table.degree_screened;
    if (!out.exists) {
      ++table.nonexistent;
      continue;
    }
    for (size_t k = 0; k < pairs.size(); ++k) {
      PairCell& cell = table.pairs[k];
      cell.covered += out.pair_covered[k] ? 1 : 0;
      cell.length_sum += out.pair_length[k];
      ++cell.count;
      table.qq.push_back(QQRecord{
          rep,
          "xi_" + std::to_string(pairs[k].first + 1) + "_" +
              std::to_string(pairs[k].second + 1),
          out.xi[k]});
    }
    for (int k = 0; k < p; ++k) {
      GammaCell& cell = table.gamma[k];
      const double g_star = design.gamma_star[k];
      const double half = zq * out.se_gamma[k];
      cell.covered_raw += std::abs(out.gamma_hat[k] - g_star) <= half;
      cell.covered_bc += std::abs(out.gamma_bc[k] - g_star) <= half;
      cell.length_sum += 2.0 * half;
      cell.bias_sum_raw += out.gamma_hat[k] - g_star;
      cell.bias_sum_bc += out.gamma_bc[k] - g_star;
      cell.abs_bias_sum_raw += std::abs(out.gamma_hat[k] - g_star);
      cell.abs_bias_sum_bc += std::abs(out.gamma_bc[k] - g_star);
      ++cell.count;
      table.qq.push_back(QQRecord{rep, "z_gamma" + std::to_string(k + 1),
                                  (out.gamma_hat[k] - g_star) /
                                      out.se_gamma[k]});
    }
  }
  return table;
}

}  // namespace netmle
