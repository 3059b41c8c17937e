#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "netmle/inference.hpp"
#include "netmle/model.hpp"
#include "netmle/simulation.hpp"

namespace py = pybind11;
using namespace netmle;

namespace {

DirectedGraph graph_from_array(
    const Eigen::Ref<const Eigen::MatrixXi>& adj) {
  const int n = static_cast<int>(adj.rows());
  if (adj.cols() != n) throw std::invalid_argument("adjacency must be square");
  DirectedGraph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        if (adj(i, j) != 0)
          throw std::invalid_argument("self-loops are not allowed");
        continue;
      }
      g.set_edge(i, j, adj(i, j) != 0);
    }
  return g;
}

// z: (n, n, p) flattened row-major to (n*n, p)
DyadCovariates dyads_from_array(
    const Eigen::Ref<const Eigen::MatrixXd>& z_flat, int n) {
  const int p = static_cast<int>(z_flat.cols());
  if (z_flat.rows() != static_cast<long>(n) * n)
    throw std::invalid_argument("covariates must have n*n rows");
  DyadCovariates z(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int k = 0; k < p; ++k)
        z.at(i, j)[k] = z_flat(static_cast<long>(i) * n + j, k);
    }
  return z;
}

py::dict fit_py(const Eigen::Ref<const Eigen::MatrixXi>& adj,
                const Eigen::Ref<const Eigen::MatrixXd>& z_flat,
                double level) {
  DirectedGraph g = graph_from_array(adj);
  DyadCovariates z = dyads_from_array(z_flat, g.n());

  py::dict out;
  FitResult fr = fit(g, z);
  out["exists"] = fr.exists;
  out["converged"] = fr.converged;
  out["loglik"] = fr.loglik;
  out["kappa"] = fr.kappa;
  if (!fr.exists) return out;

  FisherBlocks blocks = build_V(z, fr.params);
  InferenceReport inf =
      gamma_inference(z, fr.params, blocks, level, fr.info_mode);
  out["alpha"] = fr.params.alpha;
  out["beta"] = fr.params.beta;
  out["gamma"] = fr.params.gamma;
  out["gamma_bc"] = inf.gamma_bc;
  out["se_gamma"] = inf.se_gamma;
  out["se_theta"] = inf.se_theta;
  out["v_diag"] = blocks.v_diag;
  out["bias"] = inf.bias_b;
  out["p_values"] = inf.p_values;
  return out;
}

double log_likelihood_py(const Eigen::Ref<const Eigen::MatrixXi>& adj,
                         const Eigen::Ref<const Eigen::MatrixXd>& z_flat,
                         const Vec& alpha, const Vec& beta, const Vec& gamma) {
  DirectedGraph g = graph_from_array(adj);
  DyadCovariates z = dyads_from_array(z_flat, g.n());
  return log_likelihood(g, z, ModelParams{alpha, beta, gamma});
}

py::dict simulate_py(int n, const std::string& regime, int reps,
                     std::uint64_t seed, int threads) {
  SimDesign design;
  design.n = n;
  design.regime = regime_from_name(regime);
  design.reps = reps;
  design.seed = seed;
  design.threads = threads;
  SimTable table = run_campaign(design);

  py::dict out;
  out["reps"] = table.reps;
  out["nonexistent"] = table.nonexistent;
  py::list pairs;
  for (const PairCell& c : table.pairs) {
    py::dict cell;
    cell["pair"] = py::make_tuple(c.i + 1, c.j + 1);
    cell["count"] = c.count;
    cell["coverage"] = c.count ? 100.0 * c.covered / c.count : -1.0;
    cell["mean_ci_length"] = c.count ? c.length_sum / c.count : -1.0;
    pairs.append(cell);
  }
  out["pairs"] = pairs;
  py::list gammas;
  for (const GammaCell& c : table.gamma) {
    py::dict cell;
    cell["coord"] = c.coord + 1;
    cell["count"] = c.count;
    cell["coverage"] = c.count ? 100.0 * c.covered_raw / c.count : -1.0;
    cell["coverage_bc"] = c.count ? 100.0 * c.covered_bc / c.count : -1.0;
    cell["mean_ci_length"] = c.count ? c.length_sum / c.count : -1.0;
    gammas.append(cell);
  }
  out["gamma"] = gammas;
  return out;
}

py::tuple sample_py(int n, const std::string& regime, std::uint64_t seed) {
  SimDesign design;
  design.n = n;
  design.regime = regime_from_name(regime);
  design.seed = seed;
  ModelParams truth = make_truth(design);
  Rng rng(seed, 0);
  NodeCovariates cov = make_covariates(n, static_cast<int>(truth.gamma.size()),
                                       rng);
  DyadCovariates z = cov.to_dyads();
  DirectedGraph g = sample_graph(truth, z, rng);

  Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && g.edge(i, j)) adj(i, j) = 1;
  Eigen::MatrixXd z_flat(static_cast<long>(n) * n, z.p());
  z_flat.setZero();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int k = 0; k < z.p(); ++k)
        z_flat(static_cast<long>(i) * n + j, k) = z.at(i, j)[k];
    }
  return py::make_tuple(adj, z_flat, truth.alpha, truth.beta, truth.gamma);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Directed degree-heterogeneity network model with covariates";
  m.def("fit", &fit_py, py::arg("adj"), py::arg("z"), py::arg("level") = 0.95,
        "Fit the model; z has shape (n*n, p), row-major over (i, j) pairs.");
  m.def("log_likelihood", &log_likelihood_py, py::arg("adj"), py::arg("z"),
        py::arg("alpha"), py::arg("beta"), py::arg("gamma"));
  m.def("simulate", &simulate_py, py::arg("n"), py::arg("regime"),
        py::arg("reps"), py::arg("seed") = 1, py::arg("threads") = 0,
        "Run a Monte Carlo coverage campaign and return summary cells.");
  m.def("sample", &sample_py, py::arg("n"), py::arg("regime"),
        py::arg("seed") = 1,
        "Draw one synthetic dataset; returns (adj, z, alpha, beta, gamma).");
  m.def("normal_quantile", &normal_quantile, py::arg("p"));
}
