#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "netmle/io.hpp"
#include "netmle/model.hpp"

namespace {

constexpr const char* kVersion = "netmle 0.1.0";

using namespace netmle;

int resolve_node(const LabeledGraph& g, long long ref, bool zero_based) {
  if (zero_based) {
    if (ref < 0 || ref >= g.graph.n())
      throw ParseError("node index out of range: " + std::to_string(ref));
    return static_cast<int>(ref);
  }
  return g.index_of(ref);
}

int cmd_fit(const std::string& edge_file, const std::string& cov_file,
            bool dyad_mode, bool zero_based, bool force, bool normalize,
            bool exact_inverse, double level, const std::string& out_path) {
  LabeledGraph lg = read_edge_list(edge_file);
  const int n = lg.graph.n();

  DyadCovariates z(n, 0);
  if (!cov_file.empty()) {
    if (dyad_mode) {
      z = read_dyad_covariates(cov_file, lg);
    } else {
      NodeCovariates cov = read_node_covariates(cov_file, lg);
      if (normalize) normalize_columns(cov.x);
      z = cov.to_dyads();
    }
  }

  if (check_existence(lg.graph) == Existence::DefinitelyNonexistent) {
    IVec d = lg.graph.out_degrees(), b = lg.graph.in_degrees();
    std::cerr << "MLE does not exist: boundary degrees at nodes";
    for (int i = 0; i < n; ++i)
      if (d[i] == 0 || d[i] == n - 1 || b[i] == 0 || b[i] == n - 1)
        std::cerr << ' ' << lg.labels[i];
    std::cerr << "\n";
    if (!force) return 2;
  }

  FitConfig cfg;
  if (!exact_inverse) cfg.exact_inverse_max_n = 0;
  FitResult fr = fit(lg.graph, z, cfg);
  if (!fr.exists) {
    std::cerr << "MLE does not exist (estimation diverged)\n";
    return 2;
  }

  FisherBlocks blocks = build_V(z, fr.params);
  InferenceReport inf =
      gamma_inference(z, fr.params, blocks, level, fr.info_mode);

  FitReport report;
  report.labels = lg.labels;
  report.params = fr.params;
  report.se_theta = inf.se_theta;
  report.v_diag = blocks.v_diag;
  report.inference = inf;
  report.converged = fr.converged;
  report.exists = fr.exists;
  report.loglik = fr.loglik;
  report.kappa = fr.kappa;
  report.info_mode = fr.info_mode == InfoMode::Exact ? "exact" : "approx";
  if (!out_path.empty()) write_fit_report(report, out_path);

  std::printf("log-likelihood: %.6f   max |Z.gamma|: %.4f\n", fr.loglik,
              fr.kappa);
  std::printf("%8s %10s %8s %10s %8s\n", "node", "alpha", "se", "beta", "se");
  for (int i = 0; i < n; ++i) {
    std::printf("%8lld %10.4f %8.4f %10.4f ", lg.labels[i], fr.params.alpha[i],
                inf.se_theta[i], fr.params.beta[i]);
    if (i < n - 1)
      std::printf("%8.4f\n", inf.se_theta[n + i]);
    else
      std::printf("%8s\n", "-");
  }
  if (z.p() > 0) {
    std::printf("\n%8s %10s %10s %8s %10s\n", "coef", "gamma", "gamma_bc",
                "se", "p-value");
    for (int k = 0; k < z.p(); ++k)
      std::printf("%8d %10.4f %10.4f %8.4f %10.3e\n", k + 1,
                  inf.gamma_hat[k], inf.gamma_bc[k], inf.se_gamma[k],
                  inf.p_values[k]);
  }
  return 0;
}

int cmd_simulate(const std::string& config_file, const std::string& out_dir,
                 int reps_override, long long seed_override, int threads) {
  SimDesign design = parse_sim_config(config_file);
  if (reps_override > 0) design.reps = reps_override;
  if (seed_override >= 0)
    design.seed = static_cast<std::uint64_t>(seed_override);
  if (threads > 0) design.threads = threads;

  std::filesystem::create_directories(out_dir);
  SimTable table = run_campaign(design);
  write_sim_table_csv(table, out_dir + "/cells.csv");
  write_qq_csv(table, out_dir + "/qq.csv");
  write_manifest_json(design, kVersion, out_dir + "/manifest.json");
  std::printf("reps: %d   nonexistent: %d (%.2f%%)   outputs: %s\n",
              table.reps, table.nonexistent,
              100.0 * table.nonexistent / table.reps, out_dir.c_str());
  return 0;
}

int cmd_test(const std::string& report_file, const std::string& kind_name,
             const std::string& pair_spec, bool zero_based) {
  FitReport report = read_fit_report(report_file);
  const int n = static_cast<int>(report.params.alpha.size());

  PairKind kind;
  if (kind_name == "xi")
    kind = PairKind::Xi;
  else if (kind_name == "zeta")
    kind = PairKind::Zeta;
  else if (kind_name == "eta")
    kind = PairKind::Eta;
  else
    throw ParseError("kind must be xi, zeta, or eta");

  const auto comma = pair_spec.find(',');
  if (comma == std::string::npos) throw ParseError("pair must be 'i,j'");
  LabeledGraph lookup{DirectedGraph(n), report.labels};
  const int i =
      resolve_node(lookup, std::stoll(pair_spec.substr(0, comma)), zero_based);
  const int j =
      resolve_node(lookup, std::stoll(pair_spec.substr(comma + 1)), zero_based);

  FisherBlocks blocks;
  blocks.n = n;
  blocks.v_diag = report.v_diag;
  const double stat =
      homogeneity_stat(report.params, blocks, kind, i, j, 0.0);
  const double p = 2.0 * normal_cdf(-std::abs(stat));
  std::printf("%4s %8s %8s %12s %12s\n", "kind", "i", "j", "statistic",
              "p-value");
  std::printf("%4s %8lld %8lld %12.4f %12.4e\n", kind_name.c_str(),
              report.labels[i], report.labels[j], stat, p);
  return 0;
}

int cmd_qq(const std::string& qq_file, const std::string& stat,
           const std::string& out_path) {
  std::ifstream in(qq_file);
  if (!in) throw ParseError("cannot open " + qq_file);
  std::string line;
  std::vector<double> values;
  std::vector<std::string> stats_seen;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    std::istringstream ls(line);
    std::string rep, name, value;
    if (!std::getline(ls, rep, ',') || !std::getline(ls, name, ',') ||
        !std::getline(ls, value))
      throw ParseError(qq_file + ": malformed row");
    if (std::find(stats_seen.begin(), stats_seen.end(), name) ==
        stats_seen.end())
      stats_seen.push_back(name);
    if (name == stat) values.push_back(std::stod(value));
  }
  if (values.empty()) {
    std::ostringstream msg;
    msg << "no rows for statistic '" << stat << "'; available:";
    for (const auto& s : stats_seen) msg << ' ' << s;
    throw ParseError(msg.str());
  }
  std::ofstream out(out_path);
  if (!out) throw ParseError("cannot write " + out_path);
  out << "theoretical,empirical\n";
  out.precision(10);
  for (const QQPoint& pt : qq_points(std::move(values)))
    out << pt.theoretical << ',' << pt.empirical << '\n';
  std::printf("wrote %s\n", out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directed degree-heterogeneity network model with covariates"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // fit
  std::string edge_file, cov_file, fit_out;
  bool dyad_mode = false, zero_based = false, force = false;
  bool normalize = false, no_exact = false;
  double level = 0.95;
  auto* fit_cmd = app.add_subcommand("fit", "Fit the model to an edge list");
  fit_cmd->add_option("edges", edge_file, "edge list file")->required();
  fit_cmd->add_option("--covariates", cov_file, "covariate file");
  fit_cmd->add_flag("--dyad", dyad_mode, "covariate file is in dyad mode");
  fit_cmd->add_flag("--zero-based", zero_based,
                    "CLI node references are zero-based indices");
  fit_cmd->add_flag("--force", force, "attempt the fit despite the screen");
  fit_cmd->add_flag("--normalize", normalize,
                    "standardize node covariate columns");
  fit_cmd->add_flag("--no-exact-inverse", no_exact,
                    "use the surrogate inverse regardless of size");
  fit_cmd->add_option("--level", level, "confidence level")
      ->check(CLI::Range(1e-6, 1.0 - 1e-6));
  fit_cmd->add_option("--out", fit_out, "JSON report path");

  // simulate
  std::string config_file, out_dir = "campaign";
  int reps_override = 0, threads = 0;
  long long seed_override = -1;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a Monte Carlo campaign");
  sim_cmd->add_option("config", config_file, "campaign config")->required();
  sim_cmd->add_option("--out-dir", out_dir, "output directory");
  sim_cmd->add_option("--reps", reps_override, "override replicate count");
  sim_cmd->add_option("--seed", seed_override, "override seed");
  sim_cmd->add_option("--threads", threads, "worker threads");

  // test
  std::string report_file, kind_name, pair_spec;
  bool test_zero_based = false;
  auto* test_cmd =
      app.add_subcommand("test", "Homogeneity test from a fit report");
  test_cmd->add_option("report", report_file, "fit report JSON")->required();
  test_cmd->add_option("--kind", kind_name, "xi | zeta | eta")->required();
  test_cmd->add_option("--pair", pair_spec, "node pair 'i,j'")->required();
  test_cmd->add_flag("--zero-based", test_zero_based,
                     "pair uses zero-based indices");

  // qq
  std::string qq_file, qq_stat, qq_out = "qq_points.csv";
  auto* qq_cmd =
      app.add_subcommand("qq", "QQ coordinates from campaign statistics");
  qq_cmd->add_option("qqcsv", qq_file, "campaign qq.csv")->required();
  qq_cmd->add_option("--stat", qq_stat, "statistic name")->required();
  qq_cmd->add_option("--out", qq_out, "output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fit_cmd)
      return cmd_fit(edge_file, cov_file, dyad_mode, zero_based, force,
                     normalize, !no_exact, level, fit_out);
    if (*sim_cmd)
      return cmd_simulate(config_file, out_dir, reps_override, seed_override,
                          threads);
    if (*test_cmd)
      return cmd_test(report_file, kind_name, pair_spec, test_zero_based);
    if (*qq_cmd) return cmd_qq(qq_file, qq_stat, qq_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
