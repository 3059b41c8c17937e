#include "netmle/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "netmle/rng.hpp"

namespace netmle {

using nlohmann::json;

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> toks;
  std::string t;
  while (in >> t) {
    if (t[0] == '#') break;
    toks.push_back(t);
  }
  return toks;
}

[[noreturn]] void fail(const std::string& path, int line,
                       const std::string& what) {
  throw ParseError(path + ":" + std::to_string(line) + ": " + what);
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return in;
}

}  // namespace

int LabeledGraph::index_of(long long label) const {
  auto it = std::lower_bound(labels.begin(), labels.end(), label);
  if (it == labels.end() || *it != label)
    throw ParseError("unknown node label " + std::to_string(label));
  return static_cast<int>(it - labels.begin());
}

LabeledGraph read_edge_list(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  std::vector<std::pair<long long, long long>> edges;
  std::vector<long long> labels;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    if (toks.size() != 2) fail(path, lineno, "expected 'src dst'");
    long long s, d;
    try {
      s = std::stoll(toks[0]);
      d = std::stoll(toks[1]);
    } catch (const std::exception&) {
      fail(path, lineno, "non-integer node label");
    }
    if (s == d) fail(path, lineno, "self-loop rejected");
    edges.emplace_back(s, d);
    labels.push_back(s);
    labels.push_back(d);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  if (labels.size() < 2) throw ParseError(path + ": fewer than two nodes");

  LabeledGraph g{DirectedGraph(static_cast<int>(labels.size())),
                 std::move(labels)};
  for (auto [s, d] : edges) {
    const int i = g.index_of(s), j = g.index_of(d);
    if (g.graph.edge(i, j))
      throw ParseError(path + ": duplicate edge " + std::to_string(s) + " " +
                       std::to_string(d));
    g.graph.set_edge(i, j, true);
  }
  return g;
}

void write_edge_list(const LabeledGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  const int n = g.graph.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && g.graph.edge(i, j))
        out << g.labels[i] << ' ' << g.labels[j] << '\n';
}

NodeCovariates read_node_covariates(const std::string& path,
                                    const LabeledGraph& g) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  int lineno = 0;
  std::vector<CovTransform> transforms;
  const int n = g.graph.n();
  Mat x;
  std::vector<bool> seen(n, false);
  while (std::getline(in, line)) {
    ++lineno;
    if (line.rfind("# transforms:", 0) == 0) {
      std::istringstream hs(line.substr(13));
      std::string name;
      while (hs >> name) {
        if (name == "absdiff")
          transforms.push_back(CovTransform::AbsDiff);
        else if (name == "equal")
          transforms.push_back(CovTransform::Equal);
        else
          fail(path, lineno, "unknown transform '" + name + "'");
      }
      x = Mat::Zero(n, static_cast<int>(transforms.size()));
      continue;
    }
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    if (transforms.empty())
      fail(path, lineno, "missing '# transforms:' header");
    if (toks.size() != transforms.size() + 1)
      fail(path, lineno, "expected label plus one value per transform");
    int idx;
    try {
      idx = g.index_of(std::stoll(toks[0]));
    } catch (const std::exception& e) {
      fail(path, lineno, e.what());
    }
    if (seen[idx]) fail(path, lineno, "duplicate node row");
    seen[idx] = true;
    for (size_t k = 1; k < toks.size(); ++k) {
      double v;
      try {
        v = std::stod(toks[k]);
      } catch (const std::exception&) {
        fail(path, lineno, "non-numeric value");
      }
      if (!std::isfinite(v)) fail(path, lineno, "non-finite value");
      x(idx, static_cast<int>(k - 1)) = v;
    }
  }
  for (int i = 0; i < n; ++i)
    if (!seen[i])
      throw ParseError(path + ": no covariate row for node " +
                       std::to_string(g.labels[i]));
  return NodeCovariates{std::move(x), std::move(transforms)};
}

DyadCovariates read_dyad_covariates(const std::string& path,
                                    const LabeledGraph& g) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  int lineno = 0;
  const int n = g.graph.n();
  int p = -1;
  DyadCovariates z(n, 0);
  std::vector<bool> seen;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    if (p < 0) {
      p = static_cast<int>(toks.size()) - 2;
      if (p < 1) fail(path, lineno, "expected 'src dst z_1 ..'");
      z = DyadCovariates(n, p);
      seen.assign(static_cast<size_t>(n) * n, false);
    }
    if (static_cast<int>(toks.size()) != p + 2)
      fail(path, lineno, "inconsistent column count");
    int i, j;
    try {
      i = g.index_of(std::stoll(toks[0]));
      j = g.index_of(std::stoll(toks[1]));
    } catch (const std::exception& e) {
      fail(path, lineno, e.what());
    }
    if (i == j) fail(path, lineno, "self-pair rejected");
    if (seen[static_cast<size_t>(i) * n + j])
      fail(path, lineno, "duplicate pair row");
    seen[static_cast<size_t>(i) * n + j] = true;
    for (int k = 0; k < p; ++k) {
      double v;
      try {
        v = std::stod(toks[k + 2]);
      } catch (const std::exception&) {
        fail(path, lineno, "non-numeric value");
      }
      if (!std::isfinite(v)) fail(path, lineno, "non-finite value");
      z.at(i, j)[k] = v;
    }
  }
  if (p < 0) throw ParseError(path + ": empty dyad covariate file");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && !seen[static_cast<size_t>(i) * n + j])
        throw ParseError(path + ": missing pair " +
                         std::to_string(g.labels[i]) + " " +
                         std::to_string(g.labels[j]));
  return z;
}

void normalize_columns(Mat& x) {
  for (int k = 0; k < x.cols(); ++k) {
    const double mean = x.col(k).mean();
    x.col(k).array() -= mean;
    const double sd =
        std::sqrt(x.col(k).squaredNorm() / std::max<int>(1, x.rows() - 1));
    if (sd > 0) x.col(k) /= sd;
  }
}

SimDesign parse_sim_config(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  SimDesign d;
  std::string line;
  int lineno = 0;
  bool have_n = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (eq == std::string::npos) fail(path, lineno, "expected 'key = value'");
    auto strip = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = strip(line.substr(0, eq));
    const std::string val = strip(line.substr(eq + 1));
    try {
      if (key == "n") {
        d.n = std::stoi(val);
        have_n = true;
      } else if (key == "regime") {
        d.regime = regime_from_name(val);
      } else if (key == "reps") {
        d.reps = std::stoi(val);
      } else if (key == "seed") {
        d.seed = std::stoull(val);
      } else if (key == "level") {
        d.level = std::stod(val);
      } else if (key == "threads") {
        d.threads = std::stoi(val);
      } else if (key == "gamma_star") {
        std::istringstream vs(val);
        std::vector<double> g;
        std::string tok;
        while (std::getline(vs, tok, ',')) g.push_back(std::stod(tok));
        d.gamma_star = Eigen::Map<Vec>(g.data(), g.size());
      } else if (key == "pairs") {
        // one-based "i,j" pairs separated by ';'
        d.pairs.clear();
        std::istringstream vs(val);
        std::string tok;
        while (std::getline(vs, tok, ';')) {
          const auto comma = tok.find(',');
          if (comma == std::string::npos)
            fail(path, lineno, "pair must be 'i,j'");
          d.pairs.emplace_back(std::stoi(tok.substr(0, comma)) - 1,
                               std::stoi(tok.substr(comma + 1)) - 1);
        }
      } else {
        fail(path, lineno, "unknown key '" + key + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      fail(path, lineno, "bad value for '" + key + "'");
    }
  }
  if (!have_n) throw ParseError(path + ": missing required key 'n'");
  if (d.n < 2) throw ParseError(path + ": n must be >= 2");
  if (d.reps < 1) throw ParseError(path + ": reps must be >= 1");
  if (!(d.level > 0 && d.level < 1))
    throw ParseError(path + ": level must be in (0,1)");
  for (auto [i, j] : d.pairs)
    if (i < 0 || j < 0 || i >= d.n || j >= d.n || i == j)
      throw ParseError(path + ": pair out of range");
  return d;
}

namespace {

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(10);
  out << v;
  return out.str();
}

}  // namespace

void write_sim_table_csv(const SimTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << "kind,n,regime,label,coverage_pct,mean_ci_length,nonexist_pct,"
         "mean_bias,mean_abs_bias,count,reps\n";
  const SimDesign& d = table.design;
  const double nonexist_pct = 100.0 * table.nonexistent / table.reps;
  for (const PairCell& c : table.pairs) {
    out << "theta_pair," << d.n << ',' << regime_name(d.regime) << ",a"
        << (c.i + 1) << "-a" << (c.j + 1) << ',';
    if (c.count > 0)
      out << fmt(100.0 * c.covered / c.count) << ','
          << fmt(c.length_sum / c.count);
    else
      out << "NA,NA";
    out << ',' << fmt(nonexist_pct) << ",NA,NA," << c.count << ','
        << table.reps << '\n';
  }
  for (const GammaCell& c : table.gamma) {
    for (bool bc : {false, true}) {
      out << (bc ? "gamma_bc," : "gamma,") << d.n << ','
          << regime_name(d.regime) << ",gamma" << (c.coord + 1) << ',';
      if (c.count > 0) {
        const int covered = bc ? c.covered_bc : c.covered_raw;
        out << fmt(100.0 * covered / c.count) << ','
            << fmt(c.length_sum / c.count) << ',' << fmt(nonexist_pct) << ','
            << fmt((bc ? c.bias_sum_bc : c.bias_sum_raw) / c.count) << ','
            << fmt((bc ? c.abs_bias_sum_bc : c.abs_bias_sum_raw) / c.count);
      } else {
        out << "NA,NA," << fmt(nonexist_pct) << ",NA,NA";
      }
      out << ',' << c.count << ',' << table.reps << '\n';
    }
  }
}

void write_qq_csv(const SimTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << "rep,stat,value\n";
  for (const QQRecord& r : table.qq)
    out << r.rep << ',' << r.stat << ',' << fmt(r.value) << '\n';
}

void write_manifest_json(const SimDesign& design, const std::string& version,
                         const std::string& path) {
  json j;
  j["version"] = version;
  j["n"] = design.n;
  j["regime"] = regime_name(design.regime);
  j["reps"] = design.reps;
  j["seed"] = design.seed;
  j["level"] = design.level;
  j["gamma_star"] =
      std::vector<double>(design.gamma_star.data(),
                          design.gamma_star.data() + design.gamma_star.size());
  json pairs = json::array();
  for (auto [i, j2] : design.effective_pairs())
    pairs.push_back({i + 1, j2 + 1});
  j["pairs"] = pairs;
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << j.dump(2) << '\n';
}

namespace {

json vec_to_json(const Vec& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Vec vec_from_json(const json& j) {
  std::vector<double> v = j.get<std::vector<double>>();
  return Eigen::Map<Vec>(v.data(), v.size());
}

}  // namespace

void write_fit_report(const FitReport& report, const std::string& path) {
  json j;
  j["labels"] = report.labels;
  j["alpha"] = vec_to_json(report.params.alpha);
  j["beta"] = vec_to_json(report.params.beta);
  j["gamma"] = vec_to_json(report.params.gamma);
  j["se_theta"] = vec_to_json(report.se_theta);
  j["v_diag"] = vec_to_json(report.v_diag);
  j["gamma_bc"] = vec_to_json(report.inference.gamma_bc);
  j["se_gamma"] = vec_to_json(report.inference.se_gamma);
  j["bias"] = vec_to_json(report.inference.bias_b);
  j["p_values"] = vec_to_json(report.inference.p_values);
  j["ci_lo"] = vec_to_json(report.inference.ci_lo);
  j["ci_hi"] = vec_to_json(report.inference.ci_hi);
  j["ci_lo_raw"] = vec_to_json(report.inference.ci_lo_raw);
  j["ci_hi_raw"] = vec_to_json(report.inference.ci_hi_raw);
  j["ci_level"] = report.inference.ci_level;
  j["converged"] = report.converged;
  j["exists"] = report.exists;
  j["loglik"] = report.loglik;
  j["kappa"] = report.kappa;
  j["info_mode"] = report.info_mode;
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << j.dump(2) << '\n';
}

FitReport read_fit_report(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  FitReport r;
  r.labels = j.at("labels").get<std::vector<long long>>();
  r.params.alpha = vec_from_json(j.at("alpha"));
  r.params.beta = vec_from_json(j.at("beta"));
  r.params.gamma = vec_from_json(j.at("gamma"));
  r.se_theta = vec_from_json(j.at("se_theta"));
  r.v_diag = vec_from_json(j.at("v_diag"));
  r.inference.gamma_hat = r.params.gamma;
  r.inference.gamma_bc = vec_from_json(j.at("gamma_bc"));
  r.inference.se_gamma = vec_from_json(j.at("se_gamma"));
  r.inference.bias_b = vec_from_json(j.at("bias"));
  r.inference.p_values = vec_from_json(j.at("p_values"));
  r.inference.ci_lo = vec_from_json(j.at("ci_lo"));
  r.inference.ci_hi = vec_from_json(j.at("ci_hi"));
  r.inference.ci_lo_raw = vec_from_json(j.at("ci_lo_raw"));
  r.inference.ci_hi_raw = vec_from_json(j.at("ci_hi_raw"));
  r.inference.ci_level = j.at("ci_level").get<double>();
  r.converged = j.at("converged").get<bool>();
  r.exists = j.at("exists").get<bool>();
  r.loglik = j.at("loglik").get<double>();
  r.kappa = j.at("kappa").get<double>();
  r.info_mode = j.at("info_mode").get<std::string>();
  return r;
}

std::vector<QQPoint> qq_points(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("qq_points: empty input");
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  std::vector<QQPoint> pts(n);
  for (size_t k = 0; k < n; ++k) {
    const double q = (k + 0.5) / static_cast<double>(n);
    pts[k] = QQPoint{normal_quantile(q), values[k]};
  }
  return pts;
}

}  // namespace netmle
