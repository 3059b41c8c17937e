#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "netmle/inference.hpp"
#include "netmle/simulation.hpp"
#include "netmle/types.hpp"

namespace netmle {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Edge list: one "src dst" pair per line, '#' comments, arbitrary integer
// labels remapped to a contiguous internal index (sorted label order).
struct LabeledGraph {
  DirectedGraph graph;
  std::vector<long long> labels;

  int index_of(long long label) const;
};

LabeledGraph read_edge_list(const std::string& path);
void write_edge_list(const LabeledGraph& g, const std::string& path);

// Node-attribute table: a "# transforms: absdiff|equal ..." header, then one
// row per node: label x_1 .. x_q. Coverage of every graph node is required.
NodeCovariates read_node_covariates(const std::string& path,
                                    const LabeledGraph& g);

// Dyad table: one row per ordered pair: src dst z_1 .. z_p, all pairs present.
DyadCovariates read_dyad_covariates(const std::string& path,
                                    const LabeledGraph& g);

// In-place column standardization (subtract mean, divide by sd).
void normalize_columns(Mat& x);

// Flat key = value campaign configuration with schema validation.
SimDesign parse_sim_config(const std::string& path);

void write_sim_table_csv(const SimTable& table, const std::string& path);
void write_qq_csv(const SimTable& table, const std::string& path);
void write_manifest_json(const SimDesign& design, const std::string& version,
                         const std::string& path);

// Fit report round trip: everything cmd_test needs to re-derive statistics.
struct FitReport {
  std::vector<long long> labels;
  ModelParams params;
  Vec se_theta;
  Vec v_diag;
  InferenceReport inference;
  bool converged = false;
  bool exists = false;
  double loglik = 0.0;
  double kappa = 0.0;
  std::string info_mode;
};

void write_fit_report(const FitReport& report, const std::string& path);
FitReport read_fit_report(const std::string& path);

// QQ coordinates: sorted empirical values against normal plotting positions.
struct QQPoint {
  double theoretical = 0, empirical = 0;
};
std::vector<QQPoint> qq_points(std::vector<double> values);

}  // namespace netmle
