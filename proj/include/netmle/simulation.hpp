#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "netmle/estimation.hpp"
#include "netmle/rng.hpp"
#include "netmle/types.hpp"

namespace netmle {

enum class LRegime { Zero, LogLog, SqrtLog, Log };

double regime_L(LRegime regime, int n);
std::string regime_name(LRegime regime);
LRegime regime_from_name(const std::string& name);

struct SimDesign {
  int n = 100;
  LRegime regime = LRegime::Zero;
  Vec gamma_star = (Vec(2) << 1.0, 1.5).finished();
  int reps = 1000;
  std::uint64_t seed = 1;
  // Zero-based node pairs monitored for alpha-difference coverage; empty
  // means the defaults (1,2), (n/2, n/2+1), (n-1, n) in one-based labels.
  std::vector<std::pair<int, int>> pairs;
  double level = 0.95;
  int threads = 0;  // 0: hardware concurrency
  FitConfig fit_cfg;

  std::vector<std::pair<int, int>> effective_pairs() const;
};

ModelParams make_truth(const SimDesign& design);

// Node attributes i.i.d. Beta(2,2) per coordinate, absolute-difference dyads.
NodeCovariates make_covariates(int n, int p, Rng& rng);

DirectedGraph sample_graph(const ModelParams& params, const DyadCovariates& z,
                           Rng& rng);

struct PairCell {
  int i = 0, j = 0;   // zero-based
  int covered = 0;
  double length_sum = 0;
  int count = 0;      // replicates with an existing MLE
};

struct GammaCell {
  int coord = 0;
  int covered_raw = 0, covered_bc = 0;
  double length_sum = 0;
  double bias_sum_raw = 0, bias_sum_bc = 0;
  double abs_bias_sum_raw = 0, abs_bias_sum_bc = 0;
  int count = 0;
};

struct QQRecord {
  int rep = 0;
  std::string stat;
  double value = 0;
};

struct SimTable {
  SimDesign design;
  int reps = 0;
  int nonexistent = 0;        // fit divergence or degree screen
  int degree_screened = 0;    // subset of the above caught by the screen
  std::vector<PairCell> pairs;
  std::vector<GammaCell> gamma;
  std::vector<QQRecord> qq;   // truth-centered statistics, keyed by replicate
};

// Parallel over replicates with per-replicate substreams; accumulation is in
// replicate order, so output is identical for a fixed design and seed.
SimTable run_campaign(const SimDesign& design);

}  // namespace netmle
