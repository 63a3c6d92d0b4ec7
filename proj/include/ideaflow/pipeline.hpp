#pragma once

#include <cstdint>
#include <string>

#include "ideaflow/bcc.hpp"
#include "ideaflow/dtw.hpp"
#include "ideaflow/flow.hpp"

namespace ideaflow {

// Every tunable of the pipeline; echoed verbatim into output artifacts.
struct RunConfig {
  int tau_max = 6;
  TensorVariant variant = TensorVariant::X3;
  int q = 0;      // 0 = k_a + k_b
  int q_seg = 4;
  int k_a = 0;    // required by analyze
  int k_b = 0;
  int k_t = 4;
  double threshold = 0.5;
  double theta_local = 0.7;
  double theta_global = 5.0;
  double rho_stay = 0.99;
  std::uint64_t seed = 0;
  int restarts = 10;
  int parafac_iters = 200;
  double parafac_tol = 1e-6;
  int threads = 0;

  DtwConfig dtw() const { return DtwConfig{tau_max}; }
  BccConfig bcc() const {
    BccConfig cfg;
    cfg.theta_local = theta_local;
    cfg.theta_global = theta_global;
    cfg.rho_stay = rho_stay;
    return cfg;
  }
  FlowConfig flow() const;
};

std::string run_config_json(const RunConfig& cfg);

// build_graph -> partition -> per-pair segmentation -> aggregation.
FlowReport analyze_series(const GroupSeries& a, const GroupSeries& b,
                          const RunConfig& cfg);

FlowReport analyze_graph(const AugmentedBipartiteGraph& graph,
                         const RunConfig& cfg,
                         const std::vector<std::string>& tokens_a = {},
                         const std::vector<std::string>& tokens_b = {});

}  // namespace ideaflow
