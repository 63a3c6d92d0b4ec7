#include "ideaflow/pipeline.hpp"

#include <json.hpp>

#include "ideaflow/edge_graph.hpp"
#include "ideaflow/error.hpp"

namespace ideaflow {

FlowConfig RunConfig::flow() const {
  FlowConfig cfg;
  cfg.variant = variant;
  cfg.q = q;
  cfg.q_seg = q_seg;
  cfg.k_a = k_a;
  cfg.k_b = k_b;
  cfg.k_t = k_t;
  cfg.threshold = threshold;
  cfg.parafac.max_iters = parafac_iters;
  cfg.parafac.tol = parafac_tol;
  cfg.restarts = restarts;
  cfg.seed = seed;
  cfg.threads = threads;
  return cfg;
}

std::string run_config_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["tau_max"] = cfg.tau_max;
  j["variant"] = variant_name(cfg.variant);
  j["q"] = cfg.q;
  j["q_seg"] = cfg.q_seg;
  j["k_a"] = cfg.k_a;
  j["k_b"] = cfg.k_b;
  j["k_t"] = cfg.k_t;
  j["threshold"] = cfg.threshold;
  j["theta_local"] = cfg.theta_local;
  j["theta_global"] = cfg.theta_global;
  j["rho_stay"] = cfg.rho_stay;
  j["seed"] = cfg.seed;
  j["restarts"] = cfg.restarts;
  j["parafac_iters"] = cfg.parafac_iters;
  j["parafac_tol"] = cfg.parafac_tol;
  return j.dump();
}

FlowReport analyze_graph(const AugmentedBipartiteGraph& graph,
                         const RunConfig& cfg,
                         const std::vector<std::string>& tokens_a,
                         const std::vector<std::string>& tokens_b) {
  if (cfg.k_a < 1 || cfg.k_b < 1)
    throw ConfigError("k_a and k_b must be at least 1");
  return track_flows(graph, cfg.flow(), tokens_a, tokens_b);
}

FlowReport analyze_series(const GroupSeries& a, const GroupSeries& b,
                          const RunConfig& cfg) {
  const AugmentedBipartiteGraph graph =
      build_graph(a, b, cfg.dtw(), cfg.bcc(), cfg.threads);
  std::vector<std::string> tokens_a, tokens_b;
  for (const auto& ws : a.words) tokens_a.push_back(ws.word);
  for (const auto& ws : b.words) tokens_b.push_back(ws.word);
  return analyze_graph(graph, cfg, tokens_a, tokens_b);
}

}  // namespace ideaflow
