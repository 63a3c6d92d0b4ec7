#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ideaflow/clustering.hpp"
#include "ideaflow/edge_graph.hpp"
#include "ideaflow/tensor.hpp"

namespace ideaflow {

struct IdeaCluster {
  Group group = Group::A;
  int idea_id = 0;
  std::vector<int> word_indices;        // ascending
  std::vector<std::string> top_words;   // ranked by correlated activity
};

struct FlowSegment {
  int k_start = 0;  // inclusive, 0-based
  int k_end = 0;    // inclusive
  bool c_bar = false;
  double dt_bar = 0.0;  // meaningful only when c_bar
};

struct IdeaFlow {
  int idea_a = 0;
  int idea_b = 0;
  std::vector<FlowSegment> segments;  // disjoint, sorted, cover [0, T)
};

struct FlowReport {
  int t = 0;
  int tau_max = 0;
  std::vector<IdeaCluster> ideas_a, ideas_b;
  std::vector<IdeaFlow> flows;
  // per idea, per time point: number of its words correlated on any edge
  std::vector<std::vector<int>> hotness_a, hotness_b;
};

struct FlowConfig {
  TensorVariant variant = TensorVariant::X3;
  int q = 0;      // 0 = k_a + k_b
  int q_seg = 4;  // rank for per-pair time segmentation
  int k_a = 2;
  int k_b = 2;
  int k_t = 4;             // time clusters per idea pair
  double threshold = 0.5;  // segment correlation threshold, ties inclusive
  ParafacConfig parafac;
  int kmeans_iters = 100;
  int restarts = 10;
  std::uint64_t seed = 0;
  int threads = 0;
};

using TimeRuns = std::vector<std::pair<int, int>>;  // inclusive runs

struct PartitionResult {
  std::vector<IdeaCluster> ideas_a, ideas_b;
  Partition part_a, part_b;
  FactorSet factors;
};

// build_tensor -> greedy_parafac -> feature rows (u and v) -> k-means per
// group. Tokens are optional labels for the clusters' word lists.
PartitionResult partition_words(const AugmentedBipartiteGraph& graph,
                                const FlowConfig& cfg,
                                const std::vector<std::string>& tokens_a = {},
                                const std::vector<std::string>& tokens_b = {});

// Sub-tensor over the idea pair -> parafac -> time-point features -> k-means
// -> maximal runs of equal labels. An empty sub-tensor yields one run [0, T).
TimeRuns segment_timepoints(const SparseTensor4& tensor,
                            const IdeaCluster& idea_a,
                            const IdeaCluster& idea_b, const FlowConfig& cfg,
                            std::uint64_t pair_tag);
TimeRuns segment_timepoints(const AugmentedBipartiteGraph& graph,
                            const IdeaCluster& idea_a,
                            const IdeaCluster& idea_b, const FlowConfig& cfg);

// Segment-level aggregation over graph cells (word pair x time point):
// c_bar = 1 iff the mean of c_k meets the threshold; dt_bar averages dt_k
// over correlated cells only.
FlowReport aggregate_flows(const AugmentedBipartiteGraph& graph,
                           const std::vector<IdeaCluster>& ideas_a,
                           const std::vector<IdeaCluster>& ideas_b,
                           const std::vector<TimeRuns>& runs_per_pair,
                           double threshold);

// The full tracking pipeline: partition, per-pair segmentation, aggregation.
FlowReport track_flows(const AugmentedBipartiteGraph& graph,
                       const FlowConfig& cfg,
                       const std::vector<std::string>& tokens_a = {},
                       const std::vector<std::string>& tokens_b = {});

void write_report_json(std::ostream& out, const FlowReport& report,
                       const std::string& config_echo_json = "");
FlowReport read_report_json(std::istream& in);

}  // namespace ideaflow
