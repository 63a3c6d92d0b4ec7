#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ideaflow/edge_graph.hpp"
#include "ideaflow/flow.hpp"

namespace ideaflow {

struct SynthConfig {
  double noise_level = 0.0;  // probability that c_k = 0 where the flow says 1
  int ideas_min = 2, ideas_max = 6;
  int words_min = 10, words_max = 30;
  int leadlag_min = -6, leadlag_max = 6;
  int period_min = 20, period_max = 40;
  int t = 200;
  int tau_max = 6;
  std::uint64_t seed = 0;
};

struct PlantedSegment {
  int k_start = 0, k_end = 0;  // inclusive
  int dt = 0;
};

struct PlantedFlow {
  int idea_a = 0, idea_b = 0;
  std::vector<PlantedSegment> segments;  // sorted, non-overlapping
};

struct GroundTruth {
  int n_a = 0, n_b = 0, t = 0, tau_max = 0;
  int k_a = 0, k_b = 0;
  std::vector<int> idea_of_word_a, idea_of_word_b;  // planted partitions
  std::vector<PlantedFlow> flows;
};

// Seeded draws of idea counts, word counts, correlated periods and lead-lag
// times. Every idea takes part in at least one flow so the planted partition
// is identifiable.
GroundTruth generate_ground_truth(const SynthConfig& cfg);

// Word-level graph: within planted periods c_k = 1 with probability 1 - L and
// dt_k equals the planted offset; everything else stays 0. Edges that end up
// all-zero are omitted.
AugmentedBipartiteGraph generate_graph(const GroundTruth& gt,
                                       const SynthConfig& cfg);

// Ground truth viewed through the FlowReport schema (planted segments plus
// gap segments with c_bar = 0), so scoring consumes real and synthetic runs
// uniformly.
FlowReport ground_truth_report(const GroundTruth& gt);

Partition planted_partition(const GroundTruth& gt, Group g);

void write_ground_truth_json(std::ostream& out, const GroundTruth& gt);
GroundTruth read_ground_truth_json(std::istream& in);

}  // namespace ideaflow
