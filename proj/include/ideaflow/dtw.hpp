#pragma once

#include <utility>
#include <vector>

#include "ideaflow/series.hpp"

namespace ideaflow {

struct DtwConfig {
  // Sakoe-Chiba band half-width: |l - k| <= tau_max on every aligned pair.
  int tau_max = 6;
};

struct AlignmentPath {
  // 0-based (k, l) pairs from (0, 0) to (T-1, T-1), step-wise monotone.
  std::vector<std::pair<int, int>> pairs;
  double total_cost = 0.0;
};

// Minimum cumulative squared-difference alignment under the symmetric step
// set {(1,0),(0,1),(1,1)} and the band constraint. Ties prefer the diagonal
// step, then advancing k, then advancing l.
AlignmentPath dtw_align(const TimeSeries& x, const TimeSeries& y,
                        const DtwConfig& cfg);

// Collapses the path to one offset per time point k: the median of l - k over
// all l aligned to k, rounded toward zero.
std::vector<int> offsets_from_path(const AlignmentPath& path, int t);

}  // namespace ideaflow
