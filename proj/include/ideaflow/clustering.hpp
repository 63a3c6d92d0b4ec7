#pragma once

#include <cstdint>
#include <vector>

#include "ideaflow/tensor.hpp"

namespace ideaflow {

struct Partition {
  std::vector<int> labels;  // one label in [0, k) per item
  int k = 0;
  bool has_empty_cluster = false;
};

struct KMeansConfig {
  int k = 1;
  int max_iters = 100;
  int restarts = 10;
  std::uint64_t seed = 0;
};

enum class FactorMode { U, V, W };

// One row per index of the chosen mode, q columns:
// row i of mode U is [u(1)_i, ..., u(q)_i].
std::vector<std::vector<double>> feature_rows(const FactorSet& f,
                                              FactorMode mode);

// k-means++ seeding, Lloyd iterations to an assignment fixpoint, best of
// `restarts` runs by WCSS (ties keep the earliest restart). Empty clusters are
// re-seeded to the point farthest from its centroid.
Partition kmeans(const std::vector<std::vector<double>>& rows,
                 const KMeansConfig& cfg);

// I(P;Q) / sqrt(H(P) H(Q)) with natural logs; 0 when exactly one side has
// zero entropy, 1 when both partitions are the trivial single cluster.
double nmi(const Partition& p, const Partition& q);

}  // namespace ideaflow
