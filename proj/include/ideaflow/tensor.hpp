#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ideaflow/edge_graph.hpp"

namespace ideaflow {

// The three encodings of the graph. X1 is the dense 3-order layout with a
// sentinel for "uncorrelated" (kept for the comparison experiment); X2 indexes
// the aligned time point; X3 indexes the lead-lag offset directly.
enum class TensorVariant { X1, X2, X3 };

TensorVariant parse_variant(const std::string& name);
const char* variant_name(TensorVariant v);

struct TensorEntry {
  std::int32_t i = 0, j = 0, k = 0, l = 0;
  double value = 0.0;
};

// Coordinate format, entries sorted by (i, j, k, l) with no duplicates.
struct SparseTensor4 {
  std::array<int, 4> shape{0, 0, 0, 0};
  std::vector<TensorEntry> entries;

  double frob_norm_sq() const;
};

// Finite surrogate for the infinite lead of an uncorrelated X1 cell.
inline double x1_sentinel(int t, int tau_max) {
  return 2.0 * (t + tau_max);
}

SparseTensor4 build_tensor(const AugmentedBipartiteGraph& graph,
                           TensorVariant variant);

struct Rank1Factor {
  double lambda = 0.0;
  std::vector<double> u, v, w, h;  // unit-normalized
};

struct FactorSet {
  std::vector<Rank1Factor> terms;
  int rank() const { return static_cast<int>(terms.size()); }
};

struct ParafacConfig {
  int max_iters = 200;
  double tol = 1e-6;
  std::uint64_t seed = 0;
};

// Greedy rank-1 deflation: q successive rank-1 ALS fits against the residual,
// which is held implicitly as sparse-plus-low-rank and never densified.
FactorSet greedy_parafac(const SparseTensor4& t, int q,
                         const ParafacConfig& cfg);

// Entries restricted to the selected first/second-mode indices, reindexed
// densely; k and l untouched.
SparseTensor4 subtensor(const SparseTensor4& t, const std::vector<int>& rows_a,
                        const std::vector<int>& rows_b);

// Frobenius norm of (t - reconstruction), via the sparse-plus-low-rank
// identity.
double residual_norm(const SparseTensor4& t, const FactorSet& f);

// Debug dump: one `i j k l value` line per entry, sorted lexicographically.
void dump_tensor(std::ostream& out, const SparseTensor4& t);

}  // namespace ideaflow
