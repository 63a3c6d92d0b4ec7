// Test-only oracles, independent of the library implementation paths they
// check: exhaustive DTW path enumeration, 2^T regime enumeration for the
// forward-backward marginals, dense ALS for the sparse PARAFAC, and a direct
// contingency-table NMI.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ideaflow/bcc.hpp"
#include "ideaflow/series.hpp"
#include "ideaflow/tensor.hpp"

namespace oracle {

struct BrutePath {
  std::vector<std::pair<int, int>> pairs;
  double total_cost = 0.0;
};

// All admissible band-constrained monotone paths, minimum total squared cost;
// ties resolved exactly like the DP backtrack (diagonal first, walking from
// the end).
BrutePath brute_force_dtw(const std::vector<double>& x,
                          const std::vector<double>& y, int tau_max);

// Number of admissible paths (sanity check for the enumeration itself).
long count_dtw_paths(int t, int tau_max);

struct BruteHmm {
  std::vector<double> posterior;  // P(state C at k)
  double log_evidence = 0.0;
};

// Exact marginals by enumerating all 2^T regime sequences under the same
// emission model (first point uninformative, AR(1) vs unit-root innovations).
BruteHmm brute_force_regime(const std::vector<double>& residuals, double phi,
                            double sigma2_c, double sigma2_n, double rho_stay);

// Dense 4-order tensor mirror of the sparse greedy PARAFAC: same seeded
// initialization, rank-1 ALS against an explicitly densified residual.
struct DenseFactors {
  std::vector<ideaflow::Rank1Factor> terms;
};
DenseFactors dense_greedy_parafac(const ideaflow::SparseTensor4& t, int q,
                                  int max_iters, double tol,
                                  std::uint64_t seed);
double dense_residual_norm(const ideaflow::SparseTensor4& t,
                           const DenseFactors& f);

// NMI straight from the contingency-table definition.
double contingency_nmi(const std::vector<int>& a, const std::vector<int>& b);

// Argmax Pearson correlation over all shifts in [-tau, tau], brute force.
int brute_force_best_shift(const std::vector<double>& x,
                           const std::vector<double>& y, int tau_max);

}  // namespace oracle
