#include "ideaflow/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "ideaflow/error.hpp"

namespace ideaflow {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// parent codes for backtracking
enum : std::uint8_t { kNone = 0, kDiag = 1, kAdvK = 2, kAdvL = 3 };
}  // namespace

AlignmentPath dtw_align(const TimeSeries& x, const TimeSeries& y,
                        const DtwConfig& cfg) {
  if (x.size() != y.size())
    throw DimensionError("dtw_align requires equal lengths, got " +
                         std::to_string(x.size()) + " and " +
                         std::to_string(y.size()));
  const int t = static_cast<int>(x.size());
  if (t < 2) throw InvalidInputError("dtw_align needs at least 2 points");
  if (cfg.tau_max < 0 || cfg.tau_max > t - 1)
    throw ConfigError("tau_max must be in [0, T-1], got " +
                      std::to_string(cfg.tau_max));

  const int tau = cfg.tau_max;
  const int width = 2 * tau + 1;

  // Band-compressed tables: cell (k, l) lives at row k, column l - k + tau.
  std::vector<double> cum(static_cast<std::size_t>(t) * width, kInf);
  std::vector<std::uint8_t> parent(static_cast<std::size_t>(t) * width, kNone);
  const auto at = [&](int k, int l) {
    return static_cast<std::size_t>(k) * width + (l - k + tau);
  };
  const auto in_band = [&](int k, int l) {
    return k >= 0 && k < t && l >= 0 && l < t && l - k >= -tau && l - k <= tau;
  };

  for (int k = 0; k < t; ++k) {
    const int lo = std::max(0, k - tau);
    const int hi = std::min(t - 1, k + tau);
    for (int l = lo; l <= hi; ++l) {
      const double d = x[k] - y[l];
      const double cost = d * d;
      if (k == 0 && l == 0) {
        cum[at(0, 0)] = cost;
        continue;
      }
      double best = kInf;
      std::uint8_t best_parent = kNone;
      if (in_band(k - 1, l - 1) && cum[at(k - 1, l - 1)] < best) {
        best = cum[at(k - 1, l - 1)];
        best_parent = kDiag;
      }
      if (in_band(k - 1, l) && cum[at(k - 1, l)] < best) {
        best = cum[at(k - 1, l)];
        best_parent = kAdvK;
      }
      if (in_band(k, l - 1) && cum[at(k, l - 1)] < best) {
        best = cum[at(k, l - 1)];
        best_parent = kAdvL;
      }
      if (best_parent != kNone) {
        cum[at(k, l)] = best + cost;
        parent[at(k, l)] = best_parent;
      }
    }
  }

  // Cannot trigger for equal lengths (the diagonal is always admissible);
  // guarded anyway.
  if (!std::isfinite(cum[at(t - 1, t - 1)]))
    throw InfeasibleBandError("band excludes all paths to (T, T)");

  AlignmentPath path;
  path.total_cost = cum[at(t - 1, t - 1)];
  int k = t - 1, l = t - 1;
  while (true) {
    path.pairs.emplace_back(k, l);
    const std::uint8_t p = parent[at(k, l)];
    if (p == kNone) break;
    if (p == kDiag) {
      --k;
      --l;
    } else if (p == kAdvK) {
      --k;
    } else {
      --l;
    }
  }
  std::reverse(path.pairs.begin(), path.pairs.end());
  return path;
}

std::vector<int> offsets_from_path(const AlignmentPath& path, int t) {
  if (path.pairs.empty() || path.pairs.front() != std::make_pair(0, 0) ||
      path.pairs.back() != std::make_pair(t - 1, t - 1))
    throw InvalidInputError("alignment path must run (0,0) -> (T-1,T-1)");

  std::vector<int> offsets(t, 0);
  std::size_t idx = 0;
  for (int k = 0; k < t; ++k) {
    // path pairs are sorted by k; collect the contiguous block aligned to k
    const std::size_t begin = idx;
    while (idx < path.pairs.size() && path.pairs[idx].first == k) ++idx;
    if (idx == begin)
      throw InvalidInputError("path skips time point " + std::to_string(k));
    const std::size_t m = idx - begin;
    double median;
    if (m % 2 == 1) {
      median = path.pairs[begin + m / 2].second - k;
    } else {
      median = 0.5 * (path.pairs[begin + m / 2 - 1].second +
                      path.pairs[begin + m / 2].second) -
               k;
    }
    offsets[k] = static_cast<int>(median);  // truncation = round toward zero
  }
  return offsets;
}

}  // namespace ideaflow
