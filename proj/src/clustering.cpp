#include "ideaflow/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ideaflow/error.hpp"
#include "ideaflow/rng.hpp"

namespace ideaflow {

std::vector<std::vector<double>> feature_rows(const FactorSet& f,
                                              FactorMode mode) {
  if (f.terms.empty()) throw InvalidInputError("empty factor set");
  const auto pick = [&](const Rank1Factor& term) -> const std::vector<double>& {
    switch (mode) {
      case FactorMode::U: return term.u;
      case FactorMode::V: return term.v;
      default: return term.w;
    }
  };
  const std::size_t dim = pick(f.terms.front()).size();
  std::vector<std::vector<double>> rows(dim,
                                        std::vector<double>(f.terms.size()));
  for (std::size_t m = 0; m < f.terms.size(); ++m) {
    const auto& vec = pick(f.terms[m]);
    for (std::size_t i = 0; i < dim; ++i) rows[i][m] = vec[i];
  }
  return rows;
}

namespace {

double dist2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double diff = a[d] - b[d];
    s += diff * diff;
  }
  return s;
}

struct LloydResult {
  std::vector<int> labels;
  double wcss = 0.0;
  bool has_empty = false;
};

std::vector<std::vector<double>> seed_centers(
    const std::vector<std::vector<double>>& rows, int k, Rng& rng) {
  const int n = static_cast<int>(rows.size());
  std::vector<std::vector<double>> centers;
  centers.reserve(k);
  centers.push_back(rows[rng.uniform_int(0, n - 1)]);
  std::vector<double> min_d2(n);
  while (static_cast<int>(centers.size()) < k) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : centers) best = std::min(best, dist2(rows[i], c));
      min_d2[i] = best;
      total += best;
    }
    if (total <= 0.0) {
      // every point coincides with a center already
      centers.push_back(rows[0]);
      continue;
    }
    const double threshold = rng.uniform() * total;
    double acc = 0.0;
    int chosen = -1;
    for (int i = 0; i < n; ++i) {
      if (min_d2[i] <= 0.0) continue;
      acc += min_d2[i];
      chosen = i;
      if (acc >= threshold) break;
    }
    centers.push_back(rows[chosen]);
  }
  return centers;
}

LloydResult run_lloyd(const std::vector<std::vector<double>>& rows, int k,
                      int max_iters, Rng& rng) {
  const int n = static_cast<int>(rows.size());
  const int dim = static_cast<int>(rows.front().size());
  auto centers = seed_centers(rows, k, rng);

  std::vector<int> labels(n, -1);
  std::vector<int> counts(k, 0);
  bool has_empty = false;

  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best_c = 0;
      double best = dist2(rows[i], centers[0]);
      for (int c = 1; c < k; ++c) {
        const double d = dist2(rows[i], centers[c]);
        if (d < best) {  // ties keep the lowest cluster index
          best = d;
          best_c = c;
        }
      }
      if (labels[i] != best_c) {
        labels[i] = best_c;
        changed = true;
      }
    }
    if (!changed) break;  // assignment fixpoint

    for (auto& c : centers) std::fill(c.begin(), c.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (int i = 0; i < n; ++i) {
      ++counts[labels[i]];
      for (int d = 0; d < dim; ++d) centers[labels[i]][d] += rows[i][d];
    }
    has_empty = false;
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        for (int d = 0; d < dim; ++d) centers[c][d] /= counts[c];
      } else {
        // re-seed to the point farthest from its centroid, provided its
        // cluster would not become empty in turn
        double far_d = 0.0;
        int far_i = -1;
        for (int i = 0; i < n; ++i) {
          if (counts[labels[i]] <= 1) continue;
          const double d = dist2(rows[i], centers[labels[i]]);
          if (d > far_d) {
            far_d = d;
            far_i = i;
          }
        }
        if (far_i >= 0) {
          centers[c] = rows[far_i];
        } else {
          has_empty = true;  // only coincident points remain
        }
      }
    }
  }

  LloydResult result;
  result.labels = std::move(labels);
  result.has_empty = has_empty;
  for (int i = 0; i < n; ++i)
    result.wcss += dist2(rows[i], centers[result.labels[i]]);
  return result;
}

}  // namespace

Partition kmeans(const std::vector<std::vector<double>>& rows,
                 const KMeansConfig& cfg) {
  const int n = static_cast<int>(rows.size());
  if (cfg.k < 1 || cfg.k > n)
    throw ConfigError("kmeans k must be in [1, n], got " +
                      std::to_string(cfg.k) + " for n=" + std::to_string(n));
  if (cfg.max_iters < 1 || cfg.restarts < 1)
    throw ConfigError("kmeans iteration settings must be positive");

  LloydResult best;
  bool have = false;
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng(mix_seed(cfg.seed, 0x6b6d, static_cast<std::uint64_t>(r)));
    LloydResult run = run_lloyd(rows, cfg.k, cfg.max_iters, rng);
    if (!have || run.wcss < best.wcss) {  // ties keep the earliest restart
      best = std::move(run);
      have = true;
    }
  }

  Partition part;
  part.labels = std::move(best.labels);
  part.k = cfg.k;
  part.has_empty_cluster = best.has_empty;
  return part;
}

double nmi(const Partition& p, const Partition& q) {
  if (p.labels.size() != q.labels.size())
    throw DimensionError("nmi requires equal item counts");
  const int n = static_cast<int>(p.labels.size());
  if (n == 0) throw DimensionError("nmi on empty partitions");

  int kp = 0, kq = 0;
  for (int v : p.labels) kp = std::max(kp, v + 1);
  for (int v : q.labels) kq = std::max(kq, v + 1);

  std::vector<std::vector<int>> joint(kp, std::vector<int>(kq, 0));
  std::vector<int> rows(kp, 0), cols(kq, 0);
  for (int i = 0; i < n; ++i) {
    ++joint[p.labels[i]][q.labels[i]];
    ++rows[p.labels[i]];
    ++cols[q.labels[i]];
  }

  const double dn = n;
  double hp = 0.0, hq = 0.0, mi = 0.0;
  for (int a = 0; a < kp; ++a)
    if (rows[a] > 0) hp -= rows[a] / dn * std::log(rows[a] / dn);
  for (int b = 0; b < kq; ++b)
    if (cols[b] > 0) hq -= cols[b] / dn * std::log(cols[b] / dn);
  for (int a = 0; a < kp; ++a)
    for (int b = 0; b < kq; ++b)
      if (joint[a][b] > 0)
        mi += joint[a][b] / dn *
              std::log(dn * joint[a][b] /
                       (static_cast<double>(rows[a]) * cols[b]));

  constexpr double kEps = 1e-15;
  if (hp < kEps && hq < kEps) return 1.0;  // both trivial, hence identical
  if (hp < kEps || hq < kEps) return 0.0;
  return std::clamp(mi / std::sqrt(hp * hq), 0.0, 1.0);
}

}  // namespace ideaflow
