#include "ideaflow/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_map>

#include "ideaflow/error.hpp"
#include "ideaflow/parallel.hpp"
#include "ideaflow/rng.hpp"
#include "ideaflow/textio.hpp"

namespace ideaflow {

TensorVariant parse_variant(const std::string& name) {
  if (name == "x1" || name == "X1") return TensorVariant::X1;
  if (name == "x2" || name == "X2") return TensorVariant::X2;
  if (name == "x3" || name == "X3") return TensorVariant::X3;
  throw ConfigError("unknown tensor variant '" + name + "'");
}

const char* variant_name(TensorVariant v) {
  switch (v) {
    case TensorVariant::X1: return "x1";
    case TensorVariant::X2: return "x2";
    default: return "x3";
  }
}

double SparseTensor4::frob_norm_sq() const {
  double total = 0.0;
  for (const auto& e : entries) total += e.value * e.value;
  return total;
}

SparseTensor4 build_tensor(const AugmentedBipartiteGraph& graph,
                           TensorVariant variant) {
  const int t = graph.t;
  const int tau = graph.tau_max;
  SparseTensor4 out;
  switch (variant) {
    case TensorVariant::X1: {
      // Dense over (i, j, k): dt where correlated, sentinel otherwise.
      out.shape = {graph.n_a, graph.n_b, t, 1};
      const double sentinel = x1_sentinel(t, tau);
      std::unordered_map<std::int64_t, const EdgeRelation*> lookup;
      lookup.reserve(graph.edges.size());
      for (const auto& e : graph.edges)
        lookup[static_cast<std::int64_t>(e.i) * graph.n_b + e.j] = &e;
      out.entries.reserve(static_cast<std::size_t>(graph.n_a) * graph.n_b * t);
      for (int i = 0; i < graph.n_a; ++i) {
        for (int j = 0; j < graph.n_b; ++j) {
          const auto it =
              lookup.find(static_cast<std::int64_t>(i) * graph.n_b + j);
          const EdgeRelation* edge = it == lookup.end() ? nullptr : it->second;
          for (int k = 0; k < t; ++k) {
            const bool corr = edge && edge->c[k];
            out.entries.push_back(
                {i, j, k, 0, corr ? static_cast<double>(edge->dt[k]) : sentinel});
          }
        }
      }
      break;
    }
    case TensorVariant::X2: {
      out.shape = {graph.n_a, graph.n_b, t, t};
      for (const auto& e : graph.edges) {
        for (int k = 0; k < t; ++k) {
          if (!e.c[k]) continue;
          const int l = k + e.dt[k];
          if (l < 0 || l >= t) continue;  // aligned point off the axis
          out.entries.push_back({e.i, e.j, k, l, 1.0});
        }
      }
      break;
    }
    case TensorVariant::X3: {
      out.shape = {graph.n_a, graph.n_b, t, 2 * tau + 1};
      for (const auto& e : graph.edges) {
        for (int k = 0; k < t; ++k) {
          if (!e.c[k]) continue;
          out.entries.push_back({e.i, e.j, k, e.dt[k] + tau, 1.0});
        }
      }
      break;
    }
  }
  // Edges arrive in canonical (i, j) order and k ascends within each edge, so
  // the entry list is already sorted.
  return out;
}

namespace {

// Fixed chunk boundaries make the reduction order a function of the entry
// count alone, so results are bit-identical at any thread count.
constexpr std::size_t kReduceChunks = 8;

struct ModeView {
  // Per-entry index of the updated mode and of the three fixed modes.
  std::int32_t TensorEntry::* target;
  std::int32_t TensorEntry::* fixed1;
  std::int32_t TensorEntry::* fixed2;
  std::int32_t TensorEntry::* fixed3;
  const std::vector<double>* f1;
  const std::vector<double>* f2;
  const std::vector<double>* f3;
};

// target_dim-length contraction of the sparse entries with the three fixed
// factor vectors.
std::vector<double> contract_sparse(const SparseTensor4& t, const ModeView& mv,
                                    int target_dim, int threads) {
  const std::size_t n = t.entries.size();
  const std::size_t chunk = (n + kReduceChunks - 1) / kReduceChunks;
  std::vector<std::vector<double>> partials(
      kReduceChunks, std::vector<double>(target_dim, 0.0));
  parallel_for(kReduceChunks, threads, [&](std::size_t c) {
    const std::size_t begin = c * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    auto& acc = partials[c];
    for (std::size_t idx = begin; idx < end; ++idx) {
      const TensorEntry& e = t.entries[idx];
      acc[e.*(mv.target)] += e.value * (*mv.f1)[e.*(mv.fixed1)] *
                             (*mv.f2)[e.*(mv.fixed2)] * (*mv.f3)[e.*(mv.fixed3)];
    }
  });
  std::vector<double> out(target_dim, 0.0);
  for (std::size_t c = 0; c < kReduceChunks; ++c)
    for (int d = 0; d < target_dim; ++d) out[d] += partials[c][d];
  return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void normalize_or_reset(std::vector<double>& v) {
  const double n = norm2(v);
  if (n > 0.0) {
    for (double& x : v) x /= n;
  } else {
    std::fill(v.begin(), v.end(), 0.0);
    v[0] = 1.0;
  }
}

std::vector<double> random_unit(Rng& rng, int dim) {
  std::vector<double> v(dim);
  for (double& x : v) x = rng.uniform();
  normalize_or_reset(v);
  return v;
}

}  // namespace

FactorSet greedy_parafac(const SparseTensor4& t, int q,
                         const ParafacConfig& cfg) {
  if (q < 1 || q > 1024)
    throw ConfigError("parafac rank must be in [1, 1024], got " +
                      std::to_string(q));
  if (t.entries.empty()) throw EmptyTensorError("empty tensor");
  if (cfg.max_iters < 1 || cfg.tol < 0.0)
    throw ConfigError("bad parafac iteration settings");

  const int threads = 0;  // environment default
  FactorSet factors;

  for (int m = 0; m < q; ++m) {
    Rng rng(mix_seed(cfg.seed, 0x9a7a, static_cast<std::uint64_t>(m)));
    Rank1Factor term;
    term.u = random_unit(rng, t.shape[0]);
    term.v = random_unit(rng, t.shape[1]);
    term.w = random_unit(rng, t.shape[2]);
    term.h = random_unit(rng, t.shape[3]);

    double lambda_prev = -1.0;
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
      struct ModeSpec {
        std::vector<double> Rank1Factor::* vec;
        ModeView view;
        int dim;
      };
      const ModeSpec modes[4] = {
          {&Rank1Factor::u,
           {&TensorEntry::i, &TensorEntry::j, &TensorEntry::k, &TensorEntry::l,
            &term.v, &term.w, &term.h},
           t.shape[0]},
          {&Rank1Factor::v,
           {&TensorEntry::j, &TensorEntry::i, &TensorEntry::k, &TensorEntry::l,
            &term.u, &term.w, &term.h},
           t.shape[1]},
          {&Rank1Factor::w,
           {&TensorEntry::k, &TensorEntry::i, &TensorEntry::j, &TensorEntry::l,
            &term.u, &term.v, &term.h},
           t.shape[2]},
          {&Rank1Factor::h,
           {&TensorEntry::l, &TensorEntry::i, &TensorEntry::j, &TensorEntry::k,
            &term.u, &term.v, &term.w},
           t.shape[3]},
      };

      double lambda = 0.0;
      for (const auto& mode : modes) {
        std::vector<double> num =
            contract_sparse(t, mode.view, mode.dim, threads);
        // Subtract the low-rank part of the residual: for each extracted term
        // p, lambda_p times the product of dot products over the fixed modes.
        for (const auto& prev : factors.terms) {
          double scale = prev.lambda;
          if (mode.vec == &Rank1Factor::u) {
            scale *= dot(prev.v, term.v) * dot(prev.w, term.w) *
                     dot(prev.h, term.h);
            for (int d = 0; d < mode.dim; ++d) num[d] -= scale * prev.u[d];
          } else if (mode.vec == &Rank1Factor::v) {
            scale *= dot(prev.u, term.u) * dot(prev.w, term.w) *
                     dot(prev.h, term.h);
            for (int d = 0; d < mode.dim; ++d) num[d] -= scale * prev.v[d];
          } else if (mode.vec == &Rank1Factor::w) {
            scale *= dot(prev.u, term.u) * dot(prev.v, term.v) *
                     dot(prev.h, term.h);
            for (int d = 0; d < mode.dim; ++d) num[d] -= scale * prev.w[d];
          } else {
            scale *= dot(prev.u, term.u) * dot(prev.v, term.v) *
                     dot(prev.w, term.w);
            for (int d = 0; d < mode.dim; ++d) num[d] -= scale * prev.h[d];
          }
        }
        lambda = norm2(num);
        if (lambda > 0.0) {
          for (double& x : num) x /= lambda;
          term.*(mode.vec) = std::move(num);
        }
        // lambda == 0: residual has no signal along this configuration; keep
        // the current unit vector and let the loop terminate on tolerance.
      }

      term.lambda = lambda;
      if (lambda_prev >= 0.0 &&
          std::abs(lambda - lambda_prev) <= cfg.tol * std::max(1.0, lambda_prev))
        break;
      lambda_prev = lambda;
    }

    factors.terms.push_back(std::move(term));
  }
  return factors;
}

SparseTensor4 subtensor(const SparseTensor4& t, const std::vector<int>& rows_a,
                        const std::vector<int>& rows_b) {
  if (rows_a.empty() || rows_b.empty())
    throw EmptySelectionError("subtensor selection is empty");

  std::vector<int> map_a(t.shape[0], -1), map_b(t.shape[1], -1);
  auto fill = [](const std::vector<int>& rows, std::vector<int>& map,
                 int bound) {
    std::vector<int> sorted = rows;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    int next = 0;
    for (int r : sorted) {
      if (r < 0 || r >= bound)
        throw DimensionError("subtensor index out of range");
      map[r] = next++;
    }
    return next;
  };
  SparseTensor4 out;
  out.shape[0] = fill(rows_a, map_a, t.shape[0]);
  out.shape[1] = fill(rows_b, map_b, t.shape[1]);
  out.shape[2] = t.shape[2];
  out.shape[3] = t.shape[3];
  for (const auto& e : t.entries) {
    if (map_a[e.i] < 0 || map_b[e.j] < 0) continue;
    out.entries.push_back({map_a[e.i], map_b[e.j], e.k, e.l, e.value});
  }
  // Sorted input and order-preserving index maps keep the output sorted.
  return out;
}

double residual_norm(const SparseTensor4& t, const FactorSet& f) {
  for (const auto& term : f.terms) {
    if (static_cast<int>(term.u.size()) != t.shape[0] ||
        static_cast<int>(term.v.size()) != t.shape[1] ||
        static_cast<int>(term.w.size()) != t.shape[2] ||
        static_cast<int>(term.h.size()) != t.shape[3])
      throw DimensionError("factor shape does not match tensor");
  }
  double total = t.frob_norm_sq();
  for (const auto& term : f.terms) {
    double cross = 0.0;
    for (const auto& e : t.entries)
      cross += e.value * term.u[e.i] * term.v[e.j] * term.w[e.k] * term.h[e.l];
    total -= 2.0 * term.lambda * cross;
  }
  for (const auto& p : f.terms)
    for (const auto& r : f.terms)
      total += p.lambda * r.lambda * dot(p.u, r.u) * dot(p.v, r.v) *
               dot(p.w, r.w) * dot(p.h, r.h);
  return std::sqrt(std::max(0.0, total));
}

void dump_tensor(std::ostream& out, const SparseTensor4& t) {
  for (const auto& e : t.entries)
    out << e.i << ' ' << e.j << ' ' << e.k << ' ' << e.l << ' '
        << fmt_double(e.value) << "\n";
}

}  // namespace ideaflow
