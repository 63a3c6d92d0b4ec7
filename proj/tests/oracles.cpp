#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "ideaflow/rng.hpp"

namespace oracle {

namespace {

// backward step ranks: diagonal < advance-k < advance-l, matching the DP
// backtrack preference
std::vector<int> backward_ranks(const std::vector<std::pair<int, int>>& pairs) {
  std::vector<int> ranks;
  for (std::size_t s = pairs.size(); s-- > 1;) {
    const int dk = pairs[s].first - pairs[s - 1].first;
    const int dl = pairs[s].second - pairs[s - 1].second;
    if (dk == 1 && dl == 1)
      ranks.push_back(0);
    else if (dk == 1)
      ranks.push_back(1);
    else
      ranks.push_back(2);
  }
  return ranks;
}

}  // namespace

BrutePath brute_force_dtw(const std::vector<double>& x,
                          const std::vector<double>& y, int tau_max) {
  const int t = static_cast<int>(x.size());
  BrutePath best;
  best.total_cost = std::numeric_limits<double>::infinity();
  std::vector<int> best_ranks;

  std::vector<std::pair<int, int>> current;
  const std::function<void(int, int, double)> walk = [&](int k, int l,
                                                         double cost) {
    const double d = x[k] - y[l];
    cost += d * d;
    current.emplace_back(k, l);
    if (k == t - 1 && l == t - 1) {
      bool take = cost < best.total_cost;
      if (!take && cost == best.total_cost) {
        const auto ranks = backward_ranks(current);
        take = ranks < best_ranks;
      }
      if (take) {
        best.pairs = current;
        best.total_cost = cost;
        best_ranks = backward_ranks(current);
      }
    } else {
      const auto admissible = [&](int nk, int nl) {
        return nk < t && nl < t && std::abs(nl - nk) <= tau_max;
      };
      if (admissible(k + 1, l + 1)) walk(k + 1, l + 1, cost);
      if (admissible(k + 1, l)) walk(k + 1, l, cost);
      if (admissible(k, l + 1)) walk(k, l + 1, cost);
    }
    current.pop_back();
  };
  walk(0, 0, 0.0);
  return best;
}

long count_dtw_paths(int t, int tau_max) {
  long count = 0;
  const std::function<void(int, int)> walk = [&](int k, int l) {
    if (k == t - 1 && l == t - 1) {
      ++count;
      return;
    }
    const auto admissible = [&](int nk, int nl) {
      return nk < t && nl < t && std::abs(nl - nk) <= tau_max;
    };
    if (admissible(k + 1, l + 1)) walk(k + 1, l + 1);
    if (admissible(k + 1, l)) walk(k + 1, l);
    if (admissible(k, l + 1)) walk(k, l + 1);
  };
  walk(0, 0);
  return count;
}

BruteHmm brute_force_regime(const std::vector<double>& residuals, double phi,
                            double sigma2_c, double sigma2_n, double rho_stay) {
  const int t = static_cast<int>(residuals.size());
  const auto log_pdf = [](double v, double mean, double var) {
    const double d = v - mean;
    return -0.5 * (std::log(2.0 * M_PI) + std::log(var) + d * d / var);
  };

  std::vector<double> seq_logp;
  seq_logp.reserve(std::size_t{1} << t);
  for (std::uint32_t seq = 0; seq < (1u << t); ++seq) {
    double logp = std::log(0.5);  // uniform initial regime, k = 0 emission 1
    for (int k = 1; k < t; ++k) {
      const bool prev_c = (seq >> (k - 1)) & 1;
      const bool cur_c = (seq >> k) & 1;
      logp += std::log(prev_c == cur_c ? rho_stay : 1.0 - rho_stay);
      logp += cur_c ? log_pdf(residuals[k], phi * residuals[k - 1], sigma2_c)
                    : log_pdf(residuals[k], residuals[k - 1], sigma2_n);
    }
    seq_logp.push_back(logp);
  }

  const double max_logp = *std::max_element(seq_logp.begin(), seq_logp.end());
  double total = 0.0;
  for (double lp : seq_logp) total += std::exp(lp - max_logp);

  BruteHmm out;
  out.log_evidence = max_logp + std::log(total);
  out.posterior.assign(t, 0.0);
  for (std::uint32_t seq = 0; seq < (1u << t); ++seq) {
    const double w = std::exp(seq_logp[seq] - max_logp) / total;
    for (int k = 0; k < t; ++k)
      if ((seq >> k) & 1) out.posterior[k] += w;
  }
  return out;
}

namespace {

struct Dense4 {
  std::array<int, 4> shape;
  std::vector<double> data;
  double& at(int i, int j, int k, int l) {
    return data[((static_cast<std::size_t>(i) * shape[1] + j) * shape[2] + k) *
                    shape[3] +
                l];
  }
};

Dense4 densify(const ideaflow::SparseTensor4& t) {
  Dense4 d;
  d.shape = t.shape;
  d.data.assign(static_cast<std::size_t>(t.shape[0]) * t.shape[1] *
                    t.shape[2] * t.shape[3],
                0.0);
  for (const auto& e : t.entries) d.at(e.i, e.j, e.k, e.l) = e.value;
  return d;
}

void normalize_or_reset(std::vector<double>& v) {
  double n = 0.0;
  for (double x : v) n += x * x;
  n = std::sqrt(n);
  if (n > 0.0) {
    for (double& x : v) x /= n;
  } else {
    std::fill(v.begin(), v.end(), 0.0);
    v[0] = 1.0;
  }
}

// must draw exactly like the library's rank-1 initialization
std::vector<double> seeded_unit(ideaflow::Rng& rng, int dim) {
  std::vector<double> v(dim);
  for (double& x : v) x = rng.uniform();
  normalize_or_reset(v);
  return v;
}

}  // namespace

DenseFactors dense_greedy_parafac(const ideaflow::SparseTensor4& t, int q,
                                  int max_iters, double tol,
                                  std::uint64_t seed) {
  Dense4 residual = densify(t);
  const auto& shape = residual.shape;
  DenseFactors out;

  for (int m = 0; m < q; ++m) {
    ideaflow::Rng rng(
        ideaflow::mix_seed(seed, 0x9a7a, static_cast<std::uint64_t>(m)));
    ideaflow::Rank1Factor term;
    term.u = seeded_unit(rng, shape[0]);
    term.v = seeded_unit(rng, shape[1]);
    term.w = seeded_unit(rng, shape[2]);
    term.h = seeded_unit(rng, shape[3]);

    double lambda_prev = -1.0, lambda = 0.0;
    for (int iter = 0; iter < max_iters; ++iter) {
      for (int mode = 0; mode < 4; ++mode) {
        const int dim = shape[mode];
        std::vector<double> num(dim, 0.0);
        for (int i = 0; i < shape[0]; ++i)
          for (int j = 0; j < shape[1]; ++j)
            for (int k = 0; k < shape[2]; ++k)
              for (int l = 0; l < shape[3]; ++l) {
                const double r = residual.at(i, j, k, l);
                switch (mode) {
                  case 0: num[i] += r * term.v[j] * term.w[k] * term.h[l]; break;
                  case 1: num[j] += r * term.u[i] * term.w[k] * term.h[l]; break;
                  case 2: num[k] += r * term.u[i] * term.v[j] * term.h[l]; break;
                  default: num[l] += r * term.u[i] * term.v[j] * term.w[k];
                }
              }
        double norm = 0.0;
        for (double x : num) norm += x * x;
        norm = std::sqrt(norm);
        lambda = norm;
        if (norm > 0.0) {
          for (double& x : num) x /= norm;
          (mode == 0 ? term.u
           : mode == 1 ? term.v
           : mode == 2 ? term.w
                       : term.h) = std::move(num);
        }
      }
      term.lambda = lambda;
      if (lambda_prev >= 0.0 &&
          std::abs(lambda - lambda_prev) <= tol * std::max(1.0, lambda_prev))
        break;
      lambda_prev = lambda;
    }

    for (int i = 0; i < shape[0]; ++i)
      for (int j = 0; j < shape[1]; ++j)
        for (int k = 0; k < shape[2]; ++k)
          for (int l = 0; l < shape[3]; ++l)
            residual.at(i, j, k, l) -=
                term.lambda * term.u[i] * term.v[j] * term.w[k] * term.h[l];

    out.terms.push_back(std::move(term));
  }
  return out;
}

double dense_residual_norm(const ideaflow::SparseTensor4& t,
                           const DenseFactors& f) {
  Dense4 residual = densify(t);
  for (const auto& term : f.terms)
    for (int i = 0; i < residual.shape[0]; ++i)
      for (int j = 0; j < residual.shape[1]; ++j)
        for (int k = 0; k < residual.shape[2]; ++k)
          for (int l = 0; l < residual.shape[3]; ++l)
            residual.at(i, j, k, l) -=
                term.lambda * term.u[i] * term.v[j] * term.w[k] * term.h[l];
  double total = 0.0;
  for (double v : residual.data) total += v * v;
  return std::sqrt(total);
}

double contingency_nmi(const std::vector<int>& a, const std::vector<int>& b) {
  const int n = static_cast<int>(a.size());
  const int ka = *std::max_element(a.begin(), a.end()) + 1;
  const int kb = *std::max_element(b.begin(), b.end()) + 1;
  std::vector<std::vector<int>> table(ka, std::vector<int>(kb, 0));
  for (int i = 0; i < n; ++i) ++table[a[i]][b[i]];

  const auto entropy = [&](const std::vector<int>& labels, int k) {
    std::vector<int> counts(k, 0);
    for (int v : labels) ++counts[v];
    double h = 0.0;
    for (int c : counts)
      if (c > 0)
        h -= static_cast<double>(c) / n * std::log(static_cast<double>(c) / n);
    return h;
  };
  const double ha = entropy(a, ka), hb = entropy(b, kb);
  std::vector<int> ra(ka, 0), rb(kb, 0);
  for (int i = 0; i < ka; ++i)
    for (int j = 0; j < kb; ++j) ra[i] += table[i][j];
  for (int j = 0; j < kb; ++j)
    for (int i = 0; i < ka; ++i) rb[j] += table[i][j];
  double mi = 0.0;
  for (int i = 0; i < ka; ++i)
    for (int j = 0; j < kb; ++j)
      if (table[i][j] > 0)
        mi += static_cast<double>(table[i][j]) / n *
              std::log(static_cast<double>(n) * table[i][j] /
                       (static_cast<double>(ra[i]) * rb[j]));
  if (ha <= 0.0 && hb <= 0.0) return 1.0;
  if (ha <= 0.0 || hb <= 0.0) return 0.0;
  return mi / std::sqrt(ha * hb);
}

int brute_force_best_shift(const std::vector<double>& x,
                           const std::vector<double>& y, int tau_max) {
  const int t = static_cast<int>(x.size());
  double best_r = -2.0;
  int best_s = 0;
  bool first = true;
  for (int s = -tau_max; s <= tau_max; ++s) {
    std::vector<double> xs, ys;
    for (int k = 0; k < t; ++k) {
      if (k + s < 0 || k + s >= t) continue;
      xs.push_back(x[k]);
      ys.push_back(y[k + s]);
    }
    if (xs.size() < 3) continue;
    const int n = static_cast<int>(xs.size());
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      syy += (ys[i] - my) * (ys[i] - my);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    const double r = sxx > 0 && syy > 0 ? sxy / std::sqrt(sxx * syy) : -1.0;
    const bool better =
        first || r > best_r ||
        (r == best_r && (std::abs(s) < std::abs(best_s) ||
                         (std::abs(s) == std::abs(best_s) && s < best_s)));
    if (better) {
      best_r = r;
      best_s = s;
      first = false;
    }
  }
  return best_s;
}

}  // namespace oracle
