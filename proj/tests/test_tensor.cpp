#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ideaflow/error.hpp"
#include "ideaflow/rng.hpp"
#include "ideaflow/tensor.hpp"
#include "oracles.hpp"

using namespace ideaflow;

namespace {

// graph with one edge correlated at (0-based) k = 3, 4 with dt = +1, as in
// the worked 6-point, tau = 1 illustration
AugmentedBipartiteGraph example_graph() {
  AugmentedBipartiteGraph g;
  g.n_a = 1;
  g.n_b = 1;
  g.t = 6;
  g.tau_max = 1;
  EdgeRelation e;
  e.i = 0;
  e.j = 0;
  e.c = {0, 0, 0, 1, 1, 0};
  e.dt = {0, 0, 0, 1, 1, 0};
  g.edges.push_back(e);
  return g;
}

SparseTensor4 random_binary_tensor(std::uint64_t seed, int d1, int d2, int d3,
                                   int d4, double density) {
  Rng rng(seed);
  SparseTensor4 t;
  t.shape = {d1, d2, d3, d4};
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d2; ++j)
      for (int k = 0; k < d3; ++k)
        for (int l = 0; l < d4; ++l)
          if (rng.uniform() < density) t.entries.push_back({i, j, k, l, 1.0});
  return t;
}

}  // namespace

TEST_CASE("x3 rows repeat the offset pattern across time") {
  const auto g = example_graph();
  const SparseTensor4 t = build_tensor(g, TensorVariant::X3);
  CHECK(t.shape == std::array<int, 4>{1, 1, 6, 3});
  REQUIRE(t.entries.size() == 2);
  // both correlated points share l = dt + tau = 2, i.e. rows [0,0,1]
  CHECK(t.entries[0].k == 3);
  CHECK(t.entries[0].l == 2);
  CHECK(t.entries[1].k == 4);
  CHECK(t.entries[1].l == 2);
}

TEST_CASE("x2 rows index the aligned time point") {
  const auto g = example_graph();
  const SparseTensor4 t = build_tensor(g, TensorVariant::X2);
  CHECK(t.shape == std::array<int, 4>{1, 1, 6, 6});
  REQUIRE(t.entries.size() == 2);
  // rows [0,0,0,0,1,0] and [0,0,0,0,0,1]: l = k + dt
  CHECK(t.entries[0].k == 3);
  CHECK(t.entries[0].l == 4);
  CHECK(t.entries[1].k == 4);
  CHECK(t.entries[1].l == 5);
}

TEST_CASE("x2 drops aligned points that fall off the axis") {
  AugmentedBipartiteGraph g = example_graph();
  g.edges[0].c[5] = 1;
  g.edges[0].dt[5] = 1;  // k + dt = 6, outside [0, 5]
  const SparseTensor4 t = build_tensor(g, TensorVariant::X2);
  CHECK(t.entries.size() == 2);
  const SparseTensor4 t3 = build_tensor(g, TensorVariant::X3);
  CHECK(t3.entries.size() == 3);  // x3 keeps it
}

TEST_CASE("x1 is dense with the sentinel on uncorrelated cells") {
  const auto g = example_graph();
  const SparseTensor4 t = build_tensor(g, TensorVariant::X1);
  CHECK(t.shape == std::array<int, 4>{1, 1, 6, 1});
  REQUIRE(t.entries.size() == 6);  // dense over (i, j, k)
  const double sentinel = x1_sentinel(6, 1);
  CHECK(sentinel == 14.0);
  for (const auto& e : t.entries) {
    if (e.k == 3 || e.k == 4)
      CHECK(e.value == 1.0);
    else
      CHECK(e.value == sentinel);
  }
}

TEST_CASE("empty graph yields empty sparse variants") {
  AugmentedBipartiteGraph g;
  g.n_a = 2;
  g.n_b = 2;
  g.t = 5;
  g.tau_max = 2;
  CHECK(build_tensor(g, TensorVariant::X2).entries.empty());
  CHECK(build_tensor(g, TensorVariant::X3).entries.empty());
}

TEST_CASE("x3 nonzero count equals the correlated point count") {
  Rng rng(42);
  AugmentedBipartiteGraph g;
  g.n_a = 4;
  g.n_b = 5;
  g.t = 30;
  g.tau_max = 3;
  long expected = 0;
  for (int i = 0; i < g.n_a; ++i) {
    for (int j = 0; j < g.n_b; ++j) {
      if (rng.uniform() < 0.3) continue;
      EdgeRelation e;
      e.i = i;
      e.j = j;
      e.c.assign(g.t, 0);
      e.dt.assign(g.t, 0);
      bool any = false;
      for (int k = 0; k < g.t; ++k) {
        if (rng.uniform() < 0.4) {
          e.c[k] = 1;
          e.dt[k] = static_cast<int>(rng.uniform_int(-3, 3));
          ++expected;
          any = true;
        }
      }
      if (any) g.edges.push_back(std::move(e));
    }
  }
  const SparseTensor4 t = build_tensor(g, TensorVariant::X3);
  CHECK(static_cast<long>(t.entries.size()) == expected);
  for (const auto& e : t.entries) {
    CHECK(e.l >= 0);
    CHECK(e.l < 2 * g.tau_max + 1);
  }
}

TEST_CASE("exact rank-1 tensor is recovered") {
  // 3 * u o v o w o h with unit factors
  SparseTensor4 t;
  t.shape = {2, 3, 2, 2};
  const std::vector<double> u = {0.6, 0.8};
  const std::vector<double> v = {1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0),
                                 1.0 / std::sqrt(3.0)};
  const std::vector<double> w = {1.0, 0.0};
  const std::vector<double> h = {0.0, 1.0};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          const double val = 3.0 * u[i] * v[j] * w[k] * h[l];
          if (val != 0.0) t.entries.push_back({i, j, k, l, val});
        }

  const FactorSet f = greedy_parafac(t, 1, ParafacConfig{});
  REQUIRE(f.rank() == 1);
  CHECK(f.terms[0].lambda == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(residual_norm(t, f) < 1e-6);
  // factors match up to sign
  const double sign = f.terms[0].u[0] > 0 ? 1.0 : -1.0;
  for (int i = 0; i < 2; ++i)
    CHECK(f.terms[0].u[i] * sign == doctest::Approx(u[i]).epsilon(1e-6));
}

TEST_CASE("factors are unit length and lambda non-negative") {
  const SparseTensor4 t = random_binary_tensor(7, 3, 4, 5, 3, 0.3);
  const FactorSet f = greedy_parafac(t, 3, ParafacConfig{});
  for (const auto& term : f.terms) {
    CHECK(term.lambda >= 0.0);
    for (const auto* vec : {&term.u, &term.v, &term.w, &term.h}) {
      double n = 0.0;
      for (double x : *vec) n += x * x;
      CHECK(std::abs(std::sqrt(n) - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("residual norm is non-increasing in rank") {
  const SparseTensor4 t = random_binary_tensor(11, 3, 3, 6, 3, 0.35);
  double prev = residual_norm(t, FactorSet{});
  CHECK(prev == doctest::Approx(std::sqrt(t.frob_norm_sq())));
  for (int q = 1; q <= 6; ++q) {
    const FactorSet f = greedy_parafac(t, q, ParafacConfig{});
    const double r = residual_norm(t, f);
    CHECK(r <= prev + 1e-9);
    prev = r;
  }
}

TEST_CASE("sparse ALS matches the dense oracle") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const SparseTensor4 t =
        random_binary_tensor(mix_seed(seed, 401), 3, 3, 4, 3, 0.3);
    if (t.entries.empty()) continue;
    ParafacConfig cfg;
    cfg.seed = seed;
    const FactorSet sparse = greedy_parafac(t, 2, cfg);
    const auto dense =
        oracle::dense_greedy_parafac(t, 2, cfg.max_iters, cfg.tol, seed);
    REQUIRE(sparse.rank() == 2);
    for (int m = 0; m < 2; ++m)
      CHECK(sparse.terms[m].lambda ==
            doctest::Approx(dense.terms[m].lambda).epsilon(1e-6));
    const double r_sparse = residual_norm(t, sparse);
    const double r_dense = oracle::dense_residual_norm(t, dense);
    CHECK(r_sparse == doctest::Approx(r_dense).epsilon(1e-6));
  }
}

TEST_CASE("residual norm against dense computation on small shapes") {
  const SparseTensor4 t = random_binary_tensor(13, 2, 3, 4, 2, 0.4);
  ParafacConfig cfg;
  cfg.seed = 5;
  const FactorSet f = greedy_parafac(t, 2, cfg);
  oracle::DenseFactors mirror;
  mirror.terms = f.terms;
  CHECK(residual_norm(t, f) ==
        doctest::Approx(oracle::dense_residual_norm(t, mirror)).epsilon(1e-9));
}

TEST_CASE("greedy_parafac is deterministic given the seed") {
  const SparseTensor4 t = random_binary_tensor(17, 4, 4, 5, 3, 0.25);
  ParafacConfig cfg;
  cfg.seed = 99;
  const FactorSet f1 = greedy_parafac(t, 3, cfg);
  const FactorSet f2 = greedy_parafac(t, 3, cfg);
  for (int m = 0; m < 3; ++m) {
    CHECK(f1.terms[m].lambda == f2.terms[m].lambda);
    CHECK(f1.terms[m].u == f2.terms[m].u);
    CHECK(f1.terms[m].h == f2.terms[m].h);
  }
}

TEST_CASE("parafac rejects bad configuration") {
  const SparseTensor4 t = random_binary_tensor(19, 2, 2, 2, 2, 0.5);
  CHECK_THROWS_AS(greedy_parafac(t, 0, ParafacConfig{}), ConfigError);
  CHECK_THROWS_AS(greedy_parafac(t, 2000, ParafacConfig{}), ConfigError);
  SparseTensor4 empty;
  empty.shape = {2, 2, 2, 2};
  CHECK_THROWS_AS(greedy_parafac(empty, 1, ParafacConfig{}), EmptyTensorError);
}

TEST_CASE("subtensor restricts and reindexes") {
  const auto g = example_graph();
  const SparseTensor4 t = build_tensor(g, TensorVariant::X3);

  const SparseTensor4 full = subtensor(t, {0}, {0});
  CHECK(full.shape == t.shape);
  CHECK(full.entries.size() == t.entries.size());

  SparseTensor4 wide = random_binary_tensor(23, 5, 6, 4, 3, 0.3);
  const SparseTensor4 sub = subtensor(wide, {1, 3}, {0, 2, 5});
  CHECK(sub.shape == std::array<int, 4>{2, 3, 4, 3});
  long expected = 0;
  for (const auto& e : wide.entries) {
    const bool in_a = e.i == 1 || e.i == 3;
    const bool in_b = e.j == 0 || e.j == 2 || e.j == 5;
    if (in_a && in_b) ++expected;
  }
  CHECK(static_cast<long>(sub.entries.size()) == expected);
  for (std::size_t s = 1; s < sub.entries.size(); ++s) {
    const auto& a = sub.entries[s - 1];
    const auto& b = sub.entries[s];
    const auto key = [](const TensorEntry& e) {
      return std::array<int, 4>{e.i, e.j, e.k, e.l};
    };
    CHECK(key(a) < key(b));  // stays sorted
  }

  CHECK_THROWS_AS(subtensor(wide, {}, {0}), EmptySelectionError);
  CHECK_THROWS_AS(subtensor(wide, {9}, {0}), DimensionError);
}

TEST_CASE("tensor dump is sorted and stable") {
  const auto g = example_graph();
  const SparseTensor4 t = build_tensor(g, TensorVariant::X3);
  std::ostringstream out;
  dump_tensor(out, t);
  CHECK(out.str() == "0 0 3 2 1\n0 0 4 2 1\n");
}
