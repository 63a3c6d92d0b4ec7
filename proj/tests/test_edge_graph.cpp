#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ideaflow/edge_graph.hpp"
#include "ideaflow/error.hpp"
#include "ideaflow/rng.hpp"
#include "oracles.hpp"

using namespace ideaflow;

namespace {

TimeSeries random_walk(Rng& rng, int t, double sigma) {
  TimeSeries w(t, 0.0);
  for (int k = 1; k < t; ++k) w[k] = w[k - 1] + rng.gaussian() * sigma;
  return w;
}

WordSeries word(const std::string& token, Group g, TimeSeries s) {
  return WordSeries{token, g, std::move(s)};
}

}  // namespace

TEST_CASE("identical wandering trajectories produce a full edge") {
  Rng rng(5);
  const TimeSeries x = random_walk(rng, 120, 1.0);
  const auto edge = build_edge(word("tax", Group::A, x),
                               word("tax", Group::B, x), DtwConfig{4},
                               BccConfig{});
  REQUIRE(edge.has_value());
  long on = 0;
  for (auto c : edge->c) on += c;
  CHECK(on >= 100);  // c mostly 1
  for (int dt : edge->dt) CHECK(dt == 0);
}

TEST_CASE("a lagged copy is detected with the planted offset") {
  int hits = 0;
  const int trials = 20;
  for (std::uint64_t seed = 0; seed < trials; ++seed) {
    Rng rng(mix_seed(seed, 301));
    const int t = 150, shift = 2;
    const TimeSeries base = random_walk(rng, t + shift, 1.0);
    TimeSeries x(base.begin() + shift, base.end());  // x leads
    TimeSeries y(base.begin(), base.begin() + t);    // y lags by 2
    for (int k = 0; k < t; ++k) y[k] += 0.05 * rng.gaussian();

    const auto edge = build_edge(word("w", Group::A, std::move(x)),
                                 word("w", Group::B, std::move(y)),
                                 DtwConfig{6}, BccConfig{});
    if (!edge) continue;
    // mean offset over correlated interior points approximates the lag
    std::vector<int> interior;
    for (int k = 20; k < t - 20; ++k)
      if (edge->c[k]) interior.push_back(edge->dt[k]);
    if (interior.empty()) continue;
    double mean_dt = 0.0;
    for (int dt : interior) mean_dt += dt;
    mean_dt /= interior.size();
    if (std::abs(mean_dt - shift) <= 1.0) ++hits;
  }
  CHECK(hits >= trials * 7 / 10);
}

TEST_CASE("independent random walks rarely produce an edge") {
  int none = 0;
  const int trials = 100;
  for (std::uint64_t seed = 0; seed < trials; ++seed) {
    Rng rng(mix_seed(seed, 302));
    TimeSeries x = random_walk(rng, 200, 1.0);
    TimeSeries y = random_walk(rng, 200, 1.0);
    const auto edge = build_edge(word("a", Group::A, std::move(x)),
                                 word("b", Group::B, std::move(y)),
                                 DtwConfig{6}, BccConfig{});
    if (!edge) ++none;
  }
  CHECK(none >= 90);
}

TEST_CASE("constant series never correlate") {
  Rng rng(7);
  const TimeSeries flat(50, 3.0);
  const TimeSeries live = random_walk(rng, 50, 1.0);
  CHECK_FALSE(build_edge(word("a", Group::A, flat), word("b", Group::B, live),
                         DtwConfig{3}, BccConfig{}));
  CHECK_FALSE(build_edge(word("a", Group::A, live), word("b", Group::B, flat),
                         DtwConfig{3}, BccConfig{}));
}

TEST_CASE("offsets always respect the band") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(mix_seed(seed, 303));
    TimeSeries x = random_walk(rng, 80, 1.0);
    TimeSeries y = random_walk(rng, 80, 1.0);
    for (int k = 0; k < 80; ++k) y[k] += x[k];  // give them common structure
    const auto edge = build_edge(word("a", Group::A, x), word("b", Group::B, y),
                                 DtwConfig{3}, BccConfig{});
    if (!edge) continue;
    for (std::size_t k = 0; k < edge->c.size(); ++k)
      if (edge->c[k]) CHECK(std::abs(edge->dt[k]) <= 3);
  }
}

TEST_CASE("build_graph assembles edges in canonical order") {
  Rng rng(11);
  const int t = 100;
  GroupSeries a{Group::A, {}}, b{Group::B, {}};
  const TimeSeries shared = random_walk(rng, t, 1.0);
  a.words.push_back(word("a0", Group::A, shared));
  a.words.push_back(word("a1", Group::A, random_walk(rng, t, 1.0)));
  TimeSeries echo = shared;
  for (double& v : echo) v = 2.0 * v + 0.5;
  b.words.push_back(word("b0", Group::B, random_walk(rng, t, 1.0)));
  b.words.push_back(word("b1", Group::B, echo));

  const auto graph = build_graph(a, b, DtwConfig{4}, BccConfig{});
  CHECK(graph.n_a == 2);
  CHECK(graph.n_b == 2);
  CHECK(graph.t == t);
  CHECK(graph.edges.size() <= 4);
  bool found = false;
  for (const auto& e : graph.edges)
    if (e.i == 0 && e.j == 1) found = true;
  CHECK(found);  // the planted pair
  for (std::size_t s = 1; s < graph.edges.size(); ++s) {
    const auto& prev = graph.edges[s - 1];
    const auto& cur = graph.edges[s];
    CHECK((cur.i > prev.i || (cur.i == prev.i && cur.j > prev.j)));
  }
}

TEST_CASE("graph construction is independent of thread count") {
  Rng rng(13);
  const int t = 90;
  GroupSeries a{Group::A, {}}, b{Group::B, {}};
  for (int i = 0; i < 4; ++i)
    a.words.push_back(
        word("a" + std::to_string(i), Group::A, random_walk(rng, t, 1.0)));
  for (int j = 0; j < 4; ++j)
    b.words.push_back(
        word("b" + std::to_string(j), Group::B, random_walk(rng, t, 1.0)));
  // correlate a few pairs
  for (int k = 0; k < t; ++k) {
    b.words[0].series[k] = a.words[1].series[k] * 1.3 + 2.0;
    b.words[2].series[k] = a.words[3].series[k] * 0.7 - 1.0;
  }

  const auto g1 = build_graph(a, b, DtwConfig{5}, BccConfig{}, 1);
  const auto g4 = build_graph(a, b, DtwConfig{5}, BccConfig{}, 4);
  REQUIRE(g1.edges.size() == g4.edges.size());
  for (std::size_t s = 0; s < g1.edges.size(); ++s) {
    CHECK(g1.edges[s].i == g4.edges[s].i);
    CHECK(g1.edges[s].j == g4.edges[s].j);
    CHECK(g1.edges[s].c == g4.edges[s].c);
    CHECK(g1.edges[s].dt == g4.edges[s].dt);
  }
}

TEST_CASE("graph JSON round trip is lossless and stable") {
  Rng rng(17);
  const int t = 60;
  GroupSeries a{Group::A, {}}, b{Group::B, {}};
  const TimeSeries shared = random_walk(rng, t, 1.0);
  a.words.push_back(word("x", Group::A, shared));
  TimeSeries y = shared;
  for (double& v : y) v = v * 3.0 + 1.0;
  b.words.push_back(word("y", Group::B, y));

  const auto graph = build_graph(a, b, DtwConfig{3}, BccConfig{});
  std::ostringstream out1;
  write_graph_json(out1, graph);
  std::istringstream in(out1.str());
  const auto parsed = read_graph_json(in);
  std::ostringstream out2;
  write_graph_json(out2, parsed);
  CHECK(out1.str() == out2.str());
  CHECK(parsed.edges.size() == graph.edges.size());
  CHECK(parsed.t == graph.t);
}

TEST_CASE("read_graph_json rejects malformed input") {
  std::istringstream bad1("not json");
  CHECK_THROWS_AS(read_graph_json(bad1), FormatError);
  std::istringstream bad2(
      R"({"dims":[1,1,4],"tau_max":1,"edges":[{"i":5,"j":0,"c":[0,0,0,0],"dt":[0,0,0,0]}]})");
  CHECK_THROWS_AS(read_graph_json(bad2), FormatError);
}

TEST_CASE("best_global_shift matches brute force") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(mix_seed(seed, 304));
    const int t = 60;
    TimeSeries x(t), y(t);
    for (int k = 0; k < t; ++k) {
      x[k] = rng.gaussian();
      y[k] = rng.gaussian();
    }
    const int got = best_global_shift(x, y, 6);
    CHECK(got == oracle::brute_force_best_shift(x, y, 6));
  }

  // planted shift: y runs three steps ahead of x
  Rng rng(999);
  TimeSeries base = random_walk(rng, 80, 1.0);
  TimeSeries x(base.begin(), base.begin() + 70);
  TimeSeries y(base.begin() + 3, base.begin() + 73);
  CHECK(best_global_shift(x, y, 6) == -3);
  CHECK(best_global_shift(y, x, 6) == 3);
}
