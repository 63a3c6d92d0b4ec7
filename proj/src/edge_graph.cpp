#include "ideaflow/edge_graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "ideaflow/error.hpp"
#include "ideaflow/parallel.hpp"

namespace ideaflow {

namespace {

bool effectively_constant(const TimeSeries& s) {
  double mean = 0.0;
  for (double v : s) mean += v;
  mean /= static_cast<double>(s.size());
  double ss = 0.0;
  for (double v : s) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(s.size()) < 1e-12;
}

// y values aligned to each k, collapsed by arithmetic mean so the warped
// series keeps length T.
TimeSeries warp_onto_x(const TimeSeries& zy, const AlignmentPath& path, int t) {
  TimeSeries warped(t, 0.0);
  std::vector<int> counts(t, 0);
  for (const auto& [k, l] : path.pairs) {
    warped[k] += zy[l];
    ++counts[k];
  }
  for (int k = 0; k < t; ++k) warped[k] /= static_cast<double>(counts[k]);
  return warped;
}

TimeSeries shift_clamped(const TimeSeries& zy, int shift) {
  const int t = static_cast<int>(zy.size());
  TimeSeries out(t);
  for (int k = 0; k < t; ++k)
    out[k] = zy[std::clamp(k + shift, 0, t - 1)];
  return out;
}

}  // namespace

int best_global_shift(const TimeSeries& x, const TimeSeries& y, int tau_max) {
  if (x.size() != y.size())
    throw DimensionError("best_global_shift requires equal lengths");
  const int t = static_cast<int>(x.size());
  double best_r = -2.0;
  int best_shift = 0;
  for (int s = -tau_max; s <= tau_max; ++s) {
    const int k_lo = std::max(0, -s);
    const int k_hi = t - 1 - std::max(0, s);
    const int n = k_hi - k_lo + 1;
    if (n < 3) continue;
    double mx = 0.0, my = 0.0;
    for (int k = k_lo; k <= k_hi; ++k) {
      mx += x[k];
      my += y[k + s];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (int k = k_lo; k <= k_hi; ++k) {
      const double dx = x[k] - mx;
      const double dy = y[k + s] - my;
      sxx += dx * dx;
      syy += dy * dy;
      sxy += dx * dy;
    }
    const double denom = std::sqrt(sxx * syy);
    const double r = denom > 0.0 ? sxy / denom : -1.0;
    const bool better =
        r > best_r ||
        (r == best_r && (std::abs(s) < std::abs(best_shift) ||
                         (std::abs(s) == std::abs(best_shift) && s < best_shift)));
    if (better) {
      best_r = r;
      best_shift = s;
    }
  }
  return best_shift;
}

std::optional<EdgeRelation> build_edge_normalized(const TimeSeries& zx,
                                                  const TimeSeries& zy,
                                                  const DtwConfig& dtw_cfg,
                                                  const BccConfig& bcc_cfg,
                                                  AlignKind align) {
  const int t = static_cast<int>(zx.size());
  if (effectively_constant(zx) || effectively_constant(zy)) return std::nullopt;

  TimeSeries y_aligned;
  std::vector<int> offsets;
  if (align == AlignKind::Dtw) {
    const AlignmentPath path = dtw_align(zx, zy, dtw_cfg);
    y_aligned = warp_onto_x(zy, path, t);
    offsets = offsets_from_path(path, t);
  } else {
    const int shift = best_global_shift(zx, zy, dtw_cfg.tau_max);
    y_aligned = shift_clamped(zy, shift);
    offsets.assign(t, shift);
  }
  if (effectively_constant(y_aligned)) return std::nullopt;

  const CointegrationResult res = detect_cointegration(zx, y_aligned, bcc_cfg);
  if (!res.global_pass) return std::nullopt;
  if (std::find(res.c_prime.begin(), res.c_prime.end(), 1) == res.c_prime.end())
    return std::nullopt;

  EdgeRelation edge;
  edge.c = res.c_prime;  // c' is already on x's clock after the warp
  edge.dt = std::move(offsets);
  return edge;
}

std::optional<EdgeRelation> build_edge(const WordSeries& x, const WordSeries& y,
                                       const DtwConfig& dtw_cfg,
                                       const BccConfig& bcc_cfg) {
  return build_edge_normalized(znormalize(x.series), znormalize(y.series),
                               dtw_cfg, bcc_cfg);
}

AugmentedBipartiteGraph build_graph(const GroupSeries& a, const GroupSeries& b,
                                    const DtwConfig& dtw_cfg,
                                    const BccConfig& bcc_cfg, int threads) {
  const GroupPairDims dims = validate_group_pair(a, b);
  AugmentedBipartiteGraph graph;
  graph.n_a = dims.n_a;
  graph.n_b = dims.n_b;
  graph.t = dims.t;
  graph.tau_max = dtw_cfg.tau_max;
  if (dims.n_a == 0 || dims.n_b == 0) return graph;

  std::vector<TimeSeries> za(dims.n_a), zb(dims.n_b);
  for (int i = 0; i < dims.n_a; ++i) za[i] = znormalize(a.words[i].series);
  for (int j = 0; j < dims.n_b; ++j) zb[j] = znormalize(b.words[j].series);

  const std::size_t n_pairs =
      static_cast<std::size_t>(dims.n_a) * static_cast<std::size_t>(dims.n_b);
  std::vector<std::optional<EdgeRelation>> slots(n_pairs);
  parallel_for(n_pairs, threads, [&](std::size_t p) {
    const int i = static_cast<int>(p / dims.n_b);
    const int j = static_cast<int>(p % dims.n_b);
    slots[p] = build_edge_normalized(za[i], zb[j], dtw_cfg, bcc_cfg);
    if (slots[p]) {
      slots[p]->i = i;
      slots[p]->j = j;
    }
  });

  for (auto& slot : slots)
    if (slot) graph.edges.push_back(std::move(*slot));
  return graph;
}

void write_graph_json(std::ostream& out, const AugmentedBipartiteGraph& g) {
  nlohmann::json j;
  j["dims"] = {g.n_a, g.n_b, g.t};
  j["tau_max"] = g.tau_max;
  auto& edges = j["edges"] = nlohmann::json::array();
  for (const auto& e : g.edges) {
    nlohmann::json je;
    je["i"] = e.i;
    je["j"] = e.j;
    je["c"] = e.c;
    je["dt"] = e.dt;
    edges.push_back(std::move(je));
  }
  out << j.dump() << "\n";
}

AugmentedBipartiteGraph read_graph_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad graph JSON: ") + e.what());
  }
  AugmentedBipartiteGraph g;
  try {
    g.n_a = j.at("dims").at(0).get<int>();
    g.n_b = j.at("dims").at(1).get<int>();
    g.t = j.at("dims").at(2).get<int>();
    g.tau_max = j.at("tau_max").get<int>();
    for (const auto& je : j.at("edges")) {
      EdgeRelation e;
      e.i = je.at("i").get<int>();
      e.j = je.at("j").get<int>();
      e.c = je.at("c").get<std::vector<std::uint8_t>>();
      e.dt = je.at("dt").get<std::vector<int>>();
      if (e.i < 0 || e.i >= g.n_a || e.j < 0 || e.j >= g.n_b ||
          static_cast<int>(e.c.size()) != g.t ||
          static_cast<int>(e.dt.size()) != g.t)
        throw FormatError("edge out of range in graph JSON");
      g.edges.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad graph JSON: ") + e.what());
  }
  return g;
}

}  // namespace ideaflow
