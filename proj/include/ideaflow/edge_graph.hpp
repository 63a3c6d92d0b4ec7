#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ideaflow/bcc.hpp"
#include "ideaflow/dtw.hpp"
#include "ideaflow/series.hpp"

namespace ideaflow {

// One cross-group word pair: per-time-point correlation indicators and
// lead-lag offsets. dt is meaningful only where c is 1.
struct EdgeRelation {
  int i = 0;  // word index in group A
  int j = 0;  // word index in group B
  std::vector<std::uint8_t> c;
  std::vector<int> dt;
};

struct AugmentedBipartiteGraph {
  int n_a = 0;
  int n_b = 0;
  int t = 0;
  int tau_max = 0;
  std::vector<EdgeRelation> edges;  // canonical (i, j) order; all-zero c omitted
};

enum class AlignKind {
  Dtw,          // per-time-point offsets from the warping path
  GlobalShift,  // single best integer shift (baseline B3)
};

// Pipeline for one pair: znormalize -> align -> warp y onto x's clock ->
// local cointegration -> map c' and offsets back to x's time axis. Returns
// nothing when the pair is degenerate, fails the global check, or has no
// correlated time point.
std::optional<EdgeRelation> build_edge(const WordSeries& x,
                                       const WordSeries& y,
                                       const DtwConfig& dtw_cfg,
                                       const BccConfig& bcc_cfg);

// Same pipeline on already-normalized series; used by build_graph and the
// benchmark paths so normalization happens once per word.
std::optional<EdgeRelation> build_edge_normalized(const TimeSeries& zx,
                                                  const TimeSeries& zy,
                                                  const DtwConfig& dtw_cfg,
                                                  const BccConfig& bcc_cfg,
                                                  AlignKind align = AlignKind::Dtw);

// All N_A x N_B pairs, assembled in canonical (i, j) order regardless of the
// execution schedule. threads = 0 picks the environment default.
AugmentedBipartiteGraph build_graph(const GroupSeries& a, const GroupSeries& b,
                                    const DtwConfig& dtw_cfg,
                                    const BccConfig& bcc_cfg, int threads = 0);

// Best single integer shift of y against x by Pearson correlation over the
// overlap; ties prefer the smallest |shift|, then the negative one.
int best_global_shift(const TimeSeries& x, const TimeSeries& y, int tau_max);

// JSON interchange between pipeline stages and the CLI.
void write_graph_json(std::ostream& out, const AugmentedBipartiteGraph& g);
AugmentedBipartiteGraph read_graph_json(std::istream& in);

}  // namespace ideaflow
