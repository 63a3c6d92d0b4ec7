#include "ideaflow/synth.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <string>

#include <json.hpp>

#include "ideaflow/error.hpp"
#include "ideaflow/rng.hpp"

namespace ideaflow {

namespace {

constexpr int kMaxAttempts = 64;
constexpr std::uint64_t kTagDataset = 0x5311;
constexpr std::uint64_t kTagEdge = 0x5312;

void validate(const SynthConfig& cfg) {
  if (cfg.noise_level < 0.0 || cfg.noise_level >= 1.0)
    throw ConfigError("noise level must be in [0, 1)");
  if (cfg.ideas_min < 1 || cfg.ideas_max < cfg.ideas_min)
    throw ConfigError("bad ideas range");
  if (cfg.words_min < 1 || cfg.words_max < cfg.words_min)
    throw ConfigError("bad words range");
  if (cfg.period_min < 1 || cfg.period_max < cfg.period_min ||
      cfg.period_max > cfg.t)
    throw ConfigError("bad period range");
  if (cfg.leadlag_max < cfg.leadlag_min) throw ConfigError("bad leadlag range");
  if (cfg.tau_max < 0 || cfg.t < 2) throw ConfigError("bad t or tau_max");
}

// One attempt at a full draw; returns false when period packing fails.
bool try_generate(const SynthConfig& cfg, Rng& rng, GroundTruth& gt) {
  gt = GroundTruth{};
  gt.t = cfg.t;
  gt.tau_max = cfg.tau_max;
  gt.k_a = static_cast<int>(rng.uniform_int(cfg.ideas_min, cfg.ideas_max));
  gt.k_b = static_cast<int>(rng.uniform_int(cfg.ideas_min, cfg.ideas_max));

  for (int p = 0; p < gt.k_a; ++p) {
    const int words = static_cast<int>(rng.uniform_int(cfg.words_min, cfg.words_max));
    for (int w = 0; w < words; ++w) gt.idea_of_word_a.push_back(p);
  }
  for (int p = 0; p < gt.k_b; ++p) {
    const int words = static_cast<int>(rng.uniform_int(cfg.words_min, cfg.words_max));
    for (int w = 0; w < words; ++w) gt.idea_of_word_b.push_back(p);
  }
  gt.n_a = static_cast<int>(gt.idea_of_word_a.size());
  gt.n_b = static_cast<int>(gt.idea_of_word_b.size());

  // Which idea pairs carry a flow; every idea must appear at least once.
  std::vector<std::vector<bool>> has_flow(gt.k_a,
                                          std::vector<bool>(gt.k_b, false));
  for (int p = 0; p < gt.k_a; ++p)
    for (int q = 0; q < gt.k_b; ++q) has_flow[p][q] = rng.bernoulli(0.5);
  for (int p = 0; p < gt.k_a; ++p) {
    bool any = false;
    for (int q = 0; q < gt.k_b; ++q) any = any || has_flow[p][q];
    if (!any) has_flow[p][rng.uniform_int(0, gt.k_b - 1)] = true;
  }
  for (int q = 0; q < gt.k_b; ++q) {
    bool any = false;
    for (int p = 0; p < gt.k_a; ++p) any = any || has_flow[p][q];
    if (!any) has_flow[rng.uniform_int(0, gt.k_a - 1)][q] = true;
  }

  const int dt_lo = std::max(cfg.leadlag_min, -cfg.tau_max);
  const int dt_hi = std::min(cfg.leadlag_max, cfg.tau_max);
  if (dt_hi < dt_lo) throw ConfigError("leadlag range excludes tau_max band");

  for (int p = 0; p < gt.k_a; ++p) {
    for (int q = 0; q < gt.k_b; ++q) {
      if (!has_flow[p][q]) continue;
      PlantedFlow flow;
      flow.idea_a = p;
      flow.idea_b = q;
      const int n_periods = static_cast<int>(rng.uniform_int(1, 2));
      for (int s = 0; s < n_periods; ++s) {
        const int len =
            static_cast<int>(rng.uniform_int(cfg.period_min, cfg.period_max));
        bool placed = false;
        for (int attempt = 0; attempt < 40 && !placed; ++attempt) {
          const int start = static_cast<int>(rng.uniform_int(0, cfg.t - len));
          const int end = start + len - 1;
          bool overlap = false;
          for (const auto& seg : flow.segments)
            overlap = overlap || (start <= seg.k_end && seg.k_start <= end);
          if (overlap) continue;
          PlantedSegment seg;
          seg.k_start = start;
          seg.k_end = end;
          seg.dt = static_cast<int>(rng.uniform_int(dt_lo, dt_hi));
          flow.segments.push_back(seg);
          placed = true;
        }
        if (!placed && s == 0) return false;  // no room for even one period
      }
      std::sort(flow.segments.begin(), flow.segments.end(),
                [](const PlantedSegment& a, const PlantedSegment& b) {
                  return a.k_start < b.k_start;
                });
      gt.flows.push_back(std::move(flow));
    }
  }

  // Reject draws where two ideas of one group have identical flow signatures;
  // they would be indistinguishable to any clustering.
  const auto signature = [&](Group g, int idea) {
    std::string sig;
    for (const auto& f : gt.flows) {
      if ((g == Group::A ? f.idea_a : f.idea_b) != idea) continue;
      sig += std::to_string(g == Group::A ? f.idea_b : f.idea_a) + ":";
      for (const auto& s : f.segments)
        sig += std::to_string(s.k_start) + "," + std::to_string(s.k_end) +
               "," + std::to_string(s.dt) + ";";
      sig += "|";
    }
    return sig;
  };
  std::set<std::string> seen;
  for (int p = 0; p < gt.k_a; ++p)
    if (!seen.insert(signature(Group::A, p)).second) return false;
  seen.clear();
  for (int q = 0; q < gt.k_b; ++q)
    if (!seen.insert(signature(Group::B, q)).second) return false;
  return true;
}

}  // namespace

GroundTruth generate_ground_truth(const SynthConfig& cfg) {
  validate(cfg);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng(mix_seed(cfg.seed, kTagDataset, static_cast<std::uint64_t>(attempt)));
    GroundTruth gt;
    if (try_generate(cfg, rng, gt)) return gt;
  }
  throw ConfigError("could not pack planted periods after retries");
}

AugmentedBipartiteGraph generate_graph(const GroundTruth& gt,
                                       const SynthConfig& cfg) {
  AugmentedBipartiteGraph graph;
  graph.n_a = gt.n_a;
  graph.n_b = gt.n_b;
  graph.t = gt.t;
  graph.tau_max = gt.tau_max;

  std::vector<const PlantedFlow*> flow_of_pair(
      static_cast<std::size_t>(gt.k_a) * gt.k_b, nullptr);
  for (const auto& f : gt.flows)
    flow_of_pair[static_cast<std::size_t>(f.idea_a) * gt.k_b + f.idea_b] = &f;

  for (int i = 0; i < gt.n_a; ++i) {
    for (int j = 0; j < gt.n_b; ++j) {
      const PlantedFlow* flow =
          flow_of_pair[static_cast<std::size_t>(gt.idea_of_word_a[i]) * gt.k_b +
                       gt.idea_of_word_b[j]];
      if (!flow) continue;
      // per-pair stream, independent of iteration order
      Rng rng(mix_seed(cfg.seed, kTagEdge, static_cast<std::uint64_t>(i),
                       static_cast<std::uint64_t>(j)));
      EdgeRelation edge;
      edge.i = i;
      edge.j = j;
      edge.c.assign(gt.t, 0);
      edge.dt.assign(gt.t, 0);
      bool any = false;
      for (const auto& seg : flow->segments) {
        for (int k = seg.k_start; k <= seg.k_end; ++k) {
          if (rng.bernoulli(1.0 - cfg.noise_level)) {
            edge.c[k] = 1;
            any = true;
          }
          edge.dt[k] = seg.dt;
        }
      }
      if (any) graph.edges.push_back(std::move(edge));
    }
  }
  return graph;
}

FlowReport ground_truth_report(const GroundTruth& gt) {
  FlowReport report;
  report.t = gt.t;
  report.tau_max = gt.tau_max;

  const auto make_ideas = [&](Group g, int k, const std::vector<int>& labels) {
    std::vector<IdeaCluster> ideas(k);
    for (int c = 0; c < k; ++c) {
      ideas[c].group = g;
      ideas[c].idea_id = c;
    }
    for (std::size_t w = 0; w < labels.size(); ++w) {
      ideas[labels[w]].word_indices.push_back(static_cast<int>(w));
      ideas[labels[w]].top_words.push_back(std::to_string(w));
    }
    return ideas;
  };
  report.ideas_a = make_ideas(Group::A, gt.k_a, gt.idea_of_word_a);
  report.ideas_b = make_ideas(Group::B, gt.k_b, gt.idea_of_word_b);

  for (int p = 0; p < gt.k_a; ++p) {
    for (int q = 0; q < gt.k_b; ++q) {
      IdeaFlow flow;
      flow.idea_a = p;
      flow.idea_b = q;
      const PlantedFlow* planted = nullptr;
      for (const auto& f : gt.flows)
        if (f.idea_a == p && f.idea_b == q) planted = &f;
      int cursor = 0;
      if (planted) {
        for (const auto& seg : planted->segments) {
          if (seg.k_start > cursor)
            flow.segments.push_back({cursor, seg.k_start - 1, false, 0.0});
          flow.segments.push_back(
              {seg.k_start, seg.k_end, true, static_cast<double>(seg.dt)});
          cursor = seg.k_end + 1;
        }
      }
      if (cursor < gt.t)
        flow.segments.push_back({cursor, gt.t - 1, false, 0.0});
      report.flows.push_back(std::move(flow));
    }
  }

  report.hotness_a.assign(report.ideas_a.size(), std::vector<int>(gt.t, 0));
  report.hotness_b.assign(report.ideas_b.size(), std::vector<int>(gt.t, 0));
  return report;
}

Partition planted_partition(const GroundTruth& gt, Group g) {
  Partition part;
  part.labels = g == Group::A ? gt.idea_of_word_a : gt.idea_of_word_b;
  part.k = g == Group::A ? gt.k_a : gt.k_b;
  return part;
}

void write_ground_truth_json(std::ostream& out, const GroundTruth& gt) {
  nlohmann::json j;
  j["t"] = gt.t;
  j["tau_max"] = gt.tau_max;
  j["k_a"] = gt.k_a;
  j["k_b"] = gt.k_b;
  j["planted_partition"]["A"] = gt.idea_of_word_a;
  j["planted_partition"]["B"] = gt.idea_of_word_b;
  auto& flows = j["flows"] = nlohmann::json::array();
  for (const auto& f : gt.flows) {
    nlohmann::json jf;
    jf["idea_a"] = f.idea_a;
    jf["idea_b"] = f.idea_b;
    auto& segs = jf["segments"] = nlohmann::json::array();
    for (const auto& s : f.segments)
      segs.push_back({{"k_start", s.k_start}, {"k_end", s.k_end}, {"dt", s.dt}});
    flows.push_back(std::move(jf));
  }
  out << j.dump() << "\n";
}

GroundTruth read_ground_truth_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad ground truth JSON: ") + e.what());
  }
  GroundTruth gt;
  try {
    gt.t = j.at("t").get<int>();
    gt.tau_max = j.at("tau_max").get<int>();
    gt.k_a = j.at("k_a").get<int>();
    gt.k_b = j.at("k_b").get<int>();
    gt.idea_of_word_a =
        j.at("planted_partition").at("A").get<std::vector<int>>();
    gt.idea_of_word_b =
        j.at("planted_partition").at("B").get<std::vector<int>>();
    gt.n_a = static_cast<int>(gt.idea_of_word_a.size());
    gt.n_b = static_cast<int>(gt.idea_of_word_b.size());
    for (const auto& jf : j.at("flows")) {
      PlantedFlow f;
      f.idea_a = jf.at("idea_a").get<int>();
      f.idea_b = jf.at("idea_b").get<int>();
      for (const auto& js : jf.at("segments"))
        f.segments.push_back({js.at("k_start").get<int>(),
                              js.at("k_end").get<int>(),
                              js.at("dt").get<int>()});
      gt.flows.push_back(std::move(f));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad ground truth JSON: ") + e.what());
  }
  return gt;
}

}  // namespace ideaflow
