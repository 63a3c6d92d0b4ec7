#include "ideaflow/flow.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>

#include <json.hpp>

#include "ideaflow/error.hpp"
#include "ideaflow/parallel.hpp"
#include "ideaflow/rng.hpp"

namespace ideaflow {

namespace {

// seed tags for the independent random streams of the pipeline
constexpr std::uint64_t kTagParafac = 0x701;
constexpr std::uint64_t kTagKmeansA = 0x702;
constexpr std::uint64_t kTagKmeansB = 0x703;
constexpr std::uint64_t kTagSegParafac = 0x704;
constexpr std::uint64_t kTagSegKmeans = 0x705;

std::vector<IdeaCluster> clusters_from_partition(
    const Partition& part, Group group, const AugmentedBipartiteGraph& graph,
    const std::vector<std::string>& tokens) {
  // activity = total correlated time points on incident edges, for ranking
  const int n = static_cast<int>(part.labels.size());
  std::vector<long> activity(n, 0);
  for (const auto& e : graph.edges) {
    long on = 0;
    for (auto v : e.c) on += v;
    activity[group == Group::A ? e.i : e.j] += on;
  }

  std::vector<IdeaCluster> ideas;
  for (int c = 0; c < part.k; ++c) {
    IdeaCluster idea;
    idea.group = group;
    idea.idea_id = c;
    for (int i = 0; i < n; ++i)
      if (part.labels[i] == c) idea.word_indices.push_back(i);
    if (idea.word_indices.empty()) continue;  // flagged empty cluster

    std::vector<int> ranked = idea.word_indices;
    std::stable_sort(ranked.begin(), ranked.end(), [&](int a, int b) {
      if (activity[a] != activity[b]) return activity[a] > activity[b];
      const std::string& ta = a < static_cast<int>(tokens.size())
                                  ? tokens[a]
                                  : std::to_string(a);
      const std::string& tb = b < static_cast<int>(tokens.size())
                                  ? tokens[b]
                                  : std::to_string(b);
      return ta < tb;
    });
    for (int i : ranked)
      idea.top_words.push_back(i < static_cast<int>(tokens.size())
                                   ? tokens[i]
                                   : std::to_string(i));
    ideas.push_back(std::move(idea));
  }
  return ideas;
}

}  // namespace

PartitionResult partition_words(const AugmentedBipartiteGraph& graph,
                                const FlowConfig& cfg,
                                const std::vector<std::string>& tokens_a,
                                const std::vector<std::string>& tokens_b) {
  const SparseTensor4 tensor = build_tensor(graph, cfg.variant);
  if (tensor.entries.empty()) throw EmptyTensorError("empty tensor");

  const int q = cfg.q > 0 ? cfg.q : cfg.k_a + cfg.k_b;
  ParafacConfig pf = cfg.parafac;
  pf.seed = mix_seed(cfg.seed, kTagParafac);
  PartitionResult result;
  result.factors = greedy_parafac(tensor, q, pf);

  KMeansConfig km;
  km.max_iters = cfg.kmeans_iters;
  km.restarts = cfg.restarts;

  km.k = cfg.k_a;
  km.seed = mix_seed(cfg.seed, kTagKmeansA);
  result.part_a = kmeans(feature_rows(result.factors, FactorMode::U), km);

  km.k = cfg.k_b;
  km.seed = mix_seed(cfg.seed, kTagKmeansB);
  result.part_b = kmeans(feature_rows(result.factors, FactorMode::V), km);

  result.ideas_a =
      clusters_from_partition(result.part_a, Group::A, graph, tokens_a);
  result.ideas_b =
      clusters_from_partition(result.part_b, Group::B, graph, tokens_b);
  return result;
}

TimeRuns segment_timepoints(const SparseTensor4& tensor,
                            const IdeaCluster& idea_a,
                            const IdeaCluster& idea_b, const FlowConfig& cfg,
                            std::uint64_t pair_tag) {
  const int t = tensor.shape[2];
  const SparseTensor4 sub =
      subtensor(tensor, idea_a.word_indices, idea_b.word_indices);
  if (sub.entries.empty()) return {{0, t - 1}};
  if (cfg.k_t <= 1) return {{0, t - 1}};

  ParafacConfig pf = cfg.parafac;
  pf.seed = mix_seed(cfg.seed, kTagSegParafac, pair_tag);
  const FactorSet factors = greedy_parafac(sub, cfg.q_seg, pf);

  KMeansConfig km;
  km.k = std::min(cfg.k_t, t);
  km.max_iters = cfg.kmeans_iters;
  km.restarts = cfg.restarts;
  km.seed = mix_seed(cfg.seed, kTagSegKmeans, pair_tag);
  const Partition part = kmeans(feature_rows(factors, FactorMode::W), km);

  TimeRuns runs;
  int start = 0;
  for (int k = 1; k <= t; ++k) {
    if (k == t || part.labels[k] != part.labels[start]) {
      runs.emplace_back(start, k - 1);
      start = k;
    }
  }
  return runs;
}

TimeRuns segment_timepoints(const AugmentedBipartiteGraph& graph,
                            const IdeaCluster& idea_a,
                            const IdeaCluster& idea_b, const FlowConfig& cfg) {
  const SparseTensor4 tensor = build_tensor(graph, cfg.variant);
  const std::uint64_t tag =
      static_cast<std::uint64_t>(idea_a.idea_id) * 4096 + idea_b.idea_id;
  return segment_timepoints(tensor, idea_a, idea_b, cfg, tag);
}

FlowReport aggregate_flows(const AugmentedBipartiteGraph& graph,
                           const std::vector<IdeaCluster>& ideas_a,
                           const std::vector<IdeaCluster>& ideas_b,
                           const std::vector<TimeRuns>& runs_per_pair,
                           double threshold) {
  if (runs_per_pair.size() != ideas_a.size() * ideas_b.size())
    throw DimensionError("one run list per idea pair is required");
  const int t = graph.t;

  std::map<std::pair<int, int>, const EdgeRelation*> edge_at;
  for (const auto& e : graph.edges) edge_at[{e.i, e.j}] = &e;

  FlowReport report;
  report.t = t;
  report.tau_max = graph.tau_max;
  report.ideas_a = ideas_a;
  report.ideas_b = ideas_b;

  for (std::size_t ai = 0; ai < ideas_a.size(); ++ai) {
    for (std::size_t bi = 0; bi < ideas_b.size(); ++bi) {
      const auto& runs = runs_per_pair[ai * ideas_b.size() + bi];
      IdeaFlow flow;
      flow.idea_a = ideas_a[ai].idea_id;
      flow.idea_b = ideas_b[bi].idea_id;
      for (const auto& [k_start, k_end] : runs) {
        long cells = 0, on = 0, dt_count = 0;
        double dt_sum = 0.0;
        for (int i : ideas_a[ai].word_indices) {
          for (int j : ideas_b[bi].word_indices) {
            cells += k_end - k_start + 1;
            const auto it = edge_at.find({i, j});
            if (it == edge_at.end()) continue;
            const EdgeRelation& e = *it->second;
            for (int k = k_start; k <= k_end; ++k) {
              if (!e.c[k]) continue;
              ++on;
              dt_sum += e.dt[k];
              ++dt_count;
            }
          }
        }
        FlowSegment seg;
        seg.k_start = k_start;
        seg.k_end = k_end;
        const double mean = cells > 0 ? static_cast<double>(on) / cells : 0.0;
        seg.c_bar = mean >= threshold;  // ties inclusive
        if (seg.c_bar && dt_count > 0) seg.dt_bar = dt_sum / dt_count;
        flow.segments.push_back(seg);
      }
      report.flows.push_back(std::move(flow));
    }
  }

  const auto hotness = [&](const std::vector<IdeaCluster>& ideas, Group g) {
    std::vector<std::vector<int>> hot(ideas.size(), std::vector<int>(t, 0));
    std::vector<std::vector<std::uint8_t>> word_on;  // word x time
    const int n = g == Group::A ? graph.n_a : graph.n_b;
    word_on.assign(n, std::vector<std::uint8_t>(t, 0));
    for (const auto& e : graph.edges) {
      const int w = g == Group::A ? e.i : e.j;
      for (int k = 0; k < t; ++k)
        if (e.c[k]) word_on[w][k] = 1;
    }
    for (std::size_t x = 0; x < ideas.size(); ++x)
      for (int w : ideas[x].word_indices)
        for (int k = 0; k < t; ++k) hot[x][k] += word_on[w][k];
    return hot;
  };
  report.hotness_a = hotness(ideas_a, Group::A);
  report.hotness_b = hotness(ideas_b, Group::B);
  return report;
}

FlowReport track_flows(const AugmentedBipartiteGraph& graph,
                       const FlowConfig& cfg,
                       const std::vector<std::string>& tokens_a,
                       const std::vector<std::string>& tokens_b) {
  PartitionResult pr = partition_words(graph, cfg, tokens_a, tokens_b);
  const SparseTensor4 tensor = build_tensor(graph, cfg.variant);

  const std::size_t n_pairs = pr.ideas_a.size() * pr.ideas_b.size();
  std::vector<TimeRuns> runs(n_pairs);
  parallel_for(n_pairs, cfg.threads, [&](std::size_t p) {
    const std::size_t ai = p / pr.ideas_b.size();
    const std::size_t bi = p % pr.ideas_b.size();
    const std::uint64_t tag =
        static_cast<std::uint64_t>(pr.ideas_a[ai].idea_id) * 4096 +
        pr.ideas_b[bi].idea_id;
    runs[p] = segment_timepoints(tensor, pr.ideas_a[ai], pr.ideas_b[bi], cfg, tag);
  });

  return aggregate_flows(graph, pr.ideas_a, pr.ideas_b, runs, cfg.threshold);
}

void write_report_json(std::ostream& out, const FlowReport& report,
                       const std::string& config_echo_json) {
  nlohmann::json j;
  j["t"] = report.t;
  j["tau_max"] = report.tau_max;
  auto& ideas = j["ideas"] = nlohmann::json::array();
  const auto add_ideas = [&](const std::vector<IdeaCluster>& list) {
    for (const auto& idea : list) {
      nlohmann::json ji;
      ji["group"] = std::string(1, group_letter(idea.group));
      ji["id"] = idea.idea_id;
      ji["words"] = idea.top_words;
      ji["word_indices"] = idea.word_indices;
      ideas.push_back(std::move(ji));
    }
  };
  add_ideas(report.ideas_a);
  add_ideas(report.ideas_b);

  auto& flows = j["flows"] = nlohmann::json::array();
  for (const auto& f : report.flows) {
    nlohmann::json jf;
    jf["idea_a"] = f.idea_a;
    jf["idea_b"] = f.idea_b;
    auto& segs = jf["segments"] = nlohmann::json::array();
    for (const auto& s : f.segments) {
      nlohmann::json js;
      js["k_start"] = s.k_start;
      js["k_end"] = s.k_end;
      js["c_bar"] = s.c_bar ? 1 : 0;
      if (s.c_bar) js["dt_bar"] = s.dt_bar;
      segs.push_back(std::move(js));
    }
    flows.push_back(std::move(jf));
  }
  j["hotness"]["A"] = report.hotness_a;
  j["hotness"]["B"] = report.hotness_b;
  if (!config_echo_json.empty())
    j["config"] = nlohmann::json::parse(config_echo_json);
  out << j.dump() << "\n";
}

FlowReport read_report_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad report JSON: ") + e.what());
  }
  FlowReport report;
  try {
    report.t = j.at("t").get<int>();
    report.tau_max = j.at("tau_max").get<int>();
    for (const auto& ji : j.at("ideas")) {
      IdeaCluster idea;
      idea.group = parse_group(ji.at("group").get<std::string>());
      idea.idea_id = ji.at("id").get<int>();
      idea.top_words = ji.at("words").get<std::vector<std::string>>();
      idea.word_indices = ji.at("word_indices").get<std::vector<int>>();
      (idea.group == Group::A ? report.ideas_a : report.ideas_b)
          .push_back(std::move(idea));
    }
    for (const auto& jf : j.at("flows")) {
      IdeaFlow flow;
      flow.idea_a = jf.at("idea_a").get<int>();
      flow.idea_b = jf.at("idea_b").get<int>();
      for (const auto& js : jf.at("segments")) {
        FlowSegment seg;
        seg.k_start = js.at("k_start").get<int>();
        seg.k_end = js.at("k_end").get<int>();
        seg.c_bar = js.at("c_bar").get<int>() != 0;
        if (seg.c_bar) seg.dt_bar = js.at("dt_bar").get<double>();
        flow.segments.push_back(seg);
      }
      report.flows.push_back(std::move(flow));
    }
    report.hotness_a =
        j.at("hotness").at("A").get<std::vector<std::vector<int>>>();
    report.hotness_b =
        j.at("hotness").at("B").get<std::vector<std::vector<int>>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad report JSON: ") + e.what());
  }
  return report;
}

}  // namespace ideaflow
