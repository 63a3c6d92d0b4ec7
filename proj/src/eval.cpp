#include "ideaflow/eval.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "ideaflow/error.hpp"
#include "ideaflow/parallel.hpp"
#include "ideaflow/rng.hpp"
#include "ideaflow/textio.hpp"

namespace ideaflow {

namespace fs = std::filesystem;

std::vector<int> match_clusters(const Partition& predicted,
                                const Partition& truth) {
  if (predicted.labels.size() != truth.labels.size())
    throw DimensionError("match_clusters requires one label per item on both sides");
  int kp = predicted.k, kt = truth.k;
  for (int v : predicted.labels) kp = std::max(kp, v + 1);
  for (int v : truth.labels) kt = std::max(kt, v + 1);
  if (kt > 20 || kp > 64)
    throw ConfigError("cluster matching supports up to 20 truth clusters");

  std::vector<std::vector<long>> weight(kp, std::vector<long>(kt, 0));
  for (std::size_t i = 0; i < predicted.labels.size(); ++i)
    ++weight[predicted.labels[i]][truth.labels[i]];

  // Subset DP over truth clusters: suffix[p][mask] is the best total using
  // predicted clusters p.. with the truth clusters in mask already taken.
  const std::size_t n_masks = std::size_t{1} << kt;
  std::vector<std::vector<long>> suffix(kp + 1, std::vector<long>(n_masks, 0));
  for (int p = kp - 1; p >= 0; --p) {
    for (std::size_t mask = 0; mask < n_masks; ++mask) {
      long s = suffix[p + 1][mask];  // leave predicted cluster p unmatched
      for (int t = 0; t < kt; ++t) {
        if (mask & (std::size_t{1} << t)) continue;
        s = std::max(s, weight[p][t] +
                            suffix[p + 1][mask | (std::size_t{1} << t)]);
      }
      suffix[p][mask] = s;
    }
  }

  // Reconstruct in predicted order, preferring the lowest truth index (and a
  // match over a skip), so ties resolve to the lowest index pair.
  std::vector<int> map(kp, -1);
  std::size_t mask = 0;
  long remaining = suffix[0][0];
  for (int p = 0; p < kp; ++p) {
    int chosen = -1;
    for (int t = 0; t < kt && chosen < 0; ++t) {
      if (mask & (std::size_t{1} << t)) continue;
      if (weight[p][t] + suffix[p + 1][mask | (std::size_t{1} << t)] ==
          remaining)
        chosen = t;
    }
    if (chosen >= 0) {
      map[p] = chosen;
      remaining -= weight[p][chosen];
      mask |= std::size_t{1} << chosen;
    }
  }
  return map;
}

IdeaMatching match_ideas(const Partition& pred_a, const Partition& truth_a,
                         const Partition& pred_b, const Partition& truth_b) {
  IdeaMatching m;
  m.a_map = match_clusters(pred_a, truth_a);
  m.b_map = match_clusters(pred_b, truth_b);
  return m;
}

namespace {

struct PointLine {
  std::vector<std::uint8_t> pos;
  std::vector<double> dt;
};

// segments expanded to per-time-point (positive, dt_bar)
std::map<std::pair<int, int>, PointLine> expand_flows(const FlowReport& report) {
  std::map<std::pair<int, int>, PointLine> lines;
  for (const auto& f : report.flows) {
    PointLine line;
    line.pos.assign(report.t, 0);
    line.dt.assign(report.t, 0.0);
    for (const auto& s : f.segments) {
      for (int k = s.k_start; k <= s.k_end && k < report.t; ++k) {
        line.pos[k] = s.c_bar ? 1 : 0;
        line.dt[k] = s.dt_bar;
      }
    }
    lines[{f.idea_a, f.idea_b}] = std::move(line);
  }
  return lines;
}

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

double f1_from_counts(long correct, long pred_pos, long truth_pos) {
  if (pred_pos == 0 && truth_pos == 0) return 1.0;
  if (pred_pos == 0 || truth_pos == 0) return 0.0;
  if (correct == 0) return 0.0;
  const double p = static_cast<double>(correct) / pred_pos;
  const double r = static_cast<double>(correct) / truth_pos;
  return 2.0 * p * r / (p + r);
}

struct FlowCounts {
  long pred_pos = 0, truth_pos = 0;
  long correct_flow = 0, correct_lead = 0, correct_leadtime = 0;
  double mse_sum = 0.0;
  long mse_count = 0;
};

FlowCounts count_points(const FlowReport& pred, const GroundTruth& truth,
                        const IdeaMatching& matching) {
  const FlowReport truth_report = ground_truth_report(truth);
  const auto pred_lines = expand_flows(pred);
  const auto truth_lines = expand_flows(truth_report);

  FlowCounts counts;
  for (const auto& [pair, pline] : pred_lines) {
    const int ta = pair.first < static_cast<int>(matching.a_map.size())
                       ? matching.a_map[pair.first]
                       : -1;
    const int tb = pair.second < static_cast<int>(matching.b_map.size())
                       ? matching.b_map[pair.second]
                       : -1;
    if (ta < 0 || tb < 0) continue;  // unmatched ideas are not scored
    const auto it = truth_lines.find({ta, tb});
    if (it == truth_lines.end()) continue;
    const PointLine& tline = it->second;
    for (int k = 0; k < truth.t; ++k) {
      const bool p = pline.pos[k], q = tline.pos[k];
      if (p) ++counts.pred_pos;
      if (q) ++counts.truth_pos;
      if (p && q) {
        ++counts.correct_flow;
        const bool lead_ok = sign_of(pline.dt[k]) == sign_of(tline.dt[k]);
        if (lead_ok) ++counts.correct_lead;
        if (lead_ok &&
            std::lround(pline.dt[k]) == std::lround(tline.dt[k]))
          ++counts.correct_leadtime;
        const double diff = pline.dt[k] - tline.dt[k];
        counts.mse_sum += diff * diff;
        ++counts.mse_count;
      }
    }
  }
  return counts;
}

}  // namespace

F1Triple flow_f1_suite(const FlowReport& pred, const GroundTruth& truth,
                       const IdeaMatching& matching) {
  const FlowCounts c = count_points(pred, truth, matching);
  F1Triple f1;
  f1.flow = f1_from_counts(c.correct_flow, c.pred_pos, c.truth_pos);
  f1.lead = f1_from_counts(c.correct_lead, c.pred_pos, c.truth_pos);
  f1.leadtime = f1_from_counts(c.correct_leadtime, c.pred_pos, c.truth_pos);
  return f1;
}

std::optional<double> leadlag_mse(const FlowReport& pred,
                                  const GroundTruth& truth,
                                  const IdeaMatching& matching) {
  const FlowCounts c = count_points(pred, truth, matching);
  if (c.mse_count == 0) return std::nullopt;
  return c.mse_sum / static_cast<double>(c.mse_count);
}

BaselineKind parse_baseline(const std::string& name) {
  if (name == "B1" || name == "b1") return BaselineKind::B1;
  if (name == "B2" || name == "b2") return BaselineKind::B2;
  if (name == "B3" || name == "b3") return BaselineKind::B3;
  throw ConfigError("unknown baseline '" + name + "'");
}

namespace {

void parse_ucr_file(const std::string& path, std::vector<int>& labels,
                    std::vector<TimeSeries>& series) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::string line;
  std::size_t lineno = 0;
  std::size_t expected = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto fields = split_auto(line);
    if (fields.empty() || (fields.size() == 1 && fields[0].empty())) continue;
    if (fields.size() < 2)
      throw FormatError(path + ": line " + std::to_string(lineno) +
                        ": expected label and values");
    if (expected == 0) expected = fields.size();
    if (fields.size() != expected)
      throw FormatError(path + ": line " + std::to_string(lineno) +
                        ": ragged row (" + std::to_string(fields.size()) +
                        " fields, expected " + std::to_string(expected) + ")");
    try {
      labels.push_back(static_cast<int>(std::lround(std::stod(fields[0]))));
      TimeSeries s;
      s.reserve(fields.size() - 1);
      for (std::size_t f = 1; f < fields.size(); ++f)
        s.push_back(std::stod(fields[f]));
      series.push_back(std::move(s));
    } catch (const std::invalid_argument&) {
      throw FormatError(path + ": line " + std::to_string(lineno) +
                        ": bad number");
    }
  }
  if (series.empty()) throw FormatError(path + ": no series found");
}

}  // namespace

UcrDataset load_ucr(const std::string& path) {
  std::vector<std::string> files;
  std::string name;
  const fs::path p(path);
  if (fs::is_directory(p)) {
    for (const auto& entry : fs::directory_iterator(p)) {
      const std::string fname = entry.path().filename().string();
      if (fname.find("_TRAIN") != std::string::npos ||
          fname.find("_TEST") != std::string::npos)
        files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    name = p.filename().string();
    if (files.empty()) throw FormatError("no _TRAIN/_TEST files in " + path);
  } else {
    files.push_back(path);
    std::string stem = p.stem().string();
    for (const char* tag : {"_TRAIN", "_TEST"}) {
      const auto pos = stem.find(tag);
      if (pos == std::string::npos) continue;
      const char* other = std::string(tag) == "_TRAIN" ? "_TEST" : "_TRAIN";
      fs::path sibling = p;
      std::string fname = p.filename().string();
      fname.replace(fname.find(tag), std::string(tag).size(), other);
      sibling.replace_filename(fname);
      if (fs::exists(sibling)) files.push_back(sibling.string());
      stem = stem.substr(0, pos);
    }
    name = stem.empty() ? p.stem().string() : stem;
    std::sort(files.begin(), files.end());
  }

  UcrDataset ds;
  ds.name = name;
  std::vector<int> raw_labels;
  for (const auto& f : files) parse_ucr_file(f, raw_labels, ds.series);

  const std::size_t t = ds.series.front().size();
  for (const auto& s : ds.series)
    if (s.size() != t)
      throw FormatError(path + ": series lengths differ across splits");

  std::map<int, int> remap;
  for (int lbl : raw_labels) remap.emplace(lbl, 0);
  int next = 0;
  for (auto& [lbl, id] : remap) id = next++;
  ds.labels.reserve(raw_labels.size());
  for (int lbl : raw_labels) ds.labels.push_back(remap[lbl]);
  ds.k_classes = next;
  return ds;
}

AugmentedBipartiteGraph build_pairwise_graph(const std::vector<TimeSeries>& data,
                                             int tau_max, const BccConfig& bcc,
                                             AlignKind align, int threads) {
  const int n = static_cast<int>(data.size());
  std::vector<TimeSeries> zn(n);
  for (int i = 0; i < n; ++i) zn[i] = znormalize(data[i]);

  AugmentedBipartiteGraph graph;
  graph.n_a = n;
  graph.n_b = n;
  graph.t = data.empty() ? 0 : static_cast<int>(data.front().size());
  graph.tau_max = tau_max;

  DtwConfig dtw_cfg{tau_max};
  const std::size_t n_pairs = static_cast<std::size_t>(n) * n;
  std::vector<std::optional<EdgeRelation>> slots(n_pairs);
  parallel_for(n_pairs, threads, [&](std::size_t p) {
    const int i = static_cast<int>(p / n);
    const int j = static_cast<int>(p % n);
    if (i == j) return;  // self-pairs excluded
    slots[p] = build_edge_normalized(zn[i], zn[j], dtw_cfg, bcc, align);
    if (slots[p]) {
      slots[p]->i = i;
      slots[p]->j = j;
    }
  });
  for (auto& slot : slots)
    if (slot) graph.edges.push_back(std::move(*slot));
  return graph;
}

Partition cluster_series_on_graph(const AugmentedBipartiteGraph& graph, int k,
                                  const SeriesClusterConfig& cfg) {
  const SparseTensor4 tensor = build_tensor(graph, TensorVariant::X3);
  if (tensor.entries.empty())
    throw EmptyTensorError("no cointegrated pairs in the dataset");

  const int q = cfg.q > 0 ? cfg.q : 2 * k;
  ParafacConfig pf = cfg.parafac;
  pf.seed = mix_seed(cfg.seed, 0x0c41);
  const FactorSet factors = greedy_parafac(tensor, q, pf);

  const auto rows_u = feature_rows(factors, FactorMode::U);
  const auto rows_v = feature_rows(factors, FactorMode::V);
  std::vector<std::vector<double>> rows(rows_u.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i] = rows_u[i];
    rows[i].insert(rows[i].end(), rows_v[i].begin(), rows_v[i].end());
  }

  KMeansConfig km;
  km.k = k;
  km.max_iters = cfg.kmeans_iters;
  km.restarts = cfg.restarts;
  km.seed = mix_seed(cfg.seed, 0x0c42);
  return kmeans(rows, km);
}

Partition cluster_series(const std::vector<TimeSeries>& data, int k,
                         const SeriesClusterConfig& cfg) {
  const AugmentedBipartiteGraph graph =
      build_pairwise_graph(data, cfg.tau_max, cfg.bcc, cfg.align, cfg.threads);
  return cluster_series_on_graph(graph, k, cfg);
}

namespace {

// Jacobi eigen-decomposition of a symmetric matrix; deterministic.
void jacobi_eigen(std::vector<std::vector<double>>& a,
                  std::vector<double>& eigenvalues,
                  std::vector<std::vector<double>>& eigenvectors) {
  const int n = static_cast<int>(a.size());
  eigenvectors.assign(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) eigenvectors[i][i] = 1.0;

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-22) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double sign = theta >= 0.0 ? 1.0 : -1.0;
        const double t_val =
            sign / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t_val * t_val + 1.0);
        const double s = t_val * c;
        for (int i = 0; i < n; ++i) {
          const double aip = a[i][p], aiq = a[i][q];
          a[i][p] = c * aip - s * aiq;
          a[i][q] = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          const double api = a[p][i], aqi = a[q][i];
          a[p][i] = c * api - s * aqi;
          a[q][i] = s * api + c * aqi;
        }
        for (int i = 0; i < n; ++i) {
          const double vip = eigenvectors[i][p], viq = eigenvectors[i][q];
          eigenvectors[i][p] = c * vip - s * viq;
          eigenvectors[i][q] = s * vip + c * viq;
        }
      }
    }
  }
  eigenvalues.resize(n);
  for (int i = 0; i < n; ++i) eigenvalues[i] = a[i][i];
}

}  // namespace

std::vector<std::vector<double>> spectral_embedding(
    const std::vector<TimeSeries>& data, int k, int tau_max, int threads) {
  const int n = static_cast<int>(data.size());
  std::vector<TimeSeries> zn(n);
  for (int i = 0; i < n; ++i) zn[i] = znormalize(data[i]);

  // pairwise DTW distances (symmetric; computed once per unordered pair)
  DtwConfig dtw_cfg{tau_max};
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::vector<double> costs(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t p) {
    costs[p] = std::sqrt(
        dtw_align(zn[pairs[p].first], zn[pairs[p].second], dtw_cfg).total_cost);
  });
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    dist[pairs[p].first][pairs[p].second] = costs[p];
    dist[pairs[p].second][pairs[p].first] = costs[p];
  }

  std::vector<double> sorted_costs = costs;
  std::sort(sorted_costs.begin(), sorted_costs.end());
  double sigma = 1.0;
  if (!sorted_costs.empty()) {
    const std::size_t m = sorted_costs.size();
    sigma = m % 2 == 1 ? sorted_costs[m / 2]
                       : 0.5 * (sorted_costs[m / 2 - 1] + sorted_costs[m / 2]);
    if (sigma <= 0.0) sigma = 1.0;
  }

  // Gaussian kernel over DTW distance; stated deviation from the cited
  // K_DTW kernel.
  std::vector<std::vector<double>> kernel(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      kernel[i][j] = std::exp(-dist[i][j] * dist[i][j] / (2.0 * sigma * sigma));

  std::vector<double> degree(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) degree[i] += kernel[i][j];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      kernel[i][j] /= std::sqrt(degree[i] * degree[j]);

  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> eigenvectors;
  jacobi_eigen(kernel, eigenvalues, eigenvectors);

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return eigenvalues[a] > eigenvalues[b];
  });

  const int dims = std::min(k, n);
  std::vector<std::vector<double>> rows(n, std::vector<double>(dims, 0.0));
  for (int d = 0; d < dims; ++d) {
    const int col = order[d];
    // deterministic sign: make the largest-magnitude component positive
    int arg = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(eigenvectors[i][col]) > std::abs(eigenvectors[arg][col]))
        arg = i;
    const double flip = eigenvectors[arg][col] < 0.0 ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i) rows[i][d] = flip * eigenvectors[i][col];
  }
  for (auto& row : rows) {
    double norm = 0.0;
    for (double v : row) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0.0)
      for (double& v : row) v /= norm;
  }
  return rows;
}

Partition run_baseline(BaselineKind kind, const std::vector<TimeSeries>& data,
                       int k, std::uint64_t seed, int tau_max,
                       const BccConfig& bcc, int threads) {
  const int n = static_cast<int>(data.size());
  if (k > n) throw ConfigError("baseline k exceeds the number of series");

  KMeansConfig km;
  km.k = k;
  km.max_iters = 100;
  km.restarts = 10;
  km.seed = mix_seed(seed, 0xb100 + static_cast<int>(kind));

  switch (kind) {
    case BaselineKind::B1:
      return kmeans(data, km);
    case BaselineKind::B2: {
      const auto rows = spectral_embedding(data, k, tau_max, threads);
      return kmeans(rows, km);
    }
    default: {
      SeriesClusterConfig cfg;
      cfg.tau_max = tau_max;
      cfg.bcc = bcc;
      cfg.seed = seed;
      cfg.threads = threads;
      cfg.align = AlignKind::GlobalShift;
      return cluster_series(data, k, cfg);
    }
  }
}

UcrDataset control_chart_dataset(int per_class, int t, std::uint64_t seed) {
  UcrDataset ds;
  ds.name = "ControlChartRegen";
  ds.k_classes = 6;
  Rng rng(mix_seed(seed, 0xcc01));
  for (int cls = 0; cls < 6; ++cls) {
    for (int rep = 0; rep < per_class; ++rep) {
      TimeSeries s(t);
      const double a = rng.uniform(10.0, 15.0);
      const double cycle = rng.uniform(10.0, 15.0);
      const double g = rng.uniform(0.2, 0.5);
      const double x = rng.uniform(7.5, 20.0);
      const int t3 = static_cast<int>(rng.uniform_int(t / 3, 2 * t / 3));
      for (int i = 0; i < t; ++i) {
        const double ti = i + 1;
        double v = 30.0 + rng.uniform(-3.0, 3.0) * 2.0;
        switch (cls) {
          case 1: v += a * std::sin(2.0 * M_PI * ti / cycle); break;
          case 2: v += g * ti; break;
          case 3: v -= g * ti; break;
          case 4: v += ti >= t3 ? x : 0.0; break;
          case 5: v -= ti >= t3 ? x : 0.0; break;
          default: break;
        }
        s[i] = v;
      }
      ds.series.push_back(std::move(s));
      ds.labels.push_back(cls);
    }
  }
  return ds;
}

}  // namespace ideaflow
