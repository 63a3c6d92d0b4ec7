#include "ideaflow/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include "ideaflow/error.hpp"
#include "ideaflow/rng.hpp"
#include "ideaflow/textio.hpp"

namespace ideaflow {

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

struct Accumulator {
  double sum = 0.0, sum_sq = 0.0;
  long n = 0;
  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  double mean() const { return n > 0 ? sum / n : 0.0; }
  double stddev() const {
    if (n < 1) return 0.0;
    const double m = mean();
    return std::sqrt(std::max(0.0, sum_sq / n - m * m));
  }
};

}  // namespace

SynthRunOutcome run_synth_once(const SynthConfig& dataset_cfg,
                               const RunConfig& base, TensorVariant variant) {
  const GroundTruth gt = generate_ground_truth(dataset_cfg);
  const AugmentedBipartiteGraph graph = generate_graph(gt, dataset_cfg);

  RunConfig cfg = base;
  cfg.variant = variant;
  cfg.k_a = gt.k_a;  // true idea counts, as in the synthetic protocol
  cfg.k_b = gt.k_b;
  cfg.tau_max = dataset_cfg.tau_max;
  cfg.seed = dataset_cfg.seed;

  SynthRunOutcome outcome;
  const double t0 = now_seconds();
  const FlowReport report = analyze_graph(graph, cfg);
  outcome.runtime_seconds = now_seconds() - t0;

  const Partition truth_a = planted_partition(gt, Group::A);
  const Partition truth_b = planted_partition(gt, Group::B);
  Partition pred_a, pred_b;
  pred_a.k = cfg.k_a;
  pred_a.labels.assign(gt.n_a, 0);
  for (const auto& idea : report.ideas_a)
    for (int w : idea.word_indices) pred_a.labels[w] = idea.idea_id;
  pred_b.k = cfg.k_b;
  pred_b.labels.assign(gt.n_b, 0);
  for (const auto& idea : report.ideas_b)
    for (int w : idea.word_indices) pred_b.labels[w] = idea.idea_id;

  const IdeaMatching matching = match_ideas(pred_a, truth_a, pred_b, truth_b);
  const F1Triple f1 = flow_f1_suite(report, gt, matching);
  outcome.metrics.flow_f1 = f1.flow;
  outcome.metrics.flowlead_f1 = f1.lead;
  outcome.metrics.flowleadtime_f1 = f1.leadtime;
  outcome.metrics.mse = leadlag_mse(report, gt, matching);
  outcome.metrics.nmi_a = nmi(pred_a, truth_a);
  outcome.metrics.nmi_b = nmi(pred_b, truth_b);
  outcome.metrics.runtime_seconds = outcome.runtime_seconds;
  return outcome;
}

std::vector<SynthBenchRow> synth_bench(const std::vector<double>& levels,
                                       int repeats,
                                       const std::vector<TensorVariant>& variants,
                                       const SynthConfig& ranges,
                                       const RunConfig& base) {
  if (repeats < 1) throw ConfigError("repeats must be positive");
  for (double level : levels)
    if (level < 0.0 || level >= 1.0)
      throw ConfigError("noise levels must lie in [0, 1)");

  std::vector<SynthBenchRow> rows;
  for (std::size_t li = 0; li < levels.size(); ++li) {
    for (const TensorVariant variant : variants) {
      SynthBenchRow row;
      row.level = levels[li];
      row.variant = variant;
      row.repeats = repeats;

      Accumulator flow, lead, leadtime, mse, nmi_a, nmi_b, runtime;
      for (int r = 0; r < repeats; ++r) {
        SynthConfig dataset_cfg = ranges;
        dataset_cfg.noise_level = levels[li];
        // same datasets across variants at a given level
        dataset_cfg.seed = mix_seed(base.seed, 0xda7a, li, r);
        const SynthRunOutcome outcome =
            run_synth_once(dataset_cfg, base, variant);
        flow.add(outcome.metrics.flow_f1);
        lead.add(outcome.metrics.flowlead_f1);
        leadtime.add(outcome.metrics.flowleadtime_f1);
        if (outcome.metrics.mse) mse.add(*outcome.metrics.mse);
        nmi_a.add(outcome.metrics.nmi_a);
        nmi_b.add(outcome.metrics.nmi_b);
        runtime.add(outcome.runtime_seconds);
        const bool perfect =
            outcome.metrics.flow_f1 == 1.0 &&
            outcome.metrics.flowlead_f1 == 1.0 &&
            outcome.metrics.flowleadtime_f1 == 1.0 &&
            outcome.metrics.nmi_a == 1.0 && outcome.metrics.nmi_b == 1.0 &&
            outcome.metrics.mse && *outcome.metrics.mse == 0.0;
        if (perfect) ++row.perfect_runs;
      }
      row.stats.flow_f1_mean = flow.mean();
      row.stats.flow_f1_std = flow.stddev();
      row.stats.flowlead_f1_mean = lead.mean();
      row.stats.flowlead_f1_std = lead.stddev();
      row.stats.flowleadtime_f1_mean = leadtime.mean();
      row.stats.flowleadtime_f1_std = leadtime.stddev();
      row.stats.mse_mean = mse.mean();
      row.stats.mse_std = mse.stddev();
      row.stats.mse_defined = mse.n;
      row.stats.nmi_a_mean = nmi_a.mean();
      row.stats.nmi_a_std = nmi_a.stddev();
      row.stats.nmi_b_mean = nmi_b.mean();
      row.stats.nmi_b_std = nmi_b.stddev();
      row.runtime_mean = runtime.mean();
      rows.push_back(row);
    }
  }
  return rows;
}

void write_synth_csv(std::ostream& out, const std::vector<SynthBenchRow>& rows) {
  out << "level,variant,repeats,flow_f1_mean,flow_f1_std,flowlead_f1_mean,"
         "flowlead_f1_std,flowleadtime_f1_mean,flowleadtime_f1_std,mse_mean,"
         "mse_std,mse_defined,nmi_a_mean,nmi_a_std,nmi_b_mean,nmi_b_std,"
         "perfect_runs\n";
  for (const auto& r : rows) {
    out << fmt_double(r.level) << ',' << variant_name(r.variant) << ','
        << r.repeats << ',' << fmt_double(r.stats.flow_f1_mean) << ','
        << fmt_double(r.stats.flow_f1_std) << ','
        << fmt_double(r.stats.flowlead_f1_mean) << ','
        << fmt_double(r.stats.flowlead_f1_std) << ','
        << fmt_double(r.stats.flowleadtime_f1_mean) << ','
        << fmt_double(r.stats.flowleadtime_f1_std) << ','
        << fmt_double(r.stats.mse_mean) << ',' << fmt_double(r.stats.mse_std)
        << ',' << r.stats.mse_defined << ','
        << fmt_double(r.stats.nmi_a_mean) << ','
        << fmt_double(r.stats.nmi_a_std) << ','
        << fmt_double(r.stats.nmi_b_mean) << ','
        << fmt_double(r.stats.nmi_b_std) << ',' << r.perfect_runs << "\n";
  }
}

void write_synth_timing_csv(std::ostream& out,
                            const std::vector<SynthBenchRow>& rows) {
  out << "level,variant,runtime_mean_seconds\n";
  for (const auto& r : rows)
    out << fmt_double(r.level) << ',' << variant_name(r.variant) << ','
        << fmt_double(r.runtime_mean) << "\n";
}

std::vector<UcrBenchRow> ucr_bench_datasets(const std::vector<UcrDataset>& datasets,
                                            const std::vector<std::string>& methods,
                                            int runs, const RunConfig& base) {
  if (runs < 1) throw ConfigError("runs must be positive");
  for (const auto& m : methods)
    if (m != "ours") parse_baseline(m);  // validates names up front

  std::vector<UcrBenchRow> rows;
  for (const auto& ds : datasets) {
    Partition truth;
    truth.labels = ds.labels;
    truth.k = ds.k_classes;

    // seed-independent shared work
    AugmentedBipartiteGraph graph_ours, graph_b3;
    std::vector<std::vector<double>> embedding_b2;
    bool have_ours = false, have_b3 = false, have_b2 = false;

    for (const auto& method : methods) {
      UcrBenchRow row;
      row.dataset = ds.name;
      row.method = method;
      row.runs = runs;
      Accumulator acc, runtime;
      try {
        for (int r = 0; r < runs; ++r) {
          const std::uint64_t run_seed = mix_seed(base.seed, 0x0c40, r);
          const double t0 = now_seconds();
          Partition pred;
          if (method == "ours" || method == "B3" || method == "b3") {
            const bool ours = method == "ours";
            auto& graph = ours ? graph_ours : graph_b3;
            bool& have = ours ? have_ours : have_b3;
            if (!have) {
              graph = build_pairwise_graph(
                  ds.series, base.tau_max, base.bcc(),
                  ours ? AlignKind::Dtw : AlignKind::GlobalShift, base.threads);
              have = true;
            }
            SeriesClusterConfig cfg;
            cfg.tau_max = base.tau_max;
            cfg.bcc = base.bcc();
            cfg.q = base.q;
            cfg.parafac.max_iters = base.parafac_iters;
            cfg.parafac.tol = base.parafac_tol;
            cfg.restarts = base.restarts;
            cfg.seed = run_seed;
            cfg.threads = base.threads;
            pred = cluster_series_on_graph(graph, ds.k_classes, cfg);
          } else if (method == "B2" || method == "b2") {
            if (!have_b2) {
              embedding_b2 = spectral_embedding(ds.series, ds.k_classes,
                                                base.tau_max, base.threads);
              have_b2 = true;
            }
            KMeansConfig km;
            km.k = ds.k_classes;
            km.max_iters = 100;
            km.restarts = base.restarts;
            km.seed = mix_seed(run_seed, 0xb2);
            pred = kmeans(embedding_b2, km);
          } else {
            pred = run_baseline(BaselineKind::B1, ds.series, ds.k_classes,
                                run_seed, base.tau_max, base.bcc(),
                                base.threads);
          }
          runtime.add(now_seconds() - t0);
          acc.add(nmi(pred, truth));
        }
        row.nmi_mean = acc.mean();
        row.nmi_std = acc.stddev();
        row.runtime_mean = runtime.mean();
      } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<UcrBenchRow> ucr_bench(const std::vector<std::string>& dataset_paths,
                                   const std::vector<std::string>& methods,
                                   int runs, const RunConfig& base) {
  std::vector<UcrDataset> datasets;
  std::vector<UcrBenchRow> failed_rows;
  for (const auto& path : dataset_paths) {
    try {
      datasets.push_back(load_ucr(path));
    } catch (const std::exception& e) {
      for (const auto& method : methods) {
        UcrBenchRow row;
        row.dataset = path;
        row.method = method;
        row.failed = true;
        row.error = e.what();
        failed_rows.push_back(std::move(row));
      }
    }
  }
  auto rows = ucr_bench_datasets(datasets, methods, runs, base);
  rows.insert(rows.end(), failed_rows.begin(), failed_rows.end());
  return rows;
}

void write_ucr_csv(std::ostream& out, const std::vector<UcrBenchRow>& rows) {
  out << "dataset,method,runs,nmi_mean,nmi_std,status\n";
  for (const auto& r : rows) {
    std::string status = r.failed ? "failed: " + r.error : std::string("ok");
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    out << r.dataset << ',' << r.method << ',' << r.runs << ','
        << fmt_double(r.nmi_mean) << ',' << fmt_double(r.nmi_std) << ','
        << status << "\n";
  }
}

void write_ucr_timing_csv(std::ostream& out,
                          const std::vector<UcrBenchRow>& rows) {
  out << "dataset,method,runtime_mean_seconds\n";
  for (const auto& r : rows)
    out << r.dataset << ',' << r.method << ','
        << fmt_double(r.runtime_mean) << "\n";
}

}  // namespace ideaflow
