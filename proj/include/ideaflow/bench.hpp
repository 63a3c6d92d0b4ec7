#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ideaflow/eval.hpp"
#include "ideaflow/pipeline.hpp"
#include "ideaflow/synth.hpp"

namespace ideaflow {

struct MetricStats {
  double flow_f1_mean = 0.0, flow_f1_std = 0.0;
  double flowlead_f1_mean = 0.0, flowlead_f1_std = 0.0;
  double flowleadtime_f1_mean = 0.0, flowleadtime_f1_std = 0.0;
  double mse_mean = 0.0, mse_std = 0.0;
  long mse_defined = 0;  // runs where MSE had support
  double nmi_a_mean = 0.0, nmi_a_std = 0.0;
  double nmi_b_mean = 0.0, nmi_b_std = 0.0;
};

struct SynthBenchRow {
  double level = 0.0;
  TensorVariant variant = TensorVariant::X3;
  int repeats = 0;
  MetricStats stats;
  double runtime_mean = 0.0;  // wall clock; reported separately from metrics
  // counts of exact round-trips, used by the acceptance gate
  long perfect_runs = 0;
};

// One pipeline run per (level, variant, repeat); dataset seeds derive from
// (seed, level index, repeat) so the grid is reproducible and parallel-safe.
std::vector<SynthBenchRow> synth_bench(const std::vector<double>& levels,
                                       int repeats,
                                       const std::vector<TensorVariant>& variants,
                                       const SynthConfig& ranges,
                                       const RunConfig& base);

// Metrics only; byte-stable across reruns.
void write_synth_csv(std::ostream& out, const std::vector<SynthBenchRow>& rows);
// Wall-clock columns; excluded from determinism comparisons.
void write_synth_timing_csv(std::ostream& out,
                            const std::vector<SynthBenchRow>& rows);

struct UcrBenchRow {
  std::string dataset;
  std::string method;  // ours | B1 | B2 | B3
  int runs = 0;
  double nmi_mean = 0.0;
  double nmi_std = 0.0;
  bool failed = false;
  std::string error;
  double runtime_mean = 0.0;
};

// Per dataset x method: NMI mean and std over seeded runs. Seed-independent
// work (pairwise graph, spectral embedding) is computed once per dataset.
std::vector<UcrBenchRow> ucr_bench(const std::vector<std::string>& dataset_paths,
                                   const std::vector<std::string>& methods,
                                   int runs, const RunConfig& base);
std::vector<UcrBenchRow> ucr_bench_datasets(const std::vector<UcrDataset>& datasets,
                                            const std::vector<std::string>& methods,
                                            int runs, const RunConfig& base);

void write_ucr_csv(std::ostream& out, const std::vector<UcrBenchRow>& rows);
void write_ucr_timing_csv(std::ostream& out,
                          const std::vector<UcrBenchRow>& rows);

// Single synthetic end-to-end run, shared by the CLI and the acceptance gate.
struct SynthRunOutcome {
  MetricReport metrics;
  double runtime_seconds = 0.0;
};
SynthRunOutcome run_synth_once(const SynthConfig& dataset_cfg,
                               const RunConfig& base, TensorVariant variant);

}  // namespace ideaflow
