#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ideaflow/bench.hpp"
#include "ideaflow/error.hpp"
#include "ideaflow/ingest.hpp"
#include "ideaflow/pipeline.hpp"
#include "ideaflow/render.hpp"
#include "ideaflow/textio.hpp"

namespace fs = std::filesystem;
using namespace ideaflow;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitEmpty = 3;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write '" + path + "'");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read '" + path + "'");
  return in;
}

void add_pipeline_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--tau-max", cfg.tau_max, "max |offset| between aligned points");
  cmd->add_option("--rank", cfg.q, "factorization rank (0 = k_a + k_b)");
  cmd->add_option("--rank-seg", cfg.q_seg, "rank for per-pair segmentation");
  cmd->add_option("--k-t", cfg.k_t, "time clusters per idea pair");
  cmd->add_option("--threshold", cfg.threshold, "segment correlation threshold");
  cmd->add_option("--theta-local", cfg.theta_local, "posterior threshold");
  cmd->add_option("--theta-global", cfg.theta_global, "log-evidence threshold");
  cmd->add_option("--rho-stay", cfg.rho_stay, "regime self-transition prob");
  cmd->add_option("--seed", cfg.seed, "random seed");
  cmd->add_option("--restarts", cfg.restarts, "k-means restarts");
  cmd->add_option("--threads", cfg.threads, "worker threads (0 = auto)");
}

int cmd_ingest(const std::string& corpus_path, double bin_width_days,
               double rare_threshold, const std::string& stopword_path,
               const std::string& out_path) {
  IngestConfig cfg;
  cfg.bin_width_seconds = static_cast<std::int64_t>(bin_width_days * 86400.0);
  cfg.rare_threshold = rare_threshold;
  if (!stopword_path.empty()) cfg.stopwords = load_stopwords(stopword_path);

  auto in = open_in(corpus_path);
  const IngestResult result = build_group_series(in, cfg);

  auto out = open_out(out_path);
  write_series_csv(out, result.a, result.b);

  auto report = open_out(out_path + ".report.json");
  report << "{\"docs_total\":" << result.report.docs_total
         << ",\"docs_skipped_undecodable\":"
         << result.report.docs_skipped_undecodable
         << ",\"tokens_total\":" << result.report.tokens_total
         << ",\"tokens_after_filter\":" << result.report.tokens_after_filter
         << ",\"vocab_a\":" << result.report.vocab_a
         << ",\"vocab_b\":" << result.report.vocab_b
         << ",\"t\":" << result.report.t << "}\n";
  std::cerr << "ingest: " << result.report.vocab_a << "+"
            << result.report.vocab_b << " words over " << result.report.t
            << " time points -> " << out_path << "\n";
  return kExitOk;
}

int cmd_analyze(const std::string& series_path, RunConfig cfg,
                const std::string& variant, const std::string& out_path) {
  cfg.variant = parse_variant(variant);
  if (cfg.k_a < 1 || cfg.k_b < 1) {
    std::cerr << "analyze requires positive --k-a and --k-b\n";
    return kExitInput;
  }
  auto in = open_in(series_path);
  auto [a, b] = read_series_csv(in);

  const AugmentedBipartiteGraph graph =
      build_graph(a, b, cfg.dtw(), cfg.bcc(), cfg.threads);
  if (graph.edges.empty()) {
    std::cerr << "no correlated pairs\n";
    return kExitEmpty;
  }

  std::vector<std::string> tokens_a, tokens_b;
  for (const auto& ws : a.words) tokens_a.push_back(ws.word);
  for (const auto& ws : b.words) tokens_b.push_back(ws.word);
  const FlowReport report = analyze_graph(graph, cfg, tokens_a, tokens_b);

  auto out = open_out(out_path);
  write_report_json(out, report, run_config_json(cfg));
  std::cerr << "analyze: " << graph.edges.size() << " edges, "
            << report.ideas_a.size() << "+" << report.ideas_b.size()
            << " ideas -> " << out_path << "\n";
  return kExitOk;
}

int cmd_synth_bench(const std::string& levels_arg, int repeats,
                    const std::string& variants_arg, RunConfig cfg,
                    const SynthConfig& ranges, const std::string& out_path) {
  std::vector<double> levels;
  for (const auto& tok : split(levels_arg, ','))
    if (!tok.empty()) levels.push_back(std::stod(tok));
  std::vector<TensorVariant> variants;
  for (const auto& tok : split(variants_arg, ','))
    if (!tok.empty()) variants.push_back(parse_variant(tok));
  if (levels.empty() || variants.empty())
    throw ConfigError("need at least one level and one variant");

  SynthConfig base_ranges = ranges;
  base_ranges.tau_max = cfg.tau_max;

  const auto rows = synth_bench(levels, repeats, variants, base_ranges, cfg);
  auto out = open_out(out_path);
  write_synth_csv(out, rows);
  auto timing = open_out(out_path + ".timing.csv");
  write_synth_timing_csv(timing, rows);
  std::cerr << "synth-bench: " << rows.size() << " rows -> " << out_path
            << "\n";
  return kExitOk;
}

int cmd_ucr_bench(const std::string& data_path, const std::string& methods_arg,
                  int runs, RunConfig cfg, const std::string& out_path) {
  std::vector<std::string> methods;
  for (const auto& tok : split(methods_arg, ','))
    if (!tok.empty()) {
      if (tok != "ours") parse_baseline(tok);  // usage error on bad names
      methods.push_back(tok);
    }
  if (methods.empty()) throw ConfigError("no methods given");

  std::vector<std::string> datasets;
  const fs::path root(data_path);
  if (!fs::exists(root)) throw FormatError("no such path '" + data_path + "'");
  if (fs::is_directory(root)) {
    bool direct = false;
    for (const auto& entry : fs::directory_iterator(root))
      if (entry.path().filename().string().find("_TRAIN") != std::string::npos)
        direct = true;
    if (direct) {
      datasets.push_back(root.string());
    } else {
      for (const auto& entry : fs::directory_iterator(root))
        if (entry.is_directory()) datasets.push_back(entry.path().string());
      std::sort(datasets.begin(), datasets.end());
    }
  } else {
    datasets.push_back(root.string());
  }
  if (datasets.empty()) throw FormatError("no datasets under '" + data_path + "'");

  const auto rows = ucr_bench(datasets, methods, runs, cfg);
  auto out = open_out(out_path);
  write_ucr_csv(out, rows);
  auto timing = open_out(out_path + ".timing.csv");
  write_ucr_timing_csv(timing, rows);
  std::cerr << "ucr-bench: " << rows.size() << " rows -> " << out_path << "\n";
  return kExitOk;
}

int cmd_render(const std::string& report_path, const std::string& out_path) {
  auto in = open_in(report_path);
  const FlowReport report = read_report_json(in);
  auto out = open_out(out_path);
  out << render_flow_svg(report);
  std::cerr << "render: " << report.ideas_a.size() + report.ideas_b.size()
            << " stripes -> " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"idea flow toolkit: lead-lag detection between word groups"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string variant = "x3";

  // ingest
  auto* ingest = app.add_subcommand("ingest", "corpus JSONL -> series CSV");
  std::string corpus_path, stopword_path, out_path = "series.csv";
  double bin_width_days = 2.0, rare_threshold = 5.0;
  ingest->add_option("corpus", corpus_path, "JSON-lines corpus")->required();
  ingest->add_option("--bin-width", bin_width_days, "bin width in days");
  ingest->add_option("--rare-threshold", rare_threshold,
                     "min average occurrences per day");
  ingest->add_option("--stopwords", stopword_path, "stopword file");
  ingest->add_option("--out", out_path, "output CSV path");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "series CSV -> flow report");
  std::string series_path, report_out = "report.json";
  analyze->add_option("series", series_path, "series CSV")->required();
  analyze->add_option("--k-a", cfg.k_a, "ideas in group A")->required();
  analyze->add_option("--k-b", cfg.k_b, "ideas in group B")->required();
  analyze->add_option("--variant", variant, "tensor encoding: x1, x2 or x3");
  add_pipeline_flags(analyze, cfg);
  analyze->add_option("--out", report_out, "output report path");

  // synth-bench
  auto* synth = app.add_subcommand("synth-bench",
                                   "seeded synthetic benchmark grid");
  std::string levels = "0,0.2,0.4,0.6,0.8", variants = "x3";
  int repeats = 50;
  std::string synth_out = "synth_bench.csv";
  SynthConfig ranges;
  synth->add_option("--levels", levels, "comma-separated noise levels");
  synth->add_option("--repeats", repeats, "datasets per level");
  synth->add_option("--variants", variants, "comma-separated tensor variants");
  synth->add_option("--t", ranges.t, "time points per dataset");
  add_pipeline_flags(synth, cfg);
  synth->add_option("--out", synth_out, "output CSV path");

  // ucr-bench
  auto* ucr = app.add_subcommand("ucr-bench", "NMI benchmark on UCR-format data");
  std::string ucr_path, methods = "ours,B1";
  int runs = 100;
  std::string ucr_out = "ucr_bench.csv";
  ucr->add_option("data", ucr_path, "dataset file or directory")->required();
  ucr->add_option("--methods", methods, "comma-separated: ours,B1,B2,B3");
  ucr->add_option("--runs", runs, "seeded runs per dataset");
  add_pipeline_flags(ucr, cfg);
  ucr->add_option("--out", ucr_out, "output CSV path");

  // render
  auto* render = app.add_subcommand("render", "flow report -> SVG diagram");
  std::string render_in, svg_out = "flows.svg";
  render->add_option("report", render_in, "flow report JSON")->required();
  render->add_option("--out", svg_out, "output SVG path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitInput;
  }

  try {
    if (ingest->parsed())
      return cmd_ingest(corpus_path, bin_width_days, rare_threshold,
                        stopword_path, out_path);
    if (analyze->parsed())
      return cmd_analyze(series_path, cfg, variant, report_out);
    if (synth->parsed())
      return cmd_synth_bench(levels, repeats, variants, cfg, ranges, synth_out);
    if (ucr->parsed())
      return cmd_ucr_bench(ucr_path, methods, runs, cfg, ucr_out);
    if (render->parsed()) return cmd_render(render_in, svg_out);
  } catch (const EmptyTensorError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEmpty;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
