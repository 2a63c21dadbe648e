// rtaudit: single-trial classification audit of RT congruency experiments.
//
//   rtaudit analyze   --input trials.csv      classifiers, t-test, effect sizes
//   rtaudit simulate  [grid flags]            significance vs. classifiability sweep
//   rtaudit histogram --input hist.csv        accuracy from binned distributions
//   rtaudit plot      --style ...             SVG distribution figures
//
// Exit codes: 0 ok, 1 usage, 2 I/O, 3 parse error, 4 invariant violation,
// 5 degenerate or empty data, 6 domain error, 7 other failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rtaudit/rtaudit.hpp"

namespace fs = std::filesystem;
using namespace rtaudit;

namespace {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kIo = 2,
  kParse = 3,
  kInvariant = 4,
  kDegenerate = 5,
  kDomain = 6,
  kOther = 7,
};

void write_file(const fs::path& path, const std::string& bytes) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << bytes;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<ReportFormat> parse_formats(const std::vector<std::string>& names) {
  std::vector<ReportFormat> out;
  for (const auto& n : names) out.push_back(parse_report_format(n));
  return out;
}

struct AnalyzeArgs {
  std::string input;
  std::string output_dir = "rtaudit-out";
  std::vector<std::string> formats{"json", "csv", "text"};
  std::uint64_t seed = 1;
  double train_fraction = 0.5;
  std::size_t repetitions = 10;
  double alpha = 0.05;
  std::size_t workers = 1;
  std::optional<double> rt_min, rt_max;
  std::string column_map;
};

struct SimulateArgs {
  std::vector<std::size_t> participants{66};
  std::vector<std::size_t> trials{180};
  std::vector<double> delta_ms{4.4};
  double sigma_ms = 146.5;
  double base_ms = 650.0;
  std::string family = "lognormal";
  std::size_t replications = 500;
  std::uint64_t seed = 1;
  double alpha = 0.05;
  std::size_t workers = 1;
  double between_sd_ms = between_sd_for_sem(2.0, 146.5, 180, 66);
  double train_fraction = 0.5;
  std::size_t repetitions = 10;
  std::string output_dir = "rtaudit-out";
  std::vector<std::string> formats{"json", "csv"};
  std::string dump_trials;
};

struct HistogramArgs {
  std::string input;
  std::string output_dir = "rtaudit-out";
  std::vector<std::string> formats{"json", "csv", "text"};
  bool raw_counts = false;
};

struct PlotArgs {
  std::string style;
  std::string input;
  std::string participant;
  std::string family = "lognormal";
  double delta_ms = 4.4;
  double sigma_ms = 146.5;
  double base_ms = 650.0;
  double trials = 180;
  double participants = 66;
  std::string output_dir = "rtaudit-out";
  std::string column_map;
  std::optional<double> rt_min, rt_max;
};

const std::vector<std::string> kFormatNames{"json", "csv", "text"};

IngestOptions ingest_options(const std::optional<double>& rt_min, const std::optional<double>& rt_max,
                             const std::string& column_map) {
  IngestOptions o;
  o.rt_min_ms = rt_min;
  o.rt_max_ms = rt_max;
  o.columns = parse_column_map(column_map);
  return o;
}

int cmd_analyze(const AnalyzeArgs& a) {
  const auto ds = ingest_trials_file(a.input, ingest_options(a.rt_min, a.rt_max, a.column_map));
  AnalysisConfig cfg;
  cfg.protocol = {a.train_fraction, a.repetitions, a.seed};
  cfg.alpha = a.alpha;
  cfg.rt_min_ms = a.rt_min;
  cfg.rt_max_ms = a.rt_max;
  cfg.column_map = a.column_map;
  cfg.workers = a.workers;
  const auto report = build_audit_report(ds, cfg);
  for (auto f : parse_formats(a.formats))
    write_file(fs::path(a.output_dir) / ("report." + std::string(file_extension(f))),
               emit_report(report, f));
  std::cout << classifier_table(report.median, report.trained, report.upper);
  std::cout << "\nmean difference " << detail::fmt("%.2f ms", report.mean_diff_ms)
            << ", within-subject SD " << detail::fmt("%.2f ms", report.mean_pooled_sd_ms) << ", "
            << detail::t_line(report.rt_test) << "\n";
  return kOk;
}

int cmd_simulate(const SimulateArgs& a) {
  RtTargets targets{parse_family(a.family), a.base_ms, a.delta_ms.front(), a.sigma_ms};
  auto cfg = make_config(targets);
  cfg.participants = a.participants.front();
  cfg.trials_per_condition = a.trials.front();
  cfg.replications = a.replications;
  cfg.seed = a.seed;
  cfg.alpha = a.alpha;
  cfg.workers = a.workers;
  cfg.between_subject_sd_ms = a.between_sd_ms;
  cfg.protocol = {a.train_fraction, a.repetitions, a.seed};
  cfg.validate();

  if (!a.dump_trials.empty()) write_file(a.dump_trials, emit_trials_csv(synthesize_dataset(cfg, 0)));

  const auto result = sweep(cfg, a.participants, a.trials, a.delta_ms);
  for (auto f : parse_formats(a.formats)) {
    const fs::path dir(a.output_dir);
    switch (f) {
      case ReportFormat::Json: write_file(dir / "sweep.json", sweep_to_json(result).dump(2) + "\n"); break;
      case ReportFormat::Csv: write_file(dir / "sweep.csv", sweep_csv(result)); break;
      case ReportFormat::Text: {
        std::string text;
        for (const auto& c : result.cells) text += sweep_cell_text(c);
        write_file(dir / "sweep.txt", text);
        break;
      }
    }
  }
  std::cout << "replications per cell: " << cfg.replications << ", seed " << cfg.seed
            << ", between-subject SD " << detail::fmt("%.3f ms", cfg.between_subject_sd_ms)
            << ", alpha " << cfg.alpha << "\n";
  for (const auto& c : result.cells) std::cout << sweep_cell_text(c);
  return kOk;
}

int cmd_histogram(const HistogramArgs& a) {
  const auto h = ingest_histogram_file(a.input);
  const auto report = build_histogram_report(
      h, a.raw_counts ? HistogramWeighting::RawCounts : HistogramWeighting::EqualPriors, a.input);
  for (auto f : parse_formats(a.formats))
    write_file(fs::path(a.output_dir) / ("histogram." + std::string(file_extension(f))),
               emit_histogram_report(report, f));
  std::cout << emit_histogram_report(report, ReportFormat::Text);
  return kOk;
}

int cmd_plot(const PlotArgs& a) {
  const auto style = parse_plot_style(a.style);
  const auto family = parse_family(a.family);
  std::string svg;
  if (a.input.empty()) {
    const auto model = matched_model({family, a.base_ms, a.delta_ms, a.sigma_ms});
    svg = emit_distribution_plot(ModelSource{model, a.trials, a.participants}, style, family);
  } else {
    auto ds = ingest_trials_file(a.input, ingest_options(a.rt_min, a.rt_max, a.column_map));
    if (a.participant.empty()) {
      svg = emit_distribution_plot(std::move(ds), style, family);
    } else {
      auto it = std::ranges::find(ds.participants, a.participant, &ParticipantRecord::participant_id);
      if (it == ds.participants.end())
        throw DomainError("participant '" + a.participant + "' not found in " + a.input);
      svg = emit_distribution_plot(*it, style, family);
    }
  }
  const auto path = fs::path(a.output_dir) / (a.style + ".svg");
  write_file(path, svg);
  std::cout << "wrote " << path.string() << "\n";
  return kOk;
}

void add_rt_filter(CLI::App* cmd, std::optional<double>& rt_min, std::optional<double>& rt_max,
                   std::string& column_map) {
  cmd->add_option("--rt-min", rt_min, "Drop trials with RT below this value (ms)");
  cmd->add_option("--rt-max", rt_max, "Drop trials with RT above this value (ms)");
  cmd->add_option("--column-map", column_map,
                  "Map input columns/labels, e.g. participant_id=Subj,condition=Cond,rt_ms=RT,"
                  "congruent=c|1,incongruent=i|2 (rt_s=... for seconds)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-trial classification audit for reaction-time congruency experiments",
               "rtaudit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Classify single trials and run the conventional tests");
  analyze->add_option("--input", an.input, "Trial CSV (participant_id,condition,rt_ms)")
      ->required()
      ->check(CLI::ExistingFile);
  analyze->add_option("--output-dir", an.output_dir, "Directory for report files")->capture_default_str();
  analyze->add_option("--format", an.formats, "Report formats: json|csv|text")
      ->delimiter(',')
      ->check(CLI::IsMember(kFormatNames))
      ->capture_default_str();
  analyze->add_option("--seed", an.seed, "Seed for the train/test splits")->capture_default_str();
  analyze->add_option("--train-fraction", an.train_fraction, "Training share of each condition")
      ->capture_default_str();
  analyze->add_option("--repetitions", an.repetitions, "Random splits per participant")
      ->capture_default_str();
  analyze->add_option("--alpha", an.alpha, "Significance level (two-sided)")->capture_default_str();
  analyze->add_option("--workers", an.workers, "Parallel workers; output is identical for any value")
      ->capture_default_str();
  add_rt_filter(analyze, an.rt_min, an.rt_max, an.column_map);

  SimulateArgs sm;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo sweep of significance vs. classifiability");
  simulate->add_option("--participants", sm.participants, "Participant counts (comma list)")
      ->delimiter(',')
      ->capture_default_str();
  simulate->add_option("--trials", sm.trials, "Trials per condition (comma list)")
      ->delimiter(',')
      ->capture_default_str();
  simulate->add_option("--delta-ms,--delta", sm.delta_ms, "Mean congruency effects in ms (comma list)")
      ->delimiter(',')
      ->capture_default_str();
  simulate->add_option("--sigma-ms", sm.sigma_ms, "Within-subject SD in ms")->capture_default_str();
  simulate->add_option("--base-ms", sm.base_ms, "Mean congruent RT in ms")->capture_default_str();
  simulate->add_option("--family", sm.family, "RT distribution: normal|lognormal")
      ->check(CLI::IsMember({"normal", "lognormal"}))
      ->capture_default_str();
  simulate->add_option("--replications", sm.replications, "Simulated experiments per cell")
      ->capture_default_str();
  simulate->add_option("--seed", sm.seed, "Root seed")->capture_default_str();
  simulate->add_option("--alpha", sm.alpha, "Significance level (two-sided)")->capture_default_str();
  simulate->add_option("--workers", sm.workers, "Parallel workers; output is identical for any value")
      ->capture_default_str();
  simulate->add_option("--between-sd-ms", sm.between_sd_ms,
                       "SD of per-participant shifts of each class mean (ms)")
      ->capture_default_str();
  simulate->add_option("--train-fraction", sm.train_fraction, "Training share of each condition")
      ->capture_default_str();
  simulate->add_option("--repetitions", sm.repetitions, "Random splits per participant")
      ->capture_default_str();
  simulate->add_option("--output-dir", sm.output_dir, "Directory for sweep files")->capture_default_str();
  simulate->add_option("--format", sm.formats, "Sweep formats: json|csv|text")
      ->delimiter(',')
      ->check(CLI::IsMember(kFormatNames))
      ->capture_default_str();
  simulate->add_option("--dump-trials", sm.dump_trials,
                       "Also write replication 0 of the first cell as a trial CSV");

  HistogramArgs hg;
  auto* histogram = app.add_subcommand("histogram", "Accuracy bounds from binned RT distributions");
  histogram->add_option("--input", hg.input, "Histogram CSV (edge_ms,congruent,incongruent)")
      ->required()
      ->check(CLI::ExistingFile);
  histogram->add_option("--output-dir", hg.output_dir, "Directory for result files")->capture_default_str();
  histogram->add_option("--format", hg.formats, "Result formats: json|csv|text")
      ->delimiter(',')
      ->check(CLI::IsMember(kFormatNames))
      ->capture_default_str();
  histogram->add_flag("--raw-counts", hg.raw_counts, "Weight classes by raw counts instead of equal priors");

  PlotArgs pl;
  auto* plot = app.add_subcommand("plot", "SVG figures of trial-level and mean-level distributions");
  plot->add_option("--style", pl.style, "trial_distributions|mean_sem_distributions")
      ->required()
      ->check(CLI::IsMember({"trial_distributions", "mean_sem_distributions"}));
  plot->add_option("--input", pl.input, "Trial CSV; without it the model flags are plotted")
      ->check(CLI::ExistingFile);
  plot->add_option("--participant", pl.participant, "Plot one participant instead of the whole dataset");
  plot->add_option("--family", pl.family, "Model family (or fit family for data): normal|lognormal")
      ->check(CLI::IsMember({"normal", "lognormal"}))
      ->capture_default_str();
  plot->add_option("--delta-ms,--delta", pl.delta_ms, "Model mean difference in ms")->capture_default_str();
  plot->add_option("--sigma-ms", pl.sigma_ms, "Model within-subject SD in ms")->capture_default_str();
  plot->add_option("--base-ms", pl.base_ms, "Model mean congruent RT in ms")->capture_default_str();
  plot->add_option("--trials", pl.trials, "Trials per condition for the model SEM")->capture_default_str();
  plot->add_option("--participants", pl.participants, "Participants for the model SEM")
      ->capture_default_str();
  plot->add_option("--output-dir", pl.output_dir, "Directory for the SVG file")->capture_default_str();
  add_rt_filter(plot, pl.rt_min, pl.rt_max, pl.column_map);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    // A missing --input file is an I/O problem, not a usage problem.
    const std::string what = e.what();
    app.exit(e);
    return what.find("does not exist") != std::string::npos ? kIo : kUsage;
  }

  try {
    if (*analyze) return cmd_analyze(an);
    if (*simulate) return cmd_simulate(sm);
    if (*histogram) return cmd_histogram(hg);
    if (*plot) return cmd_plot(pl);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  } catch (const InvariantViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvariant;
  } catch (const DegenerateData& e) {
    std::cerr << "error: degenerate data: " << e.what() << "\n";
    return kDegenerate;
  } catch (const EmptyInput& e) {
    std::cerr << "error: empty input: " << e.what() << "\n";
    return kDegenerate;
  } catch (const EmptyHistogram& e) {
    std::cerr << "error: empty histogram: " << e.what() << "\n";
    return kDegenerate;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
  return kUsage;
}
