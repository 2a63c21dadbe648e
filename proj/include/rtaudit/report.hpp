#pragma once

// Audit reports for trial datasets and simulation sweeps. Every emitter is
// deterministic: JSON keys are sorted, numbers print round-trippably, and no
// timestamps or host details are included.

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rtaudit/classify.hpp"
#include "rtaudit/core.hpp"
#include "rtaudit/csv.hpp"
#include "rtaudit/histogram.hpp"
#include "rtaudit/inferstats.hpp"
#include "rtaudit/simulate.hpp"
#include "rtaudit/version.hpp"

namespace rtaudit {

enum class ReportFormat { Json, Csv, Text };

inline ReportFormat parse_report_format(std::string_view s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "csv") return ReportFormat::Csv;
  if (s == "text") return ReportFormat::Text;
  throw DomainError("unknown report format '" + std::string(s) + "'");
}

inline constexpr std::string_view file_extension(ReportFormat f) noexcept {
  switch (f) {
    case ReportFormat::Json: return "json";
    case ReportFormat::Csv: return "csv";
    case ReportFormat::Text: return "txt";
  }
  return "";
}

struct AnalysisConfig {
  SplitProtocol protocol;
  double alpha = 0.05;
  std::optional<double> rt_min_ms;
  std::optional<double> rt_max_ms;
  std::string column_map;
  std::size_t workers = 1;  // not echoed: output is identical for every value
};

struct AuditReport {
  std::string toolkit_version = kVersion;
  int format_version = kFormatVersion;

  // dataset
  std::string fingerprint;  // sha256 of the ingested bytes
  std::string source;
  std::size_t participants = 0;
  std::size_t trials = 0;
  std::size_t dropped_count = 0;
  double mean_congruent_ms = 0.0;
  double mean_incongruent_ms = 0.0;
  double mean_diff_ms = 0.0;
  double mean_pooled_sd_ms = 0.0;
  double grand_pooled_sd_ms = 0.0;
  double mean_trials_per_condition = 0.0;

  AccuracySummary median;
  AccuracySummary trained;
  AccuracySummary upper;
  std::optional<PairedTestResult> median_vs_chance;
  std::optional<PairedTestResult> trained_vs_chance;
  std::optional<PairedTestResult> upper_vs_chance;

  PairedTestResult rt_test;  // on per-participant mean RT differences
  bool significant = false;
  EffectSizeLedger effects;
  double predicted_sem_ms = 0.0;

  AnalysisConfig config;
};

inline AuditReport build_audit_report(const Dataset& ds, const AnalysisConfig& config) {
  AuditReport r;
  r.config = config;
  auto meta = [&](const char* key) {
    auto it = ds.metadata.find(key);
    return it == ds.metadata.end() ? std::string() : it->second;
  };
  r.fingerprint = meta("sha256");
  r.source = meta("source");
  if (const auto d = meta("dropped_count"); !d.empty()) r.dropped_count = std::stoul(d);

  const auto summary = summarize_dataset(ds);
  r.participants = summary.participants;
  for (const auto& p : ds.participants) r.trials += p.trials.size();
  r.mean_congruent_ms = summary.mean_congruent_ms;
  r.mean_incongruent_ms = summary.mean_incongruent_ms;
  r.mean_diff_ms = summary.mean_diff_ms;
  r.mean_pooled_sd_ms = summary.mean_pooled_sd_ms;
  r.grand_pooled_sd_ms = summary.grand_pooled_sd_ms;
  r.mean_trials_per_condition = summary.mean_trials_per_condition;

  auto cls = classify_dataset(ds, config.protocol, config.workers);
  r.median = std::move(cls.median);
  r.trained = std::move(cls.trained);
  r.upper = std::move(cls.upper);

  r.rt_test = paired_t_test(ds);
  r.significant = !r.rt_test.degenerate ? r.rt_test.p < config.alpha : r.rt_test.t != 0.0;
  r.effects = effect_sizes(ds);
  r.predicted_sem_ms = predict_sem(summary.mean_pooled_sd_ms, summary.mean_trials_per_condition,
                                   static_cast<double>(summary.participants));

  auto chance = [](const AccuracySummary& s) -> std::optional<PairedTestResult> {
    return accuracy_vs_chance_test(s);
  };
  r.median_vs_chance = chance(r.median);
  r.trained_vs_chance = chance(r.trained);
  r.upper_vs_chance = chance(r.upper);
  return r;
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {

using nlohmann::json;

// JSON has no infinities; they are written as strings.
inline json number(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
  return v;
}

inline double number_from(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "NaN") return std::numeric_limits<double>::quiet_NaN();
    if (s == "Infinity") return std::numeric_limits<double>::infinity();
    if (s == "-Infinity") return -std::numeric_limits<double>::infinity();
    throw ParseError("<json>", 0, "bad number string '" + s + "'");
  }
  return j.get<double>();
}

inline json optional_number(const std::optional<double>& v) { return v ? number(*v) : json(nullptr); }

inline std::optional<double> optional_number_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return number_from(j);
}

inline json to_json(const PairedTestResult& t) {
  return json{{"t", number(t.t)},         {"df", number(t.df)},
              {"p", number(t.p)},         {"mean_diff", number(t.mean_diff)},
              {"sem_diff", number(t.sem_diff)}, {"n", t.n},
              {"degenerate", t.degenerate}};
}

inline PairedTestResult test_from_json(const json& j) {
  PairedTestResult t;
  t.t = number_from(j.at("t"));
  t.df = number_from(j.at("df"));
  t.p = number_from(j.at("p"));
  t.mean_diff = number_from(j.at("mean_diff"));
  t.sem_diff = number_from(j.at("sem_diff"));
  t.n = j.at("n").get<std::size_t>();
  t.degenerate = j.at("degenerate").get<bool>();
  return t;
}

inline json to_json(const std::optional<PairedTestResult>& t) {
  return t ? to_json(*t) : json(nullptr);
}

inline std::optional<PairedTestResult> optional_test_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return test_from_json(j);
}

inline json to_json(const ClassifierOutcome& o) {
  json reps = json::array();
  for (double a : o.repetition_accuracies) reps.push_back(number(a));
  return json{{"participant_id", o.participant_id},
              {"accuracy", number(o.accuracy)},
              {"threshold_ms", optional_number(o.threshold_ms)},
              {"orientation", std::string(to_string(o.orientation))},
              {"n_trials_evaluated", o.n_trials_evaluated},
              {"repetition_accuracies", reps}};
}

inline ClassifierOutcome outcome_from_json(const json& j) {
  ClassifierOutcome o;
  o.participant_id = j.at("participant_id").get<std::string>();
  o.accuracy = number_from(j.at("accuracy"));
  o.threshold_ms = optional_number_from(j.at("threshold_ms"));
  o.orientation = j.at("orientation").get<std::string>() == "fast_is_congruent"
                      ? Orientation::FastIsCongruent
                      : Orientation::FastIsIncongruent;
  o.n_trials_evaluated = j.at("n_trials_evaluated").get<std::size_t>();
  for (const auto& a : j.at("repetition_accuracies")) o.repetition_accuracies.push_back(number_from(a));
  return o;
}

inline json to_json(const AccuracySummary& s) {
  json per = json::array();
  for (const auto& o : s.per_participant) per.push_back(to_json(o));
  return json{{"mean_accuracy", number(s.mean_accuracy)},
              {"sd_accuracy", number(s.sd_accuracy)},
              {"sd_defined", s.sd_defined},
              {"per_participant", per}};
}

inline AccuracySummary summary_from_json(const json& j) {
  AccuracySummary s;
  s.mean_accuracy = number_from(j.at("mean_accuracy"));
  s.sd_accuracy = number_from(j.at("sd_accuracy"));
  s.sd_defined = j.at("sd_defined").get<bool>();
  for (const auto& o : j.at("per_participant")) s.per_participant.push_back(outcome_from_json(o));
  return s;
}

inline json to_json(const EffectSizeLedger& e) {
  json d = json::array();
  for (double v : e.per_participant_d) d.push_back(number(v));
  return json{{"per_participant_d", d},
              {"d_across", number(e.d_across)},
              {"d_across_defined", e.d_across_defined},
              {"d_across_definition", "mean(d_i) / sd(d_i)"},
              {"snr", number(e.snr)},
              {"snr_ratio", number(e.snr_ratio)},
              {"mean_diff_ms", number(e.mean_diff_ms)},
              {"mean_within_sd_ms", number(e.mean_within_sd_ms)},
              {"test_on_d", to_json(e.test_on_d)}};
}

inline EffectSizeLedger effects_from_json(const json& j) {
  EffectSizeLedger e;
  for (const auto& v : j.at("per_participant_d")) e.per_participant_d.push_back(number_from(v));
  e.d_across = number_from(j.at("d_across"));
  e.d_across_defined = j.at("d_across_defined").get<bool>();
  e.snr = number_from(j.at("snr"));
  e.snr_ratio = number_from(j.at("snr_ratio"));
  e.mean_diff_ms = number_from(j.at("mean_diff_ms"));
  e.mean_within_sd_ms = number_from(j.at("mean_within_sd_ms"));
  e.test_on_d = test_from_json(j.at("test_on_d"));
  return e;
}

}  // namespace detail

inline nlohmann::json report_to_json(const AuditReport& r) {
  using detail::json;
  using detail::number;
  using detail::to_json;
  json j;
  j["format_version"] = r.format_version;
  j["toolkit_version"] = r.toolkit_version;
  j["dataset"] = {{"fingerprint_sha256", r.fingerprint},
                  {"source", r.source},
                  {"participants", r.participants},
                  {"trials", r.trials},
                  {"dropped_count", r.dropped_count},
                  {"mean_congruent_ms", number(r.mean_congruent_ms)},
                  {"mean_incongruent_ms", number(r.mean_incongruent_ms)},
                  {"mean_diff_ms", number(r.mean_diff_ms)},
                  {"mean_pooled_sd_ms", number(r.mean_pooled_sd_ms)},
                  {"grand_pooled_sd_ms", number(r.grand_pooled_sd_ms)},
                  {"mean_trials_per_condition", number(r.mean_trials_per_condition)}};
  j["classifiers"] = {{"median", to_json(r.median)},
                      {"trained", to_json(r.trained)},
                      {"upper_bound", to_json(r.upper)}};
  j["accuracy_vs_chance"] = {{"median", to_json(r.median_vs_chance)},
                             {"trained", to_json(r.trained_vs_chance)},
                             {"upper_bound", to_json(r.upper_vs_chance)}};
  j["rt_test"] = to_json(r.rt_test);
  j["significant"] = r.significant;
  j["effect_sizes"] = to_json(r.effects);
  j["predicted_sem_ms"] = number(r.predicted_sem_ms);
  j["config"] = {{"seed", r.config.protocol.seed},
                 {"train_fraction", number(r.config.protocol.train_fraction)},
                 {"repetitions", r.config.protocol.repetitions},
                 {"alpha", number(r.config.alpha)},
                 {"rt_min_ms", detail::optional_number(r.config.rt_min_ms)},
                 {"rt_max_ms", detail::optional_number(r.config.rt_max_ms)},
                 {"column_map", r.config.column_map}};
  return j;
}

inline AuditReport report_from_json(const nlohmann::json& j) {
  using detail::number_from;
  AuditReport r;
  r.format_version = j.at("format_version").get<int>();
  r.toolkit_version = j.at("toolkit_version").get<std::string>();
  const auto& d = j.at("dataset");
  r.fingerprint = d.at("fingerprint_sha256").get<std::string>();
  r.source = d.at("source").get<std::string>();
  r.participants = d.at("participants").get<std::size_t>();
  r.trials = d.at("trials").get<std::size_t>();
  r.dropped_count = d.at("dropped_count").get<std::size_t>();
  r.mean_congruent_ms = number_from(d.at("mean_congruent_ms"));
  r.mean_incongruent_ms = number_from(d.at("mean_incongruent_ms"));
  r.mean_diff_ms = number_from(d.at("mean_diff_ms"));
  r.mean_pooled_sd_ms = number_from(d.at("mean_pooled_sd_ms"));
  r.grand_pooled_sd_ms = number_from(d.at("grand_pooled_sd_ms"));
  r.mean_trials_per_condition = number_from(d.at("mean_trials_per_condition"));
  const auto& c = j.at("classifiers");
  r.median = detail::summary_from_json(c.at("median"));
  r.trained = detail::summary_from_json(c.at("trained"));
  r.upper = detail::summary_from_json(c.at("upper_bound"));
  const auto& ch = j.at("accuracy_vs_chance");
  r.median_vs_chance = detail::optional_test_from_json(ch.at("median"));
  r.trained_vs_chance = detail::optional_test_from_json(ch.at("trained"));
  r.upper_vs_chance = detail::optional_test_from_json(ch.at("upper_bound"));
  r.rt_test = detail::test_from_json(j.at("rt_test"));
  r.significant = j.at("significant").get<bool>();
  r.effects = detail::effects_from_json(j.at("effect_sizes"));
  r.predicted_sem_ms = number_from(j.at("predicted_sem_ms"));
  const auto& cfg = j.at("config");
  r.config.protocol.seed = cfg.at("seed").get<std::uint64_t>();
  r.config.protocol.train_fraction = number_from(cfg.at("train_fraction"));
  r.config.protocol.repetitions = cfg.at("repetitions").get<std::size_t>();
  r.config.alpha = number_from(cfg.at("alpha"));
  r.config.rt_min_ms = detail::optional_number_from(cfg.at("rt_min_ms"));
  r.config.rt_max_ms = detail::optional_number_from(cfg.at("rt_max_ms"));
  r.config.column_map = cfg.at("column_map").get<std::string>();
  return r;
}

// ---------------------------------------------------------------------------
// Text and CSV

namespace detail {

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

inline std::string pct(double v) { return fmt("%.2f%%", 100.0 * v); }

inline std::string p_value(double p) { return p < 0.0001 ? fmt("%.2e", p) : fmt("%.4f", p); }

inline std::string t_line(const PairedTestResult& t) {
  std::string s = "t(" + std::to_string(t.n > 0 ? t.n - 1 : 0) + ") = " + fmt("%.3f", t.t) +
                  ", p = " + p_value(t.p);
  if (t.degenerate) s += " [degenerate: zero SD]";
  return s;
}

inline std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

inline std::string lpad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

}  // namespace detail

// The three-classifier table: method, mean(accuracy), std(accuracy).
inline std::string classifier_table(const AccuracySummary& median, const AccuracySummary& trained,
                                    const AccuracySummary& upper) {
  using detail::lpad;
  using detail::pad;
  using detail::pct;
  std::string out;
  auto row = [&](const std::string& name, const AccuracySummary& s) {
    out += pad(name, 44) + lpad(pct(s.mean_accuracy), 16) +
           lpad(s.sd_defined ? pct(s.sd_accuracy) : std::string("n/a"), 16) + "\n";
  };
  out += pad("Method", 44) + lpad("mean(accuracy)", 16) + lpad("std(accuracy)", 16) + "\n";
  out += std::string(76, '-') + "\n";
  row("(i) Median classifier (model: lognormal)", median);
  row("    Median classifier (model: normal)", median);
  row("(ii) Trained classifier (model-free)", trained);
  out += std::string(76, '-') + "\n";
  row("(iii) Over-optimistic upper bound", upper);
  return out;
}

inline std::string report_text(const AuditReport& r) {
  using detail::fmt;
  std::string out;
  out += "rtaudit " + r.toolkit_version + " audit report (format_version " +
         std::to_string(r.format_version) + ")\n";
  out += "source: " + r.source + "\n";
  out += "sha256: " + r.fingerprint + "\n";
  out += "participants: " + std::to_string(r.participants) + ", trials: " +
         std::to_string(r.trials) + ", dropped by RT filter: " + std::to_string(r.dropped_count) +
         "\n\n";
  out += "Single-trial classification accuracy (congruent vs. incongruent)\n\n";
  out += classifier_table(r.median, r.trained, r.upper);
  out += "\nAccuracy vs. chance (one-sample t-test against 50%)\n";
  if (r.median_vs_chance) out += "  median:      " + detail::t_line(*r.median_vs_chance) + "\n";
  if (r.trained_vs_chance) out += "  trained:     " + detail::t_line(*r.trained_vs_chance) + "\n";
  if (r.upper_vs_chance) out += "  upper bound: " + detail::t_line(*r.upper_vs_chance) + "\n";

  out += "\nCondition means\n";
  out += "  mean RT congruent:        " + fmt("%.2f ms", r.mean_congruent_ms) + "\n";
  out += "  mean RT incongruent:      " + fmt("%.2f ms", r.mean_incongruent_ms) + "\n";
  out += "  mean difference:          " + fmt("%.2f ms", r.mean_diff_ms) + "\n";
  out += "  within-subject SD:        " + fmt("%.2f ms", r.mean_pooled_sd_ms) +
         " (mean of per-participant pooled SDs)\n";
  out += "                            " + fmt("%.2f ms", r.grand_pooled_sd_ms) +
         " (grand pooled SD)\n";
  out += "  paired t-test:            " + detail::t_line(r.rt_test) +
         (r.significant ? "  significant" : "  not significant") + " at alpha = " +
         fmt("%g", r.config.alpha) + "\n";
  out += "  SEM of difference:        " + fmt("%.2f ms", r.rt_test.sem_diff) + " observed, " +
         fmt("%.2f ms", r.predicted_sem_ms) + " predicted from within-subject SD\n";

  out += "\nEffect sizes\n";
  out += "  signal-to-noise (mean d_i):        " + fmt("%.4f", r.effects.snr) + "\n";
  out += "  mean diff / mean within-SD:        " + fmt("%.4f", r.effects.snr_ratio) + "\n";
  out += "  d_across = mean(d_i)/sd(d_i):      " + fmt("%.4f", r.effects.d_across) +
         (r.effects.d_across_defined ? "" : " [undefined: sd(d_i) = 0]") + "\n";
  out += "  t-test on d_i:                     " + detail::t_line(r.effects.test_on_d) + "\n";

  out += "\nConfiguration\n";
  out += "  seed " + std::to_string(r.config.protocol.seed) + ", train fraction " +
         fmt("%g", r.config.protocol.train_fraction) + ", repetitions " +
         std::to_string(r.config.protocol.repetitions) + "\n";
  return out;
}

inline std::string report_csv(const AuditReport& r) {
  std::ostringstream out;
  out << "# format_version: " << r.format_version << "\n";
  out << "metric,value\n";
  auto row = [&](const std::string& k, double v) { out << k << ',' << csv::format_double(v) << '\n'; };
  auto classifier = [&](const std::string& name, const AccuracySummary& s) {
    row(name + ".mean_accuracy", s.mean_accuracy);
    row(name + ".sd_accuracy", s.sd_accuracy);
  };
  out << "fingerprint_sha256," << r.fingerprint << '\n';
  row("participants", static_cast<double>(r.participants));
  row("trials", static_cast<double>(r.trials));
  row("dropped_count", static_cast<double>(r.dropped_count));
  classifier("median", r.median);
  classifier("trained", r.trained);
  classifier("upper_bound", r.upper);
  row("mean_congruent_ms", r.mean_congruent_ms);
  row("mean_incongruent_ms", r.mean_incongruent_ms);
  row("mean_diff_ms", r.mean_diff_ms);
  row("mean_pooled_sd_ms", r.mean_pooled_sd_ms);
  row("grand_pooled_sd_ms", r.grand_pooled_sd_ms);
  row("rt_test.t", r.rt_test.t);
  row("rt_test.df", r.rt_test.df);
  row("rt_test.p", r.rt_test.p);
  row("rt_test.sem_diff_ms", r.rt_test.sem_diff);
  row("predicted_sem_ms", r.predicted_sem_ms);
  row("snr", r.effects.snr);
  row("snr_ratio", r.effects.snr_ratio);
  row("d_across", r.effects.d_across);
  row("test_on_d.t", r.effects.test_on_d.t);
  row("test_on_d.p", r.effects.test_on_d.p);
  row("seed", static_cast<double>(r.config.protocol.seed));
  row("train_fraction", r.config.protocol.train_fraction);
  row("repetitions", static_cast<double>(r.config.protocol.repetitions));
  row("alpha", r.config.alpha);
  return out.str();
}

inline std::string emit_report(const AuditReport& r, ReportFormat format) {
  switch (format) {
    case ReportFormat::Json: return report_to_json(r).dump(2) + "\n";
    case ReportFormat::Csv: return report_csv(r);
    case ReportFormat::Text: return report_text(r);
  }
  return {};
}

// ---------------------------------------------------------------------------
// Simulation sweeps

inline nlohmann::json sweep_to_json(const SweepResult& s) {
  using detail::json;
  using detail::number;
  const auto& b = s.base;
  json j;
  j["format_version"] = kFormatVersion;
  j["toolkit_version"] = kVersion;
  json cfg = {{"family", std::string(to_string(b.model.family))},
              {"replications", b.replications},
              {"seed", b.seed},
              {"between_subject_sd_ms", number(b.between_subject_sd_ms)},
              {"alpha", number(b.alpha)},
              {"train_fraction", number(b.protocol.train_fraction)},
              {"repetitions", b.protocol.repetitions}};
  if (b.targets) {
    cfg["base_ms"] = number(b.targets->base_ms);
    cfg["sigma_ms"] = number(b.targets->sigma_ms);
  }
  j["config"] = cfg;
  json cells = json::array();
  for (const auto& c : s.cells) {
    const auto& m = c.summary;
    cells.push_back({{"participants", c.participants},
                     {"trials_per_condition", c.trials_per_condition},
                     {"delta_ms", number(c.delta_ms)},
                     {"model", {{"mu1", number(c.model.mu1)},
                                {"mu2", number(c.model.mu2)},
                                {"sigma", number(c.model.sigma)},
                                {"family", std::string(to_string(c.model.family))}}},
                     {"rejection_rate", number(m.rejection_rate)},
                     {"mean_t", number(m.mean_t)},
                     {"mean_bayes_accuracy", number(m.mean_bayes_accuracy)},
                     {"mean_median_accuracy", number(m.mean_median_accuracy)},
                     {"mean_trained_accuracy", number(m.mean_trained_accuracy)},
                     {"mean_upper_bound", number(m.mean_upper_bound)},
                     {"se_median_accuracy", number(m.se_median_accuracy)},
                     {"se_trained_accuracy", number(m.se_trained_accuracy)},
                     {"se_upper_bound", number(m.se_upper_bound)},
                     {"mean_within_sd_ms", number(m.mean_within_sd_ms)},
                     {"mean_sem_ms", number(m.mean_sem_ms)}});
  }
  j["cells"] = cells;
  return j;
}

inline std::string sweep_csv(const SweepResult& s) {
  std::ostringstream out;
  out << "# format_version: " << kFormatVersion << "\n";
  out << "participants,trials_per_condition,delta_ms,family,mu1,mu2,sigma,replications,"
         "rejection_rate,mean_t,mean_bayes_accuracy,mean_median_accuracy,"
         "mean_trained_accuracy,mean_upper_bound,mean_within_sd_ms,mean_sem_ms\n";
  auto f = csv::format_double;
  for (const auto& c : s.cells) {
    const auto& m = c.summary;
    out << c.participants << ',' << c.trials_per_condition << ',' << f(c.delta_ms) << ','
        << to_string(c.model.family) << ',' << f(c.model.mu1) << ',' << f(c.model.mu2) << ','
        << f(c.model.sigma) << ',' << s.base.replications << ',' << f(m.rejection_rate) << ','
        << f(m.mean_t) << ',' << f(m.mean_bayes_accuracy) << ',' << f(m.mean_median_accuracy)
        << ',' << f(m.mean_trained_accuracy) << ',' << f(m.mean_upper_bound) << ','
        << f(m.mean_within_sd_ms) << ',' << f(m.mean_sem_ms) << '\n';
  }
  return out.str();
}

inline std::string sweep_cell_text(const SweepCell& c) {
  using detail::fmt;
  using detail::pct;
  const auto& m = c.summary;
  std::string out;
  out += "cell: " + std::to_string(c.participants) + " participants x " +
         std::to_string(c.trials_per_condition) + " trials/condition, delta = " +
         fmt("%g ms", c.delta_ms) + " (" + std::string(to_string(c.model.family)) +
         fmt(": mu1 = %.6g", c.model.mu1) + fmt(", mu2 = %.6g", c.model.mu2) +
         fmt(", sigma = %.6g)", c.model.sigma) + "\n";
  out += "  t-test rejection rate:        " + fmt("%.3f", m.rejection_rate) +
         fmt("   (mean t = %.3f)", m.mean_t) + "\n";
  out += "  Bayes accuracy (model):       " + pct(m.mean_bayes_accuracy) + "\n";
  out += "  median classifier:            " + pct(m.mean_median_accuracy) + "\n";
  out += "  trained classifier:           " + pct(m.mean_trained_accuracy) + "\n";
  out += "  over-optimistic upper bound:  " + pct(m.mean_upper_bound) + "\n";
  out += "  within-subject SD:            " + fmt("%.2f ms", m.mean_within_sd_ms) +
         ", SEM of difference: " + fmt("%.2f ms", m.mean_sem_ms) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Histogram accuracy

struct HistogramReport {
  std::string source;
  HistogramWeighting weighting = HistogramWeighting::EqualPriors;
  std::size_t bins = 0;
  HistogramStepResult step;
  double bayes = 0.0;
};

inline HistogramReport build_histogram_report(const HistogramPair& h, HistogramWeighting w,
                                              std::string source) {
  return {std::move(source), w, h.bins(), histogram_step_accuracy(h, w),
          histogram_bayes_accuracy(h, w)};
}

inline std::string emit_histogram_report(const HistogramReport& r, ReportFormat format) {
  using detail::number;
  const std::string weighting =
      r.weighting == HistogramWeighting::EqualPriors ? "equal_priors" : "raw_counts";
  switch (format) {
    case ReportFormat::Json: {
      nlohmann::json j = {{"format_version", kFormatVersion},
                          {"toolkit_version", kVersion},
                          {"source", r.source},
                          {"bins", r.bins},
                          {"weighting", weighting},
                          {"step_accuracy", number(r.step.accuracy)},
                          {"step_threshold_edge_ms", number(r.step.threshold_edge_ms)},
                          {"step_orientation", std::string(to_string(r.step.orientation))},
                          {"bayes_accuracy", number(r.bayes)}};
      return j.dump(2) + "\n";
    }
    case ReportFormat::Csv: {
      std::ostringstream out;
      out << "# format_version: " << kFormatVersion << "\n";
      out << "estimator,accuracy,threshold_edge_ms,orientation,weighting\n";
      out << "step," << csv::format_double(r.step.accuracy) << ','
          << csv::format_double(r.step.threshold_edge_ms) << ',' << to_string(r.step.orientation)
          << ',' << weighting << '\n';
      out << "bayes," << csv::format_double(r.bayes) << ",,," << weighting << '\n';
      return out.str();
    }
    case ReportFormat::Text: {
      using detail::fmt;
      std::string out = "histogram: " + r.source + " (" + std::to_string(r.bins) + " bins, " +
                        weighting + ")\n";
      out += "  best threshold at a bin edge:  " + detail::pct(r.step.accuracy) + " (edge " +
             fmt("%g ms", r.step.threshold_edge_ms) + ", " +
             std::string(to_string(r.step.orientation)) + ")\n";
      out += "  per-bin Bayes rule:            " + detail::pct(r.bayes) + "\n";
      return out;
    }
  }
  return {};
}

}  // namespace rtaudit
