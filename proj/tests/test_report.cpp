#include <gtest/gtest.h>

#include <cmath>

#include "rtaudit/ingest.hpp"
#include "rtaudit/report.hpp"
#include "rtaudit/simulate.hpp"

using namespace rtaudit;

namespace {

Dataset sample_dataset() {
  auto cfg = reference_config();
  cfg.participants = 8;
  cfg.trials_per_condition = 30;
  // pass through the CSV path so the dataset carries a fingerprint
  return ingest_trials(emit_trials_csv(synthesize_dataset(cfg, 0)), {}, "sample.csv");
}

}  // namespace

TEST(Report, FieldsAreRecomputable) {
  const auto ds = sample_dataset();
  const auto r = build_audit_report(ds, {});
  EXPECT_EQ(r.participants, 8u);
  EXPECT_EQ(r.trials, 480u);
  EXPECT_EQ(r.fingerprint, ds.metadata.at("sha256"));
  EXPECT_EQ(r.rt_test.t, paired_t_test(ds).t);
  const auto cls = classify_dataset(ds, r.config.protocol);
  EXPECT_EQ(r.median.mean_accuracy, cls.median.mean_accuracy);
  EXPECT_EQ(r.trained.mean_accuracy, cls.trained.mean_accuracy);
  EXPECT_EQ(r.upper.mean_accuracy, cls.upper.mean_accuracy);
  EXPECT_EQ(r.predicted_sem_ms, predict_sem(r.mean_pooled_sd_ms, 30, 8));
  EXPECT_EQ(r.toolkit_version, std::string(kVersion));
}

TEST(Report, JsonRoundTrip) {
  const auto r = build_audit_report(sample_dataset(), {});
  const auto j = report_to_json(r);
  const auto back = report_from_json(j);
  EXPECT_EQ(report_to_json(back), j);
  EXPECT_EQ(emit_report(back, ReportFormat::Json), emit_report(r, ReportFormat::Json));
  EXPECT_EQ(back.median.mean_accuracy, r.median.mean_accuracy);
  EXPECT_EQ(back.rt_test.p, r.rt_test.p);
  EXPECT_EQ(back.fingerprint, r.fingerprint);
}

TEST(Report, NonFiniteNumbersSurviveJson) {
  auto r = build_audit_report(sample_dataset(), {});
  r.effects.d_across = std::numeric_limits<double>::infinity();
  r.rt_test.t = -std::numeric_limits<double>::infinity();
  r.effects.snr = std::nan("");
  const auto back = report_from_json(nlohmann::json::parse(emit_report(r, ReportFormat::Json)));
  EXPECT_TRUE(std::isinf(back.effects.d_across) && back.effects.d_across > 0);
  EXPECT_TRUE(std::isinf(back.rt_test.t) && back.rt_test.t < 0);
  EXPECT_TRUE(std::isnan(back.effects.snr));
}

TEST(Report, TextTableHasThreeClassifierRows) {
  const auto r = build_audit_report(sample_dataset(), {});
  const auto text = emit_report(r, ReportFormat::Text);
  EXPECT_NE(text.find("Method"), std::string::npos);
  EXPECT_NE(text.find("mean(accuracy)"), std::string::npos);
  EXPECT_NE(text.find("std(accuracy)"), std::string::npos);
  EXPECT_NE(text.find("Median classifier"), std::string::npos);
  EXPECT_NE(text.find("Trained classifier"), std::string::npos);
  EXPECT_NE(text.find("upper bound"), std::string::npos);
  char pct[32];
  std::snprintf(pct, sizeof pct, "%.2f%%", 100.0 * r.median.mean_accuracy);
  EXPECT_NE(text.find(pct), std::string::npos);
}

TEST(Report, CsvHasFormatVersionAndMetrics) {
  const auto r = build_audit_report(sample_dataset(), {});
  const auto text = emit_report(r, ReportFormat::Csv);
  EXPECT_EQ(text.rfind("# format_version: 1\nmetric,value\n", 0), 0u);
  EXPECT_NE(text.find("median.mean_accuracy," + csv::format_double(r.median.mean_accuracy) + "\n"),
            std::string::npos);
}

TEST(Report, EmissionIsDeterministic) {
  const auto ds = sample_dataset();
  AnalysisConfig one, four;
  four.workers = 4;
  const auto a = build_audit_report(ds, one);
  const auto b = build_audit_report(ds, four);
  for (auto f : {ReportFormat::Json, ReportFormat::Csv, ReportFormat::Text})
    EXPECT_EQ(emit_report(a, f), emit_report(b, f));
}

TEST(Report, FormatParsing) {
  EXPECT_EQ(parse_report_format("json"), ReportFormat::Json);
  EXPECT_EQ(parse_report_format("text"), ReportFormat::Text);
  EXPECT_EQ(file_extension(ReportFormat::Text), "txt");
  EXPECT_THROW(parse_report_format("xml"), DomainError);
}

TEST(Report, HistogramReport) {
  HistogramPair h{{300, 350, 400}, {6, 4}, {4, 6}};
  const auto r = build_histogram_report(h, HistogramWeighting::EqualPriors, "h.csv");
  const auto json = nlohmann::json::parse(emit_histogram_report(r, ReportFormat::Json));
  EXPECT_DOUBLE_EQ(json.at("step_accuracy").get<double>(), 0.6);
  EXPECT_DOUBLE_EQ(json.at("bayes_accuracy").get<double>(), 0.6);
}
