#pragma once

// Conventional inference on condition means: paired t-test, SEM prediction,
// Cohen's d bookkeeping, and testing classification accuracy against chance.

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "rtaudit/classify.hpp"
#include "rtaudit/core.hpp"
#include "rtaudit/special.hpp"

namespace rtaudit {

struct PairedTestResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;           // two-sided
  double mean_diff = 0.0;   // ms for RT tests, fraction for accuracy tests
  double sem_diff = 0.0;
  std::size_t n = 0;
  // SD of the differences was zero. t is then 0 (zero mean) or +-inf, and p is
  // 1 or 0 respectively.
  bool degenerate = false;
};

// One-sample two-sided t-test of `values` against `null_mean`.
inline PairedTestResult one_sample_t_test(std::span<const double> values, double null_mean) {
  if (values.size() < 2) throw DegenerateData("t-test needs at least 2 values");
  PairedTestResult r;
  r.n = values.size();
  r.df = static_cast<double>(r.n - 1);
  const double m = mean(values);
  r.mean_diff = m - null_mean;
  r.sem_diff = sample_sd(values) / std::sqrt(static_cast<double>(r.n));
  if (r.sem_diff == 0.0) {
    r.degenerate = true;
    if (r.mean_diff == 0.0) {
      r.t = 0.0;
      r.p = 1.0;
    } else {
      r.t = std::copysign(std::numeric_limits<double>::infinity(), r.mean_diff);
      r.p = 0.0;
    }
    return r;
  }
  r.t = r.mean_diff / r.sem_diff;
  r.p = student_t_two_sided_p(r.t, r.df);
  return r;
}

inline std::vector<double> participant_mean_diffs(const Dataset& ds) {
  std::vector<double> diffs;
  diffs.reserve(ds.participants.size());
  for (const auto& p : ds.participants) {
    detail::require_trials(p, 1);
    diffs.push_back(mean(rts(p, Condition::Incongruent)) - mean(rts(p, Condition::Congruent)));
  }
  return diffs;
}

// Differences are mean(incongruent) - mean(congruent) per participant.
inline PairedTestResult paired_t_test(const Dataset& ds) {
  if (ds.participants.size() < 2) throw DegenerateData("paired t-test needs >= 2 participants");
  const auto diffs = participant_mean_diffs(ds);
  return one_sample_t_test(diffs, 0.0);
}

// Rough SEM of the condition difference, ignoring between-subject variability:
// within_sd * sqrt(2) / sqrt(trials_per_condition * participants).
inline double predict_sem(double within_sd_ms, double trials_per_condition, double participants) {
  if (!(within_sd_ms > 0.0) || !(trials_per_condition > 0.0) || !(participants > 0.0))
    throw DomainError("predict_sem: all inputs must be positive");
  return within_sd_ms * std::sqrt(2.0) / std::sqrt(trials_per_condition * participants);
}

struct EffectSizeLedger {
  std::vector<double> per_participant_d;  // trial-level Cohen's d per participant
  double d_across = 0.0;                  // mean(d_i) / SD(d_i)
  bool d_across_defined = true;           // false when SD(d_i) == 0
  double snr = 0.0;                       // mean of d_i
  double snr_ratio = 0.0;                 // mean diff / mean within-participant SD
  double mean_diff_ms = 0.0;
  double mean_within_sd_ms = 0.0;
  PairedTestResult test_on_d;             // one-sample t-test of the d_i against 0
};

inline EffectSizeLedger effect_sizes(const Dataset& ds) {
  if (ds.participants.size() < 2) throw DegenerateData("effect sizes need >= 2 participants");
  EffectSizeLedger e;
  std::vector<double> diffs, sds;
  for (const auto& p : ds.participants) {
    const auto s = summarize_participant(p);
    if (!(s.pooled_sd_ms > 0.0))
      throw DegenerateData("participant '" + p.participant_id + "' has zero pooled SD");
    e.per_participant_d.push_back(s.mean_diff_ms() / s.pooled_sd_ms);
    diffs.push_back(s.mean_diff_ms());
    sds.push_back(s.pooled_sd_ms);
  }
  e.mean_diff_ms = mean(diffs);
  e.mean_within_sd_ms = mean(sds);
  e.snr = mean(e.per_participant_d);
  e.snr_ratio = e.mean_diff_ms / e.mean_within_sd_ms;
  const double sd_d = sample_sd(e.per_participant_d);
  if (sd_d > 0.0) {
    e.d_across = e.snr / sd_d;
  } else {
    e.d_across_defined = false;
    e.d_across = e.snr == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), e.snr);
  }
  e.test_on_d = one_sample_t_test(e.per_participant_d, 0.0);
  return e;
}

// One-sample test of per-participant accuracies against 0.5.
inline PairedTestResult accuracy_vs_chance_test(const AccuracySummary& summary) {
  if (summary.per_participant.size() < 2)
    throw DegenerateData("accuracy test needs >= 2 participants");
  const auto acc = summary.accuracies();
  return one_sample_t_test(acc, 0.5);
}

}  // namespace rtaudit
