#pragma once

// Domain data model: trials, participants, datasets, and the per-participant
// bookkeeping every other module builds on. All RTs are milliseconds.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <ranges>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rtaudit/errors.hpp"

namespace rtaudit {

enum class Condition { Congruent, Incongruent };

inline constexpr std::string_view to_string(Condition c) noexcept {
  return c == Condition::Congruent ? "congruent" : "incongruent";
}

inline constexpr Condition other(Condition c) noexcept {
  return c == Condition::Congruent ? Condition::Incongruent : Condition::Congruent;
}

struct Trial {
  double rt_ms = 0.0;
  Condition condition = Condition::Congruent;

  friend bool operator==(const Trial&, const Trial&) = default;
};

struct ParticipantRecord {
  std::string participant_id;
  std::vector<Trial> trials;  // ingestion order

  friend bool operator==(const ParticipantRecord&, const ParticipantRecord&) = default;
};

struct Dataset {
  std::vector<ParticipantRecord> participants;
  std::map<std::string, std::string> metadata;
};

// Which class a step classifier assigns to RTs at or below its threshold.
enum class Orientation { FastIsCongruent, FastIsIncongruent };

inline constexpr std::string_view to_string(Orientation o) noexcept {
  return o == Orientation::FastIsCongruent ? "fast_is_congruent" : "fast_is_incongruent";
}

struct ClassifierOutcome {
  double accuracy = 0.0;                 // in [0, 1]
  std::optional<double> threshold_ms;    // absent for aggregate summaries
  Orientation orientation = Orientation::FastIsCongruent;
  std::size_t n_trials_evaluated = 0;
  std::string participant_id;
  std::vector<double> repetition_accuracies;  // trained classifier only
};

// ---------------------------------------------------------------------------
// Small descriptive statistics used throughout.

template <std::ranges::input_range R>
double mean(const R& values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (double v : values) {
    sum += v;
    ++n;
  }
  if (n == 0) throw EmptyInput("mean of empty range");
  return sum / static_cast<double>(n);
}

// Unbiased (n-1) variance; two-pass for numerical stability.
template <std::ranges::input_range R>
double sample_variance(const R& values) {
  const double m = mean(values);
  double ss = 0.0;
  std::size_t n = 0;
  for (double v : values) {
    ss += (v - m) * (v - m);
    ++n;
  }
  if (n < 2) throw DegenerateData("sample variance needs at least 2 values");
  return ss / static_cast<double>(n - 1);
}

template <std::ranges::input_range R>
double sample_sd(const R& values) {
  return std::sqrt(sample_variance(values));
}

inline std::vector<double> rts(const ParticipantRecord& record, Condition c) {
  std::vector<double> out;
  for (const auto& t : record.trials)
    if (t.condition == c) out.push_back(t.rt_ms);
  return out;
}

inline std::size_t count_trials(const ParticipantRecord& record, Condition c) {
  return static_cast<std::size_t>(std::ranges::count_if(
      record.trials, [c](const Trial& t) { return t.condition == c; }));
}

// ---------------------------------------------------------------------------

struct ConditionSummary {
  std::size_t count = 0;
  double mean_ms = 0.0;
  double sd_ms = 0.0;
};

struct ParticipantSummary {
  std::string participant_id;
  ConditionSummary congruent;
  ConditionSummary incongruent;
  // sqrt of the df-weighted average of the two condition variances
  double pooled_sd_ms = 0.0;

  double mean_diff_ms() const noexcept { return incongruent.mean_ms - congruent.mean_ms; }
};

namespace detail {

inline ConditionSummary summarize_condition(const std::vector<double>& values) {
  return {values.size(), mean(values), sample_sd(values)};
}

inline double pooled_sd(const ConditionSummary& a, const ConditionSummary& b) {
  const double dfa = static_cast<double>(a.count - 1);
  const double dfb = static_cast<double>(b.count - 1);
  return std::sqrt((dfa * a.sd_ms * a.sd_ms + dfb * b.sd_ms * b.sd_ms) / (dfa + dfb));
}

inline void require_trials(const ParticipantRecord& record, std::size_t per_condition) {
  for (Condition c : {Condition::Congruent, Condition::Incongruent}) {
    const auto n = count_trials(record, c);
    if (n < per_condition)
      throw DegenerateData("participant '" + record.participant_id + "' has " +
                           std::to_string(n) + " " + std::string(to_string(c)) +
                           " trials; at least " + std::to_string(per_condition) +
                           " required");
  }
}

}  // namespace detail

inline ParticipantSummary summarize_participant(const ParticipantRecord& record) {
  detail::require_trials(record, 2);
  ParticipantSummary s;
  s.participant_id = record.participant_id;
  s.congruent = detail::summarize_condition(rts(record, Condition::Congruent));
  s.incongruent = detail::summarize_condition(rts(record, Condition::Incongruent));
  s.pooled_sd_ms = detail::pooled_sd(s.congruent, s.incongruent);
  return s;
}

// Dataset-level condition difference and within-subject spread. Both readings
// of "average within-subject SD" are kept: the mean of per-participant pooled
// SDs and the grand pooled SD over every participant's condition cells.
struct DatasetSummary {
  std::size_t participants = 0;
  double mean_diff_ms = 0.0;              // mean over participants of incong - cong
  double mean_congruent_ms = 0.0;
  double mean_incongruent_ms = 0.0;
  double mean_pooled_sd_ms = 0.0;
  double grand_pooled_sd_ms = 0.0;
  double mean_trials_per_condition = 0.0;
  std::vector<ParticipantSummary> per_participant;
};

inline DatasetSummary summarize_dataset(const Dataset& ds) {
  if (ds.participants.empty()) throw EmptyInput("dataset has no participants");
  DatasetSummary out;
  out.participants = ds.participants.size();
  double ss = 0.0, df = 0.0, trials = 0.0;
  std::vector<double> diffs, sds, cong, incong;
  for (const auto& p : ds.participants) {
    auto s = summarize_participant(p);
    diffs.push_back(s.mean_diff_ms());
    sds.push_back(s.pooled_sd_ms);
    cong.push_back(s.congruent.mean_ms);
    incong.push_back(s.incongruent.mean_ms);
    for (const auto* c : {&s.congruent, &s.incongruent}) {
      ss += static_cast<double>(c->count - 1) * c->sd_ms * c->sd_ms;
      df += static_cast<double>(c->count - 1);
      trials += static_cast<double>(c->count);
    }
    out.per_participant.push_back(std::move(s));
  }
  out.mean_diff_ms = mean(diffs);
  out.mean_congruent_ms = mean(cong);
  out.mean_incongruent_ms = mean(incong);
  out.mean_pooled_sd_ms = mean(sds);
  out.grand_pooled_sd_ms = std::sqrt(ss / df);
  out.mean_trials_per_condition = trials / (2.0 * static_cast<double>(out.participants));
  return out;
}

// ---------------------------------------------------------------------------
// Validation: violations are data, not failures.

enum class ViolationKind {
  NonPositiveRT,
  NonFiniteRT,
  DuplicateParticipant,
  EmptyParticipantId,
  TooFewTrials,
};

inline constexpr std::string_view to_string(ViolationKind k) noexcept {
  switch (k) {
    case ViolationKind::NonPositiveRT: return "NonPositiveRT";
    case ViolationKind::NonFiniteRT: return "NonFiniteRT";
    case ViolationKind::DuplicateParticipant: return "DuplicateParticipant";
    case ViolationKind::EmptyParticipantId: return "EmptyParticipantId";
    case ViolationKind::TooFewTrials: return "TooFewTrials";
  }
  return "?";
}

struct Violation {
  ViolationKind kind;
  std::string participant_id;
  std::optional<std::size_t> trial_index;
  std::string message;
};

inline std::vector<Violation> validate_dataset(const Dataset& ds) {
  std::vector<Violation> out;
  std::set<std::string> seen;
  for (const auto& p : ds.participants) {
    if (p.participant_id.empty())
      out.push_back({ViolationKind::EmptyParticipantId, p.participant_id, std::nullopt,
                     "participant id is empty"});
    if (!seen.insert(p.participant_id).second)
      out.push_back({ViolationKind::DuplicateParticipant, p.participant_id, std::nullopt,
                     "participant id '" + p.participant_id + "' appears more than once"});
    for (std::size_t i = 0; i < p.trials.size(); ++i) {
      const double rt = p.trials[i].rt_ms;
      if (!std::isfinite(rt))
        out.push_back({ViolationKind::NonFiniteRT, p.participant_id, i, "rt is not finite"});
      else if (rt <= 0.0)
        out.push_back({ViolationKind::NonPositiveRT, p.participant_id, i,
                       "rt must be positive, got " + std::to_string(rt)});
    }
    for (Condition c : {Condition::Congruent, Condition::Incongruent}) {
      if (count_trials(p, c) < 2)
        out.push_back({ViolationKind::TooFewTrials, p.participant_id, std::nullopt,
                       "fewer than 2 " + std::string(to_string(c)) + " trials"});
    }
  }
  return out;
}

}  // namespace rtaudit
