#pragma once

// Single-trial step-function classifiers for congruent vs. incongruent RTs:
//   median classifier   threshold = pooled median, congruent assumed fast
//   trained classifier  threshold/orientation fit on a random half, scored on the rest
//   upper bound         best threshold/orientation chosen while looking at all trials
// Every classifier depends on the RTs only through their rank order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rtaudit/core.hpp"
#include "rtaudit/parallel.hpp"
#include "rtaudit/random.hpp"

namespace rtaudit {

// x <= threshold is "fast"; ties at the threshold go to the fast class.
struct StepClassifier {
  double threshold_ms = 0.0;
  Orientation orientation = Orientation::FastIsCongruent;

  Condition classify(double rt_ms) const noexcept {
    const Condition fast = orientation == Orientation::FastIsCongruent
                               ? Condition::Congruent
                               : Condition::Incongruent;
    return rt_ms <= threshold_ms ? fast : other(fast);
  }
};

struct SplitProtocol {
  double train_fraction = 0.5;
  std::size_t repetitions = 10;
  std::uint64_t seed = 1;

  void validate() const {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
      throw DomainError("train_fraction must lie strictly between 0 and 1");
    if (repetitions < 1) throw DomainError("repetitions must be >= 1");
  }
};

struct AccuracySummary {
  std::vector<ClassifierOutcome> per_participant;
  double mean_accuracy = 0.0;
  double sd_accuracy = 0.0;
  bool sd_defined = true;  // false for a single outcome; sd is then reported as 0

  std::vector<double> accuracies() const {
    std::vector<double> out;
    out.reserve(per_participant.size());
    for (const auto& o : per_participant) out.push_back(o.accuracy);
    return out;
  }
};

namespace detail {

struct LabeledRt {
  double rt;
  Condition condition;
};

inline std::vector<LabeledRt> sorted_labeled(std::span<const Trial> trials) {
  std::vector<LabeledRt> v;
  v.reserve(trials.size());
  for (const auto& t : trials) v.push_back({t.rt_ms, t.condition});
  std::ranges::sort(v, {}, &LabeledRt::rt);
  return v;
}

struct Cut {
  std::size_t position = 0;  // number of sorted items on the fast side
  Orientation orientation = Orientation::FastIsCongruent;
  std::size_t correct = 0;
};

// Scans every admissible cut of an ascending sequence: before the first item,
// after the last one, and between consecutive distinct RTs. Ties in the number
// correct keep the earliest cut, FastIsCongruent first.
inline Cut best_cut(std::span<const LabeledRt> sorted) {
  std::size_t total_cong = 0;
  for (const auto& x : sorted) total_cong += x.condition == Condition::Congruent;
  const std::size_t total_incong = sorted.size() - total_cong;

  Cut best{0, Orientation::FastIsCongruent, total_incong};
  if (total_cong > best.correct) best = {0, Orientation::FastIsIncongruent, total_cong};

  std::size_t cong_below = 0, incong_below = 0;
  for (std::size_t k = 1; k <= sorted.size(); ++k) {
    (sorted[k - 1].condition == Condition::Congruent ? cong_below : incong_below) += 1;
    if (k < sorted.size() && sorted[k].rt == sorted[k - 1].rt) continue;
    const std::size_t fast_cong = cong_below + (total_incong - incong_below);
    const std::size_t fast_incong = incong_below + (total_cong - cong_below);
    if (fast_cong > best.correct) best = {k, Orientation::FastIsCongruent, fast_cong};
    if (fast_incong > best.correct) best = {k, Orientation::FastIsIncongruent, fast_incong};
  }
  return best;
}

inline void require_nonempty_conditions(const ParticipantRecord& record) {
  require_trials(record, 1);
}

inline std::size_t train_count(std::size_t n, double fraction) {
  const auto k = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
  return std::clamp<std::size_t>(k, 1, n - 1);
}

}  // namespace detail

inline double empirical_median(std::vector<double> values) {
  if (values.empty()) throw EmptyInput("median of empty range");
  std::ranges::sort(values);
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

inline ClassifierOutcome median_classifier(const ParticipantRecord& record) {
  detail::require_nonempty_conditions(record);
  std::vector<double> all;
  all.reserve(record.trials.size());
  for (const auto& t : record.trials) all.push_back(t.rt_ms);
  std::ranges::sort(all);
  const std::size_t n = all.size();
  const double median = n % 2 == 1 ? all[n / 2] : 0.5 * (all[n / 2 - 1] + all[n / 2]);
  // Compare against the lower central order statistic: for an even count the
  // set at or below the midpoint is exactly the set at or below it, and the
  // comparison does not depend on how the midpoint rounds.
  const double fast_limit = all[(n - 1) / 2];

  std::size_t correct = 0;
  for (const auto& t : record.trials) {
    const Condition predicted = t.rt_ms <= fast_limit ? Condition::Congruent : Condition::Incongruent;
    correct += predicted == t.condition;
  }
  ClassifierOutcome out;
  out.participant_id = record.participant_id;
  out.accuracy = static_cast<double>(correct) / static_cast<double>(n);
  out.threshold_ms = median;
  out.orientation = Orientation::FastIsCongruent;
  out.n_trials_evaluated = n;
  return out;
}

inline ClassifierOutcome upper_bound(const ParticipantRecord& record) {
  detail::require_nonempty_conditions(record);
  const auto sorted = detail::sorted_labeled(record.trials);
  const auto cut = detail::best_cut(sorted);
  const std::size_t n = sorted.size();

  ClassifierOutcome out;
  out.participant_id = record.participant_id;
  out.accuracy = static_cast<double>(cut.correct) / static_cast<double>(n);
  if (cut.position == 0)
    out.threshold_ms = sorted.front().rt - 1.0;
  else if (cut.position == n)
    out.threshold_ms = sorted.back().rt + 1.0;
  else
    out.threshold_ms = 0.5 * (sorted[cut.position - 1].rt + sorted[cut.position].rt);
  out.orientation = cut.orientation;
  out.n_trials_evaluated = n;
  return out;
}

// Stratified random split per repetition: each condition is shuffled and its
// first ceil(fraction * n) trials train, the rest test. The training rule picks
// the cut with the fewest training errors; its threshold is the largest
// training RT on the fast side, so test trials are classified by x <= t.
inline ClassifierOutcome train_step_classifier(const ParticipantRecord& record,
                                               const SplitProtocol& protocol) {
  protocol.validate();
  detail::require_trials(record, 2);

  std::vector<std::size_t> cong_idx, incong_idx;
  for (std::size_t i = 0; i < record.trials.size(); ++i)
    (record.trials[i].condition == Condition::Congruent ? cong_idx : incong_idx).push_back(i);

  const std::uint64_t participant_seed =
      derive_seed(protocol.seed, hash_string(record.participant_id));

  ClassifierOutcome out;
  out.participant_id = record.participant_id;
  std::vector<Trial> train, test;
  for (std::size_t rep = 0; rep < protocol.repetitions; ++rep) {
    RandomStream rng(derive_seed(participant_seed, rep));
    train.clear();
    test.clear();
    for (auto* idx : {&cong_idx, &incong_idx}) {
      auto order = *idx;
      rng.shuffle(order);
      const std::size_t k = detail::train_count(order.size(), protocol.train_fraction);
      for (std::size_t j = 0; j < order.size(); ++j)
        (j < k ? train : test).push_back(record.trials[order[j]]);
    }

    const auto sorted = detail::sorted_labeled(train);
    const auto cut = detail::best_cut(sorted);
    const StepClassifier rule{cut.position == 0 ? -std::numeric_limits<double>::infinity()
                                                : sorted[cut.position - 1].rt,
                              cut.orientation};
    std::size_t correct = 0;
    for (const auto& t : test) correct += rule.classify(t.rt_ms) == t.condition;
    out.repetition_accuracies.push_back(static_cast<double>(correct) /
                                        static_cast<double>(test.size()));
    out.orientation = rule.orientation;
    out.threshold_ms = std::isfinite(rule.threshold_ms) ? std::optional(rule.threshold_ms)
                                                        : std::nullopt;
    out.n_trials_evaluated = test.size();
  }
  out.accuracy = mean(out.repetition_accuracies);
  return out;
}

inline AccuracySummary aggregate(std::vector<ClassifierOutcome> outcomes) {
  if (outcomes.empty()) throw EmptyInput("aggregate needs at least one outcome");
  AccuracySummary s;
  s.per_participant = std::move(outcomes);
  const auto acc = s.accuracies();
  s.mean_accuracy = mean(acc);
  if (acc.size() >= 2) {
    s.sd_accuracy = sample_sd(acc);
  } else {
    s.sd_accuracy = 0.0;
    s.sd_defined = false;
  }
  return s;
}

struct DatasetClassification {
  AccuracySummary median;
  AccuracySummary trained;
  AccuracySummary upper;
};

inline DatasetClassification classify_dataset(const Dataset& ds, const SplitProtocol& protocol,
                                              std::size_t workers = 1) {
  protocol.validate();
  const std::size_t n = ds.participants.size();
  if (n == 0) throw EmptyInput("dataset has no participants");
  std::vector<ClassifierOutcome> med(n), trn(n), up(n);
  parallel_for(n, workers, [&](std::size_t i) {
    const auto& p = ds.participants[i];
    med[i] = median_classifier(p);
    trn[i] = train_step_classifier(p, protocol);
    up[i] = upper_bound(p);
  });
  return {aggregate(std::move(med)), aggregate(std::move(trn)), aggregate(std::move(up))};
}

}  // namespace rtaudit
