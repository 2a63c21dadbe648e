#pragma once

// Monte-Carlo engine: synthesize congruency experiments from a parametric RT
// model, then run the significance test and the three classifiers on each
// synthetic dataset. Random streams are derived per
// (seed, replication, participant, condition), which gives common random
// numbers across grid cells and results independent of the worker count.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "rtaudit/classify.hpp"
#include "rtaudit/core.hpp"
#include "rtaudit/distmodel.hpp"
#include "rtaudit/inferstats.hpp"
#include "rtaudit/parallel.hpp"
#include "rtaudit/random.hpp"

namespace rtaudit {

struct SimulationConfig {
  DistributionModel model;
  std::optional<RtTargets> targets;  // ms-scale description of `model`, when known
  std::size_t participants = 66;
  std::size_t trials_per_condition = 180;
  std::size_t replications = 500;
  std::uint64_t seed = 1;
  // SD (ms) of independent per-class shifts of each participant's class means.
  double between_subject_sd_ms = 0.0;
  SplitProtocol protocol;
  double alpha = 0.05;
  std::size_t workers = 1;

  void validate() const {
    if (participants < 2) throw DomainError("participants must be >= 2");
    if (trials_per_condition < 2) throw DomainError("trials_per_condition must be >= 2");
    if (replications < 1) throw DomainError("replications must be >= 1");
    if (!(between_subject_sd_ms >= 0.0)) throw DomainError("between_subject_sd must be >= 0");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    if (!(model.sigma > 0.0)) throw DomainError("model sigma must be > 0");
    protocol.validate();
  }
};

inline SimulationConfig make_config(const RtTargets& targets) {
  SimulationConfig cfg;
  cfg.model = matched_model(targets);
  cfg.targets = targets;
  return cfg;
}

// Between-subject SD that brings the SEM of the participant mean differences
// up to `target_sem_ms`; the within-subject part alone contributes
// 2 sigma^2 / trials to the variance of each difference.
inline double between_sd_for_sem(double target_sem_ms, double sigma_ms,
                                 std::size_t trials_per_condition, std::size_t participants) {
  const double target_var = target_sem_ms * target_sem_ms * static_cast<double>(participants);
  const double within_var = 2.0 * sigma_ms * sigma_ms / static_cast<double>(trials_per_condition);
  return target_var > within_var ? std::sqrt(0.5 * (target_var - within_var)) : 0.0;
}

// Lognormal, 66 participants x 180 trials per condition, 4.4 ms mean
// difference, 146.5 ms within-subject SD, and between-subject spread set so the
// SEM of the difference is the observed 2.0 ms.
inline SimulationConfig reference_config() {
  auto cfg = make_config(RtTargets{Family::Lognormal, 650.0, 4.4, 146.5});
  cfg.between_subject_sd_ms = between_sd_for_sem(2.0, 146.5, 180, 66);
  return cfg;
}

namespace detail {

inline DistributionModel jittered_model(const SimulationConfig& cfg, RandomStream& rng) {
  if (cfg.between_subject_sd_ms == 0.0) {
    rng.normal();
    rng.normal();
    return cfg.model;
  }
  DistributionModel m = cfg.model;
  const double z1 = rng.normal(), z2 = rng.normal();
  if (m.family == Family::Normal) {
    m.mu1 += cfg.between_subject_sd_ms * z1;
    m.mu2 += cfg.between_subject_sd_ms * z2;
    return m;
  }
  const double half_var = 0.5 * m.sigma * m.sigma;
  const double m1 = arithmetic_mean(m, Condition::Congruent) + cfg.between_subject_sd_ms * z1;
  const double m2 = arithmetic_mean(m, Condition::Incongruent) + cfg.between_subject_sd_ms * z2;
  if (!(m1 > 0.0) || !(m2 > 0.0)) throw DomainError("between-subject shift gave a nonpositive mean");
  m.mu1 = std::log(m1) - half_var;
  m.mu2 = std::log(m2) - half_var;
  return m;
}

// Normal draws are truncated to positive RTs by redrawing.
inline double draw_rt(const DistributionModel& m, Condition c, RandomStream& rng) {
  const double loc = m.location(c);
  if (m.family == Family::Lognormal) return std::exp(loc + m.sigma * rng.normal());
  for (;;) {
    const double x = loc + m.sigma * rng.normal();
    if (x > 0.0) return x;
  }
}

inline std::string participant_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "sim%03zu", i + 1);
  return buf;
}

struct SyntheticParticipant {
  ParticipantRecord record;
  DistributionModel model;
};

inline SyntheticParticipant synthesize_participant(const SimulationConfig& cfg,
                                                   std::uint64_t replication_seed,
                                                   std::size_t index) {
  const std::uint64_t pseed = derive_seed(replication_seed, index);
  RandomStream jitter(derive_seed(pseed, 0));
  RandomStream cong(derive_seed(pseed, 1));
  RandomStream incong(derive_seed(pseed, 2));
  SyntheticParticipant out;
  out.model = jittered_model(cfg, jitter);
  out.record.participant_id = participant_name(index);
  out.record.trials.reserve(2 * cfg.trials_per_condition);
  for (std::size_t k = 0; k < cfg.trials_per_condition; ++k) {
    out.record.trials.push_back({draw_rt(out.model, Condition::Congruent, cong), Condition::Congruent});
    out.record.trials.push_back(
        {draw_rt(out.model, Condition::Incongruent, incong), Condition::Incongruent});
  }
  return out;
}

}  // namespace detail

// Trials alternate congruent/incongruent within each participant.
inline Dataset synthesize_dataset(const SimulationConfig& cfg, std::size_t replication_index) {
  cfg.validate();
  const std::uint64_t rseed = derive_seed(cfg.seed, replication_index);
  Dataset ds;
  ds.metadata["source"] = "simulation";
  ds.metadata["units"] = "ms";
  ds.metadata["seed"] = std::to_string(cfg.seed);
  ds.metadata["replication"] = std::to_string(replication_index);
  for (std::size_t p = 0; p < cfg.participants; ++p)
    ds.participants.push_back(detail::synthesize_participant(cfg, rseed, p).record);
  return ds;
}

struct ReplicationResult {
  PairedTestResult test;
  AccuracySummary median;
  AccuracySummary trained;
  AccuracySummary upper;
  double mean_bayes_accuracy = 0.0;  // over the participants' generating models
  double mean_within_sd_ms = 0.0;
  bool rejected = false;
};

struct FallacySummary {
  double rejection_rate = 0.0;
  double mean_t = 0.0;
  double mean_bayes_accuracy = 0.0;
  double mean_median_accuracy = 0.0;
  double mean_trained_accuracy = 0.0;
  double mean_upper_bound = 0.0;
  // Monte-Carlo standard errors of the replication means
  double se_median_accuracy = 0.0;
  double se_trained_accuracy = 0.0;
  double se_upper_bound = 0.0;
  double mean_within_sd_ms = 0.0;
  double mean_sem_ms = 0.0;
};

struct FallacyResult {
  SimulationConfig config;
  std::vector<ReplicationResult> replications;
  FallacySummary summary;
};

namespace detail {

inline ReplicationResult run_replication(const SimulationConfig& cfg, std::size_t r) {
  const std::uint64_t rseed = derive_seed(cfg.seed, r);
  Dataset ds;
  std::vector<double> bayes;
  for (std::size_t p = 0; p < cfg.participants; ++p) {
    auto sp = synthesize_participant(cfg, rseed, p);
    bayes.push_back(bayes_accuracy(sp.model));
    ds.participants.push_back(std::move(sp.record));
  }
  ReplicationResult out;
  out.test = paired_t_test(ds);
  out.rejected = out.test.p < cfg.alpha;
  auto cls = classify_dataset(ds, cfg.protocol, 1);
  out.median = std::move(cls.median);
  out.trained = std::move(cls.trained);
  out.upper = std::move(cls.upper);
  out.mean_bayes_accuracy = mean(bayes);
  std::vector<double> sds;
  for (const auto& p : ds.participants) sds.push_back(summarize_participant(p).pooled_sd_ms);
  out.mean_within_sd_ms = mean(sds);
  return out;
}

inline double standard_error(const std::vector<double>& v) {
  return v.size() < 2 ? 0.0 : sample_sd(v) / std::sqrt(static_cast<double>(v.size()));
}

}  // namespace detail

inline FallacyResult run_fallacy_experiment(const SimulationConfig& cfg) {
  cfg.validate();
  FallacyResult res;
  res.config = cfg;
  res.replications.resize(cfg.replications);
  parallel_for(cfg.replications, cfg.workers,
               [&](std::size_t r) { res.replications[r] = detail::run_replication(cfg, r); });

  std::vector<double> rej, t, bayes, med, trn, up, sd, sem;
  for (const auto& r : res.replications) {
    rej.push_back(r.rejected ? 1.0 : 0.0);
    t.push_back(r.test.t);
    bayes.push_back(r.mean_bayes_accuracy);
    med.push_back(r.median.mean_accuracy);
    trn.push_back(r.trained.mean_accuracy);
    up.push_back(r.upper.mean_accuracy);
    sd.push_back(r.mean_within_sd_ms);
    sem.push_back(r.test.sem_diff);
  }
  auto& s = res.summary;
  s.rejection_rate = mean(rej);
  s.mean_t = mean(t);
  s.mean_bayes_accuracy = mean(bayes);
  s.mean_median_accuracy = mean(med);
  s.mean_trained_accuracy = mean(trn);
  s.mean_upper_bound = mean(up);
  s.se_median_accuracy = detail::standard_error(med);
  s.se_trained_accuracy = detail::standard_error(trn);
  s.se_upper_bound = detail::standard_error(up);
  s.mean_within_sd_ms = mean(sd);
  s.mean_sem_ms = mean(sem);
  return res;
}

struct SweepCell {
  std::size_t participants = 0;
  std::size_t trials_per_condition = 0;
  double delta_ms = 0.0;
  DistributionModel model;
  FallacySummary summary;
};

struct SweepResult {
  SimulationConfig base;
  std::vector<SweepCell> cells;  // participants-major, then trials, then delta
};

// Every cell reuses the base seed, so cells share random numbers.
inline SweepResult sweep(const SimulationConfig& base, const std::vector<std::size_t>& participant_grid,
                         const std::vector<std::size_t>& trial_grid,
                         const std::vector<double>& delta_grid) {
  if (participant_grid.empty() || trial_grid.empty() || delta_grid.empty())
    throw EmptyInput("sweep grids must be nonempty");
  if (!base.targets) throw DomainError("sweep needs ms-scale targets on the base config");
  SweepResult out;
  out.base = base;
  for (std::size_t n : participant_grid) {
    for (std::size_t trials : trial_grid) {
      for (double delta : delta_grid) {
        SimulationConfig cfg = base;
        cfg.participants = n;
        cfg.trials_per_condition = trials;
        cfg.targets->delta_ms = delta;
        cfg.model = matched_model(*cfg.targets);
        auto res = run_fallacy_experiment(cfg);
        out.cells.push_back({n, trials, delta, cfg.model, res.summary});
      }
    }
  }
  return out;
}

}  // namespace rtaudit
