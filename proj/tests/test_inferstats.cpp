#include <gtest/gtest.h>

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <random>

#include "rtaudit/inferstats.hpp"
#include "rtaudit/simulate.hpp"

using namespace rtaudit;

namespace {

// Two trials per condition: congruent 500 +- spread, incongruent shifted by diff.
ParticipantRecord pair_record(std::string id, double diff, double spread = 10.0, double base = 500.0) {
  return {std::move(id),
          {{base - spread, Condition::Congruent},
           {base + spread, Condition::Congruent},
           {base + diff - spread, Condition::Incongruent},
           {base + diff + spread, Condition::Incongruent}}};
}

Dataset dataset_with_diffs(const std::vector<double>& diffs) {
  Dataset ds;
  for (std::size_t i = 0; i < diffs.size(); ++i)
    ds.participants.push_back(pair_record("p" + std::to_string(i), diffs[i]));
  return ds;
}

Dataset random_dataset(std::mt19937_64& gen, int participants, int trials) {
  std::normal_distribution<double> z(0.0, 1.0);
  Dataset ds;
  for (int p = 0; p < participants; ++p) {
    ParticipantRecord r{"p" + std::to_string(p), {}};
    const double base = 550.0 + 60.0 * z(gen);
    const double effect = 5.0 + 10.0 * z(gen);
    for (int k = 0; k < trials; ++k) {
      r.trials.push_back({base + 80.0 * z(gen), Condition::Congruent});
      r.trials.push_back({base + effect + 80.0 * z(gen), Condition::Incongruent});
    }
    ds.participants.push_back(std::move(r));
  }
  return ds;
}

}  // namespace

TEST(PairedTTest, ThreeParticipantExample) {
  const auto r = paired_t_test(dataset_with_diffs({1, 2, 3}));
  EXPECT_NEAR(r.t, 2.0 * std::sqrt(3.0), 1e-12);
  EXPECT_EQ(r.df, 2.0);
  // df = 2 has the closed form p = 1 - |t| / sqrt(t^2 + 2)
  EXPECT_NEAR(r.p, 1.0 - r.t / std::sqrt(r.t * r.t + 2.0), 1e-12);
  EXPECT_NEAR(r.p, 0.0741799, 1e-7);
  EXPECT_DOUBLE_EQ(r.mean_diff, 2.0);
  EXPECT_NEAR(r.sem_diff, 1.0 / std::sqrt(3.0), 1e-12);
  EXPECT_FALSE(r.degenerate);
}

TEST(PairedTTest, SymmetricDiffsGiveZero) {
  const auto r = paired_t_test(dataset_with_diffs({-2, -1, 1, 2}));
  EXPECT_DOUBLE_EQ(r.t, 0.0);
  EXPECT_DOUBLE_EQ(r.p, 1.0);
}

TEST(PairedTTest, ConstantDiffsAreFlagged) {
  const auto zero = paired_t_test(dataset_with_diffs({0, 0, 0}));
  EXPECT_TRUE(zero.degenerate);
  EXPECT_EQ(zero.t, 0.0);
  EXPECT_EQ(zero.p, 1.0);
  const auto pos = paired_t_test(dataset_with_diffs({3, 3, 3}));
  EXPECT_TRUE(pos.degenerate);
  EXPECT_TRUE(std::isinf(pos.t) && pos.t > 0);
  EXPECT_EQ(pos.p, 0.0);
}

TEST(PairedTTest, NeedsTwoParticipants) {
  EXPECT_THROW(paired_t_test(dataset_with_diffs({1})), DegenerateData);
}

TEST(PairedTTest, PropertyMatchesReferenceComputation) {
  std::mt19937_64 gen(3);
  for (int i = 0; i < 50; ++i) {
    const auto ds = random_dataset(gen, 3 + i % 20, 5 + i % 7);
    std::vector<double> d;
    for (const auto& p : ds.participants) {
      double sc = 0, si = 0, nc = 0, ni = 0;
      for (const auto& t : p.trials)
        (t.condition == Condition::Congruent ? (sc += t.rt_ms, nc += 1) : (si += t.rt_ms, ni += 1));
      d.push_back(si / ni - sc / nc);
    }
    double m = 0;
    for (double x : d) m += x;
    m /= d.size();
    double ss = 0;
    for (double x : d) ss += (x - m) * (x - m);
    const double n = static_cast<double>(d.size());
    const double t = m / std::sqrt(ss / (n - 1) / n);
    const boost::math::students_t dist(n - 1);
    const double p = 2 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    const auto r = paired_t_test(ds);
    EXPECT_NEAR(r.t, t, 1e-9 * std::max(1.0, std::abs(t)));
    EXPECT_NEAR(r.p, p, 1e-10);
  }
}

TEST(PairedTTest, PropertyInvariances) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> shift(-200.0, 200.0);
  for (int i = 0; i < 30; ++i) {
    const auto ds = random_dataset(gen, 10, 20);
    const auto base = paired_t_test(ds);

    Dataset shifted = ds, swapped = ds, scaled = ds;
    for (auto& p : shifted.participants) {
      const double c = shift(gen);
      for (auto& t : p.trials) t.rt_ms += c;
    }
    for (auto& p : swapped.participants)
      for (auto& t : p.trials) t.condition = other(t.condition);
    for (auto& p : scaled.participants)
      for (auto& t : p.trials) t.rt_ms *= 0.001;

    EXPECT_NEAR(paired_t_test(shifted).t, base.t, 1e-8);
    EXPECT_NEAR(paired_t_test(swapped).t, -base.t, 1e-12);
    EXPECT_NEAR(paired_t_test(swapped).p, base.p, 1e-12);
    EXPECT_NEAR(paired_t_test(scaled).t, base.t, 1e-8);
    const auto e = effect_sizes(ds), es = effect_sizes(scaled);
    for (std::size_t k = 0; k < e.per_participant_d.size(); ++k)
      EXPECT_NEAR(e.per_participant_d[k], es.per_participant_d[k], 1e-10);
  }
}

TEST(PairedTTest, NullRejectionRateIsAlpha) {
  auto cfg = make_config(RtTargets{Family::Normal, 500.0, 0.0, 100.0});
  cfg.participants = 20;
  cfg.trials_per_condition = 10;
  cfg.between_subject_sd_ms = 20.0;
  cfg.seed = 2024;
  int rejected = 0;
  const int reps = 1000;
  for (int r = 0; r < reps; ++r) rejected += paired_t_test(synthesize_dataset(cfg, r)).p < 0.05;
  // binomial SD at 1000 draws is 0.69 pp
  EXPECT_NEAR(rejected / static_cast<double>(reps), 0.05, 0.02);
}

TEST(PredictSem, Examples) {
  EXPECT_NEAR(predict_sem(146.5, 180, 66), 146.5 * std::sqrt(2.0) / std::sqrt(180.0 * 66.0), 1e-12);
  EXPECT_NEAR(predict_sem(146.5, 180, 66), 1.90, 0.005);
  EXPECT_NEAR(predict_sem(100, 4, 25), 14.142135623730951, 1e-12);
  EXPECT_NEAR(predict_sem(37.0, 1, 1), 37.0 * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(predict_sem(80, 400, 10), 0.5 * predict_sem(80, 100, 10), 1e-12);
  EXPECT_THROW(predict_sem(0, 10, 10), DomainError);
  EXPECT_THROW(predict_sem(10, 0, 10), DomainError);
  EXPECT_THROW(predict_sem(10, 10, -1), DomainError);
}

TEST(EffectSizes, Example) {
  const double sd = std::sqrt(200.0);  // pooled SD of {490, 510} with itself
  const auto e = effect_sizes(dataset_with_diffs({0.1 * sd, 0.2 * sd, 0.3 * sd}));
  ASSERT_EQ(e.per_participant_d.size(), 3u);
  EXPECT_NEAR(e.per_participant_d[0], 0.1, 1e-12);
  EXPECT_NEAR(e.per_participant_d[2], 0.3, 1e-12);
  EXPECT_NEAR(e.snr, 0.2, 1e-12);
  EXPECT_NEAR(e.d_across, 2.0, 1e-10);
  EXPECT_TRUE(e.d_across_defined);
  EXPECT_NEAR(e.snr_ratio, 0.2, 1e-12);
  EXPECT_NEAR(e.mean_within_sd_ms, sd, 1e-12);
  EXPECT_NEAR(e.test_on_d.t, 2.0 * std::sqrt(3.0), 1e-9);
}

TEST(EffectSizes, IdenticalDsAreFlagged) {
  const auto e = effect_sizes(dataset_with_diffs({5, 5, 5}));
  EXPECT_FALSE(e.d_across_defined);
  EXPECT_TRUE(std::isinf(e.d_across));
}

TEST(EffectSizes, ZeroVarianceParticipantIsDegenerate) {
  Dataset ds = dataset_with_diffs({1, 2});
  ds.participants.push_back(pair_record("flat", 3, 0.0));
  EXPECT_THROW(effect_sizes(ds), DegenerateData);
}

TEST(AccuracyVsChance, Example) {
  AccuracySummary s;
  for (double a : {0.52, 0.54, 0.56}) s.per_participant.push_back({a, std::nullopt, {}, 10, "p", {}});
  const auto r = accuracy_vs_chance_test(s);
  EXPECT_NEAR(r.t, 3.4641016151377544, 1e-9);
  EXPECT_NEAR(r.mean_diff, 0.04, 1e-12);
}
