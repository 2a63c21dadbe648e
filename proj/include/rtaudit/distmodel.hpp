#pragma once

// Parametric RT models: two classes with a shared scale and equal priors,
// either normal (ms scale) or lognormal (log scale). The Bayes rule for such a
// pair is a single threshold where the class densities cross, and that
// threshold is the median of the equal-weight mixture.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rtaudit/core.hpp"
#include "rtaudit/special.hpp"

namespace rtaudit {

enum class Family { Normal, Lognormal };

inline constexpr std::string_view to_string(Family f) noexcept {
  return f == Family::Normal ? "normal" : "lognormal";
}

inline Family parse_family(std::string_view s) {
  if (s == "normal") return Family::Normal;
  if (s == "lognormal") return Family::Lognormal;
  throw DomainError("unknown distribution family '" + std::string(s) + "'");
}

// mu1 belongs to the congruent class, mu2 to the incongruent class.
// Normal: mu and sigma in ms. Lognormal: mu and sigma on the log scale.
struct DistributionModel {
  Family family = Family::Normal;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double sigma = 1.0;

  static constexpr double kPrior = 0.5;

  double location(Condition c) const noexcept {
    return c == Condition::Congruent ? mu1 : mu2;
  }
};

inline DistributionModel make_model(Family family, double mu1, double mu2, double sigma) {
  if (!std::isfinite(mu1) || !std::isfinite(mu2))
    throw DomainError("model locations must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("model sigma must be > 0");
  return {family, mu1, mu2, sigma};
}

namespace detail {

inline double standardized(const DistributionModel& m, Condition c, double x) {
  const double v = m.family == Family::Normal ? x : std::log(x);
  return (v - m.location(c)) / m.sigma;
}

}  // namespace detail

inline double class_conditional_pdf(const DistributionModel& m, Condition c, double x) {
  if (m.family == Family::Lognormal) {
    if (!(x > 0.0)) throw DomainError("lognormal density requires x > 0");
    return normal_pdf(detail::standardized(m, c, x)) / (x * m.sigma);
  }
  return normal_pdf(detail::standardized(m, c, x)) / m.sigma;
}

inline double class_conditional_cdf(const DistributionModel& m, Condition c, double x) {
  if (m.family == Family::Lognormal && !(x > 0.0)) return 0.0;
  return normal_cdf(detail::standardized(m, c, x));
}

// Equal-weight mixture of the two class conditionals.
struct MixtureMarginal {
  DistributionModel model;

  double pdf(double x) const {
    return 0.5 * (class_conditional_pdf(model, Condition::Congruent, x) +
                  class_conditional_pdf(model, Condition::Incongruent, x));
  }
  double cdf(double x) const {
    return 0.5 * (class_conditional_cdf(model, Condition::Congruent, x) +
                  class_conditional_cdf(model, Condition::Incongruent, x));
  }
};

inline double marginal_cdf(const DistributionModel& m, double x) {
  return MixtureMarginal{m}.cdf(x);
}

struct OptimalThreshold {
  double threshold_ms = 0.0;
  bool degenerate = false;  // mu1 == mu2: every threshold is equally good
};

// Crossing point of the two class densities, in ms.
inline OptimalThreshold optimal_threshold(const DistributionModel& m) {
  const double mid = 0.5 * (m.mu1 + m.mu2);
  return {m.family == Family::Normal ? mid : std::exp(mid), m.mu1 == m.mu2};
}

// Accuracy of the Bayes rule under equal priors: Phi(|mu2 - mu1| / 2 sigma).
inline double bayes_accuracy(const DistributionModel& m) {
  return normal_cdf(std::fabs(m.mu2 - m.mu1) / (2.0 * m.sigma));
}

// Moments on the ms scale.
inline double arithmetic_mean(const DistributionModel& m, Condition c) {
  if (m.family == Family::Normal) return m.location(c);
  return std::exp(m.location(c) + 0.5 * m.sigma * m.sigma);
}

inline double arithmetic_sd(const DistributionModel& m, Condition c) {
  if (m.family == Family::Normal) return m.sigma;
  return arithmetic_mean(m, c) * std::sqrt(std::expm1(m.sigma * m.sigma));
}

// Method of moments on the (log-)scale: class means of (log-)RTs and the
// pooled within-class SD as the shared scale.
inline DistributionModel fit_model(const ParticipantRecord& record, Family family) {
  detail::require_trials(record, 2);
  auto transform = [family](std::vector<double> v) {
    if (family == Family::Lognormal) {
      for (double& x : v) {
        if (!(x > 0.0)) throw DomainError("lognormal fit requires positive RTs");
        x = std::log(x);
      }
    }
    return v;
  };
  const auto cong = detail::summarize_condition(transform(rts(record, Condition::Congruent)));
  const auto incong = detail::summarize_condition(transform(rts(record, Condition::Incongruent)));
  const double sigma = detail::pooled_sd(cong, incong);
  if (!(sigma > 0.0))
    throw DegenerateData("participant '" + record.participant_id + "' has zero pooled spread");
  return {family, cong.mean_ms, incong.mean_ms, sigma};
}

// ms-scale targets for a two-class RT model: congruent mean, mean difference,
// and the within-class SD.
struct RtTargets {
  Family family = Family::Lognormal;
  double base_ms = 650.0;
  double delta_ms = 4.4;
  double sigma_ms = 146.5;
};

// Lognormal parameters are solved from the standard moment equations so that
// the class means are exactly base and base + delta, and the root mean square
// of the two class SDs equals sigma_ms.
inline DistributionModel model_from_moments(double mean1_ms, double mean2_ms, double sigma_ms,
                                            Family family) {
  if (!(sigma_ms > 0.0)) throw DomainError("sigma_ms must be > 0");
  if (family == Family::Normal) return make_model(family, mean1_ms, mean2_ms, sigma_ms);
  if (!(mean1_ms > 0.0) || !(mean2_ms > 0.0))
    throw DomainError("lognormal class means must be positive");
  const double mean_sq = 0.5 * (mean1_ms * mean1_ms + mean2_ms * mean2_ms);
  const double s2 = std::log1p(sigma_ms * sigma_ms / mean_sq);
  return make_model(family, std::log(mean1_ms) - 0.5 * s2, std::log(mean2_ms) - 0.5 * s2,
                    std::sqrt(s2));
}

inline DistributionModel matched_model(const RtTargets& t) {
  return model_from_moments(t.base_ms, t.base_ms + t.delta_ms, t.sigma_ms, t.family);
}

}  // namespace rtaudit
