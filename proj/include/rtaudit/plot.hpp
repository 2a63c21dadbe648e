#pragma once

// Self-contained SVG figures of the two distributions that matter:
//   trial_distributions     single-trial RT densities (what a classifier sees)
//   mean_sem_distributions  normal curves at the condition means with SD = SEM
//                           (what a significance test sees)
// Congruent is drawn dashed, incongruent solid. Output is byte-deterministic.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rtaudit/classify.hpp"
#include "rtaudit/core.hpp"
#include "rtaudit/distmodel.hpp"
#include "rtaudit/inferstats.hpp"
#include "rtaudit/version.hpp"

namespace rtaudit {

enum class PlotStyle { TrialDistributions, MeanSemDistributions };

inline PlotStyle parse_plot_style(std::string_view s) {
  if (s == "trial_distributions") return PlotStyle::TrialDistributions;
  if (s == "mean_sem_distributions") return PlotStyle::MeanSemDistributions;
  throw DomainError("unknown plot style '" + std::string(s) + "'");
}

// A parametric model plus the design needed to predict the SEM.
struct ModelSource {
  DistributionModel model;
  double trials_per_condition = 180.0;
  double participants = 66.0;
};

using PlotSource = std::variant<ModelSource, ParticipantRecord, Dataset>;

namespace detail {

struct Series {
  std::vector<std::pair<double, double>> points;
  bool dashed = false;
};

struct Figure {
  std::string title;
  std::string x_label;
  std::vector<std::string> notes;     // printed under the title
  std::vector<std::string> comments;  // provenance, written as XML comments
  std::vector<Series> series;
};

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline double nice_step(double range, int target_ticks) {
  const double raw = range / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  return (r < 1.5 ? 1.0 : r < 3.0 ? 2.0 : r < 7.0 ? 5.0 : 10.0) * mag;
}

inline std::string render_svg(const Figure& fig) {
  constexpr double width = 640, height = 400;
  constexpr double left = 60, right = 20, top = 70, bottom = 50;
  double x0 = fig.series.front().points.front().first, x1 = x0, ymax = 0.0;
  for (const auto& s : fig.series)
    for (const auto& [x, y] : s.points) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      ymax = std::max(ymax, y);
    }
  if (!(x1 > x0) || !(ymax > 0.0)) throw DegenerateData("nothing to plot: zero-width distributions");
  ymax *= 1.1;
  const double pw = width - left - right, ph = height - top - bottom;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return top + ph - y / ymax * ph; };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<!-- format_version: " + std::to_string(kFormatVersion) + " -->\n";
  for (const auto& c : fig.comments) out += "<!-- " + c + " -->\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
         "viewBox=\"0 0 640 400\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"400\" fill=\"white\"/>\n";
  out += "<text x=\"320\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
         xml_escape(fig.title) + "</text>\n";
  double note_y = 40;
  for (const auto& n : fig.notes) {
    out += "<text x=\"320\" y=\"" + num(note_y) + "\" text-anchor=\"middle\">" + xml_escape(n) +
           "</text>\n";
    note_y += 15;
  }
  // axes
  out += "<line x1=\"" + num(left) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(left + pw) +
         "\" y2=\"" + num(top + ph) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" +
         num(top + ph) + "\" stroke=\"black\"/>\n";
  const double step = nice_step(x1 - x0, 6);
  for (double t = std::ceil(x0 / step) * step; t <= x1 + 1e-9 * step; t += step) {
    const double px = sx(t);
    char label[32];
    std::snprintf(label, sizeof label, "%g", std::fabs(t) < 1e-9 * step ? 0.0 : t);
    out += "<line x1=\"" + num(px) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(px) +
           "\" y2=\"" + num(top + ph + 5) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(px) + "\" y=\"" + num(top + ph + 18) +
           "\" text-anchor=\"middle\">" + label + "</text>\n";
  }
  out += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(height - 10) +
         "\" text-anchor=\"middle\">" + xml_escape(fig.x_label) + "</text>\n";
  out += "<text x=\"18\" y=\"" + num(top + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         num(top + ph / 2) + ")\">density</text>\n";

  for (const auto& s : fig.series) {
    out += "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"";
    if (s.dashed) out += " stroke-dasharray=\"6,4\"";
    out += " points=\"";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      if (i) out += ' ';
      out += num(sx(s.points[i].first)) + "," + num(sy(s.points[i].second));
    }
    out += "\"/>\n";
  }
  // legend
  const double lx = left + pw - 130, ly = top + 12;
  out += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(lx + 30) + "\" y2=\"" +
         num(ly) + "\" stroke=\"black\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"/>\n";
  out += "<text x=\"" + num(lx + 36) + "\" y=\"" + num(ly + 4) + "\">congruent</text>\n";
  out += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly + 18) + "\" x2=\"" + num(lx + 30) +
         "\" y2=\"" + num(ly + 18) + "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  out += "<text x=\"" + num(lx + 36) + "\" y=\"" + num(ly + 22) + "\">incongruent</text>\n";
  out += "</svg>\n";
  return out;
}

inline std::string fmtd(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

inline Series density_curve(const DistributionModel& m, Condition c, double x0, double x1) {
  constexpr int n = 400;
  Series s;
  s.dashed = c == Condition::Congruent;
  for (int i = 0; i <= n; ++i) {
    const double x = x0 + (x1 - x0) * i / n;
    s.points.emplace_back(x, m.family == Family::Lognormal && x <= 0.0
                                 ? 0.0
                                 : class_conditional_pdf(m, c, x));
  }
  return s;
}

inline std::pair<double, double> model_range(const DistributionModel& m) {
  const double lo = std::min(m.mu1, m.mu2) - 4.0 * m.sigma;
  const double hi = std::max(m.mu1, m.mu2) + 4.0 * m.sigma;
  if (m.family == Family::Normal) return {lo, hi};
  return {std::exp(lo), std::exp(hi)};
}

inline Figure model_figure(const DistributionModel& m, std::string title) {
  Figure fig;
  fig.title = std::move(title);
  fig.x_label = "reaction time (ms)";
  const auto [x0, x1] = model_range(m);
  fig.series.push_back(density_curve(m, Condition::Congruent, x0, x1));
  fig.series.push_back(density_curve(m, Condition::Incongruent, x0, x1));
  const double diff = arithmetic_mean(m, Condition::Incongruent) - arithmetic_mean(m, Condition::Congruent);
  const double sd = std::sqrt(0.5 * (std::pow(arithmetic_sd(m, Condition::Congruent), 2) +
                                     std::pow(arithmetic_sd(m, Condition::Incongruent), 2)));
  fig.notes.push_back("mean difference: " + fmtd("%.1f ms", diff) + ", within-subject SD: " +
                      fmtd("%.1f ms", sd) + ", Bayes accuracy: " +
                      fmtd("%.2f%%", 100.0 * bayes_accuracy(m)));
  fig.comments.push_back("model: " + std::string(to_string(m.family)) + fmtd(" mu1=%.9g", m.mu1) +
                         fmtd(" mu2=%.9g", m.mu2) + fmtd(" sigma=%.9g", m.sigma));
  return fig;
}

// Density-normalized histogram outline of one condition on shared bins.
inline Series histogram_outline(const std::vector<double>& values, Condition c, double x0,
                                double x1, int bins) {
  std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
  const double w = (x1 - x0) / bins;
  for (double v : values) {
    auto b = static_cast<long>(std::floor((v - x0) / w));
    b = std::clamp<long>(b, 0, bins - 1);
    counts[static_cast<std::size_t>(b)] += 1.0;
  }
  Series s;
  s.dashed = c == Condition::Congruent;
  const double scale = 1.0 / (static_cast<double>(values.size()) * w);
  s.points.emplace_back(x0, 0.0);
  for (int b = 0; b < bins; ++b) {
    const double y = counts[static_cast<std::size_t>(b)] * scale;
    s.points.emplace_back(x0 + b * w, y);
    s.points.emplace_back(x0 + (b + 1) * w, y);
  }
  s.points.emplace_back(x1, 0.0);
  return s;
}

inline Figure trial_figure(const ModelSource& src) {
  auto fig = model_figure(src.model, "Single-trial RT distributions (model)");
  fig.comments.push_back("source: parametric model");
  return fig;
}

inline Figure trial_figure(const ParticipantRecord& record, Family family) {
  const auto model = fit_model(record, family);
  const auto cong = rts(record, Condition::Congruent);
  const auto incong = rts(record, Condition::Incongruent);
  const auto [lo, hi] = std::ranges::minmax(record.trials, {}, &Trial::rt_ms);
  if (!(hi.rt_ms > lo.rt_ms)) throw DegenerateData("all RTs are identical");
  const int bins = std::clamp(static_cast<int>(std::sqrt(static_cast<double>(record.trials.size()))), 5, 40);
  Figure fig;
  fig.title = "RT histograms, participant " + record.participant_id;
  fig.x_label = "reaction time (ms)";
  fig.series.push_back(histogram_outline(cong, Condition::Congruent, lo.rt_ms, hi.rt_ms, bins));
  fig.series.push_back(histogram_outline(incong, Condition::Incongruent, lo.rt_ms, hi.rt_ms, bins));
  fig.series.push_back(density_curve(model, Condition::Congruent, lo.rt_ms, hi.rt_ms));
  fig.series.push_back(density_curve(model, Condition::Incongruent, lo.rt_ms, hi.rt_ms));
  const auto med = median_classifier(record);
  const auto s = summarize_participant(record);
  fig.notes.push_back("mean difference: " + fmtd("%.1f ms", s.mean_diff_ms()) +
                      ", pooled SD: " + fmtd("%.1f ms", s.pooled_sd_ms) +
                      ", median-classifier accuracy: " + fmtd("%.1f%%", 100.0 * med.accuracy));
  fig.comments.push_back("fit: " + std::string(to_string(family)) +
                         " method of moments on the log scale for lognormal, ms scale for normal; "
                         "class locations = class means, shared scale = pooled within-class SD");
  fig.comments.push_back("model: " + std::string(to_string(model.family)) +
                         fmtd(" mu1=%.9g", model.mu1) + fmtd(" mu2=%.9g", model.mu2) +
                         fmtd(" sigma=%.9g", model.sigma));
  return fig;
}

// Idealized participant: per-participant fits averaged parameter-wise.
inline Figure trial_figure(const Dataset& ds, Family family) {
  if (ds.participants.empty()) throw EmptyInput("dataset has no participants");
  double mu1 = 0.0, mu2 = 0.0, sigma = 0.0;
  for (const auto& p : ds.participants) {
    const auto m = fit_model(p, family);
    mu1 += m.mu1;
    mu2 += m.mu2;
    sigma += m.sigma;
  }
  const double n = static_cast<double>(ds.participants.size());
  const auto model = make_model(family, mu1 / n, mu2 / n, sigma / n);
  auto fig = model_figure(model, "Single-trial RT distributions (idealized participant)");
  fig.comments.push_back("fit: " + std::string(to_string(family)) +
                         " per-participant method-of-moments fits, parameters averaged across " +
                         std::to_string(ds.participants.size()) + " participants");
  return fig;
}

inline Figure mean_sem_figure(double mean_cong, double mean_incong, double sem, std::string origin) {
  if (!(sem > 0.0) || !std::isfinite(sem)) throw DegenerateData("SEM is zero; nothing to plot");
  const DistributionModel m{Family::Normal, mean_cong, mean_incong, sem};
  Figure fig;
  fig.title = "Distributions of the condition means (SD = SEM)";
  fig.x_label = "mean reaction time (ms)";
  const auto [x0, x1] = model_range(m);
  fig.series.push_back(density_curve(m, Condition::Congruent, x0, x1));
  fig.series.push_back(density_curve(m, Condition::Incongruent, x0, x1));
  fig.notes.push_back("mean difference: " + fmtd("%.1f ms", mean_incong - mean_cong) +
                      ", SEM: " + fmtd("%.1f ms", sem));
  fig.notes.push_back("note the abscissa scale differs from the single-trial plot");
  fig.comments.push_back("source: " + origin);
  return fig;
}

}  // namespace detail

inline std::string emit_distribution_plot(const PlotSource& source, PlotStyle style,
                                          Family fit_family = Family::Lognormal) {
  using namespace detail;
  Figure fig;
  if (style == PlotStyle::TrialDistributions) {
    fig = std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, ModelSource>) return trial_figure(s);
          else return trial_figure(s, fit_family);
        },
        source);
  } else if (const auto* m = std::get_if<ModelSource>(&source)) {
    const auto& model = m->model;
    const double sd = std::sqrt(0.5 * (std::pow(arithmetic_sd(model, Condition::Congruent), 2) +
                                       std::pow(arithmetic_sd(model, Condition::Incongruent), 2)));
    fig = mean_sem_figure(arithmetic_mean(model, Condition::Congruent),
                          arithmetic_mean(model, Condition::Incongruent),
                          predict_sem(sd, m->trials_per_condition, m->participants),
                          "model; SEM predicted from the within-subject SD and the design");
  } else if (const auto* r = std::get_if<ParticipantRecord>(&source)) {
    const auto s = summarize_participant(*r);
    const double sem = std::sqrt(s.congruent.sd_ms * s.congruent.sd_ms / s.congruent.count +
                                 s.incongruent.sd_ms * s.incongruent.sd_ms / s.incongruent.count);
    fig = mean_sem_figure(s.congruent.mean_ms, s.incongruent.mean_ms, sem,
                          "participant " + r->participant_id + "; SEM of the condition difference");
  } else {
    const auto& ds = std::get<Dataset>(source);
    const auto summary = summarize_dataset(ds);
    const auto t = paired_t_test(ds);
    fig = mean_sem_figure(summary.mean_congruent_ms, summary.mean_incongruent_ms, t.sem_diff,
                          "dataset; SEM of the per-participant mean differences");
  }
  return render_svg(fig);
}

}  // namespace rtaudit
