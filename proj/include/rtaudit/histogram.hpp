#pragma once

// Classification accuracy from pre-binned RT distributions, e.g. histograms
// digitized from a published figure. Two estimators are reported: the best
// single threshold at a bin edge, and the per-bin Bayes rule.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rtaudit/core.hpp"
#include "rtaudit/csv.hpp"
#include "rtaudit/version.hpp"

namespace rtaudit {

struct HistogramPair {
  std::vector<double> bin_edges;  // n + 1, strictly increasing (ms)
  std::vector<double> congruent_counts;
  std::vector<double> incongruent_counts;

  std::size_t bins() const noexcept { return congruent_counts.size(); }

  friend bool operator==(const HistogramPair&, const HistogramPair&) = default;
};

// EqualPriors normalizes each class to mass 0.5; RawCounts weights by counts.
enum class HistogramWeighting { EqualPriors, RawCounts };

inline void validate_histogram(const HistogramPair& h) {
  const std::size_t n = h.congruent_counts.size();
  if (n < 1) throw InvariantViolation("histogram needs at least one bin");
  if (h.incongruent_counts.size() != n)
    throw InvariantViolation("congruent and incongruent count vectors differ in length");
  if (h.bin_edges.size() != n + 1)
    throw InvariantViolation("expected " + std::to_string(n + 1) + " bin edges, got " +
                             std::to_string(h.bin_edges.size()));
  for (std::size_t i = 1; i < h.bin_edges.size(); ++i)
    if (!(h.bin_edges[i] > h.bin_edges[i - 1]))
      throw InvariantViolation("bin edges must be strictly increasing (edge " + std::to_string(i) +
                               ")");
  for (std::size_t i = 0; i < n; ++i)
    if (!(h.congruent_counts[i] >= 0.0) || !(h.incongruent_counts[i] >= 0.0) ||
        !std::isfinite(h.congruent_counts[i]) || !std::isfinite(h.incongruent_counts[i]))
      throw InvariantViolation("bin counts must be finite and nonnegative (bin " +
                               std::to_string(i) + ")");
}

namespace detail {

struct ClassMasses {
  std::vector<double> cong, incong;  // per-bin probability mass of correct classification weight
};

inline ClassMasses class_masses(const HistogramPair& h, HistogramWeighting w) {
  validate_histogram(h);
  double tc = 0.0, ti = 0.0;
  for (std::size_t i = 0; i < h.bins(); ++i) {
    tc += h.congruent_counts[i];
    ti += h.incongruent_counts[i];
  }
  if (!(tc > 0.0) || !(ti > 0.0)) throw EmptyHistogram("each class needs a positive total count");
  ClassMasses m;
  const double sc = w == HistogramWeighting::EqualPriors ? 0.5 / tc : 1.0 / (tc + ti);
  const double si = w == HistogramWeighting::EqualPriors ? 0.5 / ti : 1.0 / (tc + ti);
  for (std::size_t i = 0; i < h.bins(); ++i) {
    m.cong.push_back(h.congruent_counts[i] * sc);
    m.incong.push_back(h.incongruent_counts[i] * si);
  }
  return m;
}

}  // namespace detail

struct HistogramStepResult {
  double accuracy = 0.0;
  double threshold_edge_ms = 0.0;
  Orientation orientation = Orientation::FastIsCongruent;
};

// Best threshold over all n + 1 bin edges and both orientations. Ties keep the
// lowest edge, FastIsCongruent first.
inline HistogramStepResult histogram_step_accuracy(
    const HistogramPair& h, HistogramWeighting w = HistogramWeighting::EqualPriors) {
  const auto m = detail::class_masses(h, w);
  double cong_total = 0.0, incong_total = 0.0;
  for (std::size_t i = 0; i < h.bins(); ++i) {
    cong_total += m.cong[i];
    incong_total += m.incong[i];
  }
  HistogramStepResult best{-1.0, h.bin_edges.front(), Orientation::FastIsCongruent};
  double cong_below = 0.0, incong_below = 0.0;
  for (std::size_t k = 0; k <= h.bins(); ++k) {
    if (k > 0) {
      cong_below += m.cong[k - 1];
      incong_below += m.incong[k - 1];
    }
    const double fast_cong = cong_below + (incong_total - incong_below);
    const double fast_incong = incong_below + (cong_total - cong_below);
    if (fast_cong > best.accuracy) best = {fast_cong, h.bin_edges[k], Orientation::FastIsCongruent};
    if (fast_incong > best.accuracy)
      best = {fast_incong, h.bin_edges[k], Orientation::FastIsIncongruent};
  }
  return best;
}

// Per-bin Bayes rule: every bin goes to the class with more mass there.
inline double histogram_bayes_accuracy(const HistogramPair& h,
                                       HistogramWeighting w = HistogramWeighting::EqualPriors) {
  const auto m = detail::class_masses(h, w);
  double acc = 0.0;
  for (std::size_t i = 0; i < h.bins(); ++i) acc += std::max(m.cong[i], m.incong[i]);
  return acc;
}

// Layout: header `edge_ms,congruent,incongruent`, then n + 1 rows; the last
// row carries only the closing edge.
inline HistogramPair ingest_histogram(std::istream& in, const std::string& source = "<histogram>") {
  HistogramPair h;
  bool header_seen = false;
  bool closed = false;
  std::size_t closing_line = 0;
  csv::for_each_data_line(in, [&](std::size_t line, std::string_view text) {
    auto f = csv::split(text);
    if (!header_seen) {
      if (f.size() != 3 || f[0] != "edge_ms" || f[1] != "congruent" || f[2] != "incongruent")
        throw ParseError(source, line, "expected header 'edge_ms,congruent,incongruent'");
      header_seen = true;
      return;
    }
    if (closed)
      throw ParseError(source, line, "row after the closing edge row (line " +
                                         std::to_string(closing_line) + ")");
    if (f.size() == 1) f.resize(3);
    if (f.size() != 3) throw ParseError(source, line, "expected 3 fields");
    const auto edge = csv::parse_double(f[0]);
    if (!edge || !std::isfinite(*edge)) throw ParseError(source, line, "bad edge '" + f[0] + "'");
    h.bin_edges.push_back(*edge);
    if (f[1].empty() && f[2].empty()) {
      closed = true;
      closing_line = line;
      return;
    }
    const auto c = csv::parse_double(f[1]);
    const auto i = csv::parse_double(f[2]);
    if (!c) throw ParseError(source, line, "bad congruent count '" + f[1] + "'");
    if (!i) throw ParseError(source, line, "bad incongruent count '" + f[2] + "'");
    h.congruent_counts.push_back(*c);
    h.incongruent_counts.push_back(*i);
  });
  if (!header_seen) throw ParseError(source, 1, "empty histogram file");
  if (!closed) throw ParseError(source, 0, "missing closing edge row (edge with empty counts)");
  validate_histogram(h);
  return h;
}

inline HistogramPair ingest_histogram_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open histogram file '" + path + "'");
  return ingest_histogram(in, path);
}

inline std::string emit_histogram_csv(const HistogramPair& h) {
  validate_histogram(h);
  std::ostringstream out;
  out << "# format_version: " << kFormatVersion << "\n";
  out << "edge_ms,congruent,incongruent\n";
  for (std::size_t i = 0; i < h.bins(); ++i)
    out << csv::format_double(h.bin_edges[i]) << ',' << csv::format_double(h.congruent_counts[i])
        << ',' << csv::format_double(h.incongruent_counts[i]) << '\n';
  out << csv::format_double(h.bin_edges.back()) << ",,\n";
  return out.str();
}

}  // namespace rtaudit
