#pragma once

// Trial-level CSV ingestion.
//
//   # format_version: 1          (optional comment lines start with '#')
//   participant_id,condition,rt_ms
//   p01,congruent,512.3
//   p01,incongruent,530.0
//
// Condition labels are case-insensitive. A file may carry `rt_s` instead of
// `rt_ms`; those values are converted to milliseconds. Other schemas are
// handled with a column map such as
//   participant_id=Subject,condition=Prime,rt_ms=RT,congruent=same|1,incongruent=diff|2

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rtaudit/core.hpp"
#include "rtaudit/csv.hpp"
#include "rtaudit/version.hpp"

namespace rtaudit {

struct ColumnMap {
  std::string participant = "participant_id";
  std::string condition = "condition";
  std::string rt = "rt_ms";
  bool rt_in_seconds = false;
  bool rt_explicit = false;  // set when the map names the RT column
  std::vector<std::string> congruent_labels{"congruent"};
  std::vector<std::string> incongruent_labels{"incongruent"};
};

namespace detail {

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::ranges::transform(out, out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

inline std::vector<std::string> split_on(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.emplace_back(csv::trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

}  // namespace detail

inline ColumnMap parse_column_map(std::string_view spec) {
  ColumnMap m;
  if (csv::trim(spec).empty()) return m;
  for (const auto& item : detail::split_on(spec, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
      throw DomainError("column map entry '" + item + "' is not key=value");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "participant_id") {
      m.participant = value;
    } else if (key == "condition") {
      m.condition = value;
    } else if (key == "rt_ms" || key == "rt_s") {
      m.rt = value;
      m.rt_in_seconds = key == "rt_s";
      m.rt_explicit = true;
    } else if (key == "congruent" || key == "incongruent") {
      auto labels = detail::split_on(value, '|');
      for (auto& l : labels) l = detail::lower(l);
      (key == "congruent" ? m.congruent_labels : m.incongruent_labels) = std::move(labels);
    } else {
      throw DomainError("unknown column map key '" + key + "'");
    }
  }
  return m;
}

struct IngestOptions {
  std::optional<double> rt_min_ms;
  std::optional<double> rt_max_ms;
  ColumnMap columns;
};

inline std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

// Too few trials is left to the analyses, which raise DegenerateData.
inline void throw_if_invalid(const Dataset& ds) {
  auto violations = validate_dataset(ds);
  std::erase_if(violations, [](const Violation& v) { return v.kind == ViolationKind::TooFewTrials; });
  if (violations.empty()) return;
  std::string msg = std::to_string(violations.size()) + " invariant violation(s):";
  for (std::size_t i = 0; i < violations.size() && i < 5; ++i) {
    const auto& v = violations[i];
    msg += " [" + std::string(to_string(v.kind)) + " participant '" + v.participant_id + "'";
    if (v.trial_index) msg += " trial " + std::to_string(*v.trial_index);
    msg += ": " + v.message + "]";
  }
  if (violations.size() > 5) msg += " ...";
  throw InvariantViolation(msg);
}

// Parses CSV text. Participants keep first-appearance order and trials keep
// file order.
inline Dataset ingest_trials(std::string_view text, const IngestOptions& options = {},
                             const std::string& source = "<trials>") {
  ColumnMap cols = options.columns;
  std::istringstream in{std::string(text)};
  Dataset ds;
  std::map<std::string, std::size_t> index;
  std::optional<std::size_t> ci_part, ci_cond, ci_rt;
  std::size_t width = 0, rows = 0, dropped = 0;

  csv::for_each_data_line(in, [&](std::size_t line, std::string_view content) {
    const auto f = csv::split(content);
    if (!ci_part) {
      auto find = [&](const std::string& name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < f.size(); ++i)
          if (f[i] == name) return i;
        return std::nullopt;
      };
      ci_part = find(cols.participant);
      ci_cond = find(cols.condition);
      ci_rt = find(cols.rt);
      if (!ci_rt && !cols.rt_explicit) {
        ci_rt = find("rt_s");
        cols.rt_in_seconds = ci_rt.has_value();
      }
      if (!ci_part || !ci_cond || !ci_rt)
        throw ParseError(source, line,
                         "header must name columns '" + cols.participant + "', '" +
                             cols.condition + "' and '" + cols.rt + "'");
      width = f.size();
      return;
    }
    if (f.size() != width)
      throw ParseError(source, line, "expected " + std::to_string(width) + " fields, got " +
                                         std::to_string(f.size()));
    ++rows;
    const std::string& pid = f[*ci_part];
    if (pid.empty()) throw ParseError(source, line, "empty participant id");

    const std::string label = detail::lower(f[*ci_cond]);
    Condition cond;
    if (std::ranges::find(cols.congruent_labels, label) != cols.congruent_labels.end())
      cond = Condition::Congruent;
    else if (std::ranges::find(cols.incongruent_labels, label) != cols.incongruent_labels.end())
      cond = Condition::Incongruent;
    else
      throw ParseError(source, line, "unknown condition label '" + f[*ci_cond] + "'");

    auto rt = csv::parse_double(f[*ci_rt]);
    if (!rt) throw ParseError(source, line, "bad reaction time '" + f[*ci_rt] + "'");
    if (cols.rt_in_seconds) *rt *= 1000.0;

    if ((options.rt_min_ms && *rt < *options.rt_min_ms) ||
        (options.rt_max_ms && *rt > *options.rt_max_ms)) {
      ++dropped;
      return;
    }
    auto [it, inserted] = index.try_emplace(pid, ds.participants.size());
    if (inserted) ds.participants.push_back({pid, {}});
    ds.participants[it->second].trials.push_back({*rt, cond});
  });
  if (!ci_part) throw ParseError(source, 1, "missing header row");

  ds.metadata["source"] = source;
  ds.metadata["units"] = "ms";
  ds.metadata["rt_unit_in_file"] = cols.rt_in_seconds ? "s" : "ms";
  ds.metadata["rows_read"] = std::to_string(rows);
  ds.metadata["dropped_count"] = std::to_string(dropped);
  ds.metadata["sha256"] = sha256_hex(text);
  if (options.rt_min_ms) ds.metadata["rt_min_ms"] = csv::format_double(*options.rt_min_ms);
  if (options.rt_max_ms) ds.metadata["rt_max_ms"] = csv::format_double(*options.rt_max_ms);
  throw_if_invalid(ds);
  return ds;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline Dataset ingest_trials_file(const std::string& path, const IngestOptions& options = {}) {
  return ingest_trials(read_file(path), options, path);
}

inline std::string emit_trials_csv(const Dataset& ds) {
  std::string out = "# format_version: " + std::to_string(kFormatVersion) + "\n";
  out += "participant_id,condition,rt_ms\n";
  for (const auto& p : ds.participants)
    for (const auto& t : p.trials) {
      out += p.participant_id;
      out += ',';
      out += to_string(t.condition);
      out += ',';
      out += csv::format_double(t.rt_ms);
      out += '\n';
    }
  return out;
}

}  // namespace rtaudit
