#pragma once

/**
 * @file diff.hpp
 * @brief Comparison of two analysis reports over a partial orbital mapping.
 *
 * Deltas are B − A. Classifications are taken from the reports themselves,
 * so each side keeps the thresholds it was produced with.
 */

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "orbent/error.hpp"
#include "orbent/report.hpp"

namespace orbent {

/// Pairs (orbital in A, orbital in B), 0-based.
using OrbitalMap = std::vector<std::pair<int, int>>;

namespace detail {

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// A label, or failing that a 1-based orbital index.
inline std::optional<int> resolve_orbital(const std::string& token, const std::vector<std::string>& labels) {
  const auto it = std::find(labels.begin(), labels.end(), token);
  if (it != labels.end()) return static_cast<int>(it - labels.begin());
  if (!token.empty() && std::all_of(token.begin(), token.end(), [](unsigned char c) { return std::isdigit(c); })) {
    const long k = std::strtol(token.c_str(), nullptr, 10);
    if (k >= 1 && k <= static_cast<long>(labels.size())) return static_cast<int>(k - 1);
  }
  return std::nullopt;
}

}  // namespace detail

/**
 * @brief Parse `labelA = labelB` lines. Blank lines and lines starting with
 *        '#' are skipped; either side may also be a 1-based orbital index.
 * @throws FormatError on malformed lines, unknown orbitals, or an orbital
 *         mapped twice.
 */
inline OrbitalMap parse_orbital_map(const std::string& text, const std::vector<std::string>& labels_a,
                                    const std::vector<std::string>& labels_b) {
  OrbitalMap out;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw FormatError("map line " + std::to_string(number) + ": expected 'labelA = labelB'");
    const auto left = detail::trim(body.substr(0, eq));
    const auto right = detail::trim(body.substr(eq + 1));
    const auto a = detail::resolve_orbital(left, labels_a);
    if (!a) throw FormatError("map line " + std::to_string(number) + ": unknown orbital '" + left + "' in report A");
    const auto b = detail::resolve_orbital(right, labels_b);
    if (!b) throw FormatError("map line " + std::to_string(number) + ": unknown orbital '" + right + "' in report B");
    for (const auto& [x, y] : out)
      if (x == *a || y == *b)
        throw FormatError("map line " + std::to_string(number) + ": orbital mapped more than once");
    out.emplace_back(*a, *b);
  }
  return out;
}

/// Map orbitals whose labels agree, in the order of report A.
inline OrbitalMap match_by_label(const std::vector<std::string>& labels_a,
                                 const std::vector<std::string>& labels_b) {
  OrbitalMap out;
  for (std::size_t i = 0; i < labels_a.size(); ++i) {
    const auto it = std::find(labels_b.begin(), labels_b.end(), labels_a[i]);
    if (it != labels_b.end()) out.emplace_back(static_cast<int>(i), static_cast<int>(it - labels_b.begin()));
  }
  return out;
}

struct OrbitalDelta {
  int a, b;
  double s_a, s_b, delta;
  std::string class_a, class_b;
};

struct PairDelta {
  int a1, a2, b1, b2;
  double mi_a, mi_b, delta;
  std::string class_a, class_b;
};

struct ReportDiff {
  std::vector<std::string> labels_a, labels_b;
  OrbitalMap map;
  std::vector<OrbitalDelta> orbitals;
  std::vector<PairDelta> pairs;
  std::vector<int> unmapped_a, unmapped_b;
};

/// Δs over mapped orbitals and ΔI over pairs of mapped orbitals.
inline ReportDiff diff_reports(const ReportSummary& a, const ReportSummary& b, const OrbitalMap& map) {
  const auto na = static_cast<int>(a.labels.size()), nb = static_cast<int>(b.labels.size());
  ReportDiff out{a.labels, b.labels, map, {}, {}, {}, {}};
  std::vector<char> seen_a(static_cast<std::size_t>(na), 0), seen_b(static_cast<std::size_t>(nb), 0);
  for (const auto& [x, y] : map) {
    if (x < 0 || x >= na || y < 0 || y >= nb) throw FormatError("orbital map refers to unknown orbitals");
    seen_a[static_cast<std::size_t>(x)] = seen_b[static_cast<std::size_t>(y)] = 1;
    out.orbitals.push_back({x, y, a.s(x), b.s(y), b.s(y) - a.s(x), a.class_s[static_cast<std::size_t>(x)],
                            b.class_s[static_cast<std::size_t>(y)]});
  }
  for (std::size_t u = 0; u < map.size(); ++u)
    for (std::size_t v = u + 1; v < map.size(); ++v) {
      const auto [a1, b1] = map[u];
      const auto [a2, b2] = map[v];
      out.pairs.push_back({a1, a2, b1, b2, a.mi(a1, a2), b.mi(b1, b2), b.mi(b1, b2) - a.mi(a1, a2),
                           a.class_i[static_cast<std::size_t>(a1)][static_cast<std::size_t>(a2)],
                           b.class_i[static_cast<std::size_t>(b1)][static_cast<std::size_t>(b2)]});
    }
  for (int i = 0; i < na; ++i)
    if (!seen_a[static_cast<std::size_t>(i)]) out.unmapped_a.push_back(i);
  for (int i = 0; i < nb; ++i)
    if (!seen_b[static_cast<std::size_t>(i)]) out.unmapped_b.push_back(i);
  return out;
}

inline ojson to_json(const ReportDiff& d) {
  auto la = [&](int i) { return d.labels_a[static_cast<std::size_t>(i)]; };
  auto lb = [&](int i) { return d.labels_b[static_cast<std::size_t>(i)]; };
  ojson doc;
  doc["format"] = "orbent-diff";
  doc["version"] = kReportFormatVersion;
  doc["delta_convention"] = "B - A";
  ojson mapping = ojson::array();
  for (const auto& [x, y] : d.map) mapping.push_back({{"a", la(x)}, {"b", lb(y)}});
  doc["mapping"] = mapping;

  ojson ds = ojson::array();
  ojson transitions = ojson::array();
  for (const auto& o : d.orbitals) {
    ds.push_back({{"a", la(o.a)},
                  {"b", lb(o.b)},
                  {"s_a", round_significant(o.s_a)},
                  {"s_b", round_significant(o.s_b)},
                  {"delta", round_significant(o.delta)},
                  {"class_a", o.class_a},
                  {"class_b", o.class_b}});
    if (o.class_a != o.class_b)
      transitions.push_back({{"kind", "s"}, {"a", ojson::array({la(o.a)})}, {"b", ojson::array({lb(o.b)})},
                             {"transition", o.class_a + "->" + o.class_b}});
  }
  ojson di = ojson::array();
  for (const auto& p : d.pairs) {
    di.push_back({{"a", ojson::array({la(p.a1), la(p.a2)})},
                  {"b", ojson::array({lb(p.b1), lb(p.b2)})},
                  {"I_a", round_significant(p.mi_a)},
                  {"I_b", round_significant(p.mi_b)},
                  {"delta", round_significant(p.delta)},
                  {"class_a", p.class_a},
                  {"class_b", p.class_b}});
    if (p.class_a != p.class_b)
      transitions.push_back({{"kind", "I"}, {"a", ojson::array({la(p.a1), la(p.a2)})}, {"b", ojson::array({lb(p.b1), lb(p.b2)})},
                             {"transition", p.class_a + "->" + p.class_b}});
  }
  doc["delta_s"] = ds;
  doc["delta_I"] = di;
  doc["transitions"] = transitions;
  ojson ua = ojson::array(), ub = ojson::array();
  for (int i : d.unmapped_a) ua.push_back(la(i));
  for (int i : d.unmapped_b) ub.push_back(lb(i));
  doc["unmapped_a"] = ua;
  doc["unmapped_b"] = ub;
  return doc;
}

inline std::string render_diff(const ReportDiff& d) { return to_json(d).dump(2) + "\n"; }

}  // namespace orbent
