#ifndef YAMABE_REGISTRY_HPP
#define YAMABE_REGISTRY_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "yamabe/codim3.hpp"
#include "yamabe/constants.hpp"
#include "yamabe/errors.hpp"

namespace yamabe::aggregate {

enum class Direction { Lower, LowerStrict, Upper, UpperStrict, Equal };

/// Where a registry value comes from: re-derivable by this library
/// (computed), printed in the threshold tables the library reproduces
/// (tabulated), or imported from external literature (cited).
enum class Provenance { Computed, Tabulated, Cited };

inline const char* token(Direction d) {
  switch (d) {
    case Direction::Lower: return "lower";
    case Direction::LowerStrict: return "lower-strict";
    case Direction::Upper: return "upper";
    case Direction::UpperStrict: return "upper-strict";
    case Direction::Equal: return "equal";
  }
  return "?";
}

inline const char* token(Provenance p) {
  switch (p) {
    case Provenance::Computed: return "computed";
    case Provenance::Tabulated: return "tabulated";
    case Provenance::Cited: return "cited";
  }
  return "?";
}

/// One bound fact. `k` absent means the aggregated invariant (the minimum
/// over k = 2..m-3 for the spin threshold, or a non-model-space quantity
/// like the quaternionic-plane products). `value` absent means unknown.
struct BoundRegistryEntry {
  std::string invariant;
  int m = 0;
  std::optional<int> k;
  Direction direction = Direction::Lower;
  std::optional<double> value;  // may be +infinity
  Provenance provenance = Provenance::Computed;
  std::string citation;

  bool operator==(const BoundRegistryEntry&) const = default;
};

struct Registry {
  std::vector<BoundRegistryEntry> entries;
  std::vector<std::string> notes;

  bool operator==(const Registry&) const = default;
};

/// Identification rule between the surgery constant and its
/// solution-defined counterpart: the two coincide for k <= m-4 and for
/// k = m-3 <= 6; elsewhere they stay distinct symbols.
inline bool lambda_equals_tilde(int m, int k) {
  return k <= m - 4 || (k == m - 3 && k <= 6);
}

namespace detail {

inline void add(Registry& r, std::string invariant, int m,
                std::optional<int> k, Direction d, std::optional<double> v,
                Provenance p, std::string citation) {
  r.entries.push_back({std::move(invariant), m, k, d, v, p,
                       std::move(citation)});
}

}  // namespace detail

/// Highest m for which the registry carries model-space entries.
inline constexpr int registry_max_m = 15;

/// Published aggregated spin-threshold row, m = 5..13.
inline const std::vector<std::pair<int, double>>& spin_threshold_row() {
  static const std::vector<std::pair<int, double>> row = {
      {5, 45.1},  {6, 50.0},   {7, 65.2},   {8, 78.7},  {9, 91.8},
      {10, 104.9}, {11, 118.1}, {12, 131.5}, {13, 145.0}};
  return row;
}

/// Published lower bounds for Q* of HP^2 x R^{m-8}, m = 8..13.
inline const std::vector<std::pair<int, double>>& hp2_row() {
  static const std::vector<std::pair<int, double>> row = {
      {8, 121.4}, {9, 138.5}, {10, 97.3}, {11, 135.9}, {12, 158.7},
      {13, 178.0}};
  return row;
}

/// The built-in registry: computed threshold values for the codimension
/// 1, 2 and 3 slots, the published aggregate rows, and the handful of
/// low-dimensional constants imported from the literature.
inline Registry builtin_registry() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  Registry r;
  using detail::add;

  // k = m-1: two hyperbolic (or flat) copies; everything collapses to the
  // sphere value except the function-side solution invariant, which is
  // infinite in dimensions 3 and 4.
  for (int m = 3; m <= registry_max_m; ++m) {
    const double qs = yamabe_sphere<double>(m);
    const char* cite = "hyperbolic copies carry the sphere value";
    add(r, "lambda_star", m, m - 1, Direction::Equal, qs,
        Provenance::Computed, cite);
    add(r, "lambda_spin_star", m, m - 1, Direction::Equal, qs,
        Provenance::Computed, cite);
    add(r, "lambda_spin_tilde", m, m - 1, Direction::Equal, qs,
        Provenance::Computed, cite);
    add(r, "lambda_spin", m, m - 1, Direction::Equal, qs,
        Provenance::Computed, cite);
    add(r, "lambda", m, m - 1, Direction::Equal, qs, Provenance::Computed,
        cite);
    add(r, "lambda_tilde", m, m - 1, Direction::Equal,
        m <= 4 ? inf : qs, Provenance::Computed,
        m <= 4 ? "flat-space solutions fail square-integrability below "
                 "dimension 5"
               : "flat-space solution realizes the sphere value");
  }

  // k = m-2: the infimum of c^{2/m} Q*(S^m) over c in [0,1] vanishes.
  for (int m = 3; m <= registry_max_m; ++m)
    add(r, "lambda_star", m, m - 2, Direction::Equal, 0.0,
        Provenance::Computed, "infimum of c^{2/m} sphere values");

  // k = m-3: numeric infimum of L_m, a bound for the functional, the
  // solution and the spin thresholds alike.
  for (int m = 6; m <= registry_max_m; ++m) {
    const double v = codim3::infimum_L<double>(m).value;
    const char* cite = "codimension-3 infimum of L_m";
    add(r, "lambda_star", m, m - 3, Direction::Lower, v,
        Provenance::Computed, cite);
    add(r, "lambda_tilde", m, m - 3, Direction::Lower, v,
        Provenance::Computed, cite);
    add(r, "lambda_spin", m, m - 3, Direction::Lower, v,
        Provenance::Computed, cite);
  }

  // Low-dimensional codimension-3 constants.
  add(r, "lambda_star", 3, 0, Direction::Equal, yamabe_sphere<double>(3),
      Provenance::Computed, "threshold equals the sphere value in dimension 3");
  add(r, "lambda_star", 4, 1, Direction::LowerStrict, 38.9, Provenance::Cited,
      "companion estimate, dimension 4");
  add(r, "lambda_star", 5, 2, Direction::LowerStrict, 45.1, Provenance::Cited,
      "companion estimate, dimension 5");
  add(r, "lambda_spin", 5, 2, Direction::LowerStrict, 45.1, Provenance::Cited,
      "companion estimate lifted along the low-codimension identification");

  // Published aggregate rows.
  for (const auto& [m, v] : spin_threshold_row())
    add(r, "lambda_spin", m, std::nullopt, Direction::Lower, v,
        Provenance::Tabulated, "published aggregate threshold row");
  for (const auto& [m, v] : hp2_row())
    add(r, "q_hp2xr", m, std::nullopt, Direction::Lower, v,
        Provenance::Tabulated,
        "quaternionic plane times flat factor, published row");
  add(r, "q_hp2", 8, std::nullopt, Direction::Equal, 121.4967,
      Provenance::Tabulated, "canonical quaternionic-plane value (Obata)");

  // Each slot of a minimum is bounded below by the minimum itself, so the
  // aggregate row backs every k <= m-4 slot it ranges over.
  for (const auto& [m, v] : spin_threshold_row())
    for (int k = 2; k <= m - 4; ++k)
      add(r, "lambda_spin", m, k, Direction::Lower, v, Provenance::Tabulated,
          "aggregate row bounds each slot of its minimum");

  r.notes.push_back(
      "the aggregated spin threshold at m = 6 is tabulated without an "
      "in-scope derivation; the codimension-3 table starts at m = 7");
  r.notes.push_back(
      "conjecture, not a fact: the codimension-2 spin threshold may lie "
      "below the aggregated one; no entry encodes it");
  return r;
}

namespace detail {

inline bool is_lower_bound(Direction d) {
  return d == Direction::Lower || d == Direction::LowerStrict ||
         d == Direction::Equal;
}

}  // namespace detail

/// Best known lower bound for one invariant slot, or nullopt.
inline std::optional<double> best_lower_bound(const Registry& r,
                                              const std::string& invariant,
                                              int m, std::optional<int> k) {
  std::optional<double> best;
  for (const auto& e : r.entries) {
    if (e.invariant != invariant || e.m != m || e.k != k) continue;
    if (!e.value || !detail::is_lower_bound(e.direction)) continue;
    if (!best || *e.value > *best) best = *e.value;
  }
  return best;
}

/// Aggregated spin threshold: the minimum over k = 2..m-3 of the best
/// available per-slot lower bound. Unknown (nullopt) as soon as one slot
/// has no entry; unknown is a value here, not an error.
inline std::optional<double> lambda_spin_m(int m, const Registry& r) {
  if (m < 5) throw domain_error("lambda_spin_m: requires m >= 5");
  std::optional<double> result;
  for (int k = 2; k <= m - 3; ++k) {
    const auto slot = best_lower_bound(r, "lambda_spin", m, k);
    if (!slot) return std::nullopt;
    if (!result || *slot < *result) result = *slot;
  }
  return result;
}

/// A min-expression over named invariants, some of which may be unknown.
struct SigmaTerm {
  std::string id;
  std::optional<double> value;
};

struct SigmaBoundExpression {
  int m = 0;
  std::vector<SigmaTerm> terms;  // combined with min

  /// Numeric value of the expression; evaluable only when every term is
  /// known.
  std::optional<double> value() const {
    std::optional<double> v;
    for (const auto& t : terms) {
      if (!t.value) return std::nullopt;
      if (!v || *t.value < *v) v = *t.value;
    }
    return v;
  }

  std::string render() const {
    std::string s = "min{";
    for (size_t i = 0; i < terms.size(); ++i) {
      if (i) s += ", ";
      s += terms[i].id;
      s += '=';
      if (terms[i].value) {
        char buf[40];
        const auto res = std::to_chars(buf, buf + sizeof buf, *terms[i].value,
                                       std::chars_format::general, 17);
        s.append(buf, res.ptr);
      } else {
        s += "unknown";
      }
    }
    s += '}';
    return s;
  }
};

enum class SigmaVariant { SimplyConnected, FundamentalGroup };

/// Case analysis for the lower bound of the spin Yamabe invariant of a
/// closed spin manifold: which invariants enter the minimum depends on the
/// dimension, and the fundamental-group variant adds the codimension-2
/// spin threshold. Terms without a registry value stay symbolic.
inline SigmaBoundExpression sigma_spin_lower(int m, SigmaVariant variant,
                                             const Registry& r) {
  if (m < 5) throw domain_error("sigma_spin_lower: requires m >= 5");
  SigmaBoundExpression expr;
  expr.m = m;
  auto slot_id = [m](int k) {
    return "lambda_spin[m=" + std::to_string(m) + ",k=" + std::to_string(k) +
           "]";
  };
  if (m == 9 || m == 10)
    expr.terms.push_back({slot_id(1),
                          best_lower_bound(r, "lambda_spin", m, 1)});
  expr.terms.push_back(
      {"lambda_spin_min[m=" + std::to_string(m) + "]", lambda_spin_m(m, r)});
  if (m >= 8)
    expr.terms.push_back({"q_hp2xr[m=" + std::to_string(m) + "]",
                          best_lower_bound(r, "q_hp2xr", m, std::nullopt)});
  if (variant == SigmaVariant::FundamentalGroup)
    expr.terms.push_back({slot_id(m - 2),
                          best_lower_bound(r, "lambda_spin", m, m - 2)});
  return expr;
}

// ---------------------------------------------------------------------------
// Serialization: one entry per line,
//   invariant|m|k|direction|value|provenance|citation
// with '-' for an absent k, 'inf' for +infinity and 'unknown' for an absent
// value. Doubles print with 17 significant digits, so re-import is exact.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_value(std::optional<double> v) {
  if (!v) return "unknown";
  if (std::isinf(*v)) return *v > 0 ? "inf" : "-inf";
  char buf[40];
  const auto res =
      std::to_chars(buf, buf + sizeof buf, *v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline double parse_finite(const std::string& s) {
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw domain_error("registry: bad numeric field '" + s + "'");
  return v;
}

inline std::optional<double> parse_value(const std::string& s) {
  if (s == "unknown") return std::nullopt;
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return parse_finite(s);
}

inline Direction parse_direction(const std::string& s) {
  if (s == "lower") return Direction::Lower;
  if (s == "lower-strict") return Direction::LowerStrict;
  if (s == "upper") return Direction::Upper;
  if (s == "upper-strict") return Direction::UpperStrict;
  if (s == "equal") return Direction::Equal;
  throw domain_error("registry: bad direction token '" + s + "'");
}

inline Provenance parse_provenance(const std::string& s) {
  if (s == "computed") return Provenance::Computed;
  if (s == "tabulated") return Provenance::Tabulated;
  if (s == "cited") return Provenance::Cited;
  throw domain_error("registry: bad provenance token '" + s + "'");
}

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  return out;
}

}  // namespace detail

inline std::string to_lines(const Registry& r) {
  std::string out;
  for (const auto& note : r.notes) out += "# " + note + "\n";
  for (const auto& e : r.entries) {
    out += e.invariant;
    out += '|';
    out += std::to_string(e.m);
    out += '|';
    out += e.k ? std::to_string(*e.k) : std::string("-");
    out += '|';
    out += token(e.direction);
    out += '|';
    out += detail::format_value(e.value);
    out += '|';
    out += token(e.provenance);
    out += '|';
    out += e.citation;
    out += '\n';
  }
  return out;
}

inline Registry from_lines(const std::string& text) {
  Registry r;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      r.notes.push_back(line.substr(2));
      continue;
    }
    const auto f = detail::split(line, '|');
    if (f.size() != 7)
      throw domain_error("registry: malformed line '" + line + "'");
    BoundRegistryEntry e;
    e.invariant = f[0];
    e.m = std::stoi(f[1]);
    e.k = f[2] == "-" ? std::nullopt : std::optional<int>(std::stoi(f[2]));
    e.direction = detail::parse_direction(f[3]);
    e.value = detail::parse_value(f[4]);
    e.provenance = detail::parse_provenance(f[5]);
    e.citation = f[6];
    r.entries.push_back(std::move(e));
  }
  return r;
}

}  // namespace yamabe::aggregate

#endif
