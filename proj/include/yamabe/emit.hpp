#ifndef YAMABE_EMIT_HPP
#define YAMABE_EMIT_HPP

#include <charconv>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "yamabe/codim3.hpp"
#include "yamabe/constants.hpp"
#include "yamabe/errors.hpp"
#include "yamabe/model_space.hpp"
#include "yamabe/registry.hpp"
#include "yamabe/relations.hpp"
#include "yamabe/rounding.hpp"

namespace yamabe::emit {

enum class Format { Text, Csv, Json };

/// How a command renders: format plus an optional rounding override.
/// Absent override means each column keeps its table rule; None emits the
/// raw binary64 values.
struct OutputSpec {
  Format format = Format::Text;
  std::optional<Rounding> rounding;
};

using ordered_json = nlohmann::ordered_json;

/// Locale-independent 17-significant-digit rendering; re-parses exactly.
inline std::string fmt_raw(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  const auto res =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline std::string fmt_tenth(double v) {
  char buf[40];
  const auto res =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 1);
  return std::string(buf, res.ptr);
}

namespace detail {

/// One emitted value: raw plus its table rounding rule.
struct Cell {
  double raw = 0;
  Rounding rule = Rounding::None;
  double rounded = 0;  // under `rule`
};

inline std::string render(const Cell& cell, const OutputSpec& spec) {
  const Rounding rule = spec.rounding.value_or(cell.rule);
  if (rule == Rounding::None) return fmt_raw(cell.raw);
  if (rule == cell.rule) return fmt_tenth(cell.rounded);
  return fmt_tenth(round_tenth(cell.raw, rule));
}

inline ordered_json json_value(const Cell& cell, const OutputSpec& spec) {
  const Rounding rule = spec.rounding.value_or(cell.rule);
  if (rule == Rounding::None) return cell.raw;
  if (rule == cell.rule) return cell.rounded;
  return round_tenth(cell.raw, rule);
}

inline const char* rule_name(Rounding r) {
  switch (r) {
    case Rounding::NearestTenth: return "nearest0.1";
    case Rounding::FloorTenth: return "floor0.1";
    case Rounding::None: return "none";
  }
  return "?";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Codimension-3 table.
// ---------------------------------------------------------------------------

inline std::string table3(int m_from, int m_to, const OutputSpec& spec) {
  const auto rows = codim3::table3(m_from, m_to);
  std::string out;
  if (spec.format == Format::Json) {
    ordered_json j;
    j["table"] = "codim3";
    j["rounding"] = {{"q_sphere", "nearest0.1"}, {"inf_L", "floor0.1"}};
    j["provenance"] = {
        {"q_sphere", "m(m-1) vol(S^m)^{2/m}"},
        {"inf_L", "infimum over c of the codimension-3 bound L_m(c^2)"}};
    j["note"] =
        "m=9 sphere constant 147.8779 rounds to 147.9 at the nearest tenth; "
        "it is elsewhere quoted to two decimals as 147.88";
    j["rows"] = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json row;
      row["m"] = r.m;
      row["q_sphere"] = detail::json_value(
          {r.q_sphere_raw, Rounding::NearestTenth, r.q_sphere_rounded}, spec);
      row["inf_L"] = detail::json_value(
          {r.inf_L_raw, Rounding::FloorTenth, r.inf_L_rounded}, spec);
      j["rows"].push_back(row);
    }
    return j.dump(2) + "\n";
  }
  const bool csv = spec.format == Format::Csv;
  if (csv) {
    out += "# codimension-3 thresholds: q_sphere = m(m-1) vol(S^m)^{2/m} "
           "(nearest 0.1), inf_L = infimum of L_m(c^2) over c (floor 0.1)\n";
    out += "# note: m=9 sphere constant 147.8779 rounds to 147.9 at the "
           "nearest tenth; elsewhere quoted to two decimals as 147.88\n";
    out += "m,q_sphere,inf_L\n";
  } else {
    out += "m  Q*(S^m)  L_inf(m, m-3)\n";
  }
  for (const auto& r : rows) {
    const std::string q = detail::render(
        {r.q_sphere_raw, Rounding::NearestTenth, r.q_sphere_rounded}, spec);
    const std::string l = detail::render(
        {r.inf_L_raw, Rounding::FloorTenth, r.inf_L_rounded}, spec);
    out += std::to_string(r.m) + (csv ? "," : "  ") + q + (csv ? "," : "  ") +
           l + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Aggregate table: sphere constants, aggregated spin thresholds and the
// quaternionic-plane product row.
// ---------------------------------------------------------------------------

inline std::string table1(int m_from, int m_to,
                          const aggregate::Registry& registry,
                          const OutputSpec& spec) {
  if (m_from < 5 || m_from > m_to || m_to > aggregate::registry_max_m)
    throw domain_error("table1: need 5 <= m_from <= m_to <= " +
                       std::to_string(aggregate::registry_max_m));
  struct Row {
    int m;
    detail::Cell q;
    std::optional<detail::Cell> spin;
    std::optional<detail::Cell> hp2;
  };
  std::vector<Row> rows;
  for (int m = m_from; m <= m_to; ++m) {
    Row row;
    row.m = m;
    const double qs = yamabe_sphere<double>(m);
    row.q = {qs, Rounding::NearestTenth,
             round_tenth_guarded(qs, Rounding::NearestTenth,
                                 [m] { return yamabe_sphere<long double>(m); })};
    if (const auto v = aggregate::lambda_spin_m(m, registry))
      row.spin = detail::Cell{*v, Rounding::FloorTenth,
                              round_floor_tenth(*v)};
    if (const auto v =
            aggregate::best_lower_bound(registry, "q_hp2xr", m, std::nullopt))
      row.hp2 = detail::Cell{*v, Rounding::FloorTenth, round_floor_tenth(*v)};
    rows.push_back(row);
  }
  if (spec.format == Format::Json) {
    ordered_json j;
    j["table"] = "aggregate";
    j["rounding"] = {{"q_sphere", "nearest0.1"},
                     {"lambda_spin_min", "floor0.1"},
                     {"q_hp2xr", "floor0.1"}};
    j["provenance"] = {
        {"q_sphere", "m(m-1) vol(S^m)^{2/m}"},
        {"lambda_spin_min", "minimum over k = 2..m-3 of registry bounds"},
        {"q_hp2xr", "registry literal"}};
    j["rows"] = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json row;
      row["m"] = r.m;
      row["q_sphere"] = detail::json_value(r.q, spec);
      row["lambda_spin_min"] =
          r.spin ? detail::json_value(*r.spin, spec) : ordered_json(nullptr);
      row["q_hp2xr"] =
          r.hp2 ? detail::json_value(*r.hp2, spec) : ordered_json(nullptr);
      j["rows"].push_back(row);
    }
    return j.dump(2) + "\n";
  }
  const bool csv = spec.format == Format::Csv;
  std::string out;
  if (csv) {
    out += "# aggregate thresholds: q_sphere (nearest 0.1), lambda_spin_min "
           "= min over k=2..m-3 of registry bounds (floor 0.1), q_hp2xr = "
           "registry literal (floor 0.1)\n";
    out += "m,q_sphere,lambda_spin_min,q_hp2xr\n";
  } else {
    out += "m  Q*(S^m)  Lambda_spin_min  Q*(HP2xR^(m-8))\n";
  }
  const char* sep = csv ? "," : "  ";
  for (const auto& r : rows) {
    out += std::to_string(r.m);
    out += sep;
    out += detail::render(r.q, spec);
    out += sep;
    out += r.spin ? detail::render(*r.spin, spec) : std::string("unknown");
    out += sep;
    out += r.hp2 ? detail::render(*r.hp2, spec) : std::string("-");
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spherical cap.
// ---------------------------------------------------------------------------

inline std::string cap_report(int m, double r, const OutputSpec& spec) {
  const double lambda = spherical_cap_lambda<double>({m, r});
  const double renorm = spin_renormalize<double>(m, lambda);
  const double renorm_rounded = round_tenth_guarded(
      renorm, Rounding::NearestTenth, [m, r] {
        return spin_renormalize<long double>(
            m, spherical_cap_lambda<long double>({m, r}));
      });
  const detail::Cell cell{renorm, Rounding::NearestTenth, renorm_rounded};
  if (spec.format == Format::Json) {
    ordered_json j;
    j["m"] = m;
    j["r"] = r;
    j["lambda_r"] = lambda;
    j["renormalized"] = detail::json_value(cell, spec);
    j["provenance"] = {
        {"lambda_r", "(m/2) volcap(m, r)^{1/m}"},
        {"renormalized", "4 (m-1)/m lambda_r^2"}};
    return j.dump(2) + "\n";
  }
  std::string out;
  const bool csv = spec.format == Format::Csv;
  if (csv) {
    out += "# spherical cap: lambda_r = (m/2) volcap(m,r)^{1/m}, "
           "renormalized = 4(m-1)/m lambda_r^2\n";
    out += "m,r,lambda_r,renormalized\n";
    out += std::to_string(m) + ',' + fmt_raw(r) + ',' + fmt_raw(lambda) + ',' +
           detail::render(cell, spec) + '\n';
  } else {
    out += "m = " + std::to_string(m) + ", r = " + fmt_raw(r) + "\n";
    out += "lambda_r      = " + fmt_raw(lambda) + "\n";
    out += "renormalized  = " + detail::render(cell, spec) +
           "   (4(m-1)/m lambda_r^2)\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Single-point bound evaluation with a citation trail.
// ---------------------------------------------------------------------------

struct BoundLine {
  std::string quantity;
  std::optional<double> value;
  Rounding rule = Rounding::None;
  std::string citation;
};

inline std::vector<BoundLine> bound_lines(int m, int k,
                                          std::optional<double> c,
                                          const aggregate::Registry& registry) {
  if (m < 3) throw domain_error("bound: requires m >= 3");
  if (k < 0 || k > m - 1) throw domain_error("bound: need 0 <= k <= m-1");
  if (c && !(*c >= 0.0 && *c <= 1.0))
    throw domain_error("bound: c must lie in [0, 1]");
  std::vector<BoundLine> lines;
  if (!c) {
    if (k == m - 3 && m >= 6) {
      const auto min = codim3::infimum_L<double>(m);
      lines.push_back({"inf_L lower bound", min.value, Rounding::FloorTenth,
                       "codimension-3 infimum of L_m"});
      lines.push_back({"closed-form lower bound",
                       codim3::closed_form_bound<double>(m),
                       Rounding::FloorTenth,
                       "explicit minorant at the critical point"});
    }
    if (k == m - 2)
      lines.push_back({"threshold value", 0.0, Rounding::None,
                       "infimum of c^{2/m} sphere values"});
    if (k == m - 1)
      lines.push_back({"threshold value", yamabe_sphere<double>(m),
                       Rounding::NearestTenth,
                       "hyperbolic copies carry the sphere value"});
    for (const char* inv : {"lambda_star", "lambda_tilde", "lambda_spin"}) {
      for (const auto& e : registry.entries)
        if (e.invariant == inv && e.m == m && e.k == k && e.value)
          lines.push_back({std::string(inv) + " (" +
                               aggregate::token(e.direction) + ")",
                           *e.value,
                           e.direction == aggregate::Direction::Equal
                               ? Rounding::NearestTenth
                               : Rounding::FloorTenth,
                           "registry: " + e.citation});
    }
    if (lines.empty())
      lines.push_back({"threshold value", std::nullopt, Rounding::None,
                       "no in-scope bound for this (m, k)"});
  } else {
    if (k == m - 3 && m >= 6)
      lines.push_back({"L_m(c^2) lower bound for Q*",
                       codim3::L<double>(m, *c * *c), Rounding::None,
                       "codimension-3 estimate"});
    if (k == m - 2)
      lines.push_back({"Q* value", q_star_mm2<double>(m, *c), Rounding::None,
                       "circle-invariant minimizer"});
    if (k == m - 1 || *c == 1.0)
      lines.push_back({"Q* value", yamabe_sphere<double>(m), Rounding::None,
                       *c == 1.0 ? "conformal to the punctured sphere"
                                 : "hyperbolic copies carry the sphere value"});
    lines.push_back({"Q* upper bound", yamabe_sphere<double>(m),
                     Rounding::None, "sphere is extremal"});
    const ModelSpaceParams p{m, k, *c};
    lines.push_back({"L^{q*} Dirac invertibility (1 = yes)",
                     ls_invertible(p, 2.0 * m / (m + 1)) ? 1.0 : 0.0,
                     Rounding::None, "spectral window of the model space"});
    lines.push_back({"codimension condition (1 = yes)",
                     codim_condition(p) ? 1.0 : 0.0, Rounding::None,
                     "regularity window"});
  }
  return lines;
}

inline std::string bound_report(int m, int k, std::optional<double> c,
                                const aggregate::Registry& registry,
                                const OutputSpec& spec) {
  const auto lines = bound_lines(m, k, c, registry);
  if (spec.format == Format::Json) {
    ordered_json j;
    j["m"] = m;
    j["k"] = k;
    if (c) j["c"] = *c;
    j["bounds"] = ordered_json::array();
    for (const auto& l : lines) {
      ordered_json b;
      b["quantity"] = l.quantity;
      if (l.value) {
        b["value"] = *l.value;
        if (l.rule != Rounding::None &&
            spec.rounding.value_or(l.rule) != Rounding::None)
          b["rounded"] = round_tenth(*l.value, spec.rounding.value_or(l.rule));
      } else {
        b["value"] = nullptr;
      }
      b["provenance"] = l.citation;
      j["bounds"].push_back(b);
    }
    return j.dump(2) + "\n";
  }
  std::string out;
  const bool csv = spec.format == Format::Csv;
  if (csv) out += "quantity,value,rounded,provenance\n";
  for (const auto& l : lines) {
    const Rounding rule = spec.rounding.value_or(l.rule);
    std::string value = l.value ? fmt_raw(*l.value) : std::string("unknown");
    std::string rounded =
        (l.value && rule != Rounding::None)
            ? fmt_tenth(round_tenth(*l.value, rule))
            : std::string("-");
    if (csv)
      out += l.quantity + ',' + value + ',' + rounded + ',' + l.citation +
             '\n';
    else
      out += l.quantity + " = " + value +
             (rounded != "-" ? "  [" + rounded + " at 0.1]" : "") + "   (" +
             l.citation + ")\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scan over c.
// ---------------------------------------------------------------------------

inline std::string scan_csv(int m, int k, int samples) {
  if (samples < 2) throw domain_error("scan: need at least 2 samples");
  if (m < 3) throw domain_error("scan: requires m >= 3");
  if (k < 0 || k > m - 1) throw domain_error("scan: need 0 <= k <= m-1");
  std::string formula;
  if (k == m - 3 && m >= 6)
    formula = "L_m(c^2)";
  else if (k == m - 2)
    formula = "c^{2/m} Q*(S^m)";
  else if (k == m - 1)
    formula = "Q*(S^m)";
  else
    throw domain_error(
        "scan: no in-scope per-c formula for this (m, k); covered are "
        "k = m-3 (m >= 6), m-2 and m-1");
  std::string out = "# scan m=" + std::to_string(m) +
                    " k=" + std::to_string(k) + " formula=" + formula + "\n";
  out += "c,bound\n";
  for (int i = 0; i < samples; ++i) {
    const double c = double(i) / double(samples - 1);
    double v = 0;
    if (k == m - 3)
      v = codim3::L<double>(m, c * c);
    else if (k == m - 2)
      v = q_star_mm2<double>(m, c);
    else
      v = yamabe_sphere<double>(m);
    out += fmt_raw(c) + "," + fmt_raw(v) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Registry and relations-graph dumps (text and JSON mirrors of the
// line-oriented formats; both re-import losslessly).
// ---------------------------------------------------------------------------

inline ordered_json registry_to_json(const aggregate::Registry& r) {
  ordered_json j;
  j["notes"] = r.notes;
  j["entries"] = ordered_json::array();
  for (const auto& e : r.entries) {
    ordered_json item;
    item["invariant"] = e.invariant;
    item["m"] = e.m;
    item["k"] = e.k ? ordered_json(*e.k) : ordered_json(nullptr);
    item["direction"] = aggregate::token(e.direction);
    if (!e.value)
      item["value"] = nullptr;
    else if (std::isinf(*e.value))
      item["value"] = *e.value > 0 ? "inf" : "-inf";
    else
      item["value"] = *e.value;
    item["provenance"] = aggregate::token(e.provenance);
    item["citation"] = e.citation;
    j["entries"].push_back(item);
  }
  return j;
}

inline aggregate::Registry registry_from_json(const ordered_json& j) {
  aggregate::Registry r;
  for (const auto& n : j.at("notes")) r.notes.push_back(n.get<std::string>());
  for (const auto& item : j.at("entries")) {
    aggregate::BoundRegistryEntry e;
    e.invariant = item.at("invariant").get<std::string>();
    e.m = item.at("m").get<int>();
    if (!item.at("k").is_null()) e.k = item.at("k").get<int>();
    e.direction =
        aggregate::detail::parse_direction(item.at("direction").get<std::string>());
    const auto& v = item.at("value");
    if (v.is_null())
      e.value = std::nullopt;
    else if (v.is_string())
      e.value = aggregate::detail::parse_value(v.get<std::string>());
    else
      e.value = v.get<double>();
    e.provenance = aggregate::detail::parse_provenance(
        item.at("provenance").get<std::string>());
    e.citation = item.at("citation").get<std::string>();
    r.entries.push_back(std::move(e));
  }
  return r;
}

inline std::string registry_dump(const aggregate::Registry& r, Format format) {
  if (format == Format::Json) return registry_to_json(r).dump(2) + "\n";
  return aggregate::to_lines(r);
}

inline ordered_json graph_to_json(const relations::Graph& g) {
  ordered_json j;
  j["m_min"] = g.m_min();
  j["m_max"] = g.m_max();
  j["c_grid"] = g.c_grid();
  j["edges"] = ordered_json::array();
  for (const auto& e : g.edges()) {
    ordered_json edge;
    edge["from"] = relations::token(e.from);
    edge["to"] = relations::token(e.to);
    edge["kind"] = e.equality ? "equal" : "leq";
    edge["precondition"] = relations::token(e.pred);
    edge["certificate"] = e.needs_sphere_certificate;
    edge["citation"] = e.citation;
    j["edges"].push_back(edge);
  }
  j["nodes"] = ordered_json::array();
  for (const auto& [key, iv] : g.nodes()) {
    ordered_json node;
    node["family"] = relations::token(key.family);
    node["m"] = key.m;
    node["k"] = key.k;
    node["c"] = key.c_idx < 0 ? ordered_json(nullptr)
                              : ordered_json(g.c_grid()[size_t(key.c_idx)]);
    node["lo"] = std::isinf(iv.lo) ? ordered_json("inf") : ordered_json(iv.lo);
    node["hi"] = std::isinf(iv.hi) ? ordered_json("inf") : ordered_json(iv.hi);
    node["lo_strict"] = iv.lo_strict;
    node["hi_strict"] = iv.hi_strict;
    node["lo_provenance"] = iv.lo_prov;
    node["hi_provenance"] = iv.hi_prov;
    j["nodes"].push_back(node);
  }
  return j;
}

inline relations::Graph graph_from_json(const ordered_json& j) {
  relations::Graph g(j.at("m_min").get<int>(), j.at("m_max").get<int>(),
                     j.at("c_grid").get<std::vector<double>>());
  for (const auto& e : j.at("edges")) {
    const auto from = relations::family_from_token(e.at("from").get<std::string>());
    const auto to = relations::family_from_token(e.at("to").get<std::string>());
    const auto pred =
        relations::pred_from_token(e.at("precondition").get<std::string>());
    if (!from || !to || !pred) throw domain_error("graph json: bad token");
    g.edges().push_back({*from, *to, e.at("kind").get<std::string>() == "equal",
                         *pred, e.at("certificate").get<bool>(),
                         e.at("citation").get<std::string>()});
  }
  for (const auto& n : j.at("nodes")) {
    const auto fam = relations::family_from_token(n.at("family").get<std::string>());
    if (!fam) throw domain_error("graph json: bad family");
    relations::NodeKey key{*fam, n.at("m").get<int>(), n.at("k").get<int>(), -1};
    if (!n.at("c").is_null()) {
      key.c_idx = g.c_index(n.at("c").get<double>());
      if (key.c_idx < 0) throw domain_error("graph json: c off the grid");
    }
    relations::Interval iv;
    const auto num = [](const ordered_json& v) {
      return v.is_string() ? relations::detail::parse_double(v.get<std::string>())
                           : v.get<double>();
    };
    iv.lo = num(n.at("lo"));
    iv.hi = num(n.at("hi"));
    iv.lo_strict = n.at("lo_strict").get<bool>();
    iv.hi_strict = n.at("hi_strict").get<bool>();
    iv.lo_prov = n.at("lo_provenance").get<std::string>();
    iv.hi_prov = n.at("hi_provenance").get<std::string>();
    g.restore(key, std::move(iv));
  }
  return g;
}

inline std::string relations_report(const relations::ConsistencyReport& report,
                                    const relations::Graph& g, Format format) {
  if (format == Format::Json) {
    ordered_json j;
    j["consistent"] = report.consistent;
    j["contradictions"] = ordered_json::array();
    for (const auto& c : report.contradictions) {
      ordered_json item;
      item["node"] = relations::render(c.node, g.c_grid());
      item["lo"] = c.lo;
      item["hi"] = c.hi;
      item["lo_trace"] = c.lo_prov;
      item["hi_trace"] = c.hi_prov;
      j["contradictions"].push_back(item);
    }
    j["graph"] = graph_to_json(g);
    return j.dump(2) + "\n";
  }
  std::string out = report.consistent ? "consistent\n" : "contradiction\n";
  for (const auto& c : report.contradictions) {
    out += "  at " + relations::render(c.node, g.c_grid()) + ": lo " +
           fmt_raw(c.lo) + " vs hi " + fmt_raw(c.hi) + "\n";
    out += "    lower bound trace: " + c.lo_prov + "\n";
    out += "    upper bound trace: " + c.hi_prov + "\n";
  }
  if (format == Format::Csv) return out + relations::to_lines(g);
  for (const auto& [key, iv] : g.nodes())
    out += relations::render(key, g.c_grid()) + " in [" + fmt_raw(iv.lo) +
           ", " + fmt_raw(iv.hi) + "]\n";
  return out;
}

}  // namespace yamabe::emit

#endif
