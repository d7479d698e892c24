#ifndef YAMABE_RELATIONS_HPP
#define YAMABE_RELATIONS_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "yamabe/codim3.hpp"
#include "yamabe/constants.hpp"
#include "yamabe/errors.hpp"
#include "yamabe/model_space.hpp"
#include "yamabe/registry.hpp"

namespace yamabe::relations {

/// The ten invariant families of the inequality web: four Q-level families
/// attached to a model space (m, k, c) and six Lambda-level families
/// attached to (m, k) through the infimum over c.
enum class Family {
  QStar,
  QTilde,
  QSpinStar,
  QSpinTilde,
  LamStar,
  LamTilde,
  Lam,
  LamSpinStar,
  LamSpinTilde,
  LamSpin,
};

inline const char* token(Family f) {
  switch (f) {
    case Family::QStar: return "q_star";
    case Family::QTilde: return "q_tilde";
    case Family::QSpinStar: return "q_spin_star";
    case Family::QSpinTilde: return "q_spin_tilde";
    case Family::LamStar: return "lambda_star";
    case Family::LamTilde: return "lambda_tilde";
    case Family::Lam: return "lambda";
    case Family::LamSpinStar: return "lambda_spin_star";
    case Family::LamSpinTilde: return "lambda_spin_tilde";
    case Family::LamSpin: return "lambda_spin";
  }
  return "?";
}

inline std::optional<Family> family_from_token(const std::string& s) {
  for (Family f :
       {Family::QStar, Family::QTilde, Family::QSpinStar, Family::QSpinTilde,
        Family::LamStar, Family::LamTilde, Family::Lam, Family::LamSpinStar,
        Family::LamSpinTilde, Family::LamSpin})
    if (s == token(f)) return f;
  return std::nullopt;
}

inline bool q_level(Family f) {
  return f == Family::QStar || f == Family::QTilde ||
         f == Family::QSpinStar || f == Family::QSpinTilde;
}

/// Lambda-level family defined as the infimum over c of a Q-level family.
inline std::optional<Family> inf_family(Family f) {
  switch (f) {
    case Family::QStar: return Family::LamStar;
    case Family::QTilde: return Family::LamTilde;
    case Family::QSpinStar: return Family::LamSpinStar;
    case Family::QSpinTilde: return Family::LamSpinTilde;
    default: return std::nullopt;
  }
}

struct NodeKey {
  Family family;
  int m = 0;
  int k = 0;
  int c_idx = -1;  // index into the sampled c-grid; -1 for Lambda-level

  friend bool operator==(const NodeKey&, const NodeKey&) = default;
};

/// Nodes order lexicographically by family token, then m, k, c.
struct NodeKeyLess {
  bool operator()(const NodeKey& a, const NodeKey& b) const {
    const int cmp = std::string_view(token(a.family))
                        .compare(token(b.family));
    if (cmp != 0) return cmp < 0;
    if (a.m != b.m) return a.m < b.m;
    if (a.k != b.k) return a.k < b.k;
    return a.c_idx < b.c_idx;
  }
};

/// Current knowledge about one invariant: an interval with strictness
/// flags and one-step provenance per endpoint. Endpoints only move inward.
struct Interval {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  bool lo_strict = false;
  bool hi_strict = false;
  std::string lo_prov = "init";
  std::string hi_prov = "init";

  bool operator==(const Interval&) const = default;
};

/// Machine-checkable preconditions of the printed inequalities.
enum class Pred {
  Always,
  KLeqMm2,            // k <= m-2
  SpinSolutionWindow, // (m-k-1)^2 > c^2 k(k+1), plus a sphere certificate
  FnSolutionWindow,   // (m-k-1)(m-k-2) > c^2 k(k+1), c < 1; or k <= m-3, c = 1
  TildeBelowStar,     // k <= m-4 or k = m-3 <= 3
  Identification,     // k <= m-4 or k = m-3 <= 6
};

inline const char* token(Pred p) {
  switch (p) {
    case Pred::Always: return "always";
    case Pred::KLeqMm2: return "k<=m-2";
    case Pred::SpinSolutionWindow: return "spin-solution-window";
    case Pred::FnSolutionWindow: return "fn-solution-window";
    case Pred::TildeBelowStar: return "tilde-below-star";
    case Pred::Identification: return "identification";
  }
  return "?";
}

inline std::optional<Pred> pred_from_token(const std::string& s) {
  for (Pred p : {Pred::Always, Pred::KLeqMm2, Pred::SpinSolutionWindow,
                 Pred::FnSolutionWindow, Pred::TildeBelowStar,
                 Pred::Identification})
    if (s == token(p)) return p;
  return std::nullopt;
}

/// Evaluate a precondition at (m, k, c); c is ignored for Lambda-level
/// edges.
inline bool pred_holds(Pred p, int m, int k, double c) {
  const double skk = c * c * double(k) * double(k + 1);
  switch (p) {
    case Pred::Always:
      return true;
    case Pred::KLeqMm2:
      return k <= m - 2;
    case Pred::SpinSolutionWindow:
      return double(m - k - 1) * double(m - k - 1) > skk;
    case Pred::FnSolutionWindow:
      return (c < 1.0 && double(m - k - 1) * double(m - k - 2) > skk) ||
             (c == 1.0 && k <= m - 3);
    case Pred::TildeBelowStar:
      return k <= m - 4 || (k == m - 3 && k <= 3);
    case Pred::Identification:
      return aggregate::lambda_equals_tilde(m, k);
  }
  return false;
}

/// A directed inequality `from <= to` (or equality) between two families
/// at the same parameter level, guarded by a precondition. The spin
/// solution edge additionally requires the current upper bound of its
/// source to certify strict inequality below the sphere value.
struct RelationEdge {
  Family from;
  Family to;
  bool equality = false;
  Pred pred = Pred::Always;
  bool needs_sphere_certificate = false;
  std::string citation;

  bool operator==(const RelationEdge&) const = default;
};

struct BoundFact {
  Family family;
  int m = 0;
  int k = 0;
  std::optional<double> c;  // absent: Lambda-level, or for-all-c on Q-level
  aggregate::Direction direction = aggregate::Direction::Lower;
  double value = 0.0;
  std::string provenance;
};

struct Contradiction {
  NodeKey node;
  double lo = 0, hi = 0;
  std::string lo_prov, hi_prov;
};

inline std::string render(const NodeKey& key,
                          const std::vector<double>& c_grid) {
  std::string s = token(key.family);
  s += "(m=" + std::to_string(key.m) + ",k=" + std::to_string(key.k);
  if (key.c_idx >= 0) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf,
                                   c_grid[size_t(key.c_idx)]);
    s += ",c=";
    s.append(buf, res.ptr);
  }
  s += ')';
  return s;
}

/// The inequality web: all nodes over an (m, k) range with a sampled
/// c-grid, the printed relation edges, and interval state per node.
/// Construction fills in structure only; facts arrive via assert_fact and
/// knowledge spreads via propagate.
class Graph {
 public:
  Graph(int m_min, int m_max, std::vector<double> c_grid)
      : m_min_(m_min), m_max_(m_max), c_grid_(std::move(c_grid)) {
    if (m_min_ < 2 || m_max_ < m_min_ || m_max_ > max_dimension)
      throw domain_error("Graph: bad dimension range");
    for (double c : {0.0, 1.0})
      if (c_index(c) < 0) c_grid_.push_back(c);
    std::sort(c_grid_.begin(), c_grid_.end());
    for (double c : c_grid_)
      if (!(c >= 0.0 && c <= 1.0))
        throw domain_error("Graph: c-grid values must lie in [0, 1]");
    for (int m = m_min_; m <= m_max_; ++m)
      for (int k = 0; k <= m - 1; ++k)
        for (Family f :
             {Family::QStar, Family::QTilde, Family::QSpinStar,
              Family::QSpinTilde, Family::LamStar, Family::LamTilde,
              Family::Lam, Family::LamSpinStar, Family::LamSpinTilde,
              Family::LamSpin}) {
          if (q_level(f)) {
            for (int ci = 0; ci < int(c_grid_.size()); ++ci)
              nodes_[{f, m, k, ci}] = Interval{};
          } else {
            nodes_[{f, m, k, -1}] = Interval{};
          }
        }
  }

  int m_min() const { return m_min_; }
  int m_max() const { return m_max_; }
  const std::vector<double>& c_grid() const { return c_grid_; }
  const std::map<NodeKey, Interval, NodeKeyLess>& nodes() const { return nodes_; }
  std::vector<RelationEdge>& edges() { return edges_; }
  const std::vector<RelationEdge>& edges() const { return edges_; }
  const std::vector<Contradiction>& contradictions() const {
    return contradictions_;
  }

  int c_index(double c) const {
    for (int i = 0; i < int(c_grid_.size()); ++i)
      if (std::abs(c_grid_[size_t(i)] - c) <= 1e-12) return i;
    return -1;
  }

  const Interval& at(Family f, int m, int k,
                     std::optional<double> c = std::nullopt) const {
    const int ci = c ? c_index(*c) : -1;
    const auto it = nodes_.find({f, m, k, ci});
    if (it == nodes_.end()) throw domain_error("Graph: no such node");
    return it->second;
  }

  /// Intersect a node with a fact. A for-all-c fact on a Q-level family
  /// tightens every sampled node and the Lambda-level counterpart.
  /// Returns false when the fact empties an interval; the contradiction is
  /// recorded with both provenances.
  bool assert_fact(const BoundFact& fact) {
    if (fact.m < m_min_ || fact.m > m_max_ || fact.k < 0 ||
        fact.k > fact.m - 1)
      throw domain_error("assert_fact: node parameters outside the graph");
    bool ok = true;
    if (q_level(fact.family)) {
      if (fact.c) {
        const int ci = c_index(*fact.c);
        if (ci < 0)
          throw domain_error("assert_fact: c is not on the sampled grid");
        ok &= apply(nodes_.at({fact.family, fact.m, fact.k, ci}),
                    {fact.family, fact.m, fact.k, ci}, fact.direction,
                    fact.value, fact.provenance);
      } else {
        for (int ci = 0; ci < int(c_grid_.size()); ++ci)
          ok &= apply(nodes_.at({fact.family, fact.m, fact.k, ci}),
                      {fact.family, fact.m, fact.k, ci}, fact.direction,
                      fact.value, fact.provenance + " [for all c]");
        const Family lam = *inf_family(fact.family);
        ok &= apply(nodes_.at({lam, fact.m, fact.k, -1}),
                    {lam, fact.m, fact.k, -1}, fact.direction, fact.value,
                    fact.provenance + " [for all c, infimum]");
      }
    } else {
      if (fact.c)
        throw domain_error("assert_fact: Lambda-level facts carry no c");
      ok &= apply(nodes_.at({fact.family, fact.m, fact.k, -1}),
                  {fact.family, fact.m, fact.k, -1}, fact.direction,
                  fact.value, fact.provenance);
    }
    return ok;
  }

  /// Overwrite one node's interval; used by deserialization only.
  void restore(const NodeKey& key, Interval iv) {
    const auto it = nodes_.find(key);
    if (it == nodes_.end()) throw domain_error("restore: no such node");
    it->second = std::move(iv);
  }

  /// Fixpoint interval propagation along all applicable edges plus the
  /// definitional coupling between each Q-level family and its infimum.
  /// Terminates because endpoints only move inward and moves below 1e-12
  /// are ignored. Returns false when a contradiction was detected.
  bool propagate() {
    for (int pass = 0; pass < 200; ++pass) {
      changed_ = false;
      for (const auto& e : edges_) apply_edge(e);
      apply_inf_coupling();
      if (!contradictions_.empty()) return false;
      if (!changed_) return true;
    }
    throw convergence_error("propagate: no fixpoint after 200 passes");
  }

 private:
  static constexpr double improve_tol = 1e-12;

  bool apply(Interval& iv, const NodeKey& key, aggregate::Direction dir,
             double value, const std::string& prov) {
    using aggregate::Direction;
    const bool strict =
        dir == Direction::LowerStrict || dir == Direction::UpperStrict;
    if (dir == Direction::Equal) {
      bool ok = apply(iv, key, Direction::Lower, value, prov);
      ok &= apply(iv, key, Direction::Upper, value, prov);
      return ok;
    }
    if (dir == Direction::Lower || dir == Direction::LowerStrict) {
      if (value > iv.lo + step(iv.lo)) {
        iv.lo = value;
        iv.lo_strict = strict;
        iv.lo_prov = prov;
        changed_ = true;
      } else if (value >= iv.lo && strict && !iv.lo_strict) {
        iv.lo_strict = true;
        iv.lo_prov = prov;
        changed_ = true;
      }
    } else {
      if (value < iv.hi - step(iv.hi)) {
        iv.hi = value;
        iv.hi_strict = strict;
        iv.hi_prov = prov;
        changed_ = true;
      } else if (value <= iv.hi && strict && !iv.hi_strict) {
        iv.hi_strict = true;
        iv.hi_prov = prov;
        changed_ = true;
      }
    }
    return check(iv, key);
  }

  static double step(double v) {
    return std::isinf(v) ? 0.0 : improve_tol * std::fmax(1.0, std::abs(v));
  }

  bool check(const Interval& iv, const NodeKey& key) {
    const double slack = 1e-9 * std::fmax(1.0, std::abs(iv.hi));
    const bool empty = iv.lo > iv.hi + slack;
    const bool strict_empty =
        (iv.lo_strict || iv.hi_strict) && iv.lo >= iv.hi;
    if (empty || strict_empty) {
      for (const auto& c : contradictions_)
        if (c.node == key) return false;
      contradictions_.push_back({key, iv.lo, iv.hi, iv.lo_prov, iv.hi_prov});
      return false;
    }
    return true;
  }

  void apply_edge(const RelationEdge& e) {
    const bool q = q_level(e.from);
    for (int m = m_min_; m <= m_max_; ++m)
      for (int k = 0; k <= m - 1; ++k) {
        if (q) {
          for (int ci = 0; ci < int(c_grid_.size()); ++ci)
            apply_edge_at(e, m, k, ci, c_grid_[size_t(ci)]);
        } else {
          apply_edge_at(e, m, k, -1, 0.0);
        }
      }
  }

  void apply_edge_at(const RelationEdge& e, int m, int k, int ci, double c) {
    if (!pred_holds(e.pred, m, k, c)) return;
    Interval& u = nodes_.at({e.from, m, k, ci});
    Interval& v = nodes_.at({e.to, m, k, ci});
    if (e.needs_sphere_certificate) {
      // Applicable only when the source is certified strictly below the
      // sphere value; otherwise the edge is conditionally inapplicable.
      const double sphere = sphere_value(m);
      if (!(u.hi < sphere)) return;
    }
    const NodeKey uk{e.from, m, k, ci};
    const NodeKey vk{e.to, m, k, ci};
    // u <= v: v inherits u's lower bound, u inherits v's upper bound.
    apply(v, vk, u.lo_strict ? aggregate::Direction::LowerStrict
                             : aggregate::Direction::Lower,
          u.lo, chain(u.lo_prov, e.citation, uk));
    apply(u, uk, v.hi_strict ? aggregate::Direction::UpperStrict
                             : aggregate::Direction::Upper,
          v.hi, chain(v.hi_prov, e.citation, vk));
    if (e.equality) {
      apply(u, uk, v.lo_strict ? aggregate::Direction::LowerStrict
                               : aggregate::Direction::Lower,
            v.lo, chain(v.lo_prov, e.citation, vk));
      apply(v, vk, u.hi_strict ? aggregate::Direction::UpperStrict
                               : aggregate::Direction::Upper,
            u.hi, chain(u.hi_prov, e.citation, uk));
    }
  }

  /// Lambda = inf over c of Q: the infimum sits below every sampled value,
  /// and every sampled value sits above the infimum. Lower bounds valid
  /// for all c enter the Lambda node through assert_fact, never from
  /// sampled minima.
  void apply_inf_coupling() {
    for (Family qf : {Family::QStar, Family::QTilde, Family::QSpinStar,
                      Family::QSpinTilde}) {
      const Family lf = *inf_family(qf);
      for (int m = m_min_; m <= m_max_; ++m)
        for (int k = 0; k <= m - 1; ++k) {
          Interval& lam = nodes_.at({lf, m, k, -1});
          const NodeKey lk{lf, m, k, -1};
          for (int ci = 0; ci < int(c_grid_.size()); ++ci) {
            Interval& q = nodes_.at({qf, m, k, ci});
            const NodeKey qk{qf, m, k, ci};
            apply(lam, lk, q.hi_strict ? aggregate::Direction::UpperStrict
                                       : aggregate::Direction::Upper,
                  q.hi, chain(q.hi_prov, "infimum over c", qk));
            apply(q, qk, lam.lo_strict ? aggregate::Direction::LowerStrict
                                       : aggregate::Direction::Lower,
                  lam.lo, chain(lam.lo_prov, "pointwise above the infimum",
                                lk));
          }
        }
    }
  }

  // Provenance chains use ';' so they survive the '|'-separated line
  // format.
  std::string chain(const std::string& origin, const std::string& citation,
                    const NodeKey& source) const {
    return origin + "; via " + citation + " from " + render(source, c_grid_);
  }

  double sphere_value(int m) const {
    return m >= 3 ? yamabe_sphere<double>(m)
                  : double(m) * double(m - 1) *
                        std::pow(sphere_volume<double>(m), 2.0 / m);
  }

  int m_min_, m_max_;
  std::vector<double> c_grid_;
  std::map<NodeKey, Interval, NodeKeyLess> nodes_;
  std::vector<RelationEdge> edges_;
  std::vector<Contradiction> contradictions_;
  bool changed_ = false;
};

/// The printed inequality web plus its special values: relation edges with
/// their exact printed preconditions, the c = 1 values, the k = m-1 and
/// k = m-2 families, and the universal sphere upper bound.
inline Graph build_relation_graph(
    int m_min = 2, int m_max = 15,
    std::vector<double> c_grid = {0.0, 0.25, 0.5, 0.75, 1.0}) {
  Graph g(m_min, m_max, std::move(c_grid));

  // Q-level edges.
  g.edges().push_back({Family::QStar, Family::QTilde, false, Pred::Always,
                       false, "cutoff comparison"});
  g.edges().push_back({Family::QSpinStar, Family::QSpinTilde, false,
                       Pred::Always, false, "cutoff comparison (spin)"});
  g.edges().push_back({Family::QStar, Family::QSpinTilde, false,
                       Pred::KLeqMm2, false, "conformal Hijazi"});
  g.edges().push_back({Family::QTilde, Family::QStar, false,
                       Pred::FnSolutionWindow, false,
                       "minimizer existence"});
  g.edges().push_back({Family::QSpinTilde, Family::QSpinStar, false,
                       Pred::SpinSolutionWindow, true,
                       "minimizer existence (spin)"});

  // Lambda-level edges.
  g.edges().push_back({Family::LamSpinStar, Family::LamSpinTilde, false,
                       Pred::KLeqMm2, false,
                       "cutoff comparison (spin), infima"});
  g.edges().push_back({Family::LamSpinTilde, Family::LamSpinStar, false,
                       Pred::KLeqMm2, false, "pointed limit comparison"});
  g.edges().push_back({Family::LamStar, Family::LamTilde, false, Pred::Always,
                       false, "cutoff comparison, infima"});
  g.edges().push_back({Family::LamTilde, Family::LamStar, false,
                       Pred::TildeBelowStar, false,
                       "pointed limit comparison"});
  g.edges().push_back({Family::LamStar, Family::LamSpinTilde, false,
                       Pred::KLeqMm2, false, "conformal Hijazi, infima"});
  g.edges().push_back({Family::LamSpin, Family::LamSpinTilde, true,
                       Pred::KLeqMm2, false, "surgery constant by definition"});
  g.edges().push_back({Family::Lam, Family::LamTilde, false, Pred::Always,
                       false, "surgery constant is a minimum"});
  g.edges().push_back({Family::Lam, Family::LamTilde, true,
                       Pred::Identification, false,
                       "identification in low codimension"});

  const double sqrt3 = std::sqrt(3.0);
  using aggregate::Direction;
  for (int m = g.m_min(); m <= g.m_max(); ++m) {
    const double qs =
        m >= 3 ? yamabe_sphere<double>(m)
               : double(m) * (m - 1) * std::pow(sphere_volume<double>(m), 2.0 / m);
    for (int k = 0; k <= m - 1; ++k) {
      // Universal upper bound for the test-function invariants.
      g.assert_fact({Family::QStar, m, k, std::nullopt, Direction::Upper, qs,
                     "sphere is extremal"});
      g.assert_fact({Family::QSpinStar, m, k, std::nullopt, Direction::Upper,
                     qs, "sphere is extremal"});
      // c = 1: conformal to the complement of a small sphere inside S^m.
      g.assert_fact({Family::QStar, m, k, 1.0, Direction::Equal, qs,
                     "conformal to the punctured sphere"});
      g.assert_fact({Family::QSpinStar, m, k, 1.0, Direction::Equal, qs,
                     "conformal to the punctured sphere"});
      g.assert_fact({Family::QSpinTilde, m, k, 1.0, Direction::Equal,
                     k <= m - 2 ? qs
                                : std::numeric_limits<double>::infinity(),
                     k <= m - 2 ? "killing spinor transported, decay holds"
                                : "unique continuation forbids solutions"});
      if (m >= 3)
        g.assert_fact({Family::QTilde, m, k, 1.0, Direction::Equal,
                       k <= m - 3 ? qs
                                  : std::numeric_limits<double>::infinity(),
                       k <= m - 3 ? "constant solution transported, decay holds"
                                  : "square-integrability fails"});
    }

    // k = m-1: two rescaled hyperbolic (or flat) copies.
    const int k1 = m - 1;
    g.assert_fact({Family::QStar, m, k1, std::nullopt, Direction::Equal, qs,
                   "hyperbolic copies carry the sphere value"});
    if (m >= 3)
      g.assert_fact({Family::QSpinStar, m, k1, std::nullopt, Direction::Equal,
                     qs, "hyperbolic copies carry the sphere value"});
    for (int ci = 0; ci < int(g.c_grid().size()); ++ci) {
      const double c = g.c_grid()[size_t(ci)];
      if (c > 0.0) {
        if (m >= 3)
          g.assert_fact({Family::QTilde, m, k1, c, Direction::Equal,
                         std::numeric_limits<double>::infinity(),
                         "hyperbolic rigidity"});
        g.assert_fact({Family::QSpinTilde, m, k1, c, Direction::Equal,
                       std::numeric_limits<double>::infinity(),
                       "hyperbolic rigidity (spin)"});
      } else {
        if (m >= 3) {
          g.assert_fact({Family::QTilde, m, k1, c, Direction::Equal,
                         m <= 4 ? std::numeric_limits<double>::infinity() : qs,
                         m <= 4 ? "flat solutions fail square-integrability"
                                : "flat solution realizes the sphere value"});
          g.assert_fact({Family::QSpinTilde, m, k1, c, Direction::Equal, qs,
                         "flat spin solution realizes the sphere value"});
        } else {
          g.assert_fact({Family::QSpinTilde, m, k1, c, Direction::Lower, qs,
                         "removal of singularities on the plane"});
          g.assert_fact({Family::QSpinTilde, m, k1, c, Direction::Upper,
                         sqrt3 * qs, "branched covering test spinor"});
        }
      }
    }
    // Lambda-level values for k = m-1.
    g.assert_fact({Family::LamStar, m, k1, std::nullopt, Direction::Equal, qs,
                   "hyperbolic copies carry the sphere value"});
    if (m >= 3) {
      g.assert_fact({Family::LamSpinStar, m, k1, std::nullopt,
                     Direction::Equal, qs,
                     "hyperbolic copies carry the sphere value"});
      g.assert_fact({Family::LamSpinTilde, m, k1, std::nullopt,
                     Direction::Equal, qs, "flat copy attains the infimum"});
      g.assert_fact({Family::LamSpin, m, k1, std::nullopt, Direction::Equal,
                     qs, "flat copy attains the infimum"});
      g.assert_fact({Family::LamTilde, m, k1, std::nullopt, Direction::Equal,
                     m <= 4 ? std::numeric_limits<double>::infinity() : qs,
                     m <= 4 ? "no square-integrable solutions at any c"
                            : "flat copy attains the infimum"});
      g.assert_fact({Family::Lam, m, k1, std::nullopt, Direction::Equal, qs,
                     "surgery constant keeps the sphere value"});
    } else {
      g.assert_fact({Family::LamSpin, m, k1, std::nullopt, Direction::Equal,
                     qs, "plane value"});
      g.assert_fact({Family::LamSpinTilde, m, k1, std::nullopt,
                     Direction::Lower, qs, "plane value"});
      g.assert_fact({Family::LamSpinTilde, m, k1, std::nullopt,
                     Direction::Upper, sqrt3 * qs,
                     "branched covering test spinor"});
    }

    // k = m-2: explicit value c^{2/m} Q*(S^m) of the circle-invariant
    // minimizer.
    if (m >= 3) {
      const int k2 = m - 2;
      for (int ci = 0; ci < int(g.c_grid().size()); ++ci) {
        const double c = g.c_grid()[size_t(ci)];
        g.assert_fact({Family::QStar, m, k2, c, Direction::Equal,
                       q_star_mm2<double>(m, c),
                       "circle-invariant minimizer"});
      }
    }
  }
  return g;
}

struct ConsistencyReport {
  bool consistent = false;
  std::vector<Contradiction> contradictions;
};

/// Seed a graph with the registry's Lambda-level facts and the computed
/// codimension-3 family of lower bounds.
inline void seed_graph(Graph& g, const aggregate::Registry& registry) {
  for (const auto& e : registry.entries) {
    if (!e.k || !e.value) continue;
    const auto fam = family_from_token(e.invariant);
    if (!fam || q_level(*fam)) continue;
    if (e.m < g.m_min() || e.m > g.m_max()) continue;
    g.assert_fact({*fam, e.m, *e.k, std::nullopt, e.direction, *e.value,
                   std::string("registry: ") + e.citation});
  }
  for (int m = std::max(6, g.m_min()); m <= g.m_max(); ++m) {
    const int k = m - 3;
    for (double c : g.c_grid())
      g.assert_fact({Family::QStar, m, k, c, aggregate::Direction::Lower,
                     codim3::L<double>(m, c * c),
                     "codimension-3 estimate"});
  }
}

/// Full consistency run: full relation graph, registry and computed facts +
/// optionally injected facts, propagated to a fixpoint.
inline ConsistencyReport check_consistency(
    Graph& g, const aggregate::Registry& registry,
    const std::vector<BoundFact>& injected = {}) {
  seed_graph(g, registry);
  bool ok = true;
  for (const auto& fact : injected) {
    BoundFact f = fact;
    f.provenance = "injected: " + (f.provenance.empty() ? std::string("fact")
                                                        : f.provenance);
    ok &= g.assert_fact(f);
  }
  ok &= g.propagate();
  return {ok && g.contradictions().empty(), g.contradictions()};
}

inline ConsistencyReport check_consistency(
    const std::vector<BoundFact>& injected = {}) {
  Graph g = build_relation_graph();
  const aggregate::Registry registry = aggregate::builtin_registry();
  return check_consistency(g, registry, injected);
}

// ---------------------------------------------------------------------------
// Serialization. Nodes print in key order (family token, m, k, c); edges in
// stored order. 17-digit floats round-trip exactly.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  const auto res =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return aggregate::detail::parse_finite(s);
}

}  // namespace detail

inline std::string to_lines(const Graph& g) {
  std::string out = "graph|" + std::to_string(g.m_min()) + '|' +
                    std::to_string(g.m_max());
  for (double c : g.c_grid()) out += '|' + detail::format_double(c);
  out += '\n';
  for (const auto& e : g.edges()) {
    out += "edge|";
    out += token(e.from);
    out += '|';
    out += token(e.to);
    out += '|';
    out += e.equality ? "equal" : "leq";
    out += '|';
    out += token(e.pred);
    out += '|';
    out += e.needs_sphere_certificate ? "cert" : "plain";
    out += '|';
    out += e.citation;
    out += '\n';
  }
  for (const auto& [key, iv] : g.nodes()) {
    out += "node|";
    out += token(key.family);
    out += '|';
    out += std::to_string(key.m);
    out += '|';
    out += std::to_string(key.k);
    out += '|';
    out += key.c_idx < 0 ? std::string("-")
                         : detail::format_double(
                               g.c_grid()[size_t(key.c_idx)]);
    out += '|';
    out += detail::format_double(iv.lo);
    out += '|';
    out += detail::format_double(iv.hi);
    out += '|';
    out += iv.lo_strict ? "1" : "0";
    out += '|';
    out += iv.hi_strict ? "1" : "0";
    out += '|';
    out += iv.lo_prov;
    out += '|';
    out += iv.hi_prov;
    out += '\n';
  }
  return out;
}

inline Graph from_lines(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("graph|", 0) != 0)
    throw domain_error("graph: missing header line");
  const auto head = aggregate::detail::split(line, '|');
  if (head.size() < 5) throw domain_error("graph: malformed header");
  const int m_min = std::stoi(head[1]);
  const int m_max = std::stoi(head[2]);
  std::vector<double> grid;
  for (size_t i = 3; i < head.size(); ++i)
    grid.push_back(detail::parse_double(head[i]));
  Graph g(m_min, m_max, grid);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = aggregate::detail::split(line, '|');
    if (f[0] == "edge") {
      if (f.size() != 7) throw domain_error("graph: malformed edge line");
      const auto from = family_from_token(f[1]);
      const auto to = family_from_token(f[2]);
      const auto pred = pred_from_token(f[4]);
      if (!from || !to || !pred)
        throw domain_error("graph: bad token in edge line '" + line + "'");
      g.edges().push_back({*from, *to, f[3] == "equal", *pred,
                           f[5] == "cert", f[6]});
    } else if (f[0] == "node") {
      if (f.size() != 11) throw domain_error("graph: malformed node line");
      const auto fam = family_from_token(f[1]);
      if (!fam) throw domain_error("graph: bad family in '" + line + "'");
      NodeKey key{*fam, std::stoi(f[2]), std::stoi(f[3]), -1};
      if (f[4] != "-") {
        key.c_idx = g.c_index(detail::parse_double(f[4]));
        if (key.c_idx < 0)
          throw domain_error("graph: node c off the grid in '" + line + "'");
      }
      Interval iv;
      iv.lo = detail::parse_double(f[5]);
      iv.hi = detail::parse_double(f[6]);
      iv.lo_strict = f[7] == "1";
      iv.hi_strict = f[8] == "1";
      iv.lo_prov = f[9];
      iv.hi_prov = f[10];
      g.restore(key, std::move(iv));
    } else {
      throw domain_error("graph: unknown record '" + f[0] + "'");
    }
  }
  return g;
}

}  // namespace yamabe::relations

#endif
