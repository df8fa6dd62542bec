#ifndef CLOSUREKIT_OBJECTS_HPP_
#define CLOSUREKIT_OBJECTS_HPP_

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "closurekit/error.hpp"
#include "closurekit/group.hpp"
#include "closurekit/partition.hpp"
#include "closurekit/perm.hpp"

namespace closurekit {

inline constexpr std::size_t kMaxObjectPoints = 64;

namespace detail {

inline void require_points(std::size_t n) {
  if (n == 0 || n > kMaxObjectPoints) {
    fail(ErrorKind::size_too_large, "object on " + std::to_string(n) + " points");
  }
}

inline void require_point(std::size_t n, Point p) {
  if (p >= n) fail(ErrorKind::invalid_argument, "point " + std::to_string(p) + " out of range");
}

}  // namespace detail

// Loopless digraph on 0..n-1 stored as out- and in-neighbour sets.
class Digraph {
 public:
  Digraph() : Digraph(1) {}
  explicit Digraph(std::size_t n) : n_(n), out_(n), in_(n) { detail::require_points(n); }

  static Digraph from_arcs(std::size_t n, const std::vector<std::pair<Point, Point>>& arcs) {
    Digraph d(n);
    for (auto [u, v] : arcs) d.add_arc(u, v);
    return d;
  }

  std::size_t order() const noexcept { return n_; }

  void add_arc(Point u, Point v) {
    detail::require_point(n_, u);
    detail::require_point(n_, v);
    if (u == v) fail(ErrorKind::invalid_argument, "loop at " + std::to_string(u));
    out_[u] |= PointSet{v};
    in_[v] |= PointSet{u};
  }
  bool has_arc(Point u, Point v) const { return out_[u].contains(v); }
  PointSet out_neighbors(Point u) const { return out_[u]; }
  PointSet in_neighbors(Point u) const { return in_[u]; }
  std::size_t out_degree(Point u) const { return out_[u].size(); }
  std::size_t in_degree(Point u) const { return in_[u].size(); }

  std::size_t arc_count() const {
    std::size_t c = 0;
    for (PointSet s : out_) c += s.size();
    return c;
  }

  std::vector<std::pair<Point, Point>> arcs() const {
    std::vector<std::pair<Point, Point>> out;
    for (Point u = 0; u < n_; ++u) {
      out_[u].for_each([&](Point v) { out.emplace_back(u, v); });
    }
    return out;
  }

  // Arc (u,v) becomes (g(u), g(v)).
  Digraph image(const Permutation& g) const {
    if (g.degree() != n_) fail(ErrorKind::degree_mismatch, "permutation degree differs from digraph order");
    Digraph d(n_);
    for (auto [u, v] : arcs()) d.add_arc(g(u), g(v));
    return d;
  }

  bool is_symmetric() const {
    for (Point u = 0; u < n_; ++u) {
      if (out_[u] != in_[u]) return false;
    }
    return true;
  }

  friend bool operator==(const Digraph& a, const Digraph& b) { return a.n_ == b.n_ && a.out_ == b.out_; }

 private:
  std::size_t n_;
  std::vector<PointSet> out_;
  std::vector<PointSet> in_;
};

struct ColoredTuple {
  std::vector<Point> points;
  int color = 0;

  friend auto operator<=>(const ColoredTuple&, const ColoredTuple&) = default;
};

// Set of colored tuples on 0..n-1; duplicates are merged.
class ColoredTupleSystem {
 public:
  explicit ColoredTupleSystem(std::size_t n = 1, std::vector<ColoredTuple> tuples = {}) : n_(n) {
    detail::require_points(n);
    for (ColoredTuple& t : tuples) {
      if (t.points.empty() || t.points.size() >= n) {
        fail(ErrorKind::invalid_argument, "tuple length must lie in [1, n)");
      }
      for (Point p : t.points) detail::require_point(n, p);
    }
    std::sort(tuples.begin(), tuples.end());
    tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
    // A tuple carries one color.
    for (std::size_t i = 1; i < tuples.size(); ++i) {
      if (tuples[i].points == tuples[i - 1].points) {
        fail(ErrorKind::invalid_argument, "tuple listed with two colors");
      }
    }
    tuples_ = std::move(tuples);
  }

  std::size_t order() const noexcept { return n_; }
  const std::vector<ColoredTuple>& tuples() const noexcept { return tuples_; }

  ColoredTupleSystem image(const Permutation& g) const {
    std::vector<ColoredTuple> out;
    for (const ColoredTuple& t : tuples_) {
      ColoredTuple u{{}, t.color};
      for (Point p : t.points) u.points.push_back(g(p));
      out.push_back(std::move(u));
    }
    return ColoredTupleSystem(n_, std::move(out));
  }

  friend bool operator==(const ColoredTupleSystem&, const ColoredTupleSystem&) = default;

 private:
  std::size_t n_;
  std::vector<ColoredTuple> tuples_;
};

// Collection of nonempty point sets, kept sorted and deduplicated.
class SetSystem {
 public:
  explicit SetSystem(std::size_t n = 1, std::vector<PointSet> sets = {}) : n_(n) {
    detail::require_points(n);
    for (PointSet s : sets) {
      if (s.empty()) fail(ErrorKind::invalid_argument, "empty set in set system");
      if (!s.subset_of(PointSet::range(n))) fail(ErrorKind::invalid_argument, "set leaves the ground set");
    }
    std::sort(sets.begin(), sets.end());
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    sets_ = std::move(sets);
  }

  std::size_t order() const noexcept { return n_; }
  const std::vector<PointSet>& sets() const noexcept { return sets_; }

  SetSystem image(const Permutation& g) const {
    std::vector<PointSet> out;
    for (PointSet s : sets_) out.push_back(g.image(s));
    return SetSystem(n_, std::move(out));
  }

  friend bool operator==(const SetSystem&, const SetSystem&) = default;

 private:
  std::size_t n_;
  std::vector<PointSet> sets_;
};

// Points 0..n-1 with lines given as point sets; line order is not significant.
class IncidenceStructure {
 public:
  explicit IncidenceStructure(std::size_t n = 1, std::vector<PointSet> lines = {}) : n_(n) {
    detail::require_points(n);
    for (PointSet l : lines) {
      if (!l.subset_of(PointSet::range(n))) fail(ErrorKind::invalid_argument, "line leaves the point set");
    }
    std::sort(lines.begin(), lines.end());
    lines_ = std::move(lines);
  }

  std::size_t order() const noexcept { return n_; }
  const std::vector<PointSet>& lines() const noexcept { return lines_; }

  IncidenceStructure image(const Permutation& g) const {
    std::vector<PointSet> out;
    for (PointSet l : lines_) out.push_back(g.image(l));
    return IncidenceStructure(n_, std::move(out));
  }

  friend bool operator==(const IncidenceStructure&, const IncidenceStructure&) = default;

 private:
  std::size_t n_;
  std::vector<PointSet> lines_;
};

template <typename Object>
bool is_automorphism(const Object& x, const Permutation& g) {
  return g.degree() == x.order() && x.image(g) == x;
}

// Cay(Z_n, S): arcs (g, g+s).
inline Digraph circulant(std::size_t n, const std::vector<std::size_t>& s) {
  Digraph d(n);
  for (std::size_t c : s) {
    if (c % n == 0) fail(ErrorKind::identity_in_connection_set, "0 in connection set");
  }
  for (Point g = 0; g < n; ++g) {
    for (std::size_t c : s) d.add_arc(g, static_cast<Point>((g + c) % n));
  }
  return d;
}

inline Digraph cayley_digraph(std::size_t n, const std::vector<std::size_t>& s) { return circulant(n, s); }

// Cay(G, S) on the sorted elements of G: arcs (g, gs). The left regular
// action is checked generator by generator.
inline Digraph cayley_digraph(const PermGroup& g, const std::vector<Permutation>& s) {
  PermGroup full = g.materialize();
  const auto& el = full.elements();
  detail::require_points(el.size());
  Digraph d(el.size());
  for (const Permutation& c : s) {
    if (c.is_identity()) fail(ErrorKind::identity_in_connection_set, "identity in connection set");
    if (!full.contains(c)) fail(ErrorKind::not_a_subgroup, "connection element outside the group");
  }
  for (std::size_t i = 0; i < el.size(); ++i) {
    for (const Permutation& c : s) d.add_arc(static_cast<Point>(i), static_cast<Point>(*full.index_of(el[i] * c)));
  }
  for (const Permutation& h : full.generators()) {
    std::vector<std::size_t> img(el.size());
    for (std::size_t i = 0; i < el.size(); ++i) img[i] = *full.index_of(h * el[i]);
    if (el.size() <= kMaxDegree && !is_automorphism(d, Permutation::from_images(img))) {
      fail(ErrorKind::invariant_violation, "left translation is not an automorphism");
    }
  }
  return d;
}

inline std::vector<std::size_t> units(std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t a = 1; a < n; ++a) {
    if (std::gcd(a, n) == 1) out.push_back(a);
  }
  if (n == 1) out.push_back(0);
  return out;
}

inline Digraph unit_circulant(std::size_t n, const std::vector<std::size_t>& s) {
  for (std::size_t c : s) {
    if (std::gcd(c, n) != 1) fail(ErrorKind::non_unit_element, std::to_string(c) + " is not a unit mod " + std::to_string(n));
  }
  return circulant(n, s);
}

// Left cosets gH, each represented by its least element, in increasing order
// of representative. Returns the representatives and the coset index of each
// element of G.
struct LeftCosets {
  std::vector<Permutation> representatives;
  std::vector<std::size_t> coset_of;  // indexed like G's sorted elements
};

inline LeftCosets left_cosets(const PermGroup& g, const PermGroup& h) {
  PermGroup full = g.materialize();
  PermGroup sub = h.materialize();
  for (const Permutation& e : sub.generators()) {
    if (!full.contains(e)) fail(ErrorKind::not_a_subgroup, "H is not a subgroup of G");
  }
  const auto& el = full.elements();
  LeftCosets out;
  out.coset_of.assign(el.size(), el.size());
  for (std::size_t i = 0; i < el.size(); ++i) {
    if (out.coset_of[i] != el.size()) continue;
    std::size_t id = out.representatives.size();
    out.representatives.push_back(el[i]);
    for (const Permutation& k : sub.elements()) out.coset_of[*full.index_of(el[i] * k)] = id;
  }
  return out;
}

// Cos(G, H, S): arcs (gH, gsH) on left cosets ordered by least element.
inline Digraph double_coset_digraph(const PermGroup& g, const PermGroup& h, const std::vector<Permutation>& s) {
  PermGroup full = g.materialize();
  PermGroup sub = h.materialize();
  LeftCosets cosets = left_cosets(full, sub);
  std::set<Permutation> sset(s.begin(), s.end());
  for (const Permutation& c : sset) {
    if (!full.contains(c)) fail(ErrorKind::not_a_subgroup, "connection element outside the group");
    if (sub.contains(c)) fail(ErrorKind::intersects_subgroup, "S meets H at " + to_cycle_string(c));
  }
  for (const Permutation& a : sub.elements()) {
    for (const Permutation& c : sset) {
      for (const Permutation& b : sub.elements()) {
        if (!sset.count(a * c * b)) fail(ErrorKind::not_double_coset_closed, "HSH differs from S");
      }
    }
  }
  detail::require_points(cosets.representatives.size());
  Digraph d(cosets.representatives.size());
  const auto& el = full.elements();
  for (std::size_t i = 0; i < el.size(); ++i) {
    for (const Permutation& c : sset) {
      d.add_arc(static_cast<Point>(cosets.coset_of[i]), static_cast<Point>(cosets.coset_of[*full.index_of(el[i] * c)]));
    }
  }
  return d;
}

// Gamma1 wr Gamma2 on V1 x V2 with (u, v) encoded as u * |V2| + v.
inline Digraph digraph_wreath(const Digraph& a, const Digraph& b) {
  std::size_t n1 = a.order(), n2 = b.order();
  detail::require_points(n1 * n2);
  Digraph d(n1 * n2);
  for (auto [u, u2] : a.arcs()) {
    for (Point v = 0; v < n2; ++v) {
      for (Point v2 = 0; v2 < n2; ++v2) d.add_arc(static_cast<Point>(u * n2 + v), static_cast<Point>(u2 * n2 + v2));
    }
  }
  for (Point u = 0; u < n1; ++u) {
    for (auto [v, v2] : b.arcs()) d.add_arc(static_cast<Point>(u * n2 + v), static_cast<Point>(u * n2 + v2));
  }
  return d;
}

// Digraph on the cells of p (numbered as in p) with an arc between distinct
// cells whenever some arc of gamma crosses between them.
inline Digraph quotient_digraph(const Digraph& gamma, const Partition& p) {
  if (p.degree() != gamma.order()) fail(ErrorKind::degree_mismatch, "partition and digraph differ in size");
  Digraph d(p.size());
  for (auto [u, v] : gamma.arcs()) {
    std::size_t a = p.cell_of(u), b = p.cell_of(v);
    if (a != b) d.add_arc(static_cast<Point>(a), static_cast<Point>(b));
  }
  return d;
}

struct TwinReport {
  Partition classes;
  bool reducible = false;
};

// Classes of u ~ v iff u and v have the same out- and in-neighbours.
inline TwinReport twin_partition(const Digraph& gamma) {
  std::size_t n = gamma.order();
  std::vector<PointSet> cells;
  std::vector<bool> done(n, false);
  for (Point u = 0; u < n; ++u) {
    if (done[u]) continue;
    PointSet c{u};
    for (Point v = u + 1; v < n; ++v) {
      if (!done[v] && gamma.out_neighbors(u) == gamma.out_neighbors(v) &&
          gamma.in_neighbors(u) == gamma.in_neighbors(v)) {
        c |= PointSet{v};
        done[v] = true;
      }
    }
    cells.push_back(c);
  }
  TwinReport r{Partition(n, cells), false};
  r.reducible = r.classes.size() < n;
  return r;
}

// Components of the underlying undirected graph.
inline Partition weak_components(const Digraph& gamma) {
  std::size_t n = gamma.order();
  std::vector<PointSet> cells;
  PointSet seen;
  for (Point s = 0; s < n; ++s) {
    if (seen.contains(s)) continue;
    PointSet comp{s};
    PointSet frontier{s};
    while (!frontier.empty()) {
      PointSet next;
      frontier.for_each([&](Point u) { next |= gamma.out_neighbors(u) | gamma.in_neighbors(u); });
      frontier = next - comp;
      comp |= frontier;
    }
    seen |= comp;
    cells.push_back(comp);
  }
  return Partition(n, cells);
}

inline bool is_weakly_connected(const Digraph& gamma) { return weak_components(gamma).size() == 1; }

struct GirthReport {
  std::optional<std::size_t> girth;  // absent for forests
  bool contains_bipartite = false;   // a vec K_{p,p}
};

// Girth of the underlying simple graph by breadth-first search from every
// vertex; vec K_{p,p} by checking every p-set A for p common out-neighbours
// (these are automatically outside A, as there are no loops).
inline GirthReport girth_and_bipartite_search(const Digraph& gamma, std::size_t p) {
  if (p < 2) fail(ErrorKind::invalid_argument, "p must be at least 2");
  std::size_t n = gamma.order();
  GirthReport r;
  std::vector<PointSet> adj(n);
  for (Point u = 0; u < n; ++u) adj[u] = gamma.out_neighbors(u) | gamma.in_neighbors(u);
  for (Point s = 0; s < n; ++s) {
    std::vector<std::size_t> dist(n, n + 1);
    std::vector<Point> parent(n, static_cast<Point>(n));
    std::vector<Point> queue{s};
    dist[s] = 0;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      Point u = queue[qi];
      adj[u].for_each([&](Point v) {
        if (dist[v] == n + 1) {
          dist[v] = dist[u] + 1;
          parent[v] = u;
          queue.push_back(v);
        } else if (parent[u] != v) {
          std::size_t len = dist[u] + dist[v] + 1;
          if (!r.girth || len < *r.girth) r.girth = len;
        }
      });
    }
  }
  if (p <= n) {
    std::vector<Point> pick(p);
    std::iota(pick.begin(), pick.end(), Point{0});
    while (true) {
      PointSet common = PointSet::range(n);
      for (Point a : pick) common &= gamma.out_neighbors(a);
      if (common.size() >= p) {
        r.contains_bipartite = true;
        break;
      }
      std::size_t i = p;
      while (i > 0 && pick[i - 1] == n - p + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < p; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return r;
}

inline SetSystem set_system_of(const ColoredTupleSystem& t) {
  std::vector<PointSet> sets;
  for (const ColoredTuple& x : t.tuples()) sets.push_back(PointSet::of(x.points));
  return SetSystem(t.order(), std::move(sets));
}

inline SetSystem set_system_of(const IncidenceStructure& s) {
  std::vector<PointSet> sets;
  for (PointSet l : s.lines()) {
    if (!l.empty()) sets.push_back(l);
  }
  return SetSystem(s.order(), std::move(sets));
}

inline SetSystem set_system_of(const Digraph& gamma) {
  std::vector<PointSet> sets;
  for (auto [u, v] : gamma.arcs()) sets.push_back(PointSet{u, v});
  return SetSystem(gamma.order(), std::move(sets));
}

inline bool is_m_intersecting(const SetSystem& s, std::size_t m) {
  const auto& sets = s.sets();
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      if ((sets[i] & sets[j]).size() > m) return false;
    }
  }
  return true;
}

// Connected components of the hypergraph: points linked through shared sets.
// Points on no set form their own components.
inline Partition components(const SetSystem& s) {
  std::size_t n = s.order();
  std::vector<Point> parent(n);
  std::iota(parent.begin(), parent.end(), Point{0});
  auto find = [&](Point x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (PointSet set : s.sets()) {
    Point first = set.min();
    set.for_each([&](Point p) { parent[find(p)] = find(first); });
  }
  std::vector<PointSet> cells(n);
  for (Point p = 0; p < n; ++p) cells[find(p)] |= PointSet{p};
  std::vector<PointSet> out;
  for (PointSet c : cells) {
    if (!c.empty()) out.push_back(c);
  }
  return Partition(n, out);
}

struct IncidenceReport {
  bool configuration = false;
  std::size_t q = 0;  // lines per point
  std::size_t k = 0;  // points per line
  bool partial_sg = false;
  bool connected = false;
  Partition component_partition;
};

inline std::string to_string(const IncidenceReport& r) {
  std::string kind;
  if (r.configuration) kind = "configuration(" + std::to_string(r.q) + "," + std::to_string(r.k) + ")";
  if (r.partial_sg) kind += std::string(kind.empty() ? "" : " ") + "partial_SG";
  if (kind.empty()) kind = "neither";
  return kind + (r.connected ? " connected" : " disconnected") + " components=" +
         std::to_string(r.component_partition.size());
}

inline IncidenceReport classify_incidence(const IncidenceStructure& s) {
  IncidenceReport r;
  const auto& lines = s.lines();
  std::size_t n = s.order();
  // Two points on at most one line, equivalently two lines share at most one point.
  bool pairs_once = true;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      if ((lines[i] & lines[j]).size() >= 2) pairs_once = false;
    }
  }
  bool long_lines = true;
  for (PointSet l : lines) long_lines = long_lines && l.size() >= 3;
  r.partial_sg = pairs_once && long_lines;

  if (!lines.empty()) {
    std::size_t k = lines.front().size();
    bool uniform = true;
    for (PointSet l : lines) uniform = uniform && l.size() == k;
    std::vector<std::size_t> deg(n, 0);
    for (PointSet l : lines) l.for_each([&](Point p) { ++deg[p]; });
    bool regular = std::all_of(deg.begin(), deg.end(), [&](std::size_t d) { return d == deg[0]; });
    if (uniform && regular && deg[0] > 0 && k > 0 && pairs_once) {
      r.configuration = true;
      r.q = deg[0];
      r.k = k;
    }
  }
  r.component_partition = components(set_system_of(s));
  r.connected = r.component_partition.size() == 1;
  return r;
}

}  // namespace closurekit

#endif  // CLOSUREKIT_OBJECTS_HPP_
