#ifndef CLOSUREKIT_SEARCH_HPP_
#define CLOSUREKIT_SEARCH_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <type_traits>
#include <vector>

#include "closurekit/group.hpp"
#include "closurekit/objects.hpp"

namespace closurekit {

inline constexpr std::size_t kMaxSearchEdges = 20000;

namespace detail {

struct Hyperedge {
  int color = 0;
  bool ordered = false;
  std::vector<Point> points;
};

// Common form of every object: points 0..n-1, arcs between points, and
// colored hyperedges (ordered tuples or unordered sets).
struct Structure {
  std::size_t n = 1;
  std::vector<PointSet> out;
  std::vector<Hyperedge> edges;
};

inline Structure lower(const Digraph& d) {
  Structure s;
  s.n = d.order();
  for (Point u = 0; u < s.n; ++u) s.out.push_back(d.out_neighbors(u));
  return s;
}

inline Structure lower(const ColoredTupleSystem& t) {
  Structure s;
  s.n = t.order();
  for (const ColoredTuple& x : t.tuples()) s.edges.push_back({x.color, true, x.points});
  return s;
}

inline Structure lower(const SetSystem& t) {
  Structure s;
  s.n = t.order();
  for (PointSet x : t.sets()) s.edges.push_back({0, false, x.to_vector()});
  return s;
}

inline Structure lower(const IncidenceStructure& t) {
  Structure s;
  s.n = t.order();
  for (PointSet x : t.lines()) s.edges.push_back({0, false, x.to_vector()});
  return s;
}

// Image content of the hyperedges of one color class, as a sorted list.
inline std::map<int, std::vector<std::vector<Point>>> edge_classes(const Structure& s, const Permutation* g) {
  std::map<int, std::vector<std::vector<Point>>> out;
  for (const Hyperedge& e : s.edges) {
    std::vector<Point> pts;
    for (Point p : e.points) pts.push_back(g ? (*g)(p) : p);
    if (!e.ordered) std::sort(pts.begin(), pts.end());
    pts.push_back(e.ordered ? 1 : 0);
    out[e.color].push_back(std::move(pts));
  }
  for (auto& [c, v] : out) std::sort(v.begin(), v.end());
  return out;
}

// Whether g carries x onto y. With relabel set, each color class of x must
// land on some color class of y, bijectively; otherwise colors are fixed.
inline bool maps_onto(const Structure& x, const Structure& y, const Permutation& g, bool relabel) {
  if (x.n != y.n || x.out.size() != y.out.size() || x.edges.size() != y.edges.size()) return false;
  for (Point u = 0; u < x.out.size(); ++u) {
    if (g.image(x.out[u]) != y.out[g(u)]) return false;
  }
  auto xs = edge_classes(x, &g);
  auto ys = edge_classes(y, nullptr);
  if (!relabel) return xs == ys;
  if (xs.size() != ys.size()) return false;
  std::multiset<std::vector<std::vector<Point>>> a, b;
  for (auto& [c, v] : xs) a.insert(v);
  for (auto& [c, v] : ys) b.insert(v);
  return a == b;
}

// Color refinement on the disjoint union of two structures, with parallel
// individualization. Points of the left copy come first, then its hyperedge
// and color nodes, then the right copy in the same layout.
class PairSearch {
 public:
  PairSearch(const Structure& x, const Structure& y, bool relabel)
      : x_(x), y_(y), relabel_(relabel), n_(x.n) {
    offset_ = add_copy(x);
    add_copy(y);
    std::map<std::pair<long long, long long>, int> rank;
    for (const auto& l : labels_) rank.emplace(l, 0);
    int next = 0;
    for (auto& [l, r] : rank) r = next++;
    for (const auto& l : labels_) initial_.push_back(rank[l]);
    initial_ = refine(initial_);
  }

  std::size_t left_size() const { return offset_; }
  const std::vector<int>& initial() const { return initial_; }

  // Colors after individualizing left point a and right point b together.
  std::vector<int> individualize(std::vector<int> colors, Point a, Point b) const {
    int fresh = *std::max_element(colors.begin(), colors.end()) + 1;
    colors[a] = fresh;
    colors[offset_ + b] = fresh;
    return refine(colors);
  }

  bool balanced(const std::vector<int>& colors) const {
    std::map<int, long> count;
    for (std::size_t v = 0; v < offset_; ++v) ++count[colors[v]];
    for (std::size_t v = offset_; v < colors.size(); ++v) {
      if (--count[colors[v]] < 0) return false;
    }
    return std::all_of(count.begin(), count.end(), [](const auto& kv) { return kv.second == 0; });
  }

  // Least left point whose color class holds more than one left point.
  std::optional<Point> unresolved(const std::vector<int>& colors) const {
    std::map<int, int> count;
    for (Point p = 0; p < n_; ++p) ++count[colors[p]];
    for (Point p = 0; p < n_; ++p) {
      if (count[colors[p]] > 1) return p;
    }
    return std::nullopt;
  }

  std::vector<Point> right_points_with(const std::vector<int>& colors, int c) const {
    std::vector<Point> out;
    for (Point p = 0; p < n_; ++p) {
      if (colors[offset_ + p] == c) out.push_back(p);
    }
    return out;
  }

  // Depth-first search for the lex-least map extending the coloring.
  std::optional<Permutation> extend(const std::vector<int>& colors) const {
    if (!balanced(colors)) return std::nullopt;
    std::optional<Point> x = unresolved(colors);
    if (!x) {
      std::vector<std::size_t> img(n_);
      for (Point p = 0; p < n_; ++p) img[p] = right_points_with(colors, colors[p]).front();
      Permutation g = Permutation::from_images(img);
      if (maps_onto(x_, y_, g, relabel_)) return g;
      return std::nullopt;
    }
    for (Point y : right_points_with(colors, colors[*x])) {
      auto found = extend(individualize(colors, *x, y));
      if (found) return found;
    }
    return std::nullopt;
  }

 private:
  std::size_t add_copy(const Structure& s) {
    std::size_t base = labels_.size();
    std::size_t edge_base = base + s.n;
    labels_.resize(edge_base + s.edges.size(), {0, 0});
    adj_.resize(labels_.size());
    for (Point u = 0; u < s.out.size(); ++u) {
      s.out[u].for_each([&](Point v) {
        adj_[base + u].push_back({1, static_cast<int>(base + v)});
        adj_[base + v].push_back({2, static_cast<int>(base + u)});
      });
    }
    std::map<int, std::size_t> color_node;
    for (std::size_t i = 0; i < s.edges.size(); ++i) {
      const Hyperedge& e = s.edges[i];
      std::size_t node = edge_base + i;
      // Hyperedges are labelled by (ordered, length, color); colors are left
      // out when they may be relabelled, and color nodes tie classes together.
      long long key = static_cast<long long>(e.points.size()) * 2 + (e.ordered ? 1 : 0);
      labels_[node] = {1 + key, relabel_ ? 0 : e.color};
      for (std::size_t pos = 0; pos < e.points.size(); ++pos) {
        int tag = e.ordered ? static_cast<int>(pos) : 0;
        adj_[node].push_back({100 + tag, static_cast<int>(base + e.points[pos])});
        adj_[base + e.points[pos]].push_back({1000 + tag, static_cast<int>(node)});
      }
      if (relabel_) {
        auto it = color_node.find(e.color);
        if (it == color_node.end()) {
          it = color_node.emplace(e.color, labels_.size()).first;
          labels_.push_back({-1, 0});
          adj_.emplace_back();
        }
        adj_[node].push_back({5, static_cast<int>(it->second)});
        adj_[it->second].push_back({6, static_cast<int>(node)});
      }
    }
    return labels_.size() - base;
  }

  // 1-dimensional Weisfeiler-Leman refinement. New colors are ranks of
  // signatures, so they depend only on the structure, never on node order.
  std::vector<int> refine(std::vector<int> colors) const {
    std::size_t classes = std::set<int>(colors.begin(), colors.end()).size();
    std::vector<std::vector<int>> sig(colors.size());
    while (true) {
      for (std::size_t v = 0; v < colors.size(); ++v) {
        std::vector<std::pair<int, int>> nb;
        nb.reserve(adj_[v].size());
        for (auto [label, w] : adj_[v]) nb.emplace_back(label, colors[w]);
        std::sort(nb.begin(), nb.end());
        sig[v].assign(1, colors[v]);
        for (auto [a, b] : nb) {
          sig[v].push_back(a);
          sig[v].push_back(b);
        }
      }
      std::map<std::vector<int>, int> rank;
      for (const auto& s : sig) rank.emplace(s, 0);
      int next = 0;
      for (auto& [s, r] : rank) r = next++;
      for (std::size_t v = 0; v < colors.size(); ++v) colors[v] = rank[sig[v]];
      if (rank.size() == classes) return colors;
      classes = rank.size();
    }
  }

  const Structure& x_;
  const Structure& y_;
  bool relabel_;
  std::size_t n_;
  std::size_t offset_ = 0;
  std::vector<std::pair<long long, long long>> labels_;
  std::vector<std::vector<std::pair<int, int>>> adj_;
  std::vector<int> initial_;
};

inline void require_searchable(const Structure& s) {
  if (s.n > kMaxDegree) fail(ErrorKind::size_too_large, "search limited to " + std::to_string(kMaxDegree) + " points");
  if (s.edges.size() > kMaxSearchEdges) fail(ErrorKind::size_too_large, "too many tuples or lines for search");
}

}  // namespace detail

// Strong generating set found along a base: orbit_sizes[i] is the orbit of
// base[i] under the stabilizer of base[0..i-1], so order is their product.
struct AutomorphismSearch {
  std::size_t degree = 1;
  std::vector<Permutation> generators;
  std::vector<Point> base;
  std::vector<std::size_t> orbit_sizes;
  std::uint64_t order = 1;

  PermGroup group() const { return PermGroup(degree, generators); }
};

template <typename Object>
AutomorphismSearch automorphism_search(const Object& obj) {
  detail::Structure s = detail::lower(obj);
  detail::require_searchable(s);
  detail::PairSearch search(s, s, false);
  AutomorphismSearch out;
  out.degree = s.n;

  std::vector<std::vector<int>> level_colors;
  std::vector<std::vector<Point>> candidates;
  std::vector<int> colors = search.initial();
  while (auto b = search.unresolved(colors)) {
    out.base.push_back(*b);
    level_colors.push_back(colors);
    candidates.push_back(search.right_points_with(colors, colors[*b]));
    colors = search.individualize(colors, *b, *b);
  }

  out.orbit_sizes.assign(out.base.size(), 1);
  for (std::size_t i = out.base.size(); i-- > 0;) {
    auto orbit = [&]() {
      std::vector<Point> orb{out.base[i]};
      PointSet seen{out.base[i]};
      for (std::size_t k = 0; k < orb.size(); ++k) {
        for (const Permutation& g : out.generators) {
          Point q = g(orb[k]);
          if (!seen.contains(q)) {
            seen |= PointSet{q};
            orb.push_back(q);
          }
        }
      }
      return seen;
    };
    PointSet orb = orbit();
    for (Point c : candidates[i]) {
      if (orb.contains(c)) continue;
      auto g = search.extend(search.individualize(level_colors[i], out.base[i], c));
      if (g) {
        out.generators.push_back(*g);
        orb = orbit();
      }
    }
    out.orbit_sizes[i] = orb.size();
  }
  for (std::size_t k : out.orbit_sizes) out.order = detail::saturating_mul(out.order, k);
  return out;
}

// Full automorphism group as a generator-level group; materialize() as needed.
template <typename Object>
PermGroup automorphism_group(const Object& obj) {
  return automorphism_search(obj).group();
}

// Lex-least bijection carrying x onto y. Colored tuple systems may have their
// colors relabelled; automorphisms never relabel.
template <typename Object>
std::optional<Permutation> isomorphism(const Object& x, const Object& y) {
  detail::Structure a = detail::lower(x);
  detail::Structure b = detail::lower(y);
  detail::require_searchable(a);
  detail::require_searchable(b);
  if (a.n != b.n || a.edges.size() != b.edges.size()) return std::nullopt;
  bool relabel = std::is_same_v<Object, ColoredTupleSystem>;
  detail::PairSearch search(a, b, relabel);
  return search.extend(search.initial());
}

}  // namespace closurekit

#endif  // CLOSUREKIT_SEARCH_HPP_
