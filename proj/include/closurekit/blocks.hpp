#ifndef CLOSUREKIT_BLOCKS_HPP_
#define CLOSUREKIT_BLOCKS_HPP_

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include "closurekit/group.hpp"
#include "closurekit/partition.hpp"
#include "closurekit/subgroups.hpp"

namespace closurekit {

namespace detail {

inline void require_transitive(const PermGroup& g) {
  if (!is_transitive(g)) fail(ErrorKind::not_transitive, "group is not transitive");
}

// Images of a set under the group generated by gens, or nullopt as soon as two
// images overlap without being equal.
inline std::optional<std::vector<PointSet>> set_orbit_if_block(const PermGroup& g, PointSet b) {
  std::vector<PointSet> seen{b};
  PointSet covered = b;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    for (const Permutation& s : g.generators()) {
      PointSet img = s.image(seen[i]);
      if (!img.intersects(covered)) {
        seen.push_back(img);
        covered |= img;
        continue;
      }
      if (std::find(seen.begin(), seen.end(), img) == seen.end()) return std::nullopt;
    }
  }
  return seen;
}

}  // namespace detail

// Generator-level test that every generator permutes the cells.
inline bool is_block_system_of(const PermGroup& g, const Partition& p) {
  if (p.degree() != g.degree()) return false;
  for (const Permutation& s : g.generators()) {
    if (!p.is_invariant_under(s)) return false;
  }
  return true;
}

inline void require_block_system(const PermGroup& g, const Partition& p) {
  if (p.degree() != g.degree()) fail(ErrorKind::degree_mismatch, "block system of another degree");
  if (!p.has_equal_cells() || !is_block_system_of(g, p)) {
    fail(ErrorKind::not_a_block_system, p.to_string() + " is not a block system of the group");
  }
}

// Smallest block containing seed: merge classes, propagating pairs of merged
// representatives through the generators.
inline PointSet minimal_block(const PermGroup& g, PointSet seed) {
  detail::require_transitive(g);
  std::size_t n = g.degree();
  if (seed.size() < 2 || !seed.subset_of(PointSet::range(n))) {
    fail(ErrorKind::invalid_argument, "seed needs at least two points of the domain");
  }
  std::vector<Point> parent(n);
  for (Point i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](Point x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::pair<Point, Point>> queue;
  Point a = seed.min();
  seed.for_each([&](Point b) {
    if (b != a) {
      parent[b] = a;
      queue.emplace_back(a, b);
    }
  });
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (const Permutation& s : g.generators()) {
      Point x = find(s(queue[i].first));
      Point y = find(s(queue[i].second));
      if (x == y) continue;
      if (x > y) std::swap(x, y);
      parent[y] = x;
      queue.emplace_back(x, y);
    }
  }
  PointSet out;
  Point root = find(a);
  for (Point i = 0; i < n; ++i) {
    if (find(i) == root) out.insert(i);
  }
  return out;
}

// The block system generated by a block.
inline BlockSystem block_system_of_block(const PermGroup& g, PointSet block) {
  auto cells = detail::set_orbit_if_block(g, block);
  if (!cells) fail(ErrorKind::not_a_block_system, "set is not a block");
  return BlockSystem(g.degree(), std::move(*cells));
}

// Block systems as the join-closure of minimal blocks through point 0; needs
// only generators.
inline std::vector<BlockSystem> block_systems_by_minimal_blocks(const PermGroup& g) {
  detail::require_transitive(g);
  std::size_t n = g.degree();
  std::vector<PointSet> blocks{PointSet{0}};
  std::set<std::uint64_t> seen{PointSet{0}.bits()};
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (Point x = 1; x < n; ++x) {
      if (blocks[i].contains(x)) continue;
      PointSet seed = blocks[i];
      seed.insert(x);
      PointSet b = minimal_block(g, seed);
      if (seen.insert(b.bits()).second) blocks.push_back(b);
    }
  }
  std::vector<BlockSystem> out;
  for (PointSet b : blocks) out.push_back(block_system_of_block(g, b));
  std::sort(out.begin(), out.end());
  return out;
}

// Every block system: blocks through 0 are unions of Stab(0)-orbits whose size
// divides the degree.
inline std::vector<BlockSystem> all_block_systems(const PermGroup& g) {
  detail::require_transitive(g);
  std::size_t n = g.degree();
  PermGroup full = g.materialize();
  OrbitPartition sub = orbits(point_stabilizer(full, 0));
  std::vector<PointSet> rest;
  for (PointSet c : sub.cells()) {
    if (!c.contains(0)) rest.push_back(c);
  }
  if (rest.size() > 20) return block_systems_by_minimal_blocks(g);
  std::vector<BlockSystem> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rest.size()); ++mask) {
    PointSet b{0};
    for (std::size_t i = 0; i < rest.size(); ++i) {
      if (((mask >> i) & 1U) != 0) b |= rest[i];
    }
    if (n % b.size() != 0) continue;
    auto cells = detail::set_orbit_if_block(g, b);
    if (cells) out.emplace_back(n, std::move(*cells));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline PermGroup fix(const PermGroup& g, const BlockSystem& b) {
  require_block_system(g, b);
  return filter_subgroup(g.materialize(), [&](const Permutation& e) {
    for (PointSet c : b.cells()) {
      if (e.image(c) != c) return false;
    }
    return true;
  });
}

// B is the orbit partition of a normal subgroup iff it is the orbit partition
// of fix_G(B), the largest normal subgroup fixing every cell.
inline bool is_normal_block_system(const PermGroup& g, const BlockSystem& b) {
  if (b.degree() != g.degree() || !is_block_system_of(g, b)) return false;
  return orbits(fix(g, b)) == b;
}

inline std::vector<BlockSystem> normal_block_systems(const PermGroup& g) {
  std::vector<BlockSystem> out;
  for (const BlockSystem& b : all_block_systems(g)) {
    if (is_normal_block_system(g, b)) out.push_back(b);
  }
  return out;
}

// Orbit partitions of the normal subgroups, each checked for the block
// property.
inline std::vector<BlockSystem> normal_block_systems_via_subgroups(const PermGroup& g) {
  detail::require_transitive(g);
  std::vector<BlockSystem> out;
  for (const PermGroup& nsub : normal_subgroups(g.materialize())) {
    BlockSystem b(orbits(nsub));
    require_block_system(g, b);
    if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(b);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Action of a group on the cells of a block system; cells are numbered in
// order of their least point.
struct QuotientAction {
  PermGroup source;
  BlockSystem system;
  PermGroup quotient;

  Permutation map(const Permutation& g) const {
    std::vector<std::size_t> img(system.size());
    for (std::size_t i = 0; i < system.size(); ++i) img[i] = system.image_cell(g, i);
    return Permutation::from_images(img);
  }
  PermGroup kernel() const {
    return filter_subgroup(source, [&](const Permutation& e) { return map(e).is_identity(); });
  }
};

inline QuotientAction quotient(const PermGroup& g, const BlockSystem& b) {
  require_block_system(g, b);
  QuotientAction q{g.materialize(), b, PermGroup::trivial(b.size())};
  std::vector<Permutation> gens;
  for (const Permutation& s : g.generators()) gens.push_back(q.map(s));
  q.quotient = PermGroup::generate(b.size(), std::move(gens));
  return q;
}

enum class Refinement { strict, weak, incomparable };

// strict: B < C; weak: B = C; otherwise incomparable. The quotient C/B lives
// on the cells of B.
struct RefinementResult {
  Refinement relation = Refinement::incomparable;
  std::optional<BlockSystem> quotient;
};

inline RefinementResult refines(const BlockSystem& b, const BlockSystem& c) {
  if (b.degree() != c.degree()) fail(ErrorKind::degree_mismatch, "block systems of different degrees");
  RefinementResult r;
  if (!b.refines(c)) return r;
  r.relation = b == c ? Refinement::weak : Refinement::strict;
  std::vector<std::size_t> labels(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) labels[i] = c.cell_of(b[i].min());
  r.quotient = BlockSystem(Partition::from_labels(labels));
  return r;
}

inline std::size_t omega(std::size_t n) { return prime_factors(n).size(); }

struct ImprimitivitySequence {
  std::vector<BlockSystem> systems;
  std::vector<std::size_t> index_ratios;
  std::vector<bool> normal_flags;
};

// All chains singletons < ... < whole with prime cell-size ratios, found by
// depth-first search in canonical order.
inline std::vector<ImprimitivitySequence> imprimitivity_sequences(const PermGroup& g, bool normal_only) {
  std::vector<BlockSystem> systems = all_block_systems(g);
  std::vector<bool> normal;
  for (const BlockSystem& b : systems) normal.push_back(is_normal_block_system(g, b));
  std::vector<ImprimitivitySequence> out;
  std::vector<std::size_t> chain{0};
  auto dfs = [&](auto&& self) -> void {
    const BlockSystem& cur = systems[chain.back()];
    if (cur.is_whole()) {
      ImprimitivitySequence seq;
      for (std::size_t i : chain) {
        seq.systems.push_back(systems[i]);
        seq.normal_flags.push_back(normal[i]);
      }
      for (std::size_t i = 1; i < chain.size(); ++i) {
        seq.index_ratios.push_back(systems[chain[i]].cell_size() / systems[chain[i - 1]].cell_size());
      }
      out.push_back(std::move(seq));
      return;
    }
    for (std::size_t j = 0; j < systems.size(); ++j) {
      if (normal_only && !normal[j]) continue;
      const BlockSystem& next = systems[j];
      if (next.cell_size() <= cur.cell_size() || next.cell_size() % cur.cell_size() != 0) continue;
      if (!is_prime(next.cell_size() / cur.cell_size()) || !cur.refines(next)) continue;
      chain.push_back(j);
      self(self);
      chain.pop_back();
    }
  };
  if (g.degree() == 1) {
    out.push_back({{systems[0]}, {}, {true}});
    return out;
  }
  dfs(dfs);
  return out;
}

struct WreathProduct {
  PermGroup group;
  BlockSystem lexi;
};

// G wr H on X x Y with (x, y) encoded as x*|Y| + y: G permutes the rows and
// independent copies of H act inside the rows.
inline WreathProduct wreath_product(const PermGroup& g, const PermGroup& h,
                                    std::size_t cap = default_order_cap()) {
  std::size_t nx = g.degree();
  std::size_t ny = h.degree();
  std::size_t n = nx * ny;
  if (n > kMaxDegree) fail(ErrorKind::degree_too_large, "wreath product degree " + std::to_string(n));
  std::vector<Permutation> gens;
  for (const Permutation& s : g.generators()) {
    std::vector<std::size_t> img(n);
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < ny; ++y) img[x * ny + y] = s(x) * ny + y;
    }
    gens.push_back(Permutation::from_images(img));
  }
  for (std::size_t x = 0; x < nx; ++x) {
    // One row per orbit of G suffices; the others are conjugates.
    if (orbit_of(g, static_cast<Point>(x)).min() != x) continue;
    for (const Permutation& s : h.generators()) {
      std::vector<std::size_t> img(n);
      for (std::size_t i = 0; i < n; ++i) img[i] = i;
      for (std::size_t y = 0; y < ny; ++y) img[x * ny + y] = x * ny + s(y);
      gens.push_back(Permutation::from_images(img));
    }
  }
  std::vector<PointSet> cells;
  for (std::size_t x = 0; x < nx; ++x) cells.push_back(PointSet(PointSet::range(ny).bits() << (x * ny)));
  WreathProduct w{PermGroup::generate(n, std::move(gens), cap), BlockSystem(n, std::move(cells))};
  if (!is_block_system_of(w.group, w.lexi)) {
    fail(ErrorKind::invariant_violation, "lexi-partition is not a block system of the wreath product");
  }
  if (is_transitive(h) && !is_normal_block_system(w.group, w.lexi)) {
    fail(ErrorKind::invariant_violation, "lexi-partition is not normal in the wreath product");
  }
  return w;
}

// (h, k)(i, j) = (h(i), k(j)) with (i, j) encoded as i*k + j.
inline PermGroup direct_product_canonical(const PermGroup& h, const PermGroup& k,
                                          std::size_t cap = default_order_cap()) {
  std::size_t m = h.degree();
  std::size_t q = k.degree();
  std::size_t n = m * q;
  if (n > kMaxDegree) fail(ErrorKind::degree_too_large, "product degree " + std::to_string(n));
  std::vector<Permutation> gens;
  for (const Permutation& s : h.generators()) {
    std::vector<std::size_t> img(n);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < q; ++j) img[i * q + j] = s(i) * q + j;
    }
    gens.push_back(Permutation::from_images(img));
  }
  for (const Permutation& s : k.generators()) {
    std::vector<std::size_t> img(n);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < q; ++j) img[i * q + j] = i * q + s(j);
    }
    gens.push_back(Permutation::from_images(img));
  }
  return PermGroup::generate(n, std::move(gens), cap);
}

// Every partition of {0..n-1} into cells of the given size, in lexicographic
// order of cells.
inline std::vector<BlockSystem> equal_partitions(std::size_t n, std::size_t cell_size) {
  std::vector<BlockSystem> out;
  if (cell_size == 0 || n % cell_size != 0) return out;
  std::vector<PointSet> cells;
  auto rec = [&](auto&& self, PointSet free) -> void {
    if (free.empty()) {
      out.emplace_back(n, cells);
      return;
    }
    Point first = free.min();
    PointSet rest = free - PointSet{first};
    std::vector<Point> pts = rest.to_vector();
    auto choose = [&](auto&& inner, std::size_t start, std::size_t depth, PointSet cell) -> void {
      if (depth == cell_size - 1) {
        cells.push_back(cell);
        self(self, free - cell);
        cells.pop_back();
        return;
      }
      for (std::size_t i = start; i + (cell_size - 1 - depth) <= pts.size(); ++i) {
        PointSet c = cell;
        c.insert(pts[i]);
        inner(inner, i + 1, depth + 1, c);
      }
    };
    choose(choose, 0, 0, PointSet{first});
  };
  rec(rec, PointSet::range(n));
  return out;
}

}  // namespace closurekit

#endif  // CLOSUREKIT_BLOCKS_HPP_
