#ifndef CLOSUREKIT_GROUP_HPP_
#define CLOSUREKIT_GROUP_HPP_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "closurekit/error.hpp"
#include "closurekit/partition.hpp"
#include "closurekit/perm.hpp"

namespace closurekit {

inline constexpr std::size_t kDefaultOrderCap = 1'000'000;
inline constexpr const char* kOrderCapEnvVar = "CLOSUREKIT_ORDER_CAP";

namespace detail {

inline std::size_t order_cap_from_env() {
  const char* v = std::getenv(kOrderCapEnvVar);
  if (v == nullptr || *v == '\0') return kDefaultOrderCap;
  char* end = nullptr;
  unsigned long long cap = std::strtoull(v, &end, 10);
  if (end == v || *end != '\0' || cap == 0) return kDefaultOrderCap;
  return static_cast<std::size_t>(cap);
}

inline std::atomic<std::size_t>& order_cap_storage() {
  static std::atomic<std::size_t> cap{order_cap_from_env()};
  return cap;
}

}  // namespace detail

// Materialization limit used when no explicit cap is passed. Initialized from
// CLOSUREKIT_ORDER_CAP when set.
inline std::size_t default_order_cap() { return detail::order_cap_storage().load(); }
inline void set_default_order_cap(std::size_t cap) {
  if (cap == 0) fail(ErrorKind::invalid_argument, "order cap must be positive");
  detail::order_cap_storage().store(cap);
}

namespace detail {

// Open-addressing set of indices into an external permutation vector.
class PermIndexTable {
 public:
  explicit PermIndexTable(std::size_t expected = 16) { rehash(expected * 2 + 16); }

  // Returns the index of p if present.
  std::optional<std::uint32_t> find(const std::vector<Permutation>& items, const Permutation& p) const {
    std::size_t i = p.hash() & mask_;
    while (slots_[i] != 0) {
      std::uint32_t idx = slots_[i] - 1;
      if (items[idx] == p) return idx;
      i = (i + 1) & mask_;
    }
    return std::nullopt;
  }

  // Inserts items.back() unless an equal element is present; returns whether inserted.
  bool insert_last(const std::vector<Permutation>& items) {
    const Permutation& p = items.back();
    if ((count_ + 1) * 2 > slots_.size()) grow(items);
    std::size_t i = p.hash() & mask_;
    while (slots_[i] != 0) {
      if (items[slots_[i] - 1] == p) return false;
      i = (i + 1) & mask_;
    }
    slots_[i] = static_cast<std::uint32_t>(items.size());
    ++count_;
    return true;
  }

 private:
  void rehash(std::size_t want) {
    std::size_t cap = 16;
    while (cap < want) cap <<= 1U;
    slots_.assign(cap, 0);
    mask_ = cap - 1;
    count_ = 0;
  }
  void grow(const std::vector<Permutation>& items) {
    std::vector<std::uint32_t> old = std::move(slots_);
    rehash(old.size() * 2);
    for (std::uint32_t s : old) {
      if (s == 0) continue;
      std::size_t i = items[s - 1].hash() & mask_;
      while (slots_[i] != 0) i = (i + 1) & mask_;
      slots_[i] = s;
      ++count_;
    }
  }

  std::vector<std::uint32_t> slots_;
  std::size_t mask_ = 0;
  std::size_t count_ = 0;
};

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

// Group order from a stabilizer chain built by deterministic Schreier-Sims.
// Used only to reject oversized groups before breadth-first materialization.
inline std::uint64_t chain_order(std::size_t degree, const std::vector<Permutation>& gens) {
  struct Level {
    Point base = 0;
    std::vector<Permutation> gens;
    std::vector<std::optional<Permutation>> trans;  // trans[p](base) = p
    std::vector<Point> orbit;
  };
  std::vector<Level> levels;

  auto build_orbit = [&](Level& lv) {
    lv.trans.assign(degree, std::nullopt);
    lv.orbit.clear();
    lv.trans[lv.base] = Permutation(degree);
    lv.orbit.push_back(lv.base);
    for (std::size_t i = 0; i < lv.orbit.size(); ++i) {
      Point p = lv.orbit[i];
      for (const Permutation& s : lv.gens) {
        Point q = s(p);
        if (!lv.trans[q]) {
          lv.trans[q] = s * *lv.trans[p];
          lv.orbit.push_back(q);
        }
      }
    }
  };
  auto first_moved = [&](const Permutation& g) -> Point {
    for (Point p = 0; p < degree; ++p) {
      if (g(p) != p) return p;
    }
    return degree;
  };
  // Sifts g from level `from`; returns the residue and the level where it stopped.
  auto sift = [&](Permutation g, std::size_t from) -> std::pair<Permutation, std::size_t> {
    for (std::size_t i = from; i < levels.size(); ++i) {
      Point b = g(levels[i].base);
      if (!levels[i].trans[b]) return {g, i};
      g = levels[i].trans[b]->inverse() * g;
    }
    return {g, levels.size()};
  };
  // A residue stopping at level `at` fixes every earlier base point, so it
  // joins the generating sets of levels 0..at.
  auto add_generator = [&](const Permutation& g, std::size_t at) {
    if (at == levels.size()) {
      Level lv;
      lv.base = first_moved(g);
      levels.push_back(std::move(lv));
    }
    for (std::size_t j = 0; j <= at; ++j) {
      levels[j].gens.push_back(g);
      build_orbit(levels[j]);
    }
  };

  for (const Permutation& g : gens) {
    if (g.is_identity()) continue;
    auto [h, at] = sift(g, 0);
    if (!h.is_identity()) add_generator(h, at);
  }
  // Process levels bottom-up until every Schreier generator sifts to the identity.
  std::size_t i = levels.size();
  while (i > 0) {
    std::size_t lvl = i - 1;
    bool restarted = false;
    for (std::size_t oi = 0; oi < levels[lvl].orbit.size() && !restarted; ++oi) {
      Point p = levels[lvl].orbit[oi];
      for (std::size_t gi = 0; gi < levels[lvl].gens.size() && !restarted; ++gi) {
        const Permutation& s = levels[lvl].gens[gi];
        Permutation h = levels[lvl].trans[s(p)]->inverse() * s * *levels[lvl].trans[p];
        auto [r, at] = sift(h, lvl + 1);
        if (!r.is_identity()) {
          add_generator(r, at);
          i = at + 1;
          restarted = true;
        }
      }
    }
    if (!restarted) --i;
  }
  std::uint64_t order = 1;
  for (const Level& lv : levels) order = saturating_mul(order, lv.orbit.size());
  return order;
}

}  // namespace detail

class PermGroup {
 public:
  PermGroup() : PermGroup(trivial(1)) {}

  // Generator-only group; call materialize() before element-level operations.
  PermGroup(std::size_t degree, std::vector<Permutation> generators) : degree_(degree) {
    if (degree == 0 || degree > kMaxDegree) {
      fail(ErrorKind::degree_too_large, "group degree " + std::to_string(degree));
    }
    for (Permutation& g : generators) {
      if (g.degree() != degree) {
        fail(ErrorKind::degree_mismatch, "generator of degree " + std::to_string(g.degree()) +
                                             " in group of degree " + std::to_string(degree));
      }
      if (g.is_identity()) continue;
      if (std::find(generators_.begin(), generators_.end(), g) == generators_.end()) {
        generators_.push_back(g);
      }
    }
  }

  static PermGroup generate(std::size_t degree, std::vector<Permutation> generators,
                            std::size_t cap = default_order_cap()) {
    return PermGroup(degree, std::move(generators)).materialize(cap);
  }

  static PermGroup trivial(std::size_t degree) {
    PermGroup g(degree, {});
    g.set_elements(std::vector<Permutation>{Permutation(degree)});
    return g;
  }

  static PermGroup symmetric(std::size_t degree, std::size_t cap = default_order_cap()) {
    std::vector<Permutation> gens;
    if (degree >= 2) {
      std::vector<std::vector<Point>> cyc(1);
      for (Point i = 0; i < degree; ++i) cyc[0].push_back(i);
      gens.push_back(Permutation::from_cycles(degree, cyc));
      gens.push_back(Permutation::from_cycles(degree, {{0, 1}}));
    }
    return generate(degree, std::move(gens), cap);
  }

  // Wraps a canonically sorted, closed element list. The caller guarantees
  // closure; a generating set is extracted greedily when none is supplied.
  static PermGroup from_sorted_elements(std::size_t degree, std::vector<Permutation> elements,
                                        std::optional<std::vector<Permutation>> generators = std::nullopt) {
    PermGroup g(degree, generators ? std::move(*generators) : std::vector<Permutation>{});
    if (!generators) g.generators_ = greedy_generators(degree, elements);
    g.set_elements(std::move(elements));
    return g;
  }

  std::size_t degree() const noexcept { return degree_; }
  const std::vector<Permutation>& generators() const noexcept { return generators_; }
  bool is_materialized() const noexcept { return elements_ != nullptr; }

  PermGroup materialize(std::size_t cap = default_order_cap()) const {
    if (is_materialized()) return *this;
    std::uint64_t predicted = detail::chain_order(degree_, generators_);
    if (predicted > cap) {
      fail(ErrorKind::order_cap_exceeded,
           "group order " + (predicted == std::numeric_limits<std::uint64_t>::max()
                                 ? std::string("beyond 2^64")
                                 : std::to_string(predicted)) +
               " exceeds cap " + std::to_string(cap));
    }
    std::vector<Permutation> items;
    items.reserve(static_cast<std::size_t>(predicted));
    items.emplace_back(degree_);
    detail::PermIndexTable table(static_cast<std::size_t>(predicted));
    table.insert_last(items);
    for (std::size_t i = 0; i < items.size(); ++i) {
      for (const Permutation& s : generators_) {
        items.push_back(items[i] * s);
        if (!table.insert_last(items)) items.pop_back();
      }
    }
    if (items.size() != predicted) {
      fail(ErrorKind::invariant_violation, "breadth-first closure found " + std::to_string(items.size()) +
                                               " elements, stabilizer chain predicted " +
                                               std::to_string(predicted));
    }
    std::sort(items.begin(), items.end());
    PermGroup g = *this;
    g.set_elements(std::move(items));
    return g;
  }

  std::size_t order() const {
    require_materialized();
    return elements_->size();
  }
  const std::vector<Permutation>& elements() const {
    require_materialized();
    return *elements_;
  }
  std::optional<std::size_t> index_of(const Permutation& p) const {
    require_materialized();
    if (p.degree() != degree_) return std::nullopt;
    auto it = std::lower_bound(elements_->begin(), elements_->end(), p);
    if (it == elements_->end() || *it != p) return std::nullopt;
    return static_cast<std::size_t>(it - elements_->begin());
  }
  bool contains(const Permutation& p) const { return index_of(p).has_value(); }

  // Hash of the element set (materialized groups only).
  std::size_t hash() const {
    require_materialized();
    return elements_hash_;
  }

  friend bool operator==(const PermGroup& a, const PermGroup& b) {
    if (a.degree_ != b.degree_) return false;
    if (a.elements_ == b.elements_) return true;
    return a.order() == b.order() && a.hash() == b.hash() && a.elements() == b.elements();
  }

  // Generator-level containment test against a materialized group.
  bool is_subgroup_of(const PermGroup& other) const {
    if (other.degree_ != degree_) return false;
    for (const Permutation& g : generators_) {
      if (!other.contains(g)) return false;
    }
    return true;
  }

 private:
  void require_materialized() const {
    if (!elements_) fail(ErrorKind::not_materialized, "group has not been materialized");
  }

  void set_elements(std::vector<Permutation> items) {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ items.size();
    for (const Permutation& p : items) h = (h ^ p.hash()) * 0x100000001b3ULL;
    elements_hash_ = static_cast<std::size_t>(h);
    elements_ = std::make_shared<const std::vector<Permutation>>(std::move(items));
  }

  static std::vector<Permutation> greedy_generators(std::size_t degree,
                                                    const std::vector<Permutation>& elements) {
    std::vector<Permutation> gens;
    std::vector<Permutation> closure{Permutation(degree)};
    detail::PermIndexTable table(elements.size());
    table.insert_last(closure);
    for (const Permutation& e : elements) {
      if (table.find(closure, e)) continue;
      gens.push_back(e);
      // Extend the closure: new elements are products of old ones with the new generator.
      std::size_t start = 0;
      closure.push_back(e);
      table.insert_last(closure);
      for (std::size_t i = start; i < closure.size(); ++i) {
        for (const Permutation& s : gens) {
          closure.push_back(closure[i] * s);
          if (!table.insert_last(closure)) closure.pop_back();
        }
      }
    }
    return gens;
  }

  std::size_t degree_ = 1;
  std::vector<Permutation> generators_;
  std::shared_ptr<const std::vector<Permutation>> elements_;
  std::size_t elements_hash_ = 0;
};

inline PermGroup group_generate(std::size_t degree, std::vector<Permutation> gens,
                                std::size_t cap = default_order_cap()) {
  return PermGroup::generate(degree, std::move(gens), cap);
}

inline OrbitPartition orbits(const PermGroup& g) {
  std::size_t n = g.degree();
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Permutation& s : g.generators()) {
    for (Point i = 0; i < n; ++i) {
      std::size_t a = find(i);
      std::size_t b = find(s(i));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<std::size_t> labels(n);
  for (Point i = 0; i < n; ++i) labels[i] = find(i);
  return Partition::from_labels(labels);
}

inline bool is_transitive(const PermGroup& g) { return orbits(g).size() == 1; }

// Orbit of a single point under the generators.
inline PointSet orbit_of(const PermGroup& g, Point p) {
  PointSet seen{p};
  std::vector<Point> queue{p};
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (const Permutation& s : g.generators()) {
      Point q = s(queue[i]);
      if (!seen.contains(q)) {
        seen.insert(q);
        queue.push_back(q);
      }
    }
  }
  return seen;
}

template <class Pred>
PermGroup filter_subgroup(const PermGroup& g, Pred&& keep) {
  std::vector<Permutation> kept;
  for (const Permutation& e : g.elements()) {
    if (keep(e)) kept.push_back(e);
  }
  return PermGroup::from_sorted_elements(g.degree(), std::move(kept));
}

inline PermGroup point_stabilizer(const PermGroup& g, Point p) {
  return filter_subgroup(g, [p](const Permutation& e) { return e(p) == p; });
}

inline PermGroup setwise_stabilizer(const PermGroup& g, PointSet s) {
  return filter_subgroup(g, [s](const Permutation& e) { return e.image(s) == s; });
}

inline PermGroup pointwise_stabilizer(const PermGroup& g, PointSet s) {
  return filter_subgroup(g, [s](const Permutation& e) {
    bool fixed = true;
    s.for_each([&](Point p) { fixed = fixed && e(p) == p; });
    return fixed;
  });
}

// h^-1 G h
inline PermGroup conjugate_group(const PermGroup& g, const Permutation& h) {
  std::vector<Permutation> gens;
  for (const Permutation& s : g.generators()) gens.push_back(conjugate(s, h));
  if (!g.is_materialized()) return PermGroup(g.degree(), std::move(gens));
  std::vector<Permutation> items;
  items.reserve(g.order());
  Permutation hi = h.inverse();
  for (const Permutation& e : g.elements()) items.push_back(hi * e * h);
  std::sort(items.begin(), items.end());
  return PermGroup::from_sorted_elements(g.degree(), std::move(items), std::move(gens));
}

inline PermGroup transitive_constituent(const PermGroup& g, PointSet orbit) {
  if (orbit.empty() || orbit_of(g, orbit.min()) != orbit) {
    fail(ErrorKind::not_an_orbit, "point set is not an orbit of the group");
  }
  std::vector<Point> pts = orbit.to_vector();
  std::vector<std::size_t> pos(g.degree(), 0);
  for (std::size_t i = 0; i < pts.size(); ++i) pos[pts[i]] = i;
  std::vector<Permutation> gens;
  for (const Permutation& s : g.generators()) {
    std::vector<std::size_t> img(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) img[i] = pos[s(pts[i])];
    gens.push_back(Permutation::from_images(img));
  }
  return PermGroup::generate(pts.size(), std::move(gens));
}

// (Z_n)_L generated by i -> i+1 mod n.
inline Permutation cyclic_shift(std::size_t n) {
  std::vector<std::size_t> img(n);
  for (std::size_t i = 0; i < n; ++i) img[i] = (i + 1) % n;
  return Permutation::from_images(img);
}

inline PermGroup left_regular_representation(std::size_t n) {
  return PermGroup::generate(n, {cyclic_shift(n)});
}

inline PermGroup centralizer(const PermGroup& g, const PermGroup& h) {
  if (g.degree() != h.degree()) fail(ErrorKind::degree_mismatch, "centralizer of groups of different degrees");
  return filter_subgroup(g, [&](const Permutation& e) {
    for (const Permutation& s : h.generators()) {
      if (e * s != s * e) return false;
    }
    return true;
  });
}

inline PermGroup normalizer(const PermGroup& g, const PermGroup& h) {
  return filter_subgroup(g, [&](const Permutation& e) {
    Permutation ei = e.inverse();
    for (const Permutation& s : h.generators()) {
      if (!h.contains(ei * s * e)) return false;
    }
    return true;
  });
}

inline PointSet support(const Permutation& p) { return p.support(); }

inline PointSet support(const PermGroup& g) {
  PointSet s;
  for (const Permutation& x : g.generators()) s |= x.support();
  return s;
}

inline bool is_prime(std::size_t n) {
  if (n < 2) return false;
  for (std::size_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::vector<std::size_t> prime_factors(std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t d = 2; d * d <= n; ++d) {
    while (n % d == 0) {
      out.push_back(d);
      n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline bool is_prime_power(std::size_t n) {
  auto f = prime_factors(n);
  return !f.empty() && f.front() == f.back();
}

inline std::size_t factorial(std::size_t n) {
  std::size_t r = 1;
  for (std::size_t i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace closurekit

#endif  // CLOSUREKIT_GROUP_HPP_
