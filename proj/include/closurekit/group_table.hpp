#ifndef CLOSUREKIT_GROUP_TABLE_HPP_
#define CLOSUREKIT_GROUP_TABLE_HPP_

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "closurekit/group.hpp"

namespace closurekit {

// Fixed-length bit set used for subsets of a group's element list.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  std::size_t size() const noexcept { return n_; }
  void set(std::size_t i) noexcept { words_[i >> 6U] |= std::uint64_t{1} << (i & 63U); }
  bool test(std::size_t i) const noexcept { return ((words_[i >> 6U] >> (i & 63U)) & 1U) != 0; }
  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (std::uint64_t w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool subset_of(const Bitset& o) const noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if ((words_[i] & ~o.words_[i]) != 0) return false;
    }
    return true;
  }
  Bitset& operator&=(const Bitset& o) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  Bitset& operator|=(const Bitset& o) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      for (std::uint64_t b = words_[w]; b != 0; b &= b - 1) {
        f(w * 64 + static_cast<std::size_t>(std::countr_zero(b)));
      }
    }
  }
  std::size_t hash() const noexcept {
    std::uint64_t h = 0x84222325cbf29ce4ULL;
    for (std::uint64_t w : words_) {
      h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6U) + (h >> 2U);
    }
    return static_cast<std::size_t>(h);
  }
  friend bool operator==(const Bitset& a, const Bitset& b) noexcept { return a.words_ == b.words_; }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

// Index-based view of a materialized group: element i is the i-th element in
// canonical order, so index 0 is the identity.
class GroupTable {
 public:
  static constexpr std::size_t kTableLimit = 2048;

  explicit GroupTable(PermGroup g) : group_(std::move(g)) {
    const auto& el = group_.elements();
    std::size_t n = el.size();
    inv_.resize(n);
    type_key_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      inv_[i] = index(el[i].inverse());
      std::uint64_t key = 0;
      for (std::size_t c : el[i].cycle_type()) key = key * 33 + c;
      type_key_[i] = key;
    }
    if (n <= kTableLimit) {
      table_.resize(n * n);
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) table_[a * n + b] = index(el[a] * el[b]);
      }
    }
  }

  const PermGroup& group() const noexcept { return group_; }
  std::size_t size() const noexcept { return inv_.size(); }
  const Permutation& element(std::uint32_t i) const { return group_.elements()[i]; }

  std::uint32_t index(const Permutation& p) const {
    auto i = group_.index_of(p);
    if (!i) fail(ErrorKind::not_a_subgroup, "element " + to_cycle_string(p) + " not in group");
    return static_cast<std::uint32_t>(*i);
  }
  std::optional<std::uint32_t> find(const Permutation& p) const {
    auto i = group_.index_of(p);
    if (!i) return std::nullopt;
    return static_cast<std::uint32_t>(*i);
  }

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    if (!table_.empty()) return table_[a * size() + b];
    return index(element(a) * element(b));
  }
  std::uint32_t inv(std::uint32_t a) const { return inv_[a]; }
  // g^-1 a g
  std::uint32_t conj(std::uint32_t a, std::uint32_t g) const { return mul(inv_[g], mul(a, g)); }
  std::uint64_t cycle_type_key(std::uint32_t a) const { return type_key_[a]; }

 private:
  PermGroup group_;
  std::vector<std::uint32_t> inv_;
  std::vector<std::uint64_t> type_key_;
  std::vector<std::uint32_t> table_;
};

// A subgroup of a GroupTable's group.
struct Subgroup {
  Bitset members;
  std::vector<std::uint32_t> gens;
  std::size_t order = 1;

  bool contains(std::uint32_t e) const { return members.test(e); }
};

namespace detail {

inline Subgroup closure(const GroupTable& t, std::vector<std::uint32_t> gens) {
  Subgroup s;
  s.members = Bitset(t.size());
  s.members.set(0);
  std::vector<std::uint32_t> queue{0};
  gens.erase(std::remove(gens.begin(), gens.end(), 0U), gens.end());
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (std::uint32_t g : gens) {
      std::uint32_t p = t.mul(queue[i], g);
      if (!s.members.test(p)) {
        s.members.set(p);
        queue.push_back(p);
      }
    }
  }
  s.gens = std::move(gens);
  s.order = queue.size();
  return s;
}

inline Subgroup join(const GroupTable& t, const Subgroup& a, const Subgroup& b) {
  std::vector<std::uint32_t> gens = a.gens;
  for (std::uint32_t g : b.gens) {
    if (!a.members.test(g)) gens.push_back(g);
  }
  return closure(t, std::move(gens));
}

inline Subgroup trivial_subgroup(const GroupTable& t) { return closure(t, {}); }

inline Subgroup whole_group(const GroupTable& t) {
  std::vector<std::uint32_t> gens;
  for (const Permutation& g : t.group().generators()) gens.push_back(t.index(g));
  return closure(t, std::move(gens));
}

// Greedy generating set for a subgroup given by its member set.
inline Subgroup from_members(const GroupTable& t, const Bitset& members) {
  Subgroup cur = trivial_subgroup(t);
  members.for_each([&](std::size_t e) {
    if (!cur.members.test(e)) {
      auto gens = cur.gens;
      gens.push_back(static_cast<std::uint32_t>(e));
      cur = closure(t, std::move(gens));
    }
  });
  return cur;
}

inline PermGroup to_group(const GroupTable& t, const Subgroup& s) {
  std::vector<Permutation> items;
  items.reserve(s.order);
  s.members.for_each([&](std::size_t e) { items.push_back(t.element(static_cast<std::uint32_t>(e))); });
  std::vector<Permutation> gens;
  for (std::uint32_t g : s.gens) gens.push_back(t.element(g));
  return PermGroup::from_sorted_elements(t.group().degree(), std::move(items), std::move(gens));
}

inline Subgroup from_group(const GroupTable& t, const PermGroup& h) {
  std::vector<std::uint32_t> gens;
  for (const Permutation& g : h.generators()) gens.push_back(t.index(g));
  return closure(t, std::move(gens));
}

// Set-keyed collection of subgroups.
class SubgroupIndex {
 public:
  std::optional<std::size_t> find(const Bitset& m) const {
    auto it = buckets_.find(m.hash());
    if (it == buckets_.end()) return std::nullopt;
    for (auto [idx, value] : it->second) {
      if (keys_[idx] == m) return value;
    }
    return std::nullopt;
  }
  void insert(const Bitset& m, std::size_t value) {
    buckets_[m.hash()].push_back({keys_.size(), value});
    keys_.push_back(m);
  }
  std::size_t size() const noexcept { return keys_.size(); }

 private:
  std::vector<Bitset> keys_;
  std::unordered_map<std::size_t, std::vector<std::pair<std::size_t, std::size_t>>> buckets_;
};

// Distinct cyclic subgroups, optionally only those of prime power order.
struct CyclicSubgroups {
  std::vector<Subgroup> groups;
  std::vector<std::int32_t> id_of_generator;  // element -> id of the subgroup it generates
};

inline CyclicSubgroups cyclic_subgroups(const GroupTable& t, bool prime_power_only) {
  CyclicSubgroups out;
  out.id_of_generator.assign(t.size(), -1);
  SubgroupIndex index;
  for (std::uint32_t e = 1; e < t.size(); ++e) {
    if (out.id_of_generator[e] >= 0) continue;
    std::size_t ord = t.element(e).order();
    if (prime_power_only && !is_prime_power(ord)) continue;
    Subgroup c = closure(t, {e});
    auto found = index.find(c.members);
    std::size_t id;
    if (found) {
      id = *found;
    } else {
      id = out.groups.size();
      index.insert(c.members, id);
      out.groups.push_back(c);
    }
    c.members.for_each([&](std::size_t m) {
      if (t.element(static_cast<std::uint32_t>(m)).order() == ord) {
        out.id_of_generator[m] = static_cast<std::int32_t>(id);
      }
    });
  }
  return out;
}

inline bool normalizes(const GroupTable& t, std::uint32_t g, const Subgroup& h) {
  for (std::uint32_t s : h.gens) {
    if (!h.members.test(t.conj(s, g))) return false;
  }
  return true;
}

// Least g (in canonical order) with g^-1 a g = b, if any.
inline std::optional<std::uint32_t> find_conjugator(const GroupTable& t, const Subgroup& a, const Subgroup& b) {
  if (a.order != b.order) return std::nullopt;
  for (std::uint32_t g = 0; g < t.size(); ++g) {
    bool ok = true;
    for (std::uint32_t s : a.gens) {
      if (!b.members.test(t.conj(s, g))) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  return std::nullopt;
}

// Every subgroup, built from the trivial group by joining prime-power cyclic
// subgroups until no new subgroup appears. Every subgroup is generated by
// elements of prime power order, so the closure is complete.
inline std::vector<Subgroup> all_subgroups(const GroupTable& t, std::size_t limit = 500'000) {
  CyclicSubgroups cyc = cyclic_subgroups(t, true);
  std::vector<Subgroup> subs{trivial_subgroup(t)};
  SubgroupIndex index;
  index.insert(subs[0].members, 0);
  for (std::size_t i = 0; i < subs.size(); ++i) {
    for (const Subgroup& c : cyc.groups) {
      if (subs[i].members.test(c.gens.front())) continue;
      Subgroup j = join(t, subs[i], c);
      if (index.find(j.members)) continue;
      index.insert(j.members, subs.size());
      subs.push_back(std::move(j));
      if (subs.size() > limit) {
        fail(ErrorKind::size_too_large, "more than " + std::to_string(limit) + " subgroups");
      }
    }
  }
  return subs;
}

// Conjugation-invariant fingerprint used to bucket subgroups before the
// exhaustive conjugacy test.
inline std::vector<std::uint64_t> subgroup_fingerprint(const GroupTable& t, const Subgroup& s) {
  std::vector<std::uint64_t> key;
  s.members.for_each([&](std::size_t e) { key.push_back(t.cycle_type_key(static_cast<std::uint32_t>(e))); });
  std::sort(key.begin(), key.end());
  return key;
}

// One representative per conjugacy class of subgroups. Completeness: if J is
// conjugate to a representative R, then <J, C> is conjugate to <R, C'> for the
// conjugate C' of C, and every cyclic subgroup is scanned; conjugating C by the
// normalizer of R does not change the class of <R, C>, so one C per
// normalizer orbit suffices.
inline std::vector<Subgroup> subgroup_classes(const GroupTable& t, std::size_t limit = 200'000) {
  CyclicSubgroups cyc = cyclic_subgroups(t, true);
  std::vector<Subgroup> reps{trivial_subgroup(t)};
  std::vector<std::vector<std::uint64_t>> rep_keys{subgroup_fingerprint(t, reps[0])};
  std::unordered_map<std::size_t, std::vector<std::size_t>> by_key;
  auto key_hash = [](const std::vector<std::uint64_t>& k) {
    std::uint64_t h = k.size();
    for (std::uint64_t v : k) h = (h ^ v) * 0x100000001b3ULL;
    return static_cast<std::size_t>(h);
  };
  by_key[key_hash(rep_keys[0])].push_back(0);
  SubgroupIndex seen;
  seen.insert(reps[0].members, 0);

  for (std::size_t i = 0; i < reps.size(); ++i) {
    const Subgroup h = reps[i];
    // Generators of the normalizer of h.
    Bitset norm(t.size());
    for (std::uint32_t g = 0; g < t.size(); ++g) {
      if (normalizes(t, g, h)) norm.set(g);
    }
    Subgroup n = from_members(t, norm);
    // Orbits of the normalizer on the cyclic seeds.
    std::vector<std::size_t> parent(cyc.groups.size());
    for (std::size_t c = 0; c < parent.size(); ++c) parent[c] = c;
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (std::uint32_t g : n.gens) {
      for (std::size_t c = 0; c < cyc.groups.size(); ++c) {
        std::uint32_t img = t.conj(cyc.groups[c].gens.front(), g);
        std::size_t d = static_cast<std::size_t>(cyc.id_of_generator[img]);
        std::size_t a = find(c);
        std::size_t b = find(d);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
    for (std::size_t c = 0; c < cyc.groups.size(); ++c) {
      if (find(c) != c) continue;
      if (h.members.test(cyc.groups[c].gens.front())) continue;
      Subgroup j = join(t, h, cyc.groups[c]);
      if (seen.find(j.members)) continue;
      auto key = subgroup_fingerprint(t, j);
      std::size_t kh = key_hash(key);
      std::optional<std::size_t> cls;
      for (std::size_t r : by_key[kh]) {
        if (rep_keys[r] == key && find_conjugator(t, j, reps[r])) {
          cls = r;
          break;
        }
      }
      if (cls) {
        seen.insert(j.members, *cls);
        continue;
      }
      seen.insert(j.members, reps.size());
      by_key[kh].push_back(reps.size());
      rep_keys.push_back(std::move(key));
      reps.push_back(std::move(j));
      if (reps.size() > limit) {
        fail(ErrorKind::size_too_large, "more than " + std::to_string(limit) + " subgroup classes");
      }
    }
  }
  return reps;
}

// Orbit partition of a subgroup of a table's group.
inline OrbitPartition subgroup_orbits(const GroupTable& t, const Subgroup& s) {
  std::vector<Permutation> gens;
  for (std::uint32_t g : s.gens) gens.push_back(t.element(g));
  return orbits(PermGroup(t.group().degree(), std::move(gens)));
}

}  // namespace detail
}  // namespace closurekit

#endif  // CLOSUREKIT_GROUP_TABLE_HPP_
