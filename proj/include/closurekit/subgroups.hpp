#ifndef CLOSUREKIT_SUBGROUPS_HPP_
#define CLOSUREKIT_SUBGROUPS_HPP_

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "closurekit/group.hpp"
#include "closurekit/group_table.hpp"

namespace closurekit {

namespace detail {

inline void require_subgroup(const PermGroup& h, const PermGroup& g) {
  if (h.degree() != g.degree()) fail(ErrorKind::degree_mismatch, "subgroup of a different degree");
  for (const Permutation& s : h.generators()) {
    if (!g.contains(s)) fail(ErrorKind::not_a_subgroup, to_cycle_string(s) + " lies outside the group");
  }
}

inline std::vector<PermGroup> sorted_groups(std::vector<PermGroup> groups) {
  std::sort(groups.begin(), groups.end(), [](const PermGroup& a, const PermGroup& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.elements() < b.elements();
  });
  return groups;
}

}  // namespace detail

// Every subgroup of g, ordered by (order, element list).
inline std::vector<PermGroup> all_subgroups(const PermGroup& g) {
  GroupTable t(g);
  std::vector<PermGroup> out;
  for (const Subgroup& s : detail::all_subgroups(t)) out.push_back(detail::to_group(t, s));
  return detail::sorted_groups(std::move(out));
}

inline std::vector<PermGroup> transitive_subgroups(const PermGroup& g) {
  GroupTable t(g);
  std::vector<PermGroup> out;
  for (const Subgroup& s : detail::all_subgroups(t)) {
    if (detail::subgroup_orbits(t, s).size() == 1) out.push_back(detail::to_group(t, s));
  }
  return detail::sorted_groups(std::move(out));
}

// One subgroup from each conjugacy class (conjugation inside g).
inline std::vector<PermGroup> subgroup_class_representatives(const PermGroup& g) {
  GroupTable t(g);
  std::vector<PermGroup> out;
  for (const Subgroup& s : detail::subgroup_classes(t)) out.push_back(detail::to_group(t, s));
  return detail::sorted_groups(std::move(out));
}

inline std::optional<Permutation> are_conjugate_subgroups(const PermGroup& g, const PermGroup& h1,
                                                          const PermGroup& h2) {
  detail::require_subgroup(h1, g);
  detail::require_subgroup(h2, g);
  if (h1.order() != h2.order()) return std::nullopt;
  for (const Permutation& x : g.elements()) {
    Permutation xi = x.inverse();
    bool ok = true;
    for (const Permutation& s : h1.generators()) {
      if (!h2.contains(xi * s * x)) {
        ok = false;
        break;
      }
    }
    if (ok) return x;
  }
  return std::nullopt;
}

// Canonical key of a cyclic group <g>: its least generator.
inline Permutation cyclic_key(const Permutation& g) {
  std::size_t ord = g.order();
  Permutation best = g;
  Permutation p = g;
  for (std::size_t k = 2; k < ord; ++k) {
    p = p * g;
    if (std::gcd(k, ord) == 1 && p < best) best = p;
  }
  return best;
}

inline bool is_full_cycle(const Permutation& g) {
  std::size_t n = g.degree();
  Point x = 0;
  for (std::size_t k = 1; k < n; ++k) {
    x = g(x);
    if (x == 0) return false;
  }
  return g(x) == 0;
}

inline std::vector<PermGroup> regular_cyclic_subgroups(const PermGroup& g) {
  std::map<Permutation, Permutation> keys;
  for (const Permutation& e : g.elements()) {
    if (is_full_cycle(e)) keys.emplace(cyclic_key(e), e);
  }
  std::vector<PermGroup> out;
  for (const auto& [key, e] : keys) out.push_back(PermGroup::generate(g.degree(), {key}));
  return detail::sorted_groups(std::move(out));
}

struct PronormalReport {
  bool pronormal = true;
  // (g, k) with k in <H, g^-1 H g> and k^-1 g^-1 H g k = H, one per conjugate of H.
  std::vector<std::pair<Permutation, Permutation>> witnesses;
  std::optional<Permutation> violation;
};

inline PronormalReport is_pronormal(const PermGroup& g, const PermGroup& h) {
  detail::require_subgroup(h, g);
  PronormalReport report;
  std::map<std::vector<Permutation>, bool> done;
  for (const Permutation& x : g.elements()) {
    PermGroup c = conjugate_group(h, x);
    if (done.count(c.elements()) != 0) continue;
    done[c.elements()] = true;
    std::vector<Permutation> gens = h.generators();
    gens.insert(gens.end(), c.generators().begin(), c.generators().end());
    PermGroup j = PermGroup::generate(g.degree(), gens);
    std::optional<Permutation> k = are_conjugate_subgroups(j, c, h);
    if (!k) {
      report.pronormal = false;
      report.violation = x;
      report.witnesses.clear();
      return report;
    }
    report.witnesses.emplace_back(x, *k);
  }
  return report;
}

inline PermGroup normal_closure(const PermGroup& g, const PermGroup& h) {
  std::vector<Permutation> gens = h.generators();
  PermGroup cur = PermGroup::generate(g.degree(), gens);
  bool grew = true;
  while (grew) {
    grew = false;
    for (const Permutation& x : g.generators()) {
      for (const Permutation& s : std::vector<Permutation>(cur.generators())) {
        Permutation c = conjugate(s, x);
        if (!cur.contains(c)) {
          gens.push_back(c);
          cur = PermGroup::generate(g.degree(), gens);
          grew = true;
        }
      }
    }
  }
  return cur;
}

// Normal subgroups as joins of normal closures of cyclic subgroups.
inline std::vector<PermGroup> normal_subgroups(const PermGroup& g) {
  GroupTable t(g);
  auto cyc = detail::cyclic_subgroups(t, false);
  detail::SubgroupIndex index;
  auto add = [&](Subgroup s, std::vector<Subgroup>& into) {
    if (index.find(s.members)) return;
    index.insert(s.members, into.size());
    into.push_back(std::move(s));
  };
  std::vector<Subgroup> normals;
  add(detail::trivial_subgroup(t), normals);
  for (const Subgroup& c : cyc.groups) {
    PermGroup nc = normal_closure(g, detail::to_group(t, c));
    add(detail::from_group(t, nc), normals);
  }
  for (std::size_t i = 0; i < normals.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) add(detail::join(t, normals[i], normals[j]), normals);
  }
  std::vector<PermGroup> out;
  for (const Subgroup& s : normals) out.push_back(detail::to_group(t, s));
  return detail::sorted_groups(std::move(out));
}

// Derived subgroup: normal closure of the commutators of generators.
inline PermGroup derived_subgroup(const PermGroup& g) {
  std::vector<Permutation> comms;
  const auto& gens = g.generators();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = i + 1; j < gens.size(); ++j) comms.push_back(commutator(gens[i], gens[j]));
  }
  return normal_closure(g, PermGroup(g.degree(), comms));
}

inline bool is_solvable(const PermGroup& g) {
  PermGroup cur = g.materialize();
  while (cur.order() > 1) {
    PermGroup next = derived_subgroup(cur);
    if (next.order() == cur.order()) return false;
    cur = next;
  }
  return true;
}

}  // namespace closurekit

#endif  // CLOSUREKIT_SUBGROUPS_HPP_
