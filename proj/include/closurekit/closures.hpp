#ifndef CLOSUREKIT_CLOSURES_HPP_
#define CLOSUREKIT_CLOSURES_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "closurekit/blocks.hpp"
#include "closurekit/group.hpp"
#include "closurekit/group_table.hpp"
#include "closurekit/subgroups.hpp"

namespace closurekit {

// Acts as g on x and as the identity elsewhere.
inline Permutation restrict(const Permutation& g, PointSet x) {
  if (g.image(x) != x) fail(ErrorKind::not_invariant, "permutation does not stabilize the set");
  std::vector<std::size_t> img(g.degree());
  for (Point i = 0; i < g.degree(); ++i) img[i] = x.contains(i) ? g(i) : i;
  return Permutation::from_images(img);
}

struct LargestSubgroup {
  PermGroup group;
  bool transitive = false;
};

// Elements of G permuting the cells of b; closed under products, so this is
// the largest subgroup with b as a block system.
inline LargestSubgroup largest_subgroup_with_block_system(const PermGroup& g, const Partition& b) {
  if (b.degree() != g.degree()) fail(ErrorKind::degree_mismatch, "partition of another degree");
  LargestSubgroup out;
  out.group = filter_subgroup(g.materialize(), [&](const Permutation& e) { return b.is_invariant_under(e); });
  out.transitive = is_transitive(out.group);
  return out;
}

namespace detail {

// Wreath stabilizers of every cell, computed from the element list of fix_G(B).
// For a cell C and a set U of other cells, W_U is the subgroup of elements
// trivial on C and outside U. Any subgroup W that is trivial on C and
// transitive-or-trivial elsewhere lies in W_U for U = the cells W moves, and
// W_U then qualifies too, so the maximum is the W_U with U the union of all
// qualifying U.
struct FixerData {
  std::vector<std::vector<std::uint32_t>> wstab;  // indices into the fix elements
  std::vector<std::size_t> class_of_cell;
  Partition fixer;
};

inline std::vector<std::uint32_t> cell_masks(const std::vector<Permutation>& elements, const Partition& b) {
  std::vector<std::uint32_t> masks(elements.size(), 0);
  for (std::size_t e = 0; e < elements.size(); ++e) {
    for (std::size_t c = 0; c < b.size(); ++c) {
      bool moved = false;
      b[c].for_each([&](Point p) { moved = moved || elements[e](p) != p; });
      if (moved) masks[e] |= std::uint32_t{1} << c;
    }
  }
  return masks;
}

inline FixerData compute_fixer(const std::vector<Permutation>& fix_elements, const Partition& b) {
  std::size_t k = b.size();
  if (k > 31) fail(ErrorKind::size_too_large, "too many cells");
  std::vector<std::uint32_t> masks = cell_masks(fix_elements, b);
  FixerData out;
  out.wstab.resize(k);

  auto qualifies = [&](std::uint32_t cbit, std::uint32_t u) {
    for (std::size_t d = 0; d < k; ++d) {
      if (((u >> d) & 1U) == 0) continue;
      Point p = b[d].min();
      PointSet orbit;
      bool moved = false;
      for (std::size_t e = 0; e < fix_elements.size(); ++e) {
        if ((masks[e] & cbit) != 0 || (masks[e] & ~u) != 0) continue;
        orbit.insert(fix_elements[e](p));
        moved = moved || ((masks[e] >> d) & 1U) != 0;
      }
      if (moved && orbit != b[d]) return false;
    }
    return true;
  };

  for (std::size_t c = 0; c < k; ++c) {
    std::uint32_t cbit = std::uint32_t{1} << c;
    std::uint32_t reach = 0;
    for (std::size_t e = 0; e < fix_elements.size(); ++e) {
      if ((masks[e] & cbit) == 0) reach |= masks[e];
    }
    std::uint32_t best = 0;
    for (std::uint32_t u = reach;; u = (u - 1) & reach) {
      if ((u & ~best) != 0 && qualifies(cbit, u)) best |= u;
      if (u == 0) break;
    }
    if (!qualifies(cbit, best)) {
      fail(ErrorKind::maximum_not_unique, "qualifying subgroups for cell " + std::to_string(c) +
                                              " have no qualifying join");
    }
    for (std::uint32_t e = 0; e < fix_elements.size(); ++e) {
      if ((masks[e] & cbit) == 0 && (masks[e] & ~best) == 0) out.wstab[c].push_back(e);
    }
  }

  out.class_of_cell.assign(k, 0);
  std::vector<std::size_t> labels(b.degree());
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t cls = c;
    for (std::size_t d = 0; d < c; ++d) {
      if (out.wstab[d] == out.wstab[c]) {
        cls = out.class_of_cell[d];
        break;
      }
    }
    out.class_of_cell[c] = cls;
    b[c].for_each([&](Point p) { labels[p] = cls; });
  }
  out.fixer = Partition::from_labels(labels);
  return out;
}

inline std::vector<Permutation> fix_elements(const PermGroup& g, const Partition& b) {
  std::vector<Permutation> out;
  for (const Permutation& e : g.elements()) {
    bool ok = true;
    for (PointSet c : b.cells()) ok = ok && e.image(c) == c;
    if (ok) out.push_back(e);
  }
  return out;
}

// Orbits of a closed element list: the orbit of x is {e(x)}.
inline Partition element_orbits(std::size_t n, const std::vector<Permutation>& elements) {
  std::vector<std::size_t> labels(n);
  for (Point i = 0; i < n; ++i) labels[i] = i;
  for (const Permutation& e : elements) {
    for (Point i = 0; i < n; ++i) labels[e(i)] = std::min(labels[e(i)], labels[i]);
  }
  return Partition::from_labels(labels);
}

inline PermGroup subset_group(std::size_t degree, const std::vector<Permutation>& items,
                              const std::vector<std::uint32_t>& idx) {
  std::vector<Permutation> el;
  el.reserve(idx.size());
  for (std::uint32_t i : idx) el.push_back(items[i]);
  return PermGroup::from_sorted_elements(degree, std::move(el));
}

}  // namespace detail

inline void require_normal_block_system(const PermGroup& g, const BlockSystem& b) {
  require_block_system(g, b);
  if (!is_normal_block_system(g, b)) {
    fail(ErrorKind::not_normal_block_system, b.to_string() + " is not a normal block system");
  }
}

inline PermGroup wreath_stabilizer(const PermGroup& g, const BlockSystem& b, PointSet cell) {
  require_normal_block_system(g, b);
  auto it = std::find(b.cells().begin(), b.cells().end(), cell);
  if (it == b.cells().end()) fail(ErrorKind::invalid_argument, "cell is not a cell of the system");
  auto fe = detail::fix_elements(g.materialize(), b);
  auto data = detail::compute_fixer(fe, b);
  return detail::subset_group(g.degree(), fe, data.wstab[static_cast<std::size_t>(it - b.cells().begin())]);
}

// The same maximum found by enumerating every subgroup of the pointwise
// stabilizer and joining those that qualify.
inline PermGroup wreath_stabilizer_by_lattice(const PermGroup& g, const BlockSystem& b, PointSet cell) {
  require_normal_block_system(g, b);
  PermGroup p = pointwise_stabilizer(fix(g, b), cell);
  std::vector<Permutation> gens;
  for (const PermGroup& w : all_subgroups(p)) {
    bool ok = true;
    for (PointSet other : b.cells()) {
      if (other == cell) continue;
      bool moved = false;
      for (const Permutation& s : w.generators()) moved = moved || !restrict(s, other).is_identity();
      if (moved && orbit_of(w, other.min()) != other) ok = false;
    }
    if (ok) gens.insert(gens.end(), w.generators().begin(), w.generators().end());
  }
  PermGroup join = PermGroup::generate(g.degree(), gens);
  for (PointSet other : b.cells()) {
    if (other == cell) continue;
    bool moved = false;
    for (const Permutation& s : join.generators()) moved = moved || !restrict(s, other).is_identity();
    if (moved && orbit_of(join, other.min()) != other) {
      fail(ErrorKind::maximum_not_unique, "join of qualifying subgroups does not qualify");
    }
  }
  return join;
}

struct FixerAnalysis {
  PermGroup group;
  BlockSystem system;
  std::vector<PermGroup> wstab_per_cell;  // aligned with system.cells()
  Partition equiv_classes;                // a partition of cell indices
  BlockSystem fixer_system;
};

inline FixerAnalysis fixer_analysis(const PermGroup& g, const BlockSystem& b) {
  require_normal_block_system(g, b);
  PermGroup full = g.materialize();
  auto fe = detail::fix_elements(full, b);
  auto data = detail::compute_fixer(fe, b);
  FixerAnalysis a{full, b, {}, Partition::from_labels(data.class_of_cell), BlockSystem()};
  for (const auto& w : data.wstab) a.wstab_per_cell.push_back(detail::subset_group(g.degree(), fe, w));
  if (!data.fixer.has_equal_cells() || !is_block_system_of(full, data.fixer) || !b.refines(data.fixer)) {
    fail(ErrorKind::invariant_violation, "fixer partition " + data.fixer.to_string() +
                                             " is not a block system refined by " + b.to_string());
  }
  a.fixer_system = BlockSystem(data.fixer);
  for (const Permutation& s : full.generators()) {
    Permutation si = s.inverse();
    for (std::size_t c = 0; c < b.size(); ++c) {
      if (conjugate_group(a.wstab_per_cell[c], si) != a.wstab_per_cell[b.image_cell(s, c)]) {
        fail(ErrorKind::invariant_violation, "wreath stabilizers are not conjugation equivariant");
      }
    }
  }
  for (std::size_t c = 0; c < b.size(); ++c) {
    for (std::size_t d = 0; d < b.size(); ++d) {
      if (data.class_of_cell[c] == data.class_of_cell[d]) continue;
      if (orbit_of(a.wstab_per_cell[c], b[d].min()) != b[d]) {
        fail(ErrorKind::invariant_violation, "inequivalent cell is not moved transitively");
      }
    }
  }
  return a;
}

// G-orbit representatives of partitions of {0..n-1} into cells of one size;
// the representative is the first partition of its orbit in enumeration order.
inline std::vector<BlockSystem> partition_orbit_representatives(const PermGroup& g, std::size_t cell_size) {
  std::vector<BlockSystem> reps;
  std::unordered_set<std::string> seen;
  auto key = [](const Partition& p) {
    auto l = p.labels();
    return std::string(l.begin(), l.end());
  };
  for (const BlockSystem& p : equal_partitions(g.degree(), cell_size)) {
    if (seen.count(key(p)) != 0) continue;
    reps.push_back(p);
    std::vector<Partition> queue{p};
    seen.insert(key(p));
    for (std::size_t i = 0; i < queue.size(); ++i) {
      for (const Permutation& s : g.generators()) {
        Partition img = queue[i].image(s);
        if (seen.insert(key(img)).second) queue.push_back(img);
      }
    }
  }
  return reps;
}

enum class ClosednessKind { five_halves, nine_eighths, five_fourths, three_halves };

inline std::string to_string(ClosednessKind k) {
  switch (k) {
    case ClosednessKind::five_halves: return "5/2";
    case ClosednessKind::nine_eighths: return "9/8";
    case ClosednessKind::five_fourths: return "5/4";
    case ClosednessKind::three_halves: return "3/2";
  }
  return "?";
}

struct ClosednessOptions {
  // 3/2 clause triggered by the fixer system of H instead of K_H.
  bool strict_h = false;
  // Quantify over every transitive subgroup and every normal block system.
  bool literal = false;
};

struct ClosednessWitness {
  PermGroup h;
  BlockSystem b;
  Partition e;
  std::optional<Permutation> g;  // element whose restriction escapes the group
  std::string reason;
};

struct ClosednessReport {
  ClosednessKind kind = ClosednessKind::five_halves;
  bool closed = true;
  std::optional<ClosednessWitness> witness;
};

struct ClosednessProfile {
  ClosednessReport five_halves;
  ClosednessReport nine_eighths;
  ClosednessReport five_fourths;
  ClosednessReport three_halves;         // K_H reading
  ClosednessReport three_halves_strict;  // H reading
  std::size_t systems_checked = 0;
  std::size_t subgroups_checked = 0;

  const ClosednessReport& get(ClosednessKind k, bool strict_h = false) const {
    switch (k) {
      case ClosednessKind::five_halves: return five_halves;
      case ClosednessKind::nine_eighths: return nine_eighths;
      case ClosednessKind::five_fourths: return five_fourths;
      case ClosednessKind::three_halves: return strict_h ? three_halves_strict : three_halves;
    }
    return five_halves;
  }
};

namespace detail {

// Restriction candidates for one cell X of a fixer system: generators of the
// subgroup of G fixing every B-cell inside X. Restriction to X is a
// homomorphism on that subgroup, so generators suffice.
inline std::vector<Permutation> restriction_candidates(const PermGroup& g, const Partition& b, PointSet x) {
  std::vector<PointSet> inside;
  for (PointSet c : b.cells()) {
    if (c.subset_of(x)) inside.push_back(c);
  }
  PermGroup f = filter_subgroup(g, [&](const Permutation& e) {
    for (PointSet c : inside) {
      if (e.image(c) != c) return false;
    }
    return true;
  });
  return f.generators();
}

// Visits (H, B, E_H) with H transitive and B a nontrivial normal block system
// of H, where B runs over G-orbit representatives and H over conjugacy classes
// in K_B = Stab_G(B). Conjugating by G permutes these triples and every
// closedness condition is conjugation invariant.
struct SystemData {
  BlockSystem b;
  PermGroup k;
  std::vector<Permutation> fix_k;
  FixerData fixer_k;
};

template <class OnSystem, class OnSubgroup>
void for_each_system(const PermGroup& g, OnSystem&& on_system, OnSubgroup&& on_subgroup) {
  std::size_t n = g.degree();
  for (std::size_t d = 2; d < n; ++d) {
    if (n % d != 0) continue;
    for (const BlockSystem& b : partition_orbit_representatives(g, d)) {
      LargestSubgroup ks = largest_subgroup_with_block_system(g, b);
      if (!ks.transitive) continue;
      SystemData sd{b, ks.group, fix_elements(ks.group, b), {}};
      if (element_orbits(n, sd.fix_k) != b) continue;  // B normal in no subgroup of K_B
      sd.fixer_k = compute_fixer(sd.fix_k, b);
      if (!on_system(sd)) return;
      if constexpr (!std::is_same_v<std::decay_t<OnSubgroup>, std::nullptr_t>) {
        GroupTable t(sd.k);
        Bitset fix_bits(t.size());
        for (const Permutation& e : sd.fix_k) fix_bits.set(t.index(e));
        for (const Subgroup& s : subgroup_classes(t)) {
          if (s.order < n || subgroup_orbits(t, s).size() != 1) continue;
          Bitset hf = s.members;
          hf &= fix_bits;
          std::vector<Permutation> hfe;
          hf.for_each([&](std::size_t i) { hfe.push_back(t.element(static_cast<std::uint32_t>(i))); });
          if (element_orbits(n, hfe) != b) continue;
          FixerData fd = compute_fixer(hfe, b);
          if (!on_subgroup(sd, t, s, fd)) return;
        }
      }
    }
  }
}

inline bool constituents_symmetric(const std::vector<Permutation>& fix, const Partition& b) {
  for (PointSet c : b.cells()) {
    std::unordered_set<Permutation> seen;
    for (const Permutation& e : fix) seen.insert(restrict(e, c));
    if (seen.size() != factorial(c.size())) return false;
  }
  return true;
}

}  // namespace detail

inline ClosednessProfile closedness_literal(const PermGroup& g);

// All closedness predicates at once. Trivial block systems are skipped: the
// fixer system is then the whole set, which makes every clause vacuous except
// the 3/2 clause for B = {Z_n}, which would force G = S_n.
inline ClosednessProfile closedness_profile(const PermGroup& g, ClosednessOptions opt = {}) {
  if (opt.literal) return closedness_literal(g);
  PermGroup full = g.materialize();
  detail::require_transitive(full);
  std::size_t n = full.degree();
  ClosednessProfile prof;
  prof.five_halves.kind = ClosednessKind::five_halves;
  prof.nine_eighths.kind = ClosednessKind::nine_eighths;
  prof.five_fourths.kind = ClosednessKind::five_fourths;
  prof.three_halves.kind = prof.three_halves_strict.kind = ClosednessKind::three_halves;
  auto flag = [](ClosednessReport& r, const ClosednessWitness& w) {
    if (!r.closed) return;
    r.closed = false;
    r.witness = w;
  };
  std::vector<bool> symmetric_constituents;
  std::size_t index = 0;
  bool is_symmetric = full.order() == factorial(n);

  std::map<std::uint64_t, std::vector<Permutation>> candidates;
  detail::for_each_system(
      full,
      [&](const detail::SystemData& sd) {
        ++prof.systems_checked;
        candidates.clear();
        const Partition& ek = sd.fixer_k.fixer;
        bool sym = detail::constituents_symmetric(sd.fix_k, sd.b);
        symmetric_constituents.push_back(sym);
        index = symmetric_constituents.size() - 1;
        if (!ek.is_whole()) {
          flag(prof.nine_eighths, {sd.k, sd.b, ek, std::nullopt, "fixer system of K_B is not the whole set"});
        }
        if (!ek.is_whole() && ek != sd.b) {
          flag(prof.five_fourths, {sd.k, sd.b, ek, std::nullopt, "fixer system of K_B is neither B nor the whole set"});
        }
        if (ek == sd.b && !sym) {
          flag(prof.three_halves, {sd.k, sd.b, ek, std::nullopt, "fix_K(B) is not symmetric on every cell"});
        }
        return true;
      },
      [&](const detail::SystemData& sd, const GroupTable& t, const Subgroup& s, const detail::FixerData& fd) {
        ++prof.subgroups_checked;
        const Partition& e = fd.fixer;
        if (e == sd.b && !symmetric_constituents[index]) {
          flag(prof.three_halves_strict,
               {detail::to_group(t, s), sd.b, e, std::nullopt, "fix_K(B) is not symmetric on every cell"});
        }
        if (e.is_whole() || is_symmetric || !prof.five_halves.closed) return true;
        for (PointSet x : e.cells()) {
          auto it = candidates.find(x.bits());
          if (it == candidates.end()) {
            it = candidates.emplace(x.bits(), detail::restriction_candidates(full, sd.b, x)).first;
          }
          for (const Permutation& f : it->second) {
            if (!full.contains(restrict(f, x))) {
              flag(prof.five_halves, {detail::to_group(t, s), sd.b, e, f, "restriction to " +
                                          Partition(n, {x, PointSet::range(n) - x}).to_string() +
                                          " escapes the group"});
              return true;
            }
          }
        }
        return true;
      });
  if (!prof.five_halves.closed) {
    for (ClosednessReport* r : {&prof.nine_eighths, &prof.five_fourths, &prof.three_halves, &prof.three_halves_strict}) {
      r->closed = false;
      r->witness = prof.five_halves.witness;
    }
    return prof;
  }
  if (!prof.five_fourths.closed) {
    flag(prof.three_halves, *prof.five_fourths.witness);
    flag(prof.three_halves_strict, *prof.five_fourths.witness);
  }
  return prof;
}

// Definition-verbatim evaluation over every transitive subgroup; exponential
// in the subgroup lattice, meant for small degrees and cross-checks.
inline ClosednessProfile closedness_literal(const PermGroup& g) {
  PermGroup full = g.materialize();
  detail::require_transitive(full);
  ClosednessProfile prof;
  prof.five_halves.kind = ClosednessKind::five_halves;
  prof.nine_eighths.kind = ClosednessKind::nine_eighths;
  prof.five_fourths.kind = ClosednessKind::five_fourths;
  prof.three_halves.kind = prof.three_halves_strict.kind = ClosednessKind::three_halves;
  auto flag = [](ClosednessReport& r, const ClosednessWitness& w) {
    if (!r.closed) return;
    r.closed = false;
    r.witness = w;
  };
  for (const PermGroup& h : transitive_subgroups(full)) {
    ++prof.subgroups_checked;
    for (const BlockSystem& b : normal_block_systems(h)) {
      ++prof.systems_checked;
      auto eh = detail::compute_fixer(detail::fix_elements(h, b), b).fixer;
      for (PointSet x : eh.cells()) {
        if (eh.is_whole()) break;
        for (const Permutation& f : detail::restriction_candidates(full, b, x)) {
          if (!full.contains(restrict(f, x))) flag(prof.five_halves, {h, b, eh, f, "restriction escapes the group"});
        }
      }
      if (b.is_trivial()) continue;
      PermGroup k = largest_subgroup_with_block_system(full, b).group;
      auto fk = detail::fix_elements(k, b);
      auto ek = detail::compute_fixer(fk, b).fixer;
      bool sym = detail::constituents_symmetric(fk, b);
      if (!eh.is_whole()) flag(prof.nine_eighths, {h, b, eh, std::nullopt, "fixer system of H is not the whole set"});
      if (!ek.is_whole() && ek != b) flag(prof.five_fourths, {h, b, ek, std::nullopt, "fixer system of K_H is neither B nor the whole set"});
      if (ek == b && !sym) flag(prof.three_halves, {h, b, ek, std::nullopt, "fix_K(B) is not symmetric on every cell"});
      if (eh == b && !sym) flag(prof.three_halves_strict, {h, b, eh, std::nullopt, "fix_K(B) is not symmetric on every cell"});
    }
  }
  if (!prof.five_halves.closed) {
    for (ClosednessReport* r : {&prof.nine_eighths, &prof.five_fourths, &prof.three_halves, &prof.three_halves_strict}) {
      r->closed = false;
      r->witness = prof.five_halves.witness;
    }
  }
  if (!prof.five_fourths.closed) {
    flag(prof.three_halves, *prof.five_fourths.witness);
    flag(prof.three_halves_strict, *prof.five_fourths.witness);
  }
  return prof;
}

inline ClosednessReport closedness(const PermGroup& g, ClosednessKind kind, ClosednessOptions opt = {}) {
  return closedness_profile(g, opt).get(kind, opt.strict_h);
}

inline ClosednessReport is_52_closed(const PermGroup& g, ClosednessOptions opt = {}) {
  return closedness(g, ClosednessKind::five_halves, opt);
}

struct ClosureStepRecord {
  std::size_t step = 0;
  PermGroup h;
  BlockSystem b;
  Partition e;
  PointSet e_cell;
  Permutation gamma;
  Permutation restricted;
};

struct ClosureReport {
  PermGroup input;
  PermGroup result;
  std::size_t steps = 1;
  std::vector<Permutation> added_generators;
  std::vector<ClosureStepRecord> provenance;
};

// One application of the closure operator: G together with the restrictions
// gamma|_E. Returns the new restrictions with their provenance.
inline std::vector<ClosureStepRecord> clo_52_step_records(const PermGroup& g) {
  PermGroup full = g.materialize();
  detail::require_transitive(full);
  std::vector<ClosureStepRecord> out;
  if (full.order() == factorial(full.degree())) return out;
  std::map<std::uint64_t, bool> done;
  std::unordered_set<Permutation> added;
  detail::for_each_system(
      full, [&](const detail::SystemData&) {
        done.clear();
        return true;
      },
      [&](const detail::SystemData& sd, const GroupTable& t, const Subgroup& s, const detail::FixerData& fd) {
        const Partition& e = fd.fixer;
        if (e.is_whole()) return true;
        for (PointSet x : e.cells()) {
          if (!done.emplace(x.bits(), true).second) continue;
          for (const Permutation& f : detail::restriction_candidates(full, sd.b, x)) {
            Permutation r = restrict(f, x);
            if (full.contains(r) || !added.insert(r).second) continue;
            out.push_back({0, detail::to_group(t, s), sd.b, e, x, f, r});
          }
        }
        return true;
      });
  return out;
}

inline PermGroup clo_52_step(const PermGroup& g) {
  PermGroup full = g.materialize();
  auto recs = clo_52_step_records(full);
  if (recs.empty()) return full;
  std::vector<Permutation> gens = full.generators();
  for (const auto& r : recs) gens.push_back(r.restricted);
  return PermGroup::generate(full.degree(), std::move(gens));
}

// Iterates the step to its fixpoint. steps counts applications up to the
// first one that adds nothing new beyond the previous result, minimum 1.
inline ClosureReport closure_52(const PermGroup& g) {
  ClosureReport rep;
  rep.input = g.materialize();
  PermGroup cur = rep.input;
  std::size_t changed = 0;
  while (true) {
    auto recs = clo_52_step_records(cur);
    if (recs.empty()) break;
    ++changed;
    std::vector<Permutation> gens = cur.generators();
    for (auto& r : recs) {
      r.step = changed;
      gens.push_back(r.restricted);
      rep.added_generators.push_back(r.restricted);
      rep.provenance.push_back(std::move(r));
    }
    cur = PermGroup::generate(cur.degree(), std::move(gens));
  }
  rep.steps = std::max<std::size_t>(1, changed);
  rep.result = cur;
  if (!rep.input.is_subgroup_of(rep.result)) {
    fail(ErrorKind::invariant_violation, "closure does not contain its input");
  }
  if (all_block_systems(rep.input) != all_block_systems(rep.result)) {
    fail(ErrorKind::invariant_violation, "closure changed the block systems");
  }
  return rep;
}

struct WreathDecomposition {
  BlockSystem system;
  std::size_t m = 0;
  PermGroup top;  // G / system
};

// Largest T (|T| >= 2) such that the elements supported inside T form the
// full symmetric group on T; the canonically least one among those of maximum
// size. Then G = (G/B) wr S_m for the block system B generated by T.
inline std::optional<WreathDecomposition> decompose_wreath_symmetric(const PermGroup& g) {
  PermGroup full = g.materialize();
  detail::require_transitive(full);
  std::size_t n = full.degree();
  if (n < 2 || n > 24) {
    if (n < 2) return std::nullopt;
    fail(ErrorKind::degree_too_large, "subset search limited to degree 24");
  }
  std::vector<std::uint64_t> supp;
  for (const Permutation& e : full.elements()) supp.push_back(e.support().bits());
  std::optional<PointSet> best;
  for (std::size_t size = n; size >= 2 && !best; --size) {
    std::size_t need = factorial(size);
    if (need > full.order()) continue;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != size) continue;
      std::size_t count = 0;
      for (std::uint64_t s : supp) count += (s & ~mask) == 0 ? 1 : 0;
      if (count != need) continue;
      PointSet t(mask);
      if (!best || t < *best) best = t;
    }
  }
  if (!best) return std::nullopt;
  auto cells = detail::set_orbit_if_block(full, *best);
  if (!cells) fail(ErrorKind::invariant_violation, "symmetric patch is not a block");
  WreathDecomposition d{BlockSystem(n, std::move(*cells)), best->size(), PermGroup()};
  d.top = quotient(full, d.system).quotient;
  std::size_t expected = d.top.order();
  for (std::size_t i = 0; i < d.system.size(); ++i) expected *= factorial(d.m);
  if (expected != full.order()) {
    fail(ErrorKind::invariant_violation, "order does not factor as a wreath product");
  }
  for (PointSet c : d.system.cells()) {
    auto pts = c.to_vector();
    std::vector<std::vector<Point>> cyc{pts};
    Permutation cycle = Permutation::from_cycles(n, cyc);
    Permutation swap = Permutation::from_cycles(n, {{pts[0], pts[1]}});
    if (!full.contains(cycle) || !full.contains(swap)) {
      fail(ErrorKind::invariant_violation, "cell symmetric group is not contained in the group");
    }
  }
  return d;
}

// Intersection of all 3/2-closed overgroups of G in S_n, found by a
// breadth-first walk over overgroups <O, s>. The walk does not continue above
// a 3/2-closed overgroup, since everything above it contains it.
inline PermGroup closure_32(const PermGroup& g, std::size_t max_degree = 8, ClosednessOptions opt = {}) {
  PermGroup full = g.materialize();
  detail::require_transitive(full);
  std::size_t n = full.degree();
  if (n > max_degree) fail(ErrorKind::degree_too_large, "closure_32 limited to degree " + std::to_string(max_degree));
  PermGroup sn = PermGroup::symmetric(n);
  std::vector<PermGroup> queue{full};
  std::unordered_set<std::size_t> seen_hash;
  std::vector<PermGroup> seen{full};
  seen_hash.insert(full.hash());
  std::optional<std::vector<Permutation>> meet;
  auto intersect = [&](const PermGroup& o) {
    if (!meet) {
      meet = o.elements();
      return;
    }
    std::vector<Permutation> out;
    std::set_intersection(meet->begin(), meet->end(), o.elements().begin(), o.elements().end(),
                          std::back_inserter(out));
    meet = std::move(out);
  };
  for (std::size_t i = 0; i < queue.size(); ++i) {
    PermGroup o = queue[i];
    if (closedness(o, ClosednessKind::three_halves, opt).closed) {
      intersect(o);
      continue;
    }
    std::vector<bool> covered(sn.order(), false);
    for (std::size_t j = 0; j < sn.order(); ++j) {
      if (covered[j]) continue;
      const Permutation& s = sn.elements()[j];
      if (o.contains(s)) continue;
      // <O, s> = <O, a s b> for a, b in O
      for (const Permutation& a : o.elements()) {
        for (const Permutation& b : o.generators()) covered[*sn.index_of(a * s * b)] = true;
        covered[*sn.index_of(a * s)] = true;
      }
      std::vector<Permutation> gens = o.generators();
      gens.push_back(s);
      PermGroup next = PermGroup::generate(n, std::move(gens));
      bool dup = false;
      if (seen_hash.count(next.hash()) != 0) {
        for (const PermGroup& x : seen) dup = dup || x == next;
      }
      if (dup) continue;
      seen_hash.insert(next.hash());
      seen.push_back(next);
      queue.push_back(next);
    }
  }
  PermGroup result = PermGroup::from_sorted_elements(n, std::move(*meet));
  if (!closedness(result, ClosednessKind::three_halves, opt).closed) {
    fail(ErrorKind::invariant_violation, "intersection of 3/2-closed overgroups is not 3/2-closed");
  }
  return result;
}

}  // namespace closurekit

#endif  // CLOSUREKIT_CLOSURES_HPP_
