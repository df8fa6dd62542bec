#ifndef CLOSUREKIT_THEOREMS_HPP_
#define CLOSUREKIT_THEOREMS_HPP_

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "closurekit/blocks.hpp"
#include "closurekit/ci.hpp"
#include "closurekit/closures.hpp"
#include "closurekit/normal_form.hpp"
#include "closurekit/objects.hpp"
#include "closurekit/parallel.hpp"
#include "closurekit/search.hpp"
#include "closurekit/subgroups.hpp"

namespace closurekit {

// Outcome of one acceptance criterion. A criterion passes when it has no
// violations, finished within its time limit, and (where it asks for one)
// produced the required witness.
struct CriterionResult {
  std::string id;
  std::string title;
  bool passed = true;
  bool skipped = false;
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::string summary;
  std::vector<std::string> witnesses;  // first few violations
  double seconds = 0;
  double time_limit = 0;  // seconds; 0 when the criterion sets none
};

struct SweepOptions {
  std::size_t degree_max = 13;
  std::size_t jobs = 1;
};

namespace detail {

inline constexpr std::size_t kMaxReportedWitnesses = 5;

inline CriterionResult start_result(std::string id, std::string title) {
  CriterionResult r;
  r.id = std::move(id);
  r.title = std::move(title);
  return r;
}

struct Tally {
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::vector<std::string> witnesses;

  void violation(std::string what) {
    ++violations;
    if (witnesses.size() < kMaxReportedWitnesses) witnesses.push_back(std::move(what));
  }
  void merge(const Tally& o) {
    checked += o.checked;
    violations += o.violations;
    for (const std::string& w : o.witnesses) {
      if (witnesses.size() < kMaxReportedWitnesses) witnesses.push_back(w);
    }
  }
};

inline std::string describe_group(const PermGroup& g) {
  std::string out = "<";
  for (std::size_t i = 0; i < g.generators().size(); ++i) {
    out += (i ? ", " : "") + to_cycle_string(g.generators()[i]);
  }
  return out + "> of degree " + std::to_string(g.degree());
}

inline std::vector<ResidueSet> subsets_of(const ResidueSet& pool) {
  std::vector<ResidueSet> out;
  for (std::size_t k = 0; k <= pool.size(); ++k) {
    for (ResidueSet& s : subsets_of_size(pool, k)) out.push_back(std::move(s));
  }
  return out;
}

inline ResidueSet nonzero_residues(std::size_t n) {
  ResidueSet out(n - 1);
  std::iota(out.begin(), out.end(), 1);
  return out;
}

// Every automorphism by filtering all n! permutations.
template <typename Object>
std::vector<Permutation> brute_force_automorphisms(const Object& x) {
  std::size_t n = x.order();
  std::vector<std::size_t> img(n);
  std::iota(img.begin(), img.end(), 0);
  std::vector<Permutation> out;
  do {
    Permutation g = Permutation::from_images(img);
    if (is_automorphism(x, g)) out.push_back(g);
  } while (std::next_permutation(img.begin(), img.end()));
  std::sort(out.begin(), out.end());
  return out;
}

inline bool nine_eighths_closed(const PermGroup& g) {
  if (g.degree() == 1) return true;
  return closedness(g, ClosednessKind::nine_eighths).closed;
}

// Second branch of the 3/2 structure: G = K wr S_m with K 9/8-closed,
// confirmed by |G| = |K| (m!)^deg(K).
inline bool is_symmetric_wreath_of_98(const PermGroup& g) {
  auto d = decompose_wreath_symmetric(g);
  if (!d || d->m < 2) return false;
  std::uint64_t order = d->top.order();
  for (std::size_t i = 0; i < d->top.degree(); ++i) order = saturating_mul(order, factorial(d->m));
  return order == g.order() && nine_eighths_closed(d->top);
}

// Lines of AG(2,3) outside one parallel class: the Pappus configuration.
inline IncidenceStructure pappus_configuration() {
  std::vector<PointSet> lines;
  const int dirs[3][2] = {{0, 1}, {1, 1}, {1, 2}};
  for (const auto& d : dirs) {
    PointSet covered;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        auto pt = [&](int k) { return static_cast<Point>(3 * ((a + k * d[0]) % 3) + (b + k * d[1]) % 3); };
        if (covered.contains(pt(0))) continue;
        PointSet l{pt(0), pt(1), pt(2)};
        covered |= l;
        lines.push_back(l);
      }
    }
  }
  return IncidenceStructure(9, lines);
}

inline Digraph petersen_graph() {
  std::vector<PointSet> v;
  for (Point a = 0; a < 5; ++a) {
    for (Point b = a + 1; b < 5; ++b) v.push_back(PointSet{a, b});
  }
  Digraph d(10);
  for (Point i = 0; i < 10; ++i) {
    for (Point j = 0; j < 10; ++j) {
      if (i != j && !v[i].intersects(v[j])) d.add_arc(i, j);
    }
  }
  return d;
}

// Bases {0, a, b} of cyclic (n_3) configurations: the six differences are distinct.
inline std::vector<ResidueSet> cyclic_configuration_bases(std::size_t n) {
  std::vector<ResidueSet> out;
  std::set<ResidueSet> seen;
  for (std::size_t a = 1; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      std::set<std::size_t> diff;
      for (std::size_t v : {a, b, b - a}) {
        diff.insert(v);
        diff.insert(n - v);
      }
      if (diff.size() != 6) continue;
      // One base per orbit under x -> u x + c.
      ResidueSet best;
      for (std::size_t u : units(n)) {
        for (std::size_t c = 0; c < n; ++c) {
          ResidueSet img;
          for (std::size_t v : {std::size_t{0}, a, b}) img.push_back((u * v + c) % n);
          std::sort(img.begin(), img.end());
          for (std::size_t s = 0; s < 3; ++s) {
            ResidueSet shifted;
            for (std::size_t v : img) shifted.push_back((v + n - img[s]) % n);
            std::sort(shifted.begin(), shifted.end());
            if (best.empty() || shifted < best) best = shifted;
          }
        }
      }
      if (seen.insert(best).second) out.push_back(best);
    }
  }
  return out;
}

// Transitive groups met by the sweeps: every transitive subgroup of S_n for
// n <= 6, and the automorphism groups of circulants and cyclic configurations
// of degree <= 8. Distinct as element sets.
inline std::vector<PermGroup> encountered_groups(std::size_t degree_max, std::size_t jobs) {
  std::vector<PermGroup> out;
  std::set<std::vector<Permutation>> seen;
  auto add = [&](const PermGroup& g) {
    if (seen.insert(g.elements()).second) out.push_back(g);
  };
  for (std::size_t n = 2; n <= std::min<std::size_t>(6, degree_max); ++n) {
    for (const PermGroup& h : transitive_subgroups(PermGroup::symmetric(n))) add(h);
  }
  for (std::size_t n = 2; n <= std::min<std::size_t>(8, degree_max); ++n) {
    auto sets = subsets_of(nonzero_residues(n));
    auto auts = parallel_map(sets.size(), jobs, [&](std::size_t i) {
      return automorphism_group(circulant(n, sets[i])).materialize();
    });
    for (const PermGroup& g : auts) add(g);
  }
  for (std::size_t n = 7; n <= std::min<std::size_t>(8, degree_max); ++n) {
    for (const ResidueSet& b : cyclic_configuration_bases(n)) {
      add(automorphism_group(cyclic_configuration(n, b)).materialize());
    }
  }
  return out;
}

inline std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

}  // namespace detail

inline const std::vector<std::string>& criterion_ids() {
  static const std::vector<std::string> ids{"AC1", "AC2", "AC3", "AC4", "AC5",
                                            "AC6", "AC7", "AC8", "AC9", "AC10"};
  return ids;
}

// AC1: closure_52 on every transitive group of degree 4..6.
inline CriterionResult check_closure_construction(const SweepOptions& opt) {
  CriterionResult r = detail::start_result("AC1", "5/2-closure construction");
  r.time_limit = 600;
  std::vector<PermGroup> groups;
  for (std::size_t n = 4; n <= std::min<std::size_t>(6, opt.degree_max); ++n) {
    for (const PermGroup& h : transitive_subgroups(PermGroup::symmetric(n))) groups.push_back(h);
  }
  auto parts = parallel_map(groups.size(), opt.jobs, [&](std::size_t i) {
    detail::Tally t;
    t.checked = 1;
    const PermGroup& g = groups[i];
    try {
      ClosureReport c = closure_52(g);
      if (!is_52_closed(c.result).closed) t.violation(detail::describe_group(g) + ": closure is not 5/2-closed");
      if (!g.is_subgroup_of(c.result)) t.violation(detail::describe_group(g) + ": closure misses the input");
      ClosureReport again = closure_52(c.result);
      if (again.result != c.result || !again.added_generators.empty()) {
        t.violation(detail::describe_group(g) + ": closure is not idempotent");
      }
      if (all_block_systems(g) != all_block_systems(c.result)) {
        t.violation(detail::describe_group(g) + ": block systems changed");
      }
    } catch (const Error& e) {
      t.violation(detail::describe_group(g) + ": " + e.what());
    }
    return t;
  });
  detail::Tally all;
  for (const auto& p : parts) all.merge(p);
  r.checked = all.checked;
  r.violations = all.violations;
  r.witnesses = all.witnesses;
  r.summary = std::to_string(groups.size()) + " transitive groups of degree 4-6";
  return r;
}

// AC2: every unit circulant of order <= 12 is CI, by the direct check.
inline CriterionResult check_toida(const SweepOptions& opt) {
  CriterionResult r = detail::start_result("AC2", "unit circulants are CI");
  r.time_limit = 900;
  std::vector<std::pair<std::size_t, ResidueSet>> work;
  std::size_t covered = 0;
  for (std::size_t n = 2; n <= std::min<std::size_t>(12, opt.degree_max); ++n) {
    std::set<ResidueSet> reps;
    for (const ResidueSet& s : detail::subsets_of(units(n))) {
      ++covered;
      reps.insert(multiplier_canonical(n, s));
    }
    for (const ResidueSet& s : reps) work.emplace_back(n, s);
  }
  auto parts = parallel_map(work.size(), opt.jobs, [&](std::size_t i) {
    auto [n, s] = work[i];
    detail::Tally t;
    t.checked = 1;
    CIReport c = is_ci_digraph_direct(n, s);
    if (!c.verdict) {
      t.violation(c.descriptor + " is isomorphic to Cay(Z_" + std::to_string(n) + ", " +
                  to_string(c.counterexample()->mate) + ") without a multiplier");
    }
    for (const CIWitness& w : c.witnesses) {
      if (w.kind == CIWitness::Kind::multiplier && detail::multiply(n, w.multiplier, s) != w.mate) {
        t.violation(c.descriptor + ": bad multiplier witness " + std::to_string(w.multiplier));
      }
    }
    return t;
  });
  detail::Tally all;
  for (const auto& p : parts) all.merge(p);
  r.checked = all.checked;
  r.violations = all.violations;
  r.witnesses = all.witnesses;
  r.summary = std::to_string(covered) + " unit connection sets in " + std::to_string(work.size()) +
              " multiplier orbits, n <= " + std::to_string(std::min<std::size_t>(12, opt.degree_max));
  return r;
}

// AC3: the full order 8 sweep finds an isomorphic pair with no multiplier.
inline CriterionResult check_contrast_witness(const SweepOptions& opt) {
  CriterionResult r = detail::start_result("AC3", "order 8 non-CI witness");
  r.time_limit = 120;
  if (opt.degree_max < 8) {
    r.skipped = true;
    r.summary = "needs degree 8";
    return r;
  }
  std::set<ResidueSet> reps;
  for (const ResidueSet& s : detail::subsets_of(detail::nonzero_residues(8))) reps.insert(multiplier_canonical(8, s));
  std::vector<ResidueSet> work(reps.begin(), reps.end());
  auto reports = parallel_map(work.size(), opt.jobs, [&](std::size_t i) { return is_ci_digraph_direct(8, work[i]); });
  std::vector<std::string> pairs;
  for (std::size_t i = 0; i < work.size(); ++i) {
    ++r.checked;
    if (reports[i].verdict) continue;
    ResidueSet t = reports[i].counterexample()->mate;
    auto iso = isomorphism(circulant(8, work[i]), circulant(8, t));
    bool confirmed = iso && circulant(8, work[i]).image(*iso) == circulant(8, t) &&
                     !multiplier_equivalent(8, work[i], t);
    if (!confirmed) {
      ++r.violations;
      r.witnesses.push_back("unconfirmed pair " + to_string(work[i]) + " / " + to_string(t));
      continue;
    }
    pairs.push_back(to_string(work[i]) + "~" + to_string(t) + " via " + to_cycle_string(*iso));
  }
  if (pairs.empty()) {
    ++r.violations;
    r.witnesses.push_back("no isomorphic non-multiplier-equivalent pair found");
  }
  r.summary = std::to_string(pairs.size()) + " non-CI orbits among " + std::to_string(work.size()) +
              (pairs.empty() ? "" : "; first " + pairs.front());
  return r;
}

// AC4: Aut of a unit circulant of order <= 8 is 3/2-closed, and exactly one of
// (9/8-closed) and (reducible with Aut = K wr S_m, K 9/8-closed) holds.
inline CriterionResult check_unit_circulant_structure(const SweepOptions& opt) {
  CriterionResult r = detail::start_result("AC4", "unit circulant automorphism structure");
  r.time_limit = 1200;
  std::vector<std::pair<std::size_t, ResidueSet>> work;
  for (std::size_t n = 2; n <= std::min<std::size_t>(8, opt.degree_max); ++n) {
    for (const ResidueSet& s : detail::subsets_of(units(n))) work.emplace_back(n, s);
  }
  struct Row {
    detail::Tally t;
    bool both = false;
  };
  auto parts = parallel_map(work.size(), opt.jobs, [&](std::size_t i) {
    auto [n, s] = work[i];
    Row row;
    row.t.checked = 1;
    std::string name = "Cay(Z_" + std::to_string(n) + ", " + to_string(s) + ")";
    Digraph gamma = circulant(n, s);
    PermGroup aut = automorphism_group(gamma).materialize();
    ClosednessProfile p = closedness_profile(aut);
    if (!p.three_halves.closed) row.t.violation(name + ": Aut is not 3/2-closed");
    bool first = p.nine_eighths.closed;
    bool second = twin_partition(gamma).reducible && detail::is_symmetric_wreath_of_98(aut);
    if (first == second) {
      row.both = first;
      row.t.violation(name + ": Aut " + (first ? "is 9/8-closed and also " : "is neither 9/8-closed nor ") +
                      "K wr S_m with K 9/8-closed (|Aut| = " + std::to_string(aut.order()) + ")");
    }
    return row;
  });
  detail::Tally all;
  std::size_t both = 0;
  for (const auto& p : parts) {
    all.merge(p.t);
    both += p.both ? 1 : 0;
  }
  r.checked = all.checked;
  r.violations = all.violations;
  r.witnesses = all.witnesses;
  r.summary = std::to_string(work.size()) + " unit connection sets, n <= " +
              std::to_string(std::min<std::size_t>(8, opt.degree_max)) + "; " + std::to_string(both) +
              " satisfy both branches";
  return r;
}

// AC5: in 9/8-closed transitive groups, regular cyclic subgroups are
// pairwise conjugate and pronormal.
inline CriterionResult check_configuration_conjugacy(const SweepOptions& opt, const std::vector<PermGroup>& pool) {
  CriterionResult r = detail::start_result("AC5", "regular cyclic subgroups of 9/8-closed groups");
  auto parts = parallel_map(pool.size(), opt.jobs, [&](std::size_t i) {
    detail::Tally t;
    const PermGroup& g = pool[i];
    if (!detail::nine_eighths_closed(g)) return t;
    std::vector<Permutation> keys;
    for (const Permutation& e : g.elements()) {
      if (is_full_cycle(e) && cyclic_key(e) == e) keys.push_back(e);
    }
    if (keys.empty()) return t;
    t.checked = 1;
    auto reach = detail::conjugate_transversal(g, keys.front());
    for (const Permutation& k : keys) {
      if (!reach.count(k)) {
        t.violation(detail::describe_group(g) + ": <" + to_cycle_string(k) + "> is not conjugate to <" +
                    to_cycle_string(keys.front()) + ">");
        return t;
      }
    }
    // All are conjugate, so pronormality of one settles all.
    PronormalReport pr = is_pronormal(g, PermGroup::generate(g.degree(), {keys.front()}));
    if (!pr.pronormal) t.violation(detail::describe_group(g) + ": regular cyclic subgroup is not pronormal");
    return t;
  });
  detail::Tally all;
  for (const auto& p : parts) all.merge(p);
  r.checked = all.checked;
  r.violations = all.violations;
  r.witnesses = all.witnesses;
  r.summary = std::to_string(all.checked) + " 9/8-closed groups with a regular cyclic subgroup, out of " +
              std::to_string(pool.size()) + " encountered";
  return r;
}

// AC6: a 3/2-closed transitive group is 9/8-closed or K wr S_m with K
// 9/8-closed, and not both.
inline CriterionResult check_three_halves_dichotomy(const SweepOptions& opt, const std::vector<PermGroup>& pool) {
  CriterionResult r = detail::start_result("AC6", "3/2-closed dichotomy");
  auto parts = parallel_map(pool.size(), opt.jobs, [&](std::size_t i) {
    detail::Tally t;
    const PermGroup& g = pool[i];
    ClosednessProfile p = closedness_profile(g);
    if (!p.three_halves.closed) return t;
    t.checked = 1;
    bool first = p.nine_eighths.closed;
    bool second = detail::is_symmetric_wreath_of_98(g);
    if (first == second) {
      t.violation(detail::describe_group(g) + (first ? ": both branches hold" : ": neither branch holds"));
    }
    return t;
  });
  detail::Tally all;
  for (const auto& p : parts) all.merge(p);
  r.checked = all.checked;
  r.violations = all.violations;
  r.witnesses = all.witnesses;
  r.summary = std::to_string(all.checked) + " 3/2-closed groups out of " + std::to_string(pool.size()) + " encountered";
  return r;
}

// AC7: named configurations are connected partial SG designs with
// point-transitive 9/8-closed Aut; cyclic (n_3) configurations are CI.
inline CriterionResult check_incidence(const SweepOptions& opt) {
  CriterionResult r = detail::start_result("AC7", "configurations");
  r.time_limit = 600;
  detail::Tally all;
  std::vector<std::pair<std::string, IncidenceStructure>> named;
  if (opt.degree_max >= 7) named.emplace_back("Fano 7_3", cyclic_configuration(7, {0, 1, 3}));
  if (opt.degree_max >= 8) named.emplace_back("Moebius-Kantor 8_3", cyclic_configuration(8, {0, 1, 3}));
  if (opt.degree_max >= 9) {
    named.emplace_back("cyclic 9_3", cyclic_configuration(9, {0, 1, 3}));
    named.emplace_back("Pappus 9_3", detail::pappus_configuration());
  }
  std::vector<std::string> orders;
  for (const auto& [name, s] : named) {
    ++all.checked;
    IncidenceReport c = classify_incidence(s);
    if (!c.configuration || c.q != 3 || c.k != 3 || !c.partial_sg || !c.connected) {
      all.violation(name + ": classified as " + to_string(c));
    }
    AutomorphismSearch a = automorphism_search(s);
    PermGroup aut = a.group().materialize();
    if (!is_transitive(aut)) all.violation(name + ": Aut is not point-transitive");
    if (!detail::nine_eighths_closed(aut)) all.violation(name + ": Aut is not 9/8-closed");
    orders.push_back(name + " |Aut|=" + std::to_string(a.order));
    if (name.rfind("Fano", 0) == 0) {
      std::size_t brute = detail::brute_force_automorphisms(s).size();
      if (a.order != 168 || brute != 168) {
        all.violation("Fano: |Aut| = " + std::to_string(a.order) + ", brute force " + std::to_string(brute));
      }
    }
  }
  std::vector<std::pair<std::size_t, ResidueSet>> work;
  for (std::size_t n = 7; n <= std::min<std::size_t>(13, opt.degree_max); ++n) {
    for (const ResidueSet& b : detail::cyclic_configuration_bases(n)) work.emplace_back(n, b);
  }
  auto parts = parallel_map(work.size(), opt.jobs, [&](std::size_t i) {
    auto [n, b] = work[i];
    detail::Tally t;
    t.checked = 1;
    CIReport c = is_ci_object(cyclic_configuration(n, b));
    if (!c.verdict) t.violation("cyclic configuration Z_" + std::to_string(n) + " " + to_string(b) + " is not CI");
    return t;
  });
  for (const auto& p : parts) all.merge(p);
  r.checked = all.checked;
  r.violations = all.violations;
  r.witnesses = all.witnesses;
  r.summary = detail::join(orders, ", ") + "; " + std::to_string(work.size()) +
              " cyclic (n_3) configurations up to isomorphism, n <= " +
              std::to_string(std::min<std::size_t>(13, opt.degree_max));
  return r;
}

// AC8: Petersen graph: girth 5, no directed K_{2,2}, 9/8-closed Aut of order 120.
inline CriterionResult check_girth(const SweepOptions& opt) {
  CriterionResult r = detail::start_result("AC8", "Petersen graph");
  r.time_limit = 600;
  if (opt.degree_max < 10) {
    r.skipped = true;
    r.summary = "needs degree 10";
    return r;
  }
  Digraph p = detail::petersen_graph();
  r.checked = 1;
  GirthReport gr = girth_and_bipartite_search(p, 2);
  if (gr.girth != std::optional<std::size_t>(5)) r.witnesses.push_back("girth is not 5");
  if (gr.contains_bipartite) r.witnesses.push_back("contains K_{2,2}");
  AutomorphismSearch a = automorphism_search(p);
  std::size_t brute = detail::brute_force_automorphisms(p).size();
  if (a.order != 120 || brute != 120) {
    r.witnesses.push_back("|Aut| = " + std::to_string(a.order) + ", brute force " + std::to_string(brute));
  }
  if (!detail::nine_eighths_closed(a.group().materialize())) r.witnesses.push_back("Aut is not 9/8-closed");
  r.violations = r.witnesses.size();
  r.summary = "girth " + (gr.girth ? std::to_string(*gr.girth) : std::string("none")) + ", |Aut| = " +
              std::to_string(a.order) + " (brute force " + std::to_string(brute) + ")";
  return r;
}

namespace detail {

struct NormalFormTally {
  Tally t;
  std::size_t over_cap = 0;
  std::size_t symmetric_duplicates = 0;
  std::size_t two_groups = 0;
};

inline void normal_form_instance(const Permutation& x, const Permutation& y, NormalFormTally& out) {
  ++out.t.checked;
  NormalFormReport rep = verify_normal_form(x, y);
  std::size_t n = x.degree();
  if (!rep.found) {
    out.t.violation("n=" + std::to_string(n) + " y=" + to_cycle_string(y) + ": " + rep.failure);
  }
  if (rep.pimpernel.applicable) {
    ++out.two_groups;
    if (!rep.pimpernel.holds) out.t.violation("n=" + std::to_string(n) + " y=" + to_cycle_string(y) + ": pimpernel fails");
  }
}

inline Permutation cycle_from_sequence(const std::vector<std::size_t>& seq) {
  std::vector<std::size_t> img(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) img[seq[i]] = seq[(i + 1) % seq.size()];
  return Permutation::from_images(img);
}

// True when some power of g is a single p-cycle for a prime p <= n - 3.
// Jordan: a primitive group containing one contains A_n.
inline bool has_jordan_cycle(const Permutation& g) {
  std::size_t n = g.degree();
  std::vector<std::size_t> lengths;
  PointSet seen;
  for (Point p = 0; p < n; ++p) {
    if (seen.contains(p)) continue;
    std::size_t len = 0;
    Point q = p;
    do {
      seen |= PointSet{q};
      q = g(q);
      ++len;
    } while (q != p);
    lengths.push_back(len);
  }
  for (std::size_t p = 2; p + 3 <= n; ++p) {
    if (!is_prime(p)) continue;
    std::size_t divisible = 0;
    bool exact = false;
    for (std::size_t l : lengths) {
      if (l % p == 0) {
        ++divisible;
        exact = l == p;
      }
    }
    if (divisible == 1 && exact) return true;
  }
  return false;
}

// Sweep over y for n = 12 with three reductions, each exact:
// y is taken up to <y> (least generator); up to conjugation by the affine
// normalizer of <x>, which preserves every part of the result; and when y
// preserves none of the block systems of <x>, <x,y> is primitive, so a word
// with a Jordan cycle puts A_12 inside and the group over the cap.
inline NormalFormTally normal_form_sweep_reduced(std::size_t n, std::size_t first, std::size_t cap) {
  NormalFormTally out;
  Permutation x = cyclic_shift(n);
  std::vector<Permutation> affine;
  for (std::size_t u : units(n)) {
    for (std::size_t b = 0; b < n; ++b) {
      std::vector<std::size_t> img(n);
      for (std::size_t i = 0; i < n; ++i) img[i] = (u * i + b) % n;
      affine.push_back(Permutation::from_images(img));
    }
  }
  std::vector<std::size_t> divisors;
  for (std::size_t m = 2; m < n; ++m) {
    if (n % m == 0) divisors.push_back(m);
  }
  std::vector<Permutation> words;
  for (std::size_t k = 1; k < n; ++k) words.push_back(x.pow(static_cast<long long>(k)));
  std::vector<std::size_t> units_n = units(n);

  std::vector<std::size_t> rest;
  for (std::size_t v = 1; v < n; ++v) {
    if (v != first) rest.push_back(v);
  }
  std::vector<std::size_t> seq(n);
  seq[0] = 0;
  seq[1] = first;
  do {
    std::copy(rest.begin(), rest.end(), seq.begin() + 2);
    Permutation y = cycle_from_sequence(seq);
    bool least = true;
    for (std::size_t k : units_n) {
      if (k == 1) continue;
      std::vector<std::size_t> img(n);
      for (std::size_t i = 0; i < n; ++i) img[seq[i]] = seq[(i + k) % n];
      if (Permutation::from_images(img) < y) {
        least = false;
        break;
      }
    }
    if (!least) continue;
    bool imprimitive = false;
    for (std::size_t m : divisors) {
      bool keeps = true;
      for (std::size_t i = 0; i + m < n && keeps; ++i) keeps = (y(static_cast<Point>(i + m)) + n - y(static_cast<Point>(i))) % m == 0;
      if (keeps) {
        imprimitive = true;
        break;
      }
    }
    if (!imprimitive) {
      bool jordan = false;
      for (const Permutation& w : words) {
        if (has_jordan_cycle(y * w) || has_jordan_cycle(y * y * w)) {
          jordan = true;
          break;
        }
      }
      if (jordan) {
        ++out.over_cap;
        continue;
      }
    }
    if (chain_order(n, {x, y}) > cap) {
      ++out.over_cap;
      continue;
    }
    bool canonical = true;
    for (const Permutation& a : affine) {
      if (cyclic_key(conjugate(y, a)) < y) {
        canonical = false;
        break;
      }
    }
    if (!canonical) {
      ++out.symmetric_duplicates;
      continue;
    }
    normal_form_instance(x, y, out);
  } while (std::next_permutation(rest.begin(), rest.end()));
  return out;
}

}  // namespace detail

// AC9: normal form for n in {6, 8, 12}; pimpernel dichotomy for 2-groups at n = 8.
inline CriterionResult check_normal_form(const SweepOptions& opt) {
  CriterionResult r = detail::start_result("AC9", "normal form and pimpernel");
  r.time_limit = 900;
  detail::NormalFormTally all;
  std::vector<std::string> notes;
  std::size_t cap = default_order_cap();
  for (std::size_t n : {6u, 8u}) {
    if (n > opt.degree_max) continue;
    Permutation x = cyclic_shift(n);
    std::vector<std::size_t> rest(n - 1);
    std::iota(rest.begin(), rest.end(), 1);
    std::vector<Permutation> ys;
    do {
      std::vector<std::size_t> seq{0};
      seq.insert(seq.end(), rest.begin(), rest.end());
      ys.push_back(detail::cycle_from_sequence(seq));
    } while (std::next_permutation(rest.begin(), rest.end()));
    auto parts = parallel_map(ys.size(), opt.jobs, [&](std::size_t i) {
      detail::NormalFormTally t;
      if (detail::chain_order(n, {x, ys[i]}) > cap) {
        ++t.over_cap;
      } else {
        detail::normal_form_instance(x, ys[i], t);
      }
      return t;
    });
    detail::NormalFormTally sub;
    for (const auto& p : parts) {
      sub.t.merge(p.t);
      sub.over_cap += p.over_cap;
      sub.two_groups += p.two_groups;
    }
    notes.push_back("n=" + std::to_string(n) + ": " + std::to_string(sub.t.checked) + " y" +
                    (n == 8 ? ", " + std::to_string(sub.two_groups) + " 2-groups" : ""));
    all.t.merge(sub.t);
    if (n == 8 && sub.two_groups == 0) all.t.violation("n=8: no 2-group instance found");
  }
  if (opt.degree_max >= 12) {
    std::size_t n = 12;
    auto parts = parallel_map(n - 1, opt.jobs,
                              [&](std::size_t i) { return detail::normal_form_sweep_reduced(n, i + 1, cap); });
    detail::NormalFormTally sub;
    for (const auto& p : parts) {
      sub.t.merge(p.t);
      sub.over_cap += p.over_cap;
      sub.symmetric_duplicates += p.symmetric_duplicates;
    }
    notes.push_back("n=12: " + std::to_string(sub.t.checked) + " classes checked, " +
                    std::to_string(sub.symmetric_duplicates) + " affine duplicates, " + std::to_string(sub.over_cap) +
                    " over cap");
    all.t.merge(sub.t);
  }
  r.checked = all.t.checked;
  r.violations = all.t.violations;
  r.witnesses = all.t.witnesses;
  r.summary = detail::join(notes, "; ");
  return r;
}

namespace detail {

template <typename Object>
void compare_with_brute_force(const std::string& name, const Object& x, Tally& t) {
  ++t.checked;
  std::vector<Permutation> brute = brute_force_automorphisms(x);
  AutomorphismSearch a = automorphism_search(x);
  PermGroup g = a.group().materialize();
  if (a.order != brute.size() || g.elements() != brute) {
    t.violation(name + ": search finds " + std::to_string(a.order) + " automorphisms, brute force " +
                std::to_string(brute.size()));
  }
}

}  // namespace detail

// AC10: automorphism search against brute force for the small test objects,
// and Babai against definitional CI verdicts for every circulant of order <= 8.
inline CriterionResult check_oracle_agreement(const SweepOptions& opt) {
  CriterionResult r = detail::start_result("AC10", "oracle agreement");
  std::size_t top = std::min<std::size_t>(8, opt.degree_max);
  detail::Tally all;

  std::vector<std::function<void(detail::Tally&)>> objects;
  for (std::size_t n = 2; n <= top; ++n) {
    for (const ResidueSet& s : detail::subsets_of(detail::nonzero_residues(n))) {
      objects.push_back([n, s](detail::Tally& t) {
        detail::compare_with_brute_force("Cay(Z_" + std::to_string(n) + ", " + to_string(s) + ")", circulant(n, s), t);
      });
    }
  }
  for (std::uint32_t mask = 0; mask < 64; ++mask) {
    objects.push_back([mask](detail::Tally& t) {
      Digraph d(3);
      std::size_t bit = 0;
      for (Point u = 0; u < 3; ++u) {
        for (Point v = 0; v < 3; ++v) {
          if (u == v) continue;
          if (mask >> bit & 1u) d.add_arc(u, v);
          ++bit;
        }
      }
      detail::compare_with_brute_force("digraph #" + std::to_string(mask) + " on 3 points", d, t);
    });
  }
  for (std::uint32_t mask = 0; mask < 64 && top >= 4; ++mask) {
    objects.push_back([mask](detail::Tally& t) {
      Digraph d(4);
      std::size_t bit = 0;
      for (Point u = 0; u < 4; ++u) {
        for (Point v = u + 1; v < 4; ++v) {
          if (mask >> bit & 1u) {
            d.add_arc(u, v);
            d.add_arc(v, u);
          }
          ++bit;
        }
      }
      detail::compare_with_brute_force("graph #" + std::to_string(mask) + " on 4 points", d, t);
    });
  }
  for (std::size_t n = 7; n <= top; ++n) {
    for (const ResidueSet& b : detail::cyclic_configuration_bases(n)) {
      objects.push_back([n, b](detail::Tally& t) {
        detail::compare_with_brute_force("configuration Z_" + std::to_string(n) + " " + to_string(b),
                                         cyclic_configuration(n, b), t);
      });
    }
  }
  if (top >= 6) {
    objects.push_back([](detail::Tally& t) {
      ColoredTupleSystem s = circulant_tuple_system(6, {{{0, 1}, 0}, {{0, 3}, 1}, {{0, 2, 3}, 2}});
      detail::compare_with_brute_force("tuple system on Z_6", s, t);
    });
    objects.push_back([](detail::Tally& t) {
      ColoredTupleSystem s(6, {{{0, 1, 2}, 0}, {{3, 4}, 1}, {{5, 0}, 0}, {{2, 1}, 1}});
      detail::compare_with_brute_force("asymmetric tuple system on 6 points", s, t);
    });
    objects.push_back([](detail::Tally& t) {
      detail::compare_with_brute_force("C_3 wr empty_2", digraph_wreath(circulant(3, {1}), Digraph(2)), t);
    });
    objects.push_back([](detail::Tally& t) {
      SetSystem s(6, {PointSet{0, 1, 2}, PointSet{2, 3, 4}, PointSet{4, 5, 0}});
      detail::compare_with_brute_force("triangle of triples", s, t);
    });
  }
  auto parts = parallel_map(objects.size(), opt.jobs, [&](std::size_t i) {
    detail::Tally t;
    objects[i](t);
    return t;
  });
  for (const auto& p : parts) all.merge(p);
  std::size_t objects_checked = all.checked;

  std::vector<std::pair<std::size_t, ResidueSet>> circ;
  for (std::size_t n = 2; n <= top; ++n) {
    for (const ResidueSet& s : detail::subsets_of(detail::nonzero_residues(n))) circ.emplace_back(n, s);
  }
  auto routes = parallel_map(circ.size(), opt.jobs, [&](std::size_t i) {
    auto [n, s] = circ[i];
    detail::Tally t;
    t.checked = 1;
    CIReport c = is_ci_object(circulant(n, s));
    if (c.babai_verdict != c.definitional_verdict) t.violation(c.descriptor + ": CI routes disagree");
    return t;
  });
  for (const auto& p : routes) all.merge(p);
  r.checked = all.checked;
  r.violations = all.violations;
  r.witnesses = all.witnesses;
  r.summary = std::to_string(objects_checked) + " objects against brute force, " + std::to_string(circ.size()) +
              " circulants through both CI routes";
  return r;
}

// Runs the criteria named in ids (all when empty), timing each.
inline std::vector<CriterionResult> run_criteria(const SweepOptions& opt, std::vector<std::string> ids = {}) {
  if (ids.empty()) ids = criterion_ids();
  std::optional<std::vector<PermGroup>> pool;
  auto groups = [&]() -> const std::vector<PermGroup>& {
    if (!pool) pool = detail::encountered_groups(opt.degree_max, opt.jobs);
    return *pool;
  };
  std::vector<CriterionResult> out;
  for (const std::string& id : ids) {
    auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    if (id == "AC1") r = check_closure_construction(opt);
    else if (id == "AC2") r = check_toida(opt);
    else if (id == "AC3") r = check_contrast_witness(opt);
    else if (id == "AC4") r = check_unit_circulant_structure(opt);
    else if (id == "AC5") r = check_configuration_conjugacy(opt, groups());
    else if (id == "AC6") r = check_three_halves_dichotomy(opt, groups());
    else if (id == "AC7") r = check_incidence(opt);
    else if (id == "AC8") r = check_girth(opt);
    else if (id == "AC9") r = check_normal_form(opt);
    else if (id == "AC10") r = check_oracle_agreement(opt);
    else fail(ErrorKind::invalid_argument, "unknown criterion " + id);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.passed = r.violations == 0 && (r.time_limit == 0 || r.seconds <= r.time_limit);
    out.push_back(std::move(r));
  }
  return out;
}

// One line: "AC1 PASS checked=... violations=... time=...s/limit <title>: <summary>".
inline std::string format_result_line(const CriterionResult& r) {
  std::ostringstream s;
  s << r.id << ' ' << (r.skipped ? "SKIP" : r.passed ? "PASS" : "FAIL") << " checked=" << r.checked
    << " violations=" << r.violations << " time=" << std::fixed;
  s.precision(1);
  s << r.seconds << 's';
  if (r.time_limit > 0) s << "/limit=" << r.time_limit << 's';
  s << ' ' << r.title << ": " << r.summary;
  return s.str();
}

}  // namespace closurekit

#endif  // CLOSUREKIT_THEOREMS_HPP_
