#ifndef CLOSUREKIT_CI_HPP_
#define CLOSUREKIT_CI_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <type_traits>
#include <vector>

#include "closurekit/closures.hpp"
#include "closurekit/group.hpp"
#include "closurekit/objects.hpp"
#include "closurekit/search.hpp"
#include "closurekit/subgroups.hpp"

namespace closurekit {

// Residue sets are sorted lists of distinct elements of Z_n.
using ResidueSet = std::vector<std::size_t>;

// Largest number of candidate connection sets a direct check will scan.
inline constexpr std::size_t kMaxDirectCandidates = 200000;

enum class CIRoute { babai, definitional, both };

inline std::string to_string(CIRoute r) {
  switch (r) {
    case CIRoute::babai: return "babai";
    case CIRoute::definitional: return "definitional";
    case CIRoute::both: return "both";
  }
  return "?";
}

struct CIWitness {
  enum class Kind { conjugator, multiplier, counterexample };
  Kind kind = Kind::conjugator;
  // conjugator: subgroup = least generator of a regular cyclic R, element g with
  // g^-1 R g = (Z_n)_L. counterexample on the Babai route: subgroup is an R
  // not conjugate to (Z_n)_L.
  std::optional<Permutation> subgroup;
  std::optional<Permutation> conjugator;
  // multiplier: mate T with m S = T. counterexample on the definitional
  // route: T isomorphic to S with no multiplier.
  ResidueSet mate;
  std::size_t multiplier = 0;
};

struct CIReport {
  std::string descriptor;
  bool verdict = true;
  CIRoute route = CIRoute::babai;
  std::vector<CIWitness> witnesses;
  std::size_t regular_cyclic_count = 0;
  std::optional<bool> babai_verdict;
  std::optional<bool> definitional_verdict;
  std::size_t isomorphism_tests = 0;

  std::optional<CIWitness> counterexample() const {
    for (const CIWitness& w : witnesses) {
      if (w.kind == CIWitness::Kind::counterexample) return w;
    }
    return std::nullopt;
  }
};

inline std::string to_string(const ResidueSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

namespace detail {

inline ResidueSet normalize_residues(std::size_t n, const ResidueSet& s) {
  if (n == 0 || n > kMaxObjectPoints) fail(ErrorKind::size_too_large, "Z_" + std::to_string(n) + " is out of range");
  ResidueSet out;
  for (std::size_t c : s) {
    if (c % n == 0) fail(ErrorKind::identity_in_connection_set, "0 in connection set");
    out.push_back(c % n);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline ResidueSet multiply(std::size_t n, std::size_t m, const ResidueSet& s) {
  ResidueSet out;
  for (std::size_t c : s) out.push_back(c * m % n);
  std::sort(out.begin(), out.end());
  return out;
}

inline bool is_unit_set(std::size_t n, const ResidueSet& s) {
  return std::all_of(s.begin(), s.end(), [n](std::size_t c) { return std::gcd(c, n) == 1; });
}

inline std::uint64_t binomial(std::uint64_t a, std::uint64_t b) {
  if (b > a) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= b; ++i) r = saturating_mul(r, a - b + i) / i;
  return r;
}

// All k-subsets of pool (sorted) in lexicographic order.
inline std::vector<ResidueSet> subsets_of_size(const ResidueSet& pool, std::size_t k) {
  std::vector<ResidueSet> out;
  ResidueSet cur;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = from; i + (k - cur.size()) <= pool.size(); ++i) {
      cur.push_back(pool[i]);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

inline void require_cayley_object(const PermGroup& aut, std::size_t n) {
  if (!aut.contains(cyclic_shift(n))) {
    fail(ErrorKind::not_cayley_object, "translation x -> x+1 is not an automorphism");
  }
}

// Conjugates of <x> under a, keyed by least generator, each with t such that
// t^-1 <x> t is that conjugate. Breadth-first over the generators of a.
inline std::map<Permutation, Permutation> conjugate_transversal(const PermGroup& a, const Permutation& x) {
  std::map<Permutation, Permutation> out;
  std::vector<Permutation> queue{cyclic_key(x)};
  out.emplace(queue.front(), Permutation(x.degree()));
  for (std::size_t i = 0; i < queue.size(); ++i) {
    Permutation t = out.at(queue[i]);
    for (const Permutation& s : a.generators()) {
      Permutation key = cyclic_key(conjugate(queue[i], s));
      if (out.emplace(key, t * s).second) queue.push_back(key);
    }
  }
  return out;
}

template <typename Object>
std::string describe(const Object& x) {
  if constexpr (std::is_same_v<Object, Digraph>) {
    return "digraph on " + std::to_string(x.order()) + " points, " + std::to_string(x.arc_count()) + " arcs";
  } else if constexpr (std::is_same_v<Object, ColoredTupleSystem>) {
    return "colored tuple system on " + std::to_string(x.order()) + " points, " + std::to_string(x.tuples().size()) +
           " tuples";
  } else if constexpr (std::is_same_v<Object, SetSystem>) {
    return "set system on " + std::to_string(x.order()) + " points, " + std::to_string(x.sets().size()) + " sets";
  } else {
    return "incidence structure on " + std::to_string(x.order()) + " points, " + std::to_string(x.lines().size()) +
           " lines";
  }
}

}  // namespace detail

// Least unit m with m S = T, or nothing.
inline std::optional<std::size_t> multiplier_equivalent(std::size_t n, const ResidueSet& s, const ResidueSet& t) {
  ResidueSet a = detail::normalize_residues(n, s);
  ResidueSet b = detail::normalize_residues(n, t);
  if (a.size() != b.size()) return std::nullopt;
  for (std::size_t m : units(n)) {
    if (detail::multiply(n, m, a) == b) return m;
  }
  return std::nullopt;
}

// Least set in the orbit of S under the unit multiplications.
inline ResidueSet multiplier_canonical(std::size_t n, const ResidueSet& s) {
  ResidueSet a = detail::normalize_residues(n, s);
  ResidueSet best = a;
  for (std::size_t m : units(n)) best = std::min(best, detail::multiply(n, m, a));
  return best;
}

enum class DirectScope {
  automatic,  // unit sets only when S is a unit set
  all_sets,
};

// Tests Cay(Z_n, S) against every Cay(Z_n, T) with |T| = |S|. Mates are
// grouped by multiplier orbit; one isomorphism test per orbit suffices.
inline CIReport is_ci_digraph_direct(std::size_t n, const ResidueSet& s, DirectScope scope = DirectScope::automatic) {
  ResidueSet a = detail::normalize_residues(n, s);
  if (n > kMaxDegree) fail(ErrorKind::size_too_large, "direct check limited to n <= " + std::to_string(kMaxDegree));
  bool unit_only = scope == DirectScope::automatic && detail::is_unit_set(n, a);
  ResidueSet pool;
  for (std::size_t c = 1; c < n; ++c) {
    if (!unit_only || std::gcd(c, n) == 1) pool.push_back(c);
  }
  if (detail::binomial(pool.size(), a.size()) > kMaxDirectCandidates) {
    fail(ErrorKind::size_too_large, "too many candidate connection sets");
  }

  CIReport report;
  report.descriptor = "Cay(Z_" + std::to_string(n) + ", " + to_string(a) + ")";
  report.route = CIRoute::definitional;
  ResidueSet own = multiplier_canonical(n, a);
  Digraph gamma = circulant(n, a);
  std::map<ResidueSet, bool> isomorphic;
  std::optional<ResidueSet> bad;
  for (const ResidueSet& t : detail::subsets_of_size(pool, a.size())) {
    ResidueSet key = multiplier_canonical(n, t);
    if (key == own) {
      CIWitness w;
      w.kind = CIWitness::Kind::multiplier;
      w.mate = t;
      w.multiplier = *multiplier_equivalent(n, a, t);
      report.witnesses.push_back(std::move(w));
      continue;
    }
    auto it = isomorphic.find(key);
    if (it == isomorphic.end()) {
      ++report.isomorphism_tests;
      it = isomorphic.emplace(key, isomorphism(gamma, circulant(n, key)).has_value()).first;
    }
    if (it->second && !bad) bad = t;
  }
  if (bad) {
    report.verdict = false;
    CIWitness w;
    w.kind = CIWitness::Kind::counterexample;
    w.mate = *bad;
    report.witnesses.push_back(std::move(w));
  }
  report.definitional_verdict = report.verdict;
  return report;
}

// Babai's criterion: X is CI iff every regular cyclic subgroup of Aut(X) is
// conjugate in Aut(X) to (Z_n)_L. Circulant digraphs also run the direct
// check over all connection sets of the same size; verdict requires both.
template <typename Object>
CIReport is_ci_object(const Object& x, std::size_t cap = default_order_cap(), bool definitional = true) {
  std::size_t n = x.order();
  PermGroup aut = automorphism_group(x).materialize(cap);
  detail::require_cayley_object(aut, n);

  CIReport report;
  report.descriptor = detail::describe(x);
  report.route = CIRoute::babai;
  std::map<Permutation, Permutation> reach = detail::conjugate_transversal(aut, cyclic_shift(n));
  std::set<Permutation> keys;
  for (const Permutation& e : aut.elements()) {
    if (is_full_cycle(e)) keys.insert(cyclic_key(e));
  }
  report.regular_cyclic_count = keys.size();
  for (const Permutation& k : keys) {
    CIWitness w;
    w.subgroup = k;
    auto it = reach.find(k);
    if (it == reach.end()) {
      w.kind = CIWitness::Kind::counterexample;
      report.verdict = false;
    } else {
      w.kind = CIWitness::Kind::conjugator;
      w.conjugator = it->second.inverse();
    }
    report.witnesses.push_back(std::move(w));
  }
  report.babai_verdict = report.verdict;

  if constexpr (std::is_same_v<Object, Digraph>) {
    if (definitional) {
      ResidueSet s;
      for (Point p : x.out_neighbors(0).to_vector()) s.push_back(p);
      CIReport direct = is_ci_digraph_direct(n, s, DirectScope::all_sets);
      report.route = CIRoute::both;
      report.descriptor = direct.descriptor;
      report.definitional_verdict = direct.verdict;
      report.isomorphism_tests = direct.isomorphism_tests;
      report.verdict = report.verdict && direct.verdict;
      for (CIWitness& w : direct.witnesses) report.witnesses.push_back(std::move(w));
    }
  }
  return report;
}

inline CIReport is_ci_circulant(std::size_t n, const ResidueSet& s, std::size_t cap = default_order_cap()) {
  return is_ci_object(circulant(n, s), cap);
}

// Whether Aut(Cos(G, H, S)) is 3/2-closed; the report carries the witness.
inline ClosednessReport classify_unit_coset_digraph(const PermGroup& g, const PermGroup& h,
                                                    const std::vector<Permutation>& s,
                                                    std::size_t cap = default_order_cap(),
                                                    ClosednessOptions opt = {}) {
  Digraph gamma = double_coset_digraph(g, h, s);
  PermGroup aut = automorphism_group(gamma).materialize(cap);
  return closedness(aut, ClosednessKind::three_halves, opt);
}

// Cay(Z_n, S) as a coset digraph with trivial H.
inline ClosednessReport classify_unit_coset_digraph(std::size_t n, const ResidueSet& s,
                                                    std::size_t cap = default_order_cap(),
                                                    ClosednessOptions opt = {}) {
  PermGroup aut = automorphism_group(circulant(n, detail::normalize_residues(n, s))).materialize(cap);
  return closedness(aut, ClosednessKind::three_halves, opt);
}

// Cyclic configuration on Z_n: lines base + i for i in Z_n.
inline IncidenceStructure cyclic_configuration(std::size_t n, const ResidueSet& base) {
  std::set<PointSet> lines;
  for (std::size_t i = 0; i < n; ++i) {
    PointSet l;
    for (std::size_t b : base) l |= PointSet{static_cast<Point>((b + i) % n)};
    lines.insert(l);
  }
  return IncidenceStructure(n, std::vector<PointSet>(lines.begin(), lines.end()));
}

// Colored tuple system on Z_n made of the translates of the given tuples.
inline ColoredTupleSystem circulant_tuple_system(std::size_t n, const std::vector<ColoredTuple>& base) {
  std::vector<ColoredTuple> out;
  for (const ColoredTuple& t : base) {
    for (std::size_t i = 0; i < n; ++i) {
      ColoredTuple u{{}, t.color};
      for (Point p : t.points) u.points.push_back(static_cast<Point>((p + i) % n));
      out.push_back(std::move(u));
    }
  }
  return ColoredTupleSystem(n, std::move(out));
}

}  // namespace closurekit

#endif  // CLOSUREKIT_CI_HPP_
