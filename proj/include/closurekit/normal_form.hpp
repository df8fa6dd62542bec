#ifndef CLOSUREKIT_NORMAL_FORM_HPP_
#define CLOSUREKIT_NORMAL_FORM_HPP_

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "closurekit/blocks.hpp"
#include "closurekit/group.hpp"
#include "closurekit/subgroups.hpp"

namespace closurekit {

// Group orders as prime -> exponent maps, so tower orders never overflow.
using PrimeExponents = std::map<std::size_t, std::size_t>;

inline PrimeExponents factor_exponents(std::size_t n) {
  PrimeExponents out;
  for (std::size_t p : prime_factors(n)) ++out[p];
  return out;
}

inline bool divides(const PrimeExponents& a, const PrimeExponents& b) {
  for (const auto& [p, e] : a) {
    auto it = b.find(p);
    if (it == b.end() || it->second < e) return false;
  }
  return true;
}

// Order of AGL(1,p_r)^[a_r] wr ... wr AGL(1,p_1)^[a_1] for primes p_1 > ... > p_r,
// with |A wr B| = |A| |B|^deg(A), folded left to right.
inline PrimeExponents agl_tower_order(std::size_t n) {
  std::vector<std::size_t> ps = prime_factors(n);
  std::sort(ps.begin(), ps.end());
  PrimeExponents order;
  std::size_t degree = 1;
  for (std::size_t p : ps) {
    PrimeExponents agl = factor_exponents(p * (p - 1));
    for (const auto& [q, e] : agl) order[q] += e * degree;
    degree *= p;
  }
  return order;
}

// Singletons < ... < whole for a regular cyclic <x>: the k-th system is the
// orbit partition of <x^(n/d_k)>, d_k the product of the first k ratios.
inline ImprimitivitySequence cyclic_chain(const Permutation& x, const std::vector<std::size_t>& ratios) {
  std::size_t n = x.degree();
  ImprimitivitySequence seq;
  seq.systems.push_back(BlockSystem::singletons(n));
  std::size_t d = 1;
  for (std::size_t r : ratios) {
    d *= r;
    seq.systems.push_back(BlockSystem(orbits(PermGroup(n, {x.pow(static_cast<long long>(n / d))}))));
    seq.index_ratios.push_back(r);
  }
  seq.normal_flags.assign(seq.systems.size(), false);
  return seq;
}

enum class SylowBranch { not_applicable, large_sylow, central_sylow };

inline std::string to_string(SylowBranch b) {
  switch (b) {
    case SylowBranch::not_applicable: return "not-applicable";
    case SylowBranch::large_sylow: return "large-sylow";
    case SylowBranch::central_sylow: return "central-sylow";
  }
  return "?";
}

struct PimpernelReport {
  bool applicable = false;   // n = 2^k, k >= 2, <x,y> a 2-group
  std::size_t sequences = 0;  // normal k-step sequences examined
  bool cyclic = false;        // <x,y> = <x>
  std::size_t min_fix_order = 0;
  bool holds = true;
};

struct NormalFormReport {
  bool found = false;
  std::optional<Permutation> delta;
  Permutation conjugated_y;
  std::size_t group_order = 0;       // |<x,y>|
  std::size_t normalized_order = 0;  // |<x, delta^-1 y delta>|
  ImprimitivitySequence sequence;
  bool solvable = false;
  bool order_divides_tower = false;
  SylowBranch sylow = SylowBranch::not_applicable;
  std::size_t candidates = 0;  // distinct <delta^-1 y delta> examined
  std::string failure;         // reason the least candidate failed, when none is found
  PimpernelReport pimpernel;
};

namespace detail {

struct NormalFormCheck {
  bool ok = false;
  std::string failure;
  std::size_t order = 0;
  bool solvable = false;
  bool tower = false;
  SylowBranch sylow = SylowBranch::not_applicable;
};

inline std::size_t prime_part(std::size_t m, std::size_t p) {
  std::size_t out = 1;
  while (m % p == 0) {
    m /= p;
    out *= p;
  }
  return out;
}

// Parts (1)-(5) for <x,z>, given the cyclic chain of <x> with descending ratios.
inline NormalFormCheck check_normal_form(const Permutation& x, const Permutation& z, const ImprimitivitySequence& chain,
                                         std::size_t cap) {
  NormalFormCheck r;
  std::size_t n = x.degree();
  for (const BlockSystem& b : chain.systems) {
    if (!b.is_invariant_under(z)) {
      r.failure = "chain system " + b.to_string() + " is not a block system";
      return r;
    }
  }
  PermGroup l = PermGroup::generate(n, {x, z}, cap);
  r.order = l.order();
  for (const BlockSystem& b : chain.systems) {
    if (!is_normal_block_system(l, b)) {
      r.failure = "chain system " + b.to_string() + " is not normal";
      return r;
    }
  }
  r.solvable = is_solvable(l);
  if (!r.solvable) {
    r.failure = "not solvable";
    return r;
  }
  r.tower = divides(factor_exponents(r.order), agl_tower_order(n));
  if (!r.tower) {
    r.failure = "order does not divide the affine tower order";
    return r;
  }
  std::size_t p1 = chain.index_ratios.empty() ? 1 : chain.index_ratios.front();
  if (p1 % 2 == 1 && p1 > 1) {
    std::size_t a1 = 0;
    while (a1 < chain.index_ratios.size() && chain.index_ratios[a1] == p1) ++a1;
    PermGroup f1 = fix(l, chain.systems[1]);
    if (prime_part(f1.order(), p1) >= p1 * p1) {
      r.sylow = SylowBranch::large_sylow;
    } else {
      std::size_t pa = chain.systems[a1].cell_size();
      Permutation gen = x.pow(static_cast<long long>(n / pa));
      PermGroup p = PermGroup::generate(n, {gen});
      bool central = gen * x == x * gen && gen * z == z * gen;
      if (!central || fix(l, chain.systems[a1]) != p) {
        r.failure = "Sylow condition fails for p = " + std::to_string(p1);
        return r;
      }
      r.sylow = SylowBranch::central_sylow;
    }
  }
  r.ok = true;
  return r;
}

inline PimpernelReport check_pimpernel(const Permutation& x, const PermGroup& h) {
  PimpernelReport r;
  std::size_t n = x.degree();
  std::size_t k = prime_factors(n).size();
  bool two_power = n >= 4 && (n & (n - 1)) == 0;
  if (!two_power || (h.order() & (h.order() - 1)) != 0) return r;
  r.applicable = true;
  r.cyclic = h.order() == n;
  for (const ImprimitivitySequence& s : imprimitivity_sequences(h, true)) {
    if (s.systems.size() != k + 1) continue;
    ++r.sequences;
    std::size_t f = fix(h, s.systems[1]).order();
    r.min_fix_order = r.sequences == 1 ? f : std::min(r.min_fix_order, f);
    if (!r.cyclic && f < 4) r.holds = false;
  }
  return r;
}

}  // namespace detail

// Searches delta in <x,y>, in sorted element order, such that <x, delta^-1 y delta>
// is normally imprimitive along the cyclic chain of <x> with descending prime
// ratios, solvable, of order dividing the affine tower, and meets the Sylow
// condition for the largest odd prime. Part (4) is checked by order only.
inline NormalFormReport verify_normal_form(const Permutation& x, const Permutation& y,
                                           std::size_t cap = default_order_cap()) {
  if (x.degree() != y.degree()) fail(ErrorKind::degree_mismatch, "x and y have different degrees");
  if (!is_full_cycle(x) || !is_full_cycle(y)) {
    fail(ErrorKind::not_regular_cyclic, "x and y must each generate a regular cyclic group");
  }
  std::size_t n = x.degree();
  std::vector<std::size_t> ratios = prime_factors(n);
  std::sort(ratios.rbegin(), ratios.rend());
  ImprimitivitySequence chain = cyclic_chain(x, ratios);

  PermGroup h = PermGroup::generate(n, {x, y}, cap);
  NormalFormReport report;
  report.group_order = h.order();
  report.pimpernel = detail::check_pimpernel(x, h);

  std::set<Permutation> seen;
  for (const Permutation& d : h.elements()) {
    Permutation z = conjugate(y, d);
    if (!seen.insert(cyclic_key(z)).second) continue;
    ++report.candidates;
    detail::NormalFormCheck c = detail::check_normal_form(x, z, chain, cap);
    if (report.candidates == 1) report.failure = c.failure;
    if (!c.ok) continue;
    report.found = true;
    report.delta = d;
    report.conjugated_y = z;
    report.normalized_order = c.order;
    report.sequence = chain;
    report.sequence.normal_flags.assign(chain.systems.size(), true);
    report.solvable = c.solvable;
    report.order_divides_tower = c.tower;
    report.sylow = c.sylow;
    report.failure.clear();
    break;
  }
  return report;
}

}  // namespace closurekit

#endif  // CLOSUREKIT_NORMAL_FORM_HPP_
