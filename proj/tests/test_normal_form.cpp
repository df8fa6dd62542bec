#include <catch_amalgamated.hpp>

#include <set>

#include "closurekit/normal_form.hpp"
#include "oracles.hpp"

using namespace closurekit;

namespace {

// All n-cycles written (0 c_1 ... c_{n-1}).
std::vector<Permutation> all_full_cycles(std::size_t n) {
  std::vector<Point> rest;
  for (Point i = 1; i < n; ++i) rest.push_back(i);
  std::vector<Permutation> out;
  do {
    std::vector<std::vector<Point>> cyc{{0}};
    cyc[0].insert(cyc[0].end(), rest.begin(), rest.end());
    out.push_back(Permutation::from_cycles(n, cyc));
  } while (std::next_permutation(rest.begin(), rest.end()));
  return out;
}

using ElementSet = std::set<Permutation>;

ElementSet fixing(const ElementSet& g, const BlockSystem& b) {
  ElementSet out;
  for (const Permutation& e : g) {
    bool ok = true;
    for (PointSet c : b.cells()) ok = ok && e.image(c) == c;
    if (ok) out.insert(e);
  }
  return out;
}

bool orbits_are(std::size_t n, const ElementSet& g, const BlockSystem& b) {
  for (Point p = 0; p < n; ++p) {
    PointSet orbit;
    for (const Permutation& e : g) orbit |= PointSet{e(p)};
    if (orbit != b[b.cell_of(p)]) return false;
  }
  return true;
}

bool solvable_oracle(std::size_t n, ElementSet g) {
  while (g.size() > 1) {
    std::vector<Permutation> comms;
    for (const Permutation& a : g) {
      for (const Permutation& b : g) comms.push_back(commutator(a, b));
    }
    ElementSet next = oracle::naive_closure(n, comms);
    if (next.size() == g.size()) return false;
    g = std::move(next);
  }
  return true;
}

}  // namespace

TEST_CASE("affine tower orders") {
  CHECK(agl_tower_order(5) == PrimeExponents{{2, 2}, {5, 1}});
  // AGL(1,2)^[3]: 2 * 2^2 * 2^4
  CHECK(agl_tower_order(8) == PrimeExponents{{2, 7}});
  // AGL(1,2)^[2] wr AGL(1,3): 8 * 6^4
  CHECK(agl_tower_order(12) == factor_exponents(10368));
  CHECK(agl_tower_order(6) == factor_exponents(2 * 6 * 6));
  CHECK(divides(factor_exponents(12), factor_exponents(10368)));
  CHECK_FALSE(divides(factor_exponents(5), factor_exponents(10368)));
}

TEST_CASE("cyclic_chain uses descending prime ratios") {
  auto c = cyclic_chain(cyclic_shift(12), {3, 2, 2});
  REQUIRE(c.systems.size() == 4);
  CHECK(c.systems[1].cell_size() == 3);
  CHECK(c.systems[1][0] == PointSet({0, 4, 8}));
  CHECK(c.systems[2].cell_size() == 6);
  CHECK(c.systems[3].is_whole());
}

TEST_CASE("verify_normal_form examples") {
  Permutation x = cyclic_shift(6);
  auto r = verify_normal_form(x, x);
  REQUIRE(r.found);
  CHECK(r.delta->is_identity());
  CHECK(r.candidates == 1);
  CHECK(r.sylow == SylowBranch::central_sylow);
  CHECK(r.sequence.index_ratios == std::vector<std::size_t>{3, 2});

  Permutation x9 = cyclic_shift(9);
  auto r9 = verify_normal_form(x9, x9.pow(2));
  REQUIRE(r9.found);
  CHECK(r9.sylow == SylowBranch::central_sylow);
  CHECK(r9.normalized_order == 9);

  CHECK_THROWS_AS(verify_normal_form(x, parse_cycles(6, "(0 1 2)(3 4 5)")), Error);
  CHECK_THROWS_AS(verify_normal_form(x, cyclic_shift(5)), Error);
}

TEST_CASE("n = 6: every conjugate y admits a delta, re-verified by set oracles") {
  std::size_t n = 6;
  Permutation x = cyclic_shift(n);
  std::size_t checked = 0;
  for (const Permutation& y : all_full_cycles(n)) {
    auto r = verify_normal_form(x, y);
    REQUIRE(r.found);
    ++checked;
    ElementSet h = oracle::naive_closure(n, {x, y});
    CHECK(h.count(*r.delta) == 1);
    CHECK(r.conjugated_y == conjugate(y, *r.delta));
    ElementSet l = oracle::naive_closure(n, {x, r.conjugated_y});
    CHECK(l.size() == r.normalized_order);
    for (const BlockSystem& b : r.sequence.systems) {
      for (const Permutation& e : l) CHECK(b.is_invariant_under(e));
      CHECK(orbits_are(n, fixing(l, b), b));
    }
    CHECK(solvable_oracle(n, l));
    CHECK(72 % l.size() == 0);
  }
  CHECK(checked == 120);
}

TEST_CASE("n = 8: pimpernel dichotomy for every y generating a 2-group with x") {
  std::size_t n = 8;
  Permutation x = cyclic_shift(n);
  std::size_t two_groups = 0;
  std::size_t noncyclic = 0;
  for (const Permutation& y : all_full_cycles(n)) {
    std::uint64_t ord = detail::chain_order(n, {x, y});
    if ((ord & (ord - 1)) != 0) continue;
    ++two_groups;
    auto r = verify_normal_form(x, y);
    CHECK(r.found);
    REQUIRE(r.pimpernel.applicable);
    CHECK(r.pimpernel.holds);
    ElementSet h = oracle::naive_closure(n, {x, y});
    if (h.size() == n) continue;
    ++noncyclic;
    BlockSystem pairs(orbits(PermGroup(n, {x.pow(4)})));
    // The pairs system of <x> is the only candidate for B_1.
    bool normal_chain = r.pimpernel.sequences > 0;
    if (normal_chain) CHECK(fixing(h, pairs).size() >= 4);
  }
  CHECK(two_groups > 0);
  CHECK(noncyclic > 0);
}
