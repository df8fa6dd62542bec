#include <catch_amalgamated.hpp>

#include <set>

#include "closurekit/subgroups.hpp"
#include "oracles.hpp"

using namespace closurekit;

namespace {

PermGroup gen(std::size_t n, std::initializer_list<const char*> cycles) {
  std::vector<Permutation> gens;
  for (const char* c : cycles) gens.push_back(parse_cycles(n, c));
  return PermGroup::generate(n, gens);
}

std::set<Permutation> as_set(const PermGroup& g) {
  return std::set<Permutation>(g.elements().begin(), g.elements().end());
}

}  // namespace

TEST_CASE("regular_cyclic_subgroups examples") {
  auto s3 = regular_cyclic_subgroups(PermGroup::symmetric(3));
  REQUIRE(s3.size() == 1);
  CHECK(s3[0] == gen(3, {"(0 1 2)"}));

  PermGroup z4 = left_regular_representation(4);
  auto z = regular_cyclic_subgroups(z4);
  REQUIRE(z.size() == 1);
  CHECK(z[0] == z4);

  CHECK(regular_cyclic_subgroups(gen(4, {"(0 1)(2 3)", "(0 2)(1 3)"})).empty());
}

TEST_CASE("regular_cyclic_subgroups matches the definition filter") {
  for (std::size_t n : {4, 5, 6}) {
    PermGroup sn = PermGroup::symmetric(n);
    std::set<std::set<Permutation>> expected;
    for (const Permutation& g : sn.elements()) {
      auto c = oracle::naive_closure(n, {g});
      if (c.size() == n && oracle::is_transitive_set(n, c)) expected.insert(c);
    }
    std::set<std::set<Permutation>> got;
    for (const PermGroup& h : regular_cyclic_subgroups(sn)) got.insert(as_set(h));
    CHECK(got == expected);
    // (n-1)! n-cycles, phi(n) per group
    std::size_t phi = 0;
    for (std::size_t k = 1; k <= n; ++k) phi += std::gcd(k, n) == 1 ? 1 : 0;
    CHECK(got.size() == factorial(n - 1) / phi);
  }
}

TEST_CASE("are_conjugate_subgroups examples") {
  PermGroup s3 = PermGroup::symmetric(3);
  auto c = are_conjugate_subgroups(s3, gen(3, {"(0 1)"}), gen(3, {"(1 2)"}));
  REQUIRE(c);
  CHECK(conjugate_group(gen(3, {"(0 1)"}), *c) == gen(3, {"(1 2)"}));

  PermGroup h = gen(3, {"(0 1)"});
  auto self = are_conjugate_subgroups(s3, h, h);
  REQUIRE(self);
  CHECK(self->is_identity());

  PermGroup s4 = PermGroup::symmetric(4);
  CHECK_FALSE(are_conjugate_subgroups(s4, gen(4, {"(0 1)"}), gen(4, {"(0 1)(2 3)"})));

  CHECK_THROWS_AS(are_conjugate_subgroups(left_regular_representation(4), gen(4, {"(0 1)"}),
                                          gen(4, {"(0 1)"})),
                  Error);
}

TEST_CASE("is_pronormal examples") {
  PermGroup s3 = PermGroup::symmetric(3);
  CHECK(is_pronormal(s3, s3).pronormal);
  auto r = is_pronormal(s3, gen(3, {"(0 1)"}));
  CHECK(r.pronormal);
  for (const auto& [g, k] : r.witnesses) {
    PermGroup h = gen(3, {"(0 1)"});
    CHECK(conjugate_group(conjugate_group(h, g), k) == h);
  }

  // Brute force over g and k in the join, independent of the library search.
  PermGroup s4 = PermGroup::symmetric(4);
  PermGroup h = gen(4, {"(0 1)(2 3)"});
  bool expected = true;
  for (const Permutation& g : s4.elements()) {
    PermGroup c = conjugate_group(h, g);
    auto join = oracle::naive_closure(4, {parse_cycles(4, "(0 1)(2 3)"), c.generators().front()});
    bool found = false;
    for (const Permutation& k : join) found = found || conjugate_group(c, k) == h;
    expected = expected && found;
  }
  CHECK(is_pronormal(s4, h).pronormal == expected);
  CHECK_FALSE(expected);
}

TEST_CASE("transitive_subgroups examples") {
  PermGroup z4 = left_regular_representation(4);
  auto t = transitive_subgroups(z4);
  REQUIRE(t.size() == 1);
  CHECK(t[0] == z4);

  auto s3 = transitive_subgroups(PermGroup::symmetric(3));
  REQUIRE(s3.size() == 2);
  CHECK(s3[0] == gen(3, {"(0 1 2)"}));
  CHECK(s3[1].order() == 6);

  std::multiset<std::size_t> orders;
  for (const PermGroup& h : transitive_subgroups(PermGroup::symmetric(4))) orders.insert(h.order());
  // 3 cyclic, 1 Klein (the other two Klein groups are intransitive), 3 dihedral, A_4, S_4
  CHECK(orders == std::multiset<std::size_t>{4, 4, 4, 4, 8, 8, 8, 12, 24});
}

TEST_CASE("subgroup enumeration agrees with the pair-generation oracle") {
  for (std::size_t n : {3, 4, 5}) {
    PermGroup sn = PermGroup::symmetric(n);
    auto all = oracle::two_generated_subgroups(sn.elements());
    std::set<std::set<Permutation>> got;
    for (const PermGroup& h : all_subgroups(sn)) got.insert(as_set(h));
    CHECK(got == all);

    std::set<std::set<Permutation>> trans_expected;
    for (const auto& h : all) {
      if (oracle::is_transitive_set(n, h)) trans_expected.insert(h);
    }
    std::set<std::set<Permutation>> trans_got;
    for (const PermGroup& h : transitive_subgroups(sn)) trans_got.insert(as_set(h));
    CHECK(trans_got == trans_expected);
  }
}

TEST_CASE("subgroup class representatives cover every subgroup exactly once up to conjugacy") {
  for (std::size_t n : {4, 5}) {
    PermGroup sn = PermGroup::symmetric(n);
    auto reps = subgroup_class_representatives(sn);
    CHECK(reps.size() == (n == 4 ? 11U : 19U));
    for (const PermGroup& h : all_subgroups(sn)) {
      std::size_t hits = 0;
      for (const PermGroup& r : reps) hits += are_conjugate_subgroups(sn, h, r) ? 1 : 0;
      CHECK(hits == 1);
    }
  }
}

TEST_CASE("normal subgroups and solvability") {
  std::multiset<std::size_t> orders;
  for (const PermGroup& n : normal_subgroups(PermGroup::symmetric(4))) orders.insert(n.order());
  CHECK(orders == std::multiset<std::size_t>{1, 4, 12, 24});
  CHECK(normal_subgroups(PermGroup::symmetric(5)).size() == 3);
  CHECK(normal_subgroups(left_regular_representation(6)).size() == 4);

  CHECK(is_solvable(PermGroup::symmetric(4)));
  CHECK_FALSE(is_solvable(PermGroup::symmetric(5)));
  CHECK(derived_subgroup(PermGroup::symmetric(4)).order() == 12);
  CHECK(derived_subgroup(left_regular_representation(5)).order() == 1);
}
