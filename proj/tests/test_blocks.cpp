#include <catch_amalgamated.hpp>

#include "closurekit/blocks.hpp"
#include "oracles.hpp"

using namespace closurekit;

namespace {

PermGroup gen(std::size_t n, std::initializer_list<const char*> cycles) {
  std::vector<Permutation> gens;
  for (const char* c : cycles) gens.push_back(parse_cycles(n, c));
  return PermGroup::generate(n, gens);
}

BlockSystem cells(std::size_t n, std::vector<std::vector<Point>> cs) {
  std::vector<PointSet> out;
  for (const auto& c : cs) out.push_back(PointSet::of(c));
  return BlockSystem(n, out);
}

PermGroup s2wrs2() { return gen(4, {"(0 1)", "(0 2)(1 3)"}); }

// Block systems by brute force: equal partitions preserved by every element.
std::vector<BlockSystem> oracle_block_systems(const PermGroup& g) {
  std::vector<BlockSystem> out;
  std::size_t n = g.degree();
  for (std::size_t d = 1; d <= n; ++d) {
    for (const BlockSystem& p : equal_partitions(n, d)) {
      bool ok = true;
      for (const Permutation& e : g.elements()) ok = ok && p.is_invariant_under(e);
      if (ok) out.push_back(p);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

const std::vector<PermGroup>& transitive_samples() {
  static std::vector<PermGroup> out;
  if (!out.empty()) return out;
  for (std::size_t n : {4, 5, 6}) {
    for (const PermGroup& h : transitive_subgroups(PermGroup::symmetric(n))) out.push_back(h);
  }
  out.push_back(gen(8, {"(0 1 2 3 4 5 6 7)", "(1 3)(5 7)"}));
  out.push_back(gen(9, {"(0 1 2)(3 4 5)(6 7 8)", "(0 3 6)(1 4 7)(2 5 8)", "(1 2)"}));
  return out;
}

}  // namespace

TEST_CASE("equal_partitions counts") {
  CHECK(equal_partitions(4, 2).size() == 3);
  CHECK(equal_partitions(6, 2).size() == 15);
  CHECK(equal_partitions(6, 3).size() == 10);
  CHECK(equal_partitions(8, 2).size() == 105);
  CHECK(equal_partitions(9, 3).size() == 280);
  CHECK(equal_partitions(5, 1).size() == 1);
  CHECK(equal_partitions(5, 2).empty());
}

TEST_CASE("minimal_block examples") {
  PermGroup z4 = left_regular_representation(4);
  CHECK(minimal_block(z4, {0, 2}) == PointSet({0, 2}));
  CHECK(minimal_block(z4, {0, 1}) == PointSet::range(4));
  CHECK(minimal_block(PermGroup::symmetric(4), {0, 1}) == PointSet::range(4));
  CHECK_THROWS_AS(minimal_block(gen(4, {"(0 1)"}), {0, 1}), Error);
}

TEST_CASE("all_block_systems examples") {
  auto z6 = all_block_systems(left_regular_representation(6));
  REQUIRE(z6.size() == 4);
  CHECK(z6[0].is_singletons());
  CHECK(z6[1] == cells(6, {{0, 3}, {1, 4}, {2, 5}}));
  CHECK(z6[2] == cells(6, {{0, 2, 4}, {1, 3, 5}}));
  CHECK(z6[3].is_whole());

  auto s4 = all_block_systems(PermGroup::symmetric(4));
  REQUIRE(s4.size() == 2);
  CHECK(s4[0].is_singletons());
  CHECK(s4[1].is_whole());

  auto d8 = all_block_systems(gen(4, {"(0 1 2 3)", "(0 2)"}));
  REQUIRE(d8.size() == 3);
  CHECK(d8[1] == cells(4, {{0, 2}, {1, 3}}));
}

TEST_CASE("block systems agree with the brute-force filter and the minimal-block closure") {
  for (const PermGroup& g : transitive_samples()) {
    auto expected = oracle_block_systems(g);
    CHECK(all_block_systems(g) == expected);
    CHECK(block_systems_by_minimal_blocks(g) == expected);
    for (const BlockSystem& b : expected) CHECK(is_block_system_of(g, b));
  }
}

TEST_CASE("normal_block_systems examples") {
  PermGroup z6 = left_regular_representation(6);
  CHECK(normal_block_systems(z6) == all_block_systems(z6));

  // The Klein four-group is transitive on 4 points, so its orbit partition is
  // the whole set and S_4 has only the trivial normal systems.
  auto s4 = normal_block_systems(PermGroup::symmetric(4));
  REQUIRE(s4.size() == 2);
  CHECK(s4[0].is_singletons());
  CHECK(s4[1].is_whole());
}

TEST_CASE("normal systems via fix agree with normal-subgroup orbits") {
  for (const PermGroup& g : transitive_samples()) {
    CHECK(normal_block_systems(g) == normal_block_systems_via_subgroups(g));
  }
}

TEST_CASE("groups with a regular abelian subgroup have only normal block systems") {
  for (const PermGroup& g : transitive_samples()) {
    if (g.order() > 120) continue;
    bool has_regular_abelian = false;
    for (const PermGroup& h : transitive_subgroups(g)) {
      if (h.order() != g.degree()) continue;
      bool abelian = true;
      for (const Permutation& a : h.generators()) {
        for (const Permutation& b : h.generators()) abelian = abelian && a * b == b * a;
      }
      has_regular_abelian = has_regular_abelian || abelian;
    }
    if (has_regular_abelian) CHECK(normal_block_systems(g) == all_block_systems(g));
  }
}

TEST_CASE("fix examples and normality") {
  PermGroup z4 = left_regular_representation(4);
  PermGroup f = fix(z4, cells(4, {{0, 2}, {1, 3}}));
  CHECK(f == gen(4, {"(0 2)(1 3)"}));
  CHECK(fix(z4, BlockSystem::singletons(4)).order() == 1);
  CHECK(fix(s2wrs2(), cells(4, {{0, 1}, {2, 3}})) == gen(4, {"(0 1)", "(2 3)"}));
  CHECK_THROWS_AS(fix(z4, cells(4, {{0, 1}, {2, 3}})), Error);

  for (const PermGroup& g : transitive_samples()) {
    for (const BlockSystem& b : all_block_systems(g)) {
      PermGroup k = fix(g, b);
      for (const Permutation& s : g.generators()) {
        for (const Permutation& e : k.generators()) CHECK(k.contains(conjugate(e, s)));
      }
    }
  }
}

TEST_CASE("quotient examples and kernel") {
  PermGroup z4 = left_regular_representation(4);
  auto q = quotient(z4, cells(4, {{0, 2}, {1, 3}}));
  CHECK(q.quotient.order() == 2);
  CHECK(is_transitive(q.quotient));
  CHECK(quotient(z4, BlockSystem::whole(4)).quotient.order() == 1);

  auto w = quotient(s2wrs2(), cells(4, {{0, 1}, {2, 3}}));
  CHECK(w.quotient.order() == 2);
  CHECK(w.kernel().order() == 4);

  for (const PermGroup& g : transitive_samples()) {
    for (const BlockSystem& b : all_block_systems(g)) {
      auto qa = quotient(g, b);
      PermGroup k = fix(g, b);
      CHECK(qa.kernel() == k);
      CHECK(qa.quotient.order() * k.order() == g.order());
      const auto& el = g.elements();
      for (std::size_t i = 0; i < el.size(); i += 7) {
        for (std::size_t j = 0; j < el.size(); j += 11) {
          CHECK(qa.map(el[i] * el[j]) == qa.map(el[i]) * qa.map(el[j]));
        }
      }
    }
  }
}

TEST_CASE("refines examples") {
  auto a = cells(6, {{0, 1}, {2, 3}, {4, 5}});
  auto b = cells(6, {{0, 2}, {1, 3}, {4, 5}});
  CHECK(refines(a, b).relation == Refinement::incomparable);
  CHECK_FALSE(refines(a, b).quotient);

  auto r = refines(BlockSystem::singletons(6), a);
  CHECK(r.relation == Refinement::strict);
  CHECK(r.quotient == a);
  CHECK(refines(BlockSystem::singletons(6), BlockSystem::singletons(6)).relation == Refinement::weak);

  auto same = refines(a, a);
  CHECK(same.relation == Refinement::weak);
  CHECK(same.quotient == BlockSystem::singletons(3));

  auto up = refines(a, cells(6, {{0, 1, 2, 3, 4, 5}}));
  CHECK(up.relation == Refinement::strict);
  CHECK(up.quotient == BlockSystem::whole(3));
  CHECK_THROWS_AS(refines(a, BlockSystem::singletons(4)), Error);
}

TEST_CASE("imprimitivity_sequences examples") {
  auto z4 = imprimitivity_sequences(left_regular_representation(4), false);
  REQUIRE(z4.size() == 1);
  CHECK(z4[0].index_ratios == std::vector<std::size_t>{2, 2});
  CHECK(z4[0].systems[1] == cells(4, {{0, 2}, {1, 3}}));

  auto z6 = imprimitivity_sequences(left_regular_representation(6), true);
  REQUIRE(z6.size() == 2);
  CHECK(z6[0].index_ratios == std::vector<std::size_t>{2, 3});
  CHECK(z6[1].index_ratios == std::vector<std::size_t>{3, 2});

  CHECK(imprimitivity_sequences(PermGroup::symmetric(4), false).empty());

  auto z12 = imprimitivity_sequences(left_regular_representation(12), true);
  CHECK(z12.size() == 3);
  for (const auto& s : z12) {
    CHECK(s.systems.size() == omega(12) + 1);
    for (bool f : s.normal_flags) CHECK(f);
  }
}

TEST_CASE("omega") {
  CHECK(omega(12) == 3);
  CHECK(omega(1) == 0);
  CHECK(omega(8) == 3);
  CHECK(omega(30) == 3);
}

TEST_CASE("wreath_product examples") {
  auto w = wreath_product(PermGroup::symmetric(2), PermGroup::symmetric(2));
  CHECK(w.group.order() == 8);
  CHECK(w.lexi == cells(4, {{0, 1}, {2, 3}}));
  CHECK(is_normal_block_system(w.group, w.lexi));

  PermGroup z5 = left_regular_representation(5);
  CHECK(wreath_product(z5, PermGroup::trivial(1)).group == z5);
  CHECK(wreath_product(PermGroup::trivial(1), PermGroup::symmetric(4)).group == PermGroup::symmetric(4));

  // order |H|^|X| |G|
  auto big = wreath_product(left_regular_representation(3), PermGroup::symmetric(3));
  CHECK(big.group.order() == 6 * 6 * 6 * 3);
  CHECK(is_normal_block_system(big.group, big.lexi));

  // An intransitive top group still gets an independent copy on every row.
  auto flat = wreath_product(PermGroup::trivial(2), PermGroup::symmetric(2));
  CHECK(flat.group == gen(4, {"(0 1)", "(2 3)"}));
}

TEST_CASE("direct_product_canonical examples") {
  PermGroup p = direct_product_canonical(left_regular_representation(2), left_regular_representation(3));
  CHECK(p.order() == 6);
  CHECK(is_transitive(p));
  CHECK(direct_product_canonical(PermGroup::symmetric(3), PermGroup::trivial(1)) == PermGroup::symmetric(3));

  PermGroup s = direct_product_canonical(PermGroup::symmetric(2), PermGroup::symmetric(2));
  CHECK(s.order() == 4);
  CHECK(is_transitive(s));
  CHECK(is_block_system_of(s, cells(4, {{0, 1}, {2, 3}})));
  CHECK(is_block_system_of(s, cells(4, {{0, 2}, {1, 3}})));
}
