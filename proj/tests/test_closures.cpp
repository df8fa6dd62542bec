#include <catch_amalgamated.hpp>

#include "closurekit/closures.hpp"
#include "oracles.hpp"

#include <random>

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

const std::vector<PermGroup>& small_transitive() {
  static std::vector<PermGroup> out;
  if (!out.empty()) return out;
  for (std::size_t n : {2, 3, 4, 5}) {
    for (const PermGroup& h : transitive_subgroups(PermGroup::symmetric(n))) out.push_back(h);
  }
  return out;
}

const std::vector<PermGroup>& degree6_classes() {
  static std::vector<PermGroup> out;
  if (!out.empty()) return out;
  for (const PermGroup& h : subgroup_class_representatives(PermGroup::symmetric(6))) {
    if (is_transitive(h)) out.push_back(h);
  }
  return out;
}

}  // namespace

TEST_CASE("restrict examples") {
  CHECK(restrict(parse_cycles(4, "(0 2)(1 3)"), {0, 2}) == parse_cycles(4, "(0 2)"));
  Permutation g = parse_cycles(5, "(0 1 2)(3 4)");
  CHECK(restrict(g, PointSet::range(5)) == g);
  CHECK(restrict(g, {3, 4}) == parse_cycles(5, "(3 4)"));
  try {
    restrict(g, {0, 1});
    FAIL("expected NotInvariant");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_invariant);
  }
}

TEST_CASE("pointwise_stabilizer examples") {
  CHECK(pointwise_stabilizer(PermGroup::symmetric(3), {0}) == gen(3, {"(1 2)"}));
  PermGroup s4 = PermGroup::symmetric(4);
  CHECK(pointwise_stabilizer(s4, PointSet()) == s4);
  CHECK(pointwise_stabilizer(s2wrs2(), {0, 1}) == gen(4, {"(2 3)"}));
}

TEST_CASE("wreath_stabilizer examples") {
  PermGroup z4 = left_regular_representation(4);
  CHECK(wreath_stabilizer(z4, cells(4, {{0, 2}, {1, 3}}), {0, 2}).order() == 1);
  CHECK(wreath_stabilizer(s2wrs2(), cells(4, {{0, 1}, {2, 3}}), {0, 1}) == gen(4, {"(2 3)"}));
  PermGroup z6 = left_regular_representation(6);
  for (const BlockSystem& b : normal_block_systems(z6)) {
    for (PointSet c : b.cells()) CHECK(wreath_stabilizer(z6, b, c).order() == 1);
  }
  try {
    wreath_stabilizer(PermGroup::symmetric(4), cells(4, {{0, 1}, {2, 3}}), {0, 1});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK((e.kind() == ErrorKind::not_a_block_system || e.kind() == ErrorKind::not_normal_block_system));
  }
}

TEST_CASE("wreath stabilizer by cell support agrees with lattice enumeration") {
  std::vector<PermGroup> groups = small_transitive();
  for (const PermGroup& g : degree6_classes()) groups.push_back(g);
  groups.push_back(wreath_product(PermGroup::symmetric(2), PermGroup::symmetric(3)).group);
  groups.push_back(wreath_product(left_regular_representation(3), PermGroup::symmetric(2)).group);
  for (const PermGroup& g : groups) {
    for (const BlockSystem& b : normal_block_systems(g)) {
      for (PointSet c : b.cells()) {
        CHECK(wreath_stabilizer(g, b, c) == wreath_stabilizer_by_lattice(g, b, c));
      }
    }
  }
}

TEST_CASE("fixer_analysis examples") {
  auto a = fixer_analysis(s2wrs2(), cells(4, {{0, 1}, {2, 3}}));
  CHECK(a.equiv_classes.size() == 2);
  CHECK(a.fixer_system == cells(4, {{0, 1}, {2, 3}}));

  PermGroup z8 = left_regular_representation(8);
  for (const BlockSystem& b : normal_block_systems(z8)) {
    auto r = fixer_analysis(z8, b);
    CHECK(r.fixer_system.is_whole());
    CHECK(r.equiv_classes.size() == 1);
  }
  CHECK(fixer_analysis(left_regular_representation(6), cells(6, {{0, 2, 4}, {1, 3, 5}})).fixer_system.is_whole());
}

TEST_CASE("fixer systems are block systems refined by B, with equivariant wreath stabilizers") {
  std::vector<PermGroup> groups = small_transitive();
  for (const PermGroup& g : degree6_classes()) groups.push_back(g);
  for (const PermGroup& g : groups) {
    for (const BlockSystem& b : normal_block_systems(g)) {
      auto a = fixer_analysis(g, b);  // throws on any violated invariant
      CHECK(is_block_system_of(g, a.fixer_system));
      CHECK(b.refines(a.fixer_system));
      PermGroup f = fix(g, b);
      for (std::size_t c = 0; c < b.size(); ++c) {
        CHECK(a.wstab_per_cell[c].is_subgroup_of(f));
        for (const Permutation& w : a.wstab_per_cell[c].generators()) CHECK(restrict(w, b[c]).is_identity());
        for (std::size_t d = 0; d < b.size(); ++d) {
          bool same = a.wstab_per_cell[c] == a.wstab_per_cell[d];
          CHECK(same == (a.equiv_classes.cell_of(c) == a.equiv_classes.cell_of(d)));
        }
      }
      for (const Permutation& x : g.elements()) {
        for (std::size_t c = 0; c < b.size(); ++c) {
          CHECK(conjugate_group(a.wstab_per_cell[c], x.inverse()) == a.wstab_per_cell[b.image_cell(x, c)]);
        }
      }
    }
  }
}

TEST_CASE("normal systems B, C with C-fixer E satisfy B <= E or C < B") {
  std::vector<PermGroup> groups = small_transitive();
  for (const PermGroup& g : degree6_classes()) groups.push_back(g);
  groups.push_back(gen(8, {"(0 1 2 3 4 5 6 7)", "(1 5)(3 7)"}));
  groups.push_back(wreath_product(left_regular_representation(2), left_regular_representation(4)).group);
  std::size_t cases = 0;
  for (const PermGroup& g : groups) {
    auto normal = normal_block_systems(g);
    for (const BlockSystem& c : normal) {
      BlockSystem e = fixer_analysis(g, c).fixer_system;
      for (const BlockSystem& b : normal) {
        ++cases;
        bool strict = c.refines(b) && c != b;
        CHECK((b.refines(e) || strict));
      }
    }
  }
  CHECK(cases > 100);
}

TEST_CASE("largest_subgroup_with_block_system examples") {
  PermGroup s4 = PermGroup::symmetric(4);
  auto k = largest_subgroup_with_block_system(s4, cells(4, {{0, 1}, {2, 3}}));
  CHECK(k.group.order() == 8);
  CHECK(k.transitive);
  CHECK(largest_subgroup_with_block_system(s4, BlockSystem::singletons(4)).group == s4);
  auto z = largest_subgroup_with_block_system(left_regular_representation(4), cells(4, {{0, 1}, {2, 3}}));
  CHECK(z.group == gen(4, {"(0 2)(1 3)"}));
  CHECK_FALSE(z.transitive);
}

TEST_CASE("5/2-closedness examples") {
  for (std::size_t n = 2; n <= 7; ++n) {
    CHECK(is_52_closed(PermGroup::symmetric(n)).closed);
    CHECK(is_52_closed(left_regular_representation(n)).closed);
  }
  CHECK(is_52_closed(gen(4, {"(0 1)(2 3)", "(0 2)(1 3)"})).closed);
}

TEST_CASE("closedness examples") {
  for (std::size_t n = 2; n <= 8; ++n) {
    auto p = closedness_profile(left_regular_representation(n));
    CHECK(p.nine_eighths.closed);
    CHECK(p.five_fourths.closed);
    CHECK(p.three_halves.closed);
  }
  auto s4 = closedness_profile(PermGroup::symmetric(4));
  CHECK_FALSE(s4.nine_eighths.closed);
  REQUIRE(s4.nine_eighths.witness);
  CHECK(s4.nine_eighths.witness->h.order() == 8);
  CHECK(s4.nine_eighths.witness->b.cell_size() == 2);
  CHECK(s4.three_halves.closed);
  CHECK(s4.three_halves_strict.closed);

  auto w = closedness_profile(s2wrs2());
  CHECK(w.three_halves.closed);
  CHECK_FALSE(w.nine_eighths.closed);
  auto d = decompose_wreath_symmetric(s2wrs2());
  REQUIRE(d);
  CHECK(closedness(d->top, ClosednessKind::nine_eighths).closed);
}

TEST_CASE("hierarchy: 9/8 implies 5/4, 3/2 implies 5/4, every kind implies 5/2") {
  std::vector<PermGroup> groups = small_transitive();
  for (const PermGroup& g : degree6_classes()) groups.push_back(g);
  std::vector<PermGroup> five_fourths_only;
  for (const PermGroup& g : groups) {
    auto p = closedness_profile(g);
    if (p.nine_eighths.closed) CHECK(p.five_fourths.closed);
    if (p.three_halves.closed) CHECK(p.five_fourths.closed);
    if (p.five_fourths.closed) CHECK(p.five_halves.closed);
    if (p.three_halves_strict.closed) CHECK(p.five_halves.closed);
    if (p.five_fourths.closed && !p.three_halves.closed) five_fourths_only.push_back(g);
  }
  // 5/4 does not imply 3/2: Z_3 wr Z_2 has fixer system B on its 3-cells but
  // fix(B) acts as Z_3, not S_3, on each cell.
  REQUIRE(five_fourths_only.size() == 1);
  CHECK(five_fourths_only[0] == gen(6, {"(3 4 5)", "(0 3)(1 4)(2 5)"}));
}

TEST_CASE("closedness predicates are conjugation invariant") {
  std::vector<PermGroup> groups = small_transitive();
  for (const PermGroup& g : degree6_classes()) groups.push_back(g);
  std::mt19937 rng(7);
  for (const PermGroup& g : groups) {
    auto p = closedness_profile(g);
    PermGroup sym = PermGroup::symmetric(g.degree());
    const auto& sn = sym.elements();
    Permutation h = sn[std::uniform_int_distribution<std::size_t>(0, sn.size() - 1)(rng)];
    auto q = closedness_profile(conjugate_group(g, h));
    CHECK(p.five_halves.closed == q.five_halves.closed);
    CHECK(p.nine_eighths.closed == q.nine_eighths.closed);
    CHECK(p.five_fourths.closed == q.five_fourths.closed);
    CHECK(p.three_halves.closed == q.three_halves.closed);
  }
}

TEST_CASE("reduced predicates agree with the literal definitions") {
  std::vector<PermGroup> groups = small_transitive();
  for (const PermGroup& g : degree6_classes()) {
    if (g.order() <= 72) groups.push_back(g);
  }
  for (const PermGroup& g : groups) {
    auto fast = closedness_profile(g);
    auto slow = closedness_profile(g, {false, true});
    CHECK(fast.five_halves.closed == slow.five_halves.closed);
    CHECK(fast.nine_eighths.closed == slow.nine_eighths.closed);
    CHECK(fast.five_fourths.closed == slow.five_fourths.closed);
    CHECK(fast.three_halves.closed == slow.three_halves.closed);
    CHECK(fast.three_halves_strict.closed == slow.three_halves_strict.closed);
  }
}

TEST_CASE("clo_52_step examples") {
  for (std::size_t n = 3; n <= 6; ++n) {
    PermGroup sn = PermGroup::symmetric(n);
    CHECK(clo_52_step(sn) == sn);
    PermGroup z = left_regular_representation(n);
    CHECK(clo_52_step(z) == z);
  }
  for (const PermGroup& g : small_transitive()) {
    if (is_52_closed(g).closed) CHECK(clo_52_step(g) == g);
    else CHECK(clo_52_step(g).order() > g.order());
  }
}

TEST_CASE("closure_52 examples and postconditions") {
  for (std::size_t n = 1; n <= 8; ++n) {
    PermGroup z = left_regular_representation(n);
    auto r = closure_52(z);
    CHECK(r.result == z);
    CHECK(r.steps == 1);
  }
  CHECK(closure_52(PermGroup::symmetric(5)).result == PermGroup::symmetric(5));
  for (const PermGroup& g : small_transitive()) {
    auto r = closure_52(g);
    CHECK(g.is_subgroup_of(r.result));
    CHECK(is_52_closed(r.result).closed);
    CHECK(all_block_systems(g) == all_block_systems(r.result));
    CHECK(closure_52(r.result).result == r.result);
    for (const auto& rec : r.provenance) CHECK(rec.restricted == restrict(rec.gamma, rec.e_cell));
  }
}

TEST_CASE("closure_32 examples and postconditions") {
  PermGroup z5 = left_regular_representation(5);
  CHECK(closure_32(z5) == z5);
  CHECK(closure_32(PermGroup::symmetric(4)) == PermGroup::symmetric(4));
  for (const PermGroup& g : small_transitive()) {
    PermGroup c = closure_32(g);
    CHECK(g.is_subgroup_of(c));
    CHECK(closedness(c, ClosednessKind::three_halves).closed);
    if (closedness(g, ClosednessKind::three_halves).closed) CHECK(c == g);
  }
  CHECK_THROWS_AS(closure_32(left_regular_representation(9)), Error);
}

TEST_CASE("decompose_wreath_symmetric examples") {
  auto w = decompose_wreath_symmetric(s2wrs2());
  REQUIRE(w);
  CHECK(w->system == cells(4, {{0, 1}, {2, 3}}));
  CHECK(w->m == 2);
  CHECK_FALSE(decompose_wreath_symmetric(left_regular_representation(4)));
  for (std::size_t n = 2; n <= 6; ++n) {
    auto s = decompose_wreath_symmetric(PermGroup::symmetric(n));
    REQUIRE(s);
    CHECK(s->system.is_whole());
    CHECK(s->m == n);
  }
  auto big = decompose_wreath_symmetric(wreath_product(left_regular_representation(3), PermGroup::symmetric(3)).group);
  REQUIRE(big);
  CHECK(big->m == 3);
  CHECK(big->top == left_regular_representation(3));
}
