#include <catch_amalgamated.hpp>

#include <random>
#include <set>

#include "closurekit/closures.hpp"
#include "closurekit/objects.hpp"
#include "closurekit/search.hpp"
#include "oracles.hpp"

using namespace closurekit;

namespace {

Digraph cycle(std::size_t n, bool both) {
  Digraph d(n);
  for (Point i = 0; i < n; ++i) {
    d.add_arc(i, static_cast<Point>((i + 1) % n));
    if (both) d.add_arc(static_cast<Point>((i + 1) % n), i);
  }
  return d;
}

Digraph petersen() {
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

IncidenceStructure cyclic_lines(std::size_t n, std::vector<std::size_t> base) {
  std::vector<PointSet> lines;
  for (std::size_t i = 0; i < n; ++i) {
    PointSet l;
    for (std::size_t b : base) l |= PointSet{static_cast<Point>((i + b) % n)};
    lines.push_back(l);
  }
  return IncidenceStructure(n, lines);
}

IncidenceStructure fano() { return cyclic_lines(7, {0, 1, 3}); }

Digraph random_digraph(std::size_t n, double p, std::mt19937& rng) {
  std::bernoulli_distribution coin(p);
  Digraph d(n);
  for (Point u = 0; u < n; ++u) {
    for (Point v = 0; v < n; ++v) {
      if (u != v && coin(rng)) d.add_arc(u, v);
    }
  }
  return d;
}

ColoredTupleSystem random_tuples(std::size_t n, std::size_t count, int colors, std::mt19937& rng) {
  std::uniform_int_distribution<std::size_t> len(1, std::min<std::size_t>(3, n - 1));
  std::uniform_int_distribution<int> pt(0, static_cast<int>(n) - 1);
  std::uniform_int_distribution<int> col(0, colors - 1);
  std::vector<ColoredTuple> ts;
  std::set<std::vector<Point>> used;
  for (std::size_t i = 0; i < count; ++i) {
    ColoredTuple t;
    std::size_t k = len(rng);
    for (std::size_t j = 0; j < k; ++j) t.points.push_back(static_cast<Point>(pt(rng)));
    t.color = col(rng);
    if (used.insert(t.points).second) ts.push_back(t);
  }
  return ColoredTupleSystem(n, ts);
}

// Brute-force automorphisms: every permutation of S_n, tested by an
// independent arc/line comparison.
std::vector<Permutation> oracle_digraph_aut(const Digraph& d) {
  std::vector<Permutation> out;
  auto arcs = d.arcs();
  for (const Permutation& g : oracle::all_permutations(d.order())) {
    bool ok = true;
    for (auto [u, v] : arcs) ok = ok && d.has_arc(g(u), g(v));
    if (ok) out.push_back(g);
  }
  return out;
}

std::vector<Permutation> oracle_incidence_aut(const IncidenceStructure& s) {
  std::vector<Permutation> out;
  std::multiset<std::uint64_t> lines;
  for (PointSet l : s.lines()) lines.insert(l.bits());
  for (const Permutation& g : oracle::all_permutations(s.order())) {
    std::multiset<std::uint64_t> img;
    for (PointSet l : s.lines()) img.insert(g.image(l).bits());
    if (img == lines) out.push_back(g);
  }
  return out;
}

std::vector<Permutation> oracle_tuple_aut(const ColoredTupleSystem& t) {
  std::set<std::pair<std::vector<Point>, int>> tuples;
  for (const auto& x : t.tuples()) tuples.insert({x.points, x.color});
  std::vector<Permutation> out;
  for (const Permutation& g : oracle::all_permutations(t.order())) {
    bool ok = true;
    for (const auto& [pts, c] : tuples) {
      std::vector<Point> img;
      for (Point p : pts) img.push_back(g(p));
      ok = ok && tuples.count({img, c}) == 1;
    }
    if (ok) out.push_back(g);
  }
  return out;
}

std::vector<Permutation> sorted_elements(const PermGroup& g) { return g.materialize().elements(); }

}  // namespace

TEST_CASE("cayley_digraph and unit_circulant examples") {
  CHECK(cayley_digraph(3, {1}).arcs() == std::vector<std::pair<Point, Point>>{{0, 1}, {1, 2}, {2, 0}});
  CHECK(cayley_digraph(4, {1, 3}) == cycle(4, true));
  CHECK(cayley_digraph(5, {}).arc_count() == 0);
  CHECK_THROWS_AS(cayley_digraph(4, {0}), Error);
  CHECK(unit_circulant(4, {1, 3}) == cycle(4, true));
  CHECK(unit_circulant(5, {1, 2, 3, 4}).arc_count() == 20);
  try {
    unit_circulant(6, {2});
    FAIL("expected NonUnitElement");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::non_unit_element);
  }
  CHECK(units(12) == std::vector<std::size_t>{1, 5, 7, 11});

  // Cay(S_3, {(0 1)}) is a perfect matching on the 6 elements.
  PermGroup s3 = PermGroup::symmetric(3);
  Digraph c = cayley_digraph(s3, {parse_cycles(3, "(0 1)")});
  CHECK(c.arc_count() == 6);
  CHECK(c.is_symmetric());
  CHECK_THROWS_AS(cayley_digraph(s3, {Permutation(3)}), Error);
}

TEST_CASE("double_coset_digraph examples") {
  PermGroup s3 = PermGroup::symmetric(3);
  PermGroup h = PermGroup::generate(3, {parse_cycles(3, "(0 1)")});
  std::set<Permutation> s;
  Permutation r = parse_cycles(3, "(0 1 2)");
  for (const Permutation& a : h.elements()) {
    for (const Permutation& b : h.elements()) s.insert(a * r * b);
  }
  std::vector<Permutation> sv(s.begin(), s.end());
  Digraph d = double_coset_digraph(s3, h, sv);
  REQUIRE(d.order() == 3);
  // Independent coset arithmetic: gH -> gsH on cosets keyed by their element sets.
  std::vector<std::set<Permutation>> cosets;
  for (const Permutation& g : s3.elements()) {
    std::set<Permutation> c;
    for (const Permutation& k : h.elements()) c.insert(g * k);
    if (std::find(cosets.begin(), cosets.end(), c) == cosets.end()) cosets.push_back(c);
  }
  auto id = [&](const Permutation& g) {
    for (std::size_t i = 0; i < cosets.size(); ++i) {
      if (cosets[i].count(g)) return i;
    }
    return cosets.size();
  };
  std::size_t arcs = 0;
  for (const Permutation& g : s3.elements()) {
    for (const Permutation& x : sv) CHECK(d.has_arc(static_cast<Point>(id(g)), static_cast<Point>(id(g * x))));
  }
  for (Point u = 0; u < 3; ++u) arcs += d.out_degree(u);
  CHECK(arcs == 6);

  CHECK(double_coset_digraph(s3, h, {}).arc_count() == 0);
  PermGroup one = PermGroup::trivial(3);
  auto plain = double_coset_digraph(s3, one, {r});
  CHECK(isomorphism(plain, cayley_digraph(s3, {r})));
  CHECK_THROWS_AS(double_coset_digraph(s3, h, {parse_cycles(3, "(0 1)")}), Error);
  try {
    double_coset_digraph(s3, h, {r});
    FAIL("expected NotDoubleCosetClosed");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_double_coset_closed);
  }
}

TEST_CASE("digraph_wreath and quotient_digraph examples") {
  Digraph k2 = Digraph::from_arcs(2, {{0, 1}, {1, 0}});
  Digraph e2(2);
  Digraph w = digraph_wreath(k2, e2);
  CHECK(isomorphism(w, cycle(4, true)));
  CHECK(w.arc_count() == 8);
  Digraph c5 = cycle(5, false);
  CHECK(digraph_wreath(c5, Digraph(1)) == c5);
  CHECK(digraph_wreath(e2, k2) == Digraph::from_arcs(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}}));

  BlockSystem pairs(4, {PointSet{0, 2}, PointSet{1, 3}});
  CHECK(quotient_digraph(cycle(4, true), pairs) == k2);
  CHECK(quotient_digraph(c5, Partition::singletons(5)) == c5);
  CHECK(quotient_digraph(Digraph(6), Partition::whole(6)).arc_count() == 0);
}

TEST_CASE("wreath of digraphs contains the wreath of their groups") {
  std::mt19937 rng(3);
  for (int i = 0; i < 10; ++i) {
    Digraph a = random_digraph(3, 0.5, rng);
    Digraph b = random_digraph(2 + i % 2, 0.5, rng);
    Digraph w = digraph_wreath(a, b);
    auto wr = wreath_product(automorphism_group(a).materialize(), automorphism_group(b).materialize());
    for (const Permutation& g : wr.group.generators()) CHECK(is_automorphism(w, g));
  }
}

TEST_CASE("twin_partition examples and block property") {
  auto c4 = twin_partition(cycle(4, true));
  CHECK(c4.reducible);
  CHECK(c4.classes == Partition(4, {PointSet{0, 2}, PointSet{1, 3}}));
  auto c5 = twin_partition(cycle(5, false));
  CHECK_FALSE(c5.reducible);
  CHECK(c5.classes.is_singletons());
  CHECK(twin_partition(Digraph(4)).classes.is_whole());

  for (std::size_t n = 2; n <= 8; ++n) {
    for (std::uint32_t mask = 0; mask < (1U << (n - 1)); ++mask) {
      std::vector<std::size_t> s;
      for (std::size_t c = 1; c < n; ++c) {
        if ((mask >> (c - 1)) & 1U) s.push_back(c);
      }
      Digraph d = circulant(n, s);
      PermGroup aut = automorphism_group(d).materialize();
      CHECK(is_block_system_of(aut, BlockSystem(twin_partition(d).classes)));
    }
  }
}

TEST_CASE("girth_and_bipartite_search examples") {
  auto p = girth_and_bipartite_search(petersen(), 2);
  CHECK(p.girth == 5U);
  CHECK_FALSE(p.contains_bipartite);
  auto c4 = girth_and_bipartite_search(cycle(4, true), 2);
  CHECK(c4.girth == 4U);
  CHECK(c4.contains_bipartite);
  auto tri = girth_and_bipartite_search(cycle(3, false), 2);
  CHECK(tri.girth == 3U);
  CHECK_FALSE(tri.contains_bipartite);
  CHECK_FALSE(girth_and_bipartite_search(Digraph::from_arcs(3, {{0, 1}, {1, 2}}), 2).girth);
  CHECK(girth_and_bipartite_search(digraph_wreath(Digraph::from_arcs(2, {{0, 1}}), Digraph(3)), 3).contains_bipartite);
  CHECK_THROWS_AS(girth_and_bipartite_search(petersen(), 1), Error);
}

TEST_CASE("set systems and intersection bounds") {
  Digraph d = cycle(5, true);
  SetSystem s = set_system_of(d);
  CHECK(s.sets().size() == 5);
  CHECK(is_m_intersecting(s, 1));
  std::mt19937 rng(11);
  for (int i = 0; i < 20; ++i) CHECK(is_m_intersecting(set_system_of(random_digraph(6, 0.4, rng)), 1));

  ColoredTupleSystem t(4, {{{0, 1, 2}, 0}});
  CHECK(set_system_of(t).sets() == std::vector<PointSet>{PointSet{0, 1, 2}});
  CHECK(is_m_intersecting(set_system_of(t), 0));
  SetSystem two(4, {PointSet{0, 1, 2}, PointSet{0, 1, 3}});
  CHECK_FALSE(is_m_intersecting(two, 1));
  CHECK(is_m_intersecting(two, 2));
}

TEST_CASE("classify_incidence examples") {
  auto f = classify_incidence(fano());
  CHECK(f.configuration);
  CHECK(f.q == 3);
  CHECK(f.k == 3);
  CHECK(f.partial_sg);
  CHECK(f.connected);

  auto one = classify_incidence(IncidenceStructure(3, {PointSet{0, 1}}));
  CHECK_FALSE(one.configuration);
  CHECK_FALSE(one.partial_sg);

  auto two = classify_incidence(IncidenceStructure(6, {PointSet{0, 1, 2}, PointSet{3, 4, 5}}));
  CHECK(two.partial_sg);
  CHECK_FALSE(two.connected);
  CHECK(two.component_partition.size() == 2);

  CHECK(classify_incidence(cyclic_lines(8, {0, 1, 3})).configuration);  // Moebius-Kantor
  CHECK(classify_incidence(cyclic_lines(9, {0, 1, 3})).configuration);
}

TEST_CASE("automorphism_group examples") {
  for (std::size_t n = 2; n <= 9; ++n) {
    PermGroup a = automorphism_group(cycle(n, false)).materialize();
    CHECK(a == left_regular_representation(n));
  }
  for (std::size_t n = 1; n <= 7; ++n) {
    CHECK(automorphism_group(Digraph(n)).materialize() == PermGroup::symmetric(n));
  }
  CHECK(automorphism_search(Digraph(12)).order == factorial(12));
  auto f = automorphism_search(fano());
  CHECK(f.order == 168);
  CHECK(f.group().materialize().order() == 168);
  CHECK(oracle_incidence_aut(fano()).size() == 168);
  CHECK(automorphism_search(petersen()).order == 120);
  CHECK_THROWS_AS(automorphism_group(Digraph(40)), Error);
}

TEST_CASE("automorphism groups agree with the brute-force filter") {
  std::mt19937 rng(5);
  for (int i = 0; i < 60; ++i) {
    std::size_t n = 3 + i % 5;
    Digraph d = random_digraph(n, i % 3 == 0 ? 0.2 : 0.5, rng);
    auto search = automorphism_search(d);
    auto expected = oracle_digraph_aut(d);
    CHECK(sorted_elements(search.group()) == expected);
    CHECK(search.order == expected.size());
  }
  for (std::size_t n = 3; n <= 8; ++n) {
    for (std::size_t a = 1; a < n; ++a) {
      Digraph d = circulant(n, {a});
      CHECK(sorted_elements(automorphism_group(d)) == oracle_digraph_aut(d));
      Digraph u = a == n - a ? d : circulant(n, {a, n - a});
      CHECK(sorted_elements(automorphism_group(u)) == oracle_digraph_aut(u));
    }
  }
  for (int i = 0; i < 40; ++i) {
    std::size_t n = 3 + i % 4;
    ColoredTupleSystem t = random_tuples(n, 2 + i % 5, 1 + i % 3, rng);
    CHECK(sorted_elements(automorphism_group(t)) == oracle_tuple_aut(t));
  }
  for (std::size_t n = 4; n <= 7; ++n) {
    IncidenceStructure s = cyclic_lines(n, {0, 1, 3});
    CHECK(sorted_elements(automorphism_group(s)) == oracle_incidence_aut(s));
  }
  IncidenceStructure mk = cyclic_lines(8, {0, 1, 3});
  CHECK(sorted_elements(automorphism_group(mk)) == oracle_incidence_aut(mk));
}

TEST_CASE("isomorphism examples") {
  Digraph c4 = cycle(4, false);
  auto self = isomorphism(c4, c4);
  REQUIRE(self);
  CHECK(self->is_identity());
  Permutation swap = parse_cycles(4, "(0 1)");
  auto w = isomorphism(c4, c4.image(swap));
  REQUIRE(w);
  CHECK(c4.image(*w) == c4.image(swap));
  auto m = isomorphism(cayley_digraph(5, {1}), cayley_digraph(5, {2}));
  REQUIRE(m);
  CHECK(*m == Permutation::from_images({0, 2, 4, 1, 3}));
  CHECK_FALSE(isomorphism(cycle(4, false), cycle(4, true)));
  CHECK_FALSE(isomorphism(cycle(4, false), cycle(5, false)));

  // Color relabelling is allowed between colored systems.
  ColoredTupleSystem a(4, {{{0, 1}, 0}, {{1, 2}, 1}});
  ColoredTupleSystem b(4, {{{0, 1}, 1}, {{1, 2}, 0}});
  CHECK(isomorphism(a, b));
  ColoredTupleSystem c(4, {{{0, 1}, 0}, {{1, 2}, 0}});
  CHECK_FALSE(isomorphism(a, c));
}

TEST_CASE("isomorphism witnesses are the lex-least ones") {
  std::mt19937 rng(9);
  for (int i = 0; i < 40; ++i) {
    std::size_t n = 3 + i % 4;
    Digraph x = random_digraph(n, 0.4, rng);
    const auto perms = oracle::all_permutations(n);
    Digraph y = i % 4 == 0 ? random_digraph(n, 0.4, rng)
                           : x.image(perms[std::uniform_int_distribution<std::size_t>(0, perms.size() - 1)(rng)]);
    std::optional<Permutation> expected;
    for (const Permutation& g : perms) {
      if (x.image(g) == y) {
        expected = g;
        break;
      }
    }
    CHECK(isomorphism(x, y) == expected);
  }
}

TEST_CASE("Aut of a tuple system lies in Aut of its set system") {
  std::mt19937 rng(13);
  for (int i = 0; i < 40; ++i) {
    ColoredTupleSystem t = random_tuples(4 + i % 4, 3 + i % 6, 1 + i % 3, rng);
    PermGroup at = automorphism_group(t).materialize();
    PermGroup as = automorphism_group(set_system_of(t)).materialize();
    CHECK(at.is_subgroup_of(as));
  }
}

TEST_CASE("Sabidussi: a regular cyclic automorphism subgroup iff isomorphic to a circulant") {
  std::mt19937 rng(17);
  for (int i = 0; i < 40; ++i) {
    std::size_t n = 3 + i % 4;
    Digraph d = i % 2 == 0 ? random_digraph(n, 0.5, rng) : circulant(n, {1 + i % (n - 1)}).image(
                                                                 oracle::all_permutations(n)[static_cast<std::size_t>(i) * 7 % 6]);
    bool regular = !regular_cyclic_subgroups(automorphism_group(d).materialize()).empty();
    bool circ = false;
    for (std::uint32_t mask = 0; mask < (1U << (n - 1)) && !circ; ++mask) {
      std::vector<std::size_t> s;
      for (std::size_t c = 1; c < n; ++c) {
        if ((mask >> (c - 1)) & 1U) s.push_back(c);
      }
      circ = isomorphism(d, circulant(n, s)).has_value();
    }
    CHECK(regular == circ);
  }
}

TEST_CASE("Pappus configuration: point-transitive partial SG design whose Aut is not 5/2-closed") {
  // AG(2,3) without the parallel class of columns {0,3,6}, {1,4,7}, {2,5,8}.
  std::vector<PointSet> lines{PointSet{0, 1, 2}, PointSet{0, 4, 8}, PointSet{0, 5, 7}, PointSet{1, 3, 8}, PointSet{1, 5, 6},
                              PointSet{2, 3, 7}, PointSet{2, 4, 6}, PointSet{3, 4, 5}, PointSet{6, 7, 8}};
  IncidenceStructure pappus(9, lines);
  IncidenceReport c = classify_incidence(pappus);
  CHECK(c.configuration);
  CHECK(c.partial_sg);
  CHECK(c.connected);

  std::vector<Permutation> aut = oracle_incidence_aut(pappus);
  REQUIRE(aut.size() == 108);
  std::set<Permutation> g(aut.begin(), aut.end());
  std::vector<PointSet> cols{PointSet{0, 3, 6}, PointSet{1, 4, 7}, PointSet{2, 5, 8}};

  // The columns form a normal block system: fix_G(B) has the columns as orbits.
  std::vector<Permutation> fixing;
  for (const Permutation& a : aut) {
    bool fixes = true;
    for (PointSet col : cols) fixes = fixes && a.image(col) == col;
    if (fixes) fixing.push_back(a);
  }
  for (PointSet col : cols) {
    PointSet orb;
    for (const Permutation& a : fixing) orb |= PointSet{a(static_cast<Point>(col.to_vector().front()))};
    CHECK(orb == col);
  }
  // Elements of fix_G(B) trivial on a column move both other columns, so the
  // wreath stabilizers differ and the fixer system is the columns themselves.
  for (PointSet col : cols) {
    PointSet moved;
    for (const Permutation& a : fixing) {
      if ((a.support() & col).empty()) moved |= a.support();
    }
    CHECK(moved == PointSet::range(9) - col);
  }
  Permutation w = Permutation::from_cycles(9, {{1, 4, 7}, {2, 8, 5}});
  CHECK(g.count(w) == 1);
  // Restricting w to the column {1,4,7} leaves the group.
  CHECK(g.count(Permutation::from_cycles(9, {{1, 4, 7}})) == 0);

  PermGroup a = automorphism_group(pappus).materialize();
  CHECK(a.order() == 108);
  CHECK(is_transitive(a));
  CHECK_FALSE(is_52_closed(a).closed);
}
