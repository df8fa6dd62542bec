#include <catch_amalgamated.hpp>

#include "closurekit/partition.hpp"
#include "closurekit/perm.hpp"

using namespace closurekit;

TEST_CASE("permutation composition applies the right factor first") {
  Permutation p = parse_cycles(4, "(0 1)");
  Permutation q = parse_cycles(4, "(1 2)");
  Permutation pq = p * q;
  CHECK(pq(1) == 2);
  CHECK(pq(2) == 0);
  CHECK(pq(0) == 1);
  CHECK((p * p.inverse()).is_identity());
}

TEST_CASE("cycle notation round trip") {
  Permutation p = parse_cycles(5, "(0 1 2)(3 4)");
  CHECK(to_cycle_string(p) == "(0 1 2)(3 4)");
  CHECK(p.images() == std::vector<Point>{1, 2, 0, 4, 3});
  CHECK(to_cycle_string(Permutation(3)) == "()");
  CHECK(parse_cycles(3, "()").is_identity());
  CHECK(parse_cycles(4, "(2,3)") == parse_cycles(4, "(2 3)"));
  CHECK_THROWS_AS(parse_cycles(3, "(0 3)"), Error);
  CHECK_THROWS_AS(parse_cycles(3, "(0 1)(1 2)"), Error);
  CHECK_THROWS_AS(parse_cycles(3, "0 1"), Error);
}

TEST_CASE("from_images rejects non-bijections") {
  CHECK_THROWS_AS(Permutation::from_images({0, 0, 1}), Error);
  CHECK_THROWS_AS(Permutation::from_images({0, 3, 1}), Error);
  CHECK(Permutation::from_images({1, 2, 0}) == parse_cycles(3, "(0 1 2)"));
}

TEST_CASE("cycle type, order, support and powers") {
  Permutation p = parse_cycles(7, "(0 1 2)(3 4)");
  CHECK(p.cycle_type() == std::vector<std::size_t>{3, 2, 1, 1});
  CHECK(p.order() == 6);
  CHECK(p.support() == PointSet{0, 1, 2, 3, 4});
  CHECK(p.pow(6).is_identity());
  CHECK(p.pow(-1) == p.inverse());
  CHECK(p.pow(3) == parse_cycles(7, "(3 4)"));
  CHECK(Permutation(4).support().empty());
}

TEST_CASE("lexicographic order on image sequences") {
  Permutation id(3);
  Permutation a = parse_cycles(3, "(1 2)");   // [0,2,1]
  Permutation b = parse_cycles(3, "(0 1)");   // [1,0,2]
  CHECK(id < a);
  CHECK(a < b);
  CHECK_THROWS_AS(id * Permutation(4), Error);
}

TEST_CASE("point sets order by sorted element lists") {
  CHECK(PointSet{0, 3} < PointSet{1});
  CHECK(PointSet{0} < PointSet{0, 1});
  CHECK(PointSet{0, 1} < PointSet{0, 2});
  CHECK_FALSE(PointSet{0, 2} < PointSet{0, 1});
  CHECK(PointSet{2, 3}.to_vector() == std::vector<Point>{2, 3});
}

TEST_CASE("partitions") {
  Partition p(4, {PointSet{1, 3}, PointSet{0, 2}});
  CHECK(p.to_string() == "[[0,2],[1,3]]");
  CHECK(p.cell_of(3) == 1);
  CHECK(p.is_invariant_under(parse_cycles(4, "(0 1 2 3)")));
  CHECK_FALSE(p.is_invariant_under(parse_cycles(4, "(0 1)")));
  CHECK(Partition::singletons(4).refines(p));
  CHECK(p.refines(Partition::whole(4)));
  CHECK_THROWS_AS(Partition(4, {PointSet{0, 1}, PointSet{1, 2, 3}}), Error);
  CHECK_THROWS_AS(Partition(4, {PointSet{0, 1}}), Error);
  CHECK_THROWS_AS(BlockSystem(Partition(4, {PointSet{0}, PointSet{1, 2, 3}})), Error);
  CHECK(BlockSystem(p).cell_size() == 2);
}
