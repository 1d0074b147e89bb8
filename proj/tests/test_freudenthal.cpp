#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gjext/freudenthal.hpp"
#include "gjext/rng.hpp"
#include "test_util.hpp"

using namespace gjext;
using gjext::test::R;
using gjext::test::V;

namespace {

// Independent oracle for a located cell: weights nonnegative, sum to 1,
// and the weighted vertex sum reproduces x exactly.
void check_cell(const RatVec& x, const Rational& delta) {
  LocatedCell loc = locate_simplex(x, delta);
  const int n = x.dim();
  REQUIRE(static_cast<int>(loc.weights.size()) == n + 1);
  Rational sum(0);
  RatVec recon = RatVec::zero(n);
  for (int k = 0; k <= n; ++k) {
    CHECK(loc.weights[k].sign() >= 0);
    sum += loc.weights[k];
    recon = recon + loc.weights[k] * loc.cell.vertex(k, delta);
  }
  CHECK(sum == Rational(1));
  CHECK(recon == x);
}

}  // namespace

TEST_CASE("reduce_mod_lattice") {
  CHECK(reduce_mod_lattice(V({"5/4", "-1/3"})) == V({"1/4", "2/3"}));
  CHECK(reduce_mod_lattice(V({"0", "0"})) == V({"0", "0"}));
  CHECK(reduce_mod_lattice(V({"7/8"})) == V({"7/8"}));
}

TEST_CASE("locate_simplex on the worked 2-d example") {
  RatVec x = V({"3/10", "3/5"});
  check_cell(x, R("1/4"));
  LocatedCell loc = locate_simplex(x, R("1/4"));
  CHECK(loc.cell.base == V({"1/4", "1/2"}));
  CHECK(loc.cell.perm == std::vector<int>{1, 0});  // offsets sorted: axis 2 first
  CHECK(loc.weights[0] == R("3/5"));
  CHECK(loc.weights[1] == R("1/5"));
  CHECK(loc.weights[2] == R("1/5"));
}

TEST_CASE("locate_simplex at a lattice point puts weight 1 on the base") {
  RatVec u = V({"1/2", "3/4"});
  LocatedCell loc = locate_simplex(u, R("1/4"));
  CHECK(loc.cell.base == u);
  CHECK(loc.weights[0] == Rational(1));
  for (size_t k = 1; k < loc.weights.size(); ++k) CHECK(loc.weights[k] == Rational(0));
  // Tie-break: equal (zero) offsets keep ascending coordinate order.
  CHECK(loc.cell.perm == std::vector<int>{0, 1});
}

TEST_CASE("locate_simplex 1-d midpoint") {
  LocatedCell loc = locate_simplex(V({"3/8"}), R("1/4"));
  CHECK(loc.cell.base == V({"1/4"}));
  CHECK(loc.weights[0] == R("1/2"));
  CHECK(loc.weights[1] == R("1/2"));
}

TEST_CASE("locate_simplex is exact on random points") {
  Rng rng(42);
  for (int n : {1, 2, 3}) {
    for (int i = 0; i < 400; ++i) {
      RatVec x = rng.unit_vector(n, 1000);
      check_cell(x, R("1/4"));
      check_cell(x, R("1/7"));
    }
  }
}

TEST_CASE("locate_simplex commutes with lattice translation") {
  Rng rng(43);
  for (int i = 0; i < 200; ++i) {
    RatVec x = rng.unit_vector(2, 500);
    RatVec z = rng.lattice_vector(2, 3);
    LocatedCell a = locate_simplex(x, R("1/4"));
    LocatedCell c = locate_simplex(x + z, R("1/4"));
    CHECK(c.cell.base == a.cell.base + z);
    CHECK(c.cell.perm == a.cell.perm);
    CHECK(c.weights == a.weights);
  }
}

TEST_CASE("coverage: location succeeds on a dense random sample") {
  Rng rng(44);
  for (int i = 0; i < 10000; ++i) {
    RatVec x = rng.unit_vector(2, 10000);
    LocatedCell loc = locate_simplex(x, R("1/5"));
    Rational sum(0);
    for (const auto& w : loc.weights) sum += w;
    REQUIRE(sum == Rational(1));
  }
}

TEST_CASE("grid_points enumerates row-major") {
  GridPoints g(2, R("1/2"));
  std::vector<RatVec> pts(g.begin(), g.end());
  REQUIRE(pts.size() == 4);
  CHECK(pts[0] == V({"0", "0"}));
  CHECK(pts[1] == V({"0", "1/2"}));
  CHECK(pts[2] == V({"1/2", "0"}));
  CHECK(pts[3] == V({"1/2", "1/2"}));

  GridPoints g1(1, R("1/4"));
  std::vector<RatVec> pts1(g1.begin(), g1.end());
  REQUIRE(pts1.size() == 4);
  CHECK(pts1[3] == V({"3/4"}));

  CHECK(grid_point_count(3, R("1/2")) == 8);
}

TEST_CASE("grid_points budget guard") {
  CHECK_THROWS_AS(grid_point_count(3, R("1/1000"), 1'000'000), BudgetError);
  CHECK_THROWS_AS(GridPoints(2, R("1/100000")), BudgetError);
}

TEST_CASE("locate_simplex rejects non-unit-fraction delta") {
  CHECK_THROWS_AS(locate_simplex(V({"1/2"}), R("2/3")), ConstructionError);
}
