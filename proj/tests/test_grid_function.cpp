#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gjext/gauge.hpp"
#include "gjext/grid_function.hpp"
#include "gjext/rng.hpp"
#include "test_util.hpp"

using namespace gjext;
using gjext::test::R;
using gjext::test::V;

namespace {

// The classical two-slope formula, written out independently of the
// catalog module.
Rational gmic_formula(const Rational& b, const Rational& x) {
  Rational t = x.frac();
  if (t <= b) return t / b;
  return (Rational(1) - t) / (Rational(1) - b);
}

GridFunction gmic_grid(const Rational& b, const Rational& delta) {
  return GridFunction::interpolate_from_samples([&](const RatVec& u) { return gmic_formula(b, u[0]); }, 1, delta,
                                                RatVec{b});
}

}  // namespace

TEST_CASE("interpolation samples the source at grid points") {
  GridFunction g = gmic_grid(R("3/4"), R("1/4"));
  // Oracle values straight from the formula: 0, 1/3, 2/3, 1.
  CHECK(g.values() == std::vector<Rational>{R("0"), R("1/3"), R("2/3"), R("1")});
  for (const RatVec& u : GridPoints(1, R("1/4"))) CHECK(g.eval(u) == gmic_formula(R("3/4"), u[0]));
}

TEST_CASE("eval interpolates barycentrically") {
  GridFunction g = gmic_grid(R("3/4"), R("1/4"));
  CHECK(g.eval(V({"3/8"})) == R("1/2"));  // midpoint of 1/3 and 2/3
  CHECK(g.eval(V({"3/4"})) == Rational(1));
  CHECK(g.eval(V({"0"})) == Rational(0));
}

TEST_CASE("constant source gives a constant grid") {
  GridFunction g =
      GridFunction::interpolate_from_samples([](const RatVec&) { return Rational(0); }, 2, R("1/4"), V({"1/2", "1/4"}));
  for (const auto& v : g.values()) CHECK(v == Rational(0));
  CHECK(g.lipschitz_constant() == Rational(0));
}

TEST_CASE("periodicity is exact") {
  GridFunction g = gmic_grid(R("3/4"), R("1/8"));
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    RatVec x = rng.unit_vector(1, 1000);
    RatVec z = rng.lattice_vector(1, 4);
    CHECK(g.eval(x + z) == g.eval(x));
  }
}

TEST_CASE("lipschitz constant of the two-slope grid") {
  // Slopes are 4/3 and -4; the max 1-norm is 4.
  CHECK(gmic_grid(R("3/4"), R("1/4")).lipschitz_constant() == Rational(4));
  CHECK(gmic_grid(R("3/4"), R("1/8")).lipschitz_constant() == Rational(4));
}

TEST_CASE("lipschitz constant of the pi_aux interpolant stays under the cone bound") {
  RatVec b = V({"3/4", "1/2"});
  GaugeSimplex G = build_gauge(b, R("1/4"));
  GridFunction g = GridFunction::interpolate_from_samples([&](const RatVec& u) { return pi_aux_eval(G, u); }, 2,
                                                          R("1/4"), b);
  // Exact cell sweep; the interpolant averages the cone gradients, so its
  // constant lands strictly below delta3 * max ||g||_1 = 4.
  CHECK(g.lipschitz_constant() == R("16/5"));
  CHECK(g.lipschitz_constant() <= R("1/4") * G.max_dual_l1());
}

TEST_CASE("lipschitz constant in 2-d") {
  // f(u) = frac-linear interpolation of a product-ish sample; compare with a
  // direct sweep over all cells and permutations done by hand for p = 2:
  // values 0, 1/2, 1/2, 1 on the 2x2 grid; every cell path has |a|_1 = 2.
  std::vector<Rational> vals{R("0"), R("1/2"), R("1/2"), R("0")};
  GridFunction g(2, R("1/2"), V({"1/2", "1/2"}), vals);
  CHECK(g.lipschitz_constant() == Rational(2));
}

TEST_CASE("interpolation exactness property") {
  Rng rng(9);
  GridFunction g = gmic_grid(R("2/5"), R("1/10"));
  GridFunction h = GridFunction::interpolate_from_samples([&](const RatVec& u) { return g.eval(u); }, 1, R("1/10"),
                                                          RatVec{R("2/5")});
  for (const RatVec& u : GridPoints(1, R("1/10"))) CHECK(h.eval(u) == g.eval(u));
  for (int i = 0; i < 200; ++i) {
    RatVec x = rng.unit_vector(1, 997);
    CHECK(h.eval(x) == g.eval(x));
  }
}

TEST_CASE("construction validates b and value count") {
  CHECK_THROWS_AS(GridFunction(1, R("1/4"), V({"1/3"}), std::vector<Rational>(4)), ConstructionError);
  CHECK_THROWS_AS(GridFunction(1, R("1/4"), V({"1/4"}), std::vector<Rational>(3)), ConstructionError);
  CHECK_THROWS_AS(GridFunction(1, R("1/4"), V({"5/4"}), std::vector<Rational>(4)), ConstructionError);
}
