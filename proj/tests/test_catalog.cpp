#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gjext/catalog.hpp"
#include "gjext/rng.hpp"
#include "test_util.hpp"

using namespace gjext;
using gjext::test::R;
using gjext::test::V;

namespace {

GridFunction gmic_grid_quarters() {
  // 0, 1/3, 2/3, 1 on U_{1/4}, b = 3/4.
  return GridFunction(1, R("1/4"), V({"3/4"}), {R("0"), R("1/3"), R("2/3"), R("1")});
}

}  // namespace

TEST_CASE("gmic values and registration") {
  MinimalFunctionSpec spec = gmic(R("3/4"));
  CHECK(spec.n == 1);
  CHECK(spec.eval(V({"3/8"})) == R("1/2"));
  CHECK(spec.eval(V({"3/4"})) == Rational(1));  // (C2) at x = 0
  CHECK(spec.eval(V({"0"})) == Rational(0));    // (C1)
  CHECK(spec.eval(V({"9/8"})) == spec.eval(V({"1/8"})));
  CHECK(*spec.lipschitz == Rational(4));
  CHECK(*spec.native_delta == R("1/8"));
  CHECK_THROWS_AS(gmic(Rational(0)), ConstructionError);
  CHECK_THROWS_AS(gmic(Rational(1)), ConstructionError);
  CHECK_THROWS_AS(gmic(R("5/4")), ConstructionError);
}

TEST_CASE("nd_gauge_minimal in two dimensions") {
  MinimalFunctionSpec spec = nd_gauge_minimal(V({"3/4", "1/2"}), R("1/4"));
  CHECK(spec.eval(V({"0", "0"})) == Rational(0));
  CHECK(spec.eval(V({"2", "-3"})) == Rational(0));
  CHECK(spec.eval(V({"3/4", "1/2"})) == Rational(1));
  CHECK(*spec.lipschitz == Rational(4));  // delta3 * max ||g||_1 = (1/4)*16

  // Gradient census: exactly the three scaled duals.
  GaugeSimplex G = build_gauge(V({"3/4", "1/2"}), R("1/4"));
  std::vector<RatVec> expected;
  for (const auto& gi : G.g) expected.push_back(R("1/4") * gi);
  CertOptions opt;
  opt.probes = 1000;
  opt.census_radius = R("1/32");
  std::vector<RatVec> realized;
  Certificate census = slope_census(spec.as_expr(), expected, opt, &realized);
  CHECK(census.verdict == Verdict::Pass);
  CHECK(realized.size() == 3);
}

TEST_CASE("convex combinations") {
  MinimalFunctionSpec f = gmic(R("3/4"));
  MinimalFunctionSpec g = nd_gauge_minimal(V({"3/4"}), R("1/8"));
  Rng rng(31);

  MinimalFunctionSpec all_f = convex_combination(f, g, Rational(1));
  MinimalFunctionSpec all_g = convex_combination(f, g, Rational(0));
  MinimalFunctionSpec half = convex_combination(f, g, R("1/2"));
  for (int i = 0; i < 100; ++i) {
    RatVec x = rng.unit_vector(1, 499);
    CHECK(all_f.eval(x) == f.eval(x));
    CHECK(all_g.eval(x) == g.eval(x));
    CHECK(half.eval(x) == (f.eval(x) + g.eval(x)) / Rational(2));
  }
  CHECK(*half.lipschitz == (*f.lipschitz + *g.lipschitz) / Rational(2));

  // Registration of the mixture runs the full certificate.
  CertOptions opt;
  MinimalityReport rep = minimality_certificate(half.as_expr(), half.b, opt);
  CHECK(rep.verdict() == Verdict::Pass);

  MinimalFunctionSpec other_b = gmic(R("1/2"));
  CHECK_THROWS_AS(convex_combination(f, other_b, R("1/2")), ConstructionError);
  CHECK_THROWS_AS(convex_combination(f, g, Rational(2)), ConstructionError);
}

TEST_CASE("from_grid registers a valid table") {
  MinimalFunctionSpec spec = from_grid(gmic_grid_quarters(), "golden-gmic");
  CHECK(spec.native_delta == R("1/4"));
  CHECK(*spec.lipschitz == Rational(4));
  CHECK(spec.eval(V({"3/8"})) == R("1/2"));
}

TEST_CASE("from_grid rejects a negative vertex with a C1 witness") {
  GridFunction bad(1, R("1/4"), V({"3/4"}), {R("1/2"), R("1/3"), R("2/3"), R("1")});
  try {
    from_grid(bad, "bad-c1");
    FAIL("registration should have thrown");
  } catch (const CertificateError& e) {
    std::string msg = e.what();
    CHECK(msg.find("C1") != std::string::npos);
  }
}

TEST_CASE("from_grid rejects a symmetry break with the witness pair") {
  GridFunction bad(1, R("1/4"), V({"3/4"}), {R("0"), R("1/2"), R("2/3"), R("1")});
  try {
    from_grid(bad, "bad-c2");
    FAIL("registration should have thrown");
  } catch (const CertificateError& e) {
    std::string msg = e.what();
    CHECK(msg.find("C2") != std::string::npos);
    CHECK(msg.find("x =") != std::string::npos);
    CHECK(msg.find("y =") != std::string::npos);
  }
}

TEST_CASE("nd_gauge_minimal registers in three dimensions") {
  RegistrationOptions opts;
  opts.resolution = R("1/8");
  opts.probes = 50;
  MinimalFunctionSpec spec = nd_gauge_minimal(V({"3/4", "1/2", "1/4"}), R("1/8"), opts);
  CHECK(spec.eval(V({"0", "0", "0"})) == Rational(0));
  CHECK(spec.eval(V({"3/4", "1/2", "1/4"})) == Rational(1));
  Rng rng(34);
  for (int i = 0; i < 200; ++i) {
    RatVec x = rng.unit_vector(3, 500);
    CHECK(spec.eval(x) + spec.eval(spec.b - x) == Rational(1));
  }
}

TEST_CASE("registered specs satisfy the minimality probes exactly") {
  for (const MinimalFunctionSpec& spec : {gmic(R("3/4")), nd_gauge_minimal(V({"3/4", "1/2"}), R("1/4"))}) {
    Rng rng(33);
    for (int i = 0; i < 20; ++i) CHECK(spec.eval(rng.lattice_vector(spec.n, 4)) == Rational(0));
    for (int i = 0; i < 1000; ++i) {
      RatVec x = rng.unit_vector(spec.n, 2000);
      CHECK(spec.eval(x) + spec.eval(spec.b - x) == Rational(1));
    }
    for (int i = 0; i < 10000; ++i) {
      RatVec x = rng.unit_vector(spec.n, 2000);
      RatVec y = rng.unit_vector(spec.n, 2000);
      CHECK((spec.eval(x) + spec.eval(y) - spec.eval(x + y)).sign() >= 0);
    }
  }
}

TEST_CASE("nd_gauge_minimal passes the exhaustive grid sweep at 1/24") {
  MinimalFunctionSpec spec = nd_gauge_minimal(V({"3/4", "1/2"}), R("1/4"));
  CertOptions opt;
  opt.resolution = R("1/24");
  opt.probes = 200;
  MinimalityReport rep = minimality_certificate(spec.as_expr(), spec.b, opt);
  CHECK(rep.verdict() == Verdict::Pass);
  CHECK(rep.subadditive.mode == CertMode::ExactGrid);
  CHECK(rep.subadditive.extremal_slack->sign() >= 0);
}

TEST_CASE("resolve_named_spec") {
  CHECK(resolve_named_spec("gmic:3/4").name == "gmic:3/4");
  CHECK(resolve_named_spec("gauge:3/4,1/2:1/4").n == 2);
  CHECK_THROWS_AS(resolve_named_spec("nope:1"), UsageError);
  CHECK_THROWS_AS(resolve_named_spec("gauge:3/4"), UsageError);
  CHECK(catalog_entries().size() >= 3);
}
