#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "gjext/expr.hpp"
#include "gjext/probes.hpp"
#include "gjext/rng.hpp"
#include "test_util.hpp"

using namespace gjext;
using gjext::test::R;
using gjext::test::V;

namespace {

Rational gmic_formula(const Rational& b, const Rational& x) {
  Rational t = x.frac();
  if (t <= b) return t / b;
  return (Rational(1) - t) / (Rational(1) - b);
}

PwlExpr gmic_leaf(const Rational& b, const Rational& delta) {
  return PwlExpr::grid_leaf(GridFunction::interpolate_from_samples(
      [&](const RatVec& u) { return gmic_formula(b, u[0]); }, 1, delta, RatVec{b}));
}

// Independent minimization over a wide candidate window; oracle for the
// box-restricted fill-in evaluation.
Rational brute_fill(const PwlExpr& base, const GaugeSimplex& G, const Rational& scale, const Rational& delta4,
                    const RatVec& x) {
  REQUIRE(G.n == 1);
  long lo = static_cast<long>(((x[0] - Rational(3)) / delta4).floor().get_si());
  long hi = static_cast<long>(((x[0] + Rational(3)) / delta4).ceil().get_si());
  Rational best;
  bool first = true;
  for (long k = lo; k <= hi; ++k) {
    RatVec u{Rational(k) * delta4};
    Rational v = base.eval(u) + scale * gauge_eval(G, x - u);
    if (first || v < best) {
      best = v;
      first = false;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("affine combo evaluates and combines Lipschitz data") {
  PwlExpr f = gmic_leaf(R("3/4"), R("1/4"));
  PwlExpr g = gmic_leaf(R("3/4"), R("1/8"));
  PwlExpr combo = PwlExpr::affine_combo(R("7/12"), f, R("5/12"), g, R("1/36"));
  RatVec x = V({"1/3"});
  CHECK(combo.eval(x) == R("7/12") * f.eval(x) + R("5/12") * g.eval(x) + R("1/36"));
  REQUIRE(combo.lipschitz().has_value());
  CHECK(*combo.lipschitz() == R("7/12") * Rational(4) + R("5/12") * Rational(4));
}

TEST_CASE("fill-in equals the brute-force lattice min") {
  GaugeSimplex G = build_gauge(V({"3/4"}), R("1/8"));
  PwlExpr base = gmic_leaf(R("3/4"), R("1/8"));
  const Rational scale = R("5/24");
  const Rational d4 = R("1/16");
  PwlExpr fill = PwlExpr::fill_in(base, G, scale, d4);
  Rng rng(21);
  for (int i = 0; i < 250; ++i) {
    RatVec x = rng.unit_vector(1, 997);
    CHECK(fill.eval(x) == brute_fill(base, G, scale, d4, x));
  }
  // Periodicity comes from the lattice structure of the candidate set.
  for (int i = 0; i < 50; ++i) {
    RatVec x = rng.unit_vector(1, 97);
    RatVec z = rng.lattice_vector(1, 3);
    CHECK(fill.eval(x + z) == fill.eval(x));
  }
}

TEST_CASE("fill-in restricted to the grid reproduces the base") {
  GaugeSimplex G = build_gauge(V({"3/4"}), R("1/8"));
  PwlExpr base = gmic_leaf(R("3/4"), R("1/8"));
  PwlExpr fill = PwlExpr::fill_in(base, G, R("5/24"), R("1/16"));
  for (const RatVec& u : GridPoints(1, R("1/16"))) {
    CHECK(fill.eval(u) == base.eval(u));
  }
  Rng rng(22);
  for (int i = 0; i < 400; ++i) {
    RatVec x = rng.unit_vector(1, 499);
    CHECK(fill.eval(x) >= base.eval(x));
  }
  CHECK(*fill.lipschitz() == R("5/24") * Rational(32));
}

TEST_CASE("symmetrize switches branches on comb vs eta") {
  // Mechanical check of the three branches with simple closed forms.
  auto mk = [](const char* name, Rational (*fn)(const Rational&)) {
    return PwlExpr::oracle_leaf(name, 1,
                                [fn](const RatVec& x) { return fn(x[0]); }, Rational(4),
                                std::vector<Rational>{Rational(0)});
  };
  PwlExpr comb = mk("comb", +[](const Rational& x) { return x.frac(); });
  PwlExpr fill = mk("fill", +[](const Rational& x) { return x.frac() + Rational(1, 8); });
  PwlExpr eta = mk("eta", +[](const Rational&) { return Rational(1, 2); });
  RatVec b = V({"3/4"});
  PwlExpr sym = PwlExpr::symmetrize(comb, fill, eta, b);

  // comb(1/4) = 1/4 < 1/2: min(fill, eta) = min(3/8, 1/2).
  CHECK(sym.eval(V({"1/4"})) == R("3/8"));
  // comb(7/8) = 7/8 > 1/2: 1 - min(fill(b-x), eta(b-x)) with b-x = -1/8.
  CHECK(sym.eval(V({"7/8"})) == Rational(1) - min(R("7/8") + R("1/8"), R("1/2")));
  // comb(1/2) = 1/2 = eta: eta branch.
  CHECK(sym.eval(V({"1/2"})) == R("1/2"));
}

TEST_CASE("probe_gradient on the two-slope grid") {
  PwlExpr f = gmic_leaf(R("3/4"), R("1/4"));
  auto res = probe_gradient(f, V({"1/8"}), R("1/16"));
  REQUIRE(res.sample.has_value());
  CHECK(res.sample->gradient == V({"4/3"}));
  CHECK(res.sample->cell_radius.sign() > 0);

  auto right = probe_gradient(f, V({"7/8"}), R("1/16"));
  REQUIRE(right.sample.has_value());
  CHECK(right.sample->gradient == V({"-4"}));

  // A breakpoint never certifies as affine.
  auto at_kink = probe_gradient(f, V({"3/4"}), R("1/16"), 20);
  CHECK_FALSE(at_kink.sample.has_value());
  CHECK(at_kink.halvings == 20);
}

TEST_CASE("probe_gradient on an affine oracle returns its gradient anywhere") {
  PwlExpr f = PwlExpr::oracle_leaf(
      "affine", 2, [](const RatVec& x) { return Rational(2) * x[0] - Rational(3) * x[1] + Rational(1); }, Rational(5),
      std::nullopt);
  Rng rng(23);
  for (int i = 0; i < 40; ++i) {
    auto res = probe_gradient(f, rng.unit_vector(2, 100), R("1/8"));
    REQUIRE(res.sample.has_value());
    CHECK(res.sample->gradient == V({"2", "-3"}));
    CHECK(res.halvings == 0);
  }
}

TEST_CASE("probe_gradient sample reproduces evals inside its ball") {
  GaugeSimplex G = build_gauge(V({"3/4", "1/2"}), R("1/4"));
  PwlExpr aux = PwlExpr::pi_aux(G);
  Rng rng(24);
  int certified = 0;
  for (int i = 0; i < 60; ++i) {
    RatVec x = rng.unit_vector(2, 211);
    auto res = probe_gradient(aux, x, R("1/16"));
    if (!res.sample) continue;
    ++certified;
    const auto& s = *res.sample;
    Rational fx = aux.eval(x);
    for (int j = 0; j < 10; ++j) {
      // Random rational point inside the certified ball.
      RatVec p = x;
      for (int ax = 0; ax < 2; ++ax) {
        Rational t(static_cast<long>(rng.below(2001)) - 1000, 1000);
        p[ax] += t * s.cell_radius;
      }
      CHECK(aux.eval(p) == fx + dot(s.gradient, p - x));
    }
  }
  CHECK(certified >= 50);
}

TEST_CASE("eta gradients live in the scaled dual set") {
  GaugeSimplex G = build_gauge(V({"3/4"}), R("1/8"));
  TauChoice tau = choose_tau(V({"3/4"}), R("1/8"), R("1/2"));
  PwlExpr eta = PwlExpr::eta_aux(G, tau, R("1/2"));
  const Rational scale = R("5/24");
  std::set<RatVec> allowed{scale * G.g[0], scale * G.g[1]};
  Rng rng(25);
  int seen = 0;
  for (int i = 0; i < 200; ++i) {
    auto res = probe_gradient(eta, rng.unit_vector(1, 4093), R("1/64"));
    if (!res.sample) continue;
    ++seen;
    CHECK(allowed.count(res.sample->gradient) == 1);
  }
  CHECK(seen >= 150);
}

TEST_CASE("sup_distance brackets") {
  PwlExpr f = gmic_leaf(R("3/4"), R("1/4"));
  SupDistance same = sup_distance(f, f, R("1/16"), Rational(4), Rational(4));
  CHECK(same.lower == Rational(0));
  CHECK(same.upper == Rational(4 + 4) * R("1/32"));

  PwlExpr g = PwlExpr::affine_combo(Rational(1), f, Rational(0), f, R("1/10"));
  SupDistance off = sup_distance(f, g, R("1/16"), Rational(4), Rational(4));
  CHECK(off.lower == R("1/10"));

  // Soundness: two leaves on a common grid attain their true sup at a
  // vertex, which the probe grid includes.
  PwlExpr h = gmic_leaf(R("1/4"), R("1/4"));
  Rational true_sup(0);
  for (const RatVec& u : GridPoints(1, R("1/4")))
    true_sup = max(true_sup, (f.eval(u) - h.eval(u)).abs());
  SupDistance d = sup_distance(f, h, R("1/4"), Rational(4), Rational(4));
  CHECK(d.lower >= true_sup);
  CHECK(true_sup <= d.upper);
  SupDistance fine = sup_distance(f, h, R("1/64"), Rational(4), Rational(4));
  CHECK(fine.lower <= d.upper);
  CHECK(d.lower <= fine.upper);
}

TEST_CASE("breakpoint supersets") {
  PwlExpr f = gmic_leaf(R("3/4"), R("1/4"));
  auto bp = f.breakpoints_1d();
  for (const char* s : {"0", "1/4", "1/2", "3/4"})
    CHECK(std::find(bp.begin(), bp.end(), R(s)) != bp.end());

  PwlExpr pd = PwlExpr::pi_delta3(build_gauge(V({"3/4"}), R("1/8")));
  auto bpd = pd.breakpoints_1d();
  CHECK(std::find(bpd.begin(), bpd.end(), R("3/32")) != bpd.end());
  CHECK(std::find(bpd.begin(), bpd.end(), R("31/32")) != bpd.end());

  PwlExpr c = PwlExpr::oracle_leaf("const", 1, [](const RatVec&) { return Rational(1, 2); }, Rational(0),
                                   std::vector<Rational>{Rational(0)});
  CHECK(c.breakpoints_1d() == std::vector<Rational>{Rational(0)});
}

TEST_CASE("breakpoint superset brackets every kink (midpoint affineness)") {
  GaugeSimplex G = build_gauge(V({"3/4"}), R("1/8"));
  PwlExpr base = gmic_leaf(R("3/4"), R("1/8"));
  PwlExpr fill = PwlExpr::fill_in(base, G, R("5/24"), R("1/16"));
  auto bp = fill.breakpoints_1d();
  REQUIRE(bp.size() >= 2);
  for (size_t i = 0; i < bp.size(); ++i) {
    Rational l = bp[i];
    Rational r = (i + 1 < bp.size()) ? bp[i + 1] : bp[0] + Rational(1);
    Rational mid = (l + r) / Rational(2);
    CHECK(fill.eval(RatVec{mid}) == (fill.eval(RatVec{l}) + fill.eval(RatVec{r})) / Rational(2));
  }
}

TEST_CASE("dimension guards") {
  PwlExpr f = gmic_leaf(R("3/4"), R("1/4"));
  GaugeSimplex G2 = build_gauge(V({"3/4", "1/2"}), R("1/4"));
  CHECK_THROWS_AS(PwlExpr::pi_aux(G2).breakpoints_1d(), ConstructionError);
  CHECK_THROWS_AS(PwlExpr::fill_in(f, G2, Rational(1), R("1/4")), ConstructionError);
  CHECK_THROWS_AS(probe_gradient(f, V({"1/2", "1/2"}), R("1/4")), ConstructionError);
}
