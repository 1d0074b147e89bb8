#include "gjext/catalog.hpp"

#include "gjext/errors.hpp"

namespace gjext {

namespace {

std::string format_witness(const Witness& w) {
  std::string s = "x = " + w.x.str();
  if (w.y) s += ", y = " + w.y->str();
  for (const auto& [name, value] : w.values) s += ", " + name + " = " + value.str();
  if (!w.note.empty()) s += " (" + w.note + ")";
  return s;
}

void register_verify(const MinimalFunctionSpec& spec, const RegistrationOptions& opts) {
  CertOptions cert;
  cert.resolution = opts.resolution.value_or(spec.native_delta.value_or(Rational(1, 16)));
  cert.probes = opts.probes;
  cert.seed = opts.seed;
  cert.budget_pairs = opts.budget_pairs;
  MinimalityReport rep = minimality_certificate(spec.as_expr(), spec.b, cert);
  for (const Certificate* c : {&rep.c1, &rep.c2, &rep.subadditive}) {
    if (c->verdict == Verdict::Pass) continue;
    std::string msg = "registration of '" + spec.name + "' failed: " + to_string(c->property) + " " +
                      to_string(c->verdict);
    if (c->witness) msg += " at " + format_witness(*c->witness);
    throw CertificateError(msg);
  }
}

void require_b_valid(const RatVec& b) {
  if (b.dim() < 1 || b.is_zero()) throw ConstructionError("b must be a nonzero point of [0,1)^n");
  for (int i = 0; i < b.dim(); ++i)
    if (b[i].sign() < 0 || b[i] >= Rational(1)) throw ConstructionError("b" + b.str() + " not in [0,1)^n");
}

}  // namespace

PwlExpr MinimalFunctionSpec::as_expr() const {
  if (expr) return *expr;
  return PwlExpr::oracle_leaf(name, n, eval, lipschitz, knots_1d);
}

MinimalFunctionSpec gmic(const Rational& b, const RegistrationOptions& opts) {
  if (!(b > Rational(0) && b < Rational(1))) throw ConstructionError("gmic needs b strictly inside (0,1)");
  MinimalFunctionSpec spec;
  spec.name = "gmic:" + b.str();
  spec.n = 1;
  spec.b = RatVec{b};
  spec.eval = [b](const RatVec& x) {
    Rational t = x[0].frac();
    if (t <= b) return t / b;
    return (Rational(1) - t) / (Rational(1) - b);
  };
  spec.lipschitz = max(Rational(1) / b, Rational(1) / (Rational(1) - b));
  spec.native_delta = Rational(Int(1), Int(2) * b.den());
  spec.knots_1d = std::vector<Rational>{Rational(0), b};
  register_verify(spec, opts);
  return spec;
}

MinimalFunctionSpec nd_gauge_minimal(const RatVec& b, const Rational& delta3, const RegistrationOptions& opts) {
  require_b_valid(b);
  GaugeSimplex G = build_gauge(b, delta3);
  MinimalFunctionSpec spec;
  spec.name = "gauge:" + b.str() + ":" + delta3.str();
  spec.n = b.dim();
  spec.b = b;
  spec.lipschitz = delta3 * G.max_dual_l1();
  spec.expr = PwlExpr::pi_aux(G);
  spec.eval = [G](const RatVec& x) { return pi_aux_eval(G, x); };
  register_verify(spec, opts);
  return spec;
}

MinimalFunctionSpec convex_combination(const MinimalFunctionSpec& f, const MinimalFunctionSpec& g, const Rational& t,
                                       const RegistrationOptions& opts) {
  if (f.n != g.n) throw ConstructionError("convex_combination: dimension mismatch");
  if (f.b != g.b) throw ConstructionError("convex_combination: specs disagree on b");
  if (t.sign() < 0 || t > Rational(1)) throw ConstructionError("convex_combination needs t in [0,1]");

  MinimalFunctionSpec spec;
  spec.name = "mix:" + t.str() + ":" + f.name + ":" + g.name;
  spec.n = f.n;
  spec.b = f.b;
  EvalFn fe = f.eval, ge = g.eval;
  Rational s = Rational(1) - t;
  spec.eval = [fe, ge, t, s](const RatVec& x) { return t * fe(x) + s * ge(x); };
  if (f.lipschitz && g.lipschitz) spec.lipschitz = t * *f.lipschitz + s * *g.lipschitz;
  if (f.native_delta && g.native_delta) {
    Int pf = unit_fraction_den(*f.native_delta);
    Int pg = unit_fraction_den(*g.native_delta);
    spec.native_delta = unit_fraction(lcm(pf, pg));
  }
  if (f.knots_1d && g.knots_1d) {
    std::set<Rational> knots(f.knots_1d->begin(), f.knots_1d->end());
    knots.insert(g.knots_1d->begin(), g.knots_1d->end());
    spec.knots_1d = std::vector<Rational>(knots.begin(), knots.end());
  }
  spec.expr = PwlExpr::affine_combo(t, f.as_expr(), s, g.as_expr(), Rational(0));
  register_verify(spec, opts);
  return spec;
}

MinimalFunctionSpec from_grid(const GridFunction& grid, const std::string& name, const RegistrationOptions& opts) {
  require_b_valid(grid.b());
  MinimalFunctionSpec spec;
  spec.name = name;
  spec.n = grid.n();
  spec.b = grid.b();
  spec.native_delta = grid.delta();
  spec.lipschitz = grid.lipschitz_constant();
  spec.expr = PwlExpr::grid_leaf(grid);
  GridFunction copy = grid;
  spec.eval = [copy](const RatVec& x) { return copy.eval(x); };
  register_verify(spec, opts);
  return spec;
}

std::vector<CatalogEntry> catalog_entries() {
  return {
      {"gmic", "gmic:<b>", "1-d two-slope function with breakpoint b, e.g. gmic:3/4"},
      {"gauge", "gauge:<b1,b2,...>:<delta3>", "gauge-derived (n+1)-slope minimal function, e.g. gauge:3/4,1/2:1/4"},
      {"grid file", "<path>", "grid-function document; registered after certificate checks"},
  };
}

MinimalFunctionSpec resolve_named_spec(const std::string& text, const RegistrationOptions& opts) {
  auto parse_vec = [](const std::string& s) {
    std::vector<Rational> out;
    size_t start = 0;
    while (start <= s.size()) {
      size_t comma = s.find(',', start);
      std::string tok = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      out.push_back(Rational::parse(tok));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return RatVec(out);
  };
  if (text.rfind("gmic:", 0) == 0) return gmic(Rational::parse(text.substr(5)), opts);
  if (text.rfind("gauge:", 0) == 0) {
    std::string rest = text.substr(6);
    size_t colon = rest.rfind(':');
    if (colon == std::string::npos) throw UsageError("gauge spec needs gauge:<b...>:<delta3>");
    return nd_gauge_minimal(parse_vec(rest.substr(0, colon)), Rational::parse(rest.substr(colon + 1)), opts);
  }
  throw UsageError("unknown spec '" + text + "'; expected gmic:<b>, gauge:<b...>:<delta3>, or a grid file path");
}

}  // namespace gjext
