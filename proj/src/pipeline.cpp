#include "gjext/pipeline.hpp"

#include <algorithm>

#include "gjext/errors.hpp"
#include "gjext/rng.hpp"

namespace gjext {

namespace {

Rational clamp_eps(const Rational& eps, bool* clamped) {
  if (eps.sign() <= 0) throw ConstructionError("eps must be positive");
  if (eps > Rational(1, 2)) {
    *clamped = true;
    return Rational(1, 2);
  }
  *clamped = false;
  return eps;
}

/// min over z in Z^n of ||b - z||_inf (per-axis rounding).
Rational lattice_distance(const RatVec& b) {
  Rational m(0);
  for (int i = 0; i < b.dim(); ++i) {
    Rational fr = b[i].frac();
    m = max(m, min(fr, Rational(1) - fr));
  }
  return m;
}

void record(PipelineParams& p, const std::string& name, bool holds, const std::string& detail) {
  p.inequalities.push_back({name, holds, detail});
}

Rational input_modulus(const MinimalFunctionSpec& spec) {
  if (spec.lipschitz) return *spec.lipschitz;
  if (spec.native_delta) {
    GridFunction g = GridFunction::interpolate_from_samples(spec.eval, spec.n, *spec.native_delta, spec.b);
    return g.lipschitz_constant();
  }
  throw ConstructionError("spec '" + spec.name + "' has neither a Lipschitz constant nor a native grid");
}

GridFunction interpolate_stage(const MinimalFunctionSpec& spec, const Rational& delta1, const RatVec& b) {
  return GridFunction::interpolate_from_samples(spec.eval, spec.n, delta1, b);
}

GridFunction flatten_stage(const GridFunction& pwl, const Rational& delta2, const RatVec& b) {
  if (!(Rational(4) * delta2 < lattice_distance(b)))
    throw ConstructionError("flattening balls overlap: need 4*delta2 < min_z ||b-z||_inf = " +
                            lattice_distance(b).str());
  auto near_family = [&](const RatVec& u, const RatVec& center) {
    for (int i = 0; i < u.dim(); ++i) {
      Rational fr = (u[i] - center[i]).frac();
      if (min(fr, Rational(1) - fr) > delta2) return false;
    }
    return true;
  };
  EvalFn source = [&](const RatVec& u) {
    if (near_family(u, RatVec::zero(u.dim()))) return Rational(0);
    if (near_family(u, b)) return Rational(1);
    return pwl.eval(u);
  };
  return GridFunction::interpolate_from_samples(source, pwl.n(), delta2, b);
}

/// Records the full inequality ledger for already-fixed deltas. L_tilde is
/// the value used downstream (formula or recomputed, per mode).
void record_ledger(PipelineParams& p, const GaugeSimplex& G) {
  const Rational eps36 = p.eps / Rational(36);
  const int n = p.n;
  const Rational Ltilde = p.lipschitz_tilde;
  const Rational L = p.lipschitz_pwl;

  auto ineq = [&](const std::string& name, const Rational& lhs, const Rational& rhs, bool strict) {
    bool holds = strict ? lhs < rhs : lhs <= rhs;
    record(p, name, holds, lhs.str() + (strict ? " < " : " <= ") + rhs.str());
  };

  ineq("delta2_flattening_margin", p.delta2, Rational(1) / (Rational(4 * n) * L), true);
  ineq("delta2_modulus_margin", p.delta2, eps36 / (Rational(2) * L), true);
  ineq("delta2_ball_disjointness", Rational(4) * p.delta2, lattice_distance(p.b), true);
  ineq("delta3_vs_tilde_lipschitz", p.delta3,
       (Rational(5) * p.eps) / (Rational(12) * Ltilde * Rational(n + 1)), false);
  ineq("delta3_vs_delta2", p.delta3, p.delta2 / Rational(2 * (n + 1)), false);
  ineq("delta3_vs_delta2_eps", p.delta3,
       (Rational(5) * p.delta2 * p.eps) / (Rational(12) * Rational(n + 1)), false);
  record(p, "delta3_lt_half", p.delta3 < Rational(1, 2), p.delta3.str() + " < 1/2");
  {
    Rational m = lattice_gauge_min(G, p.b);
    record(p, "delta3_families_disjoint", m > Rational(4), "min_z gauge(b-z) = " + m.str() + " > 4");
  }
  ineq("delta4_fill_in_margin", p.delta4,
       (p.eps / Rational(36)) / (Rational(2) * p.lipschitz_gamma + Ltilde), false);
  ineq("tau_scale", Rational(1) / Rational(p.tau.tau), (Rational(6) * p.delta3) / (Rational(5) * p.eps), false);
  {
    bool integral = true;
    for (int i = 0; i < n; ++i)
      if (!((Rational(p.tau.tau) - Rational(1)) * p.b[i]).is_integer()) integral = false;
    record(p, "tau_b_integral", integral, "(tau-1) b = " + ((Rational(p.tau.tau) - Rational(1)) * p.b).str());
  }
}

}  // namespace

std::string to_string(PipelineMode m) { return m == PipelineMode::Strict ? "strict" : "lab"; }

bool PipelineParams::all_inequalities_hold() const {
  for (const auto& r : inequalities)
    if (!r.holds) return false;
  return true;
}

const IneqRecord* PipelineParams::find(const std::string& name) const {
  for (const auto& r : inequalities)
    if (r.name == name) return &r;
  return nullptr;
}

PipelineParams choose_params_strict(const MinimalFunctionSpec& spec, const Rational& eps_in) {
  PipelineParams p;
  p.mode = PipelineMode::Strict;
  p.n = spec.n;
  p.b = spec.b;
  p.eps = clamp_eps(eps_in, &p.eps_clamped);
  const Rational eps36 = p.eps / Rational(36);
  const Int sb = lcm_of_denominators(p.b);

  // delta1: largest 1/p1 with sb | p1 and L * delta1 < eps/36 (strict: the
  // modulus bound must be strict, and PWL inputs attain L * delta exactly).
  p.lipschitz_input = input_modulus(spec);
  Int p1 = ((p.lipschitz_input / eps36) / Rational(sb)).floor() * sb + sb;
  p.delta1 = unit_fraction(p1);

  GridFunction pwl = interpolate_stage(spec, p.delta1, p.b);
  p.lipschitz_pwl = pwl.lipschitz_constant();
  const Rational L = p.lipschitz_pwl;

  // delta2 = delta1/q below min(1/(4Ln), eps36/(2L), dist/4), all strict.
  Rational m_star = min(Rational(1) / (Rational(4 * p.n) * L),
                        min(eps36 / (Rational(2) * L), lattice_distance(p.b) / Rational(4)));
  Int q2 = (p.delta1 / m_star).floor() + 1;
  p.delta2 = p.delta1 / Rational(q2);

  GridFunction tilde = flatten_stage(pwl, p.delta2, p.b);
  p.lipschitz_tilde_actual = tilde.lipschitz_constant();
  p.lipschitz_tilde_formula = Rational(4 * p.n) * L;
  p.lipschitz_tilde = p.lipschitz_tilde_formula;

  // delta3 = 1/p3 <= min of the three delta3 bounds, sb | p3, plus the
  // structural requirements delta3 < 1/2 and family disjointness.
  Rational d3_bound = min((Rational(5) * p.eps) / (Rational(12) * p.lipschitz_tilde * Rational(p.n + 1)),
                          min(p.delta2 / Rational(2 * (p.n + 1)),
                              (Rational(5) * p.delta2 * p.eps) / (Rational(12) * Rational(p.n + 1))));
  Int p3 = ((Rational(1) / d3_bound) / Rational(sb)).ceil() * sb;
  for (;;) {
    Rational d3 = unit_fraction(p3);
    if (d3 < Rational(1, 2)) {
      GaugeSimplex G = build_gauge(p.b, d3);
      if (scaled_families_disjoint(G)) break;
    }
    p3 += sb;
  }
  p.delta3 = unit_fraction(p3);
  GaugeSimplex G = build_gauge(p.b, p.delta3);
  p.lipschitz_gamma = (Rational(5) * p.eps / Rational(12)) * G.max_dual_l1();

  // delta4 = delta3/q4 <= (eps/36) / (2 L_gamma + L_tilde).
  Rational d4_bound = (p.eps / Rational(36)) / (Rational(2) * p.lipschitz_gamma + p.lipschitz_tilde);
  Int q4 = (p.delta3 / d4_bound).ceil();
  if (q4 < 1) q4 = 1;
  p.delta4 = p.delta3 / Rational(q4);

  p.tau = choose_tau(p.b, p.delta3, p.eps);

  record_ledger(p, G);
  if (!p.all_inequalities_hold()) throw ConstructionError("strict parameter selection failed its own ledger");
  return p;
}

PipelineParams choose_params_lab(const MinimalFunctionSpec& spec, const Rational& eps_in, const LabDeltas& d) {
  PipelineParams p;
  p.mode = PipelineMode::Lab;
  p.n = spec.n;
  p.b = spec.b;
  p.eps = clamp_eps(eps_in, &p.eps_clamped);

  Int p1 = unit_fraction_den(d.delta1);
  Int p2 = unit_fraction_den(d.delta2);
  Int p3 = unit_fraction_den(d.delta3);
  Int p4 = unit_fraction_den(d.delta4);
  for (int i = 0; i < p.n; ++i) {
    if (!(p.b[i] / d.delta1).is_integer())
      throw ConstructionError("b" + p.b.str() + " not in U_delta1 = U_1/" + p1.get_str());
    if (!(p.b[i] / d.delta3).is_integer())
      throw ConstructionError("b" + p.b.str() + " not in U_delta3 = U_1/" + p3.get_str());
  }
  if (p2 % p1 != 0) throw ConstructionError("delta2 must be delta1/q, got " + d.delta2.str());
  if (p4 % p3 != 0) throw ConstructionError("delta4 must be delta3/q, got " + d.delta4.str());
  if (!(d.delta3 < Rational(1, 2))) throw ConstructionError("delta3 must be below 1/2");
  p.delta1 = d.delta1;
  p.delta2 = d.delta2;
  p.delta3 = d.delta3;
  p.delta4 = d.delta4;

  p.lipschitz_input = input_modulus(spec);
  GridFunction pwl = build_pi_pwl(spec, p);
  p.lipschitz_pwl = pwl.lipschitz_constant();
  GridFunction tilde = build_pi_adjust(pwl, p);
  p.lipschitz_tilde_actual = tilde.lipschitz_constant();
  p.lipschitz_tilde_formula = Rational(4 * p.n) * p.lipschitz_pwl;
  p.lipschitz_tilde = p.lipschitz_tilde_actual;

  GaugeSimplex G = build_gauge(p.b, p.delta3);
  p.lipschitz_gamma = (Rational(5) * p.eps / Rational(12)) * G.max_dual_l1();
  p.tau = choose_tau(p.b, p.delta3, p.eps);

  record_ledger(p, G);
  return p;
}

GridFunction build_pi_pwl(const MinimalFunctionSpec& spec, const PipelineParams& params) {
  return interpolate_stage(spec, params.delta1, params.b);
}

GridFunction build_pi_adjust(const GridFunction& pwl, const PipelineParams& params) {
  return flatten_stage(pwl, params.delta2, params.b);
}

PwlExpr build_pi_comb(const GridFunction& tilde, const GaugeSimplex& G, const PipelineParams& params) {
  Rational w = Rational(5) * params.eps / Rational(6);
  return PwlExpr::affine_combo(Rational(1) - w, PwlExpr::grid_leaf(tilde), w, PwlExpr::pi_delta3(G), Rational(0));
}

PwlExpr build_fill_in(const PwlExpr& comb, const GaugeSimplex& G, const PipelineParams& params) {
  return PwlExpr::fill_in(comb, G, Rational(5) * params.eps / Rational(12), params.delta4);
}

PwlExpr build_eta(const GaugeSimplex& G, const PipelineParams& params) {
  return PwlExpr::eta_aux(G, params.tau, params.eps);
}

PwlExpr build_pi_sym(const PwlExpr& comb, const PwlExpr& fillin, const PwlExpr& eta, const RatVec& b) {
  return PwlExpr::symmetrize(comb, fillin, eta, b);
}

PipelineResult run_pipeline(const MinimalFunctionSpec& spec, const PipelineParams& params, const RunOptions& opts) {
  GridFunction pwl = build_pi_pwl(spec, params);
  GridFunction tilde = build_pi_adjust(pwl, params);
  GaugeSimplex gauge = build_gauge(params.b, params.delta3);
  PwlExpr comb = build_pi_comb(tilde, gauge, params);
  PwlExpr fill = build_fill_in(comb, gauge, params);
  PwlExpr eta = build_eta(gauge, params);
  PwlExpr sym = build_pi_sym(comb, fill, eta, params.b);

  std::vector<RatVec> expected;
  const Rational scale = Rational(5) * params.eps / Rational(12);
  for (const auto& gi : gauge.g) expected.push_back(scale * gi);

  CertOptions cert = opts.cert;
  cert.region_gauge = &gauge;
  if (!cert.census_radius) cert.census_radius = params.delta4;

  PipelineResult result{params,
                        gauge,
                        spec.as_expr(),
                        PwlExpr::grid_leaf(pwl),
                        PwlExpr::grid_leaf(tilde),
                        comb,
                        fill,
                        eta,
                        sym,
                        expected,
                        extreme_preconditions_check(sym, params.b, expected, cert),
                        {},
                        {},
                        {},
                        Rational(0),
                        Rational(0),
                        false};

  // Per-stage quick certificates: C1 where the stage vanishes on the
  // lattice, C2 where it claims symmetry.
  CertOptions quick = cert;
  quick.probes = std::min<uint64_t>(cert.probes, 200);
  const std::vector<std::pair<std::string, const PwlExpr*>> c1_stages = {
      {"pi_pwl", &result.pi_pwl}, {"pi_tilde", &result.pi_tilde}, {"pi_comb", &comb}, {"pi_fill_in", &fill}};
  for (const auto& [name, e] : c1_stages) result.stage_certificates.emplace_back(name + ":C1", check_C1(*e, quick));
  const std::vector<std::pair<std::string, const PwlExpr*>> c2_stages = {
      {"pi_pwl", &result.pi_pwl}, {"pi_tilde", &result.pi_tilde}, {"pi_comb", &comb}, {"eta_aux", &eta}};
  for (const auto& [name, e] : c2_stages)
    result.stage_certificates.emplace_back(name + ":C2", check_C2(*e, params.b, quick));

  // Ordering and range invariants.
  {
    StageInvariantReport& inv = result.invariants;
    inv.fill_ge_comb = true;
    inv.fill_eq_comb_on_grid = true;
    inv.eta_in_range = true;
    inv.tilde_in_unit = true;
    Rng rng(opts.cert.seed + 1);
    for (uint64_t i = 0; i < opts.invariant_probes && inv.fill_ge_comb; ++i) {
      RatVec x = rng.unit_vector(params.n, opts.cert.max_denominator);
      Rational fc = comb.eval(x), ff = fill.eval(x);
      if (ff < fc) {
        inv.fill_ge_comb = false;
        inv.witness = Witness{x, std::nullopt, {{"comb", fc}, {"fill", ff}}, "fill < comb"};
      }
    }
    for (const RatVec& u : GridPoints(params.n, params.delta4, opts.cert.budget_points)) {
      if (comb.eval(u) != fill.eval(u)) {
        inv.fill_eq_comb_on_grid = false;
        if (!inv.witness)
          inv.witness = Witness{u, std::nullopt, {{"comb", comb.eval(u)}, {"fill", fill.eval(u)}},
                                "fill != comb on U_delta4"};
        break;
      }
    }
    for (uint64_t i = 0; i < opts.invariant_probes && inv.eta_in_range; ++i) {
      RatVec x = rng.unit_vector(params.n, opts.cert.max_denominator);
      Rational v = eta.eval(x);
      if (v < Rational(1, 4) || v > Rational(3, 4)) {
        inv.eta_in_range = false;
        if (!inv.witness) inv.witness = Witness{x, std::nullopt, {{"eta", v}}, "eta out of [1/4,3/4]"};
      }
    }
    for (const auto& v : tilde.values())
      if (v.sign() < 0 || v > Rational(1)) inv.tilde_in_unit = false;
  }

  // Stage distances and the final bracket.
  if (opts.run_distances) {
    const Rational eps = params.eps;
    auto lip = [](const PwlExpr& e) {
      auto l = e.lipschitz();
      if (!l) throw ConstructionError("stage without a Lipschitz constant in distance sweep");
      return *l;
    };
    struct Leg {
      const char* from;
      const char* to;
      const PwlExpr* a;
      const PwlExpr* bp;
      std::optional<Rational> bound;
    };
    const Rational e36 = eps / Rational(36), e18 = eps / Rational(18);
    std::vector<Leg> legs{{"input", "pi_tilde", &result.input, &result.pi_tilde, e18},
                          {"pi_tilde", "pi_comb", &result.pi_tilde, &comb, Rational(5) * eps / Rational(6)},
                          {"pi_comb", "pi_fill_in", &comb, &fill, e36},
                          {"pi_fill_in", "pi_sym", &fill, &sym, e18},
                          {"input", "pi_sym", &result.input, &sym, std::nullopt}};
    Rational triangle(0);
    for (size_t i = 0; i < legs.size(); ++i) {
      const Leg& leg = legs[i];
      SupDistance d =
          sup_distance(*leg.a, *leg.bp, opts.distance_resolution, lip(*leg.a), lip(*leg.bp), opts.cert.budget_points);
      StageDistance sd{leg.from, leg.to, d, leg.bound, std::nullopt};
      if (leg.bound) sd.bound_holds = d.upper <= *leg.bound;
      if (i + 1 < legs.size())
        triangle += d.upper;  // the first four legs chain input -> pi_sym
      else
        result.total_upper = d.upper;  // the last leg is the direct bracket
      result.distances.push_back(std::move(sd));
    }
    result.triangle_upper = triangle;
  }

  result.ok = result.preconditions.combined.verdict == Verdict::Pass;
  if (params.mode == PipelineMode::Strict) {
    for (const auto& sd : result.distances)
      if (sd.bound_holds && !*sd.bound_holds) result.ok = false;
    if (opts.run_distances && !(result.total_upper < params.eps)) result.ok = false;
  }
  return result;
}

}  // namespace gjext
