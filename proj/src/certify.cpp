#include "gjext/certify.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "gjext/errors.hpp"
#include "gjext/linalg.hpp"
#include "gjext/rng.hpp"

namespace gjext {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string classify_regions(const GaugeSimplex* G, const RatVec& x, const RatVec& y) {
  if (!G) return "";
  bool a = lattice_gauge_min(*G, x) <= Rational(1);
  bool b = lattice_gauge_min(*G, y) <= Rational(1);
  bool c = lattice_gauge_min(*G, G->b - (x + y)) <= Rational(1);
  std::string s = "region case: x in Lambda=";
  s += a ? "yes" : "no";
  s += ", y in Lambda=";
  s += b ? "yes" : "no";
  s += ", x+y in b-Lambda=";
  s += c ? "yes" : "no";
  return s;
}

int mode_strength(CertMode m) {
  switch (m) {
    case CertMode::ExactComplete: return 2;
    case CertMode::ExactGrid: return 1;
    case CertMode::RandomFalsify: return 0;
  }
  return 0;
}

int verdict_badness(Verdict v) {
  switch (v) {
    case Verdict::Pass: return 0;
    case Verdict::Indeterminate: return 1;
    case Verdict::Fail: return 2;
  }
  return 2;
}

}  // namespace

std::string to_string(Property p) {
  switch (p) {
    case Property::C1: return "C1";
    case Property::C2: return "C2";
    case Property::Subadditive: return "SUBADDITIVE";
    case Property::SlopeCensus: return "SLOPE_CENSUS";
    case Property::GenuineDim: return "GENUINE_DIM";
    case Property::Distance: return "DISTANCE";
    case Property::ExtremePreconditions: return "EXTREME_PRECONDITIONS";
  }
  return "?";
}

std::string to_string(CertMode m) {
  switch (m) {
    case CertMode::ExactComplete: return "EXACT_COMPLETE";
    case CertMode::ExactGrid: return "EXACT_GRID";
    case CertMode::RandomFalsify: return "RANDOM_FALSIFY";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Indeterminate: return "INDETERMINATE";
  }
  return "?";
}

// ------------------------------------------------------------------ Pwl1D

Rational Pwl1D::eval(const Rational& x) const {
  Rational xf = x.frac();
  const size_t n = points.size();
  if (xf < points.front()) xf += Rational(1);  // wraps into [p_{n-1}, p_0 + 1)
  size_t idx = static_cast<size_t>(std::upper_bound(points.begin(), points.end(), xf) - points.begin()) - 1;
  return values[idx] + slopes[idx] * (xf - points[idx]);
}

Rational Pwl1D::max_abs_slope() const {
  Rational m(0);
  for (const auto& s : slopes) m = max(m, s.abs());
  return m;
}

Pwl1D reconstruct_pwl_1d(const PwlExpr& f) {
  std::vector<Rational> sup = f.breakpoints_1d();
  const size_t n = sup.size();
  std::vector<Rational> vals(n);
  for (size_t i = 0; i < n; ++i) vals[i] = f.eval(RatVec{sup[i]});

  std::vector<Rational> slopes(n);
  bool consistent = true;
  for (size_t i = 0; i < n; ++i) {
    const Rational& l = sup[i];
    Rational r = (i + 1 < n) ? sup[i + 1] : sup[0] + Rational(1);
    Rational vr = (i + 1 < n) ? vals[i + 1] : vals[0];
    slopes[i] = (vr - vals[i]) / (r - l);
    Rational mid = (l + r) / Rational(2);
    if (f.eval(RatVec{mid}) != vals[i] + slopes[i] * (mid - l)) consistent = false;
  }

  Pwl1D out;
  out.consistent = consistent;
  for (size_t i = 0; i < n; ++i) {
    const Rational& prev = slopes[(i + n - 1) % n];
    if (slopes[i] != prev || n == 1) {
      out.points.push_back(sup[i]);
      out.values.push_back(vals[i]);
      out.slopes.push_back(slopes[i]);
    }
  }
  if (out.points.empty()) {  // no slope change anywhere: constant function
    out.points.push_back(sup[0]);
    out.values.push_back(vals[0]);
    out.slopes.push_back(slopes[0]);
  }
  return out;
}

// --------------------------------------------------------------- check_C1

Certificate check_C1(const PwlExpr& f, const CertOptions& opt) {
  auto t0 = Clock::now();
  Certificate cert;
  cert.property = Property::C1;
  cert.seed = opt.seed;
  cert.resolution = opt.resolution;
  cert.probes = opt.probes;
  cert.verdict = Verdict::Pass;

  const int n = f.dim();
  Rng rng(opt.seed);
  std::optional<Rational> min_value;
  auto note_value = [&](const RatVec& x, const Rational& v) {
    if (!min_value || v < *min_value) min_value = v;
    if (v.sign() < 0 && cert.verdict == Verdict::Pass) {
      cert.verdict = Verdict::Fail;
      cert.witness = Witness{x, std::nullopt, {{"f(x)", v}}, "nonnegativity violated"};
    }
  };

  // Lattice zeros: one point suffices under periodicity; three shifted
  // lattice points double-check the periodic reductions.
  std::vector<RatVec> zs{RatVec::zero(n)};
  for (int k = 0; k < 3; ++k) zs.push_back(rng.lattice_vector(n, 2));
  for (const auto& z : zs) {
    Rational v = f.eval(z);
    if (!v.is_zero()) {
      cert.verdict = Verdict::Fail;
      cert.witness = Witness{z, std::nullopt, {{"f(z)", v}}, "f must vanish on the lattice"};
      break;
    }
  }

  if (cert.verdict == Verdict::Pass) {
    if (f.kind() == ExprKind::GridLeaf) {
      // Vertex nonnegativity is complete for barycentric interpolants.
      const auto& grid = static_cast<const GridLeafNode&>(f.node()).grid();
      GridPoints gp(n, grid.delta(), opt.budget_points);
      auto it = gp.begin();
      for (const auto& v : grid.values()) {
        note_value(*it, v);
        if (cert.verdict == Verdict::Fail) break;
        ++it;
      }
      cert.mode = CertMode::ExactComplete;
    } else {
      for (const RatVec& u : GridPoints(n, opt.resolution, opt.budget_points)) {
        note_value(u, f.eval(u));
        if (cert.verdict == Verdict::Fail) break;
      }
      for (uint64_t i = 0; i < opt.probes && cert.verdict == Verdict::Pass; ++i) {
        RatVec x = rng.unit_vector(n, opt.max_denominator);
        note_value(x, f.eval(x));
      }
      cert.mode = CertMode::ExactGrid;
    }
  }

  cert.extremal_slack = min_value;
  cert.detail = "min value " + (min_value ? min_value->str() : std::string("n/a"));
  cert.elapsed_seconds = seconds_since(t0);
  return cert;
}

// --------------------------------------------------------------- check_C2

Certificate check_C2(const PwlExpr& f, const RatVec& b, const CertOptions& opt) {
  auto t0 = Clock::now();
  Certificate cert;
  cert.property = Property::C2;
  cert.seed = opt.seed;
  cert.resolution = opt.resolution;
  cert.probes = opt.probes;
  cert.verdict = Verdict::Pass;

  const int n = f.dim();
  if (b.dim() != n) throw ConstructionError("check_C2 dimension mismatch");
  Rng rng(opt.seed);
  Rational worst(0);

  auto check_at = [&](const RatVec& x) {
    if (cert.verdict == Verdict::Fail) return;
    RatVec y = b - x;
    Rational vx = f.eval(x);
    Rational vy = f.eval(y);
    Rational dev = vx + vy - Rational(1);
    worst = max(worst, dev.abs());
    if (!dev.is_zero()) {
      cert.verdict = Verdict::Fail;
      cert.witness = Witness{x, y, {{"f(x)", vx}, {"f(b-x)", vy}}, "symmetry defect " + dev.str()};
    }
  };

  bool complete = false;
  if (f.kind() == ExprKind::GridLeaf) {
    const auto& grid = static_cast<const GridLeafNode&>(f.node()).grid();
    bool b_on_grid = true;
    for (int i = 0; i < n; ++i)
      if (!(b[i] / grid.delta()).is_integer()) b_on_grid = false;
    if (b_on_grid) {
      // b - u stays on the grid, so vertex symmetry transfers to the
      // interpolant; the vertex sweep is complete.
      for (const RatVec& u : GridPoints(n, grid.delta(), opt.budget_points)) {
        check_at(u);
        if (cert.verdict == Verdict::Fail) break;
      }
      complete = true;
    }
  }
  if (!complete) {
    for (const RatVec& u : GridPoints(n, opt.resolution, opt.budget_points)) {
      check_at(u);
      if (cert.verdict == Verdict::Fail) break;
    }
    for (uint64_t i = 0; i < opt.probes && cert.verdict == Verdict::Pass; ++i)
      check_at(rng.unit_vector(n, opt.max_denominator));
  }

  cert.mode = complete ? CertMode::ExactComplete : CertMode::ExactGrid;
  cert.extremal_slack = worst;
  cert.detail = "max |f(x)+f(b-x)-1| = " + worst.str();
  cert.elapsed_seconds = seconds_since(t0);
  return cert;
}

// ------------------------------------------------------- check_subadditive

Certificate check_subadditive(const PwlExpr& f, const CertOptions& opt) {
  auto t0 = Clock::now();
  Certificate cert;
  cert.property = Property::Subadditive;
  cert.seed = opt.seed;
  cert.resolution = opt.resolution;
  cert.probes = opt.probes;
  cert.verdict = Verdict::Pass;
  cert.mode = CertMode::RandomFalsify;

  const int n = f.dim();
  std::optional<Rational> min_delta;
  std::optional<Witness> min_witness;
  bool failed = false;

  auto record = [&](const RatVec& x, const RatVec& y, const Rational& vx, const Rational& vy, const Rational& vxy) {
    Rational delta = vx + vy - vxy;
    if (!min_delta || delta < *min_delta) {
      min_delta = delta;
      min_witness = Witness{x, y, {{"f(x)", vx}, {"f(y)", vy}, {"f(x+y)", vxy}, {"Delta", delta}},
                            classify_regions(opt.region_gauge, x, y)};
    }
    if (delta.sign() < 0) failed = true;
    return delta.sign() >= 0;
  };

  std::string detail;

  // Tier (a): complete 1-d certification over the Delta-complex vertices.
  bool tier_a_complete = false;
  if (opt.allow_tier_a && n == 1) {
    try {
      Pwl1D pw = reconstruct_pwl_1d(f);
      const size_t N = pw.points.size();
      if (2 * N * N > opt.budget_pairs) throw BudgetError("tier (a) pair sweep exceeds budget");
      bool reconstruction_ok = pw.consistent;
      if (reconstruction_ok) {
        // Vertices of the Delta complex: (b1,b2) and (b1, b2-b1); Delta is
        // symmetric, so the third family (b2-b1, b1) is covered.
        for (size_t i = 0; i < N && !failed; ++i) {
          for (size_t j = 0; j < N && !failed; ++j) {
            const Rational& x = pw.points[i];
            if (j >= i) {
              const Rational& y = pw.points[j];
              record(RatVec{x}, RatVec{y}, pw.values[i], pw.values[j], pw.eval(x + y));
            }
            Rational y2 = (pw.points[j] - x).frac();
            record(RatVec{x}, RatVec{y2}, pw.values[i], pw.eval(y2), pw.eval(x + y2));
          }
        }
        if (failed) {
          // Re-validate the witness against the expression itself.
          const Witness& w = *min_witness;
          Rational vx = f.eval(w.x);
          Rational vy = f.eval(*w.y);
          Rational vxy = f.eval(w.x + *w.y);
          if ((vx + vy - vxy).sign() >= 0)
            reconstruction_ok = false;  // reconstruction disagreed with f
        }
        if (reconstruction_ok) {
          tier_a_complete = true;
          cert.mode = CertMode::ExactComplete;
          detail += "tier(a): " + std::to_string(N) + " breakpoints, " + std::to_string(2 * N * N) + " vertex pairs; ";
        } else {
          failed = false;
          min_delta.reset();
          min_witness.reset();
          detail += "tier(a): inconsistent enumeration, downgraded; ";
        }
      } else {
        detail += "tier(a): midpoint consistency flag, downgraded; ";
      }
    } catch (const BudgetError& e) {
      detail += std::string("tier(a) skipped: ") + e.what() + "; ";
    } catch (const ConstructionError& e) {
      detail += std::string("tier(a) unavailable: ") + e.what() + "; ";
    }
  }

  // Tier (b): exact sweep over all pairs of grid points.
  if (!tier_a_complete && !failed) {
    GridPoints grid(n, opt.resolution, opt.budget_points);
    const uint64_t count = grid.size();
    if (count * count > opt.budget_pairs)
      throw BudgetError("subadditivity grid sweep needs " + std::to_string(count * count) + " pairs, budget " +
                        std::to_string(opt.budget_pairs));
    std::vector<RatVec> pts;
    std::vector<Rational> vals;
    pts.reserve(count);
    vals.reserve(count);
    for (const RatVec& u : grid) {
      pts.push_back(u);
      vals.push_back(f.eval(u));
    }
    const long p = grid.p();
    std::vector<long> ia(static_cast<size_t>(n), 0), ib(static_cast<size_t>(n), 0);
    auto advance = [&](std::vector<long>& v) {
      for (int ax = n - 1; ax >= 0; --ax) {
        if (++v[static_cast<size_t>(ax)] < p) return true;
        v[static_cast<size_t>(ax)] = 0;
      }
      return false;
    };
    uint64_t ai = 0;
    do {
      std::fill(ib.begin(), ib.end(), 0);
      uint64_t bi = 0;
      do {
        if (bi >= ai) {  // Delta is symmetric in (x, y)
          uint64_t ci = 0;
          for (int ax = 0; ax < n; ++ax)
            ci = ci * static_cast<uint64_t>(p) +
                 static_cast<uint64_t>((ia[static_cast<size_t>(ax)] + ib[static_cast<size_t>(ax)]) % p);
          if (!record(pts[ai], pts[bi], vals[ai], vals[bi], vals[ci])) break;
        }
        ++bi;
      } while (advance(ib));
      ++ai;
    } while (!failed && advance(ia));
    if (cert.mode != CertMode::ExactComplete) cert.mode = CertMode::ExactGrid;
    detail += "tier(b): " + std::to_string(count) + "^2 grid pairs; ";
  }

  // Tier (c): random rational pairs.
  if (!failed) {
    Rng rng(opt.seed);
    for (uint64_t i = 0; i < opt.probes && !failed; ++i) {
      RatVec x = rng.unit_vector(n, opt.max_denominator);
      RatVec y = rng.unit_vector(n, opt.max_denominator);
      record(x, y, f.eval(x), f.eval(y), f.eval(x + y));
    }
    detail += "tier(c): " + std::to_string(opt.probes) + " random pairs";
  }

  if (failed) {
    cert.verdict = Verdict::Fail;
    detail += " [stopped at first violation; slack covers completed work]";
  }
  cert.witness = min_witness;
  cert.extremal_slack = min_delta;
  cert.detail = detail + "; min Delta " + (min_delta ? min_delta->str() : std::string("n/a"));
  cert.elapsed_seconds = seconds_since(t0);
  return cert;
}

// ------------------------------------------------------------ slope_census

Certificate slope_census(const PwlExpr& f, const std::vector<RatVec>& expected, const CertOptions& opt,
                         std::vector<RatVec>* realized_out) {
  auto t0 = Clock::now();
  Certificate cert;
  cert.property = Property::SlopeCensus;
  cert.seed = opt.seed;
  cert.resolution = opt.resolution;
  const uint64_t probes = opt.census_probes.value_or(opt.probes);
  cert.probes = probes;
  cert.verdict = Verdict::Pass;
  cert.mode = CertMode::RandomFalsify;

  const int n = f.dim();
  const Rational radius = opt.census_radius.value_or(opt.resolution);
  std::set<RatVec> expected_set(expected.begin(), expected.end());
  std::set<RatVec> realized;
  Rng rng(opt.seed);

  uint64_t samples = 0;
  uint64_t attempts = 0;
  const uint64_t max_attempts = 16 * probes + 16;
  while (samples < probes && attempts < max_attempts) {
    ++attempts;
    RatVec x = rng.unit_vector(n, opt.max_denominator);
    auto res = probe_gradient(f, x, radius);
    if (!res.sample) continue;  // near a breakpoint; resample
    ++samples;
    const RatVec& grad = res.sample->gradient;
    realized.insert(grad);
    if (!expected_set.count(grad)) {
      cert.verdict = Verdict::Fail;
      cert.witness = Witness{x, std::nullopt, {}, "unexpected gradient " + grad.str()};
      break;
    }
  }

  if (cert.verdict == Verdict::Pass && samples < probes) {
    cert.verdict = Verdict::Indeterminate;
    cert.detail = "only " + std::to_string(samples) + " of " + std::to_string(probes) +
                  " probes reached affineness";
  } else if (cert.verdict == Verdict::Pass && realized.size() != expected_set.size()) {
    cert.verdict = Verdict::Fail;
    std::string missing;
    for (const auto& g : expected_set)
      if (!realized.count(g)) missing += (missing.empty() ? "" : ", ") + g.str();
    cert.witness = Witness{RatVec::zero(n), std::nullopt, {}, "gradients never realized: " + missing};
  }

  if (cert.detail.empty())
    cert.detail = "realized " + std::to_string(realized.size()) + " distinct gradients in " +
                  std::to_string(samples) + " samples (expected " + std::to_string(expected_set.size()) + ")";
  if (realized_out) realized_out->assign(realized.begin(), realized.end());
  cert.elapsed_seconds = seconds_since(t0);
  return cert;
}

// -------------------------------------------------- genuine_dimension_check

Certificate genuine_dimension_check(const std::vector<RatVec>& gradients) {
  auto t0 = Clock::now();
  if (gradients.size() < 2) throw ConstructionError("genuine_dimension_check needs at least 2 gradients");
  Certificate cert;
  cert.property = Property::GenuineDim;
  cert.mode = CertMode::ExactComplete;

  const int n = gradients.front().dim();
  std::vector<RatVec> rows;
  for (size_t i = 1; i < gradients.size(); ++i) rows.push_back(gradients[i] - gradients[0]);
  int rank = exact_rank(rows);
  cert.verdict = (rank == n) ? Verdict::Pass : Verdict::Fail;
  cert.extremal_slack = Rational(rank);
  cert.detail = "gradient-difference rank " + std::to_string(rank) + " of " + std::to_string(n);
  if (cert.verdict == Verdict::Fail)
    cert.witness = Witness{gradients.front(), std::nullopt, {}, "differences span only rank " + std::to_string(rank)};
  cert.elapsed_seconds = seconds_since(t0);
  return cert;
}

// ---------------------------------------------------- minimality_certificate

Verdict MinimalityReport::verdict() const {
  Verdict v = Verdict::Pass;
  for (const Certificate* c : {&c1, &c2, &subadditive})
    if (verdict_badness(c->verdict) > verdict_badness(v)) v = c->verdict;
  return v;
}

CertMode MinimalityReport::weakest_mode() const {
  CertMode m = CertMode::ExactComplete;
  for (const Certificate* c : {&c1, &c2, &subadditive})
    if (mode_strength(c->mode) < mode_strength(m)) m = c->mode;
  return m;
}

MinimalityReport minimality_certificate(const PwlExpr& f, const RatVec& b, const CertOptions& opt) {
  MinimalityReport rep;
  rep.c1 = check_C1(f, opt);
  rep.c2 = check_C2(f, b, opt);
  rep.subadditive = check_subadditive(f, opt);
  return rep;
}

// ------------------------------------------------- extreme preconditions

ExtremePreconditionsReport extreme_preconditions_check(const PwlExpr& sym, const RatVec& b,
                                                       const std::vector<RatVec>& expected_gradients,
                                                       const CertOptions& opt) {
  auto t0 = Clock::now();
  ExtremePreconditionsReport rep;
  rep.minimality = minimality_certificate(sym, b, opt);
  std::vector<RatVec> realized;
  rep.census = slope_census(sym, expected_gradients, opt, &realized);
  if (realized.size() >= 2) {
    rep.genuine_dim = genuine_dimension_check(realized);
  } else {
    rep.genuine_dim.property = Property::GenuineDim;
    rep.genuine_dim.mode = CertMode::ExactComplete;
    rep.genuine_dim.verdict = Verdict::Indeterminate;
    rep.genuine_dim.detail = "fewer than 2 realized gradients";
  }

  Certificate& c = rep.combined;
  c.property = Property::ExtremePreconditions;
  c.seed = opt.seed;
  c.resolution = opt.resolution;
  c.probes = opt.probes;
  Verdict v = rep.minimality.verdict();
  for (const Certificate* part : {&rep.census, &rep.genuine_dim})
    if (verdict_badness(part->verdict) > verdict_badness(v)) v = part->verdict;
  c.verdict = v;
  CertMode m = rep.minimality.weakest_mode();
  for (const Certificate* part : {&rep.census, &rep.genuine_dim})
    if (mode_strength(part->mode) < mode_strength(m)) m = part->mode;
  c.mode = m;
  c.detail =
      "hypotheses for extremality (minimal, (n+1)-slope census, genuinely n-dimensional); extremality itself "
      "follows from the k-slope extremality theorem for genuinely n-dimensional minimal functions, not from "
      "this tool";
  c.elapsed_seconds = seconds_since(t0);
  return rep;
}

// --------------------------------------------------------- cut_validity_demo

CutDemoReport cut_validity_demo(const PwlExpr& f, const RatVec& b, const std::vector<RatVec>& columns,
                                const std::vector<Int>& multiplicities) {
  if (columns.empty() || columns.size() != multiplicities.size())
    throw ConstructionError("cut demo needs matching nonempty columns and multiplicities");
  const int n = f.dim();
  RatVec sum = RatVec::zero(n);
  for (size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].dim() != n) throw ConstructionError("cut demo column dimension mismatch");
    if (sgn(multiplicities[i]) < 0) throw ConstructionError("cut demo multiplicities must be nonnegative");
    sum = sum + Rational(multiplicities[i]) * columns[i];
  }
  if (!(sum - b).is_integral())
    throw ConstructionError("infeasible demo instance: sum y_i p^(i) - b = " + (sum - b).str() + " is not integral");

  CutDemoReport rep;
  rep.columns = columns;
  rep.multiplicities = multiplicities;
  rep.lhs = Rational(0);
  for (size_t i = 0; i < columns.size(); ++i) {
    Rational coef = f.eval(columns[i]);
    rep.coefficients.push_back(coef);
    rep.lhs += coef * Rational(multiplicities[i]);
  }
  rep.valid = rep.lhs >= Rational(1);
  rep.zero_solution_lhs = Rational(0);
  rep.zero_solution_cut_off = rep.zero_solution_lhs < Rational(1);
  return rep;
}

}  // namespace gjext
