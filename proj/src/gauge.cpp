#include "gjext/gauge.hpp"

#include <cmath>

#include "gjext/errors.hpp"

namespace gjext {

namespace {

constexpr uint64_t kLatticeSearchBudget = 1'000'000;

void require_valid_b(const RatVec& b) {
  if (b.dim() < 1) throw ConstructionError("b must have dimension >= 1");
  if (b.is_zero()) throw ConstructionError("b must be nonzero");
  for (int i = 0; i < b.dim(); ++i)
    if (b[i].sign() < 0 || b[i] >= Rational(1))
      throw ConstructionError("b" + b.str() + " must lie in [0,1)^n");
}

}  // namespace

Rational GaugeSimplex::max_dual_l1() const {
  Rational m(0);
  for (const auto& gi : g) m = max(m, gi.l1_norm());
  return m;
}

GaugeSimplex build_gauge(const RatVec& b, const Rational& delta3) {
  require_valid_b(b);
  if (delta3.sign() <= 0) throw ConstructionError("delta3 must be positive");
  const int n = b.dim();

  GaugeSimplex G;
  G.n = n;
  G.b = b;
  G.delta3 = delta3;
  RatVec ones = RatVec::ones(n);
  for (int i = 0; i < n; ++i) {
    RatVec vi = b - ones;
    vi[i] += Rational(n);
    G.v.push_back(delta3 * vi);
    G.g.push_back((-(Rational(1) / (delta3 * (Rational(1) - b[i])))) * RatVec::basis(n, i));
  }
  G.v.push_back(delta3 * (b - ones));
  Rational bsum(0);
  for (int i = 0; i < n; ++i) bsum += b[i];
  G.g.push_back((Rational(1) / (delta3 * bsum)) * ones);

  // Interior-point identity: (sum b_i / n) v^(n+1) + sum_i ((1-b_i)/n) v^(i) = 0.
  RatVec probe = (bsum / Rational(n)) * G.v[static_cast<size_t>(n)];
  for (int i = 0; i < n; ++i) probe = probe + ((Rational(1) - b[i]) / Rational(n)) * G.v[static_cast<size_t>(i)];
  if (!probe.is_zero()) throw ConstructionError("gauge simplex interior identity failed: " + probe.str());

  for (int k = 0; k <= n; ++k)
    if (gauge_eval(G, G.v[static_cast<size_t>(k)]) != Rational(1))
      throw ConstructionError("gauge simplex vertex not on the unit level set");

  return G;
}

Rational gauge_eval(const GaugeSimplex& G, const RatVec& x) {
  Rational m = dot(G.g[0], x);
  for (size_t i = 1; i < G.g.size(); ++i) m = max(m, dot(G.g[i], x));
  return m;
}

bool in_gauge_simplex(const GaugeSimplex& G, const RatVec& x, const RatVec& z) {
  return gauge_eval(G, x - z) <= Rational(1);
}

LatticeGaugeMin lattice_gauge_argmin(const GaugeSimplex& G, const RatVec& w) {
  const int n = G.n;
  if (w.dim() != n) throw ConstructionError("lattice_gauge_argmin dimension mismatch");
  std::vector<Int> shift = w.floor();
  RatVec wf = w.frac();

  auto with_shift = [&](std::vector<long> zc) {
    RatVec z(n);
    for (int i = 0; i < n; ++i) {
      Int zi = shift[static_cast<size_t>(i)] + zc[static_cast<size_t>(i)];
      z[i] = Rational(zi);
    }
    return z;
  };

  if (wf.is_zero()) return {Rational(0), with_shift(std::vector<long>(static_cast<size_t>(n), 0))};
  if (n > 16) throw BudgetError("lattice gauge search not sized for n > 16");

  // Initial candidate: best corner of the unit cell.
  Rational best(0);
  std::vector<long> best_z(static_cast<size_t>(n), 0);
  bool first = true;
  for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
    RatVec diff = wf;
    std::vector<long> zc(static_cast<size_t>(n), 0);
    for (int i = 0; i < n; ++i)
      if (mask & (uint64_t{1} << i)) {
        zc[static_cast<size_t>(i)] = 1;
        diff[i] -= Rational(1);
      }
    Rational t = gauge_eval(G, diff);
    if (first || t < best) {
      best = t;
      best_z = zc;
      first = false;
    }
  }

  // gauge(wf - z) <= best confines wf - z to best*Lambda, i.e.
  // (wf - z)_j in [best*delta3*(b_j - 1), best*delta3*(b_j - 1 + n)].
  std::vector<long> lo(static_cast<size_t>(n)), hi(static_cast<size_t>(n));
  uint64_t count = 1;
  for (int j = 0; j < n; ++j) {
    Rational span_lo = best * G.delta3 * (G.b[j] - Rational(1));
    Rational span_hi = best * G.delta3 * (G.b[j] - Rational(1) + Rational(n));
    lo[static_cast<size_t>(j)] = static_cast<long>((wf[j] - span_hi).ceil().get_si());
    hi[static_cast<size_t>(j)] = static_cast<long>((wf[j] - span_lo).floor().get_si());
    count *= static_cast<uint64_t>(hi[static_cast<size_t>(j)] - lo[static_cast<size_t>(j)] + 1);
    if (count > kLatticeSearchBudget) throw BudgetError("lattice gauge search box too large");
  }

  // Double prefilter over the box; exact re-check of near-minimal candidates.
  std::vector<std::vector<double>> gd(G.g.size(), std::vector<double>(static_cast<size_t>(n)));
  for (size_t i = 0; i < G.g.size(); ++i)
    for (int j = 0; j < n; ++j) gd[i][static_cast<size_t>(j)] = G.g[i][j].to_double();
  std::vector<double> wd(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) wd[static_cast<size_t>(j)] = wf[j].to_double();

  std::vector<std::pair<std::vector<long>, double>> cands;
  cands.reserve(count);
  std::vector<long> zc = lo;
  for (;;) {
    double gmax = -1e300;
    for (size_t i = 0; i < gd.size(); ++i) {
      double s = 0;
      for (int j = 0; j < n; ++j)
        s += gd[i][static_cast<size_t>(j)] * (wd[static_cast<size_t>(j)] - static_cast<double>(zc[static_cast<size_t>(j)]));
      if (s > gmax) gmax = s;
    }
    cands.emplace_back(zc, gmax);
    int axis = n - 1;
    while (axis >= 0 && ++zc[static_cast<size_t>(axis)] > hi[static_cast<size_t>(axis)]) {
      zc[static_cast<size_t>(axis)] = lo[static_cast<size_t>(axis)];
      --axis;
    }
    if (axis < 0) break;
  }
  double best_d = 1e300;
  for (const auto& c : cands) best_d = std::min(best_d, c.second);
  const double margin = 1e-7 * (1.0 + std::fabs(best_d)) + 1e-9;
  for (const auto& c : cands) {
    if (c.second > best_d + margin) continue;
    RatVec diff = wf;
    for (int j = 0; j < n; ++j) diff[j] -= Rational(c.first[static_cast<size_t>(j)]);
    Rational t = gauge_eval(G, diff);
    if (t < best) {
      best = t;
      best_z = c.first;
    }
  }
  return {best, with_shift(best_z)};
}

Rational lattice_gauge_min(const GaugeSimplex& G, const RatVec& w) { return lattice_gauge_argmin(G, w).value; }

bool scaled_families_disjoint(const GaugeSimplex& G) { return lattice_gauge_min(G, G.b) > Rational(4); }

Rational pi_aux_eval(const GaugeSimplex& G, const RatVec& x) { return G.delta3 * lattice_gauge_min(G, x); }

PiDelta3::PiDelta3(GaugeSimplex G) : G_(std::move(G)) {
  Int p = unit_fraction_den(G_.delta3);
  if (!(G_.delta3 < Rational(1, 2))) throw ConstructionError("pi_delta3 requires delta3 = 1/p < 1/2");
  for (int i = 0; i < G_.n; ++i)
    if (!(G_.b[i] / G_.delta3).is_integer())
      throw ConstructionError("pi_delta3 requires b in U_delta3; b = " + G_.b.str() + ", delta3 = 1/" + p.get_str());
  if (!scaled_families_disjoint(G_))
    throw ConstructionError("pi_delta3 disjointness failed for delta3 = " + G_.delta3.str() +
                            ": min_z gauge(b-z) = " + lattice_gauge_min(G_, G_.b).str() + " <= 4");
}

Rational PiDelta3::eval(const RatVec& x) const {
  const Rational half(1, 2);
  Rational m1 = lattice_gauge_min(G_, x);
  Rational m2 = lattice_gauge_min(G_, G_.b - x);
  Rational t1 = min(half, half * m1);
  Rational t2 = max(Rational(0), half - half * m2);
  return t1 + t2;
}

Rational PiDelta3::lipschitz() const { return Rational(1, 2) * G_.max_dual_l1(); }

TauChoice choose_tau(const RatVec& b, const Rational& delta3, const Rational& eps) {
  require_valid_b(b);
  if (delta3.sign() <= 0 || eps.sign() <= 0) throw ConstructionError("choose_tau needs delta3 > 0 and eps > 0");
  Int s = lcm_of_denominators(b);
  Rational needed = (Rational(5) * eps) / (Rational(6) * delta3);  // tau >= 5eps/(6delta3)
  Rational m_min = (needed - Rational(1)) / Rational(s);
  Int m = m_min.ceil();
  if (m < 1) m = 1;
  TauChoice t{Int(1 + m * s), s, m};
  if (Rational(1) / Rational(t.tau) > (Rational(6) * delta3) / (Rational(5) * eps))
    throw ConstructionError("tau choice failed its defining inequality");
  for (int i = 0; i < b.dim(); ++i)
    if (!((Rational(t.tau) - Rational(1)) * b[i]).is_integer())
      throw ConstructionError("tau*b - b is not integral");
  return t;
}

EtaAux::EtaAux(GaugeSimplex G, TauChoice tau, Rational eps) : G_(std::move(G)), tau_(std::move(tau)), eps_(std::move(eps)) {
  if (eps_.sign() <= 0) throw ConstructionError("eta_aux needs eps > 0");
  if (Rational(1) / Rational(tau_.tau) > (Rational(6) * G_.delta3) / (Rational(5) * eps_))
    throw ConstructionError("eta_aux: tau violates 1/tau <= 6 delta3 / (5 eps)");
  for (int i = 0; i < G_.n; ++i)
    if (!((Rational(tau_.tau) - Rational(1)) * G_.b[i]).is_integer())
      throw ConstructionError("eta_aux: tau*b - b not integral");
  c1_ = (Rational(5) * eps_) / (Rational(12) * G_.delta3 * Rational(tau_.tau));
  c0_ = Rational(1, 2) + c1_ / Rational(2);
}

Rational EtaAux::eval(const RatVec& x) const {
  RatVec arg = Rational(tau_.tau) * (G_.b - x);
  return c0_ - c1_ * pi_aux_eval(G_, arg);
}

Rational EtaAux::lipschitz() const { return (Rational(5) * eps_ / Rational(12)) * G_.max_dual_l1(); }

}  // namespace gjext
