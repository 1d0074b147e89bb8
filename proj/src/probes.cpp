#include "gjext/probes.hpp"

#include "gjext/errors.hpp"

namespace gjext {

ProbeGradientResult probe_gradient(const PwlExpr& f, const RatVec& x, const Rational& initial_radius,
                                   int max_halvings) {
  if (initial_radius.sign() <= 0) throw ConstructionError("probe_gradient needs a positive radius");
  const int n = f.dim();
  if (x.dim() != n) throw ConstructionError("probe_gradient dimension mismatch");
  if (n > 16) throw BudgetError("probe_gradient corner sweep not sized for n > 16");

  const Rational fx = f.eval(x);
  Rational r = initial_radius;
  for (int h = 0; h <= max_halvings; ++h, r = r / Rational(2)) {
    RatVec grad(n);
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      RatVec e = RatVec::basis(n, i);
      Rational plus = f.eval(x + r * e);
      Rational minus = f.eval(x - r * e);
      grad[i] = (plus - minus) / (Rational(2) * r);
      if (fx + r * grad[i] != plus || fx - r * grad[i] != minus) ok = false;
      // Interior axis offsets break aliasing with lattice-periodic kink
      // patterns whose period divides r.
      for (int den = 2; den <= 4 && ok; den *= 2) {
        Rational s = r / Rational(den);
        if (f.eval(x + s * e) != fx + s * grad[i] || f.eval(x - s * e) != fx - s * grad[i]) ok = false;
      }
    }
    for (int den = 1; den <= 2 && ok; den *= 2) {
      Rational rc = r / Rational(den);
      for (uint64_t mask = 0; mask < (uint64_t{1} << n) && ok; ++mask) {
        RatVec p = x;
        Rational predicted = fx;
        for (int i = 0; i < n; ++i) {
          Rational s = (mask & (uint64_t{1} << i)) ? rc : -rc;
          p[i] += s;
          predicted += s * grad[i];
        }
        if (f.eval(p) != predicted) ok = false;
      }
    }
    if (ok) return {GradientSample{x, std::move(grad), r}, h};
  }
  return {std::nullopt, max_halvings};
}

SupDistance sup_distance(const PwlExpr& f, const PwlExpr& g, const Rational& probe_delta, const Rational& L_f,
                         const Rational& L_g, uint64_t budget) {
  if (f.dim() != g.dim()) throw ConstructionError("sup_distance dimension mismatch");
  if (L_f.sign() < 0 || L_g.sign() < 0) throw ConstructionError("Lipschitz constants must be nonnegative");
  const int n = f.dim();
  const Rational half_shift = probe_delta / Rational(2);

  SupDistance out{Rational(0), Rational(0), RatVec::zero(n)};
  GridPoints grid(n, probe_delta, budget / 2);
  for (const RatVec& u : grid) {
    for (int shifted = 0; shifted < 2; ++shifted) {
      RatVec p = u;
      if (shifted)
        for (int i = 0; i < n; ++i) p[i] += half_shift;
      Rational d = (f.eval(p) - g.eval(p)).abs();
      if (d > out.lower) {
        out.lower = d;
        out.argmax = p;
      }
    }
  }
  out.upper = out.lower + (L_f + L_g) * half_shift;
  return out;
}

}  // namespace gjext
