#pragma once

#include <optional>

#include "gjext/expr.hpp"

namespace gjext {

/// A certified locally-affine sample: f is affine on the closed infinity
/// ball of radius cell_radius around point, with this exact gradient
/// (validated by the affineness test in probe_gradient).
struct GradientSample {
  RatVec point;
  RatVec gradient;
  Rational cell_radius;
};

struct ProbeGradientResult {
  std::optional<GradientSample> sample;  // nullopt: affineness not reached
  int halvings = 0;
};

/// Halves the radius until f at the 2n axis points and 2^n corner points of
/// the ball around x is consistent with a single affine map (checked
/// exactly); gives up after max_halvings (x is near a breakpoint; caller
/// resamples).
ProbeGradientResult probe_gradient(const PwlExpr& f, const RatVec& x, const Rational& initial_radius,
                                   int max_halvings = 60);

struct SupDistance {
  Rational lower;  // max |f-g| over the probe points
  Rational upper;  // lower + (L_f + L_g) * probe_delta / 2
  RatVec argmax;
};

/// Certified two-sided bracket of ||f - g||_inf. Probes U_probe_delta and
/// its half-shifted copy; every point of R^n lies within probe_delta/2 of
/// the plain grid in the infinity norm, so
///   lower <= ||f-g||_inf <= lower + (L_f + L_g) * probe_delta / 2
/// whenever L_f, L_g are valid infinity-norm Lipschitz constants.
SupDistance sup_distance(const PwlExpr& f, const PwlExpr& g, const Rational& probe_delta, const Rational& L_f,
                         const Rational& L_g, uint64_t budget = kDefaultEnumBudget);

}  // namespace gjext
