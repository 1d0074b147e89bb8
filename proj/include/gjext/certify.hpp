#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gjext/expr.hpp"
#include "gjext/probes.hpp"

namespace gjext {

enum class Property { C1, C2, Subadditive, SlopeCensus, GenuineDim, Distance, ExtremePreconditions };
enum class CertMode { ExactComplete, ExactGrid, RandomFalsify };
enum class Verdict { Pass, Fail, Indeterminate };

std::string to_string(Property p);
std::string to_string(CertMode m);
std::string to_string(Verdict v);

/// Reproducible counterexample (or extremal point): re-evaluating the named
/// expressions at x (and y) reproduces the recorded exact values.
struct Witness {
  RatVec x;
  std::optional<RatVec> y;
  std::vector<std::pair<std::string, Rational>> values;
  std::string note;
};

struct Certificate {
  Property property{};
  CertMode mode{};
  Verdict verdict{};
  std::optional<Witness> witness;
  std::optional<Rational> extremal_slack;  // e.g. min Delta found, min value
  uint64_t seed = 0;
  Rational resolution;
  uint64_t probes = 0;
  std::string detail;
  double elapsed_seconds = 0;
};

struct CertOptions {
  Rational resolution = Rational(1, 16);
  uint64_t probes = 1000;
  uint64_t seed = 1;
  uint64_t max_denominator = 10'000;     // random probe denominators
  uint64_t budget_pairs = 20'000'000;
  uint64_t budget_points = kDefaultEnumBudget;
  bool allow_tier_a = true;
  std::optional<Rational> census_radius;   // probe_gradient start; default resolution
  std::optional<uint64_t> census_probes;   // default: probes
  /// When set, FAIL/min witnesses for subadditivity carry the region
  /// classification of (x, y) relative to the Lambda_{delta3,z} families.
  const GaugeSimplex* region_gauge = nullptr;
};

/// Exact reconstruction of a 1-d periodic piecewise linear expression from
/// its structural breakpoint superset: evaluates the superset, merges
/// intervals with equal slopes, and validates each interval with an exact
/// midpoint test. `consistent` false means the superset missed a kink and
/// callers must downgrade to grid certification.
struct Pwl1D {
  std::vector<Rational> points;  // actual breakpoints, sorted, in [0,1)
  std::vector<Rational> values;  // f at points
  std::vector<Rational> slopes;  // slope on [points[i], points[i+1]) (cyclic)
  bool consistent = true;

  Rational eval(const Rational& x) const;  // exact, periodic
  Rational max_abs_slope() const;
};

Pwl1D reconstruct_pwl_1d(const PwlExpr& f);

/// (C1): f vanishes on lattice probes and is nonnegative. EXACT_COMPLETE for
/// grid leaves (vertex nonnegativity is complete for interpolants).
Certificate check_C1(const PwlExpr& f, const CertOptions& opt);

/// (C2): f(x) + f(b-x) = 1. EXACT_COMPLETE for grid leaves with b on the
/// grid (the interpolant inherits vertex symmetry).
Certificate check_C2(const PwlExpr& f, const RatVec& b, const CertOptions& opt);

/// (C3): Delta f(x,y) = f(x) + f(y) - f(x+y) >= 0. Three tiers:
/// (a) n=1 and structurally enumerable: EXACT_COMPLETE over the vertices of
///     the Delta complex (pairs (b1,b2), (b1, b2-b1) over actual breakpoints);
/// (b) exact sweep over all grid pairs at opt.resolution;
/// (c) random rational pairs.
/// The verdict carries the strongest achieved mode and the minimum slack.
Certificate check_subadditive(const PwlExpr& f, const CertOptions& opt);

/// Probes gradients at random points and compares the realized set with the
/// expected one; PASS iff they coincide as sets.
Certificate slope_census(const PwlExpr& f, const std::vector<RatVec>& expected, const CertOptions& opt,
                         std::vector<RatVec>* realized_out = nullptr);

/// PASS iff the differences {g - g0} span R^n (exact rank over Q).
Certificate genuine_dimension_check(const std::vector<RatVec>& gradients);

struct MinimalityReport {
  Certificate c1, c2, subadditive;
  Verdict verdict() const;
  CertMode weakest_mode() const;
};

MinimalityReport minimality_certificate(const PwlExpr& f, const RatVec& b, const CertOptions& opt);

/// Hypothesis check for extremality: minimal, exactly n+1 realized slopes
/// from the expected set, and genuinely n-dimensional. Extremality itself
/// follows from the (k+1)-slope extremality theorem, not from this tool.
struct ExtremePreconditionsReport {
  MinimalityReport minimality;
  Certificate census;
  Certificate genuine_dim;
  Certificate combined;  // Property::ExtremePreconditions
};

ExtremePreconditionsReport extreme_preconditions_check(const PwlExpr& sym, const RatVec& b,
                                                       const std::vector<RatVec>& expected_gradients,
                                                       const CertOptions& opt);

/// Valid-inequality demonstration on one simplex-tableau instance.
struct CutDemoReport {
  std::vector<RatVec> columns;
  std::vector<Int> multiplicities;       // nonnegative integer solution y
  std::vector<Rational> coefficients;    // f(p^(i))
  Rational lhs;                          // sum f(p^(i)) y_i
  bool valid = false;                    // lhs >= 1
  Rational zero_solution_lhs;            // 0
  bool zero_solution_cut_off = false;    // 0 < 1
};

/// Requires sum y_i p^(i) - b integral (a feasible tableau row); rejects
/// infeasible instances.
CutDemoReport cut_validity_demo(const PwlExpr& f, const RatVec& b, const std::vector<RatVec>& columns,
                                const std::vector<Int>& multiplicities);

}  // namespace gjext
