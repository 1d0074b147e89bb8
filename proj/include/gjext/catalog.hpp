#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gjext/certify.hpp"

namespace gjext {

/// A registered continuous minimal input function together with the
/// metadata the pipeline needs. Registration runs the minimality
/// certificate at the registration resolution and throws CertificateError
/// (naming the violated condition and a witness) on failure, so every
/// constructed spec satisfies (C1)-(C3) at least at that resolution.
struct MinimalFunctionSpec {
  std::string name;
  int n = 0;
  RatVec b;
  EvalFn eval;
  std::optional<Rational> lipschitz;
  std::optional<Rational> native_delta;  // grid on which the function is exactly PWL
  std::optional<std::vector<Rational>> knots_1d;
  std::optional<PwlExpr> expr;  // structural expression, when one exists

  /// The function as an expression leaf (structural node when available,
  /// otherwise an oracle leaf).
  PwlExpr as_expr() const;
};

struct RegistrationOptions {
  std::optional<Rational> resolution;  // default: native_delta, else 1/16
  uint64_t probes = 200;
  uint64_t seed = 7;
  uint64_t budget_pairs = 20'000'000;
};

/// The classical 1-d two-slope function: frac(x)/b on [0,b], then
/// (1-frac(x))/(1-b).
MinimalFunctionSpec gmic(const Rational& b, const RegistrationOptions& opts = {});

/// pi_aux for the gauge simplex of (b, delta3): a genuinely n-dimensional
/// (n+1)-slope minimal function, usable as a pipeline input in any
/// dimension.
MinimalFunctionSpec nd_gauge_minimal(const RatVec& b, const Rational& delta3, const RegistrationOptions& opts = {});

/// t*f + (1-t)*g for specs sharing n and b.
MinimalFunctionSpec convex_combination(const MinimalFunctionSpec& f, const MinimalFunctionSpec& g, const Rational& t,
                                       const RegistrationOptions& opts = {});

/// Wraps a user-supplied grid table; rejects tables that fail registration
/// with the violated condition and witness.
MinimalFunctionSpec from_grid(const GridFunction& grid, const std::string& name,
                              const RegistrationOptions& opts = {});

struct CatalogEntry {
  std::string name;
  std::string syntax;
  std::string summary;
};

std::vector<CatalogEntry> catalog_entries();

/// Parses a spec argument: "gmic:<b>", "gauge:<b1,b2,...>:<delta3>", or a
/// grid-file path (handled by the CLI layer).
MinimalFunctionSpec resolve_named_spec(const std::string& text, const RegistrationOptions& opts = {});

}  // namespace gjext
