#pragma once

#include "gjext/catalog.hpp"

namespace gjext {

enum class PipelineMode { Strict, Lab };

std::string to_string(PipelineMode m);

/// One parameter inequality, re-verified exactly and recorded.
struct IneqRecord {
  std::string name;
  bool holds = false;
  std::string detail;
};

struct PipelineParams {
  PipelineMode mode = PipelineMode::Lab;
  int n = 0;
  RatVec b;
  Rational eps;  // clamped to (0, 1/2]
  bool eps_clamped = false;
  Rational delta1, delta2, delta3, delta4;
  TauChoice tau;

  Rational lipschitz_input;          // modulus of the input function
  Rational lipschitz_pwl;            // L, from the pi_pwl grid
  Rational lipschitz_tilde;          // value used downstream
  Rational lipschitz_tilde_formula;  // 4 L n
  Rational lipschitz_tilde_actual;   // recomputed from the pi_tilde grid
  Rational lipschitz_gamma;          // (5 eps / 12) max_i ||g^(i)||_1

  std::vector<IneqRecord> inequalities;
  bool all_inequalities_hold() const;
  const IneqRecord* find(const std::string& name) const;
};

/// Parameters per the sufficient inequalities, with the stage tolerance
/// eps/36 substitution; every inequality is re-verified exactly. Requires
/// the spec to carry a Lipschitz constant or a native grid.
PipelineParams choose_params_strict(const MinimalFunctionSpec& spec, const Rational& eps);

struct LabDeltas {
  Rational delta1, delta2, delta3, delta4;
};

/// User-chosen deltas; divisibility and membership constraints are hard
/// errors, the sufficient inequalities are recorded as flags and left to
/// the a-posteriori certificates.
PipelineParams choose_params_lab(const MinimalFunctionSpec& spec, const Rational& eps, const LabDeltas& deltas);

GridFunction build_pi_pwl(const MinimalFunctionSpec& spec, const PipelineParams& params);

/// Flattens pi_pwl near the lattice (value 0) and near b + lattice
/// (value 1) on the delta2 grid; errors when the flattening balls overlap.
GridFunction build_pi_adjust(const GridFunction& pwl, const PipelineParams& params);

PwlExpr build_pi_comb(const GridFunction& tilde, const GaugeSimplex& G, const PipelineParams& params);
PwlExpr build_fill_in(const PwlExpr& comb, const GaugeSimplex& G, const PipelineParams& params);
PwlExpr build_eta(const GaugeSimplex& G, const PipelineParams& params);
PwlExpr build_pi_sym(const PwlExpr& comb, const PwlExpr& fillin, const PwlExpr& eta, const RatVec& b);

struct StageDistance {
  std::string from, to;
  SupDistance dist;
  std::optional<Rational> strict_bound;
  std::optional<bool> bound_holds;
};

/// Exact probe results for the stage ordering facts.
struct StageInvariantReport {
  bool fill_ge_comb = false;           // at random probes
  bool fill_eq_comb_on_grid = false;   // exact on all of U_delta4 (complete)
  bool eta_in_range = false;           // eta in [1/4, 3/4] at probes
  bool tilde_in_unit = false;          // pi_tilde in [0,1] on its grid
  std::optional<Witness> witness;      // first violation
};

struct PipelineResult {
  PipelineParams params;
  GaugeSimplex gauge;
  PwlExpr input, pi_pwl, pi_tilde, pi_comb, pi_fill_in, eta, pi_sym;
  std::vector<RatVec> expected_gradients;  // {(5 eps / 12) g^(i)}
  ExtremePreconditionsReport preconditions;
  std::vector<std::pair<std::string, Certificate>> stage_certificates;
  StageInvariantReport invariants;
  std::vector<StageDistance> distances;
  Rational total_upper;        // direct sup_distance(input, pi_sym).upper
  Rational triangle_upper;     // sum of stage uppers
  bool ok = false;             // preconditions pass; in strict mode also bounds and total < eps
};

struct RunOptions {
  CertOptions cert;
  Rational distance_resolution = Rational(1, 64);
  uint64_t invariant_probes = 1000;
  bool run_distances = true;
};

PipelineResult run_pipeline(const MinimalFunctionSpec& spec, const PipelineParams& params, const RunOptions& opts);

}  // namespace gjext
