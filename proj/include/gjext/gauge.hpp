#pragma once

#include <optional>
#include <vector>

#include "gjext/vec.hpp"

namespace gjext {

/// The simplex Lambda_{delta3,0} = conv({v^(1),...,v^(n+1)}) together with
/// the dual vectors g^(i) of its Minkowski gauge:
///   v^(i) = delta3 (b - 1 + n e^(i)),  v^(n+1) = delta3 (b - 1),
///   g^(i) = -(delta3 (1-b_i))^(-1) e^(i),  g^(n+1) = (delta3 sum_j b_j)^(-1) 1,
///   gauge(x) = max_i <g^(i), x>.
/// The origin is interior, so the gauge is finite, sublinear, and
/// nonnegative everywhere.
struct GaugeSimplex {
  int n = 0;
  RatVec b;
  Rational delta3;
  std::vector<RatVec> v;
  std::vector<RatVec> g;

  /// max_i ||g^(i)||_1; gauge is Lipschitz with this constant w.r.t. the
  /// infinity norm.
  Rational max_dual_l1() const;
};

/// Builds the simplex and validates it exactly: b in ([0,1)^n cap Q^n)\{0},
/// delta3 > 0, the interior-point identity
/// (sum b_i / n) v^(n+1) + sum_i ((1-b_i)/n) v^(i) = 0, and gauge(v^(k)) = 1
/// for every vertex.
GaugeSimplex build_gauge(const RatVec& b, const Rational& delta3);

/// Exact gauge value max_i <g^(i), x>.
Rational gauge_eval(const GaugeSimplex& G, const RatVec& x);

/// x in Lambda_{delta3,z}  <=>  gauge(x-z) <= 1.
bool in_gauge_simplex(const GaugeSimplex& G, const RatVec& x, const RatVec& z);

struct LatticeGaugeMin {
  Rational value;  // min over z in Z^n of gauge(w - z)
  RatVec z;        // a minimizer
};

/// Exact minimum of gauge(w-z) over the integer lattice. The search is
/// finite: gauge(w-z) <= t confines w-z to t*Lambda, whose coordinate
/// ranges bound the candidate z box.
LatticeGaugeMin lattice_gauge_argmin(const GaugeSimplex& G, const RatVec& w);
Rational lattice_gauge_min(const GaugeSimplex& G, const RatVec& w);

/// Disjointness of the scaled families used by pi_delta3:
/// Lambda_{2delta3,z1} and b - Lambda_{2delta3,z2} are disjoint for all
/// z1,z2 iff b - z1 - z2 never lies in Lambda_{2d3,0} + Lambda_{2d3,0}
/// = Lambda_{4delta3,0}, i.e. iff min_z gauge_{delta3}(b-z) > 4.
bool scaled_families_disjoint(const GaugeSimplex& G);

/// pi_aux(x) = delta3 * min_z gauge(x-z); periodic, values in [0,1].
Rational pi_aux_eval(const GaugeSimplex& G, const RatVec& x);

/// The perturbation direction pi_delta3. Preconditions are checked once at
/// construction: delta3 = 1/p < 1/2, b in U_delta3, and the scaled-family
/// disjointness above.
class PiDelta3 {
 public:
  explicit PiDelta3(GaugeSimplex G);

  /// min_z [min(1/2, gauge(x-z)/2)] + max_z [max(0, 1/2 - gauge(b-x-z)/2)],
  /// both lattice searches reduced to finite candidate sets.
  Rational eval(const RatVec& x) const;

  const GaugeSimplex& gauge() const { return G_; }
  /// (1/2) max_i ||g^(i)||_1: the active regions of the two terms are
  /// separated by the disjointness precondition, so their gradients never
  /// combine.
  Rational lipschitz() const;

 private:
  GaugeSimplex G_;
};

/// tau = 1 + m*s with s a common multiple of the denominators of b and
/// 1/tau <= 6 delta3/(5 eps); then tau*b - b in Z^n.
struct TauChoice {
  Int tau;
  Int s;
  Int m;
};

TauChoice choose_tau(const RatVec& b, const Rational& delta3, const Rational& eps);

/// eta_aux(x) = 1/2 + 5eps/(24 delta3 tau) - (5eps/(12 delta3 tau)) *
/// pi_aux(tau(b-x)); symmetric under x -> b-x and valued in [1/4, 3/4].
class EtaAux {
 public:
  EtaAux(GaugeSimplex G, TauChoice tau, Rational eps);

  Rational eval(const RatVec& x) const;
  const GaugeSimplex& gauge() const { return G_; }
  const TauChoice& tau() const { return tau_; }
  const Rational& eps() const { return eps_; }
  /// (5 eps / 12) max_i ||g^(i)||_1.
  Rational lipschitz() const;
  const Rational& offset() const { return c0_; }       // 1/2 + 5eps/(24 d3 tau)
  const Rational& coefficient() const { return c1_; }  // 5eps/(12 d3 tau)

 private:
  GaugeSimplex G_;
  TauChoice tau_;
  Rational eps_;
  Rational c0_, c1_;
};

}  // namespace gjext
