#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>

#include "gjext/gauge.hpp"
#include "gjext/grid_function.hpp"

namespace gjext {

enum class ExprKind {
  GridLeaf,
  OracleLeaf,
  PiDelta3Stage,
  PiAuxStage,
  EtaAuxStage,
  AffineCombo,
  FillIn,
  Symmetrize,
};

class PwlExprNode;
class PwlExpr;

/// Lazy expression tree over periodic piecewise linear functions with exact
/// pointwise evaluation. Nodes are immutable after construction; evaluation
/// is pure. The non-grid pipeline stages stay lazy because their breakpoints
/// are not aligned to any common triangulation for n >= 2; materializing
/// them onto a grid would change the function.
class PwlExpr {
 public:
  static PwlExpr grid_leaf(GridFunction f);
  /// Closed-form leaf (catalog function). knots_1d, when given, lists the
  /// breakpoints in [0,1) for n = 1 and enables structural enumeration.
  static PwlExpr oracle_leaf(std::string name, int n, EvalFn fn, std::optional<Rational> lipschitz,
                             std::optional<std::vector<Rational>> knots_1d);
  static PwlExpr pi_delta3(GaugeSimplex G);
  static PwlExpr pi_aux(GaugeSimplex G);
  static PwlExpr eta_aux(GaugeSimplex G, TauChoice tau, Rational eps);
  /// a*f + c*g + constant.
  static PwlExpr affine_combo(Rational a, PwlExpr f, Rational c, PwlExpr g, Rational constant);
  /// x -> min_{u in U_delta4} { base(u) + scale * gauge(x-u) }. The base must
  /// be periodic; its values on U_delta4 ∩ [0,1)^n are cached exactly at
  /// construction. The lattice minimum is reduced to a finite box via the
  /// gauge's coordinate bounds and is exact.
  static PwlExpr fill_in(PwlExpr base, GaugeSimplex G, Rational scale, Rational delta4,
                         uint64_t budget = kDefaultEnumBudget);
  /// Symmetrization switch between fillin and its reflection, driven by the
  /// sign of comb - eta.
  static PwlExpr symmetrize(PwlExpr comb, PwlExpr fillin, PwlExpr eta, RatVec b);

  int dim() const;
  Rational eval(const RatVec& x) const;

  /// A valid Lipschitz constant w.r.t. the infinity norm, when one is known
  /// structurally.
  std::optional<Rational> lipschitz() const;

  /// Finite superset of the breakpoints in one period [0,1), collected
  /// structurally; n = 1 only. Always contains 0.
  std::vector<Rational> breakpoints_1d() const;

  ExprKind kind() const;
  const PwlExprNode& node() const { return *node_; }
  std::shared_ptr<const PwlExprNode> node_ptr() const { return node_; }
  std::string describe() const;

  explicit PwlExpr(std::shared_ptr<const PwlExprNode> node) : node_(std::move(node)) {}

 private:
  std::shared_ptr<const PwlExprNode> node_;
};

class PwlExprNode {
 public:
  virtual ~PwlExprNode() = default;
  virtual ExprKind kind() const = 0;
  virtual int dim() const = 0;
  virtual Rational eval(const RatVec& x) const = 0;
  virtual std::optional<Rational> lipschitz() const = 0;
  virtual void collect_breakpoints_1d(std::set<Rational>& out) const = 0;
  virtual std::string describe() const = 0;
};

class GridLeafNode final : public PwlExprNode {
 public:
  explicit GridLeafNode(GridFunction f) : f_(std::move(f)) {}
  ExprKind kind() const override { return ExprKind::GridLeaf; }
  int dim() const override { return f_.n(); }
  Rational eval(const RatVec& x) const override { return f_.eval(x); }
  std::optional<Rational> lipschitz() const override;
  void collect_breakpoints_1d(std::set<Rational>& out) const override;
  std::string describe() const override;
  const GridFunction& grid() const { return f_; }

 private:
  GridFunction f_;
  mutable std::optional<Rational> lipschitz_cache_;
};

class OracleLeafNode final : public PwlExprNode {
 public:
  OracleLeafNode(std::string name, int n, EvalFn fn, std::optional<Rational> lipschitz,
                 std::optional<std::vector<Rational>> knots_1d)
      : name_(std::move(name)), n_(n), fn_(std::move(fn)), lipschitz_(std::move(lipschitz)), knots_1d_(std::move(knots_1d)) {}
  ExprKind kind() const override { return ExprKind::OracleLeaf; }
  int dim() const override { return n_; }
  Rational eval(const RatVec& x) const override { return fn_(x); }
  std::optional<Rational> lipschitz() const override { return lipschitz_; }
  void collect_breakpoints_1d(std::set<Rational>& out) const override;
  std::string describe() const override { return name_; }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  int n_;
  EvalFn fn_;
  std::optional<Rational> lipschitz_;
  std::optional<std::vector<Rational>> knots_1d_;
};

class PiDelta3Node final : public PwlExprNode {
 public:
  explicit PiDelta3Node(GaugeSimplex G) : pd_(std::move(G)) {}
  ExprKind kind() const override { return ExprKind::PiDelta3Stage; }
  int dim() const override { return pd_.gauge().n; }
  Rational eval(const RatVec& x) const override { return pd_.eval(x); }
  std::optional<Rational> lipschitz() const override { return pd_.lipschitz(); }
  void collect_breakpoints_1d(std::set<Rational>& out) const override;
  std::string describe() const override;
  const PiDelta3& stage() const { return pd_; }

 private:
  PiDelta3 pd_;
};

class PiAuxNode final : public PwlExprNode {
 public:
  explicit PiAuxNode(GaugeSimplex G) : G_(std::move(G)) {}
  ExprKind kind() const override { return ExprKind::PiAuxStage; }
  int dim() const override { return G_.n; }
  Rational eval(const RatVec& x) const override { return pi_aux_eval(G_, x); }
  std::optional<Rational> lipschitz() const override { return G_.delta3 * G_.max_dual_l1(); }
  void collect_breakpoints_1d(std::set<Rational>& out) const override;
  std::string describe() const override;
  const GaugeSimplex& gauge() const { return G_; }

 private:
  GaugeSimplex G_;
};

class EtaAuxNode final : public PwlExprNode {
 public:
  EtaAuxNode(GaugeSimplex G, TauChoice tau, Rational eps) : eta_(std::move(G), std::move(tau), std::move(eps)) {}
  ExprKind kind() const override { return ExprKind::EtaAuxStage; }
  int dim() const override { return eta_.gauge().n; }
  Rational eval(const RatVec& x) const override { return eta_.eval(x); }
  std::optional<Rational> lipschitz() const override { return eta_.lipschitz(); }
  void collect_breakpoints_1d(std::set<Rational>& out) const override;
  std::string describe() const override;
  const EtaAux& stage() const { return eta_; }

 private:
  EtaAux eta_;
};

class AffineComboNode final : public PwlExprNode {
 public:
  AffineComboNode(Rational a, PwlExpr f, Rational c, PwlExpr g, Rational constant);
  ExprKind kind() const override { return ExprKind::AffineCombo; }
  int dim() const override { return f_.dim(); }
  Rational eval(const RatVec& x) const override { return a_ * f_.eval(x) + c_ * g_.eval(x) + constant_; }
  std::optional<Rational> lipschitz() const override;
  void collect_breakpoints_1d(std::set<Rational>& out) const override;
  std::string describe() const override;
  const Rational& coeff_a() const { return a_; }
  const Rational& coeff_b() const { return c_; }
  const Rational& constant() const { return constant_; }
  const PwlExpr& f() const { return f_; }
  const PwlExpr& g() const { return g_; }

 private:
  Rational a_;
  PwlExpr f_;
  Rational c_;
  PwlExpr g_;
  Rational constant_;
};

class FillInNode final : public PwlExprNode {
 public:
  FillInNode(PwlExpr base, GaugeSimplex G, Rational scale, Rational delta4, uint64_t budget);
  ExprKind kind() const override { return ExprKind::FillIn; }
  int dim() const override { return G_.n; }
  Rational eval(const RatVec& x) const override;
  std::optional<Rational> lipschitz() const override { return scale_ * G_.max_dual_l1(); }
  void collect_breakpoints_1d(std::set<Rational>& out) const override;
  std::string describe() const override;

  const PwlExpr& base() const { return base_; }
  const GaugeSimplex& gauge() const { return G_; }
  const Rational& scale() const { return scale_; }
  const Rational& delta4() const { return delta4_; }
  long p4() const { return p4_; }
  /// Cached base values on U_delta4 ∩ [0,1)^n (row-major).
  const std::vector<Rational>& base_values() const { return base_values_; }
  Rational base_value_at(const std::vector<long>& k) const;

 private:
  struct Candidate {
    std::vector<long> k;
    double approx;
  };
  void candidate_box(const RatVec& x, const Rational& reach, std::vector<long>& lo, std::vector<long>& hi) const;

  PwlExpr base_;
  GaugeSimplex G_;
  Rational scale_;
  Rational delta4_;
  long p4_ = 0;
  std::vector<Rational> base_values_;
  std::vector<double> base_values_d_;
  Rational base_min_;
  std::vector<std::vector<double>> g_d_;
  double scale_d_ = 0;
  double delta4_d_ = 0;
};

class SymmetrizeNode final : public PwlExprNode {
 public:
  SymmetrizeNode(PwlExpr comb, PwlExpr fillin, PwlExpr eta, RatVec b);
  ExprKind kind() const override { return ExprKind::Symmetrize; }
  int dim() const override { return b_.dim(); }
  Rational eval(const RatVec& x) const override;
  std::optional<Rational> lipschitz() const override;
  void collect_breakpoints_1d(std::set<Rational>& out) const override;
  std::string describe() const override;

  const PwlExpr& comb() const { return comb_; }
  const PwlExpr& fillin() const { return fillin_; }
  const PwlExpr& eta() const { return eta_; }
  const RatVec& b() const { return b_; }

 private:
  PwlExpr comb_;
  PwlExpr fillin_;
  PwlExpr eta_;
  RatVec b_;
};

}  // namespace gjext
