#include "gjext/expr.hpp"

#include <cmath>

#include "gjext/errors.hpp"

namespace gjext {

namespace {

constexpr uint64_t kFillCandidateBudget = 4'000'000;  // per evaluation
constexpr uint64_t kStructuralPieceBudget = 1500;     // 1-d enumeration cones
constexpr uint64_t kStructuralTauBudget = 10'000;

double filter_margin(double v) { return 1e-7 * (1.0 + std::fabs(v)) + 1e-9; }

void require_1d(int n, const char* what) {
  if (n != 1) throw ConstructionError(std::string(what) + " is only defined for n = 1");
}

/// y = slope * x + intercept on some interval.
struct Affine1 {
  Rational slope;
  Rational intercept;
  Rational at(const Rational& x) const { return slope * x + intercept; }
};

void insert_crossing(const Affine1& a, const Affine1& b, std::set<Rational>& out) {
  if (a.slope == b.slope) return;
  Rational x = (b.intercept - a.intercept) / (a.slope - b.slope);
  if (x.sign() >= 0 && x < Rational(1)) out.insert(x);
}

}  // namespace

// ---------------------------------------------------------------- PwlExpr

PwlExpr PwlExpr::grid_leaf(GridFunction f) { return PwlExpr(std::make_shared<GridLeafNode>(std::move(f))); }

PwlExpr PwlExpr::oracle_leaf(std::string name, int n, EvalFn fn, std::optional<Rational> lipschitz,
                             std::optional<std::vector<Rational>> knots_1d) {
  return PwlExpr(std::make_shared<OracleLeafNode>(std::move(name), n, std::move(fn), std::move(lipschitz),
                                                  std::move(knots_1d)));
}

PwlExpr PwlExpr::pi_delta3(GaugeSimplex G) { return PwlExpr(std::make_shared<PiDelta3Node>(std::move(G))); }

PwlExpr PwlExpr::pi_aux(GaugeSimplex G) { return PwlExpr(std::make_shared<PiAuxNode>(std::move(G))); }

PwlExpr PwlExpr::eta_aux(GaugeSimplex G, TauChoice tau, Rational eps) {
  return PwlExpr(std::make_shared<EtaAuxNode>(std::move(G), std::move(tau), std::move(eps)));
}

PwlExpr PwlExpr::affine_combo(Rational a, PwlExpr f, Rational c, PwlExpr g, Rational constant) {
  return PwlExpr(std::make_shared<AffineComboNode>(std::move(a), std::move(f), std::move(c), std::move(g),
                                                   std::move(constant)));
}

PwlExpr PwlExpr::fill_in(PwlExpr base, GaugeSimplex G, Rational scale, Rational delta4, uint64_t budget) {
  return PwlExpr(std::make_shared<FillInNode>(std::move(base), std::move(G), std::move(scale), std::move(delta4), budget));
}

PwlExpr PwlExpr::symmetrize(PwlExpr comb, PwlExpr fillin, PwlExpr eta, RatVec b) {
  return PwlExpr(std::make_shared<SymmetrizeNode>(std::move(comb), std::move(fillin), std::move(eta), std::move(b)));
}

int PwlExpr::dim() const { return node_->dim(); }
Rational PwlExpr::eval(const RatVec& x) const { return node_->eval(x); }
std::optional<Rational> PwlExpr::lipschitz() const { return node_->lipschitz(); }
ExprKind PwlExpr::kind() const { return node_->kind(); }
std::string PwlExpr::describe() const { return node_->describe(); }

std::vector<Rational> PwlExpr::breakpoints_1d() const {
  require_1d(dim(), "breakpoints_1d");
  std::set<Rational> out;
  out.insert(Rational(0));
  node_->collect_breakpoints_1d(out);
  return std::vector<Rational>(out.begin(), out.end());
}

// ----------------------------------------------------------- GridLeafNode

std::optional<Rational> GridLeafNode::lipschitz() const {
  if (!lipschitz_cache_) lipschitz_cache_ = f_.lipschitz_constant();
  return lipschitz_cache_;
}

void GridLeafNode::collect_breakpoints_1d(std::set<Rational>& out) const {
  require_1d(f_.n(), "grid leaf enumeration");
  for (long k = 0; k < f_.p(); ++k) out.insert(Rational(k, f_.p()));
}

std::string GridLeafNode::describe() const {
  return "grid[n=" + std::to_string(f_.n()) + ", delta=" + f_.delta().str() + "]";
}

// --------------------------------------------------------- OracleLeafNode

void OracleLeafNode::collect_breakpoints_1d(std::set<Rational>& out) const {
  require_1d(n_, "oracle leaf enumeration");
  if (!knots_1d_) throw ConstructionError("oracle leaf '" + name_ + "' has no declared knots");
  for (const auto& k : *knots_1d_) out.insert(k.frac());
}

// ---------------------------------------------------------- PiDelta3Node

void PiDelta3Node::collect_breakpoints_1d(std::set<Rational>& out) const {
  require_1d(dim(), "pi_delta3 enumeration");
  const GaugeSimplex& G = pd_.gauge();
  const Rational& b = G.b[0];
  out.insert(Rational(0));
  out.insert(b.frac());
  for (const auto& vk : G.v) {
    out.insert(vk[0].frac());
    out.insert((b - vk[0]).frac());
  }
}

std::string PiDelta3Node::describe() const { return "pi_delta3[delta3=" + pd_.gauge().delta3.str() + "]"; }

// ------------------------------------------------------------- PiAuxNode

void PiAuxNode::collect_breakpoints_1d(std::set<Rational>& out) const {
  require_1d(G_.n, "pi_aux enumeration");
  // Active cones for x in [0,1) satisfy delta3*gauge(x-z) <= 1, hence
  // |x-z| <= n+1 = 2, so z in {-2,...,3}. Each cone has a kink at z and two
  // affine pieces; the minimum switches at pairwise crossings.
  const Rational s_left = G_.delta3 * G_.g[0][0];
  const Rational s_right = G_.delta3 * G_.g[1][0];
  std::vector<Affine1> pieces;
  for (long z = -2; z <= 3; ++z) {
    if (z >= 0 && z < 1) out.insert(Rational(z));
    pieces.push_back({s_left, -s_left * Rational(z)});
    pieces.push_back({s_right, -s_right * Rational(z)});
  }
  for (size_t i = 0; i < pieces.size(); ++i)
    for (size_t j = i + 1; j < pieces.size(); ++j) insert_crossing(pieces[i], pieces[j], out);
}

std::string PiAuxNode::describe() const { return "pi_aux[delta3=" + G_.delta3.str() + "]"; }

// ------------------------------------------------------------ EtaAuxNode

void EtaAuxNode::collect_breakpoints_1d(std::set<Rational>& out) const {
  require_1d(dim(), "eta_aux enumeration");
  const GaugeSimplex& G = eta_.gauge();
  if (cmp(eta_.tau().tau, kStructuralTauBudget) > 0) throw BudgetError("eta_aux enumeration: tau too large");
  std::set<Rational> aux;
  PiAuxNode(G).collect_breakpoints_1d(aux);
  const long tau = static_cast<long>(eta_.tau().tau.get_si());
  const Rational& b = G.b[0];
  // eta(x) kinks where tau*(b-x) hits a pi_aux breakpoint mod 1.
  for (const auto& beta : aux)
    for (long k = 0; k < tau; ++k) out.insert((b - (beta + Rational(k)) / Rational(tau)).frac());
}

std::string EtaAuxNode::describe() const {
  return "eta_aux[delta3=" + eta_.gauge().delta3.str() + ", tau=" + eta_.tau().tau.get_str() + "]";
}

// -------------------------------------------------------- AffineComboNode

AffineComboNode::AffineComboNode(Rational a, PwlExpr f, Rational c, PwlExpr g, Rational constant)
    : a_(std::move(a)), f_(std::move(f)), c_(std::move(c)), g_(std::move(g)), constant_(std::move(constant)) {
  if (f_.dim() != g_.dim()) throw ConstructionError("affine combo children disagree on dimension");
}

std::optional<Rational> AffineComboNode::lipschitz() const {
  auto lf = f_.lipschitz();
  auto lg = g_.lipschitz();
  if (!lf || !lg) return std::nullopt;
  return a_.abs() * *lf + c_.abs() * *lg;
}

void AffineComboNode::collect_breakpoints_1d(std::set<Rational>& out) const {
  f_.node().collect_breakpoints_1d(out);
  g_.node().collect_breakpoints_1d(out);
}

std::string AffineComboNode::describe() const {
  return "affine[" + a_.str() + "*(" + f_.describe() + ") + " + c_.str() + "*(" + g_.describe() + ") + " +
         constant_.str() + "]";
}

// ------------------------------------------------------------ FillInNode

FillInNode::FillInNode(PwlExpr base, GaugeSimplex G, Rational scale, Rational delta4, uint64_t budget)
    : base_(std::move(base)), G_(std::move(G)), scale_(std::move(scale)), delta4_(std::move(delta4)) {
  if (base_.dim() != G_.n) throw ConstructionError("fill_in base dimension mismatch");
  if (scale_.sign() <= 0) throw ConstructionError("fill_in scale must be positive");
  p4_ = static_cast<long>(unit_fraction_den(delta4_).get_ui());

  GridPoints grid(G_.n, delta4_, budget);
  base_values_.reserve(grid.size());
  for (const RatVec& u : grid) base_values_.push_back(base_.eval(u));
  base_min_ = base_values_.front();
  for (const auto& v : base_values_) base_min_ = min(base_min_, v);
  base_values_d_.reserve(base_values_.size());
  for (const auto& v : base_values_) base_values_d_.push_back(v.to_double());

  g_d_.assign(G_.g.size(), std::vector<double>(static_cast<size_t>(G_.n)));
  for (size_t i = 0; i < G_.g.size(); ++i)
    for (int j = 0; j < G_.n; ++j) g_d_[i][static_cast<size_t>(j)] = G_.g[i][j].to_double();
  scale_d_ = scale_.to_double();
  delta4_d_ = delta4_.to_double();
}

Rational FillInNode::base_value_at(const std::vector<long>& k) const {
  uint64_t flat = 0;
  for (int j = 0; j < G_.n; ++j) {
    long r = k[static_cast<size_t>(j)] % p4_;
    if (r < 0) r += p4_;
    flat = flat * static_cast<uint64_t>(p4_) + static_cast<uint64_t>(r);
  }
  return base_values_[flat];
}

void FillInNode::candidate_box(const RatVec& x, const Rational& reach, std::vector<long>& lo,
                               std::vector<long>& hi) const {
  // gauge(x-u) <= reach confines x-u to reach*Lambda with coordinate ranges
  // [reach*delta3*(b_j-1), reach*delta3*(b_j-1+n)].
  const int n = G_.n;
  lo.resize(static_cast<size_t>(n));
  hi.resize(static_cast<size_t>(n));
  uint64_t count = 1;
  for (int j = 0; j < n; ++j) {
    Rational span_lo = reach * G_.delta3 * (G_.b[j] - Rational(1));
    Rational span_hi = reach * G_.delta3 * (G_.b[j] - Rational(1) + Rational(n));
    lo[static_cast<size_t>(j)] = static_cast<long>(((x[j] - span_hi) / delta4_).ceil().get_si());
    hi[static_cast<size_t>(j)] = static_cast<long>(((x[j] - span_lo) / delta4_).floor().get_si());
    count *= static_cast<uint64_t>(hi[static_cast<size_t>(j)] - lo[static_cast<size_t>(j)] + 1);
    if (count > kFillCandidateBudget) throw BudgetError("fill_in candidate box exceeds budget");
  }
}

Rational FillInNode::eval(const RatVec& x) const {
  const int n = G_.n;
  if (x.dim() != n) throw ConstructionError("fill_in eval dimension mismatch");

  std::vector<long> k0(static_cast<size_t>(n));
  RatVec u0(n);
  for (int j = 0; j < n; ++j) {
    k0[static_cast<size_t>(j)] = static_cast<long>((x[j] / delta4_).floor().get_si());
    u0[j] = Rational(k0[static_cast<size_t>(j)], 1) * delta4_;
  }
  Rational best = base_value_at(k0) + scale_ * gauge_eval(G_, x - u0);
  double best_d = best.to_double();

  std::vector<long> lo, hi;
  candidate_box(x, (best - base_min_) / scale_, lo, hi);

  std::vector<double> xd(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) xd[static_cast<size_t>(j)] = x[j].to_double();

  std::vector<long> k = lo;
  for (;;) {
    // Cheap one-sided screen in doubles; exact re-check for survivors.
    uint64_t flat = 0;
    for (int j = 0; j < n; ++j) {
      long r = k[static_cast<size_t>(j)] % p4_;
      if (r < 0) r += p4_;
      flat = flat * static_cast<uint64_t>(p4_) + static_cast<uint64_t>(r);
    }
    double gmax = -1e300;
    for (size_t i = 0; i < g_d_.size(); ++i) {
      double s = 0;
      for (int j = 0; j < n; ++j)
        s += g_d_[i][static_cast<size_t>(j)] *
             (xd[static_cast<size_t>(j)] - delta4_d_ * static_cast<double>(k[static_cast<size_t>(j)]));
      if (s > gmax) gmax = s;
    }
    double vd = base_values_d_[flat] + scale_d_ * gmax;
    if (vd <= best_d + filter_margin(vd)) {
      RatVec u(n);
      for (int j = 0; j < n; ++j) u[j] = Rational(k[static_cast<size_t>(j)], 1) * delta4_;
      Rational v = base_values_[flat] + scale_ * gauge_eval(G_, x - u);
      if (v < best) {
        best = v;
        best_d = best.to_double();
      }
    }
    int axis = n - 1;
    while (axis >= 0 && ++k[static_cast<size_t>(axis)] > hi[static_cast<size_t>(axis)]) {
      k[static_cast<size_t>(axis)] = lo[static_cast<size_t>(axis)];
      --axis;
    }
    if (axis < 0) break;
  }
  return best;
}

void FillInNode::collect_breakpoints_1d(std::set<Rational>& out) const {
  require_1d(G_.n, "fill_in enumeration");
  // Value bound over one period: the floor candidate alone gives
  // base(u0) + scale*gauge(w), w in [0, delta4].
  Rational base_max = base_values_.front();
  for (const auto& v : base_values_) base_max = max(base_max, v);
  Rational cell_gauge(0);
  for (const auto& gi : G_.g) {
    Rational s(0);
    for (int j = 0; j < G_.n; ++j) s += max(Rational(0), gi[j] * delta4_);
    cell_gauge = max(cell_gauge, s);
  }
  Rational reach = (base_max + scale_ * cell_gauge - base_min_) / scale_;

  // Candidate cones for x in [0,1]: u in [-reach*d3*b, 1 + reach*d3*(1-b)].
  const Rational& b = G_.b[0];
  long k_lo = static_cast<long>(((Rational(0) - reach * G_.delta3 * b) / delta4_).floor().get_si());
  long k_hi = static_cast<long>(((Rational(1) + reach * G_.delta3 * (Rational(1) - b)) / delta4_).ceil().get_si());
  if (static_cast<uint64_t>(k_hi - k_lo + 1) > kStructuralPieceBudget)
    throw BudgetError("fill_in structural enumeration: too many candidate cones");

  const Rational s_left = scale_ * G_.g[0][0];
  const Rational s_right = scale_ * G_.g[1][0];
  std::vector<Affine1> pieces;
  for (long k = k_lo; k <= k_hi; ++k) {
    Rational u = Rational(k, 1) * delta4_;
    Rational c = base_value_at({k});
    if (u.sign() >= 0 && u < Rational(1)) out.insert(u);
    pieces.push_back({s_left, c - s_left * u});
    pieces.push_back({s_right, c - s_right * u});
  }
  for (size_t i = 0; i < pieces.size(); ++i)
    for (size_t j = i + 1; j < pieces.size(); ++j) insert_crossing(pieces[i], pieces[j], out);
}

std::string FillInNode::describe() const {
  return "fill_in[delta4=" + delta4_.str() + ", scale=" + scale_.str() + ", base=" + base_.describe() + "]";
}

// -------------------------------------------------------- SymmetrizeNode

SymmetrizeNode::SymmetrizeNode(PwlExpr comb, PwlExpr fillin, PwlExpr eta, RatVec b)
    : comb_(std::move(comb)), fillin_(std::move(fillin)), eta_(std::move(eta)), b_(std::move(b)) {
  if (comb_.dim() != b_.dim() || fillin_.dim() != b_.dim() || eta_.dim() != b_.dim())
    throw ConstructionError("symmetrize children disagree on dimension");
}

Rational SymmetrizeNode::eval(const RatVec& x) const {
  Rational c = comb_.eval(x);
  Rational e = eta_.eval(x);
  if (c < e) return min(fillin_.eval(x), e);
  if (c > e) {
    RatVec r = b_ - x;
    return Rational(1) - min(fillin_.eval(r), eta_.eval(r));
  }
  return e;
}

std::optional<Rational> SymmetrizeNode::lipschitz() const {
  // Valid whenever the node is continuous, i.e. fillin >= comb and the C2
  // identities of comb and eta hold; the stage certificates check these.
  auto lf = fillin_.lipschitz();
  auto le = eta_.lipschitz();
  if (!lf || !le) return std::nullopt;
  return max(*lf, *le);
}

void SymmetrizeNode::collect_breakpoints_1d(std::set<Rational>& out) const {
  require_1d(b_.dim(), "symmetrize enumeration");
  const Rational b = b_[0];

  std::set<Rational> child;
  child.insert(Rational(0));
  comb_.node().collect_breakpoints_1d(child);
  fillin_.node().collect_breakpoints_1d(child);
  eta_.node().collect_breakpoints_1d(child);

  std::set<Rational> part = child;
  part.insert(b.frac());
  for (const auto& beta : child) part.insert((b - beta).frac());

  // On each interval of the partition, comb, eta, fillin and their
  // reflections are all affine; the remaining kinks of the symmetrized
  // function are roots of the branch and min selectors.
  std::vector<Rational> pts(part.begin(), part.end());
  auto eval1 = [&](const PwlExpr& f, const Rational& x) {
    return f.eval(RatVec{x});
  };
  const size_t m = pts.size();
  for (size_t i = 0; i < m; ++i) {
    Rational l = pts[i];
    Rational r = (i + 1 < m) ? pts[i + 1] : pts[0] + Rational(1);
    if (l == r) continue;
    Rational dl[3], dr[3];
    dl[0] = eval1(comb_, l) - eval1(eta_, l);
    dr[0] = eval1(comb_, r) - eval1(eta_, r);
    dl[1] = eval1(fillin_, l) - eval1(eta_, l);
    dr[1] = eval1(fillin_, r) - eval1(eta_, r);
    dl[2] = eval1(fillin_, b - l) - eval1(eta_, b - l);
    dr[2] = eval1(fillin_, b - r) - eval1(eta_, b - r);
    for (int t = 0; t < 3; ++t) {
      if (dl[t].sign() * dr[t].sign() >= 0) continue;
      Rational root = l + (dl[t] / (dl[t] - dr[t])) * (r - l);
      out.insert(root.frac());
    }
  }
  for (const auto& x : part) out.insert(x);
}

std::string SymmetrizeNode::describe() const { return "symmetrize[b=" + b_.str() + "]"; }

}  // namespace gjext
