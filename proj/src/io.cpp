#include "gjext/io.hpp"

#include <fstream>
#include <ostream>

#include "gjext/errors.hpp"

namespace gjext {

Json to_json(const Rational& r) { return r.str(); }

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw ParseError("expected a rational string, got " + j.dump());
}

Json to_json(const RatVec& v) {
  Json arr = Json::array();
  for (const auto& x : v.coords()) arr.push_back(x.str());
  return arr;
}

RatVec vec_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("expected a nonempty array of rationals");
  std::vector<Rational> out;
  for (const auto& e : j) out.push_back(rational_from_json(e));
  return RatVec(std::move(out));
}

Json to_json(const GridFunction& g) {
  Json j;
  j["n"] = g.n();
  j["delta"] = g.delta().str();
  j["b"] = to_json(g.b());
  Json vals = Json::array();
  for (const auto& v : g.values()) vals.push_back(v.str());
  j["values"] = std::move(vals);
  return j;
}

GridFunction grid_from_json(const Json& j) {
  int n = j.at("n").get<int>();
  Rational delta = rational_from_json(j.at("delta"));
  RatVec b = vec_from_json(j.at("b"));
  std::vector<Rational> values;
  for (const auto& e : j.at("values")) values.push_back(rational_from_json(e));
  return GridFunction(n, delta, b, std::move(values));
}

Json to_json(const GaugeSimplex& g) {
  Json j;
  j["n"] = g.n;
  j["b"] = to_json(g.b);
  j["delta3"] = g.delta3.str();
  Json v = Json::array(), d = Json::array();
  for (const auto& vi : g.v) v.push_back(to_json(vi));
  for (const auto& gi : g.g) d.push_back(to_json(gi));
  j["v"] = std::move(v);
  j["g"] = std::move(d);
  return j;
}

GaugeSimplex gauge_from_json(const Json& j) {
  GaugeSimplex g = build_gauge(vec_from_json(j.at("b")), rational_from_json(j.at("delta3")));
  // The vector families are derived data; re-derive and audit against the
  // document.
  Json audit = to_json(g);
  if (j.contains("v") && audit["v"] != j.at("v"))
    throw ParseError("gauge document vertex family disagrees with its (b, delta3)");
  if (j.contains("g") && audit["g"] != j.at("g"))
    throw ParseError("gauge document dual family disagrees with its (b, delta3)");
  return g;
}

Json to_json(const TauChoice& t) {
  Json j;
  j["tau"] = t.tau.get_str();
  j["s"] = t.s.get_str();
  j["m"] = t.m.get_str();
  return j;
}

TauChoice tau_from_json(const Json& j) {
  return TauChoice{Int(j.at("tau").get<std::string>()), Int(j.at("s").get<std::string>()),
                   Int(j.at("m").get<std::string>())};
}

Json expr_to_json(const PwlExpr& e) {
  Json j;
  switch (e.kind()) {
    case ExprKind::GridLeaf:
      j["type"] = "grid";
      j["grid"] = to_json(static_cast<const GridLeafNode&>(e.node()).grid());
      break;
    case ExprKind::OracleLeaf:
      j["type"] = "catalog";
      j["name"] = static_cast<const OracleLeafNode&>(e.node()).name();
      break;
    case ExprKind::PiDelta3Stage:
      j["type"] = "pi_delta3";
      j["gauge"] = to_json(static_cast<const PiDelta3Node&>(e.node()).stage().gauge());
      break;
    case ExprKind::PiAuxStage:
      j["type"] = "pi_aux";
      j["gauge"] = to_json(static_cast<const PiAuxNode&>(e.node()).gauge());
      break;
    case ExprKind::EtaAuxStage: {
      const auto& node = static_cast<const EtaAuxNode&>(e.node());
      j["type"] = "eta_aux";
      j["gauge"] = to_json(node.stage().gauge());
      j["tau"] = to_json(node.stage().tau());
      j["eps"] = node.stage().eps().str();
      break;
    }
    case ExprKind::AffineCombo: {
      const auto& node = static_cast<const AffineComboNode&>(e.node());
      j["type"] = "affine";
      j["a"] = node.coeff_a().str();
      j["f"] = expr_to_json(node.f());
      j["c"] = node.coeff_b().str();
      j["g"] = expr_to_json(node.g());
      j["k"] = node.constant().str();
      break;
    }
    case ExprKind::FillIn: {
      const auto& node = static_cast<const FillInNode&>(e.node());
      j["type"] = "fill_in";
      j["base"] = expr_to_json(node.base());
      j["gauge"] = to_json(node.gauge());
      j["scale"] = node.scale().str();
      j["delta4"] = node.delta4().str();
      break;
    }
    case ExprKind::Symmetrize: {
      const auto& node = static_cast<const SymmetrizeNode&>(e.node());
      j["type"] = "symmetrize";
      j["comb"] = expr_to_json(node.comb());
      j["fillin"] = expr_to_json(node.fillin());
      j["eta"] = expr_to_json(node.eta());
      j["b"] = to_json(node.b());
      break;
    }
  }
  return j;
}

PwlExpr expr_from_json(const Json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "grid") return PwlExpr::grid_leaf(grid_from_json(j.at("grid")));
  if (type == "catalog") return resolve_named_spec(j.at("name").get<std::string>()).as_expr();
  if (type == "pi_delta3") return PwlExpr::pi_delta3(gauge_from_json(j.at("gauge")));
  if (type == "pi_aux") return PwlExpr::pi_aux(gauge_from_json(j.at("gauge")));
  if (type == "eta_aux")
    return PwlExpr::eta_aux(gauge_from_json(j.at("gauge")), tau_from_json(j.at("tau")),
                            rational_from_json(j.at("eps")));
  if (type == "affine")
    return PwlExpr::affine_combo(rational_from_json(j.at("a")), expr_from_json(j.at("f")),
                                 rational_from_json(j.at("c")), expr_from_json(j.at("g")),
                                 rational_from_json(j.at("k")));
  if (type == "fill_in")
    return PwlExpr::fill_in(expr_from_json(j.at("base")), gauge_from_json(j.at("gauge")),
                            rational_from_json(j.at("scale")), rational_from_json(j.at("delta4")));
  if (type == "symmetrize")
    return PwlExpr::symmetrize(expr_from_json(j.at("comb")), expr_from_json(j.at("fillin")),
                               expr_from_json(j.at("eta")), vec_from_json(j.at("b")));
  throw ParseError("unknown expression node type '" + type + "'");
}

Json to_json(const Witness& w) {
  Json j;
  j["x"] = to_json(w.x);
  if (w.y) j["y"] = to_json(*w.y);
  Json vals = Json::array();
  for (const auto& [name, value] : w.values) {
    Json e;
    e["name"] = name;
    e["value"] = value.str();
    vals.push_back(std::move(e));
  }
  j["values"] = std::move(vals);
  if (!w.note.empty()) j["note"] = w.note;
  return j;
}

Json to_json(const Certificate& c) {
  Json j;
  j["property"] = to_string(c.property);
  j["mode"] = to_string(c.mode);
  j["verdict"] = to_string(c.verdict);
  if (c.witness) j["witness"] = to_json(*c.witness);
  if (c.extremal_slack) j["extremal_slack"] = c.extremal_slack->str();
  j["seed"] = c.seed;
  j["resolution"] = c.resolution.str();
  j["probes"] = c.probes;
  j["detail"] = c.detail;
  j["elapsed_seconds"] = c.elapsed_seconds;
  return j;
}

Json to_json(const PipelineParams& p) {
  Json j;
  j["mode"] = to_string(p.mode);
  j["n"] = p.n;
  j["b"] = to_json(p.b);
  j["eps"] = p.eps.str();
  j["eps_clamped"] = p.eps_clamped;
  j["delta1"] = p.delta1.str();
  j["delta2"] = p.delta2.str();
  j["delta3"] = p.delta3.str();
  j["delta4"] = p.delta4.str();
  j["tau"] = to_json(p.tau);
  j["lipschitz_input"] = p.lipschitz_input.str();
  j["lipschitz_pwl"] = p.lipschitz_pwl.str();
  j["lipschitz_tilde"] = p.lipschitz_tilde.str();
  j["lipschitz_tilde_formula"] = p.lipschitz_tilde_formula.str();
  j["lipschitz_tilde_actual"] = p.lipschitz_tilde_actual.str();
  j["lipschitz_gamma"] = p.lipschitz_gamma.str();
  Json flags = Json::array();
  for (const auto& r : p.inequalities) {
    Json e;
    e["name"] = r.name;
    e["holds"] = r.holds;
    e["detail"] = r.detail;
    flags.push_back(std::move(e));
  }
  j["inequalities"] = std::move(flags);
  return j;
}

PipelineParams params_from_json(const Json& j) {
  PipelineParams p;
  p.mode = j.at("mode").get<std::string>() == "strict" ? PipelineMode::Strict : PipelineMode::Lab;
  p.n = j.at("n").get<int>();
  p.b = vec_from_json(j.at("b"));
  p.eps = rational_from_json(j.at("eps"));
  p.eps_clamped = j.at("eps_clamped").get<bool>();
  p.delta1 = rational_from_json(j.at("delta1"));
  p.delta2 = rational_from_json(j.at("delta2"));
  p.delta3 = rational_from_json(j.at("delta3"));
  p.delta4 = rational_from_json(j.at("delta4"));
  p.tau = tau_from_json(j.at("tau"));
  p.lipschitz_input = rational_from_json(j.at("lipschitz_input"));
  p.lipschitz_pwl = rational_from_json(j.at("lipschitz_pwl"));
  p.lipschitz_tilde = rational_from_json(j.at("lipschitz_tilde"));
  p.lipschitz_tilde_formula = rational_from_json(j.at("lipschitz_tilde_formula"));
  p.lipschitz_tilde_actual = rational_from_json(j.at("lipschitz_tilde_actual"));
  p.lipschitz_gamma = rational_from_json(j.at("lipschitz_gamma"));
  for (const auto& e : j.at("inequalities"))
    p.inequalities.push_back({e.at("name").get<std::string>(), e.at("holds").get<bool>(),
                              e.at("detail").get<std::string>()});
  return p;
}

std::string one_line(const Certificate& c) {
  std::string s = to_string(c.property) + " " + to_string(c.verdict) + " [" + to_string(c.mode) + "]";
  if (c.extremal_slack) s += " slack=" + c.extremal_slack->str();
  if (!c.detail.empty()) s += " :: " + c.detail;
  return s;
}

Json report_json(const PipelineResult& r, const std::string& spec_name) {
  Json j;
  j["spec"] = spec_name;
  j["ok"] = r.ok;
  Json parts = Json::array();
  auto push = [&](const std::string& name, const Certificate& c) {
    Json e;
    e["name"] = name;
    e["certificate"] = to_json(c);
    parts.push_back(std::move(e));
  };
  push("pi_sym:C1", r.preconditions.minimality.c1);
  push("pi_sym:C2", r.preconditions.minimality.c2);
  push("pi_sym:SUBADDITIVE", r.preconditions.minimality.subadditive);
  push("pi_sym:SLOPE_CENSUS", r.preconditions.census);
  push("pi_sym:GENUINE_DIM", r.preconditions.genuine_dim);
  push("pi_sym:EXTREME_PRECONDITIONS", r.preconditions.combined);
  for (const auto& [name, c] : r.stage_certificates) push(name, c);
  j["certificates"] = std::move(parts);

  Json inv;
  inv["fill_ge_comb_probed"] = r.invariants.fill_ge_comb;
  inv["fill_eq_comb_on_grid"] = r.invariants.fill_eq_comb_on_grid;
  inv["eta_in_range_probed"] = r.invariants.eta_in_range;
  inv["tilde_in_unit_interval"] = r.invariants.tilde_in_unit;
  if (r.invariants.witness) inv["witness"] = to_json(*r.invariants.witness);
  j["invariants"] = std::move(inv);

  Json dists = Json::array();
  for (const auto& d : r.distances) {
    Json e;
    e["from"] = d.from;
    e["to"] = d.to;
    e["lower"] = d.dist.lower.str();
    e["upper"] = d.dist.upper.str();
    e["argmax"] = to_json(d.dist.argmax);
    if (d.strict_bound) e["bound"] = d.strict_bound->str();
    if (d.bound_holds) e["bound_holds"] = *d.bound_holds;
    dists.push_back(std::move(e));
  }
  j["distances"] = std::move(dists);
  j["total_upper"] = r.total_upper.str();
  j["triangle_upper"] = r.triangle_upper.str();
  j["expected_gradient_count"] = r.expected_gradients.size();
  return j;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ParseError("cannot parse " + path.string() + ": " + e.what());
  }
  return j;
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << dump_json(j);
}

void write_bundle(const std::filesystem::path& dir, const PipelineResult& result, const std::string& spec_name) {
  std::filesystem::create_directories(dir);
  Json params = to_json(result.params);
  params["spec"] = spec_name;
  write_json_file(dir / "params.json", params);
  write_json_file(dir / "gauge.json", to_json(result.gauge));
  write_json_file(dir / "pi_pwl.json", expr_to_json(result.pi_pwl));
  write_json_file(dir / "pi_tilde.json", expr_to_json(result.pi_tilde));
  write_json_file(dir / "pi_comb.json", expr_to_json(result.pi_comb));
  write_json_file(dir / "pi_fill_in.json", expr_to_json(result.pi_fill_in));
  write_json_file(dir / "eta_aux.json", expr_to_json(result.eta));
  write_json_file(dir / "pi_sym.json", expr_to_json(result.pi_sym));
  write_json_file(dir / "certificates.json", report_json(result, spec_name));
}

Bundle read_bundle(const std::filesystem::path& dir) {
  Json params = parse_json_file(dir / "params.json");
  Bundle b{params_from_json(params), parse_json_file(dir / "certificates.json"), {}, ""};
  b.spec_name = params.value("spec", "");
  for (const char* stage : {"pi_pwl", "pi_tilde", "pi_comb", "pi_fill_in", "eta_aux", "pi_sym"})
    b.stages.emplace(stage, expr_from_json(parse_json_file(dir / (std::string(stage) + ".json"))));
  return b;
}

void export_plot_csv(std::ostream& os, const PwlExpr& e, const Rational& resolution, uint64_t budget) {
  const int n = e.dim();
  for (int i = 0; i < n; ++i) os << "x" << i << ",";
  os << "value,value_decimal\n";
  char buf[64];
  for (const RatVec& u : GridPoints(n, resolution, budget)) {
    for (int i = 0; i < n; ++i) os << u[i].str() << ",";
    Rational v = e.eval(u);
    std::snprintf(buf, sizeof(buf), "%.12f", v.to_double());
    // num/den kept explicit in the CSV so the column has one fixed shape.
    os << v.num().get_str() << "/" << v.den().get_str() << "," << buf << "\n";
  }
}

}  // namespace gjext
