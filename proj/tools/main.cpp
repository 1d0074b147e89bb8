// Command-line front end: builds approximation bundles, verifies
// certificates, measures sup distances, runs the cut demo, and exports
// plot data. Exit codes: 0 success, 1 certificate FAIL, 2 usage,
// 3 budget, 4 INDETERMINATE.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "gjext/io.hpp"
#include "gjext/rng.hpp"

namespace {

using namespace gjext;

constexpr int kExitOk = 0;
constexpr int kExitCertFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;
constexpr int kExitIndeterminate = 4;

uint64_t default_point_budget() {
  if (const char* env = std::getenv("GJEXT_BUDGET_POINTS")) return std::strtoull(env, nullptr, 10);
  return kDefaultEnumBudget;
}

struct CommonOpts {
  std::string spec;
  std::string eps = "1/2";
  std::string mode = "lab";
  std::string resolution = "1/16";
  uint64_t probes = 1000;
  uint64_t seed = 1;
  std::string out_dir = "bundle";
  uint64_t budget_pairs = 20'000'000;
  std::string delta1, delta2, delta3, delta4;
  std::string distance_resolution = "1/64";
  std::string params_file;
};

// Values from a parameter document fill any field the command line left at
// its default; explicit flags win.
void merge_params_file(CommonOpts& o, const CLI::App* cmd) {
  if (o.params_file.empty()) return;
  Json j = parse_json_file(o.params_file);
  auto pull = [&](const char* flag, const char* key, std::string& into) {
    if (cmd->count(flag) == 0 && j.contains(key)) into = j.at(key).get<std::string>();
  };
  pull("--mode", "mode", o.mode);
  pull("--eps", "eps", o.eps);
  pull("--delta1", "delta1", o.delta1);
  pull("--delta2", "delta2", o.delta2);
  pull("--delta3", "delta3", o.delta3);
  pull("--delta4", "delta4", o.delta4);
}

MinimalFunctionSpec load_spec(const std::string& text) {
  if (std::filesystem::exists(text)) {
    GridFunction grid = grid_from_json(parse_json_file(text));
    return from_grid(grid, text);
  }
  return resolve_named_spec(text);
}

CertOptions cert_options(const CommonOpts& o) {
  CertOptions c;
  c.resolution = Rational::parse(o.resolution);
  c.probes = o.probes;
  c.seed = o.seed;
  c.budget_pairs = o.budget_pairs;
  c.budget_points = default_point_budget();
  return c;
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Pass: return kExitOk;
    case Verdict::Fail: return kExitCertFail;
    case Verdict::Indeterminate: return kExitIndeterminate;
  }
  return kExitCertFail;
}

int cmd_catalog() {
  for (const auto& e : catalog_entries())
    std::cout << e.name << "\t" << e.syntax << "\t" << e.summary << "\n";
  return kExitOk;
}

int cmd_build(const CommonOpts& o) {
  MinimalFunctionSpec spec = load_spec(o.spec);
  Rational eps = Rational::parse(o.eps);

  PipelineParams params;
  if (o.mode == "strict") {
    params = choose_params_strict(spec, eps);
  } else if (o.mode == "lab") {
    if (o.delta1.empty() || o.delta2.empty() || o.delta3.empty() || o.delta4.empty())
      throw UsageError("lab mode needs --delta1 --delta2 --delta3 --delta4");
    params = choose_params_lab(spec, eps,
                               LabDeltas{Rational::parse(o.delta1), Rational::parse(o.delta2),
                                         Rational::parse(o.delta3), Rational::parse(o.delta4)});
  } else {
    throw UsageError("--mode must be strict or lab");
  }
  if (params.eps_clamped) std::cout << "notice: eps clamped to 1/2\n";

  RunOptions run;
  run.cert = cert_options(o);
  run.distance_resolution = Rational::parse(o.distance_resolution);
  PipelineResult result = run_pipeline(spec, params, run);
  write_bundle(o.out_dir, result, spec.name);

  std::cout << "bundle written to " << o.out_dir << "\n";
  std::cout << one_line(result.preconditions.combined) << "\n";
  if (!result.distances.empty())
    std::cout << "||input - pi_sym||_inf in [" << result.distances.back().dist.lower.str() << ", "
              << result.total_upper.str() << "]\n";
  for (const auto& d : result.distances)
    std::cout << d.from << " -> " << d.to << ": upper " << d.dist.upper.str()
              << (d.bound_holds ? (*d.bound_holds ? " (bound ok)" : " (bound violated)") : "") << "\n";
  if (!result.ok) return kExitCertFail;
  return kExitOk;
}

int cmd_verify(const CommonOpts& o, const std::string& stage) {
  CertOptions c = cert_options(o);
  PwlExpr expr = [&]() -> PwlExpr {
    if (std::filesystem::is_directory(o.spec)) {
      Bundle bundle = read_bundle(o.spec);
      auto it = bundle.stages.find(stage.empty() ? "pi_sym" : stage);
      if (it == bundle.stages.end()) throw UsageError("bundle has no stage '" + stage + "'");
      return it->second;
    }
    return load_spec(o.spec).as_expr();
  }();
  RatVec b = [&]() {
    if (std::filesystem::is_directory(o.spec)) return read_bundle(o.spec).params.b;
    return load_spec(o.spec).b;
  }();

  MinimalityReport rep = minimality_certificate(expr, b, c);
  for (const Certificate* cert : {&rep.c1, &rep.c2, &rep.subadditive}) std::cout << one_line(*cert) << "\n";
  std::cout << "minimality " << to_string(rep.verdict()) << " [" << to_string(rep.weakest_mode()) << "]\n";
  return verdict_exit(rep.verdict());
}

int cmd_distance(const CommonOpts& o, const std::string& from, const std::string& to) {
  if (!std::filesystem::is_directory(o.spec)) throw UsageError("--spec must be a bundle directory for distance");
  Bundle bundle = read_bundle(o.spec);
  auto get = [&](const std::string& name) -> PwlExpr {
    if (name == "input") return load_spec(bundle.spec_name).as_expr();
    auto it = bundle.stages.find(name);
    if (it == bundle.stages.end()) throw UsageError("bundle has no stage '" + name + "'");
    return it->second;
  };
  PwlExpr f = get(from.empty() ? "input" : from);
  PwlExpr g = get(to.empty() ? "pi_sym" : to);
  auto lf = f.lipschitz(), lg = g.lipschitz();
  if (!lf || !lg) throw UsageError("stage without a Lipschitz constant");
  SupDistance d = sup_distance(f, g, Rational::parse(o.distance_resolution), *lf, *lg, default_point_budget());
  std::cout << "lower " << d.lower.str() << "\nupper " << d.upper.str() << "\nargmax " << d.argmax.str() << "\n";
  return kExitOk;
}

int cmd_demo_cut(const CommonOpts& o, const std::string& columns_arg, const std::string& y_arg, uint64_t random_n) {
  MinimalFunctionSpec spec = load_spec(o.spec);
  PwlExpr f = spec.as_expr();

  auto run_one = [&](const std::vector<RatVec>& cols, const std::vector<Int>& mult) {
    CutDemoReport rep = cut_validity_demo(f, spec.b, cols, mult);
    std::cout << "columns:";
    for (const auto& c : rep.columns) std::cout << " " << c.str();
    std::cout << "\ncoefficients:";
    for (const auto& c : rep.coefficients) std::cout << " " << c.str();
    std::cout << "\nlhs = " << rep.lhs.str() << (rep.valid ? " >= 1 (valid)" : " < 1 (VIOLATED)") << "\n";
    std::cout << "zero solution: lhs = 0 < 1, cut off\n";
    return rep.valid;
  };

  bool all_valid = true;
  if (random_n > 0) {
    Rng rng(o.seed);
    for (uint64_t i = 0; i < random_n; ++i) {
      std::vector<RatVec> cols;
      std::vector<Int> mult;
      uint64_t k = 1 + rng.below(3);
      RatVec acc = RatVec::zero(spec.n);
      for (uint64_t c = 0; c < k; ++c) {
        RatVec p = rng.unit_vector(spec.n, 32);
        Int y = Int(1 + static_cast<long>(rng.below(3)));
        cols.push_back(p);
        mult.push_back(y);
        acc = acc + Rational(y) * p;
      }
      // Close the instance: one more column with multiplicity 1 lands the
      // sum back on b modulo the lattice.
      cols.push_back((spec.b - acc).frac());
      mult.push_back(Int(1));
      all_valid = run_one(cols, mult) && all_valid;
      std::cout << "\n";
    }
  } else {
    std::vector<RatVec> cols;
    std::vector<Int> mult;
    std::stringstream cs(columns_arg);
    std::string tok;
    while (std::getline(cs, tok, ';')) {
      std::stringstream vs(tok);
      std::string coord;
      std::vector<Rational> coords;
      while (std::getline(vs, coord, ',')) coords.push_back(Rational::parse(coord));
      cols.push_back(RatVec(coords));
    }
    std::stringstream ys(y_arg);
    while (std::getline(ys, tok, ',')) mult.push_back(Int(tok));
    all_valid = run_one(cols, mult);
  }
  return all_valid ? kExitOk : kExitCertFail;
}

int cmd_export_plot(const CommonOpts& o, const std::string& stage, const std::string& out_file) {
  PwlExpr expr = [&]() -> PwlExpr {
    if (std::filesystem::is_directory(o.spec)) {
      Bundle bundle = read_bundle(o.spec);
      auto it = bundle.stages.find(stage.empty() ? "pi_sym" : stage);
      if (it == bundle.stages.end()) throw UsageError("bundle has no stage '" + stage + "'");
      return it->second;
    }
    return load_spec(o.spec).as_expr();
  }();
  std::ofstream out(out_file);
  if (!out) throw Error("cannot write " + out_file);
  export_plot_csv(out, expr, Rational::parse(o.resolution), default_point_budget());
  std::cout << "wrote " << out_file << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"extreme-function approximation pipeline with exact certificates"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string stage, from, to, columns_arg, y_arg, out_file = "plot.csv";
  uint64_t random_n = 0;

  auto add_common = [&](CLI::App* cmd, bool needs_spec) {
    if (needs_spec) cmd->add_option("--spec", o.spec, "catalog spec, grid file, or bundle directory")->required();
    cmd->add_option("--eps", o.eps, "target tolerance, rational p/q");
    cmd->add_option("--resolution", o.resolution, "grid resolution for exact sweeps, 1/p");
    cmd->add_option("--probes", o.probes, "random probe count");
    cmd->add_option("--seed", o.seed, "probe seed");
    cmd->add_option("--budget-pairs", o.budget_pairs, "pair-sweep budget");
  };

  CLI::App* c_catalog = app.add_subcommand("catalog", "list built-in minimal functions");
  (void)c_catalog;

  CLI::App* c_build = app.add_subcommand("build", "run the pipeline and write a bundle");
  add_common(c_build, true);
  c_build->add_option("--mode", o.mode, "strict or lab");
  c_build->add_option("--params", o.params_file, "JSON parameter document (mode, eps, delta1..delta4)");
  c_build->add_option("--delta1", o.delta1, "lab delta1, 1/p");
  c_build->add_option("--delta2", o.delta2, "lab delta2 = delta1/q");
  c_build->add_option("--delta3", o.delta3, "lab delta3, 1/p");
  c_build->add_option("--delta4", o.delta4, "lab delta4 = delta3/q");
  c_build->add_option("--out", o.out_dir, "bundle output directory");
  c_build->add_option("--distance-resolution", o.distance_resolution, "probe grid for sup distances");

  CLI::App* c_verify = app.add_subcommand("verify", "minimality certificates for a spec, grid file, or bundle stage");
  add_common(c_verify, true);
  c_verify->add_option("--stage", stage, "bundle stage name (default pi_sym)");

  CLI::App* c_distance = app.add_subcommand("distance", "certified sup-distance bracket between bundle stages");
  add_common(c_distance, true);
  c_distance->add_option("--from", from, "stage or 'input' (default input)");
  c_distance->add_option("--to", to, "stage (default pi_sym)");
  c_distance->add_option("--distance-resolution", o.distance_resolution, "probe grid");

  CLI::App* c_demo = app.add_subcommand("demo-cut", "valid-inequality demonstration");
  add_common(c_demo, true);
  c_demo->add_option("--columns", columns_arg, "semicolon-separated columns, comma-separated coords");
  c_demo->add_option("--y", y_arg, "comma-separated nonnegative integers");
  c_demo->add_option("--random", random_n, "generate N random feasible instances");

  CLI::App* c_plot = app.add_subcommand("export-plot", "sample a stage to CSV");
  add_common(c_plot, true);
  c_plot->add_option("--stage", stage, "bundle stage name (default pi_sym)");
  c_plot->add_option("--out", out_file, "output CSV path");

  try {
    app.parse(argc, argv);
    if (app.got_subcommand("catalog")) return cmd_catalog();
    if (app.got_subcommand("build")) {
      merge_params_file(o, c_build);
      return cmd_build(o);
    }
    if (app.got_subcommand("verify")) return cmd_verify(o, stage);
    if (app.got_subcommand("distance")) return cmd_distance(o, from, to);
    if (app.got_subcommand("demo-cut")) return cmd_demo_cut(o, columns_arg, y_arg, random_n);
    if (app.got_subcommand("export-plot")) return cmd_export_plot(o, stage, out_file);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "{\"error\":\"usage\",\"message\":\"" << e.what() << "\"}\n";
    return kExitUsage;
  } catch (const BudgetError& e) {
    std::cerr << "{\"error\":\"budget\",\"message\":\"" << e.what() << "\"}\n";
    return kExitBudget;
  } catch (const CertificateError& e) {
    std::cerr << "{\"error\":\"certificate\",\"message\":\"" << e.what() << "\"}\n";
    return kExitCertFail;
  } catch (const std::exception& e) {
    std::cerr << "{\"error\":\"construction\",\"message\":\"" << e.what() << "\"}\n";
    return kExitUsage;
  }
}
