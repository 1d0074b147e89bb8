#pragma once

#include <json.hpp>

#include <filesystem>
#include <iosfwd>

#include "gjext/pipeline.hpp"

namespace gjext {

using Json = nlohmann::json;

// Rationals serialize as "p/q" (or "p" when q = 1); vectors as arrays of
// such strings. All documents are plain JSON with sorted keys, so
// serialize -> parse -> serialize is byte-identical.

Json to_json(const Rational& r);
Rational rational_from_json(const Json& j);

Json to_json(const RatVec& v);
RatVec vec_from_json(const Json& j);

Json to_json(const GridFunction& g);
GridFunction grid_from_json(const Json& j);

Json to_json(const GaugeSimplex& g);
GaugeSimplex gauge_from_json(const Json& j);

Json to_json(const TauChoice& t);
TauChoice tau_from_json(const Json& j);

Json expr_to_json(const PwlExpr& e);
/// Rebuilds an expression tree; catalog leaves are resolved by name (and
/// re-registered).
PwlExpr expr_from_json(const Json& j);

Json to_json(const Witness& w);
Json to_json(const Certificate& c);
Json to_json(const PipelineParams& p);
PipelineParams params_from_json(const Json& j);

Json report_json(const PipelineResult& r, const std::string& spec_name);

std::string dump_json(const Json& j);
Json parse_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

/// Writes the full bundle directory: params ledger, gauge, five stage
/// files, eta, and the certificate report.
void write_bundle(const std::filesystem::path& dir, const PipelineResult& result, const std::string& spec_name);

struct Bundle {
  PipelineParams params;
  Json report;
  std::map<std::string, PwlExpr> stages;  // pi_pwl, pi_tilde, pi_comb, pi_fill_in, eta_aux, pi_sym
  std::string spec_name;
};

Bundle read_bundle(const std::filesystem::path& dir);

/// CSV with exact "p/q" values plus a 12-place decimal display column.
void export_plot_csv(std::ostream& os, const PwlExpr& e, const Rational& resolution, uint64_t budget);

std::string one_line(const Certificate& c);

}  // namespace gjext
