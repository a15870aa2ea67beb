#pragma once

// Run configuration, versioned JSON documents and CSV exports.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdomain/audit.hpp"
#include "qdomain/conformal.hpp"
#include "qdomain/dss_solver.hpp"

namespace qdomain {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

const char* version_string();

struct RunConfig {
  SolverConfig solver;
  /// Series truncation; 0 selects 4 N.
  int N_s = 0;
  double tail_tol = 1e-10;
  /// Measure provenance for the echo: "riesz", "file" or "inline".
  std::string measure_source = "riesz";
  std::string measure_file;
  double a_max = 0.0;
  int a_points = 0;
  Spacing spacing = Spacing::geometric;
  std::optional<double> c_override;
  std::string out_dir = ".";
  AuditOptions audit;
  /// Fault injection for the self-test; only "radial_weights" is recognized.
  std::string selftest_fault;

  int series_degree() const { return N_s > 0 ? N_s : 4 * solver.N; }
  /// Rebuilds the a grid, checks N <= (M-1)/2 and N_s >= 2N.
  void finalize();
};

/// Reads a config document; missing keys keep their defaults. Raises
/// ErrorCode::schema on malformed input.
RunConfig config_from_json(const json& doc);
json config_to_json(const RunConfig& cfg);

/// Measure blocks: {"riesz_depth": K}, {"density": [[n, re, im], ...]} or
/// {"file": PATH} naming a document with a "density" array.
MeasureSpec measure_from_json(const json& block, int cutoff);
MeasureSpec load_measure_file(const std::string& path, int cutoff);

/// Nonzero coefficients with n >= 0 as [n, re, im]; c_{-n} is implied.
json coeffs_to_json(const TrigPolynomial& p);
TrigPolynomial coeffs_from_json(const json& entries, int cutoff);

json branch_to_json(const Branch& branch, const RunConfig& cfg);
json map_to_json(const ConformalMapRecord& rec, const RunConfig* cfg, int polyline_samples = 1024);
/// Rebuilds the map from its nu data and checks the stored Taylor coefficients.
ConformalMapRecord map_from_json(const json& doc);
json audit_to_json(const AuditReport& report, const AuditOptions& opt);
std::string audit_table(const AuditReport& report);

/// Human-readable trend lines for a solved branch.
std::string branch_summary(const Branch& branch);

/// Indented JSON with every double written by %.17g.
std::string dump_json(const json& doc);
json parse_json(const std::string& text);

std::string boundary_csv(const ConformalMapRecord& rec, int samples);
std::string geometry_csv(const std::vector<std::pair<double, GeometryReport>>& rows);
std::string moments_csv(const std::vector<MomentCurve>& curves);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace qdomain
