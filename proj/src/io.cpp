#include "qdomain/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "qdomain/error.hpp"

#ifndef QDOMAIN_VERSION
#define QDOMAIN_VERSION "0.1.0"
#endif

namespace qdomain {
namespace {

std::string num(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

void write(std::ostringstream& os, const json& j, int indent) {
  const std::string pad(static_cast<size_t>(indent + 2), ' ');
  const std::string close(static_cast<size_t>(indent), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << json(it.key()).dump() << ": ";
        write(os, it.value(), indent + 2);
      }
      os << "\n" << close << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& v : j) flat = flat && !v.is_structured();
      if (flat) {
        os << "[";
        for (size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write(os, j[i], indent);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        write(os, j[i], indent + 2);
      }
      os << "\n" << close << "]";
      return;
    }
    case json::value_t::number_float:
      os << num(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

[[noreturn]] void schema_error(const std::string& what) { fail(ErrorCode::schema, what); }

const json& need(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) schema_error(std::string("missing field '") + key + "'");
  return obj.at(key);
}

double as_number(const json& v, const std::string& what) {
  if (!v.is_number()) schema_error("'" + what + "' must be a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& what) {
  if (!v.is_number_integer()) schema_error("'" + what + "' must be an integer");
  return v.get<int>();
}

bool as_bool(const json& v, const std::string& what) {
  if (!v.is_boolean()) schema_error("'" + what + "' must be a boolean");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& what) {
  if (!v.is_string()) schema_error("'" + what + "' must be a string");
  return v.get<std::string>();
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) schema_error("'" + where + "' must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!ok.count(it.key())) schema_error("unknown field '" + it.key() + "' in " + where);
}

Spacing spacing_from_string(const std::string& s) {
  if (s == "geometric") return Spacing::geometric;
  if (s == "linear") return Spacing::linear;
  schema_error("spacing must be 'geometric' or 'linear', got '" + s + "'");
}

const char* to_string(Spacing s) { return s == Spacing::geometric ? "geometric" : "linear"; }

json header(const char* kind) {
  json j = json::object();
  j["schema_version"] = kSchemaVersion;
  j["kind"] = kind;
  j["version"] = version_string();
  return j;
}

void check_header(const json& doc, const char* kind) {
  if (!doc.is_object()) schema_error("document must be a JSON object");
  if (as_int(need(doc, "schema_version"), "schema_version") != kSchemaVersion)
    schema_error("unsupported schema_version");
  if (as_string(need(doc, "kind"), "kind") != kind) schema_error(std::string("expected a '") + kind + "' document");
}

json geometry_to_json(const GeometryReport& g) {
  return {{"area", g.area},
          {"perimeter", g.perimeter},
          {"perimeter_truncated", g.perimeter_truncated},
          {"centroid", {g.centroid.real(), g.centroid.imag()}},
          {"radius_mean", g.radius_mean},
          {"radius_std", g.radius_std},
          {"circularity_deficit", g.circularity_deficit}};
}

json poly_block(const TrigPolynomial& p) { return {{"cutoff", p.cutoff()}, {"coeffs", coeffs_to_json(p)}}; }

TrigPolynomial poly_from_block(const json& block, const std::string& what) {
  return coeffs_from_json(need(block, "coeffs"), as_int(need(block, "cutoff"), what + ".cutoff"));
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

const char* version_string() { return QDOMAIN_VERSION; }

void RunConfig::finalize() {
  require(solver.N <= (solver.M - 1) / 2, ErrorCode::invalid_argument,
          "resolution inconsistent: N=" + std::to_string(solver.N) + " requires M >= " +
              std::to_string(2 * solver.N + 1));
  require(series_degree() >= 2 * solver.N, ErrorCode::invalid_argument,
          "series truncation N_s=" + std::to_string(series_degree()) + " must be >= 2N");
  if (a_points > 0) {
    require(a_max > 0.0, ErrorCode::invalid_argument, "a_max must be positive");
    solver.a_grid = make_a_grid(a_max, a_points, spacing);
  }
  solver.validate();
}

json coeffs_to_json(const TrigPolynomial& p) {
  json out = json::array();
  for (int n = 0; n <= p.cutoff(); ++n) {
    const cplx v = p[n];
    if (v != cplx{}) out.push_back({n, v.real(), v.imag()});
  }
  return out;
}

TrigPolynomial coeffs_from_json(const json& entries, int cutoff) {
  if (!entries.is_array()) schema_error("coefficients must be an array of [n, re, im]");
  require(cutoff >= 0, ErrorCode::schema, "cutoff must be >= 0");
  TrigPolynomial p(cutoff);
  for (const auto& e : entries) {
    if (!e.is_array() || e.size() != 3) schema_error("coefficient entries must be [n, re, im]");
    const int n = as_int(e[0], "n");
    if (n < 0 || n > cutoff) schema_error("coefficient index " + std::to_string(n) + " outside [0, cutoff]");
    const double re = as_number(e[1], "re");
    const double im = as_number(e[2], "im");
    if (n == 0 && im != 0.0) schema_error("mean coefficient must be real");
    p.set(n, {re, im});
  }
  return p;
}

MeasureSpec load_measure_file(const std::string& path, int cutoff) {
  const json doc = parse_json(read_file(path));
  const json& dens = need(doc, "density");
  int top = 0;
  if (dens.is_array())
    for (const auto& e : dens)
      if (e.is_array() && !e.empty() && e[0].is_number_integer()) top = std::max(top, e[0].get<int>());
  require(top <= cutoff, ErrorCode::truncation,
          "measure file has mode " + std::to_string(top) + " beyond cutoff " + std::to_string(cutoff));
  return explicit_measure(coeffs_from_json(dens, cutoff));
}

MeasureSpec measure_from_json(const json& block, int cutoff) {
  check_keys(block, "measure", {"riesz_depth", "density", "file", "source_file"});
  if (block.contains("riesz_depth") + block.contains("density") + block.contains("file") > 1)
    schema_error("measure takes exactly one of riesz_depth, density or file");
  if (block.contains("riesz_depth")) return riesz_product(as_int(block.at("riesz_depth"), "riesz_depth"), cutoff);
  if (block.contains("density")) return explicit_measure(coeffs_from_json(block.at("density"), cutoff));
  if (block.contains("file")) return load_measure_file(as_string(block.at("file"), "file"), cutoff);
  schema_error("measure needs one of riesz_depth, density or file");
}

RunConfig config_from_json(const json& doc) {
  RunConfig cfg;
  check_keys(doc, "config",
             {"schema_version", "kind", "version", "resolution", "measure", "mode", "a_grid", "tolerances",
              "max_iter", "use_newton", "seed", "contraction_probes", "contraction_step", "c_override", "out",
              "audit", "selftest_fault"});
  auto& s = cfg.solver;
  if (doc.contains("resolution")) {
    const auto& r = doc.at("resolution");
    check_keys(r, "resolution", {"N", "Nr", "M", "N_s"});
    if (r.contains("N")) s.N = as_int(r.at("N"), "N");
    if (r.contains("Nr")) s.Nr = as_int(r.at("Nr"), "Nr");
    if (r.contains("M")) s.M = as_int(r.at("M"), "M");
    if (r.contains("N_s")) cfg.N_s = as_int(r.at("N_s"), "N_s");
  }
  require(s.N >= 4 && s.Nr >= 2 && s.M >= 9, ErrorCode::invalid_argument, "resolution values too small");
  if (doc.contains("mode")) {
    try {
      s.mode = mode_from_string(as_string(doc.at("mode"), "mode"));
    } catch (const Error& e) {
      schema_error(e.what());
    }
  }
  if (doc.contains("measure")) {
    const auto& m = doc.at("measure");
    s.measure = measure_from_json(m, s.N);
    if (m.contains("riesz_depth")) {
      cfg.measure_source = "riesz";
    } else if (m.contains("file")) {
      cfg.measure_source = "file";
      cfg.measure_file = m.at("file").get<std::string>();
    } else {
      cfg.measure_source = "inline";
      if (m.contains("source_file")) cfg.measure_file = as_string(m.at("source_file"), "source_file");
    }
  } else {
    s.measure = riesz_product(0, s.N);
  }
  if (doc.contains("a_grid")) {
    const auto& g = doc.at("a_grid");
    check_keys(g, "a_grid", {"a_max", "points", "spacing", "values"});
    if (g.contains("values")) {
      const auto& v = g.at("values");
      if (!v.is_array()) schema_error("a_grid.values must be an array");
      s.a_grid.clear();
      for (const auto& x : v) s.a_grid.push_back(as_number(x, "a_grid.values[]"));
      cfg.a_points = 0;
    } else {
      if (g.contains("a_max")) cfg.a_max = as_number(g.at("a_max"), "a_max");
      if (g.contains("points"))
        cfg.a_points = as_int(g.at("points"), "points");
      else if (g.contains("a_max"))
        cfg.a_points = 5;
      if (g.contains("spacing")) cfg.spacing = spacing_from_string(as_string(g.at("spacing"), "spacing"));
    }
  }
  if (doc.contains("tolerances")) {
    const auto& t = doc.at("tolerances");
    check_keys(t, "tolerances", {"residual", "tail", "hardy", "contraction_limit"});
    if (t.contains("residual")) s.tol_residual = as_number(t.at("residual"), "residual");
    if (t.contains("tail")) cfg.tail_tol = as_number(t.at("tail"), "tail");
    if (t.contains("hardy")) cfg.audit.hardy_tol = as_number(t.at("hardy"), "hardy");
    if (t.contains("contraction_limit")) s.contraction_limit = as_number(t.at("contraction_limit"), "contraction_limit");
  }
  if (doc.contains("max_iter")) s.max_iter = as_int(doc.at("max_iter"), "max_iter");
  if (doc.contains("use_newton")) s.use_newton = as_bool(doc.at("use_newton"), "use_newton");
  if (doc.contains("seed")) {
    const auto& v = doc.at("seed");
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      schema_error("'seed' must be a nonnegative integer");
    s.seed = v.get<std::uint64_t>();
  }
  if (doc.contains("contraction_probes")) s.contraction_probes = as_int(doc.at("contraction_probes"), "contraction_probes");
  if (doc.contains("contraction_step")) s.contraction_step = as_number(doc.at("contraction_step"), "contraction_step");
  if (doc.contains("c_override") && !doc.at("c_override").is_null())
    cfg.c_override = as_number(doc.at("c_override"), "c_override");
  if (doc.contains("out")) cfg.out_dir = as_string(doc.at("out"), "out");
  if (doc.contains("audit")) {
    const auto& a = doc.at("audit");
    check_keys(a, "audit", {"n_max", "k_max", "serrin_degree", "radial_nodes", "angles", "boundary_samples"});
    auto& o = cfg.audit;
    if (a.contains("n_max")) o.n_max = as_int(a.at("n_max"), "n_max");
    if (a.contains("k_max")) o.k_max = as_int(a.at("k_max"), "k_max");
    if (a.contains("serrin_degree")) o.serrin_degree = as_int(a.at("serrin_degree"), "serrin_degree");
    if (a.contains("radial_nodes")) o.resolution.Nr = as_int(a.at("radial_nodes"), "radial_nodes");
    if (a.contains("angles")) o.resolution.M = as_int(a.at("angles"), "angles");
    if (a.contains("boundary_samples")) o.resolution.M_b = as_int(a.at("boundary_samples"), "boundary_samples");
  }
  if (doc.contains("selftest_fault")) {
    cfg.selftest_fault = as_string(doc.at("selftest_fault"), "selftest_fault");
    if (!cfg.selftest_fault.empty() && cfg.selftest_fault != "radial_weights")
      schema_error("unknown selftest_fault '" + cfg.selftest_fault + "'");
  }
  cfg.audit.c = cfg.c_override;
  cfg.finalize();
  return cfg;
}

json config_to_json(const RunConfig& cfg) {
  const auto& s = cfg.solver;
  json j = json::object();
  j["resolution"] = {{"N", s.N}, {"Nr", s.Nr}, {"M", s.M}, {"N_s", cfg.series_degree()}};
  json measure = json::object();
  if (cfg.measure_source == "riesz" && s.measure.kind == MeasureSpec::Kind::riesz_product) {
    measure["riesz_depth"] = s.measure.depth;
  } else {
    measure["density"] = coeffs_to_json(s.measure.density);
    if (!cfg.measure_file.empty()) measure["source_file"] = cfg.measure_file;
  }
  j["measure"] = measure;
  j["mode"] = to_string(s.mode);
  if (cfg.a_points > 0)
    j["a_grid"] = {{"a_max", cfg.a_max}, {"points", cfg.a_points}, {"spacing", to_string(cfg.spacing)}};
  else
    j["a_grid"] = {{"values", s.a_grid}};
  j["tolerances"] = {{"residual", s.tol_residual},
                     {"tail", cfg.tail_tol},
                     {"hardy", cfg.audit.hardy_tol},
                     {"contraction_limit", s.contraction_limit}};
  j["max_iter"] = s.max_iter;
  j["use_newton"] = s.use_newton;
  j["seed"] = s.seed;
  j["contraction_probes"] = s.contraction_probes;
  j["contraction_step"] = s.contraction_step;
  j["c_override"] = cfg.c_override ? json(*cfg.c_override) : json(nullptr);
  j["audit"] = {{"n_max", cfg.audit.n_max},
                {"k_max", cfg.audit.k_max},
                {"serrin_degree", cfg.audit.serrin_degree},
                {"radial_nodes", cfg.audit.resolution.Nr},
                {"angles", cfg.audit.resolution.M},
                {"boundary_samples", cfg.audit.resolution.M_b}};
  if (!cfg.selftest_fault.empty()) j["selftest_fault"] = cfg.selftest_fault;
  return j;
}

json branch_to_json(const Branch& branch, const RunConfig& cfg) {
  json j = header("branch");
  j["config"] = config_to_json(cfg);
  j["stop_reason"] = branch.stop_reason;
  j["stop_detail"] = branch.stop_detail;
  j["stopped_at_a"] = branch.stopped_at_a;
  json pts = json::array();
  for (const auto& p : branch.points) {
    pts.push_back({{"a", p.a},
                   {"log_C", p.log_C},
                   {"C", p.C},
                   {"c", p.c},
                   {"residual", p.residual},
                   {"contraction_est", p.contraction_est},
                   {"iterations", p.iterations},
                   {"stop_reason", p.stop_reason},
                   {"projection_correction", p.projection_correction},
                   {"holder_half", p.holder_half},
                   {"W", coeffs_to_json(p.W)}});
  }
  j["points"] = pts;
  return j;
}

json map_to_json(const ConformalMapRecord& rec, const RunConfig* cfg, int polyline_samples) {
  json j = header("map");
  if (cfg) j["config"] = config_to_json(*cfg);
  j["mode"] = to_string(rec.mode);
  j["a"] = rec.a;
  j["C"] = rec.C;
  j["c"] = 0.5 * rec.C;
  j["series_degree"] = rec.series_degree;
  j["tail_tol"] = cfg ? cfg->tail_tol : 1e-10;
  j["w"] = poly_block(rec.w);
  j["mu"] = poly_block(rec.mu);
  json f = json::array();
  for (int k = 0; k <= rec.f.degree(); ++k)
    if (rec.f[k] != cplx{}) f.push_back({k, rec.f[k].real(), rec.f[k].imag()});
  j["f"] = f;
  j["equivariance_defect"] = rec.equivariance_defect;
  j["geometry"] = geometry_to_json(geometry(rec, 8 * rec.series_degree));
  const auto pts = rec.f.on_circle(1.0, polyline_samples);
  json xs = json::array(), ys = json::array();
  for (const auto& p : pts) {
    xs.push_back(p.real());
    ys.push_back(p.imag());
  }
  j["boundary"] = {{"samples", polyline_samples}, {"x", xs}, {"y", ys}};
  return j;
}

ConformalMapRecord map_from_json(const json& doc) {
  check_header(doc, "map");
  Mode mode;
  try {
    mode = mode_from_string(as_string(need(doc, "mode"), "mode"));
  } catch (const Error& e) {
    schema_error(e.what());
  }
  const double a = as_number(need(doc, "a"), "a");
  const double C = as_number(need(doc, "C"), "C");
  const int Ns = as_int(need(doc, "series_degree"), "series_degree");
  const double tail = doc.contains("tail_tol") ? as_number(doc.at("tail_tol"), "tail_tol") : 1e-10;
  const auto w = poly_from_block(need(doc, "w"), "w");
  const auto mu = poly_from_block(need(doc, "mu"), "mu");
  auto rec = build_map(w, mu, a, mode, Ns, tail);
  rec.C = C;

  const json& f = need(doc, "f");
  if (!f.is_array()) schema_error("'f' must be an array");
  PowerSeries stored(rec.f.degree());
  for (const auto& e : f) {
    if (!e.is_array() || e.size() != 3) schema_error("'f' entries must be [k, re, im]");
    const int k = as_int(e[0], "k");
    if (k < 0 || k > stored.degree()) schema_error("'f' index outside the series degree");
    stored.at(k) = {as_number(e[1], "re"), as_number(e[2], "im")};
  }
  double scale = 1.0, dev = 0.0;
  for (int k = 0; k <= rec.f.degree(); ++k) {
    scale = std::max(scale, std::abs(rec.f[k]));
    dev = std::max(dev, std::abs(rec.f[k] - stored[k]));
  }
  if (dev > 1e-12 * scale)
    schema_error("stored Taylor coefficients disagree with the nu data (deviation " + num(dev) + ")");
  return rec;
}

json audit_to_json(const AuditReport& r, const AuditOptions& opt) {
  json j = header("audit");
  j["options"] = {{"n_max", opt.n_max},
                  {"k_max", opt.k_max},
                  {"serrin_degree", opt.serrin_degree},
                  {"hardy_tol", opt.hardy_tol},
                  {"c_override", opt.c ? json(*opt.c) : json(nullptr)}};
  j["resolution"] = {{"radial_nodes", r.resolution.Nr},
                     {"angles", r.resolution.M},
                     {"boundary_samples", r.boundary_samples}};
  j["map_hash"] = hex64(r.map_hash);
  j["c"] = r.c;
  j["convention"] = r.convention;
  j["C0_convention"] = r.C0_convention;
  j["quad_residuals"] = r.quad_residuals;
  j["orth_residuals"] = r.orth_residuals;
  j["F_defect"] = r.F_defect;
  j["F_in_hardy_class"] = r.F_in_hardy_class;
  j["F_boundary_dev"] = r.F_boundary_dev;
  j["C0"] = r.C0;
  j["u_boundary_sup"] = r.u_boundary_sup;
  j["u_interior_min"] = r.u_interior_min;
  j["sup_half_W"] = r.sup_half_W;
  j["grad_bound_excess"] = r.grad_bound_excess;
  j["normal_deriv_dev"] = r.normal_deriv_dev;
  const auto& w = r.weinberger;
  j["weinberger"] = {{"I", w.I},
                     {"M", w.M},
                     {"B", w.B},
                     {"area", w.area},
                     {"id1_defect", w.id1_defect},
                     {"id2_defect", w.id2_defect},
                     {"volume_defect", w.volume_defect}};
  json ws = json::array();
  for (const auto& e : r.weak_serrin) ws.push_back({{"p", e.p}, {"q", e.q}, {"residual", e.residual}});
  j["weak_serrin_residuals"] = ws;
  j["geometry"] = geometry_to_json(r.geometry);
  j["verdict"] = {{"result", r.verdict.disk ? "DISK" : "NON_DISK"},
                  {"circularity_deficit", r.verdict.deficit},
                  {"threshold", RigidityVerdict::threshold}};
  j["notes"] = r.notes;
  return j;
}

std::string audit_table(const AuditReport& r) {
  auto max_of = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
  };
  double ws = 0.0;
  for (const auto& e : r.weak_serrin) ws = std::max(ws, std::abs(e.residual));
  std::ostringstream os;
  char line[160];
  auto row = [&](const char* name, double v) {
    std::snprintf(line, sizeof line, "  %-26s %.6e\n", name, v);
    os << line;
  };
  os << "audit  c = " << num(r.c) << "  (" << r.convention << ")\n";
  row("max quadrature residual", max_of(r.quad_residuals));
  row("max orthogonality residual", max_of(r.orth_residuals));
  row("F defect", r.F_defect);
  row("F boundary deviation", r.F_boundary_dev);
  row("C0", r.C0);
  row("u boundary sup", r.u_boundary_sup);
  row("gradient bound excess", r.grad_bound_excess);
  row("normal derivative dev", r.normal_deriv_dev);
  row("I", r.weinberger.I);
  row("M", r.weinberger.M);
  row("B", r.weinberger.B);
  row("area", r.weinberger.area);
  row("identity 1 defect", r.weinberger.id1_defect);
  row("identity 2 defect", r.weinberger.id2_defect);
  row("volume defect", r.weinberger.volume_defect);
  row("max weak Serrin residual", ws);
  row("circularity deficit", r.verdict.deficit);
  os << "  verdict                    " << (r.verdict.disk ? "DISK" : "NON_DISK") << "\n";
  for (const auto& n : r.notes) os << "  note: " << n << "\n";
  return os.str();
}

std::string branch_summary(const Branch& branch) {
  const auto& cfg = branch.config;
  std::ostringstream os;
  char line[200];
  double worst_collapse = 0.0;
  TrigPolynomial centred = cfg.measure.density;
  centred.set(0, 0.0);
  for (const auto& p : branch.points) {
    const double collapse = sup_norm(p.W + p.a * centred, cfg.M);
    worst_collapse = std::max(worst_collapse, collapse);
    if (p.a > 0.0) {
      std::snprintf(line, sizeof line, "a=%-12.6g W(4)/a=%-20.15g residual=%.3e  |W + a Pi0 mu|=%.3e\n", p.a,
                    p.W[4].real() / p.a, p.residual, collapse);
      os << line;
    }
  }
  std::snprintf(line, sizeof line, "points=%zu stop_reason=%s max |W + a Pi0 mu|_inf=%.3e\n", branch.points.size(),
                branch.stop_reason.c_str(), worst_collapse);
  os << line;
  if (!branch.stop_detail.empty()) os << "stop_detail: " << branch.stop_detail << "\n";
  return os.str();
}

std::string dump_json(const json& doc) {
  std::ostringstream os;
  write(os, doc, 0);
  os << "\n";
  return os.str();
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    schema_error(std::string("invalid JSON: ") + e.what());
  }
}

std::string boundary_csv(const ConformalMapRecord& rec, int samples) {
  require(samples >= 3, ErrorCode::invalid_argument, "need at least 3 boundary samples");
  std::ostringstream os;
  os << "x,y\n";
  for (const auto& p : rec.f.on_circle(1.0, samples)) os << num(p.real()) << "," << num(p.imag()) << "\n";
  return os.str();
}

std::string geometry_csv(const std::vector<std::pair<double, GeometryReport>>& rows) {
  std::ostringstream os;
  os << "a,area,perimeter,perimeter_truncated,centroid_re,centroid_im,radius_mean,radius_std,circularity_deficit\n";
  for (const auto& [a, g] : rows)
    os << num(a) << "," << num(g.area) << "," << num(g.perimeter) << "," << num(g.perimeter_truncated) << ","
       << num(g.centroid.real()) << "," << num(g.centroid.imag()) << "," << num(g.radius_mean) << ","
       << num(g.radius_std) << "," << num(g.circularity_deficit) << "\n";
  return os.str();
}

std::string moments_csv(const std::vector<MomentCurve>& curves) {
  std::ostringstream os;
  os << "n,a,re,im,deriv_fd_re,deriv_fd_im,deriv_analytic_re,deriv_analytic_im\n";
  for (const auto& c : curves)
    for (size_t i = 0; i < c.a.size(); ++i)
      os << c.n << "," << num(c.a[i]) << "," << num(c.values[i].real()) << "," << num(c.values[i].imag()) << ","
         << num(c.derivative_fd.real()) << "," << num(c.derivative_fd.imag()) << ","
         << num(c.derivative_analytic.real()) << "," << num(c.derivative_analytic.imag()) << "\n";
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot write '" + path + "'");
  out << text;
  if (!out) fail(ErrorCode::io, "write failed for '" + path + "'");
}

}  // namespace qdomain
