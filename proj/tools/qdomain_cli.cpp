#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qdomain/qdomain.h"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInput = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::string config;
  std::string mode;
  std::optional<int> riesz_depth;
  std::string measure_file;
  std::optional<double> a_max;
  std::optional<int> a_points;
  std::string a_spacing;
  std::optional<int> modes;
  std::optional<int> radial_nodes;
  std::optional<int> angles;
  std::optional<int> series;
  std::optional<double> tol;
  std::string out;
  std::optional<unsigned long long> seed;
  std::optional<double> c_override;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON config file; flags override its values");
  cmd->add_option("--mode", f.mode, "boundary convention")->check(CLI::IsMember({"singular", "consistent"}));
  cmd->add_option("--riesz-depth", f.riesz_depth, "Riesz product depth K");
  cmd->add_option("--measure-file", f.measure_file, "JSON file with explicit measure coefficients");
  cmd->add_option("--a-max", f.a_max, "largest continuation parameter");
  cmd->add_option("--a-points", f.a_points, "number of nonzero a values");
  cmd->add_option("--a-spacing", f.a_spacing)->check(CLI::IsMember({"geometric", "linear"}));
  cmd->add_option("--modes", f.modes, "Fourier cutoff N");
  cmd->add_option("--radial-nodes", f.radial_nodes, "Gauss-Legendre radii Nr");
  cmd->add_option("--angles", f.angles, "uniform angles M");
  cmd->add_option("--series", f.series, "power-series truncation N_s");
  cmd->add_option("--tol", f.tol, "fixed-point residual tolerance");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--seed", f.seed, "seed for randomized checks");
  cmd->add_option("--c-override", f.c_override, "quadrature constant used by audit");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spill(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw std::runtime_error("cannot write '" + path.string() + "'");
}

json compose_config(const Flags& f) {
  json cfg = json::object();
  if (!f.config.empty()) {
    try {
      cfg = json::parse(slurp(f.config));
    } catch (const json::exception& e) {
      throw InputError("invalid config '" + f.config + "': " + e.what());
    }
    if (!cfg.is_object()) throw InputError("config must be a JSON object");
  }
  if (!f.mode.empty()) cfg["mode"] = f.mode;
  if (f.riesz_depth && !f.measure_file.empty()) throw InputError("--riesz-depth and --measure-file are exclusive");
  if (f.riesz_depth) cfg["measure"] = {{"riesz_depth", *f.riesz_depth}};
  if (!f.measure_file.empty()) cfg["measure"] = {{"file", f.measure_file}};
  if (f.a_max || f.a_points || !f.a_spacing.empty()) {
    json& g = cfg["a_grid"];
    if (!g.is_object()) g = json::object();
    g.erase("values");
    if (f.a_max) g["a_max"] = *f.a_max;
    if (f.a_points) g["points"] = *f.a_points;
    if (!f.a_spacing.empty()) g["spacing"] = f.a_spacing;
    if (!g.contains("points")) g["points"] = 5;
  }
  auto set_res = [&](const char* key, const std::optional<int>& v) {
    if (v) cfg["resolution"][key] = *v;
  };
  set_res("N", f.modes);
  set_res("Nr", f.radial_nodes);
  set_res("M", f.angles);
  set_res("N_s", f.series);
  if (f.tol) cfg["tolerances"]["residual"] = *f.tol;
  if (f.seed) cfg["seed"] = *f.seed;
  if (f.c_override) cfg["c_override"] = *f.c_override;
  cfg.erase("out");
  return cfg;
}

bool is_input_error(qd_status s) {
  switch (s) {
    case QD_ERR_INVALID_ARGUMENT:
    case QD_ERR_ALIASING:
    case QD_ERR_TRUNCATION:
    case QD_ERR_UNDER_RESOLVED:
    case QD_ERR_SCHEMA:
    case QD_ERR_IO:
    case QD_ERR_TOO_EXPENSIVE:
      return true;
    default:
      return false;
  }
}

struct ApiError : std::runtime_error {
  qd_status status;
  ApiError(qd_status s, const std::string& what) : std::runtime_error(what), status(s) {}
};

void check(qd_status s, const char* what) {
  if (s != QD_OK) throw ApiError(s, std::string(what) + ": " + qd_last_error());
}

std::string take(char* s) {
  std::string out = s ? s : "";
  qd_free_string(s);
  return out;
}

fs::path out_dir(const Flags& f, const json& cfg) {
  fs::path dir = !f.out.empty() ? fs::path(f.out) : fs::path(".");
  (void)cfg;
  fs::create_directories(dir);
  return dir;
}

int cmd_selftest(const Flags& f) {
  const std::string cfg = compose_config(f).dump();
  int passed = 0;
  char* table = nullptr;
  check(qd_selftest(cfg.c_str(), &passed, &table), "selftest");
  std::cout << take(table);
  if (!passed) {
    std::cerr << qd_last_error() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_solve(const Flags& f) {
  const json cfg = compose_config(f);
  const std::string text = cfg.dump();
  qd_branch* branch = nullptr;
  check(qd_solve(text.c_str(), &branch), "solve");
  std::unique_ptr<qd_branch, void (*)(qd_branch*)> guard(branch, qd_branch_destroy);
  const fs::path dir = out_dir(f, cfg);

  char* s = nullptr;
  check(qd_branch_to_json(branch, &s), "branch export");
  spill(dir / "branch.json", take(s));
  const size_t n = qd_branch_size(branch);
  for (size_t i = 0; i < n; ++i) {
    qd_map* map = nullptr;
    if (qd_branch_build_map(branch, i, &map) != QD_OK) {
      std::cerr << "warning: map " << i << " not built: " << qd_last_error() << "\n";
      continue;
    }
    std::unique_ptr<qd_map, void (*)(qd_map*)> mguard(map, qd_map_destroy);
    check(qd_map_to_json(map, &s), "map export");
    spill(dir / ("map_" + std::to_string(i) + ".json"), take(s));
  }
  check(qd_branch_geometry_csv(branch, &s), "geometry export");
  spill(dir / "geometry.csv", take(s));
  check(qd_branch_summary(branch, &s), "summary");
  std::cout << take(s);
  return n > 0 ? kExitOk : kExitFailure;
}

qd_map* load_map(const std::string& source, const Flags& f) {
  qd_map* map = nullptr;
  if (source == "disk") {
    const int N = f.modes.value_or(255);
    check(qd_map_disk(N, f.series.value_or(4 * N), &map), "disk map");
  } else {
    const std::string text = slurp(source);
    check(qd_map_from_json(text.c_str(), &map), ("map '" + source + "'").c_str());
  }
  return map;
}

int cmd_audit(const Flags& f, const std::string& source) {
  const json cfg = compose_config(f);
  std::unique_ptr<qd_map, void (*)(qd_map*)> map(load_map(source, f), qd_map_destroy);
  json opts = cfg.contains("audit") ? cfg.at("audit") : json::object();
  if (f.c_override) opts["c_override"] = *f.c_override;
  const std::string text = opts.dump();
  char* report = nullptr;
  char* table = nullptr;
  check(qd_audit(map.get(), text.c_str(), &report, &table), "audit");
  std::cout << take(table);
  const std::string doc = take(report);
  if (!f.out.empty()) spill(out_dir(f, cfg) / "audit.json", doc);
  return kExitOk;
}

int cmd_moments(const Flags& f, const std::vector<int>& n_list, const std::vector<double>& a_list) {
  const json cfg = compose_config(f);
  const std::string text = cfg.dump();
  char* csv = nullptr;
  check(qd_moments_csv(text.c_str(), n_list.data(), n_list.size(), a_list.data(), a_list.size(), &csv), "moments");
  const std::string out = take(csv);
  std::cout << out;
  if (!f.out.empty()) spill(out_dir(f, cfg) / "moments.csv", out);
  return kExitOk;
}

int cmd_export_boundary(const Flags& f, const std::string& source, int samples) {
  std::unique_ptr<qd_map, void (*)(qd_map*)> map(load_map(source, f), qd_map_destroy);
  char* csv = nullptr;
  check(qd_map_boundary_csv(map.get(), samples, &csv), "boundary export");
  const std::string out = take(csv);
  if (f.out.empty())
    std::cout << out;
  else
    spill(out_dir(f, json::object()) / "boundary.csv", out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadrature-domain branch solver and rigidity audit"};
  app.set_version_flag("--version", std::string(qd_version()));
  app.require_subcommand(1);

  Flags f;
  auto* selftest = app.add_subcommand("selftest", "check operator identities");
  auto* solve = app.add_subcommand("solve", "continue the fixed-point branch in a");
  auto* audit = app.add_subcommand("audit", "rigidity audit of a map file (or 'disk')");
  auto* moments = app.add_subcommand("moments", "moment curves M_n(a)");
  auto* boundary = app.add_subcommand("export-boundary", "boundary polyline as x,y CSV");
  for (auto* cmd : {selftest, solve, audit, moments, boundary}) add_common(cmd, f);

  std::string map_source;
  audit->add_option("MAP", map_source, "map JSON file or 'disk'")->required();
  std::string boundary_source;
  int samples = 0;
  boundary->add_option("MAP", boundary_source, "map JSON file or 'disk'")->required();
  boundary->add_option("--samples", samples, "boundary samples (default 8 N_s)");
  std::vector<int> n_list{4};
  std::vector<double> a_list{0.0, 1e-3, 1e-2};
  moments->add_option("--n-list", n_list, "moment orders")->delimiter(',');
  moments->add_option("--a-list", a_list, "parameter values")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*selftest) return cmd_selftest(f);
    if (*solve) return cmd_solve(f);
    if (*audit) return cmd_audit(f, map_source);
    if (*moments) return cmd_moments(f, n_list, a_list);
    if (*boundary) return cmd_export_boundary(f, boundary_source, samples);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ApiError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_input_error(e.status) ? kExitInput : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitInput;
}
