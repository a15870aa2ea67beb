#include "qdomain/qdomain.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "qdomain/error.hpp"
#include "qdomain/io.hpp"
#include "qdomain/selftest.hpp"

struct qd_branch {
  qdomain::RunConfig cfg;
  qdomain::Branch branch;
};

struct qd_map {
  qdomain::ConformalMapRecord rec;
  std::optional<qdomain::RunConfig> cfg;
};

namespace {

thread_local std::string last_error;

template <class Fn>
qd_status guarded(Fn&& fn) {
  last_error.clear();
  try {
    fn();
    return QD_OK;
  } catch (const qdomain::Error& e) {
    last_error = e.what();
    return static_cast<qd_status>(static_cast<int>(e.code()));
  } catch (const nlohmann::json::exception& e) {
    last_error = e.what();
    return QD_ERR_SCHEMA;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return QD_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return QD_ERR_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void need(const void* p, const char* what) {
  if (!p) qdomain::fail(qdomain::ErrorCode::invalid_argument, std::string(what) + " must not be null");
}

qdomain::RunConfig parse_config(const char* text) {
  return qdomain::config_from_json(text ? qdomain::parse_json(text) : qdomain::json::object());
}

}  // namespace

extern "C" {

const char* qd_version(void) { return qdomain::version_string(); }

const char* qd_last_error(void) { return last_error.c_str(); }

void qd_free_string(char* s) { std::free(s); }

qd_status qd_selftest(const char* config_json, int* passed, char** table) {
  return guarded([&] {
    need(passed, "passed");
    const auto rep = qdomain::run_selftest(parse_config(config_json));
    *passed = rep.passed ? 1 : 0;
    if (table) *table = dup(rep.table());
    if (!rep.passed) last_error = "selftest failed: " + rep.first_failure;
  });
}

qd_status qd_solve(const char* config_json, qd_branch** out) {
  return guarded([&] {
    need(out, "out");
    auto b = std::make_unique<qd_branch>();
    b->cfg = parse_config(config_json);
    b->branch = qdomain::solve_branch(b->cfg.solver);
    *out = b.release();
  });
}

void qd_branch_destroy(qd_branch* branch) { delete branch; }

size_t qd_branch_size(const qd_branch* branch) { return branch ? branch->branch.points.size() : 0; }

qd_status qd_branch_to_json(const qd_branch* branch, char** out) {
  return guarded([&] {
    need(branch, "branch");
    need(out, "out");
    *out = dup(qdomain::dump_json(qdomain::branch_to_json(branch->branch, branch->cfg)));
  });
}

qd_status qd_branch_summary(const qd_branch* branch, char** out) {
  return guarded([&] {
    need(branch, "branch");
    need(out, "out");
    *out = dup(qdomain::branch_summary(branch->branch));
  });
}

qd_status qd_branch_geometry_csv(const qd_branch* branch, char** out) {
  return guarded([&] {
    need(branch, "branch");
    need(out, "out");
    std::vector<std::pair<double, qdomain::GeometryReport>> rows;
    const int Ns = branch->cfg.series_degree();
    for (const auto& p : branch->branch.points) {
      const auto rec = qdomain::build_map(p, branch->cfg.solver, Ns, branch->cfg.tail_tol);
      rows.emplace_back(p.a, qdomain::geometry(rec, 8 * Ns));
    }
    *out = dup(qdomain::geometry_csv(rows));
  });
}

qd_status qd_branch_build_map(const qd_branch* branch, size_t index, qd_map** out) {
  return guarded([&] {
    need(branch, "branch");
    need(out, "out");
    const auto& pts = branch->branch.points;
    if (index >= pts.size()) qdomain::fail(qdomain::ErrorCode::invalid_argument, "branch point index out of range");
    auto m = std::make_unique<qd_map>();
    m->rec = qdomain::build_map(pts[index], branch->cfg.solver, branch->cfg.series_degree(), branch->cfg.tail_tol);
    m->cfg = branch->cfg;
    *out = m.release();
  });
}

qd_status qd_map_from_json(const char* map_json, qd_map** out) {
  return guarded([&] {
    need(map_json, "map_json");
    need(out, "out");
    const auto doc = qdomain::parse_json(map_json);
    auto m = std::make_unique<qd_map>();
    m->rec = qdomain::map_from_json(doc);
    if (doc.contains("config")) m->cfg = qdomain::config_from_json(doc.at("config"));
    *out = m.release();
  });
}

qd_status qd_map_disk(int cutoff, int series_degree, qd_map** out) {
  return guarded([&] {
    need(out, "out");
    auto m = std::make_unique<qd_map>();
    m->rec = qdomain::disk_map(cutoff, series_degree);
    *out = m.release();
  });
}

void qd_map_destroy(qd_map* map) { delete map; }

qd_status qd_map_to_json(const qd_map* map, char** out) {
  return guarded([&] {
    need(map, "map");
    need(out, "out");
    *out = dup(qdomain::dump_json(qdomain::map_to_json(map->rec, map->cfg ? &*map->cfg : nullptr)));
  });
}

qd_status qd_map_boundary_csv(const qd_map* map, int samples, char** out) {
  return guarded([&] {
    need(map, "map");
    need(out, "out");
    *out = dup(qdomain::boundary_csv(map->rec, samples > 0 ? samples : 8 * map->rec.series_degree));
  });
}

qd_status qd_audit(const qd_map* map, const char* options_json, char** report_json, char** table) {
  return guarded([&] {
    need(map, "map");
    qdomain::AuditOptions opt = map->cfg ? map->cfg->audit : qdomain::AuditOptions{};
    if (options_json) {
      const auto o = qdomain::parse_json(options_json);
      if (!o.is_object()) qdomain::fail(qdomain::ErrorCode::schema, "audit options must be a JSON object");
      for (auto it = o.begin(); it != o.end(); ++it) {
        const auto& k = it.key();
        const auto& v = it.value();
        if (k == "c_override") {
          if (!v.is_null()) opt.c = v.get<double>();
        } else if (k == "n_max") {
          opt.n_max = v.get<int>();
        } else if (k == "k_max") {
          opt.k_max = v.get<int>();
        } else if (k == "serrin_degree") {
          opt.serrin_degree = v.get<int>();
        } else if (k == "radial_nodes") {
          opt.resolution.Nr = v.get<int>();
        } else if (k == "angles") {
          opt.resolution.M = v.get<int>();
        } else if (k == "boundary_samples") {
          opt.resolution.M_b = v.get<int>();
        } else if (k == "hardy_tol") {
          opt.hardy_tol = v.get<double>();
        } else {
          qdomain::fail(qdomain::ErrorCode::schema, "unknown audit option '" + k + "'");
        }
      }
    }
    const auto report = qdomain::audit(map->rec, opt);
    if (report_json) *report_json = dup(qdomain::dump_json(qdomain::audit_to_json(report, opt)));
    if (table) *table = dup(qdomain::audit_table(report));
  });
}

qd_status qd_moments_csv(const char* config_json, const int* n_list, size_t n_count, const double* a_list,
                         size_t a_count, char** out) {
  return guarded([&] {
    need(out, "out");
    if (n_count) need(n_list, "n_list");
    if (a_count) need(a_list, "a_list");
    const auto cfg = parse_config(config_json);
    const auto grid = qdomain::PolarGrid::disk(cfg.solver.Nr, cfg.solver.M);
    const std::vector<double> as(a_list, a_list + a_count);
    std::vector<qdomain::MomentCurve> curves;
    for (size_t i = 0; i < n_count; ++i)
      curves.push_back(qdomain::moment_curve(cfg.solver.measure.density, n_list[i], as, grid));
    *out = dup(qdomain::moments_csv(curves));
  });
}

}  // extern "C"
