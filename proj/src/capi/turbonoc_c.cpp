// SPDX-License-Identifier: Apache-2.0
#include "turbonoc/turbonoc.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <new>
#include <sstream>
#include <string>

#include "turbonoc/error.hpp"
#include "turbonoc/keyvalue.hpp"
#include "turbonoc/pipeline.hpp"
#include "turbonoc/routing_tables.hpp"

struct tnoc_config {
  std::map<std::string, std::string> kv;
};

struct tnoc_report {
  turbonoc::Report report;
};

struct tnoc_topology {
  turbonoc::Topology topology;
};

namespace {

thread_local std::string g_last_error;

tnoc_status status_of(turbonoc::ErrorCode code) {
  using turbonoc::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_parameter: return TNOC_E_INVALID_ARGUMENT;
    case ErrorCode::invalid_topology: return TNOC_E_INVALID_TOPOLOGY;
    case ErrorCode::parse_error: return TNOC_E_PARSE;
    case ErrorCode::not_a_permutation: return TNOC_E_NOT_A_PERMUTATION;
    case ErrorCode::livelock: return TNOC_E_LIVELOCK;
    case ErrorCode::precondition: return TNOC_E_PRECONDITION;
    case ErrorCode::model_inconsistency: return TNOC_E_MODEL_INCONSISTENCY;
    case ErrorCode::config_error: return TNOC_E_CONFIG;
    case ErrorCode::io_error: return TNOC_E_IO;
  }
  return TNOC_E_INTERNAL;
}

tnoc_status fail(tnoc_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <class F>
tnoc_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return TNOC_OK;
  } catch (const turbonoc::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(TNOC_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TNOC_E_INTERNAL, e.what());
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void require(bool ok, const char* what) {
  if (!ok) throw turbonoc::Error(turbonoc::ErrorCode::invalid_parameter, what);
}

// Parses everything a run or sweep would, so bad keys surface at set/load time.
void validate_keys(const std::map<std::string, std::string>& kv) { (void)turbonoc::sweep_spec_from(kv); }

}  // namespace

extern "C" {

const char* tnoc_last_error(void) { return g_last_error.c_str(); }

const char* tnoc_status_string(tnoc_status status) {
  switch (status) {
    case TNOC_OK: return "ok";
    case TNOC_E_INVALID_ARGUMENT: return "invalid argument";
    case TNOC_E_INVALID_TOPOLOGY: return "invalid topology";
    case TNOC_E_PARSE: return "parse error";
    case TNOC_E_NOT_A_PERMUTATION: return "not a permutation";
    case TNOC_E_LIVELOCK: return "livelock";
    case TNOC_E_PRECONDITION: return "precondition violated";
    case TNOC_E_MODEL_INCONSISTENCY: return "model inconsistency";
    case TNOC_E_CONFIG: return "configuration error";
    case TNOC_E_IO: return "i/o error";
    case TNOC_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* tnoc_version(void) { return "1.0.0"; }

void tnoc_free(char* text) { std::free(text); }

tnoc_status tnoc_config_create(tnoc_config** out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    *out = new tnoc_config{};
  });
}

void tnoc_config_destroy(tnoc_config* cfg) { delete cfg; }

tnoc_status tnoc_config_load(tnoc_config* cfg, const char* path) {
  return guarded([&] {
    require(cfg && path, "cfg and path must be non-NULL");
    auto merged = cfg->kv;
    for (auto& [k, v] : turbonoc::load_key_values(path)) merged[k] = v;
    validate_keys(merged);
    cfg->kv = std::move(merged);
  });
}

tnoc_status tnoc_config_set(tnoc_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    require(cfg && key && value, "cfg, key and value must be non-NULL");
    auto merged = cfg->kv;
    merged[key] = value;
    validate_keys(merged);
    cfg->kv = std::move(merged);
  });
}

tnoc_status tnoc_config_get(const tnoc_config* cfg, const char* key, char** out) {
  return guarded([&] {
    require(cfg && key && out, "cfg, key and out must be non-NULL");
    auto it = cfg->kv.find(key);
    *out = it == cfg->kv.end() ? nullptr : dup(it->second);
  });
}

tnoc_status tnoc_config_echo(const tnoc_config* cfg, char** out) {
  return guarded([&] {
    require(cfg && out, "cfg and out must be non-NULL");
    const turbonoc::RunConfig rc = turbonoc::run_config_from(cfg->kv);
    turbonoc::check(rc);
    std::string text;
    for (const auto& [k, v] : turbonoc::to_key_values(rc)) text += k + " = " + v + "\n";
    *out = dup(text);
  });
}

tnoc_status tnoc_run(const tnoc_config* cfg, tnoc_report** out) {
  return guarded([&] {
    require(cfg && out, "cfg and out must be non-NULL");
    *out = nullptr;
    auto* r = new tnoc_report{turbonoc::run_pipeline(turbonoc::run_config_from(cfg->kv))};
    *out = r;
  });
}

void tnoc_report_destroy(tnoc_report* report) { delete report; }

tnoc_status tnoc_report_json(const tnoc_report* report, char** out) {
  return guarded([&] {
    require(report && out, "report and out must be non-NULL");
    *out = dup(turbonoc::report_json(report->report));
  });
}

tnoc_status tnoc_report_csv(const tnoc_report* report, int with_header, char** out) {
  return guarded([&] {
    require(report && out, "report and out must be non-NULL");
    std::string text = with_header ? turbonoc::csv_header() : std::string();
    text += turbonoc::csv_row(report->report);
    *out = dup(text);
  });
}

tnoc_status tnoc_report_cycles(const tnoc_report* report, long long* interleave, long long* deinterleave) {
  return guarded([&] {
    require(report != nullptr, "report is NULL");
    if (interleave) *interleave = report->report.cycles_interleave;
    if (deinterleave) *deinterleave = report->report.cycles_deinterleave;
  });
}

tnoc_status tnoc_report_throughput(const tnoc_report* report, double* bps, double* ideal_bps) {
  return guarded([&] {
    require(report != nullptr, "report is NULL");
    if (bps) *bps = report->report.throughput_bps.to_double();
    if (ideal_bps) *ideal_bps = report->report.ideal_bps.to_double();
  });
}

tnoc_status tnoc_report_emit_artifacts(const tnoc_report* report, const char* dir, size_t* files_written) {
  return guarded([&] {
    require(report && dir, "report and dir must be non-NULL");
    const auto paths = turbonoc::emit_artifacts(report->report, dir);
    if (files_written) *files_written = paths.size();
  });
}

tnoc_status tnoc_sweep(const tnoc_config* cfg, char** csv, char** skipped, int* failures) {
  return guarded([&] {
    require(cfg && csv, "cfg and csv must be non-NULL");
    const turbonoc::SweepOutcome o = turbonoc::run_sweep(turbonoc::sweep_spec_from(cfg->kv));
    std::string log;
    for (const auto& s : o.skipped) log += s + "\n";
    char* c = dup(o.csv);
    if (skipped) {
      try {
        *skipped = dup(log);
      } catch (...) {
        std::free(c);
        throw;
      }
    }
    *csv = c;
    if (failures) *failures = o.failures;
  });
}

tnoc_status tnoc_topology_build(const char* kind, int node_count, int degree, int rows, int cols,
                                tnoc_topology** out) {
  return guarded([&] {
    require(kind && out, "kind and out must be non-NULL");
    std::map<std::string, std::string> kv{{"topology", kind}};
    turbonoc::TopologySpec spec = turbonoc::run_config_from(kv).topology;
    if (spec.kind == turbonoc::TopologyKind::custom) {
      throw turbonoc::Error(turbonoc::ErrorCode::invalid_parameter, "use tnoc_topology_load for file topologies");
    }
    const bool grid = spec.kind == turbonoc::TopologyKind::toroidal_mesh ||
                      spec.kind == turbonoc::TopologyKind::honeycomb_torus;
    if (grid && node_count == 0) node_count = rows * cols;
    if (grid && node_count != rows * cols) {
      throw turbonoc::Error(turbonoc::ErrorCode::invalid_parameter,
                            "rows x cols must equal P (rows=" + std::to_string(rows) + ", cols=" +
                                std::to_string(cols) + ", P=" + std::to_string(node_count) + ")");
    }
    spec.node_count = node_count;
    spec.degree = degree;
    spec.rows = rows;
    spec.cols = cols;
    *out = new tnoc_topology{turbonoc::build_topology(spec)};
  });
}

tnoc_status tnoc_topology_load(const char* path, tnoc_topology** out) {
  return guarded([&] {
    require(path && out, "path and out must be non-NULL");
    *out = new tnoc_topology{turbonoc::load_topology(path)};
  });
}

void tnoc_topology_destroy(tnoc_topology* topo) { delete topo; }

tnoc_status tnoc_topology_write(const tnoc_topology* topo, const char* path) {
  return guarded([&] {
    require(topo && path, "topo and path must be non-NULL");
    turbonoc::write_topology(topo->topology, std::filesystem::path(path));
  });
}

tnoc_status tnoc_topology_info(const tnoc_topology* topo, int* node_count, int* degree, int* diameter) {
  return guarded([&] {
    require(topo != nullptr, "topo is NULL");
    if (node_count) *node_count = topo->topology.node_count();
    if (degree) *degree = topo->topology.degree();
    if (diameter) *diameter = turbonoc::validate(topo->topology).diameter.value_or(-1);
  });
}

tnoc_status tnoc_topology_validate(const tnoc_topology* topo, char** text) {
  return guarded([&] {
    require(topo && text, "topo and text must be non-NULL");
    const turbonoc::Topology& t = topo->topology;
    const turbonoc::ValidationReport v = turbonoc::validate(t);
    std::ostringstream os;
    os << "nodes: " << t.node_count() << "\n";
    os << "degree: " << t.degree() << "\n";
    os << "self_loops:";
    if (v.self_loop_nodes.empty()) os << " none";
    for (int n : v.self_loop_nodes) os << ' ' << n;
    os << "\nin_degree:";
    for (const auto& [deg, count] : v.in_degree_histogram) os << ' ' << deg << 'x' << count;
    os << "\nstrongly_connected: " << (v.strongly_connected ? "yes" : "no") << "\n";
    os << "diameter: " << (v.diameter ? std::to_string(*v.diameter) : "n/a") << "\n";
    *text = dup(os.str());
  });
}

tnoc_status tnoc_topology_write_tables(const tnoc_topology* topo, const char* ssp_csv, const char* asp_csv) {
  return guarded([&] {
    require(topo != nullptr, "topo is NULL");
    const turbonoc::RoutingTables tables = turbonoc::build_routing_tables(topo->topology);
    auto write = [](const char* path, auto&& fn) {
      if (!path) return;
      std::ofstream out(path, std::ios::binary);
      if (!out) throw turbonoc::Error(turbonoc::ErrorCode::io_error, std::string("cannot write ") + path);
      fn(out);
    };
    write(ssp_csv, [&](std::ostream& o) { turbonoc::write_ssp_csv(tables.ssp, o); });
    write(asp_csv, [&](std::ostream& o) { turbonoc::write_asp_csv(tables.asp, o); });
  });
}

tnoc_status tnoc_min_parallelism(const char* target_bps, int iterations, const char* cycles_per_bit,
                                 const char* f_clk_hz, long long* out) {
  return guarded([&] {
    require(target_bps && cycles_per_bit && f_clk_hz && out, "arguments must be non-NULL");
    require(iterations > 0, "iterations must be positive");
    turbonoc::MinParallelismInputs in;
    in.target_bps = turbonoc::parse_rational(target_bps);
    in.iterations = iterations;
    in.cycles_per_bit = turbonoc::parse_rational(cycles_per_bit);
    in.f_clk_hz = turbonoc::parse_rational(f_clk_hz);
    *out = turbonoc::min_parallelism(in);
  });
}

}  // extern "C"
