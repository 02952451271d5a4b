// SPDX-License-Identifier: Apache-2.0
// Batch front-end over the C API: single runs, sweeps, topology inspection and
// the minimum-parallelism calculator.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "turbonoc/turbonoc.h"

namespace {

enum ExitCode {
  exit_ok = 0,
  exit_internal = 1,
  exit_config = 2,
  exit_topology = 3,
  exit_livelock = 4,
  exit_ingestion = 5,
  exit_precondition = 6,
  exit_model = 7,
};

int exit_code_of(tnoc_status s) {
  switch (s) {
    case TNOC_OK: return exit_ok;
    case TNOC_E_CONFIG:
    case TNOC_E_INVALID_ARGUMENT: return exit_config;
    case TNOC_E_INVALID_TOPOLOGY: return exit_topology;
    case TNOC_E_LIVELOCK: return exit_livelock;
    case TNOC_E_PARSE:
    case TNOC_E_NOT_A_PERMUTATION:
    case TNOC_E_IO: return exit_ingestion;
    case TNOC_E_PRECONDITION: return exit_precondition;
    case TNOC_E_MODEL_INCONSISTENCY: return exit_model;
    case TNOC_E_INTERNAL: return exit_internal;
  }
  return exit_internal;
}

struct Failure {
  tnoc_status status;
};

void ok(tnoc_status s) {
  if (s != TNOC_OK) throw Failure{s};
}

// Owns a malloc'd string handed out by the library.
struct Text {
  char* p = nullptr;
  ~Text() { tnoc_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

struct ConfigKey {
  const char* name;
  const char* help;
};

const ConfigKey kConfigKeys[] = {
    {"topology", "ring | mesh | honeycomb | debruijn | kautz | file"},
    {"P", "number of nodes"},
    {"degree", "de Bruijn / Kautz degree"},
    {"rows", "mesh / honeycomb rows"},
    {"cols", "mesh / honeycomb columns"},
    {"topology_file", "adjacency file for topology=file"},
    {"N", "trellis steps per frame"},
    {"interleaver", "circular | file | random | identity"},
    {"cs_step", "circular multiplier a (0: automatic)"},
    {"cs_offset", "circular offset s"},
    {"perm_file", "permutation file for interleaver=file"},
    {"seed", "seed for interleaver=random"},
    {"W", "SISO window length"},
    {"tau", "cycles per trellis step (R = 1/tau)"},
    {"theta", "cycles between windows"},
    {"delta", "cycles before the first emission"},
    {"order", "forward | backward"},
    {"routing", "ssp_rr | ssp_fl | asp_ft"},
    {"collision", "dcm | scm"},
    {"asp_selection", "intent | literal"},
    {"guard_cycles", "livelock guard (0: automatic)"},
    {"check_conservation", "verify message conservation every cycle"},
    {"d", "bits per trellis step"},
    {"I", "decoder iterations"},
    {"f_clk", "clock frequency in Hz"},
    {"payload_bits", "message payload width"},
    {"cost_model", "cost-model coefficient file"},
    {"report", "JSON report path (stdout when unset)"},
    {"csv", "CSV output path"},
    {"artifacts_dir", "artifact directory"},
    {"emit_routing_memory", "write routing-memory images"},
    {"emit_location_memory", "write location-memory sequences"},
    {"emit_fifo_depths", "write the FIFO-depth table"},
    {"emit_trace", "write the per-cycle routing trace"},
    {"topologies", "sweep: topology kinds"},
    {"degrees", "sweep: de Bruijn / Kautz degrees"},
    {"P_list", "sweep: node counts"},
    {"tau_list", "sweep: tau values"},
    {"routings", "sweep: routing algorithms"},
    {"collisions", "sweep: collision policies"},
    {"threads", "sweep: worker threads (0: hardware concurrency)"},
};

struct ConfigOptions {
  std::string file;
  std::map<std::string, std::string> values;

  void attach(CLI::App* app) {
    app->add_option("-c,--config", file, "configuration file");
    for (const ConfigKey& k : kConfigKeys) app->add_option(std::string("--") + k.name, values[k.name], k.help);
  }

  // File first, then flags in key order.
  tnoc_config* build(CLI::App* app) const {
    tnoc_config* cfg = nullptr;
    ok(tnoc_config_create(&cfg));
    try {
      if (!file.empty()) ok(tnoc_config_load(cfg, file.c_str()));
      for (const ConfigKey& k : kConfigKeys) {
        if (app->count(std::string("--") + k.name) > 0) ok(tnoc_config_set(cfg, k.name, values.at(k.name).c_str()));
      }
    } catch (...) {
      tnoc_config_destroy(cfg);
      throw;
    }
    return cfg;
  }
};

std::string config_value(const tnoc_config* cfg, const char* key) {
  Text t;
  ok(tnoc_config_get(cfg, key, &t.p));
  return t.str();
}

bool truthy(const std::string& v) { return v == "1" || v == "true" || v == "yes" || v == "on"; }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content)) {
    std::cerr << "error: cannot write " << path << "\n";
    throw Failure{TNOC_E_IO};
  }
}

int cmd_run(CLI::App* app, const ConfigOptions& opts, bool echo_only) {
  tnoc_config* cfg = opts.build(app);
  tnoc_report* report = nullptr;
  struct Cleanup {
    tnoc_config* c;
    tnoc_report** r;
    ~Cleanup() {
      tnoc_report_destroy(*r);
      tnoc_config_destroy(c);
    }
  } cleanup{cfg, &report};

  if (echo_only) {
    Text echo;
    ok(tnoc_config_echo(cfg, &echo.p));
    std::cout << echo.str();
    return exit_ok;
  }
  ok(tnoc_run(cfg, &report));

  Text json;
  ok(tnoc_report_json(report, &json.p));
  const std::string report_path = config_value(cfg, "report");
  if (report_path.empty()) {
    std::cout << json.str();
  } else {
    write_file(report_path, json.str());
  }
  const std::string csv_path = config_value(cfg, "csv");
  if (!csv_path.empty()) {
    Text csv;
    ok(tnoc_report_csv(report, 1, &csv.p));
    write_file(csv_path, csv.str());
  }
  bool any_artifact = false;
  for (const char* key : {"emit_routing_memory", "emit_location_memory", "emit_fifo_depths", "emit_trace"}) {
    any_artifact = any_artifact || truthy(config_value(cfg, key));
  }
  if (any_artifact) {
    std::string dir = config_value(cfg, "artifacts_dir");
    if (dir.empty()) dir = "artifacts";
    std::size_t written = 0;
    ok(tnoc_report_emit_artifacts(report, dir.c_str(), &written));
    std::cerr << "wrote " << written << " artifact files to " << dir << "\n";
  }
  long long ci = 0, cd = 0;
  double bps = 0, ideal = 0;
  ok(tnoc_report_cycles(report, &ci, &cd));
  ok(tnoc_report_throughput(report, &bps, &ideal));
  std::fprintf(stderr, "cycles %lld/%lld  throughput %.3f Mb/s (ideal %.3f Mb/s)\n", ci, cd, bps / 1e6, ideal / 1e6);
  return exit_ok;
}

int cmd_sweep(CLI::App* app, const ConfigOptions& opts) {
  tnoc_config* cfg = opts.build(app);
  Text csv, skipped;
  int failures = 0;
  const tnoc_status s = tnoc_sweep(cfg, &csv.p, &skipped.p, &failures);
  std::string csv_path = s == TNOC_OK ? config_value(cfg, "csv") : std::string();
  tnoc_config_destroy(cfg);
  ok(s);
  if (!skipped.str().empty()) std::cerr << "skipped:\n" << skipped.str();
  if (csv_path.empty()) {
    std::cout << csv.str();
  } else {
    write_file(csv_path, csv.str());
  }
  if (failures > 0) std::cerr << failures << " sweep point(s) failed; see the error column\n";
  return exit_ok;
}

struct TopologyOptions {
  std::string kind = "ring";
  int node_count = 0;  // 0: rows*cols for grids, 8 otherwise
  int degree = 2;
  int rows = 0;
  int cols = 0;
  std::string file;
  std::string out;
  std::string ssp_csv;
  std::string asp_csv;
};

int cmd_topology(const TopologyOptions& o) {
  tnoc_topology* topo = nullptr;
  if (!o.file.empty()) {
    ok(tnoc_topology_load(o.file.c_str(), &topo));
  } else {
    const bool grid = o.kind == "mesh" || o.kind == "honeycomb";
    const int p = o.node_count == 0 && !grid ? 8 : o.node_count;
    ok(tnoc_topology_build(o.kind.c_str(), p, o.degree, o.rows, o.cols, &topo));
  }
  struct Cleanup {
    tnoc_topology* t;
    ~Cleanup() { tnoc_topology_destroy(t); }
  } cleanup{topo};
  Text text;
  ok(tnoc_topology_validate(topo, &text.p));
  std::cout << text.str();
  if (!o.out.empty()) ok(tnoc_topology_write(topo, o.out.c_str()));
  if (!o.ssp_csv.empty() || !o.asp_csv.empty()) {
    ok(tnoc_topology_write_tables(topo, o.ssp_csv.empty() ? nullptr : o.ssp_csv.c_str(),
                                  o.asp_csv.empty() ? nullptr : o.asp_csv.c_str()));
  }
  return exit_ok;
}

struct MinParOptions {
  std::string target;
  int iterations = 5;
  std::string cycles_per_bit;
  std::string f_clk = "200000000";
};

int cmd_minpar(const MinParOptions& o) {
  long long p = 0;
  ok(tnoc_min_parallelism(o.target.c_str(), o.iterations, o.cycles_per_bit.c_str(), o.f_clk.c_str(), &p));
  std::cout << p << "\n";
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"turbonoc: network-on-chip simulator for parallel turbo decoder interleaving"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tnoc_version()));

  ConfigOptions run_opts;
  bool echo_only = false;
  CLI::App* run = app.add_subcommand("run", "simulate one configuration and emit its report");
  run_opts.attach(run);
  run->add_flag("--echo", echo_only, "print the resolved configuration and exit");

  ConfigOptions sweep_opts;
  CLI::App* sweep = app.add_subcommand("sweep", "run the cross product of the list keys and emit CSV");
  sweep_opts.attach(sweep);

  TopologyOptions topo_opts;
  CLI::App* topo = app.add_subcommand("topology", "build or load a topology, validate it, export it");
  topo->add_option("--kind", topo_opts.kind, "ring | mesh | honeycomb | debruijn | kautz");
  topo->add_option("--P", topo_opts.node_count, "number of nodes");
  topo->add_option("--degree", topo_opts.degree, "de Bruijn / Kautz degree");
  topo->add_option("--rows", topo_opts.rows, "mesh / honeycomb rows");
  topo->add_option("--cols", topo_opts.cols, "mesh / honeycomb columns");
  topo->add_option("--file", topo_opts.file, "load an adjacency file instead of building")->check(CLI::ExistingFile);
  topo->add_option("-o,--out", topo_opts.out, "write the adjacency file");
  topo->add_option("--ssp-csv", topo_opts.ssp_csv, "write the single-shortest-path table");
  topo->add_option("--asp-csv", topo_opts.asp_csv, "write the all-shortest-path sets");

  MinParOptions mp_opts;
  CLI::App* minpar = app.add_subcommand("minpar", "minimum parallelism for a target throughput");
  minpar->add_option("--target", mp_opts.target, "target throughput in b/s")->required();
  minpar->add_option("--iterations", mp_opts.iterations, "decoder iterations");
  minpar->add_option("--cycles-per-bit", mp_opts.cycles_per_bit, "SISO cycles per bit, decimal or a/b")->required();
  minpar->add_option("--f-clk", mp_opts.f_clk, "clock frequency in Hz");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_config;
  }

  try {
    if (*run) return cmd_run(run, run_opts, echo_only);
    if (*sweep) return cmd_sweep(sweep, sweep_opts);
    if (*topo) return cmd_topology(topo_opts);
    if (*minpar) return cmd_minpar(mp_opts);
  } catch (const Failure& f) {
    const char* detail = tnoc_last_error();
    std::cerr << "error: " << tnoc_status_string(f.status);
    if (detail && *detail) std::cerr << ": " << detail;
    std::cerr << "\n";
    return exit_code_of(f.status);
  }
  return exit_internal;
}
