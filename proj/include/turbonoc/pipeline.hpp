// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "turbonoc/metrics.hpp"
#include "turbonoc/netsim.hpp"
#include "turbonoc/topology.hpp"
#include "turbonoc/traffic.hpp"

namespace turbonoc {

struct TopologySpec {
  TopologyKind kind = TopologyKind::ring;
  int node_count = 8;
  int degree = 2;  // de Bruijn / Kautz only
  int rows = 0;    // mesh / honeycomb
  int cols = 0;
  std::filesystem::path file;  // custom
};

enum class InterleaverKind { circular, file, random, identity };

struct InterleaverSpec {
  InterleaverKind kind = InterleaverKind::circular;
  long long step = 0;    // circular: 0 picks default_circular_step(N)
  long long offset = 0;  // circular
  std::filesystem::path file;
  std::uint64_t seed = 1;
};

/// Everything one experiment needs. Every field maps to one config key; see
/// config/default.cfg for the key list and defaults.
struct RunConfig {
  TopologySpec topology;
  int frame_steps = 2400;  // N
  InterleaverSpec interleaver;

  int window = 39;
  int tau = 1;
  std::optional<int> theta;         // default tau
  std::optional<long long> delta;   // default window * tau
  EmissionOrder order = EmissionOrder::backward;

  RoutingAlgorithm routing = RoutingAlgorithm::ssp_rr;
  CollisionPolicy collision = CollisionPolicy::dcm;
  AspSelection asp_selection = AspSelection::intent;
  long long guard_cycles = 0;
  bool check_conservation = false;

  int bits_per_step = 1;  // d
  int iterations = 8;     // I
  long long f_clk_hz = 200'000'000;
  int payload_bits = 8;
  std::filesystem::path cost_model_file;
  CostModel cost_model;

  std::filesystem::path report_path;
  std::filesystem::path csv_path;
  std::filesystem::path artifacts_dir;
  bool emit_routing_memory = false;
  bool emit_location_memory = false;
  bool emit_fifo_depths = false;
  bool emit_trace = false;

  SisoTimingParams timing() const;
};

/// Applies `kv` on top of defaults. Throws config_error naming the bad key.
RunConfig run_config_from(const std::map<std::string, std::string>& kv);
/// Key/value echo sufficient to reproduce the run through run_config_from.
std::map<std::string, std::string> to_key_values(const RunConfig& cfg);
/// Cross-field checks (P divides N, dimensions present, ...). Throws config_error.
void check(const RunConfig& cfg);

/// Multiplier used when a circular interleaver leaves the step unset: the
/// smallest integer >= sqrt(N) that is coprime with N.
long long default_circular_step(long long n);

Topology build_topology(const TopologySpec& spec);
Permutation build_permutation(const RunConfig& cfg);
std::string interleaver_label(const RunConfig& cfg);
std::string topology_label(const TopologySpec& spec);

struct Report {
  RunConfig config;
  int node_count = 0;
  int degree = 0;
  int ports = 0;
  int diameter = 0;
  IterationResult sim;
  long long cycles_interleave = 0;
  long long cycles_deinterleave = 0;
  HalfIterationSplit split;
  Rational throughput_bps;
  Rational ideal_bps;
  LatencySummary latency;
  std::vector<std::vector<long long>> fifo_max;  // [node][port], max over both halves
  RoutingMemoryImage routing_memory_interleave;
  RoutingMemoryImage routing_memory_deinterleave;
  MemoryBudget memory_a;
  MemoryBudget memory_b;
  MemoryBudget memory_c;
  NodeArchitecture architecture = NodeArchitecture::c;  // b for ASP-FT, c for SSP
  AreaEstimate area;
};

/// topology -> tables -> traffic -> both half iterations -> metrics.
Report run_pipeline(const RunConfig& cfg);

std::string report_json(const Report& r);
const std::vector<std::string>& csv_columns();
std::string csv_header();
std::string csv_row(const Report& r);
/// Row with only the configuration columns filled and the message in `error`.
std::string csv_error_row(const RunConfig& cfg, const std::string& error);

/// Writes the artifact files enabled in the config into `dir`; returns the paths written.
std::vector<std::filesystem::path> emit_artifacts(const Report& r, const std::filesystem::path& dir);

// --- sweeps ------------------------------------------------------------------

struct SweepSpec {
  RunConfig base;
  std::vector<TopologyKind> kinds{TopologyKind::ring, TopologyKind::gen_kautz};
  std::vector<int> degrees{2};  // de Bruijn / Kautz degrees
  std::vector<int> node_counts{8, 16, 32, 64};
  std::vector<int> taus{1, 2, 3};
  std::vector<RoutingAlgorithm> routings{RoutingAlgorithm::ssp_rr, RoutingAlgorithm::ssp_fl, RoutingAlgorithm::asp_ft};
  std::vector<CollisionPolicy> collisions{CollisionPolicy::dcm};
  unsigned threads = 1;
};

SweepSpec sweep_spec_from(const std::map<std::string, std::string>& kv);

struct SweepPoint {
  RunConfig config;
  std::string skip_reason;  // non-empty: not run
};

/// Grid points in lexicographic axis order: topology, degree, P, tau, routing, collision.
std::vector<SweepPoint> expand(const SweepSpec& spec);

struct SweepOutcome {
  std::string csv;                     // header + one row per run point
  std::vector<std::string> skipped;    // human-readable skip log
  int failures = 0;
};

/// Runs every point, `threads` at a time. Output is independent of thread count.
SweepOutcome run_sweep(const SweepSpec& spec);

/// Most-square rows x cols factorisation valid for the kind, if any.
std::optional<std::pair<int, int>> default_dimensions(TopologyKind kind, int node_count);

}  // namespace turbonoc
