// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "turbonoc/netsim.hpp"
#include "turbonoc/rational.hpp"

namespace turbonoc {

// --- throughput model ---------------------------------------------------------

struct ThroughputInputs {
  long long frame_steps = 0;  // N
  int node_count = 0;         // P
  int tau = 1;                // R = 1/tau
  int bits_per_step = 1;      // d: 1 binary, 2 double binary
  int iterations = 8;         // I
  long long f_clk_hz = 200'000'000;
  long long cycles_interleave = 0;
  long long cycles_deinterleave = 0;

  /// The half-iteration cycle count used by the model: the slower half.
  long long half_iteration_cycles() const { return std::max(cycles_interleave, cycles_deinterleave); }
};

struct HalfIterationSplit {
  Rational ideal_cycles;  // N / (P R)
  Rational interconnect_latency;  // IL
};

/// measured = N/(P R) + IL. Throws model_inconsistency if measured < ceil(N/(P R)).
HalfIterationSplit half_iteration_decomposition(long long frame_steps, int node_count, int tau, long long measured);

/// T = d N f / (2 I cycles), bit/s.
Rational throughput_for_cycles(int bits_per_step, long long frame_steps, long long f_clk_hz, int iterations,
                               const Rational& half_iteration_cycles);
Rational throughput(const ThroughputInputs& in);
/// T ~= d P R f / (2 I).
Rational throughput_ideal(int bits_per_step, int node_count, int tau, int iterations, long long f_clk_hz);

struct MinParallelismInputs {
  Rational target_bps;      // T^
  int iterations = 5;       // I^
  Rational cycles_per_bit;  // C = 1/(R d)
  Rational f_clk_hz;
};

/// ceil(I^ C T^ / f_clk).
long long min_parallelism(const MinParallelismInputs& in);

// --- memories -------------------------------------------------------------------

enum class NodeArchitecture { a, b, c };

const char* to_string(NodeArchitecture a) noexcept;

/// Smallest b with 2^b >= n (0 for n <= 1).
int ceil_log2(long long n);

struct MemoryBudget {
  long long identifier_bits = 0;  // IM: k(i,j)
  long long location_bits = 0;    // LM: t(i,j) or t'(i,j)
  long long routing_bits = 0;     // routing memory (architecture b)
  int message_width = 0;          // bits carried per message on the network

  long long total() const { return identifier_bits + location_bits + routing_bits; }
};

/// Per-node bit budget. `routing_bits` is required for architecture (b) and
/// throws precondition when absent.
MemoryBudget memory_budget(NodeArchitecture arch, long long frame_steps, int node_count, int payload_bits,
                           std::optional<long long> routing_bits = std::nullopt);

// --- area -------------------------------------------------------------------------

/// Area units per bit (or per unit) for each hardware class. Coefficients are
/// illustrative; nothing here is calibrated against a cell library.
struct CostModel {
  double fifo_bit = 1.0;
  double ram_bit = 0.25;
  double crossbar_bit = 0.5;
  double register_bit = 1.0;
  double logic_base = 200.0;
  double logic_per_port = 50.0;
};

CostModel load_cost_model(const std::filesystem::path& path);
CostModel cost_model_from(const std::map<std::string, std::string>& kv);

struct AreaInputs {
  int ports = 0;
  int message_width = 0;
  std::vector<std::vector<long long>> fifo_max;  // [node][input port]
  long long routing_bits = 0;  // routing memory or SSP lookup bits, summed over nodes
  long long memory_bits = 0;   // identifier + location memory bits, summed over nodes
};

struct AreaEstimate {
  double fifo = 0;       // input FIFOs
  double crossbar = 0;   // CB
  double registers = 0;  // output registers
  double routing = 0;    // routing algorithm / routing memory (RA/M)
  double memory = 0;     // identifier + location memories (IM+LM)

  double total() const { return fifo + crossbar + registers + routing + memory; }
};

AreaEstimate area_estimate(const AreaInputs& in, const CostModel& cm);

// --- latency ------------------------------------------------------------------------

struct LatencyStats {
  long long count = 0;
  long long min = 0;
  long long max = 0;
  Rational avg;
};

struct LatencySummary {
  std::vector<std::optional<LatencyStats>> per_node;  // by receiving node
  std::optional<LatencyStats> global;
};

LatencySummary latency_stats(const HalfIterationResult& result);
/// Pools several half iterations into one summary.
LatencySummary latency_stats(const std::vector<const HalfIterationResult*>& results);

}  // namespace turbonoc
