// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "turbonoc/routing_tables.hpp"
#include "turbonoc/topology.hpp"
#include "turbonoc/traffic.hpp"

namespace turbonoc {

enum class RoutingAlgorithm { ssp_rr, ssp_fl, asp_ft };
enum class CollisionPolicy { dcm, scm };
/// How ASP-FT walks its candidates: `intent` takes min occupancy then min usage;
/// `literal` runs the nested `L <= Lmin && Q < Qmin` scan with no lexicographic fallback.
enum class AspSelection { intent, literal };

const char* to_string(RoutingAlgorithm r) noexcept;
const char* to_string(CollisionPolicy c) noexcept;
const char* to_string(AspSelection s) noexcept;

struct Message {
  int dest_node = 0;
  int dest_location = 0;
  int payload_bits = 8;
  long long injected_cycle = 0;
  int source_node = 0;
  int source_index = 0;
  int hop_count = 0;
  std::vector<int> path;  // visited nodes, filled only when paths are recorded
};

struct NodeState {
  std::vector<std::deque<Message>> fifos;                // by input port; local port last
  std::vector<std::optional<Message>> output_registers;  // by output port
  int rr_pointer = 0;
  std::vector<long long> q_counters;  // per network output port, i.e. per (neighbour, its input port)

  explicit NodeState(int ports)
      : fifos(static_cast<std::size_t>(ports)), output_registers(static_cast<std::size_t>(ports)),
        q_counters(static_cast<std::size_t>(ports - 1), 0) {}
};

struct SimConfig {
  RoutingAlgorithm routing = RoutingAlgorithm::ssp_rr;
  CollisionPolicy collision = CollisionPolicy::dcm;
  AspSelection asp_selection = AspSelection::intent;
  /// 0 selects 64 x schedule horizon.
  long long guard_cycle_limit = 0;
  /// Largest hop count before a message is declared runaway; 0 selects 64 x P.
  int hop_guard = 0;
  int payload_bits = 8;
  bool record_routing_trace = false;
  bool record_paths = false;
  bool record_asp_decisions = false;
  /// Verify injected == queued + registered + delivered after every cycle.
  bool check_conservation = false;
};

struct Delivery {
  int source_node = 0;
  int source_index = 0;
  int dest_node = 0;
  int dest_location = 0;
  long long injected_cycle = 0;
  long long delivered_cycle = 0;
  int hops = 0;
  std::vector<int> path;

  long long latency() const { return delivered_cycle - injected_cycle; }
};

struct ServiceGrant {
  int in_port = 0;
  int out_port = 0;
  int dest_node = 0;
};

/// One (node, cycle) in which at least one input FIFO was non-empty.
struct ServiceRecord {
  long long cycle = 0;
  int node = 0;
  std::vector<ServiceGrant> grants;
};

struct AspCandidate {
  int neighbor = 0;
  int in_port = 0;   // input port of `neighbor`
  int out_port = 0;  // output port of the deciding node
  long long occupancy = 0;
  long long usage = 0;
  bool available = true;  // output port not yet reserved this cycle
};

struct AspDecision {
  long long cycle = 0;
  int node = 0;
  int dest = 0;
  std::vector<AspCandidate> candidates;
  int chosen = 0;  // index into candidates
};

struct HalfIterationResult {
  int node_count = 0;
  int ports = 0;
  /// Last delivery cycle + 1; zero when nothing was sent.
  long long cycles_to_complete = 0;
  long long last_injection_cycle = -1;
  std::vector<std::vector<long long>> fifo_max;  // [node][input port]
  std::vector<Delivery> deliveries;              // in delivery order
  std::vector<std::vector<int>> arrivals;        // per node, t' in arrival order
  std::optional<std::vector<ServiceRecord>> routing_trace;
  std::vector<AspDecision> asp_decisions;

  long long max_fifo_depth() const;
};

/// Input ports in service order, starting at the rotation pointer.
std::vector<int> serve_order_rr(int pointer, int ports);
std::vector<int> serve_order_rr(const NodeState& s);
/// Descending occupancy, ties by ascending port.
std::vector<int> serve_order_fl(std::span<const long long> occupancy);
std::vector<int> serve_order_fl(const NodeState& s);

/// SSP lookup; the node itself maps to the local port.
int route_ssp(int node, int dest, const SspTable& table);

/// Index of the chosen candidate. Only available candidates compete unless none
/// is available, in which case all do.
int select_asp_candidate(std::span<const AspCandidate> candidates, AspSelection mode);

struct AspChoice {
  int neighbor = 0;
  int in_port = 0;
  int out_port = 0;
};

/// ASP-FT next hop from `node` towards `dest` (dest != node). Increments the
/// chosen usage counter in `state`. `occupancy(l, p)` gives the current length
/// of input FIFO p at node l; `reserved` marks output ports of `node` already
/// taken this cycle (may be empty).
template <class Occupancy>
AspChoice route_asp_ft(const Topology& t, int node, int dest, const AspSets& asp, Occupancy&& occupancy,
                       NodeState& state, std::span<const bool> reserved = {},
                       AspSelection mode = AspSelection::intent);

/// Alternate port for a message whose desired port is already reserved: the
/// lowest free network port, or the local port only for a message addressed to
/// this node. Empty when the message must stay in its FIFO.
std::optional<int> resolve_scm(std::span<const bool> reserved, int degree, bool destined_here);

/// Runs one half iteration. Throws livelock when the cycle or hop guard trips,
/// invalid_topology / precondition on inconsistent inputs.
HalfIterationResult run_half_iteration(const Topology& t, const RoutingTables& rt, const InjectionSchedule& schedule,
                                       const TargetMap& targets, const SimConfig& cfg);

struct IterationResult {
  HalfIterationResult interleave;
  HalfIterationResult deinterleave;
};

IterationResult run_iteration(const Topology& t, const RoutingTables& rt, const InjectionSchedule& schedule,
                              const Permutation& perm, const SimConfig& cfg);

/// Per-node routing memory contents: one word per active cycle, each the M
/// read-enable bits (port 0 most significant) followed by the crossbar
/// configuration word, the lexicographic rank of the input->output permutation.
struct RoutingMemoryImage {
  int ports = 0;
  int ccw_bits = 0;
  int word_bits = 0;
  std::vector<std::vector<std::uint64_t>> words;  // [node]

  long long bits(int node) const { return static_cast<long long>(words[node].size()) * word_bits; }
  long long max_bits() const;
};

/// ceil(log2(M!)).
int crossbar_word_bits(int ports);
/// Lexicographic (Lehmer) rank of a permutation of 0..n-1.
std::uint64_t permutation_rank(std::span<const int> perm);
/// Completes a partial input->output assignment (-1 = unused) to a full
/// permutation: unused inputs keep their own index when that output is free,
/// the rest take the remaining outputs in ascending order.
std::vector<int> complete_assignment(std::span<const int> partial);

RoutingMemoryImage dump_routing_memory(const HalfIterationResult& result);
void write_routing_memory(const RoutingMemoryImage& image, int node, std::ostream& out);
/// CSV `cycle,node,served_port,output_port,dest_node`.
void write_routing_trace_csv(const HalfIterationResult& result, std::ostream& out);

// ---------------------------------------------------------------------------

template <class Occupancy>
AspChoice route_asp_ft(const Topology& t, int node, int dest, const AspSets& asp, Occupancy&& occupancy,
                       NodeState& state, std::span<const bool> reserved, AspSelection mode) {
  std::vector<AspCandidate> cands;
  for (const NextHop& h : asp.at(node, dest)) {
    const Arc& arc = t.out_arc(node, h.port);
    cands.push_back(AspCandidate{h.neighbor, arc.dst_port, h.port, occupancy(h.neighbor, arc.dst_port),
                                 state.q_counters[h.port], reserved.empty() || !reserved[h.port]});
  }
  const AspCandidate& c = cands[select_asp_candidate(cands, mode)];
  ++state.q_counters[c.out_port];
  return AspChoice{c.neighbor, c.in_port, c.out_port};
}

}  // namespace turbonoc
