// SPDX-License-Identifier: Apache-2.0
#include "turbonoc/netsim.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "turbonoc/error.hpp"

namespace turbonoc {

const char* to_string(RoutingAlgorithm r) noexcept {
  switch (r) {
    case RoutingAlgorithm::ssp_rr: return "ssp_rr";
    case RoutingAlgorithm::ssp_fl: return "ssp_fl";
    case RoutingAlgorithm::asp_ft: return "asp_ft";
  }
  return "unknown";
}

const char* to_string(CollisionPolicy c) noexcept { return c == CollisionPolicy::dcm ? "dcm" : "scm"; }

const char* to_string(AspSelection s) noexcept { return s == AspSelection::intent ? "intent" : "literal"; }

long long HalfIterationResult::max_fifo_depth() const {
  long long m = 0;
  for (const auto& node : fifo_max) {
    for (long long v : node) m = std::max(m, v);
  }
  return m;
}

std::vector<int> serve_order_rr(int pointer, int ports) {
  std::vector<int> order(static_cast<std::size_t>(ports));
  for (int k = 0; k < ports; ++k) order[k] = (pointer + k) % ports;
  return order;
}

std::vector<int> serve_order_rr(const NodeState& s) {
  return serve_order_rr(s.rr_pointer, static_cast<int>(s.fifos.size()));
}

std::vector<int> serve_order_fl(std::span<const long long> occupancy) {
  std::vector<int> order(occupancy.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return occupancy[a] > occupancy[b]; });
  return order;
}

std::vector<int> serve_order_fl(const NodeState& s) {
  std::vector<long long> occ;
  occ.reserve(s.fifos.size());
  for (const auto& f : s.fifos) occ.push_back(static_cast<long long>(f.size()));
  return serve_order_fl(occ);
}

int route_ssp(int node, int dest, const SspTable& table) { return table.port(node, dest); }

int select_asp_candidate(std::span<const AspCandidate> candidates, AspSelection mode) {
  if (candidates.empty()) throw Error(ErrorCode::precondition, "ASP-FT decision with no candidates");
  const bool any_available =
      std::any_of(candidates.begin(), candidates.end(), [](const AspCandidate& c) { return c.available; });
  auto competes = [&](const AspCandidate& c) { return c.available || !any_available; };

  int best = -1;
  if (mode == AspSelection::intent) {
    for (int i = 0; i < static_cast<int>(candidates.size()); ++i) {
      const AspCandidate& c = candidates[i];
      if (!competes(c)) continue;
      if (best < 0) {
        best = i;
        continue;
      }
      const AspCandidate& b = candidates[best];
      if (c.occupancy < b.occupancy ||
          (c.occupancy == b.occupancy &&
           (c.usage < b.usage || (c.usage == b.usage && c.out_port < b.out_port)))) {
        best = i;
      }
    }
    return best;
  }

  long long lmin = std::numeric_limits<long long>::max();
  long long qmin = std::numeric_limits<long long>::max();
  for (int i = 0; i < static_cast<int>(candidates.size()); ++i) {
    const AspCandidate& c = candidates[i];
    if (!competes(c)) continue;
    if (c.occupancy <= lmin && c.usage < qmin) {
      qmin = c.usage;
      lmin = c.occupancy;
      best = i;
    }
  }
  // The nested scan always accepts its first competitor, so best is set.
  return best;
}

std::optional<int> resolve_scm(std::span<const bool> reserved, int degree, bool destined_here) {
  if (destined_here) {
    if (!reserved[degree]) return degree;
    return std::nullopt;
  }
  for (int p = 0; p < degree; ++p) {
    if (!reserved[p]) return p;
  }
  return std::nullopt;
}

namespace {

class Engine {
 public:
  Engine(const Topology& t, const RoutingTables& rt, const InjectionSchedule& schedule, const TargetMap& targets,
         const SimConfig& cfg)
      : t_(t), rt_(rt), schedule_(schedule), targets_(targets), cfg_(cfg), p_(t.node_count()), m_(t.ports()),
        local_(t.local_port()) {
    if (!t.in_regular()) {
      throw Error(ErrorCode::invalid_topology, "simulation needs every node to have in-degree D");
    }
    if (schedule.node_count() != p_ || targets.node_count() != p_) {
      throw Error(ErrorCode::precondition, "schedule/target map node count differs from topology P=" +
                                               std::to_string(p_));
    }
    if (rt.distances.size() != p_ || !rt.distances.finite()) {
      throw Error(ErrorCode::precondition, "routing tables do not match a strongly connected topology");
    }
    const auto emissions = schedule.for_node(0);
    if (static_cast<int>(emissions.size()) != targets.steps_per_siso()) {
      throw Error(ErrorCode::precondition, "schedule length differs from N/P");
    }
    nodes_.reserve(static_cast<std::size_t>(p_));
    for (int i = 0; i < p_; ++i) nodes_.emplace_back(m_);
    occupancy_.assign(static_cast<std::size_t>(p_) * m_, 0);
    guard_cycles_ = cfg.guard_cycle_limit > 0 ? cfg.guard_cycle_limit : 64 * std::max<long long>(schedule.horizon(), 1);
    hop_guard_ = cfg.hop_guard > 0 ? cfg.hop_guard : 64 * p_;

    res_.node_count = p_;
    res_.ports = m_;
    res_.fifo_max.assign(static_cast<std::size_t>(p_), std::vector<long long>(static_cast<std::size_t>(m_), 0));
    res_.arrivals.assign(static_cast<std::size_t>(p_), {});
    if (cfg.record_routing_trace) res_.routing_trace.emplace();
    if (!emissions.empty()) res_.last_injection_cycle = emissions.back().cycle;
  }

  HalfIterationResult run() {
    const auto emissions = schedule_.for_node(0);
    const long long total = static_cast<long long>(p_) * static_cast<long long>(emissions.size());
    res_.deliveries.reserve(static_cast<std::size_t>(total));
    std::size_t next = 0;
    long long cycle = 0;
    while (delivered_ < total) {
      if (cycle > guard_cycles_) throw livelock(cycle, "cycle guard " + std::to_string(guard_cycles_) + " exceeded");
      arrival_phase(cycle);
      if (delivered_ == total) {
        res_.cycles_to_complete = cycle + 1;
        break;
      }
      while (next < emissions.size() && emissions[next].cycle == cycle) {
        inject(cycle, emissions[next].local_index);
        ++next;
      }
      snapshot_occupancy();
      for (int u = 0; u < p_; ++u) serve(u, cycle);
      if (cfg_.check_conservation) check_conservation(cycle);
      ++cycle;
    }
    return std::move(res_);
  }

 private:
  long long& occ(int node, int port) { return occupancy_[static_cast<std::size_t>(node) * m_ + port]; }

  void arrival_phase(long long cycle) {
    for (int u = 0; u < p_; ++u) {
      NodeState& ns = nodes_[u];
      for (int port = 0; port < m_; ++port) {
        auto& reg = ns.output_registers[port];
        if (!reg) continue;
        Message msg = std::move(*reg);
        reg.reset();
        if (port == local_) {
          deliver(u, std::move(msg), cycle);
          continue;
        }
        const Arc& arc = t_.out_arc(u, port);
        ++msg.hop_count;
        if (cfg_.record_paths) msg.path.push_back(arc.dst);
        if (msg.hop_count > hop_guard_) {
          throw livelock(cycle, "message from node " + std::to_string(msg.source_node) + " exceeded hop guard " +
                                    std::to_string(hop_guard_));
        }
        nodes_[arc.dst].fifos[arc.dst_port].push_back(std::move(msg));
      }
    }
  }

  void deliver(int node, Message msg, long long cycle) {
    if (msg.dest_node != node) {
      throw Error(ErrorCode::model_inconsistency, "message for node " + std::to_string(msg.dest_node) +
                                                      " delivered at node " + std::to_string(node));
    }
    res_.arrivals[node].push_back(msg.dest_location);
    res_.deliveries.push_back(Delivery{msg.source_node, msg.source_index, msg.dest_node, msg.dest_location,
                                       msg.injected_cycle, cycle, msg.hop_count, std::move(msg.path)});
    ++delivered_;
  }

  void inject(long long cycle, int local_index) {
    for (int i = 0; i < p_; ++i) {
      const Target& tgt = targets_.at(i, local_index);
      Message msg;
      msg.dest_node = tgt.node;
      msg.dest_location = tgt.location;
      msg.payload_bits = cfg_.payload_bits;
      msg.injected_cycle = cycle;
      msg.source_node = i;
      msg.source_index = local_index;
      if (cfg_.record_paths) msg.path.push_back(i);
      nodes_[i].fifos[local_].push_back(std::move(msg));
      ++injected_;
    }
  }

  void snapshot_occupancy() {
    for (int u = 0; u < p_; ++u) {
      for (int port = 0; port < m_; ++port) {
        const auto len = static_cast<long long>(nodes_[u].fifos[port].size());
        occ(u, port) = len;
        auto& mx = res_.fifo_max[u][port];
        mx = std::max(mx, len);
      }
    }
  }

  int desired_port(int u, const Message& msg, std::span<const bool> reserved, long long cycle) {
    if (msg.dest_node == u) return local_;
    if (cfg_.routing != RoutingAlgorithm::asp_ft) return route_ssp(u, msg.dest_node, rt_.ssp);

    std::vector<AspCandidate>& cands = cand_scratch_;
    cands.clear();
    for (const NextHop& h : rt_.asp.at(u, msg.dest_node)) {
      const Arc& arc = t_.out_arc(u, h.port);
      cands.push_back(AspCandidate{h.neighbor, arc.dst_port, h.port, occ(h.neighbor, arc.dst_port),
                                   nodes_[u].q_counters[h.port], !reserved[h.port]});
    }
    const int chosen = select_asp_candidate(cands, cfg_.asp_selection);
    if (cfg_.record_asp_decisions) res_.asp_decisions.push_back(AspDecision{cycle, u, msg.dest_node, cands, chosen});
    return cands[chosen].out_port;
  }

  void serve(int u, long long cycle) {
    NodeState& ns = nodes_[u];
    bool active = false;
    for (int port = 0; port < m_; ++port) active = active || occ(u, port) > 0;

    std::vector<int> order = cfg_.routing == RoutingAlgorithm::ssp_rr
                                 ? serve_order_rr(ns.rr_pointer, m_)
                                 : serve_order_fl(std::span<const long long>(&occupancy_[static_cast<std::size_t>(u) * m_],
                                                                             static_cast<std::size_t>(m_)));
    ns.rr_pointer = (ns.rr_pointer + 1) % m_;
    if (!active) return;

    // output reservation mask; M <= 64 is checked on entry
    bool reserved[64];
    std::fill(reserved, reserved + m_, false);
    std::span<const bool> mask(reserved, static_cast<std::size_t>(m_));

    ServiceRecord rec{cycle, u, {}};
    for (int in_port : order) {
      auto& fifo = ns.fifos[in_port];
      if (fifo.empty()) continue;
      const Message& head = fifo.front();
      int out = desired_port(u, head, mask, cycle);
      if (reserved[out]) {
        if (cfg_.collision == CollisionPolicy::dcm) continue;
        auto alt = resolve_scm(mask, t_.degree(), head.dest_node == u);
        if (!alt) continue;
        out = *alt;
      }
      reserved[out] = true;
      if (out != local_) ++ns.q_counters[out];
      rec.grants.push_back(ServiceGrant{in_port, out, head.dest_node});
      ns.output_registers[out] = std::move(fifo.front());
      fifo.pop_front();
    }
    if (res_.routing_trace) res_.routing_trace->push_back(std::move(rec));
  }

  void check_conservation(long long cycle) {
    long long queued = 0;
    for (const NodeState& ns : nodes_) {
      for (const auto& f : ns.fifos) queued += static_cast<long long>(f.size());
      for (const auto& r : ns.output_registers) queued += r ? 1 : 0;
    }
    if (injected_ != queued + delivered_) {
      throw Error(ErrorCode::model_inconsistency,
                  "conservation violated at cycle " + std::to_string(cycle) + ": injected " +
                      std::to_string(injected_) + " != in-flight " + std::to_string(queued) + " + delivered " +
                      std::to_string(delivered_));
    }
  }

  Error livelock(long long cycle, const std::string& why) const {
    long long in_fifos = 0, in_regs = 0;
    int max_hops = 0;
    for (const NodeState& ns : nodes_) {
      for (const auto& f : ns.fifos) {
        in_fifos += static_cast<long long>(f.size());
        for (const Message& m : f) max_hops = std::max(max_hops, m.hop_count);
      }
      for (const auto& r : ns.output_registers) {
        if (r) {
          ++in_regs;
          max_hops = std::max(max_hops, r->hop_count);
        }
      }
    }
    std::ostringstream msg;
    msg << "livelock detected at cycle " << cycle << " (" << why << "): injected " << injected_ << ", delivered "
        << delivered_ << ", in FIFOs " << in_fifos << ", in registers " << in_regs << ", max hops " << max_hops;
    return Error(ErrorCode::livelock, msg.str());
  }

  const Topology& t_;
  const RoutingTables& rt_;
  const InjectionSchedule& schedule_;
  const TargetMap& targets_;
  const SimConfig& cfg_;
  int p_;
  int m_;
  int local_;
  long long guard_cycles_ = 0;
  int hop_guard_ = 0;
  std::vector<NodeState> nodes_;
  std::vector<long long> occupancy_;
  std::vector<AspCandidate> cand_scratch_;
  long long injected_ = 0;
  long long delivered_ = 0;
  HalfIterationResult res_;
};

}  // namespace

HalfIterationResult run_half_iteration(const Topology& t, const RoutingTables& rt, const InjectionSchedule& schedule,
                                       const TargetMap& targets, const SimConfig& cfg) {
  if (t.ports() > 64) throw Error(ErrorCode::invalid_parameter, "at most 64 ports per node are supported");
  return Engine(t, rt, schedule, targets, cfg).run();
}

IterationResult run_iteration(const Topology& t, const RoutingTables& rt, const InjectionSchedule& schedule,
                              const Permutation& perm, const SimConfig& cfg) {
  IterationResult r;
  r.interleave = run_half_iteration(t, rt, schedule, target_map(perm, t.node_count(), Direction::interleave), cfg);
  r.deinterleave =
      run_half_iteration(t, rt, schedule, target_map(perm, t.node_count(), Direction::deinterleave), cfg);
  return r;
}

// --- routing memory ---------------------------------------------------------

int crossbar_word_bits(int ports) {
  if (ports < 1 || ports > 20) throw Error(ErrorCode::invalid_parameter, "crossbar word needs 1 <= M <= 20");
  std::uint64_t fact = 1;
  for (int k = 2; k <= ports; ++k) fact *= static_cast<std::uint64_t>(k);
  int bits = 0;
  while (bits < 64 && (std::uint64_t{1} << bits) < fact) ++bits;
  return bits;
}

std::uint64_t permutation_rank(std::span<const int> perm) {
  const int n = static_cast<int>(perm.size());
  std::uint64_t rank = 0;
  for (int i = 0; i < n; ++i) {
    std::uint64_t smaller = 0;
    for (int j = i + 1; j < n; ++j) smaller += perm[j] < perm[i] ? 1 : 0;
    rank = rank * static_cast<std::uint64_t>(n - i) + smaller;
  }
  return rank;
}

std::vector<int> complete_assignment(std::span<const int> partial) {
  const int n = static_cast<int>(partial.size());
  std::vector<int> perm(partial.begin(), partial.end());
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (int v : perm) {
    if (v >= 0) used[v] = true;
  }
  for (int i = 0; i < n; ++i) {
    if (perm[i] < 0 && !used[i]) {
      perm[i] = i;
      used[i] = true;
    }
  }
  int free_out = 0;
  for (int i = 0; i < n; ++i) {
    if (perm[i] >= 0) continue;
    while (used[free_out]) ++free_out;
    perm[i] = free_out;
    used[free_out] = true;
  }
  return perm;
}

long long RoutingMemoryImage::max_bits() const {
  long long m = 0;
  for (int i = 0; i < static_cast<int>(words.size()); ++i) m = std::max(m, bits(i));
  return m;
}

RoutingMemoryImage dump_routing_memory(const HalfIterationResult& result) {
  if (!result.routing_trace) {
    throw Error(ErrorCode::precondition, "routing memory needs a simulation run with the routing trace enabled");
  }
  RoutingMemoryImage img;
  img.ports = result.ports;
  img.ccw_bits = crossbar_word_bits(result.ports);
  img.word_bits = result.ports + img.ccw_bits;
  if (img.word_bits > 64) throw Error(ErrorCode::invalid_parameter, "routing memory word wider than 64 bits");
  img.words.assign(static_cast<std::size_t>(result.node_count), {});
  std::vector<int> partial(static_cast<std::size_t>(result.ports));
  for (const ServiceRecord& rec : *result.routing_trace) {
    std::fill(partial.begin(), partial.end(), -1);
    std::uint64_t ren = 0;
    for (const ServiceGrant& g : rec.grants) {
      partial[g.in_port] = g.out_port;
      ren |= std::uint64_t{1} << (result.ports - 1 - g.in_port);
    }
    const std::vector<int> perm = complete_assignment(partial);
    img.words[rec.node].push_back((ren << img.ccw_bits) | permutation_rank(perm));
  }
  return img;
}

void write_routing_memory(const RoutingMemoryImage& image, int node, std::ostream& out) {
  for (std::uint64_t w : image.words[node]) {
    for (int b = image.word_bits - 1; b >= 0; --b) out << (((w >> b) & 1U) ? '1' : '0');
    out << '\n';
  }
}

void write_routing_trace_csv(const HalfIterationResult& result, std::ostream& out) {
  if (!result.routing_trace) throw Error(ErrorCode::precondition, "routing trace was not recorded");
  out << "cycle,node,served_port,output_port,dest_node\n";
  for (const ServiceRecord& rec : *result.routing_trace) {
    for (const ServiceGrant& g : rec.grants) {
      out << rec.cycle << ',' << rec.node << ',' << g.in_port << ',' << g.out_port << ',' << g.dest_node << '\n';
    }
  }
}

}  // namespace turbonoc
