// SPDX-License-Identifier: Apache-2.0
#include "turbonoc/metrics.hpp"

#include <algorithm>

#include "turbonoc/error.hpp"
#include "turbonoc/keyvalue.hpp"

namespace turbonoc {

HalfIterationSplit half_iteration_decomposition(long long frame_steps, int node_count, int tau, long long measured) {
  if (node_count < 1 || tau < 1) throw Error(ErrorCode::invalid_parameter, "P and tau must be positive");
  const Rational ideal(Rational::int_type{frame_steps} * tau, node_count);
  if (Rational(measured) < Rational(ideal.ceil())) {
    throw Error(ErrorCode::model_inconsistency, "measured half iteration of " + std::to_string(measured) +
                                                    " cycles is shorter than N/(P R) = " + ideal.to_string());
  }
  return HalfIterationSplit{ideal, Rational(measured) - ideal};
}

Rational throughput_for_cycles(int bits_per_step, long long frame_steps, long long f_clk_hz, int iterations,
                               const Rational& half_iteration_cycles) {
  if (half_iteration_cycles <= Rational(0)) {
    throw Error(ErrorCode::invalid_parameter, "half-iteration cycles must be positive");
  }
  const Rational num(Rational::int_type{bits_per_step} * frame_steps * f_clk_hz);
  return num / (Rational(2 * iterations) * half_iteration_cycles);
}

Rational throughput(const ThroughputInputs& in) {
  return throughput_for_cycles(in.bits_per_step, in.frame_steps, in.f_clk_hz, in.iterations,
                               Rational(in.half_iteration_cycles()));
}

Rational throughput_ideal(int bits_per_step, int node_count, int tau, int iterations, long long f_clk_hz) {
  return Rational(Rational::int_type{bits_per_step} * node_count * f_clk_hz,
                  Rational::int_type{2} * iterations * tau);
}

long long min_parallelism(const MinParallelismInputs& in) {
  if (in.f_clk_hz <= Rational(0)) throw Error(ErrorCode::invalid_parameter, "f_clk must be positive");
  const Rational p = Rational(in.iterations) * in.cycles_per_bit * in.target_bps / in.f_clk_hz;
  return static_cast<long long>(p.ceil());
}

const char* to_string(NodeArchitecture a) noexcept {
  switch (a) {
    case NodeArchitecture::a: return "a";
    case NodeArchitecture::b: return "b";
    case NodeArchitecture::c: return "c";
  }
  return "?";
}

int ceil_log2(long long n) {
  int b = 0;
  while (b < 62 && (1LL << b) < n) ++b;
  return b;
}

MemoryBudget memory_budget(NodeArchitecture arch, long long frame_steps, int node_count, int payload_bits,
                           std::optional<long long> routing_bits) {
  if (node_count < 1 || frame_steps % node_count != 0) {
    throw Error(ErrorCode::invalid_parameter, "P must divide N for a memory budget");
  }
  const long long steps = frame_steps / node_count;
  const int loc = ceil_log2(steps);
  const int id = ceil_log2(node_count);
  MemoryBudget m;
  switch (arch) {
    case NodeArchitecture::a:
      m.identifier_bits = steps * id;
      m.location_bits = steps * loc;
      m.message_width = payload_bits + loc + id;
      break;
    case NodeArchitecture::b:
      if (!routing_bits) throw Error(ErrorCode::precondition, "architecture (b) needs the routing memory image");
      m.routing_bits = *routing_bits;
      m.location_bits = steps * loc;
      m.message_width = payload_bits;
      break;
    case NodeArchitecture::c:
      m.identifier_bits = steps * id;
      m.location_bits = steps * loc;
      m.message_width = payload_bits + id;
      break;
  }
  return m;
}

CostModel cost_model_from(const std::map<std::string, std::string>& kv) {
  CostModel cm;
  auto get = [&](const char* key, double& field) {
    auto it = kv.find(key);
    if (it == kv.end()) return;
    try {
      field = parse_rational(it->second).to_double();
    } catch (const Error&) {
      throw Error(ErrorCode::config_error, std::string("cost model: ") + key + " is not a number");
    }
    if (field < 0) throw Error(ErrorCode::config_error, std::string("cost model: ") + key + " must be >= 0");
  };
  get("fifo_bit", cm.fifo_bit);
  get("ram_bit", cm.ram_bit);
  get("crossbar_bit", cm.crossbar_bit);
  get("register_bit", cm.register_bit);
  get("logic_base", cm.logic_base);
  get("logic_per_port", cm.logic_per_port);
  return cm;
}

CostModel load_cost_model(const std::filesystem::path& path) { return cost_model_from(load_key_values(path)); }

AreaEstimate area_estimate(const AreaInputs& in, const CostModel& cm) {
  AreaEstimate a;
  long long fifo_bits = 0;
  for (const auto& node : in.fifo_max) {
    for (long long depth : node) fifo_bits += depth * in.message_width;
  }
  const double nodes = static_cast<double>(in.fifo_max.size());
  const double m = in.ports;
  a.fifo = static_cast<double>(fifo_bits) * cm.fifo_bit;
  a.crossbar = nodes * m * m * in.message_width * cm.crossbar_bit;
  a.registers = nodes * m * in.message_width * cm.register_bit;
  a.routing = static_cast<double>(in.routing_bits) * cm.ram_bit + nodes * (cm.logic_base + cm.logic_per_port * m);
  a.memory = static_cast<double>(in.memory_bits) * cm.ram_bit;
  return a;
}

namespace {

void accumulate(std::optional<LatencyStats>& s, long long lat, Rational::int_type& sum) {
  if (!s) {
    s = LatencyStats{0, lat, lat, Rational(0)};
  }
  ++s->count;
  s->min = std::min(s->min, lat);
  s->max = std::max(s->max, lat);
  sum += lat;
}

}  // namespace

LatencySummary latency_stats(const std::vector<const HalfIterationResult*>& results) {
  LatencySummary out;
  int nodes = 0;
  for (const auto* r : results) nodes = std::max(nodes, r->node_count);
  out.per_node.assign(static_cast<std::size_t>(nodes), std::nullopt);
  std::vector<Rational::int_type> sums(static_cast<std::size_t>(nodes), 0);
  Rational::int_type total = 0;
  for (const auto* r : results) {
    for (const Delivery& d : r->deliveries) {
      accumulate(out.per_node[d.dest_node], d.latency(), sums[d.dest_node]);
      accumulate(out.global, d.latency(), total);
    }
  }
  for (int i = 0; i < nodes; ++i) {
    if (out.per_node[i]) out.per_node[i]->avg = Rational(sums[i], out.per_node[i]->count);
  }
  if (out.global) out.global->avg = Rational(total, out.global->count);
  return out;
}

LatencySummary latency_stats(const HalfIterationResult& result) { return latency_stats({&result}); }

}  // namespace turbonoc
