// SPDX-License-Identifier: Apache-2.0
#include "turbonoc/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "turbonoc/error.hpp"
#include "turbonoc/routing_tables.hpp"

namespace turbonoc {

namespace {

using KeyValues = std::map<std::string, std::string>;

Error config_error(const std::string& key, const std::string& why) {
  return Error(ErrorCode::config_error, key + ": " + why);
}

long long parse_int(const std::string& key, const std::string& text, long long lo, long long hi) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (text.empty() || used != text.size()) throw config_error(key, "expected an integer, got '" + text + "'");
  if (v < lo || v > hi) {
    throw config_error(key, "value " + text + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  throw config_error(key, "expected true/false, got '" + text + "'");
}

TopologyKind parse_kind(const std::string& key, const std::string& text) {
  if (text == "ring") return TopologyKind::ring;
  if (text == "mesh" || text == "toroidal_mesh") return TopologyKind::toroidal_mesh;
  if (text == "honeycomb" || text == "honeycomb_torus") return TopologyKind::honeycomb_torus;
  if (text == "debruijn" || text == "gen_de_bruijn") return TopologyKind::gen_de_bruijn;
  if (text == "kautz" || text == "gen_kautz") return TopologyKind::gen_kautz;
  if (text == "file" || text == "custom") return TopologyKind::custom;
  throw config_error(key, "unknown topology '" + text + "' (ring, mesh, honeycomb, debruijn, kautz, file)");
}

RoutingAlgorithm parse_routing(const std::string& key, const std::string& text) {
  if (text == "ssp_rr") return RoutingAlgorithm::ssp_rr;
  if (text == "ssp_fl") return RoutingAlgorithm::ssp_fl;
  if (text == "asp_ft") return RoutingAlgorithm::asp_ft;
  throw config_error(key, "unknown routing '" + text + "' (ssp_rr, ssp_fl, asp_ft)");
}

CollisionPolicy parse_collision(const std::string& key, const std::string& text) {
  if (text == "dcm") return CollisionPolicy::dcm;
  if (text == "scm") return CollisionPolicy::scm;
  throw config_error(key, "unknown collision policy '" + text + "' (dcm, scm)");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

const std::vector<std::string>& sweep_keys() {
  static const std::vector<std::string> keys{"topologies", "degrees", "P_list", "tau_list",
                                             "routings",   "collisions", "threads"};
  return keys;
}

std::string fmt_double(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

SisoTimingParams RunConfig::timing() const {
  SisoTimingParams p;
  p.window = window;
  p.tau = tau;
  p.theta = theta.value_or(tau);
  p.latency = delta.value_or(static_cast<long long>(window) * tau);
  p.order = order;
  return p;
}

RunConfig run_config_from(const KeyValues& kv) {
  RunConfig c;
  bool payload_set = false;
  for (const auto& [key, value] : kv) {
    if (key == "topology") {
      c.topology.kind = parse_kind(key, value);
    } else if (key == "P") {
      c.topology.node_count = static_cast<int>(parse_int(key, value, 1, 1 << 20));
    } else if (key == "degree") {
      c.topology.degree = static_cast<int>(parse_int(key, value, 1, 63));
    } else if (key == "rows") {
      c.topology.rows = static_cast<int>(parse_int(key, value, 1, 1 << 16));
    } else if (key == "cols") {
      c.topology.cols = static_cast<int>(parse_int(key, value, 1, 1 << 16));
    } else if (key == "topology_file") {
      c.topology.file = value;
    } else if (key == "N") {
      c.frame_steps = static_cast<int>(parse_int(key, value, 1, 1 << 28));
    } else if (key == "interleaver") {
      if (value == "circular") c.interleaver.kind = InterleaverKind::circular;
      else if (value == "file") c.interleaver.kind = InterleaverKind::file;
      else if (value == "random") c.interleaver.kind = InterleaverKind::random;
      else if (value == "identity") c.interleaver.kind = InterleaverKind::identity;
      else throw config_error(key, "unknown interleaver '" + value + "' (circular, file, random, identity)");
    } else if (key == "cs_step") {
      c.interleaver.step = parse_int(key, value, 0, 1LL << 40);
    } else if (key == "cs_offset") {
      c.interleaver.offset = parse_int(key, value, -(1LL << 40), 1LL << 40);
    } else if (key == "perm_file") {
      c.interleaver.file = value;
    } else if (key == "seed") {
      c.interleaver.seed = static_cast<std::uint64_t>(parse_int(key, value, 0, (1LL << 62)));
    } else if (key == "W") {
      c.window = static_cast<int>(parse_int(key, value, 1, 1 << 24));
    } else if (key == "tau") {
      c.tau = static_cast<int>(parse_int(key, value, 1, 1 << 16));
    } else if (key == "theta") {
      c.theta = static_cast<int>(parse_int(key, value, 1, 1 << 16));
    } else if (key == "delta") {
      c.delta = parse_int(key, value, 0, 1LL << 40);
    } else if (key == "order") {
      if (value == "forward") c.order = EmissionOrder::forward;
      else if (value == "backward") c.order = EmissionOrder::backward;
      else throw config_error(key, "expected forward or backward, got '" + value + "'");
    } else if (key == "routing") {
      c.routing = parse_routing(key, value);
    } else if (key == "collision") {
      c.collision = parse_collision(key, value);
    } else if (key == "asp_selection") {
      if (value == "intent") c.asp_selection = AspSelection::intent;
      else if (value == "literal") c.asp_selection = AspSelection::literal;
      else throw config_error(key, "expected intent or literal, got '" + value + "'");
    } else if (key == "guard_cycles") {
      c.guard_cycles = parse_int(key, value, 0, 1LL << 50);
    } else if (key == "check_conservation") {
      c.check_conservation = parse_bool(key, value);
    } else if (key == "d") {
      c.bits_per_step = static_cast<int>(parse_int(key, value, 1, 2));
    } else if (key == "I") {
      c.iterations = static_cast<int>(parse_int(key, value, 1, 1 << 16));
    } else if (key == "f_clk") {
      c.f_clk_hz = parse_int(key, value, 1, 1LL << 50);
    } else if (key == "payload_bits") {
      c.payload_bits = static_cast<int>(parse_int(key, value, 1, 1 << 16));
      payload_set = true;
    } else if (key == "cost_model") {
      c.cost_model_file = value;
    } else if (key == "report") {
      c.report_path = value;
    } else if (key == "csv") {
      c.csv_path = value;
    } else if (key == "artifacts_dir") {
      c.artifacts_dir = value;
    } else if (key == "emit_routing_memory") {
      c.emit_routing_memory = parse_bool(key, value);
    } else if (key == "emit_location_memory") {
      c.emit_location_memory = parse_bool(key, value);
    } else if (key == "emit_fifo_depths") {
      c.emit_fifo_depths = parse_bool(key, value);
    } else if (key == "emit_trace") {
      c.emit_trace = parse_bool(key, value);
    } else if (std::find(sweep_keys().begin(), sweep_keys().end(), key) != sweep_keys().end()) {
      // consumed by sweep_spec_from
    } else {
      throw config_error(key, "unknown configuration key");
    }
  }
  if (!payload_set && c.bits_per_step == 2) c.payload_bits = 24;
  if (!c.cost_model_file.empty()) {
    try {
      c.cost_model = load_cost_model(c.cost_model_file);
    } catch (const Error& e) {
      throw config_error("cost_model", e.what());
    }
  }
  return c;
}

KeyValues to_key_values(const RunConfig& c) {
  KeyValues kv;
  const TopologySpec& t = c.topology;
  kv["topology"] = t.kind == TopologyKind::custom ? "file" : to_string(t.kind);
  kv["P"] = std::to_string(t.node_count);
  if (t.kind == TopologyKind::gen_de_bruijn || t.kind == TopologyKind::gen_kautz) kv["degree"] = std::to_string(t.degree);
  if (t.kind == TopologyKind::toroidal_mesh || t.kind == TopologyKind::honeycomb_torus) {
    kv["rows"] = std::to_string(t.rows);
    kv["cols"] = std::to_string(t.cols);
  }
  if (t.kind == TopologyKind::custom) kv["topology_file"] = t.file.string();
  kv["N"] = std::to_string(c.frame_steps);
  switch (c.interleaver.kind) {
    case InterleaverKind::circular:
      kv["interleaver"] = "circular";
      kv["cs_step"] = std::to_string(c.interleaver.step ? c.interleaver.step : default_circular_step(c.frame_steps));
      kv["cs_offset"] = std::to_string(c.interleaver.offset);
      break;
    case InterleaverKind::file:
      kv["interleaver"] = "file";
      kv["perm_file"] = c.interleaver.file.string();
      break;
    case InterleaverKind::random:
      kv["interleaver"] = "random";
      kv["seed"] = std::to_string(c.interleaver.seed);
      break;
    case InterleaverKind::identity: kv["interleaver"] = "identity"; break;
  }
  const SisoTimingParams tp = c.timing();
  kv["W"] = std::to_string(tp.window);
  kv["tau"] = std::to_string(tp.tau);
  kv["theta"] = std::to_string(tp.theta);
  kv["delta"] = std::to_string(tp.latency);
  kv["order"] = to_string(tp.order);
  kv["routing"] = to_string(c.routing);
  kv["collision"] = to_string(c.collision);
  kv["asp_selection"] = to_string(c.asp_selection);
  kv["guard_cycles"] = std::to_string(c.guard_cycles);
  kv["d"] = std::to_string(c.bits_per_step);
  kv["I"] = std::to_string(c.iterations);
  kv["f_clk"] = std::to_string(c.f_clk_hz);
  kv["payload_bits"] = std::to_string(c.payload_bits);
  if (!c.cost_model_file.empty()) kv["cost_model"] = c.cost_model_file.string();
  return kv;
}

long long default_circular_step(long long n) {
  long long a = static_cast<long long>(std::ceil(std::sqrt(static_cast<double>(n))));
  while (a * a < n) ++a;
  while (a > 1 && (a - 1) * (a - 1) >= n) --a;
  while (std::gcd(a, n) != 1) ++a;
  return a;
}

void check(const RunConfig& c) {
  const TopologySpec& t = c.topology;
  if (t.kind == TopologyKind::toroidal_mesh || t.kind == TopologyKind::honeycomb_torus) {
    if (t.rows == 0 || t.cols == 0) throw config_error("rows", "mesh and honeycomb topologies need rows and cols");
    if (t.rows * t.cols != t.node_count) {
      throw config_error("rows", "rows x cols = " + std::to_string(t.rows * t.cols) + " differs from P=" +
                                     std::to_string(t.node_count));
    }
  }
  if (t.kind == TopologyKind::custom && t.file.empty()) throw config_error("topology_file", "required for topology=file");
  if (t.kind != TopologyKind::custom && c.frame_steps % t.node_count != 0) {
    throw config_error("P", "P must divide N (P=" + std::to_string(t.node_count) + ", N=" +
                                std::to_string(c.frame_steps) + ")");
  }
  if (c.interleaver.kind == InterleaverKind::file && c.interleaver.file.empty()) {
    throw config_error("perm_file", "required for interleaver=file");
  }
  if (c.interleaver.kind == InterleaverKind::circular && c.interleaver.step != 0 &&
      std::gcd(c.interleaver.step, static_cast<long long>(c.frame_steps)) != 1) {
    throw config_error("cs_step", "must be coprime with N=" + std::to_string(c.frame_steps));
  }
}

Topology build_topology(const TopologySpec& s) {
  switch (s.kind) {
    case TopologyKind::ring: return build_ring(s.node_count);
    case TopologyKind::toroidal_mesh: return build_toroidal_mesh(s.rows, s.cols);
    case TopologyKind::honeycomb_torus: return build_honeycomb_torus(s.rows, s.cols);
    case TopologyKind::gen_de_bruijn: return build_gen_de_bruijn(s.node_count, s.degree);
    case TopologyKind::gen_kautz: return build_gen_kautz(s.node_count, s.degree);
    case TopologyKind::custom: return load_topology(s.file);
  }
  throw Error(ErrorCode::invalid_parameter, "unknown topology kind");
}

Permutation build_permutation(const RunConfig& c) {
  switch (c.interleaver.kind) {
    case InterleaverKind::circular:
      return gen_circular_shifting(c.frame_steps,
                                   c.interleaver.step ? c.interleaver.step : default_circular_step(c.frame_steps),
                                   c.interleaver.offset);
    case InterleaverKind::file: return load_permutation(c.interleaver.file, c.frame_steps);
    case InterleaverKind::random: return gen_random_permutation(c.frame_steps, c.interleaver.seed);
    case InterleaverKind::identity: return identity_permutation(c.frame_steps);
  }
  throw Error(ErrorCode::invalid_parameter, "unknown interleaver kind");
}

std::string interleaver_label(const RunConfig& c) {
  switch (c.interleaver.kind) {
    case InterleaverKind::circular: {
      const long long a = c.interleaver.step ? c.interleaver.step : default_circular_step(c.frame_steps);
      return "circular:a=" + std::to_string(a) + ":s=" + std::to_string(c.interleaver.offset);
    }
    case InterleaverKind::file: return "file:" + c.interleaver.file.filename().string();
    case InterleaverKind::random: return "random:seed=" + std::to_string(c.interleaver.seed);
    case InterleaverKind::identity: return "identity";
  }
  return "?";
}

std::string topology_label(const TopologySpec& s) {
  switch (s.kind) {
    case TopologyKind::gen_de_bruijn:
    case TopologyKind::gen_kautz: return std::string(to_string(s.kind)) + std::to_string(s.degree);
    case TopologyKind::toroidal_mesh:
    case TopologyKind::honeycomb_torus:
      return std::string(to_string(s.kind)) + ":" + std::to_string(s.rows) + "x" + std::to_string(s.cols);
    case TopologyKind::custom: return "file:" + s.file.filename().string();
    case TopologyKind::ring: return "ring";
  }
  return "?";
}

Report run_pipeline(const RunConfig& cfg) {
  check(cfg);
  Report r;
  r.config = cfg;
  const Topology topo = build_topology(cfg.topology);
  if (cfg.frame_steps % topo.node_count() != 0) {
    throw config_error("P", "P must divide N (P=" + std::to_string(topo.node_count()) + ", N=" +
                                std::to_string(cfg.frame_steps) + ")");
  }
  r.config.topology.node_count = topo.node_count();
  r.node_count = topo.node_count();
  r.degree = topo.degree();
  r.ports = topo.ports();
  const RoutingTables tables = build_routing_tables(topo);
  r.diameter = diameter(tables.distances);

  const Permutation perm = build_permutation(cfg);
  const int steps = cfg.frame_steps / topo.node_count();
  const InjectionSchedule schedule = injection_schedule(cfg.timing(), steps, topo.node_count());

  SimConfig sc;
  sc.routing = cfg.routing;
  sc.collision = cfg.collision;
  sc.asp_selection = cfg.asp_selection;
  sc.guard_cycle_limit = cfg.guard_cycles;
  sc.payload_bits = cfg.payload_bits;
  sc.record_routing_trace = true;
  sc.check_conservation = cfg.check_conservation;
  r.sim = run_iteration(topo, tables, schedule, perm, sc);

  r.cycles_interleave = r.sim.interleave.cycles_to_complete;
  r.cycles_deinterleave = r.sim.deinterleave.cycles_to_complete;
  ThroughputInputs ti{cfg.frame_steps, topo.node_count(), cfg.tau, cfg.bits_per_step, cfg.iterations,
                      cfg.f_clk_hz, r.cycles_interleave, r.cycles_deinterleave};
  r.split = half_iteration_decomposition(cfg.frame_steps, topo.node_count(), cfg.tau, ti.half_iteration_cycles());
  r.throughput_bps = throughput(ti);
  r.ideal_bps = throughput_ideal(cfg.bits_per_step, topo.node_count(), cfg.tau, cfg.iterations, cfg.f_clk_hz);
  r.latency = latency_stats({&r.sim.interleave, &r.sim.deinterleave});

  r.fifo_max = r.sim.interleave.fifo_max;
  for (int i = 0; i < r.node_count; ++i) {
    for (int p = 0; p < r.ports; ++p) r.fifo_max[i][p] = std::max(r.fifo_max[i][p], r.sim.deinterleave.fifo_max[i][p]);
  }

  r.routing_memory_interleave = dump_routing_memory(r.sim.interleave);
  r.routing_memory_deinterleave = dump_routing_memory(r.sim.deinterleave);
  long long routing_bits_worst = 0;
  long long routing_bits_sum = 0;
  for (int i = 0; i < r.node_count; ++i) {
    const long long b = std::max(r.routing_memory_interleave.bits(i), r.routing_memory_deinterleave.bits(i));
    routing_bits_worst = std::max(routing_bits_worst, b);
    routing_bits_sum += b;
  }
  r.memory_a = memory_budget(NodeArchitecture::a, cfg.frame_steps, r.node_count, cfg.payload_bits);
  r.memory_b = memory_budget(NodeArchitecture::b, cfg.frame_steps, r.node_count, cfg.payload_bits, routing_bits_worst);
  r.memory_c = memory_budget(NodeArchitecture::c, cfg.frame_steps, r.node_count, cfg.payload_bits);

  r.architecture = cfg.routing == RoutingAlgorithm::asp_ft ? NodeArchitecture::b : NodeArchitecture::c;
  AreaInputs ai;
  ai.ports = r.ports;
  ai.fifo_max = r.fifo_max;
  if (r.architecture == NodeArchitecture::b) {
    ai.message_width = r.memory_b.message_width;
    ai.routing_bits = routing_bits_sum;
    ai.memory_bits = r.memory_b.location_bits * r.node_count;
  } else {
    ai.message_width = r.memory_c.message_width;
    // SSP lookup table: P entries of ceil(log2 M) bits per node
    ai.routing_bits = static_cast<long long>(r.node_count) * r.node_count * ceil_log2(r.ports);
    ai.memory_bits = (r.memory_c.identifier_bits + r.memory_c.location_bits) * r.node_count;
  }
  r.area = area_estimate(ai, cfg.cost_model);
  return r;
}

namespace {

nlohmann::json rational_json(const Rational& v, int digits) {
  return nlohmann::json{{"exact", v.to_string()}, {"value", v.to_decimal(digits)}};
}

nlohmann::json latency_json(const std::optional<LatencyStats>& s) {
  if (!s) return nullptr;
  return nlohmann::json{{"count", s->count}, {"min", s->min}, {"max", s->max}, {"avg", rational_json(s->avg, 4)}};
}

nlohmann::json half_json(const HalfIterationResult& h, const RoutingMemoryImage& rm) {
  nlohmann::json j;
  j["cycles"] = h.cycles_to_complete;
  j["last_injection_cycle"] = h.last_injection_cycle;
  j["delivered"] = h.deliveries.size();
  j["max_fifo_depth"] = h.max_fifo_depth();
  j["latency"] = latency_json(latency_stats(h).global);
  nlohmann::json words = nlohmann::json::array();
  for (int i = 0; i < h.node_count; ++i) words.push_back(rm.words[i].size());
  j["routing_memory_words"] = words;
  return j;
}

nlohmann::json memory_json(const MemoryBudget& m) {
  return nlohmann::json{{"identifier_bits", m.identifier_bits}, {"location_bits", m.location_bits},
                        {"routing_bits", m.routing_bits},       {"total_bits", m.total()},
                        {"message_width", m.message_width}};
}

}  // namespace

std::string report_json(const Report& r) {
  nlohmann::json j;
  nlohmann::json cfg = nlohmann::json::object();
  for (const auto& [k, v] : to_key_values(r.config)) cfg[k] = v;
  j["config"] = cfg;
  j["topology"] = {{"label", topology_label(r.config.topology)},
                   {"P", r.node_count},
                   {"D", r.degree},
                   {"M", r.ports},
                   {"diameter", r.diameter}};
  j["interleave"] = half_json(r.sim.interleave, r.routing_memory_interleave);
  j["deinterleave"] = half_json(r.sim.deinterleave, r.routing_memory_deinterleave);
  j["half_iteration"] = {{"cycles", std::max(r.cycles_interleave, r.cycles_deinterleave)},
                         {"ideal_cycles", rational_json(r.split.ideal_cycles, 3)},
                         {"IL", rational_json(r.split.interconnect_latency, 3)}};
  j["throughput_bps"] = rational_json(r.throughput_bps, 3);
  j["ideal_throughput_bps"] = rational_json(r.ideal_bps, 3);

  nlohmann::json lat;
  lat["global"] = latency_json(r.latency.global);
  nlohmann::json per = nlohmann::json::array();
  for (const auto& s : r.latency.per_node) per.push_back(latency_json(s));
  lat["per_node"] = per;
  j["latency"] = lat;

  j["fifo_max"] = r.fifo_max;
  j["memory_bits_per_node"] = {{"a", memory_json(r.memory_a)}, {"b", memory_json(r.memory_b)},
                               {"c", memory_json(r.memory_c)}};
  j["routing_memory"] = {{"word_bits", r.routing_memory_interleave.word_bits},
                         {"ccw_bits", r.routing_memory_interleave.ccw_bits}};
  j["area"] = {{"architecture", to_string(r.architecture)},
               {"fifo", r.area.fifo},
               {"crossbar", r.area.crossbar},
               {"registers", r.area.registers},
               {"routing", r.area.routing},
               {"memory", r.area.memory},
               {"total", r.area.total()}};
  return j.dump(2) + "\n";
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{
      "topology",  "P",          "D",         "R",           "routing",       "collision",    "interleaver",
      "N",         "cycles_int", "cycles_deint", "IL",       "throughput_bps", "ideal_bps",   "lat_min",
      "lat_avg",   "lat_max",    "max_fifo_depth", "mem_bits_a", "mem_bits_b", "mem_bits_c",  "area_total",
      "area_fifo", "area_cb",    "area_reg",  "area_ram",    "area_mem",      "error"};
  return cols;
}

std::string csv_header() {
  std::string out;
  for (std::size_t i = 0; i < csv_columns().size(); ++i) {
    if (i) out += ',';
    out += csv_columns()[i];
  }
  return out + "\n";
}

namespace {

std::vector<std::string> config_cells(const RunConfig& c, int degree) {
  return {topology_label(c.topology),
          std::to_string(c.topology.node_count),
          degree > 0 ? std::to_string(degree) : "",
          Rational(1, c.tau).to_decimal(4),
          to_string(c.routing),
          to_string(c.collision),
          interleaver_label(c),
          std::to_string(c.frame_steps)};
}

std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  return out + "\n";
}

std::string csv_safe(std::string s) {
  for (char& ch : s) {
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
  }
  return s;
}

}  // namespace

std::string csv_row(const Report& r) {
  std::vector<std::string> cells = config_cells(r.config, r.degree);
  const auto& g = r.latency.global;
  cells.push_back(std::to_string(r.cycles_interleave));
  cells.push_back(std::to_string(r.cycles_deinterleave));
  cells.push_back(r.split.interconnect_latency.to_decimal(3));
  cells.push_back(r.throughput_bps.to_decimal(3));
  cells.push_back(r.ideal_bps.to_decimal(3));
  cells.push_back(g ? std::to_string(g->min) : "");
  cells.push_back(g ? g->avg.to_decimal(4) : "");
  cells.push_back(g ? std::to_string(g->max) : "");
  long long maxd = 0;
  for (const auto& n : r.fifo_max) {
    for (long long v : n) maxd = std::max(maxd, v);
  }
  cells.push_back(std::to_string(maxd));
  cells.push_back(std::to_string(r.memory_a.total()));
  cells.push_back(std::to_string(r.memory_b.total()));
  cells.push_back(std::to_string(r.memory_c.total()));
  cells.push_back(fmt_double(r.area.total(), 4));
  cells.push_back(fmt_double(r.area.fifo, 4));
  cells.push_back(fmt_double(r.area.crossbar, 4));
  cells.push_back(fmt_double(r.area.registers, 4));
  cells.push_back(fmt_double(r.area.routing, 4));
  cells.push_back(fmt_double(r.area.memory, 4));
  cells.push_back("");
  return join(cells);
}

std::string csv_error_row(const RunConfig& cfg, const std::string& error) {
  int degree = 0;
  switch (cfg.topology.kind) {
    case TopologyKind::ring: degree = 2; break;
    case TopologyKind::toroidal_mesh: degree = 4; break;
    case TopologyKind::honeycomb_torus: degree = 3; break;
    case TopologyKind::gen_de_bruijn:
    case TopologyKind::gen_kautz: degree = cfg.topology.degree; break;
    case TopologyKind::custom: break;
  }
  std::vector<std::string> cells = config_cells(cfg, degree);
  while (cells.size() + 1 < csv_columns().size()) cells.emplace_back();
  cells.push_back(csv_safe(error));
  return join(cells);
}

std::vector<std::filesystem::path> emit_artifacts(const Report& r, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::vector<fs::path> written;
  const RunConfig& c = r.config;
  if (!(c.emit_routing_memory || c.emit_location_memory || c.emit_fifo_depths || c.emit_trace)) return written;
  if ((c.emit_routing_memory || c.emit_trace) &&
      (!r.sim.interleave.routing_trace || !r.sim.deinterleave.routing_trace)) {
    throw Error(ErrorCode::precondition, "routing memory / trace artifacts need a recorded routing trace");
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io_error, "cannot create artifact directory " + dir.string());

  auto open = [&](const fs::path& p) {
    fs::create_directories(p.parent_path(), ec);
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(ErrorCode::io_error, "cannot write " + p.string());
    written.push_back(p);
    return out;
  };

  struct Half {
    const char* name;
    const HalfIterationResult* result;
    const RoutingMemoryImage* memory;
  };
  const Half halves[] = {{"interleave", &r.sim.interleave, &r.routing_memory_interleave},
                         {"deinterleave", &r.sim.deinterleave, &r.routing_memory_deinterleave}};
  for (const Half& h : halves) {
    for (int i = 0; i < r.node_count; ++i) {
      const std::string node = "node_" + std::to_string(i) + ".txt";
      if (c.emit_routing_memory) {
        auto out = open(dir / "routing_memory" / h.name / node);
        write_routing_memory(*h.memory, i, out);
      }
      if (c.emit_location_memory) {
        auto out = open(dir / "location_memory" / h.name / node);
        for (int t : h.result->arrivals[i]) out << t << '\n';
      }
    }
    if (c.emit_trace) {
      auto out = open(dir / (std::string("trace_") + h.name + ".csv"));
      write_routing_trace_csv(*h.result, out);
    }
  }
  if (c.emit_fifo_depths) {
    auto out = open(dir / "fifo_depths.csv");
    out << "node,port,max_depth_interleave,max_depth_deinterleave\n";
    for (int i = 0; i < r.node_count; ++i) {
      for (int p = 0; p < r.ports; ++p) {
        out << i << ',' << p << ',' << r.sim.interleave.fifo_max[i][p] << ',' << r.sim.deinterleave.fifo_max[i][p]
            << '\n';
      }
    }
  }
  return written;
}

std::optional<std::pair<int, int>> default_dimensions(TopologyKind kind, int node_count) {
  if (kind != TopologyKind::toroidal_mesh && kind != TopologyKind::honeycomb_torus) return std::nullopt;
  std::optional<std::pair<int, int>> best;
  for (int rows = 2; rows * rows <= node_count; ++rows) {
    if (node_count % rows != 0) continue;
    const int cols = node_count / rows;
    if (cols < 2) continue;
    if (kind == TopologyKind::honeycomb_torus && (rows % 2 != 0 || cols % 2 != 0)) continue;
    best = std::make_pair(rows, cols);
  }
  return best;
}

SweepSpec sweep_spec_from(const KeyValues& kv) {
  SweepSpec s;
  s.base = run_config_from(kv);
  auto ints = [&](const std::string& key, std::vector<int>& out, long long lo, long long hi) {
    auto it = kv.find(key);
    if (it == kv.end()) return;
    out.clear();
    for (const auto& item : split_list(it->second)) out.push_back(static_cast<int>(parse_int(key, item, lo, hi)));
    if (out.empty()) throw config_error(key, "empty list");
  };
  ints("degrees", s.degrees, 2, 63);
  ints("P_list", s.node_counts, 1, 1 << 20);
  ints("tau_list", s.taus, 1, 1 << 16);
  if (auto it = kv.find("topologies"); it != kv.end()) {
    s.kinds.clear();
    for (const auto& item : split_list(it->second)) {
      const TopologyKind k = parse_kind("topologies", item);
      if (k == TopologyKind::custom) throw config_error("topologies", "file topologies cannot be swept");
      s.kinds.push_back(k);
    }
    if (s.kinds.empty()) throw config_error("topologies", "empty list");
  }
  if (auto it = kv.find("routings"); it != kv.end()) {
    s.routings.clear();
    for (const auto& item : split_list(it->second)) s.routings.push_back(parse_routing("routings", item));
    if (s.routings.empty()) throw config_error("routings", "empty list");
  }
  if (auto it = kv.find("collisions"); it != kv.end()) {
    s.collisions.clear();
    for (const auto& item : split_list(it->second)) s.collisions.push_back(parse_collision("collisions", item));
    if (s.collisions.empty()) throw config_error("collisions", "empty list");
  }
  if (auto it = kv.find("threads"); it != kv.end()) {
    s.threads = static_cast<unsigned>(parse_int("threads", it->second, 0, 1024));
  }
  return s;
}

std::vector<SweepPoint> expand(const SweepSpec& spec) {
  std::vector<SweepPoint> points;
  for (TopologyKind kind : spec.kinds) {
    const bool has_degree = kind == TopologyKind::gen_de_bruijn || kind == TopologyKind::gen_kautz;
    const std::vector<int> degrees = has_degree ? spec.degrees : std::vector<int>{0};
    for (int degree : degrees) {
      for (int p : spec.node_counts) {
        for (int tau : spec.taus) {
          for (RoutingAlgorithm routing : spec.routings) {
            for (CollisionPolicy collision : spec.collisions) {
              SweepPoint pt;
              pt.config = spec.base;
              pt.config.report_path.clear();
              pt.config.csv_path.clear();
              pt.config.artifacts_dir.clear();
              TopologySpec& t = pt.config.topology;
              t.kind = kind;
              t.node_count = p;
              if (has_degree) t.degree = degree;
              pt.config.tau = tau;
              pt.config.routing = routing;
              pt.config.collision = collision;
              if (kind == TopologyKind::toroidal_mesh || kind == TopologyKind::honeycomb_torus) {
                if (auto dims = default_dimensions(kind, p)) {
                  t.rows = dims->first;
                  t.cols = dims->second;
                } else {
                  pt.skip_reason = topology_label(t) + " P=" + std::to_string(p) + ": no valid rows x cols";
                }
              }
              if (pt.skip_reason.empty() && pt.config.frame_steps % p != 0) {
                pt.skip_reason = topology_label(t) + " P=" + std::to_string(p) + ": P does not divide N=" +
                                 std::to_string(pt.config.frame_steps);
              }
              points.push_back(std::move(pt));
            }
          }
        }
      }
    }
  }
  return points;
}

SweepOutcome run_sweep(const SweepSpec& spec) {
  const std::vector<SweepPoint> points = expand(spec);
  std::vector<std::string> rows(points.size());
  std::vector<char> failed(points.size(), 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      if (!points[i].skip_reason.empty()) continue;
      try {
        rows[i] = csv_row(run_pipeline(points[i].config));
      } catch (const std::exception& e) {
        rows[i] = csv_error_row(points[i].config, e.what());
        failed[i] = 1;
      }
    }
  };
  unsigned threads = spec.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : spec.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, points.size())));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  SweepOutcome out;
  out.csv = csv_header();
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!points[i].skip_reason.empty()) {
      out.skipped.push_back(points[i].skip_reason);
      continue;
    }
    out.csv += rows[i];
    out.failures += failed[i];
  }
  return out;
}

}  // namespace turbonoc
