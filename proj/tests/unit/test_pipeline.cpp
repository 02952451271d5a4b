// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "turbonoc/error.hpp"
#include "turbonoc/pipeline.hpp"

using namespace turbonoc;
namespace fs = std::filesystem;

namespace {

RunConfig from(std::map<std::string, std::string> kv) { return run_config_from(kv); }

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("turbonoc_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string config_error_message(std::map<std::string, std::string> kv) {
  try {
    check(run_config_from(kv));
    run_pipeline(run_config_from(kv));
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::config_error) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "expected a config error";
  return {};
}

}  // namespace

TEST(RunConfig, Defaults) {
  const RunConfig c = from({});
  const SisoTimingParams t = c.timing();
  EXPECT_EQ(t.window, 39);
  EXPECT_EQ(t.theta, 1);
  EXPECT_EQ(t.latency, 39);
  EXPECT_EQ(t.order, EmissionOrder::backward);
  EXPECT_EQ(c.iterations, 8);
  EXPECT_EQ(c.f_clk_hz, 200'000'000);
  EXPECT_EQ(c.collision, CollisionPolicy::dcm);

  const RunConfig slow = from({{"tau", "3"}});
  EXPECT_EQ(slow.timing().theta, 3);
  EXPECT_EQ(slow.timing().latency, 117);
  EXPECT_EQ(from({{"d", "2"}}).payload_bits, 24);
}

TEST(RunConfig, ErrorsNameTheField) {
  EXPECT_NE(config_error_message({{"P", "7"}}).find("P must divide N"), std::string::npos);
  EXPECT_NE(config_error_message({{"routing", "fastest"}}).find("routing"), std::string::npos);
  EXPECT_NE(config_error_message({{"tau", "x"}}).find("tau"), std::string::npos);
  EXPECT_NE(config_error_message({{"bogus", "1"}}).find("bogus"), std::string::npos);
  EXPECT_NE(config_error_message({{"topology", "mesh"}, {"P", "16"}}).find("rows"), std::string::npos);
  EXPECT_NE(config_error_message({{"cs_step", "10"}}).find("cs_step"), std::string::npos);
}

TEST(RunConfig, EchoRoundTrip) {
  const RunConfig c = from({{"topology", "kautz"}, {"P", "16"}, {"degree", "3"}, {"tau", "2"}, {"routing", "asp_ft"},
                            {"collision", "scm"}, {"interleaver", "random"}, {"seed", "9"}});
  const auto echo = to_key_values(c);
  const RunConfig again = run_config_from(echo);
  EXPECT_EQ(to_key_values(again), echo);
  EXPECT_EQ(csv_row(run_pipeline(c)), csv_row(run_pipeline(again)));
}

TEST(DefaultStep, SmallestCoprimeAtLeastRoot) {
  EXPECT_EQ(default_circular_step(2400), 49);
  EXPECT_EQ(default_circular_step(24576), 157);
  EXPECT_EQ(default_circular_step(16), 5);
  EXPECT_EQ(default_circular_step(1), 1);
}

TEST(Pipeline, RingExample) {
  const Report r = run_pipeline(from({}));
  EXPECT_EQ(r.sim.interleave.deliveries.size(), 2400u);
  EXPECT_EQ(r.sim.deinterleave.deliveries.size(), 2400u);
  EXPECT_EQ(r.throughput_bps, throughput_for_cycles(1, 2400, 200'000'000, 8,
                                                    Rational(std::max(r.cycles_interleave, r.cycles_deinterleave))));
  EXPECT_LE(r.throughput_bps, r.ideal_bps);
}

TEST(Pipeline, PermutationFileErrorsNameTheFile) {
  const fs::path dir = scratch("perm");
  const fs::path file = dir / "short.txt";
  {
    std::ofstream out(file);
    for (int i = 0; i < 2399; ++i) out << i << '\n';
  }
  try {
    run_pipeline(from({{"interleaver", "file"}, {"perm_file", file.string()}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::parse_error);
    EXPECT_NE(std::string(e.what()).find("short.txt"), std::string::npos);
  }
}

TEST(Pipeline, FileTopologyMatchesBuiltin) {
  const fs::path dir = scratch("topo");
  write_topology(build_gen_kautz(8, 2), dir / "k.txt");
  const Report a = run_pipeline(from({{"topology", "file"}, {"topology_file", (dir / "k.txt").string()}}));
  const Report b = run_pipeline(from({{"topology", "kautz"}, {"P", "8"}, {"degree", "2"}}));
  EXPECT_EQ(a.cycles_interleave, b.cycles_interleave);
  EXPECT_EQ(a.cycles_deinterleave, b.cycles_deinterleave);
}

TEST(Report, JsonHasSections) {
  const Report r = run_pipeline(from({{"topology", "kautz"}, {"P", "16"}, {"degree", "4"}, {"routing", "asp_ft"}}));
  const auto j = nlohmann::json::parse(report_json(r));
  EXPECT_EQ(j["topology"]["M"], 5);
  EXPECT_EQ(j["interleave"]["delivered"], 2400);
  EXPECT_EQ(j["routing_memory"]["word_bits"], 12);
  EXPECT_EQ(j["area"]["architecture"], "b");
  EXPECT_EQ(j["config"]["routing"], "asp_ft");
  EXPECT_TRUE(j["latency"]["per_node"].is_array());
}

TEST(Report, CsvColumnsStable) {
  const std::vector<std::string> expected{
      "topology",  "P",          "D",            "R",         "routing",    "collision",  "interleaver",
      "N",         "cycles_int", "cycles_deint", "IL",        "throughput_bps", "ideal_bps", "lat_min",
      "lat_avg",   "lat_max",    "max_fifo_depth", "mem_bits_a", "mem_bits_b", "mem_bits_c", "area_total",
      "area_fifo", "area_cb",    "area_reg",     "area_ram",  "area_mem",   "error"};
  EXPECT_EQ(csv_columns(), expected);
  const std::string row = csv_row(run_pipeline(from({})));
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), static_cast<long>(expected.size() - 1));
  EXPECT_EQ(row.substr(0, 16), "ring,8,2,1.0000,");
}

TEST(Artifacts, DisabledWritesNothing) {
  const fs::path dir = scratch("none");
  EXPECT_TRUE(emit_artifacts(run_pipeline(from({})), dir / "out").empty());
  EXPECT_FALSE(fs::exists(dir / "out"));
}

TEST(Artifacts, LocationMemoryForIdentity) {
  const fs::path dir = scratch("loc");
  const Report r = run_pipeline(from({{"interleaver", "identity"}, {"emit_location_memory", "true"},
                                      {"emit_fifo_depths", "1"}, {"emit_routing_memory", "1"}, {"emit_trace", "1"}}));
  const auto written = emit_artifacts(r, dir);
  EXPECT_EQ(written.size(), 2u * 8 * 2 + 2 + 1);
  std::ifstream in(dir / "location_memory" / "interleave" / "node_3.txt");
  std::vector<int> order;
  for (int v = 0; in >> v;) order.push_back(v);
  // arrival order follows the backward emission inside each 39-step window
  ASSERT_EQ(order.size(), 300u);
  EXPECT_EQ(order[0], 38);
  EXPECT_EQ(order[38], 0);
  EXPECT_EQ(order[39], 77);
  std::sort(order.begin(), order.end());
  for (int i = 0; i < 300; ++i) EXPECT_EQ(order[i], i);
  std::ifstream words(dir / "routing_memory" / "interleave" / "node_0.txt");
  std::string line;
  ASSERT_TRUE(std::getline(words, line));
  EXPECT_EQ(line.size(), static_cast<std::size_t>(3 + 3));
  EXPECT_TRUE(fs::exists(dir / "fifo_depths.csv"));
  EXPECT_TRUE(fs::exists(dir / "trace_deinterleave.csv"));
}

TEST(Artifacts, LocationMemoryInOrderForForwardEmission) {
  const fs::path dir = scratch("loc_fwd");
  const Report r =
      run_pipeline(from({{"interleaver", "identity"}, {"order", "forward"}, {"emit_location_memory", "1"}}));
  emit_artifacts(r, dir);
  std::ifstream in(dir / "location_memory" / "deinterleave" / "node_5.txt");
  int expected = 0;
  for (int v = 0; in >> v;) EXPECT_EQ(v, expected++);
  EXPECT_EQ(expected, 300);
}

TEST(Sweep, ExpandOrderAndSkips) {
  SweepSpec s;
  s.kinds = {TopologyKind::ring, TopologyKind::honeycomb_torus};
  s.node_counts = {8, 12};
  s.taus = {1};
  s.routings = {RoutingAlgorithm::ssp_rr};
  const auto pts = expand(s);
  ASSERT_EQ(pts.size(), 4u);
  EXPECT_EQ(pts[0].config.topology.kind, TopologyKind::ring);
  EXPECT_EQ(pts[1].config.topology.node_count, 12);
  EXPECT_EQ(pts[2].config.topology.rows, 2);
  EXPECT_EQ(pts[2].config.topology.cols, 4);
  EXPECT_TRUE(pts[3].skip_reason.empty()) << pts[3].skip_reason;  // 2x6
  s.node_counts = {18};
  EXPECT_FALSE(expand(s)[1].skip_reason.empty());
}

TEST(Sweep, RowsAndDeterminism) {
  SweepSpec s;
  s.kinds = {TopologyKind::ring, TopologyKind::gen_kautz};
  s.node_counts = {8, 16};
  s.taus = {1};
  s.routings = {RoutingAlgorithm::ssp_fl};
  const SweepOutcome serial = run_sweep(s);
  EXPECT_EQ(std::count(serial.csv.begin(), serial.csv.end(), '\n'), 5);
  s.threads = 3;
  EXPECT_EQ(run_sweep(s).csv, serial.csv);
}

TEST(Sweep, FailuresGoToErrorColumn) {
  SweepSpec s;
  s.base.guard_cycles = 5;
  s.kinds = {TopologyKind::ring};
  s.node_counts = {8};
  s.taus = {1};
  s.routings = {RoutingAlgorithm::ssp_rr};
  const SweepOutcome o = run_sweep(s);
  EXPECT_EQ(o.failures, 1);
  EXPECT_NE(o.csv.find("livelock"), std::string::npos);
}

TEST(Sweep, SpecFromKeys) {
  const SweepSpec s = sweep_spec_from({{"topologies", "ring, mesh"}, {"P_list", "8,16"}, {"tau_list", "1 3"},
                                       {"routings", "asp_ft"}, {"collisions", "dcm,scm"}, {"threads", "2"}});
  EXPECT_EQ(s.kinds.size(), 2u);
  EXPECT_EQ(s.taus, (std::vector<int>{1, 3}));
  EXPECT_EQ(s.collisions.size(), 2u);
  EXPECT_EQ(s.threads, 2u);
  EXPECT_THROW(sweep_spec_from({{"P_list", ""}}), Error);
}
