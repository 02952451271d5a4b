// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <map>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "turbonoc/error.hpp"
#include "turbonoc/netsim.hpp"

using namespace turbonoc;

namespace {

SisoTimingParams streaming() {
  SisoTimingParams p;
  p.window = 39;
  p.tau = p.theta = 1;
  p.latency = 0;
  p.order = EmissionOrder::forward;
  return p;
}

struct Case {
  Topology topo;
  RoutingTables tables;
  explicit Case(Topology t) : topo(std::move(t)), tables(build_routing_tables(topo)) {}
};

HalfIterationResult run(const Case& c, const Permutation& perm, const SimConfig& cfg,
                        SisoTimingParams timing = SisoTimingParams{39, 39, 1, 1, EmissionOrder::backward}) {
  const int p = c.topo.node_count();
  const InjectionSchedule s = injection_schedule(timing, perm.size() / p, p);
  return run_half_iteration(c.topo, c.tables, s, target_map(perm, p, Direction::interleave), cfg);
}

SimConfig config(RoutingAlgorithm r, CollisionPolicy col) {
  SimConfig cfg;
  cfg.routing = r;
  cfg.collision = col;
  cfg.record_paths = true;
  cfg.check_conservation = true;
  return cfg;
}

void expect_complete(const HalfIterationResult& res, const TargetMap& m) {
  std::set<std::pair<int, int>> expected, got;
  for (int i = 0; i < m.node_count(); ++i) {
    for (int j = 0; j < m.steps_per_siso(); ++j) expected.insert({m.at(i, j).node, m.at(i, j).location});
  }
  for (const Delivery& d : res.deliveries) EXPECT_TRUE(got.insert({d.dest_node, d.dest_location}).second);
  EXPECT_EQ(got, expected);
}

}  // namespace

TEST(ServeOrder, RoundRobin) {
  EXPECT_EQ(serve_order_rr(1, 3), (std::vector<int>{1, 2, 0}));
  EXPECT_EQ(serve_order_rr(0, 3), (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(serve_order_rr(4, 4), serve_order_rr(0, 4));
}

TEST(ServeOrder, FullestFirst) {
  const std::vector<long long> a{2, 5, 0}, b{1, 1, 1}, c{3, 3, 7, 3};
  EXPECT_EQ(serve_order_fl(a), (std::vector<int>{1, 0, 2}));
  EXPECT_EQ(serve_order_fl(b), (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(serve_order_fl(c), (std::vector<int>{2, 0, 1, 3}));
}

TEST(RouteSsp, Examples) {
  const RoutingTables ring = build_routing_tables(build_ring(8));
  EXPECT_EQ(route_ssp(0, 2, ring.ssp), 0);
  EXPECT_EQ(route_ssp(3, 3, ring.ssp), 2);
  EXPECT_EQ(route_ssp(0, 11, build_routing_tables(build_gen_kautz(12, 2)).ssp), 0);
}

TEST(SelectAsp, MinOccupancyThenUsageThenPort) {
  std::vector<AspCandidate> c{{1, 0, 0, 3, 0, true}, {7, 1, 1, 1, 0, true}};
  EXPECT_EQ(select_asp_candidate(c, AspSelection::intent), 1);
  c = {{1, 0, 0, 2, 5, true}, {7, 1, 1, 2, 2, true}};
  EXPECT_EQ(select_asp_candidate(c, AspSelection::intent), 1);
  c = {{1, 0, 0, 2, 2, true}, {7, 1, 1, 2, 2, true}};
  EXPECT_EQ(select_asp_candidate(c, AspSelection::intent), 0);
}

TEST(SelectAsp, UnavailablePortsDropOut) {
  std::vector<AspCandidate> c{{1, 0, 0, 0, 0, false}, {7, 1, 1, 4, 9, true}};
  EXPECT_EQ(select_asp_candidate(c, AspSelection::intent), 1);
  c[1].available = false;
  EXPECT_EQ(select_asp_candidate(c, AspSelection::intent), 0);
}

TEST(SelectAsp, LiteralScanKeepsFirstOnUsageTie) {
  // L improves but Q does not: the nested scan keeps the earlier candidate.
  std::vector<AspCandidate> c{{1, 0, 0, 3, 1, true}, {7, 1, 1, 1, 1, true}};
  EXPECT_EQ(select_asp_candidate(c, AspSelection::literal), 0);
  EXPECT_EQ(select_asp_candidate(c, AspSelection::intent), 1);
}

TEST(RouteAspFt, IncrementsChosenUsage) {
  const Topology t = build_ring(8);
  const RoutingTables rt = build_routing_tables(t);
  NodeState s(t.ports());
  auto occ = [](int, int) { return 0LL; };
  const AspChoice first = route_asp_ft(t, 0, 4, rt.asp, occ, s);
  EXPECT_EQ(first.out_port, 0);
  EXPECT_EQ(s.q_counters[0], 1);
  const AspChoice second = route_asp_ft(t, 0, 4, rt.asp, occ, s);
  EXPECT_EQ(second.out_port, 1);
  EXPECT_EQ(second.neighbor, 7);
  EXPECT_EQ(s.q_counters[1], 1);
}

TEST(ResolveScm, Examples) {
  const bool m0[] = {true, false, false, false};
  EXPECT_EQ(resolve_scm(m0, 3, false), 1);
  const bool m012[] = {true, true, true, false};
  EXPECT_EQ(resolve_scm(m012, 3, false), std::nullopt);
  EXPECT_EQ(resolve_scm(m012, 3, true), 3);
  const bool all[] = {true, true, true, true};
  EXPECT_EQ(resolve_scm(all, 3, true), std::nullopt);
}

TEST(HandTrace, RingTwoHops) {
  const Case c(build_ring(8));
  std::vector<Target> targets;
  for (int i = 0; i < 8; ++i) targets.push_back({(i + 2) % 8, 0});
  const InjectionSchedule s(8, {{0, 0}});
  const HalfIterationResult r = run_half_iteration(c.topo, c.tables, s, TargetMap(8, 1, targets), SimConfig{});
  ASSERT_EQ(r.deliveries.size(), 8u);
  for (const Delivery& d : r.deliveries) {
    EXPECT_EQ(d.delivered_cycle, 3);
    EXPECT_EQ(d.hops, 2);
  }
  EXPECT_EQ(r.cycles_to_complete, 4);
}

TEST(HandTrace, IdentityTrafficIsLocal) {
  for (Topology t : {build_ring(8), build_gen_kautz(16, 3), build_toroidal_mesh(4, 4)}) {
    const Case c(std::move(t));
    for (RoutingAlgorithm alg : {RoutingAlgorithm::ssp_rr, RoutingAlgorithm::ssp_fl, RoutingAlgorithm::asp_ft}) {
      const HalfIterationResult r =
          run(c, identity_permutation(2400), config(alg, CollisionPolicy::dcm), streaming());
      const long long steps = 2400 / c.topo.node_count();
      EXPECT_EQ(r.cycles_to_complete, steps + 1);
      for (const Delivery& d : r.deliveries) EXPECT_EQ(d.latency(), 1);
      for (int n = 0; n < c.topo.node_count(); ++n) {
        ASSERT_EQ(static_cast<long long>(r.arrivals[n].size()), steps);
        for (int j = 0; j < steps; ++j) EXPECT_EQ(r.arrivals[n][j], j);
      }
    }
  }
}

TEST(HandTrace, EmptySchedule) {
  const Case c(build_ring(4));
  const HalfIterationResult r =
      run_half_iteration(c.topo, c.tables, InjectionSchedule(4, {}), TargetMap(4, 0, {}), SimConfig{});
  EXPECT_EQ(r.cycles_to_complete, 0);
  EXPECT_TRUE(r.deliveries.empty());
}

TEST(Properties, CompletenessAndShortestPaths) {
  const Permutation perm = gen_circular_shifting(2400, 49, 0);
  for (Topology t : {build_ring(8), build_gen_de_bruijn(16, 3), build_gen_kautz(16, 2), build_honeycomb_torus(2, 4),
                     build_toroidal_mesh(2, 4)}) {
    const Case c(std::move(t));
    const auto dist = oracle::all_bfs(c.topo);
    const TargetMap m = target_map(perm, c.topo.node_count(), Direction::interleave);
    for (RoutingAlgorithm alg : {RoutingAlgorithm::ssp_rr, RoutingAlgorithm::ssp_fl, RoutingAlgorithm::asp_ft}) {
      const HalfIterationResult r = run(c, perm, config(alg, CollisionPolicy::dcm));
      expect_complete(r, m);
      for (const Delivery& d : r.deliveries) {
        ASSERT_EQ(d.hops, dist[d.source_node][d.dest_node]);
        ASSERT_EQ(static_cast<int>(d.path.size()), d.hops + 1);
        for (std::size_t h = 0; h + 1 < d.path.size(); ++h) {
          // each hop strictly approaches the destination
          ASSERT_EQ(dist[d.path[h]][d.dest_node], dist[d.path[h + 1]][d.dest_node] + 1);
        }
        if (alg != RoutingAlgorithm::asp_ft) {
          int at = d.source_node;
          for (std::size_t h = 1; h < d.path.size(); ++h) {
            at = c.topo.successor(at, c.tables.ssp.port(at, d.dest_node));
            ASSERT_EQ(d.path[h], at);
          }
        }
      }
    }
  }
}

TEST(Properties, DeflectionStillDelivers) {
  const Permutation perm = gen_random_permutation(2400, 3);
  for (Topology t : {build_ring(8), build_gen_kautz(16, 4), build_toroidal_mesh(4, 4)}) {
    const Case c(std::move(t));
    const auto dist = oracle::all_bfs(c.topo);
    const TargetMap m = target_map(perm, c.topo.node_count(), Direction::interleave);
    for (RoutingAlgorithm alg : {RoutingAlgorithm::ssp_rr, RoutingAlgorithm::ssp_fl, RoutingAlgorithm::asp_ft}) {
      const HalfIterationResult r = run(c, perm, config(alg, CollisionPolicy::scm));
      expect_complete(r, m);
      for (const Delivery& d : r.deliveries) {
        ASSERT_GE(d.hops, dist[d.source_node][d.dest_node]);
        ASSERT_GE(d.latency(), d.hops + 1);
      }
    }
  }
}

TEST(Properties, SspPreservesPairOrder) {
  const Case c(build_gen_kautz(8, 2));
  const HalfIterationResult r =
      run(c, gen_random_permutation(2400, 11), config(RoutingAlgorithm::ssp_rr, CollisionPolicy::dcm));
  std::map<std::pair<int, int>, long long> last_injected;
  for (const Delivery& d : r.deliveries) {
    auto [it, fresh] = last_injected.try_emplace({d.source_node, d.dest_node}, d.injected_cycle);
    if (!fresh) {
      EXPECT_GT(d.injected_cycle, it->second);
      it->second = d.injected_cycle;
    }
  }
}

TEST(Properties, LatencyAtLeastDistancePlusOne) {
  const Case c(build_gen_de_bruijn(16, 2));
  const auto dist = oracle::all_bfs(c.topo);
  const HalfIterationResult r =
      run(c, gen_circular_shifting(2400, 7, 1), config(RoutingAlgorithm::ssp_fl, CollisionPolicy::dcm));
  for (const Delivery& d : r.deliveries) EXPECT_GE(d.latency(), dist[d.source_node][d.dest_node] + 1);
}

TEST(Properties, AspDecisionsAreLogged) {
  const Case c(build_gen_kautz(16, 2));
  SimConfig cfg = config(RoutingAlgorithm::asp_ft, CollisionPolicy::dcm);
  cfg.record_asp_decisions = true;
  const HalfIterationResult r = run(c, gen_circular_shifting(2400, 49, 0), cfg);
  ASSERT_FALSE(r.asp_decisions.empty());
  for (const AspDecision& d : r.asp_decisions) {
    ASSERT_LT(d.chosen, static_cast<int>(d.candidates.size()));
    EXPECT_EQ(d.candidates.size(), c.tables.asp.at(d.node, d.dest).size());
  }
}

TEST(Guards, CycleGuardRaisesLivelock) {
  const Case c(build_ring(8));
  SimConfig cfg;
  cfg.guard_cycle_limit = 10;
  try {
    run(c, gen_circular_shifting(2400, 49, 0), cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::livelock);
  }
}

TEST(Guards, IrregularInDegreeRejected) {
  // node 0 is entered three times, node 1 never
  const Topology t(TopologyKind::custom, 2, {{2, 0}, {0, 2}, {0, 1}}, false);
  const RoutingTables rt = build_routing_tables(t);
  const InjectionSchedule s(3, {{0, 0}});
  try {
    run_half_iteration(t, rt, s, TargetMap(3, 1, {{1, 0}, {2, 0}, {0, 0}}), SimConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_topology);
  }
}

TEST(Iteration, BothHalvesCover) {
  const Case c(build_gen_kautz(8, 2));
  const Permutation perm = gen_circular_shifting(2400, 49, 0);
  const InjectionSchedule s = injection_schedule(SisoTimingParams{39, 39, 1, 1, EmissionOrder::backward}, 300, 8);
  const IterationResult r = run_iteration(c.topo, c.tables, s, perm, config(RoutingAlgorithm::ssp_rr,
                                                                            CollisionPolicy::dcm));
  expect_complete(r.interleave, target_map(perm, 8, Direction::interleave));
  expect_complete(r.deinterleave, target_map(perm, 8, Direction::deinterleave));

  const IterationResult id = run_iteration(c.topo, c.tables, s, identity_permutation(2400), SimConfig{});
  EXPECT_EQ(id.interleave.cycles_to_complete, id.deinterleave.cycles_to_complete);
}

TEST(RoutingMemory, WordWidths) {
  EXPECT_EQ(crossbar_word_bits(5), 7);
  EXPECT_EQ(crossbar_word_bits(3), 3);
  EXPECT_EQ(crossbar_word_bits(4), 5);
}

TEST(RoutingMemory, LehmerRank) {
  const std::vector<int> id{0, 1, 2}, rev{2, 1, 0}, mid{1, 0, 2};
  EXPECT_EQ(permutation_rank(id), 0u);
  EXPECT_EQ(permutation_rank(rev), 5u);
  EXPECT_EQ(permutation_rank(mid), 2u);
}

TEST(RoutingMemory, CompleteAssignment) {
  const std::vector<int> partial{-1, 0, -1, -1};
  EXPECT_EQ(complete_assignment(partial), (std::vector<int>{1, 0, 2, 3}));
  const std::vector<int> clash{-1, -1, 0};
  EXPECT_EQ(complete_assignment(clash), (std::vector<int>{2, 1, 0}));
}

TEST(RoutingMemory, ImageMatchesTrace) {
  const Case c(build_gen_kautz(16, 4));
  SimConfig cfg;
  cfg.routing = RoutingAlgorithm::asp_ft;
  cfg.record_routing_trace = true;
  const HalfIterationResult r = run(c, gen_circular_shifting(2400, 49, 0), cfg);
  const RoutingMemoryImage img = dump_routing_memory(r);
  EXPECT_EQ(img.ports, 5);
  EXPECT_EQ(img.word_bits, 12);
  std::vector<std::size_t> active(16, 0);
  for (const ServiceRecord& s : *r.routing_trace) ++active[s.node];
  for (int n = 0; n < 16; ++n) {
    EXPECT_EQ(img.words[n].size(), active[n]);
    for (std::uint64_t w : img.words[n]) EXPECT_LT(w, 1ull << 12);
  }
  std::ostringstream os;
  write_routing_memory(img, 0, os);
  const std::string first = os.str().substr(0, os.str().find('\n'));
  EXPECT_EQ(first.size(), 12u);
  EXPECT_EQ(first.find_first_not_of("01"), std::string::npos);
}

TEST(RoutingMemory, ReadEnableBitsFollowGrants) {
  const Case c(build_ring(8));
  SimConfig cfg;
  cfg.record_routing_trace = true;
  const HalfIterationResult r = run(c, gen_circular_shifting(2400, 49, 0), cfg);
  const RoutingMemoryImage img = dump_routing_memory(r);
  std::vector<std::size_t> next(8, 0);
  for (const ServiceRecord& s : *r.routing_trace) {
    const std::uint64_t word = img.words[s.node][next[s.node]++];
    const std::uint64_t ren = word >> img.ccw_bits;
    std::uint64_t expected = 0;
    for (const ServiceGrant& g : s.grants) expected |= 1ull << (img.ports - 1 - g.in_port);
    ASSERT_EQ(ren, expected);
  }
}

TEST(RoutingMemory, NeedsTrace) {
  const Case c(build_ring(8));
  const HalfIterationResult r = run(c, identity_permutation(2400), SimConfig{});
  try {
    dump_routing_memory(r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::precondition);
  }
}
