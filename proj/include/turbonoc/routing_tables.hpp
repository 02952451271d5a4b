// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <vector>

#include "turbonoc/topology.hpp"

namespace turbonoc {

/// All-pairs hop counts. Self-loop arcs never shorten a path.
class DistanceMatrix {
 public:
  static constexpr int unreachable = -1;

  explicit DistanceMatrix(int node_count)
      : n_(node_count), d_(static_cast<std::size_t>(node_count) * node_count, unreachable) {}

  int size() const { return n_; }
  int at(int from, int to) const { return d_[static_cast<std::size_t>(from) * n_ + to]; }
  void set(int from, int to, int v) { d_[static_cast<std::size_t>(from) * n_ + to] = v; }
  bool finite() const;

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  int n_;
  std::vector<int> d_;
};

/// A next hop on some shortest path: neighbour node and the output port used to reach it.
struct NextHop {
  int neighbor = 0;
  int port = 0;
  friend bool operator==(const NextHop&, const NextHop&) = default;
};

/// For every ordered pair (i, k), i != k, the adjacent nodes of i lying on a
/// shortest i->k path, one entry per output port (so multi-arcs appear twice).
/// Entries are sorted by output port.
class AspSets {
 public:
  AspSets() = default;
  explicit AspSets(int node_count)
      : n_(node_count), sets_(static_cast<std::size_t>(node_count) * node_count) {}

  int size() const { return n_; }
  const std::vector<NextHop>& at(int from, int to) const {
    return sets_[static_cast<std::size_t>(from) * n_ + to];
  }
  std::vector<NextHop>& at(int from, int to) { return sets_[static_cast<std::size_t>(from) * n_ + to]; }

 private:
  int n_ = 0;
  std::vector<std::vector<NextHop>> sets_;
};

/// Per-node destination -> output port lookup; the self entry is the local port.
class SspTable {
 public:
  SspTable() = default;
  explicit SspTable(int node_count)
      : n_(node_count), ports_(static_cast<std::size_t>(node_count) * node_count, 0) {}

  int size() const { return n_; }
  int port(int node, int dest) const { return ports_[static_cast<std::size_t>(node) * n_ + dest]; }
  void set(int node, int dest, int port) { ports_[static_cast<std::size_t>(node) * n_ + dest] = port; }

 private:
  int n_ = 0;
  std::vector<int> ports_;
};

/// Floyd-Warshall over the topology with self-loops removed.
DistanceMatrix all_pairs_distances(const Topology& t);
AspSets asp_sets(const Topology& t, const DistanceMatrix& d);
/// Lowest-port member of each N^{i,k}.
SspTable ssp_table(const Topology& t, const AspSets& a);
/// Largest finite entry; throws precondition if any pair is unreachable.
int diameter(const DistanceMatrix& d);

/// Everything the simulator needs, computed once per topology.
struct RoutingTables {
  DistanceMatrix distances;
  AspSets asp;
  SspTable ssp;
};

/// Throws invalid_topology when the topology is not strongly connected.
RoutingTables build_routing_tables(const Topology& t);

/// CSV `node,dest,port`.
void write_ssp_csv(const SspTable& table, std::ostream& out);
/// CSV `node,dest,neighbor,port`.
void write_asp_csv(const AspSets& sets, std::ostream& out);

}  // namespace turbonoc
