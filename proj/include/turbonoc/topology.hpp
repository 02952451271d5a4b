// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace turbonoc {

enum class TopologyKind { ring, toroidal_mesh, honeycomb_torus, gen_de_bruijn, gen_kautz, custom };

const char* to_string(TopologyKind kind) noexcept;

/// One directed network link. `src_port` is the output port of `src`,
/// `dst_port` the input port (and input FIFO) of `dst` it feeds.
struct Arc {
  int src = 0;
  int src_port = 0;
  int dst = 0;
  int dst_port = 0;

  bool self_loop() const { return src == dst; }
  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Fixed out-degree directed graph with per-node ordered output ports.
///
/// Every node owns D network output ports 0..D-1 plus the local port M-1 = D
/// used for SISO injection and memory delivery. Input ports at each node are
/// numbered by sorting the incoming arcs on (source node, source port).
class Topology {
 public:
  /// `successors[u][p]` is the node reached from `u` through output port `p`.
  /// Throws invalid_topology if some row does not have exactly `degree` entries
  /// or names an out-of-range node.
  Topology(TopologyKind kind, int degree, std::vector<std::vector<int>> successors,
           bool undirected_origin);

  TopologyKind kind() const { return kind_; }
  int node_count() const { return static_cast<int>(successors_.size()); }
  int degree() const { return degree_; }
  int ports() const { return degree_ + 1; }
  int local_port() const { return degree_; }
  bool undirected_origin() const { return undirected_; }

  int successor(int node, int port) const { return successors_[node][port]; }
  const std::vector<int>& successors(int node) const { return successors_[node]; }
  const Arc& out_arc(int node, int port) const { return arcs_[node * degree_ + port]; }
  /// All arcs, ordered by (src, src_port); size D*P.
  std::span<const Arc> arcs() const { return arcs_; }
  /// Arc entering `node` on input port `in_port`.
  const Arc& in_arc(int node, int in_port) const { return arcs_[in_arcs_[node][in_port]]; }
  int in_degree(int node) const { return static_cast<int>(in_arcs_[node].size()); }
  /// True when every node also has in-degree D, which the simulator requires.
  bool in_regular() const;

  /// Same arc set (ignores kind tags).
  bool same_arcs(const Topology& other) const { return successors_ == other.successors_; }

 private:
  TopologyKind kind_;
  int degree_;
  bool undirected_;
  std::vector<std::vector<int>> successors_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> in_arcs_;  // arc indices by input port
};

Topology build_ring(int node_count);
/// Ports E, W, S, N. Dimensions of 2 are accepted and give doubled arcs.
Topology build_toroidal_mesh(int rows, int cols);
/// Brick-wall torus; both dimensions even.
Topology build_honeycomb_torus(int rows, int cols);
Topology build_gen_de_bruijn(int node_count, int degree);
Topology build_gen_kautz(int node_count, int degree);

/// Adjacency text format: `P D` then P lines of D successor indices.
Topology parse_topology(std::istream& in);
Topology load_topology(const std::filesystem::path& path);
void write_topology(const Topology& t, std::ostream& out);
void write_topology(const Topology& t, const std::filesystem::path& path);

struct ValidationReport {
  std::vector<int> self_loop_nodes;
  std::map<int, int> in_degree_histogram;  // in-degree -> node count
  bool strongly_connected = false;
  std::optional<int> diameter;             // empty when not strongly connected
};

ValidationReport validate(const Topology& t);

}  // namespace turbonoc
