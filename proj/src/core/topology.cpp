// SPDX-License-Identifier: Apache-2.0
#include "turbonoc/topology.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "turbonoc/error.hpp"
#include "turbonoc/routing_tables.hpp"

namespace turbonoc {

const char* to_string(TopologyKind kind) noexcept {
  switch (kind) {
    case TopologyKind::ring: return "ring";
    case TopologyKind::toroidal_mesh: return "mesh";
    case TopologyKind::honeycomb_torus: return "honeycomb";
    case TopologyKind::gen_de_bruijn: return "debruijn";
    case TopologyKind::gen_kautz: return "kautz";
    case TopologyKind::custom: return "custom";
  }
  return "unknown";
}

Topology::Topology(TopologyKind kind, int degree, std::vector<std::vector<int>> successors,
                   bool undirected_origin)
    : kind_(kind), degree_(degree), undirected_(undirected_origin), successors_(std::move(successors)) {
  const int n = node_count();
  if (n < 1) throw Error(ErrorCode::invalid_topology, "topology has no nodes");
  if (degree_ < 1) throw Error(ErrorCode::invalid_topology, "topology degree must be positive");

  std::vector<int> bad_rows;
  for (int u = 0; u < n; ++u) {
    if (static_cast<int>(successors_[u].size()) != degree_) bad_rows.push_back(u);
  }
  if (!bad_rows.empty()) {
    std::ostringstream msg;
    msg << "out-degree is not " << degree_ << " at nodes:";
    for (int u : bad_rows) msg << ' ' << u;
    throw Error(ErrorCode::invalid_topology, msg.str());
  }

  arcs_.reserve(static_cast<std::size_t>(n) * degree_);
  for (int u = 0; u < n; ++u) {
    for (int p = 0; p < degree_; ++p) {
      int v = successors_[u][p];
      if (v < 0 || v >= n) {
        throw Error(ErrorCode::invalid_topology,
                    "node " + std::to_string(u) + " port " + std::to_string(p) + " targets out-of-range node " +
                        std::to_string(v));
      }
      arcs_.push_back(Arc{u, p, v, 0});
    }
  }
  // arcs_ is already in (src, src_port) order, so a stable pass assigns input ports.
  in_arcs_.assign(static_cast<std::size_t>(n), {});
  for (std::size_t id = 0; id < arcs_.size(); ++id) {
    auto& inputs = in_arcs_[arcs_[id].dst];
    arcs_[id].dst_port = static_cast<int>(inputs.size());
    inputs.push_back(static_cast<int>(id));
  }
}

bool Topology::in_regular() const {
  return std::all_of(in_arcs_.begin(), in_arcs_.end(),
                     [this](const auto& v) { return static_cast<int>(v.size()) == degree_; });
}

Topology build_ring(int node_count) {
  if (node_count < 3) throw Error(ErrorCode::invalid_parameter, "ring needs P >= 3, got " + std::to_string(node_count));
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(node_count));
  for (int u = 0; u < node_count; ++u) {
    succ[u] = {(u + 1) % node_count, (u + node_count - 1) % node_count};
  }
  return Topology(TopologyKind::ring, 2, std::move(succ), true);
}

Topology build_toroidal_mesh(int rows, int cols) {
  if (rows < 2 || cols < 2) {
    throw Error(ErrorCode::invalid_parameter,
                "toroidal mesh needs rows >= 2 and cols >= 2, got " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  auto id = [cols](int r, int c) { return r * cols + c; };
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      succ[id(r, c)] = {
          id(r, (c + 1) % cols),         // E
          id(r, (c + cols - 1) % cols),  // W
          id((r + 1) % rows, c),         // S
          id((r + rows - 1) % rows, c),  // N
      };
    }
  }
  return Topology(TopologyKind::toroidal_mesh, 4, std::move(succ), true);
}

Topology build_honeycomb_torus(int rows, int cols) {
  if (rows < 2 || cols < 2 || rows % 2 != 0 || cols % 2 != 0) {
    throw Error(ErrorCode::invalid_parameter,
                "honeycomb torus needs even rows and cols, got " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  auto id = [cols](int r, int c) { return r * cols + c; };
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      int vertical = (r + c) % 2 == 0 ? (r + rows - 1) % rows : (r + 1) % rows;
      succ[id(r, c)] = {id(r, (c + 1) % cols), id(r, (c + cols - 1) % cols), id(vertical, c)};
    }
  }
  return Topology(TopologyKind::honeycomb_torus, 3, std::move(succ), true);
}

Topology build_gen_de_bruijn(int node_count, int degree) {
  if (degree < 2 || node_count < degree) {
    throw Error(ErrorCode::invalid_parameter, "generalized de Bruijn needs P >= D >= 2, got P=" +
                                                  std::to_string(node_count) + " D=" + std::to_string(degree));
  }
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(node_count));
  for (int u = 0; u < node_count; ++u) {
    for (int r = 0; r < degree; ++r) {
      succ[u].push_back(static_cast<int>((static_cast<long long>(degree) * u + r) % node_count));
    }
  }
  return Topology(TopologyKind::gen_de_bruijn, degree, std::move(succ), false);
}

Topology build_gen_kautz(int node_count, int degree) {
  if (degree < 2 || node_count < degree + 1) {
    throw Error(ErrorCode::invalid_parameter, "generalized Kautz needs D >= 2 and P >= D+1, got P=" +
                                                  std::to_string(node_count) + " D=" + std::to_string(degree));
  }
  const long long n = node_count;
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(node_count));
  for (int u = 0; u < node_count; ++u) {
    for (int r = 1; r <= degree; ++r) {
      long long v = (-(static_cast<long long>(degree) * u) - r) % n;
      if (v < 0) v += n;
      succ[u].push_back(static_cast<int>(v));
    }
  }
  return Topology(TopologyKind::gen_kautz, degree, std::move(succ), false);
}

Topology parse_topology(std::istream& in) {
  long long p = 0, d = 0;
  if (!(in >> p >> d)) throw Error(ErrorCode::parse_error, "adjacency file: missing 'P D' header");
  if (p < 1 || d < 1) throw Error(ErrorCode::parse_error, "adjacency file: P and D must be positive");
  std::string line;
  std::getline(in, line);  // rest of header line
  std::vector<std::vector<int>> succ;
  succ.reserve(static_cast<std::size_t>(p));
  for (long long u = 0; u < p; ++u) {
    if (!std::getline(in, line)) {
      throw Error(ErrorCode::parse_error, "adjacency file: expected " + std::to_string(p) + " node rows, got " +
                                              std::to_string(u));
    }
    std::istringstream row(line);
    std::vector<int> targets;
    std::string tok;
    while (row >> tok) {
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) {
        throw Error(ErrorCode::parse_error, "adjacency file: row " + std::to_string(u) + ": bad token '" + tok + "'");
      }
      targets.push_back(v);
    }
    succ.push_back(std::move(targets));
  }
  return Topology(TopologyKind::custom, static_cast<int>(d), std::move(succ), false);
}

Topology load_topology(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open topology file " + path.string());
  try {
    return parse_topology(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_topology(const Topology& t, std::ostream& out) {
  out << t.node_count() << ' ' << t.degree() << '\n';
  for (int u = 0; u < t.node_count(); ++u) {
    for (int p = 0; p < t.degree(); ++p) {
      if (p) out << ' ';
      out << t.successor(u, p);
    }
    out << '\n';
  }
}

void write_topology(const Topology& t, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot write topology file " + path.string());
  write_topology(t, out);
}

ValidationReport validate(const Topology& t) {
  ValidationReport r;
  std::vector<int> in_deg(static_cast<std::size_t>(t.node_count()), 0);
  for (const Arc& a : t.arcs()) {
    ++in_deg[a.dst];
    if (a.self_loop() && (r.self_loop_nodes.empty() || r.self_loop_nodes.back() != a.src)) {
      r.self_loop_nodes.push_back(a.src);
    }
  }
  for (int deg : in_deg) ++r.in_degree_histogram[deg];

  DistanceMatrix d = all_pairs_distances(t);
  r.strongly_connected = d.finite();
  if (r.strongly_connected) r.diameter = diameter(d);
  return r;
}

}  // namespace turbonoc
