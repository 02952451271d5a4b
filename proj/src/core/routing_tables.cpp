// SPDX-License-Identifier: Apache-2.0
#include "turbonoc/routing_tables.hpp"

#include <algorithm>
#include <limits>
#include <ostream>

#include "turbonoc/error.hpp"

namespace turbonoc {

bool DistanceMatrix::finite() const {
  return std::none_of(d_.begin(), d_.end(), [](int v) { return v == unreachable; });
}

DistanceMatrix all_pairs_distances(const Topology& t) {
  const int n = t.node_count();
  constexpr int inf = std::numeric_limits<int>::max() / 4;
  std::vector<int> w(static_cast<std::size_t>(n) * n, inf);
  auto at = [&](int i, int k) -> int& { return w[static_cast<std::size_t>(i) * n + k]; };
  for (int i = 0; i < n; ++i) at(i, i) = 0;
  for (const Arc& a : t.arcs()) {
    if (!a.self_loop()) at(a.src, a.dst) = 1;
  }
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      const int il = at(i, l);
      if (il == inf) continue;
      for (int k = 0; k < n; ++k) {
        const int cand = il + at(l, k);
        if (cand < at(i, k)) at(i, k) = cand;
      }
    }
  }
  DistanceMatrix d(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (at(i, k) != inf) d.set(i, k, at(i, k));
    }
  }
  return d;
}

AspSets asp_sets(const Topology& t, const DistanceMatrix& d) {
  const int n = t.node_count();
  AspSets sets(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (i == k || d.at(i, k) == DistanceMatrix::unreachable) continue;
      auto& out = sets.at(i, k);
      for (int p = 0; p < t.degree(); ++p) {
        const int l = t.successor(i, p);
        if (l == i) continue;
        const int lk = d.at(l, k);
        if (lk != DistanceMatrix::unreachable && lk + 1 == d.at(i, k)) out.push_back(NextHop{l, p});
      }
    }
  }
  return sets;
}

SspTable ssp_table(const Topology& t, const AspSets& a) {
  const int n = t.node_count();
  SspTable table(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (i == k) {
        table.set(i, k, t.local_port());
        continue;
      }
      const auto& hops = a.at(i, k);
      if (hops.empty()) {
        throw Error(ErrorCode::precondition,
                    "no shortest-path next hop from " + std::to_string(i) + " to " + std::to_string(k));
      }
      // entries are stored in port order
      table.set(i, k, hops.front().port);
    }
  }
  return table;
}

int diameter(const DistanceMatrix& d) {
  int best = 0;
  for (int i = 0; i < d.size(); ++i) {
    for (int k = 0; k < d.size(); ++k) {
      const int v = d.at(i, k);
      if (v == DistanceMatrix::unreachable) {
        throw Error(ErrorCode::precondition, "diameter of a disconnected topology");
      }
      best = std::max(best, v);
    }
  }
  return best;
}

RoutingTables build_routing_tables(const Topology& t) {
  DistanceMatrix d = all_pairs_distances(t);
  if (!d.finite()) throw Error(ErrorCode::invalid_topology, "topology is not strongly connected");
  AspSets a = asp_sets(t, d);
  SspTable s = ssp_table(t, a);
  return RoutingTables{std::move(d), std::move(a), std::move(s)};
}

void write_ssp_csv(const SspTable& table, std::ostream& out) {
  out << "node,dest,port\n";
  for (int i = 0; i < table.size(); ++i) {
    for (int k = 0; k < table.size(); ++k) out << i << ',' << k << ',' << table.port(i, k) << '\n';
  }
}

void write_asp_csv(const AspSets& sets, std::ostream& out) {
  out << "node,dest,neighbor,port\n";
  for (int i = 0; i < sets.size(); ++i) {
    for (int k = 0; k < sets.size(); ++k) {
      for (const NextHop& h : sets.at(i, k)) out << i << ',' << k << ',' << h.neighbor << ',' << h.port << '\n';
    }
  }
}

}  // namespace turbonoc
