// SPDX-License-Identifier: Apache-2.0
#include "turbonoc/traffic.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "turbonoc/error.hpp"

namespace turbonoc {

Permutation::Permutation(std::vector<int> map) : map_(std::move(map)), inverse_(map_.size(), -1) {
  const int n = size();
  for (int x = 0; x < n; ++x) {
    const int y = map_[x];
    if (y < 0 || y >= n) {
      throw Error(ErrorCode::not_a_permutation,
                  "value " + std::to_string(y) + " at index " + std::to_string(x) + " is outside [0," +
                      std::to_string(n) + ")");
    }
    if (inverse_[y] != -1) {
      throw Error(ErrorCode::not_a_permutation, "value " + std::to_string(y) + " at index " + std::to_string(x) +
                                                    " repeats index " + std::to_string(inverse_[y]));
    }
    inverse_[y] = x;
  }
}

Permutation identity_permutation(int n) {
  std::vector<int> m(static_cast<std::size_t>(n));
  std::iota(m.begin(), m.end(), 0);
  return Permutation(std::move(m));
}

Permutation gen_circular_shifting(int n, long long step, long long offset) {
  if (n < 1) throw Error(ErrorCode::invalid_parameter, "interleaver size must be positive");
  if (std::gcd(step, static_cast<long long>(n)) != 1) {
    throw Error(ErrorCode::invalid_parameter,
                "circular shifting step " + std::to_string(step) + " is not coprime with N=" + std::to_string(n));
  }
  const long long a = ((step % n) + n) % n;
  const long long s = ((offset % n) + n) % n;
  std::vector<int> m(static_cast<std::size_t>(n));
  for (long long x = 0; x < n; ++x) m[x] = static_cast<int>((a * x + s) % n);
  return Permutation(std::move(m));
}

namespace {

// Uniform draw in [0, bound) without the implementation-defined behaviour of
// std::uniform_int_distribution.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % bound;
}

}  // namespace

Permutation gen_random_permutation(int n, std::uint64_t seed) {
  std::vector<int> m(static_cast<std::size_t>(n));
  std::iota(m.begin(), m.end(), 0);
  std::mt19937_64 rng(seed);
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(bounded(rng, static_cast<std::uint64_t>(i) + 1));
    std::swap(m[i], m[j]);
  }
  return Permutation(std::move(m));
}

Permutation parse_permutation(std::istream& in, int expected_size) {
  std::vector<int> m;
  m.reserve(static_cast<std::size_t>(std::max(expected_size, 0)));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) {
      // tolerate a trailing blank line only
      std::string rest;
      while (std::getline(in, rest)) {
        if (rest.find_first_not_of(" \t\r") != std::string::npos) {
          throw Error(ErrorCode::parse_error, "blank line " + std::to_string(lineno) + " inside permutation");
        }
      }
      break;
    }
    std::istringstream ls(line);
    long long v = 0;
    std::string extra;
    if (!(ls >> v) || (ls >> extra)) {
      throw Error(ErrorCode::parse_error, "line " + std::to_string(lineno) + ": expected one integer");
    }
    m.push_back(static_cast<int>(v));
  }
  if (static_cast<int>(m.size()) != expected_size) {
    throw Error(ErrorCode::parse_error, "expected " + std::to_string(expected_size) + " entries, found " +
                                            std::to_string(m.size()));
  }
  return Permutation(std::move(m));
}

Permutation load_permutation(const std::filesystem::path& path, int expected_size) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open permutation file " + path.string());
  try {
    return parse_permutation(in, expected_size);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_permutation(const Permutation& p, std::ostream& out) {
  for (int v : p.map()) out << v << '\n';
}

void write_permutation(const Permutation& p, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot write permutation file " + path.string());
  write_permutation(p, out);
}

const char* to_string(Direction d) noexcept {
  return d == Direction::interleave ? "interleave" : "deinterleave";
}

const char* to_string(EmissionOrder o) noexcept { return o == EmissionOrder::forward ? "forward" : "backward"; }

TargetMap target_map(const Permutation& perm, int node_count, Direction dir) {
  const int n = perm.size();
  if (node_count < 1 || n % node_count != 0) {
    throw Error(ErrorCode::invalid_parameter,
                "P must divide N (P=" + std::to_string(node_count) + ", N=" + std::to_string(n) + ")");
  }
  const int steps = n / node_count;
  std::vector<Target> targets(static_cast<std::size_t>(n));
  for (int g = 0; g < n; ++g) {
    const int dst = dir == Direction::interleave ? perm(g) : perm.inverse(g);
    targets[g] = Target{dst / steps, dst % steps};
  }
  return TargetMap(node_count, steps, std::move(targets));
}

void check(const SisoTimingParams& p) {
  if (p.window < 1) throw Error(ErrorCode::invalid_parameter, "window must be >= 1");
  if (p.tau < 1) throw Error(ErrorCode::invalid_parameter, "tau must be >= 1");
  if (p.theta < 1) throw Error(ErrorCode::invalid_parameter, "theta must be >= 1");
  if (p.latency < 0) throw Error(ErrorCode::invalid_parameter, "delta must be >= 0");
}

InjectionSchedule injection_schedule(const SisoTimingParams& p, int steps_per_siso, int node_count) {
  check(p);
  std::vector<Emission> out;
  out.reserve(static_cast<std::size_t>(std::max(steps_per_siso, 0)));
  long long cycle = p.latency;
  for (int start = 0; start < steps_per_siso; start += p.window) {
    const int end = std::min(start + p.window, steps_per_siso);
    if (start > 0) cycle += p.theta;
    for (int k = 0; k < end - start; ++k) {
      if (k > 0) cycle += p.tau;
      const int idx = p.order == EmissionOrder::forward ? start + k : end - 1 - k;
      out.push_back(Emission{cycle, idx});
    }
  }
  return InjectionSchedule(node_count, std::move(out));
}

void write_schedule_csv(const InjectionSchedule& s, const TargetMap& m, std::ostream& out) {
  out << "node,cycle,local_index,dest_node,dest_location\n";
  for (int i = 0; i < s.node_count(); ++i) {
    for (const Emission& e : s.for_node(i)) {
      const Target& t = m.at(i, e.local_index);
      out << i << ',' << e.cycle << ',' << e.local_index << ',' << t.node << ',' << t.location << '\n';
    }
  }
}

}  // namespace turbonoc
