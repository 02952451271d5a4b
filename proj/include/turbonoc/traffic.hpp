// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace turbonoc {

/// Bijection on {0..N-1} with its inverse.
class Permutation {
 public:
  /// Throws not_a_permutation naming the first index whose value repeats or is out of range.
  explicit Permutation(std::vector<int> map);

  int size() const { return static_cast<int>(map_.size()); }
  int operator()(int x) const { return map_[x]; }
  int inverse(int y) const { return inverse_[y]; }
  const std::vector<int>& map() const { return map_; }
  const std::vector<int>& inverse_map() const { return inverse_; }

  friend bool operator==(const Permutation& a, const Permutation& b) { return a.map_ == b.map_; }

 private:
  std::vector<int> map_;
  std::vector<int> inverse_;
};

Permutation identity_permutation(int n);
/// Pi(x) = (step*x + offset) mod N; requires gcd(step, N) = 1.
Permutation gen_circular_shifting(int n, long long step, long long offset);
/// Fisher-Yates driven by std::mt19937_64 seeded with `seed`, using rejection
/// sampling for bounded draws so the result is identical on every platform.
Permutation gen_random_permutation(int n, std::uint64_t seed);

/// One 0-based integer per line, exactly `expected_size` lines.
Permutation parse_permutation(std::istream& in, int expected_size);
Permutation load_permutation(const std::filesystem::path& path, int expected_size);
void write_permutation(const Permutation& p, std::ostream& out);
void write_permutation(const Permutation& p, const std::filesystem::path& path);

enum class Direction { interleave, deinterleave };

const char* to_string(Direction d) noexcept;

struct Target {
  int node = 0;
  int location = 0;
  friend bool operator==(const Target&, const Target&) = default;
};

/// Destination memory slot k(i,j), t(i,j) for every SISO i and local step j.
class TargetMap {
 public:
  TargetMap(int node_count, int steps_per_siso, std::vector<Target> targets)
      : p_(node_count), steps_(steps_per_siso), targets_(std::move(targets)) {}

  int node_count() const { return p_; }
  int steps_per_siso() const { return steps_; }
  const Target& at(int siso, int step) const { return targets_[static_cast<std::size_t>(siso) * steps_ + step]; }

 private:
  int p_;
  int steps_;
  std::vector<Target> targets_;
};

/// SISO i owns global steps i*(N/P) .. i*(N/P)+N/P-1. Interleave sends through
/// Pi, de-interleave through Pi^-1. Throws invalid_parameter unless P divides N.
TargetMap target_map(const Permutation& perm, int node_count, Direction dir);

enum class EmissionOrder { forward, backward };

const char* to_string(EmissionOrder o) noexcept;

/// SISO output timing. Rate R = 1/tau steps per cycle.
struct SisoTimingParams {
  int window = 39;        // W, trellis steps per window
  long long latency = 0;  // Delta, cycles before the first output
  int tau = 1;            // cycles between outputs inside a window
  int theta = 1;          // cycles from the last output of a window to the first of the next
  EmissionOrder order = EmissionOrder::backward;
};

/// Throws invalid_parameter when a field is out of range.
void check(const SisoTimingParams& p);

struct Emission {
  long long cycle = 0;
  int local_index = 0;
  friend bool operator==(const Emission&, const Emission&) = default;
};

/// Emission times of one SISO; every SISO runs the same counters, so a single
/// list serves all nodes.
class InjectionSchedule {
 public:
  InjectionSchedule(int node_count, std::vector<Emission> emissions)
      : p_(node_count), emissions_(std::move(emissions)) {}

  int node_count() const { return p_; }
  std::span<const Emission> for_node(int /*node*/) const { return emissions_; }
  /// Cycle after the last emission; 0 for an empty schedule.
  long long horizon() const { return emissions_.empty() ? 0 : emissions_.back().cycle + 1; }

 private:
  int p_;
  std::vector<Emission> emissions_;
};

InjectionSchedule injection_schedule(const SisoTimingParams& p, int steps_per_siso, int node_count = 1);

/// CSV `node,cycle,local_index,dest_node,dest_location`.
void write_schedule_csv(const InjectionSchedule& s, const TargetMap& m, std::ostream& out);

}  // namespace turbonoc
