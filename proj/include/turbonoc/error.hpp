// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace turbonoc {

/// Failure classes surfaced by the core library. The C API and the CLI map
/// each class to a distinct status / exit code.
enum class ErrorCode {
  invalid_parameter,
  invalid_topology,
  parse_error,
  not_a_permutation,
  livelock,
  precondition,
  model_inconsistency,
  config_error,
  io_error,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace turbonoc
