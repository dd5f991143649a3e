// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ak {

enum class errc {
  invalid_arg = 1,
  invalid_weight,
  off_grid_shift,
  scaling_overflow,
  truncation,
  mollifier_unresolved,
  inside_spectrum,
  symbol_pole,
  not_inside_candidate,
  probe_coverage,
  bad_config,
  io,
  internal,
};

class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace ak
