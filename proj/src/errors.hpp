#pragma once

#include <stdexcept>
#include <string>

namespace ct {

// Kept in sync with the CT_* codes in the public C header.
enum class ErrCode : int {
  ok = 0,
  parse = 1,
  semantic = 2,
  not_finite = 3,
  resource_limit = 4,
  degenerate = 5,
  lift_failure = 6,
  invalid_arg = 7,
};

struct CtError : std::runtime_error {
  ErrCode code;
  CtError(ErrCode c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

}  // namespace ct
