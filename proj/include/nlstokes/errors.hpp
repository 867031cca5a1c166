#pragma once

#include <stdexcept>
#include <string>

namespace nlstokes {

enum class ErrorCode {
  validation,
  divergent_moment,
  quadrature_failure,
  missing_mollifier,
  shape_mismatch,
  aliasing_risk,
  non_real_result,
  mean_not_zero,
  zero_frequency,
  singular_mode,
  degenerate_fit,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

const char* error_code_name(ErrorCode code);

}  // namespace nlstokes
