#pragma once

#include <stdexcept>
#include <string>

namespace maptest {

enum class ErrorCode {
  dimension_mismatch,
  null_mode_division,
  empty_spectrum,
  infinite_quantile,
  invalid_argument,
  zero_probe,
  not_identifiable,
  bound_inapplicable,
  search_failed,
  not_detectable,
  io_error,
  config_error,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace maptest
