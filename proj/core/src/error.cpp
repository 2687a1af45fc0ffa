#include "maptest/error.hpp"

namespace maptest {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::dimension_mismatch: return "dimension mismatch";
    case ErrorCode::null_mode_division: return "null-mode division";
    case ErrorCode::empty_spectrum: return "empty spectrum";
    case ErrorCode::infinite_quantile: return "infinite quantile";
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::zero_probe: return "zero probe";
    case ErrorCode::not_identifiable: return "m0 not identifiable";
    case ErrorCode::bound_inapplicable: return "bound inapplicable";
    case ErrorCode::search_failed: return "search failed";
    case ErrorCode::not_detectable: return "alternative not detectable";
    case ErrorCode::io_error: return "io error";
    case ErrorCode::config_error: return "config error";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace maptest
