#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qubitgeo {

enum class ErrorCode {
  ZeroVector,
  DomainError,
  InvalidDensity,
  BadWeights,
  BadIndex,
  BadGate,
  KnotEndpoint,
  KnotInput,
  BadConfig,
  BadArgument,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::ZeroVector: return "zero_vector";
  case ErrorCode::DomainError: return "domain_error";
  case ErrorCode::InvalidDensity: return "invalid_density";
  case ErrorCode::BadWeights: return "bad_weights";
  case ErrorCode::BadIndex: return "bad_index";
  case ErrorCode::BadGate: return "bad_gate";
  case ErrorCode::KnotEndpoint: return "knot_endpoint";
  case ErrorCode::KnotInput: return "knot_input";
  case ErrorCode::BadConfig: return "bad_config";
  case ErrorCode::BadArgument: return "bad_argument";
  }
  return "unknown";
}

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace qubitgeo
