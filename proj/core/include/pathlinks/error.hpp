#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pathlinks {

// Failure classes. The CLI maps each one to a distinct exit code and a
// single-line `error=<name>` message.
enum class ErrorCode {
  missing_file,
  parse_failure,
  infeasible_config,
  ineligible_evaluation,
  invalid_argument,
  unknown_article,
  non_convergence,
  model_mismatch,
};

std::string_view error_code_name(ErrorCode code) noexcept;
int exit_status(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pathlinks
