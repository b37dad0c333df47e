#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nocs {

enum class ErrorCode {
  dimension_mismatch,
  empty_references,
  fully_masked,
  invalid_value,
  out_of_bounds,
  invalid_params,
  window_too_small,
  underdetermined,
  empty_bar,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Validation failure raised by the library. Every error carries a code so
/// callers (the CLI in particular) can map failures to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nocs
