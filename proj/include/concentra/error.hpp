#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace concentra {

enum class ErrorCode {
  invalid_argument,
  parse,
  overflow,
  composite_modulus,
  capacity,
  not_irreducible,
  unverified_irreducibility,
  not_pairwise_coprime,
  fixed_divisor,
  zero_discriminant,
  empty_grid,
  empty_table,
  degenerate_factor,
  range,
  non_integer_values,
  quadrature,
  io,
};

std::string_view error_code_name(ErrorCode code) noexcept;

/// Every failure raised by the library. The code names the violated
/// precondition; what() carries a human-readable diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace concentra
