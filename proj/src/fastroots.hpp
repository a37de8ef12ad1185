#pragma once

// Closed-form root finding mod p for degrees 1 and 2; other degrees defer to
// roots_mod_p. Results coincide with roots_mod_p.

#include <cstdint>
#include <vector>

#include "concentra/polynomial.hpp"

namespace concentra::detail {

/// Square root of a quadratic residue modulo an odd prime (Tonelli-Shanks).
std::uint64_t sqrt_mod(std::uint64_t a, std::uint64_t p);
/// Sorted roots of q modulo the prime p.
std::vector<std::uint64_t> fast_roots(const IntPolynomial& q, std::uint64_t p);
std::uint64_t fast_count(const IntPolynomial& q, std::uint64_t p);

}  // namespace concentra::detail
