#pragma once

// Dense polynomials over F_p, coefficients low-to-high, always trimmed.
// p must be prime and below 2^63.

#include <cstdint>
#include <vector>

#include "concentra/arith.hpp"

namespace concentra::detail {

using ModPoly = std::vector<std::uint64_t>;

void trim(ModPoly& a);
inline int degree(const ModPoly& a) { return static_cast<int>(a.size()) - 1; }  // -1 for zero

ModPoly make_monic(ModPoly a, std::uint64_t p);
ModPoly sub(const ModPoly& a, const ModPoly& b, std::uint64_t p);
ModPoly mul(const ModPoly& a, const ModPoly& b, std::uint64_t p);
/// Quotient and remainder by a nonzero divisor.
void divrem(const ModPoly& a, const ModPoly& b, std::uint64_t p, ModPoly& quotient, ModPoly& remainder);
ModPoly rem(const ModPoly& a, const ModPoly& b, std::uint64_t p);
/// Monic gcd; gcd(0, 0) is the zero polynomial.
ModPoly gcd(ModPoly a, ModPoly b, std::uint64_t p);

/// base^e mod f, f monic of degree >= 1.
ModPoly powmod(const ModPoly& base, std::uint64_t e, const ModPoly& f, std::uint64_t p);
/// X^e mod f.
ModPoly x_powmod(std::uint64_t e, const ModPoly& f, std::uint64_t p);

std::uint64_t eval(const ModPoly& a, std::uint64_t x, std::uint64_t p);

/// gcd(X^p - X, f): the product of the distinct linear factors of f.
ModPoly linear_part(const ModPoly& f, std::uint64_t p);

/// Roots of h, a monic squarefree product of linear factors, by randomized
/// equal-degree splitting. Requires p odd. Output unsorted.
void split_linear(const ModPoly& h, std::uint64_t p, SplitMix64& rng, std::vector<std::uint64_t>& roots);

/// Rabin's irreducibility test for f of degree >= 1.
bool is_irreducible(const ModPoly& f, std::uint64_t p);

}  // namespace concentra::detail
