#pragma once

// Exact integer polynomials, family validation, and root counting modulo
// prime powers.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "concentra/arith.hpp"

namespace concentra {

using BigInt = boost::multiprecision::cpp_int;

/// Univariate polynomial with integer coefficients, coeffs[i] multiplies x^i.
/// Invariants: degree >= 1, nonzero leading coefficient, |coeff| < 2^31.
class IntPolynomial {
 public:
  static constexpr std::int64_t kCoeffLimit = std::int64_t{1} << 31;

  explicit IntPolynomial(std::vector<std::int64_t> coeffs);

  /// Parses "x^3 - 2" style text (variable x, optional '*', integer coefficients).
  static IntPolynomial parse(std::string_view text);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  std::int64_t coeff(int i) const { return coeffs_[static_cast<std::size_t>(i)]; }
  std::int64_t lead() const { return coeffs_.back(); }
  std::span<const std::int64_t> coeffs() const { return coeffs_; }
  /// Max |coefficient|.
  std::int64_t norm() const;
  std::int64_t content() const;

  /// Canonical text form; parse(to_string()) reproduces the polynomial.
  std::string to_string() const;

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

 private:
  std::vector<std::int64_t> coeffs_;
};

/// Exact value Q(n) by Horner; throws Error(overflow) outside 128-bit range.
i128 eval(const IntPolynomial& q, i128 n);

/// Q(n) mod m with m >= 1.
std::uint64_t eval_mod(const IntPolynomial& q, std::uint64_t n, std::uint64_t m);

IntPolynomial multiply(const IntPolynomial& a, const IntPolynomial& b);

/// Res(A, B) as the Sylvester determinant (fraction-free elimination).
BigInt resultant(const IntPolynomial& a, const IntPolynomial& b);

/// (-1)^{g(g-1)/2} Res(Q, Q') / lead; defined as 1 in degree 1.
BigInt discriminant(const IntPolynomial& q);

enum class IrreducibilityVerdict { irreducible, reducible, unverified };

/// Exact over Q for degree <= 4; above that, irreducible modulo some p <= 100.
IrreducibilityVerdict check_irreducible(const IntPolynomial& q);

class PolynomialFamily {
 public:
  const std::vector<IntPolynomial>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  const IntPolynomial& member(std::size_t j) const { return members_.at(j); }
  const IntPolynomial& product() const { return product_; }
  /// D, discriminant of the product.
  const BigInt& disc() const { return disc_; }
  /// D_j, discriminant of member j.
  const BigInt& member_disc(std::size_t j) const { return member_discs_.at(j); }
  /// beta, leading coefficient of the product.
  std::int64_t lead() const { return product_.lead(); }
  int degree() const { return product_.degree(); }
  /// |beta * D|.
  BigInt beta_d() const;
  const std::vector<std::string>& warnings() const { return warnings_; }
  /// Members joined with ';' in canonical form.
  std::string to_string() const;

 private:
  friend PolynomialFamily validate_family(std::vector<IntPolynomial> members);
  PolynomialFamily(std::vector<IntPolynomial> members, IntPolynomial product)
      : members_(std::move(members)), product_(std::move(product)) {}

  std::vector<IntPolynomial> members_;
  IntPolynomial product_;
  BigInt disc_;
  std::vector<BigInt> member_discs_;
  std::vector<std::string> warnings_;
};

/// Checks irreducibility, pairwise coprimality, absence of fixed prime divisors
/// (per member) and D != 0. Throws Error with the matching code on failure.
PolynomialFamily validate_family(std::vector<IntPolynomial> members);

/// Parses "x;x+1" into a validated family.
PolynomialFamily parse_family(std::string_view text);

/// Seed used for randomized root splitting unless one is passed explicitly.
inline constexpr std::uint64_t kDefaultRootSeed = 0x5eed5eed2024ULL;
/// Primes below this use an exhaustive scan in roots_mod_p.
inline constexpr std::uint64_t kBruteForceRootThreshold = std::uint64_t{1} << 13;

/// Sorted roots of Q modulo the prime p.
std::vector<std::uint64_t> roots_mod_p(const IntPolynomial& q, std::uint64_t p,
                                       std::uint64_t seed = kDefaultRootSeed);
/// Same root set, always via gcd(X^p - X, Q) and randomized splitting (p odd).
std::vector<std::uint64_t> roots_mod_p_by_splitting(const IntPolynomial& q, std::uint64_t p,
                                                    std::uint64_t seed = kDefaultRootSeed);
/// rho(p) = |roots_mod_p| without listing the roots.
std::uint64_t count_roots_mod_p(const IntPolynomial& q, std::uint64_t p);

struct RootsModPrimePower {
  std::uint64_t p = 0;
  int nu = 0;
  std::vector<std::uint64_t> roots;  // sorted residues in [0, p^nu)
};

/// All roots modulo p^nu by iterated Hensel lifting from the roots mod p.
RootsModPrimePower lift_roots(const IntPolynomial& q, std::uint64_t p, int nu,
                              std::uint64_t seed = kDefaultRootSeed);

/// Number of roots modulo m, multiplicative over the factorization of m.
u128 rho(const IntPolynomial& q, u128 m);

struct Rational {
  i128 num = 0;
  i128 den = 1;
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// phi_j(n) = n * prod_{p | n} (1 - rho(p)/p), exact.
Rational phi(const IntPolynomial& q, u128 n);

struct RootBoundCheck {
  bool bound1 = true;             // rho(p^nu) <= min(g p^{nu-1}, g p^{nu-nu/g}, p^{nu-1} rho(p))
  bool bound2_applies = false;    // p does not divide the discriminant
  bool bound2 = true;             // rho(p^nu) <= min(g, p - 1)
};

/// Evaluates the classical root-count bounds for one prime power.
RootBoundCheck check_root_bounds(int degree, const BigInt& disc, std::uint64_t p, int nu, u128 count_nu,
                                 u128 count_p);

}  // namespace concentra
