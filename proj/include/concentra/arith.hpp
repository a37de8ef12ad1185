#pragma once

// 128-bit integer helpers, modular arithmetic, primality and factoring.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace concentra {

using i128 = __int128;
using u128 = unsigned __int128;

inline constexpr i128 kI128Max = static_cast<i128>(~static_cast<u128>(0) >> 1);

std::string to_string(i128 value);
std::string to_string(u128 value);

/// Parses an optionally signed decimal integer; throws Error(parse) or Error(overflow).
i128 parse_i128(std::string_view text);

inline u128 abs_u128(i128 v) { return v < 0 ? static_cast<u128>(0) - static_cast<u128>(v) : static_cast<u128>(v); }

/// Checked arithmetic; throws Error(overflow) naming `what`.
i128 checked_add(i128 a, i128 b, const char* what);
i128 checked_mul(i128 a, i128 b, const char* what);

u128 gcd(u128 a, u128 b);
std::uint64_t isqrt(std::uint64_t n);
u128 isqrt(u128 n);
/// Largest r with r^k <= n.
u128 iroot(u128 n, unsigned k);

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}
std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

/// Modular arithmetic for moduli up to 2^127 (operands must already be reduced).
u128 addmod(u128 a, u128 b, u128 m);
u128 mulmod(u128 a, u128 b, u128 m);
u128 powmod(u128 base, u128 exp, u128 m);

/// Inverse of a modulo m when gcd(a, m) = 1, otherwise 0.
std::uint64_t invmod(std::uint64_t a, std::uint64_t m);

/// Reduces a signed value into [0, m).
inline std::uint64_t reduce_signed(i128 v, std::uint64_t m) {
  i128 r = v % static_cast<i128>(m);
  if (r < 0) r += m;
  return static_cast<std::uint64_t>(r);
}

/// Montgomery form arithmetic modulo an odd 64-bit modulus.
class Montgomery64 {
 public:
  explicit Montgomery64(std::uint64_t modulus);

  std::uint64_t modulus() const { return n_; }
  std::uint64_t to(std::uint64_t a) const { return reduce(static_cast<u128>(a % n_) * r2_); }
  std::uint64_t from(std::uint64_t a) const { return reduce(a); }
  std::uint64_t one() const { return one_; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return reduce(static_cast<u128>(a) * b); }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;
    return (s >= n_ || s < a) ? s - n_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + (n_ - b); }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;

 private:
  std::uint64_t reduce(u128 t) const {
    std::uint64_t q = static_cast<std::uint64_t>(t) * inv_;
    std::uint64_t h = static_cast<std::uint64_t>((static_cast<u128>(q) * n_) >> 64);
    std::uint64_t th = static_cast<std::uint64_t>(t >> 64);
    return th >= h ? th - h : th + (n_ - h);
  }

  std::uint64_t n_;
  std::uint64_t inv_;  // n^-1 mod 2^64
  std::uint64_t r2_;   // 2^128 mod n
  std::uint64_t one_;  // 2^64 mod n
};

/// Deterministic for n < 3.3e24 (Miller-Rabin, first 13 prime bases); Baillie-PSW above.
bool is_prime(u128 n);
bool is_prime(std::uint64_t n);

struct PrimePower {
  u128 p;
  int nu;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Finds a nontrivial factor of composite n (Pollard-Brent). `seed` selects the
/// pseudo-random polynomial sequence; the result is deterministic in (n, seed).
u128 find_factor(u128 n, std::uint64_t seed = 1);

/// Complete factorization of n >= 1, primes ascending; factorize(1) is empty.
std::vector<PrimePower> factorize(u128 n);

/// Product of p^nu; throws Error(overflow) beyond 128 bits.
u128 multiply_back(std::span<const PrimePower> factors);

/// Simple deterministic 64-bit generator (SplitMix64). Passed by value.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed = 0x9e3779b97f4a7c15ULL) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  /// Uniform in [0, bound) without modulo bias.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

}  // namespace concentra
