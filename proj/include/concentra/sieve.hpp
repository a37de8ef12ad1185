#pragma once

// Prime tables, interval factorization of polynomial values, and the friable
// decomposition of Q(n).

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "concentra/arith.hpp"
#include "concentra/polynomial.hpp"

namespace concentra {

/// Odd-only bit-packed primality table for [0, limit], built segment by
/// segment, with an optional smallest-prime-factor array.
class PrimeTable {
 public:
  static constexpr std::uint64_t kMaxLimit = std::uint64_t{1} << 34;
  static constexpr std::uint64_t kMaxSpfLimit = std::uint64_t{1} << 28;

  explicit PrimeTable(std::uint64_t limit, bool with_spf = false);

  std::uint64_t limit() const { return limit_; }
  bool has_spf() const { return !spf_.empty(); }
  bool is_prime(std::uint64_t n) const {
    if (n < 2 || n > limit_) return false;
    if (n % 2 == 0) return n == 2;
    return (bits_[n >> 4] >> ((n >> 1) & 7)) & 1;
  }
  /// Smallest prime factor of 2 <= n <= limit (requires the spf array).
  std::uint64_t spf(std::uint64_t n) const;
  std::uint64_t count() const { return count_; }

  /// Primes in [lo, hi] ascending.
  std::vector<std::uint64_t> primes(std::uint64_t lo = 0, std::uint64_t hi = std::numeric_limits<std::uint64_t>::max()) const;

  template <class F>
  void for_each_prime(std::uint64_t lo, std::uint64_t hi, F&& fn) const {
    if (hi > limit_) hi = limit_;
    if (lo <= 2 && hi >= 2) fn(std::uint64_t{2});
    for (std::uint64_t n = std::max<std::uint64_t>(lo, 3) | 1; n <= hi; n += 2) {
      if ((bits_[n >> 4] >> ((n >> 1) & 7)) & 1) fn(n);
    }
  }

 private:
  std::uint64_t limit_;
  std::uint64_t count_ = 0;
  std::vector<std::uint8_t> bits_;   // bit (n>>1)&7 of byte n>>4 for odd n
  std::vector<std::uint32_t> spf_;
};

PrimeTable primes_up_to(std::uint64_t limit);

/// Factorization of 1 <= n <= table.limit() by repeated smallest-prime-factor division.
std::vector<PrimePower> factorize_small(std::uint64_t n, const PrimeTable& spf);

/// Factorizations of |Q_j(n)| for consecutive n, in compressed row form.
struct FactorBlock {
  std::uint64_t first = 0;                // n of row 0
  std::vector<std::uint32_t> offsets{0};  // row i spans [offsets[i], offsets[i+1])
  std::vector<u128> primes;
  std::vector<std::uint8_t> exponents;
  std::vector<std::uint8_t> zero;         // 1 where Q_j(n) = 0

  std::size_t size() const { return zero.size(); }
  std::size_t row_begin(std::size_t i) const { return offsets[i]; }
  std::size_t row_end(std::size_t i) const { return offsets[i + 1]; }
  std::vector<PrimePower> row(std::size_t i) const;
};

inline constexpr std::uint64_t kSegmentSize = std::uint64_t{1} << 20;

/// Sieve bound used when none is given: the cube-root rule max(1e5, ceil((x+y)^(1/3))),
/// raised to min(ceil(sqrt(max |Q_j(n)|)), 4y) so cofactors left after sieving are prime.
std::uint64_t default_sieve_bound(const PolynomialFamily& family, std::uint64_t x, std::uint64_t y);

/// Per-member root tables for all primes up to the bound; factors arbitrary
/// blocks of n. Immutable after construction.
class IntervalSieve {
 public:
  IntervalSieve(const PolynomialFamily& family, std::uint64_t sieve_bound);

  std::uint64_t bound() const { return bound_; }
  const PolynomialFamily& family() const { return *family_; }
  std::size_t members() const { return family_->size(); }

  /// Factors |Q_j(n)| for n = first, ..., first + count - 1.
  FactorBlock factor_block(std::size_t member, std::uint64_t first, std::uint64_t count) const;

 private:
  struct RootTable {
    std::vector<std::uint64_t> primes;
    std::vector<std::uint32_t> offsets;  // roots of primes[i] are roots[offsets[i]..offsets[i+1])
    std::vector<std::uint64_t> roots;
  };
  template <class U>
  FactorBlock factor_block_impl(std::size_t member, std::uint64_t first, std::uint64_t count) const;

  const PolynomialFamily* family_;
  std::uint64_t bound_;
  std::vector<RootTable> tables_;
};

/// Complete factorizations of Q_j(n) for every member j and n in (x, x+y].
struct IntervalFactorization {
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  std::uint64_t sieve_bound = 0;
  std::vector<FactorBlock> members;  // one block per member covering the interval

  /// Factors of |Q_j(n)| for x < n <= x + y.
  std::vector<PrimePower> factors(std::size_t j, std::uint64_t n) const;
  bool is_zero(std::size_t j, std::uint64_t n) const;
};

/// sieve_bound = 0 selects default_sieve_bound.
IntervalFactorization interval_factorize(const PolynomialFamily& family, std::uint64_t x, std::uint64_t y,
                                         std::uint64_t sieve_bound = 0);

struct FriableEntry {
  std::uint64_t n = 0;
  bool zero = false;
  bool xi_infinite = false;           // every prime of Q(n) fits under the threshold
  u128 xi = 0;                        // largest xi whose xi-friable part is <= threshold
  std::vector<u128> a;                // xi-friable part of Q_j(n), per member
  u128 a_product = 1;
  u128 b = 1;                         // Q(n) / prod a_j; 0 if it exceeds 128 bits
  double log_b = 0.0;
  u128 p_min = 0;                     // smallest prime of b, 0 when b = 1
  int nu_min = 0;
  bool in_n1 = false;                 // a_1 ... a_r <= x^{eps/3}
};

struct FriableDecomposition {
  std::uint64_t x = 0;
  double epsilon = 0.0;
  u128 threshold = 0;     // floor(x^{2 eps/3})
  u128 n1_threshold = 0;  // floor(x^{eps/3})
  std::vector<FriableEntry> entries;
  std::uint64_t n1_count = 0;
  std::uint64_t n2_count = 0;
};

FriableDecomposition friable_decompose(const IntervalFactorization& fac, std::uint64_t x, double epsilon);
FriableDecomposition friable_decompose(const IntervalFactorization& fac, u128 threshold, u128 n1_threshold);

/// Decomposition of a single factored value (prime powers ascending, merged).
FriableEntry friable_split(std::span<const std::vector<PrimePower>> member_factors, u128 threshold,
                           u128 n1_threshold);

/// FNV-1a hash of the canonical family text.
std::uint64_t family_hash(const PolynomialFamily& family);

inline constexpr std::uint32_t kCacheVersion = 1;

/// Binary cache: little-endian, length-prefixed records.
void save_factorization(const std::string& path, const IntervalFactorization& fac, std::uint64_t hash);
/// Returns nothing if the file is absent, stale, or keyed differently.
std::optional<IntervalFactorization> load_factorization(const std::string& path, std::uint64_t hash, std::uint64_t x,
                                                        std::uint64_t y, std::uint64_t sieve_bound);

}  // namespace concentra
