#include "concentra/arith.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "concentra/error.hpp"

namespace concentra {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::parse: return "ParseError";
    case ErrorCode::overflow: return "Overflow";
    case ErrorCode::composite_modulus: return "CompositeModulus";
    case ErrorCode::capacity: return "CapacityError";
    case ErrorCode::not_irreducible: return "NotIrreducible";
    case ErrorCode::unverified_irreducibility: return "UnverifiedIrreducibility";
    case ErrorCode::not_pairwise_coprime: return "NotPairwiseCoprime";
    case ErrorCode::fixed_divisor: return "FixedDivisor";
    case ErrorCode::zero_discriminant: return "ZeroDiscriminant";
    case ErrorCode::empty_grid: return "EmptyGrid";
    case ErrorCode::empty_table: return "EmptyTable";
    case ErrorCode::degenerate_factor: return "DegenerateFactor";
    case ErrorCode::range: return "RangeError";
    case ErrorCode::non_integer_values: return "NonIntegerValues";
    case ErrorCode::quadrature: return "QuadratureError";
    case ErrorCode::io: return "IoError";
  }
  return "Error";
}

std::string to_string(u128 value) {
  if (value == 0) return "0";
  std::string out;
  while (value != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string to_string(i128 value) {
  if (value < 0) return "-" + to_string(abs_u128(value));
  return to_string(static_cast<u128>(value));
}

i128 parse_i128(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  if (i == text.size()) throw Error(ErrorCode::parse, "expected an integer, got '" + std::string(text) + "'");
  u128 magnitude = 0;
  const u128 limit = static_cast<u128>(kI128Max) + (negative ? 1 : 0);
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c < '0' || c > '9') throw Error(ErrorCode::parse, "expected an integer, got '" + std::string(text) + "'");
    if (magnitude > (limit - static_cast<u128>(c - '0')) / 10)
      throw Error(ErrorCode::overflow, "integer '" + std::string(text) + "' exceeds 128 bits");
    magnitude = magnitude * 10 + static_cast<u128>(c - '0');
  }
  return negative ? static_cast<i128>(static_cast<u128>(0) - magnitude) : static_cast<i128>(magnitude);
}

i128 checked_add(i128 a, i128 b, const char* what) {
  i128 out;
  if (__builtin_add_overflow(a, b, &out)) throw Error(ErrorCode::overflow, what);
  return out;
}

i128 checked_mul(i128 a, i128 b, const char* what) {
  i128 out;
  if (__builtin_mul_overflow(a, b, &out)) throw Error(ErrorCode::overflow, what);
  return out;
}

u128 gcd(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

u128 isqrt(u128 n) {
  if (n < (static_cast<u128>(1) << 64)) return isqrt(static_cast<std::uint64_t>(n));
  return iroot(n, 2);
}

u128 iroot(u128 n, unsigned k) {
  if (k == 0) throw Error(ErrorCode::invalid_argument, "iroot: k must be positive");
  if (k == 1 || n < 2) return n;
  // Floating estimate, then exact correction.
  auto estimate = static_cast<u128>(std::pow(static_cast<long double>(n), 1.0L / k));
  auto pow_le = [&](u128 r) {  // r^k <= n without overflow
    u128 acc = 1;
    for (unsigned i = 0; i < k; ++i) {
      if (r != 0 && acc > n / r) return false;
      acc *= r;
    }
    return acc <= n;
  };
  u128 r = estimate;
  while (r > 0 && !pow_le(r)) --r;
  while (pow_le(r + 1)) ++r;
  return r;
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t result = 1;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

u128 addmod(u128 a, u128 b, u128 m) { return a >= m - b ? a - (m - b) : a + b; }

u128 mulmod(u128 a, u128 b, u128 m) {
  if (m <= UINT64_MAX) {
    return static_cast<u128>(static_cast<std::uint64_t>(a % m)) * static_cast<std::uint64_t>(b % m) % m;
  }
  u128 result = 0;
  a %= m;
  b %= m;
  while (b != 0) {
    if (b & 1) result = addmod(result, a, m);
    a = addmod(a, a, m);
    b >>= 1;
  }
  return result;
}

u128 powmod(u128 base, u128 exp, u128 m) {
  if (m == 1) return 0;
  u128 result = 1;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t m) {
  if (m == 1) return 0;
  i128 t = 0, new_t = 1;
  i128 r = m, new_r = a % m;
  while (new_r != 0) {
    i128 q = r / new_r;
    i128 tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) return 0;
  if (t < 0) t += m;
  return static_cast<std::uint64_t>(t);
}

Montgomery64::Montgomery64(std::uint64_t modulus) : n_(modulus) {
  if ((modulus & 1) == 0) throw Error(ErrorCode::invalid_argument, "Montgomery modulus must be odd");
  std::uint64_t inv = modulus;
  for (int i = 0; i < 5; ++i) inv *= 2 - modulus * inv;
  inv_ = inv;
  one_ = static_cast<std::uint64_t>((static_cast<u128>(1) << 64) % modulus);
  r2_ = static_cast<std::uint64_t>(static_cast<u128>(one_) * one_ % modulus);
}

std::uint64_t Montgomery64::pow(std::uint64_t a, std::uint64_t e) const {
  std::uint64_t result = one_;
  while (e != 0) {
    if (e & 1) result = mul(result, a);
    a = mul(a, a);
    e >>= 1;
  }
  return result;
}

namespace {

constexpr std::array<std::uint32_t, 13> kWitnesses = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

// Bound below which the 13 witnesses above are deterministic (Sorenson-Webster).
const u128 kDeterministicBound = [] {
  u128 v = 0;
  for (char c : std::string_view("3317044064679887385961981")) v = v * 10 + static_cast<u128>(c - '0');
  return v;
}();

const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    std::vector<std::uint32_t> out;
    for (std::uint32_t n = 2; n < 1000; ++n) {
      bool prime = true;
      for (std::uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) {
          prime = false;
          break;
        }
      if (prime) out.push_back(n);
    }
    return out;
  }();
  return primes;
}

bool miller_rabin64(std::uint64_t n, const Montgomery64& mont, std::uint64_t a) {
  std::uint64_t d = n - 1;
  int s = __builtin_ctzll(d);
  d >>= s;
  std::uint64_t one = mont.one();
  std::uint64_t minus_one = mont.sub(0, one);
  std::uint64_t x = mont.pow(mont.to(a), d);
  if (x == one || x == minus_one) return true;
  for (int r = 1; r < s; ++r) {
    x = mont.mul(x, x);
    if (x == minus_one) return true;
    if (x == one) return false;
  }
  return false;
}

bool miller_rabin128(u128 n, u128 a) {
  u128 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  u128 x = powmod(a % n, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int r = 1; r < s; ++r) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
    if (x == 1) return false;
  }
  return false;
}

int jacobi(i128 a, u128 n) {
  // n odd positive
  u128 aa = a < 0 ? (n - (abs_u128(a) % n)) % n : static_cast<u128>(a) % n;
  int result = 1;
  while (aa != 0) {
    while ((aa & 1) == 0) {
      aa >>= 1;
      unsigned r = static_cast<unsigned>(n & 7);
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(aa, n);
    if ((aa & 3) == 3 && (n & 3) == 3) result = -result;
    aa %= n;
  }
  return n == 1 ? result : 0;
}

u128 half_mod(u128 x, u128 n) { return (x & 1) ? (x + n) >> 1 : x >> 1; }

u128 submod(u128 a, u128 b, u128 n) { return a >= b ? a - b : a + (n - b); }

// Strong Lucas probable-prime test with Selfridge parameters; n odd, not a square.
bool strong_lucas(u128 n) {
  i128 d_param = 5;
  for (;;) {
    int j = jacobi(d_param, n);
    if (j == -1) break;
    if (j == 0 && abs_u128(d_param) != n) return false;
    d_param = d_param > 0 ? -(d_param + 2) : -d_param + 2;
  }
  auto to_mod = [&](i128 v) -> u128 {
    return v < 0 ? (n - abs_u128(v) % n) % n : static_cast<u128>(v) % n;
  };
  const u128 dm = to_mod(d_param);
  const u128 qm = to_mod((1 - d_param) / 4);
  u128 d = n + 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  int top = 127;
  while (((d >> top) & 1) == 0) --top;
  u128 u = 1, v = 1, qk = qm;  // P = 1
  for (int bit = top - 1; bit >= 0; --bit) {
    u = mulmod(u, v, n);
    v = submod(mulmod(v, v, n), addmod(qk, qk, n), n);
    qk = mulmod(qk, qk, n);
    if ((d >> bit) & 1) {
      u128 nu = half_mod(addmod(u, v, n), n);
      u128 nv = half_mod(addmod(mulmod(dm, u, n), v, n), n);
      u = nu;
      v = nv;
      qk = mulmod(qk, qm, n);
    }
  }
  if (u == 0 || v == 0) return true;
  for (int r = 1; r < s; ++r) {
    v = submod(mulmod(v, v, n), addmod(qk, qk, n), n);
    qk = mulmod(qk, qk, n);
    if (v == 0) return true;
  }
  return false;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint32_t p : kWitnesses) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  if (n < 43 * 43) return true;
  Montgomery64 mont(n);
  for (std::uint32_t a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (!miller_rabin64(n, mont, a)) return false;
  }
  return true;
}

bool is_prime(u128 n) {
  if (n <= UINT64_MAX) return is_prime(static_cast<std::uint64_t>(n));
  for (std::uint32_t p : small_primes())
    if (n % p == 0) return false;
  if (n < kDeterministicBound) {
    for (std::uint32_t a : kWitnesses)
      if (!miller_rabin128(n, a)) return false;
    return true;
  }
  // Baillie-PSW
  if (!miller_rabin128(n, 2)) return false;
  u128 root = isqrt(n);
  if (root * root == n) return false;
  return strong_lucas(n);
}

namespace {

std::uint64_t brent64(std::uint64_t n, SplitMix64& rng) {
  if ((n & 1) == 0) return 2;
  Montgomery64 mont(n);
  for (;;) {
    const std::uint64_t c = mont.to(1 + rng.below(n - 1));
    std::uint64_t y = mont.to(rng.below(n));
    std::uint64_t x = y, ys = y, q = mont.one(), g = 1;
    const std::uint64_t m = 128;
    auto f = [&](std::uint64_t v) { return mont.add(mont.mul(v, v), c); };
    for (std::uint64_t r = 1; g == 1; r <<= 1) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      for (std::uint64_t k = 0; k < r && g == 1; k += m) {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mont.mul(q, x > y ? x - y : y - x);
        }
        g = static_cast<std::uint64_t>(gcd(q, n));
      }
    }
    if (g == n) {
      do {
        ys = f(ys);
        g = static_cast<std::uint64_t>(gcd(x > ys ? x - ys : ys - x, n));
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

u128 brent128(u128 n, SplitMix64& rng) {
  if ((n & 1) == 0) return 2;
  auto random_below = [&](u128 bound) {
    u128 v = (static_cast<u128>(rng.next()) << 64) | rng.next();
    return v % bound;
  };
  for (;;) {
    const u128 c = 1 + random_below(n - 1);
    u128 y = random_below(n);
    u128 x = y, ys = y, q = 1, g = 1;
    const u128 m = 64;
    auto f = [&](u128 v) { return addmod(mulmod(v, v, n), c, n); };
    for (u128 r = 1; g == 1; r <<= 1) {
      x = y;
      for (u128 i = 0; i < r; ++i) y = f(y);
      for (u128 k = 0; k < r && g == 1; k += m) {
        ys = y;
        for (u128 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = gcd(q, n);
      }
    }
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

}  // namespace

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::invalid_argument, "SplitMix64::below: bound must be positive");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t v;
  do {
    v = next();
  } while (v >= limit);
  return v % bound;
}

u128 find_factor(u128 n, std::uint64_t seed) {
  if (n < 4 || is_prime(n)) throw Error(ErrorCode::invalid_argument, "find_factor: argument is not composite");
  SplitMix64 rng(seed ^ static_cast<std::uint64_t>(n) ^ static_cast<std::uint64_t>(n >> 64));
  if (n <= UINT64_MAX) return brent64(static_cast<std::uint64_t>(n), rng);
  return brent128(n, rng);
}

std::vector<PrimePower> factorize(u128 n) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "factorize: zero has no factorization");
  std::vector<PrimePower> out;
  for (std::uint32_t p : small_primes()) {
    if (static_cast<u128>(p) * p > n) break;
    if (n % p == 0) {
      int nu = 0;
      while (n % p == 0) {
        n /= p;
        ++nu;
      }
      out.push_back({p, nu});
    }
  }
  std::vector<u128> pending;
  if (n > 1) pending.push_back(n);
  std::vector<u128> primes;
  std::uint64_t seed = 1;
  while (!pending.empty()) {
    u128 m = pending.back();
    pending.pop_back();
    if (m == 1) continue;
    if (is_prime(m)) {
      primes.push_back(m);
      continue;
    }
    u128 root = isqrt(m);
    if (root * root == m) {
      pending.push_back(root);
      pending.push_back(root);
      continue;
    }
    u128 d = find_factor(m, seed++);
    pending.push_back(d);
    pending.push_back(m / d);
  }
  std::sort(primes.begin(), primes.end());
  for (std::size_t i = 0; i < primes.size();) {
    std::size_t j = i;
    while (j < primes.size() && primes[j] == primes[i]) ++j;
    out.push_back({primes[i], static_cast<int>(j - i)});
    i = j;
  }
  std::sort(out.begin(), out.end(), [](const PrimePower& a, const PrimePower& b) { return a.p < b.p; });
  return out;
}

u128 multiply_back(std::span<const PrimePower> factors) {
  u128 acc = 1;
  for (const auto& f : factors) {
    for (int i = 0; i < f.nu; ++i) {
      if (acc > (~static_cast<u128>(0)) / f.p) throw Error(ErrorCode::overflow, "multiply_back exceeds 128 bits");
      acc *= f.p;
    }
  }
  return acc;
}

}  // namespace concentra
