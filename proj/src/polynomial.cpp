#include "concentra/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <utility>

#include "concentra/error.hpp"
#include "modpoly.hpp"

namespace concentra {

namespace {

constexpr int kMaxDegree = 64;

std::vector<BigInt> to_big(std::span<const std::int64_t> c) {
  return std::vector<BigInt>(c.begin(), c.end());
}

std::int64_t abs64(std::int64_t v) { return v < 0 ? -v : v; }

// Sylvester determinant by Bareiss elimination; coefficients low-to-high.
BigInt sylvester_resultant(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
  const std::size_t m = a.size() - 1;
  const std::size_t n = b.size() - 1;
  const std::size_t size = m + n;
  if (size == 0) return 1;
  std::vector<std::vector<BigInt>> mat(size, std::vector<BigInt>(size, 0));
  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t i = 0; i <= m; ++i) mat[row][row + i] = a[m - i];
  }
  for (std::size_t row = 0; row < m; ++row) {
    for (std::size_t i = 0; i <= n; ++i) mat[n + row][row + i] = b[n - i];
  }
  int sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < size; ++k) {
    if (mat[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < size && mat[swap][k] == 0) ++swap;
      if (swap == size) return 0;
      std::swap(mat[k], mat[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < size; ++i) {
      for (std::size_t j = k + 1; j < size; ++j) {
        mat[i][j] = (mat[i][j] * mat[k][k] - mat[i][k] * mat[k][j]) / prev;
      }
      mat[i][k] = 0;
    }
    prev = mat[k][k];
  }
  BigInt det = mat[size - 1][size - 1];
  return sign < 0 ? BigInt(-det) : det;
}

std::vector<std::int64_t> divisors(std::int64_t v) {
  std::vector<std::int64_t> out{1};
  for (const auto& [p, nu] : factorize(static_cast<u128>(abs64(v)))) {
    const std::size_t base = out.size();
    std::int64_t pk = 1;
    for (int e = 1; e <= nu; ++e) {
      pk *= static_cast<std::int64_t>(p);
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// sum c_i num^i den^(g-i)
BigInt homogeneous_eval(std::span<const std::int64_t> c, std::int64_t num, std::int64_t den) {
  BigInt acc = 0;
  const std::size_t g = c.size() - 1;
  for (std::size_t i = 0; i <= g; ++i) {
    acc += BigInt(c[i]) * boost::multiprecision::pow(BigInt(num), static_cast<unsigned>(i)) *
           boost::multiprecision::pow(BigInt(den), static_cast<unsigned>(g - i));
  }
  return acc;
}

bool has_rational_root(std::span<const std::int64_t> c) {
  if (c[0] == 0) return true;
  const auto nums = divisors(c[0]);
  const auto dens = divisors(c.back());
  for (std::int64_t den : dens) {
    for (std::int64_t num : nums) {
      if (std::gcd(num, den) != 1) continue;
      if (homogeneous_eval(c, num, den) == 0 || homogeneous_eval(c, -num, den) == 0) return true;
    }
  }
  return false;
}

bool is_square(const BigInt& v) {
  if (v < 0) return false;
  BigInt r = boost::multiprecision::sqrt(v);
  return r * r == v;
}

// Primitive quartic with positive leading coefficient: does it split into two
// integer quadratics?
bool has_quadratic_factor(std::span<const std::int64_t> c) {
  const BigInt b0 = c[0], b1 = c[1], b2 = c[2], b3 = c[3];
  for (std::int64_t a : divisors(c[4])) {
    const BigInt A = a;
    const BigInt D = c[4] / a;
    for (std::int64_t cd : divisors(c[0])) {
      for (int s : {1, -1}) {
        const BigInt C = BigInt(cd) * s;
        const BigInt F = b0 / C;
        // (A x^2 + B x + C)(D x^2 + E x + F); eliminate E via the x^3 equation.
        // D B^2 - b3 B + (A b2 - A^2 F - A C D) = 0
        const BigInt qa = D, qb = -b3, qc = A * b2 - A * A * F - A * C * D;
        const BigInt disc = qb * qb - 4 * qa * qc;
        if (!is_square(disc)) continue;
        const BigInt root = boost::multiprecision::sqrt(disc);
        for (const BigInt& numer : {BigInt(-qb + root), BigInt(-qb - root)}) {
          if (numer % (2 * qa) != 0) continue;
          const BigInt B = numer / (2 * qa);
          const BigInt e_num = b3 - B * D;
          if (e_num % A != 0) continue;
          const BigInt E = e_num / A;
          if (A * F + B * E + C * D == b2 && B * F + C * E == b1) return true;
        }
      }
    }
  }
  return false;
}

detail::ModPoly reduce_poly(std::span<const std::int64_t> c, std::uint64_t p) {
  detail::ModPoly out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = reduce_signed(c[i], p);
  detail::trim(out);
  return out;
}

void require_prime(std::uint64_t p) {
  if (!is_prime(p)) throw Error(ErrorCode::composite_modulus, std::to_string(p) + " is not prime");
  if (p >= (std::uint64_t{1} << 63)) throw Error(ErrorCode::range, "prime modulus must be below 2^63");
}

std::vector<std::uint64_t> scan_roots(std::span<const std::int64_t> c, std::uint64_t p) {
  const detail::ModPoly f = reduce_poly(c, p);
  std::vector<std::uint64_t> roots;
  for (std::uint64_t r = 0; r < p; ++r) {
    if (detail::eval(f, r, p) == 0) roots.push_back(r);
  }
  return roots;
}

std::vector<std::uint64_t> split_roots(std::span<const std::int64_t> c, std::uint64_t p, std::uint64_t seed) {
  const detail::ModPoly f = reduce_poly(c, p);
  if (f.empty()) throw Error(ErrorCode::capacity, "polynomial vanishes identically mod " + std::to_string(p));
  std::vector<std::uint64_t> roots;
  if (p == 2) {
    for (std::uint64_t r = 0; r < 2; ++r)
      if (detail::eval(f, r, p) == 0) roots.push_back(r);
    return roots;
  }
  const detail::ModPoly h = detail::linear_part(f, p);
  SplitMix64 rng(seed);
  detail::split_linear(h, p, rng, roots);
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<std::uint64_t> roots_of(std::span<const std::int64_t> c, std::uint64_t p, std::uint64_t seed) {
  require_prime(p);
  if (p < kBruteForceRootThreshold) return scan_roots(c, p);
  return split_roots(c, p, seed);
}

std::uint64_t count_roots_of(std::span<const std::int64_t> c, std::uint64_t p) {
  require_prime(p);
  if (p < kBruteForceRootThreshold) return scan_roots(c, p).size();
  const detail::ModPoly f = reduce_poly(c, p);
  if (f.empty()) return p;
  return static_cast<std::uint64_t>(std::max(0, detail::degree(detail::linear_part(f, p))));
}

std::vector<std::int64_t> derivative(std::span<const std::int64_t> c) {
  std::vector<std::int64_t> d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<std::int64_t>(i));
  return d;
}

std::uint64_t eval_mod_coeffs(std::span<const std::int64_t> c, std::uint64_t n, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t acc = 0;
  const std::uint64_t x = n % m;
  for (std::size_t i = c.size(); i-- > 0;) {
    acc = static_cast<std::uint64_t>((static_cast<u128>(mulmod(acc, x, m)) + reduce_signed(c[i], m)) % m);
  }
  return acc;
}

constexpr std::size_t kMaxListedRoots = std::size_t{1} << 26;

RootsModPrimePower lift_coeffs(std::span<const std::int64_t> c, std::uint64_t p, int nu, std::uint64_t seed) {
  if (nu < 1) throw Error(ErrorCode::invalid_argument, "exponent must be at least 1");
  RootsModPrimePower out{p, nu, roots_of(c, p, seed)};
  const auto dc = derivative(c);
  std::uint64_t pk = p;
  for (int k = 1; k < nu; ++k) {
    if (pk > UINT64_MAX / p) throw Error(ErrorCode::overflow, "p^nu exceeds 64 bits");
    const std::uint64_t next_mod = pk * p;
    std::vector<std::uint64_t> next;
    for (std::uint64_t r : out.roots) {
      const std::uint64_t value = eval_mod_coeffs(c, r, next_mod);
      const std::uint64_t slope = eval_mod_coeffs(dc, r, p);
      if (slope != 0) {
        // value is divisible by p^k; solve value/p^k + t*slope = 0 mod p
        const std::uint64_t q = (value / pk) % p;
        const std::uint64_t t = mulmod((p - q) % p, invmod(slope, p), p);
        next.push_back(r + t * pk);
      } else if (value == 0) {
        for (std::uint64_t t = 0; t < p; ++t) next.push_back(r + t * pk);
        if (next.size() > kMaxListedRoots) throw Error(ErrorCode::capacity, "too many roots to list");
      }
    }
    std::sort(next.begin(), next.end());
    out.roots = std::move(next);
    pk = next_mod;
  }
  return out;
}

// rho(p^nu) without listing when every root mod p is simple.
u128 rho_prime_power(std::span<const std::int64_t> c, u128 p, int nu) {
  if (p >= (u128{1} << 63)) throw Error(ErrorCode::range, "prime factor exceeds 2^63");
  const auto p64 = static_cast<std::uint64_t>(p);
  if (nu == 1) return count_roots_of(c, p64);
  const auto roots = roots_of(c, p64, kDefaultRootSeed);
  const auto dc = derivative(c);
  const bool all_simple = std::all_of(roots.begin(), roots.end(),
                                      [&](std::uint64_t r) { return eval_mod_coeffs(dc, r, p64) != 0; });
  const bool zero_poly = reduce_poly(c, p64).empty();
  if (all_simple && !zero_poly) return roots.size();
  return lift_coeffs(c, p64, nu, kDefaultRootSeed).roots.size();
}

}  // namespace

IntPolynomial::IntPolynomial(std::vector<std::int64_t> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  if (coeffs_.size() < 2) throw Error(ErrorCode::invalid_argument, "polynomial must have degree at least 1");
  if (degree() > kMaxDegree) throw Error(ErrorCode::invalid_argument, "polynomial degree exceeds 64");
  for (std::int64_t c : coeffs_) {
    if (c >= kCoeffLimit || c <= -kCoeffLimit) throw Error(ErrorCode::range, "coefficient magnitude must be below 2^31");
  }
}

IntPolynomial IntPolynomial::parse(std::string_view text) {
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto read_uint = [&](i128 limit) -> i128 {
    const std::size_t start = pos;
    i128 v = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      const int digit = text[pos] - '0';
      if (v > (limit - digit) / 10) throw Error(ErrorCode::range, "number too large in polynomial: " + std::string(text));
      v = v * 10 + digit;
      ++pos;
    }
    if (pos == start) throw Error(ErrorCode::parse, "expected digits in polynomial: " + std::string(text));
    return v;
  };
  std::vector<i128> acc(kMaxDegree + 1, 0);
  bool first = true;
  skip_ws();
  if (pos == text.size()) throw Error(ErrorCode::parse, "empty polynomial");
  while (pos < text.size()) {
    int sign = 1;
    skip_ws();
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      sign = text[pos] == '-' ? -1 : 1;
      ++pos;
      skip_ws();
    } else if (!first) {
      throw Error(ErrorCode::parse, "expected '+' or '-' in polynomial: " + std::string(text));
    }
    first = false;
    i128 coef = 1;
    bool have_coef = false;
    if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      coef = read_uint(kI128Max / 4);
      have_coef = true;
      skip_ws();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        skip_ws();
        if (pos >= text.size() || (text[pos] != 'x' && text[pos] != 'X'))
          throw Error(ErrorCode::parse, "expected x after '*': " + std::string(text));
      }
    }
    int exponent = 0;
    if (pos < text.size() && (text[pos] == 'x' || text[pos] == 'X')) {
      ++pos;
      exponent = 1;
      skip_ws();
      if (pos < text.size() && text[pos] == '^') {
        ++pos;
        skip_ws();
        exponent = static_cast<int>(read_uint(kMaxDegree));
      }
    } else if (!have_coef) {
      throw Error(ErrorCode::parse, "malformed term in polynomial: " + std::string(text));
    }
    acc[static_cast<std::size_t>(exponent)] += sign * coef;
    const i128 limit = static_cast<i128>(kCoeffLimit) << 60;
    if (acc[static_cast<std::size_t>(exponent)] >= limit || acc[static_cast<std::size_t>(exponent)] <= -limit)
      throw Error(ErrorCode::range, "coefficient magnitude must be below 2^31");
    skip_ws();
  }
  std::vector<std::int64_t> coeffs;
  for (i128 v : acc) {
    if (v >= kCoeffLimit || v <= -kCoeffLimit) throw Error(ErrorCode::range, "coefficient magnitude must be below 2^31");
    coeffs.push_back(static_cast<std::int64_t>(v));
  }
  return IntPolynomial(std::move(coeffs));
}

std::int64_t IntPolynomial::norm() const {
  std::int64_t m = 0;
  for (std::int64_t c : coeffs_) m = std::max(m, abs64(c));
  return m;
}

std::int64_t IntPolynomial::content() const {
  std::int64_t g = 0;
  for (std::int64_t c : coeffs_) g = std::gcd(g, c);
  return abs64(g);
}

std::string IntPolynomial::to_string() const {
  std::string out;
  for (int i = degree(); i >= 0; --i) {
    const std::int64_t c = coeffs_[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    const std::int64_t mag = abs64(c);
    if (out.empty()) {
      if (c < 0) out += '-';
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (i == 0) {
      out += std::to_string(mag);
      continue;
    }
    if (mag != 1) out += std::to_string(mag) + "*";
    out += 'x';
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}

i128 eval(const IntPolynomial& q, i128 n) {
  i128 acc = 0;
  for (int i = q.degree(); i >= 0; --i) {
    acc = checked_add(checked_mul(acc, n, "polynomial evaluation"), q.coeff(i), "polynomial evaluation");
  }
  return acc;
}

std::uint64_t eval_mod(const IntPolynomial& q, std::uint64_t n, std::uint64_t m) {
  if (m == 0) throw Error(ErrorCode::invalid_argument, "modulus must be positive");
  return eval_mod_coeffs(q.coeffs(), n, m);
}

IntPolynomial multiply(const IntPolynomial& a, const IntPolynomial& b) {
  std::vector<i128> acc(static_cast<std::size_t>(a.degree() + b.degree() + 1), 0);
  for (int i = 0; i <= a.degree(); ++i)
    for (int j = 0; j <= b.degree(); ++j)
      acc[static_cast<std::size_t>(i + j)] += static_cast<i128>(a.coeff(i)) * b.coeff(j);
  std::vector<std::int64_t> out;
  for (i128 v : acc) {
    if (v >= IntPolynomial::kCoeffLimit || v <= -IntPolynomial::kCoeffLimit)
      throw Error(ErrorCode::overflow, "product coefficient magnitude exceeds 2^31");
    out.push_back(static_cast<std::int64_t>(v));
  }
  return IntPolynomial(std::move(out));
}

BigInt resultant(const IntPolynomial& a, const IntPolynomial& b) {
  return sylvester_resultant(to_big(a.coeffs()), to_big(b.coeffs()));
}

BigInt discriminant(const IntPolynomial& q) {
  const int g = q.degree();
  if (g == 1) return 1;
  const auto c = to_big(q.coeffs());
  std::vector<BigInt> d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<long long>(i));
  BigInt res = sylvester_resultant(c, d) / BigInt(q.lead());
  if ((g * (g - 1) / 2) % 2 != 0) res = -res;
  return res;
}

IrreducibilityVerdict check_irreducible(const IntPolynomial& q) {
  const int g = q.degree();
  if (g == 1) return IrreducibilityVerdict::irreducible;
  std::vector<std::int64_t> c(q.coeffs().begin(), q.coeffs().end());
  const std::int64_t content = q.content();
  const std::int64_t sign = q.lead() < 0 ? -1 : 1;
  for (auto& v : c) v = v / content * sign;
  if (has_rational_root(c)) return IrreducibilityVerdict::reducible;
  if (g <= 3) return IrreducibilityVerdict::irreducible;
  if (g == 4) {
    return has_quadratic_factor(c) ? IrreducibilityVerdict::reducible : IrreducibilityVerdict::irreducible;
  }
  for (std::uint64_t p = 2; p <= 100; ++p) {
    if (!is_prime(p) || c.back() % static_cast<std::int64_t>(p) == 0) continue;
    if (detail::is_irreducible(reduce_poly(c, p), p)) return IrreducibilityVerdict::irreducible;
  }
  return IrreducibilityVerdict::unverified;
}

BigInt PolynomialFamily::beta_d() const {
  BigInt v = BigInt(lead()) * disc_;
  return v < 0 ? BigInt(-v) : v;
}

std::string PolynomialFamily::to_string() const {
  std::string out;
  for (std::size_t j = 0; j < members_.size(); ++j) {
    if (j) out += ';';
    out += members_[j].to_string();
  }
  return out;
}

PolynomialFamily validate_family(std::vector<IntPolynomial> members) {
  if (members.empty()) throw Error(ErrorCode::invalid_argument, "family must have at least one member");
  for (std::size_t j = 0; j < members.size(); ++j) {
    const auto verdict = check_irreducible(members[j]);
    if (verdict == IrreducibilityVerdict::reducible)
      throw Error(ErrorCode::not_irreducible, "member " + std::to_string(j + 1) + " (" + members[j].to_string() +
                                                  ") is reducible over the rationals");
    if (verdict == IrreducibilityVerdict::unverified)
      throw Error(ErrorCode::unverified_irreducibility,
                  "member " + std::to_string(j + 1) + " (" + members[j].to_string() +
                      ") is not irreducible modulo any prime up to 100");
  }
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      if (resultant(members[i], members[j]) == 0)
        throw Error(ErrorCode::not_pairwise_coprime, "members " + std::to_string(i + 1) + " and " +
                                                         std::to_string(j + 1) + " share a common factor");
    }
  }
  for (std::size_t j = 0; j < members.size(); ++j) {
    const auto& q = members[j];
    if (q.content() != 1)
      throw Error(ErrorCode::fixed_divisor, "member " + std::to_string(j + 1) + " (" + q.to_string() +
                                                ") has content " + std::to_string(q.content()));
    for (std::uint64_t p = 2; p <= static_cast<std::uint64_t>(q.degree()); ++p) {
      if (is_prime(p) && count_roots_mod_p(q, p) == p)
        throw Error(ErrorCode::fixed_divisor, "member " + std::to_string(j + 1) + " (" + q.to_string() +
                                                  ") is always divisible by " + std::to_string(p));
    }
  }
  IntPolynomial product = members.front();
  for (std::size_t j = 1; j < members.size(); ++j) product = multiply(product, members[j]);
  PolynomialFamily family(std::move(members), std::move(product));
  family.disc_ = discriminant(family.product_);
  if (family.disc_ == 0) throw Error(ErrorCode::zero_discriminant, "discriminant of the product vanishes");
  for (const auto& q : family.members_) family.member_discs_.push_back(discriminant(q));
  for (std::uint64_t p = 2; p <= static_cast<std::uint64_t>(family.degree()); ++p) {
    if (is_prime(p) && count_roots_mod_p(family.product_, p) == p)
      family.warnings_.push_back("product is always divisible by " + std::to_string(p) +
                                 "; phi_0 vanishes on multiples of " + std::to_string(p));
  }
  return family;
}

PolynomialFamily parse_family(std::string_view text) {
  std::vector<IntPolynomial> members;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(';', start);
    if (end == std::string_view::npos) end = text.size();
    members.push_back(IntPolynomial::parse(text.substr(start, end - start)));
    start = end + 1;
  }
  return validate_family(std::move(members));
}

std::vector<std::uint64_t> roots_mod_p(const IntPolynomial& q, std::uint64_t p, std::uint64_t seed) {
  return roots_of(q.coeffs(), p, seed);
}

std::vector<std::uint64_t> roots_mod_p_by_splitting(const IntPolynomial& q, std::uint64_t p, std::uint64_t seed) {
  require_prime(p);
  return split_roots(q.coeffs(), p, seed);
}

std::uint64_t count_roots_mod_p(const IntPolynomial& q, std::uint64_t p) { return count_roots_of(q.coeffs(), p); }

RootsModPrimePower lift_roots(const IntPolynomial& q, std::uint64_t p, int nu, std::uint64_t seed) {
  return lift_coeffs(q.coeffs(), p, nu, seed);
}

u128 rho(const IntPolynomial& q, u128 m) {
  if (m == 0) throw Error(ErrorCode::invalid_argument, "rho requires m >= 1");
  u128 result = 1;
  for (const auto& [p, nu] : factorize(m)) {
    result *= rho_prime_power(q.coeffs(), p, nu);
    if (result == 0) break;
  }
  return result;
}

Rational phi(const IntPolynomial& q, u128 n) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "phi requires n >= 1");
  u128 value = n;
  for (const auto& [p, nu] : factorize(n)) {
    (void)nu;
    if (p >= (u128{1} << 63)) throw Error(ErrorCode::range, "prime factor exceeds 2^63");
    const u128 r = count_roots_mod_p(q, static_cast<std::uint64_t>(p));
    value = value / p * (p - r);
  }
  return Rational{static_cast<i128>(value), 1};
}

RootBoundCheck check_root_bounds(int degree, const BigInt& disc, std::uint64_t p, int nu, u128 count_nu,
                                 u128 count_p) {
  using boost::multiprecision::pow;
  RootBoundCheck out;
  const BigInt count = BigInt(to_string(count_nu));
  const BigInt g = degree;
  const BigInt pb = p;
  const BigInt p_nu1 = pow(pb, static_cast<unsigned>(nu - 1));
  out.bound1 = count <= g * p_nu1 && count <= p_nu1 * BigInt(to_string(count_p)) &&
               pow(count, static_cast<unsigned>(degree)) <=
                   pow(g, static_cast<unsigned>(degree)) * pow(pb, static_cast<unsigned>(nu * (degree - 1)));
  out.bound2_applies = disc % pb != 0;
  if (out.bound2_applies) out.bound2 = count <= g && count <= pb - 1;
  return out;
}

}  // namespace concentra
