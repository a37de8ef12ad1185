#include "modpoly.hpp"

#include <utility>

#include "concentra/error.hpp"

namespace concentra::detail {

void trim(ModPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

ModPoly make_monic(ModPoly a, std::uint64_t p) {
  trim(a);
  if (a.empty() || a.back() == 1) return a;
  const std::uint64_t inv = invmod(a.back(), p);
  for (auto& c : a) c = mulmod(c, inv, p);
  return a;
}

ModPoly sub(const ModPoly& a, const ModPoly& b, std::uint64_t p) {
  ModPoly out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint64_t x = i < a.size() ? a[i] : 0;
    std::uint64_t y = i < b.size() ? b[i] : 0;
    out[i] = x >= y ? x - y : x + (p - y);
  }
  trim(out);
  return out;
}

ModPoly mul(const ModPoly& a, const ModPoly& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  std::vector<u128> acc(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      acc[i + j] = (acc[i + j] + static_cast<u128>(a[i]) * b[j]) % p;
    }
  }
  ModPoly out(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) out[i] = static_cast<std::uint64_t>(acc[i]);
  trim(out);
  return out;
}

void divrem(const ModPoly& a, const ModPoly& b, std::uint64_t p, ModPoly& quotient, ModPoly& remainder) {
  if (b.empty()) throw Error(ErrorCode::invalid_argument, "polynomial division by zero");
  remainder = a;
  trim(remainder);
  const int db = degree(b);
  if (degree(remainder) < db) {
    quotient.clear();
    return;
  }
  quotient.assign(static_cast<std::size_t>(degree(remainder) - db + 1), 0);
  const std::uint64_t lead_inv = invmod(b.back(), p);
  for (int i = degree(remainder); i >= db; --i) {
    const std::uint64_t c = mulmod(remainder[static_cast<std::size_t>(i)], lead_inv, p);
    quotient[static_cast<std::size_t>(i - db)] = c;
    if (c == 0) continue;
    for (int j = 0; j <= db; ++j) {
      auto& r = remainder[static_cast<std::size_t>(i - db + j)];
      const std::uint64_t t = mulmod(c, b[static_cast<std::size_t>(j)], p);
      r = r >= t ? r - t : r + (p - t);
    }
  }
  trim(remainder);
  trim(quotient);
}

ModPoly rem(const ModPoly& a, const ModPoly& b, std::uint64_t p) {
  ModPoly q, r;
  divrem(a, b, p, q, r);
  return r;
}

ModPoly gcd(ModPoly a, ModPoly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    ModPoly r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(std::move(a), p);
}

namespace {

// a*b mod f for f monic, deg a, deg b < deg f.
ModPoly mulmod_poly(const ModPoly& a, const ModPoly& b, const ModPoly& f, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  const std::size_t d = f.size() - 1;
  std::vector<u128> acc(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) acc[i + j] += static_cast<u128>(a[i]) * b[j] % p;
  }
  // acc entries stay far below 2^128 for the degrees used here; reduce top-down.
  for (std::size_t i = acc.size(); i-- > d;) {
    const std::uint64_t c = static_cast<std::uint64_t>(acc[i] % p);
    if (c == 0) continue;
    const std::uint64_t neg = p - c;
    for (std::size_t j = 0; j < d; ++j) acc[i - d + j] += static_cast<u128>(neg) * f[j] % p;
  }
  ModPoly out(std::min(acc.size(), d));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<std::uint64_t>(acc[i] % p);
  trim(out);
  return out;
}

// x*a mod f for f monic, deg a < deg f.
ModPoly mulx_mod(const ModPoly& a, const ModPoly& f, std::uint64_t p) {
  const std::size_t d = f.size() - 1;
  ModPoly out(d, 0);
  std::uint64_t top = a.size() == d ? a[d - 1] : 0;
  for (std::size_t i = d; i-- > 1;) out[i] = i - 1 < a.size() ? a[i - 1] : 0;
  out[0] = 0;
  if (top != 0) {
    for (std::size_t j = 0; j < d; ++j) {
      const std::uint64_t t = mulmod(top, f[j], p);
      out[j] = out[j] >= t ? out[j] - t : out[j] + (p - t);
    }
  }
  trim(out);
  return out;
}

}  // namespace

ModPoly powmod(const ModPoly& base, std::uint64_t e, const ModPoly& f, std::uint64_t p) {
  ModPoly b = rem(base, f, p);
  ModPoly result{1};
  if (f.size() == 1) return {};
  while (e != 0) {
    if (e & 1) result = mulmod_poly(result, b, f, p);
    e >>= 1;
    if (e != 0) b = mulmod_poly(b, b, f, p);
  }
  return result;
}

ModPoly x_powmod(std::uint64_t e, const ModPoly& f, std::uint64_t p) {
  if (f.size() == 1) return {};
  ModPoly result{1};
  if (e == 0) return rem(result, f, p);
  int top = 63 - __builtin_clzll(e);
  for (int bit = top; bit >= 0; --bit) {
    result = mulmod_poly(result, result, f, p);
    if ((e >> bit) & 1) result = mulx_mod(result, f, p);
  }
  return result;
}

std::uint64_t eval(const ModPoly& a, std::uint64_t x, std::uint64_t p) {
  std::uint64_t acc = 0;
  for (std::size_t i = a.size(); i-- > 0;) {
    acc = mulmod(acc, x, p) + a[i];
    if (acc >= p) acc -= p;
  }
  return acc;
}

ModPoly linear_part(const ModPoly& f, std::uint64_t p) {
  ModPoly monic = make_monic(f, p);
  if (degree(monic) < 1) return monic;
  ModPoly xp = x_powmod(p, monic, p);
  ModPoly diff = sub(xp, ModPoly{0, 1}, p);
  return gcd(monic, diff, p);
}

void split_linear(const ModPoly& h, std::uint64_t p, SplitMix64& rng, std::vector<std::uint64_t>& roots) {
  const int d = degree(h);
  if (d <= 0) return;
  if (d == 1) {
    roots.push_back(h[0] == 0 ? 0 : p - h[0]);
    return;
  }
  const std::uint64_t half = (p - 1) / 2;
  for (;;) {
    const std::uint64_t a = rng.below(p);
    ModPoly t = powmod(ModPoly{a, 1}, half, h, p);
    t = sub(t, ModPoly{1}, p);
    ModPoly g = gcd(h, t, p);
    const int dg = degree(g);
    if (dg > 0 && dg < d) {
      ModPoly q, r;
      divrem(h, g, p, q, r);
      split_linear(g, p, rng, roots);
      split_linear(make_monic(q, p), p, rng, roots);
      return;
    }
  }
}

bool is_irreducible(const ModPoly& f, std::uint64_t p) {
  ModPoly monic = make_monic(f, p);
  const int n = degree(monic);
  if (n < 1) return false;
  if (n == 1) return true;
  std::vector<int> prime_divisors;
  for (int q = 2, m = n; q <= m; ++q) {
    if (m % q == 0) {
      prime_divisors.push_back(q);
      while (m % q == 0) m /= q;
    }
  }
  // frob[k] = X^(p^k) mod f
  std::vector<ModPoly> frob{ModPoly{0, 1}};
  for (int k = 1; k <= n; ++k) frob.push_back(powmod(frob.back(), p, monic, p));
  const ModPoly x{0, 1};
  if (sub(frob[static_cast<std::size_t>(n)], rem(x, monic, p), p).size() != 0) return false;
  for (int q : prime_divisors) {
    ModPoly g = gcd(monic, sub(frob[static_cast<std::size_t>(n / q)], x, p), p);
    if (degree(g) != 0) return false;
  }
  return true;
}

}  // namespace concentra::detail
