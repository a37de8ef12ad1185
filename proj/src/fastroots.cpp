#include "fastroots.hpp"

#include <algorithm>

namespace concentra::detail {

std::uint64_t sqrt_mod(std::uint64_t a, std::uint64_t p) {
  if (a == 0) return 0;
  std::uint64_t q = p - 1;
  int s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  std::uint64_t z = 2;
  while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
  std::uint64_t m = static_cast<std::uint64_t>(s);
  std::uint64_t c = powmod(z, q, p);
  std::uint64_t t = powmod(a, q, p);
  std::uint64_t r = powmod(a, (q + 1) / 2, p);
  while (t != 1) {
    std::uint64_t i = 0, t2 = t;
    while (t2 != 1) {
      t2 = mulmod(t2, t2, p);
      ++i;
    }
    std::uint64_t b = c;
    for (std::uint64_t k = 0; k + 1 < m - i; ++k) b = mulmod(b, b, p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }
  return r;
}

std::vector<std::uint64_t> fast_roots(const IntPolynomial& q, std::uint64_t p) {
  std::vector<std::uint64_t> roots;
  if (q.degree() == 1 || (q.degree() == 2 && reduce_signed(q.coeff(2), p) == 0)) {
    const std::uint64_t a = reduce_signed(q.coeff(1), p);
    const std::uint64_t c = reduce_signed(q.coeff(0), p);
    if (a != 0) roots.push_back(mulmod((p - c) % p, invmod(a, p), p));
    else if (c == 0) return roots_mod_p(q, p);
    return roots;
  }
  if (q.degree() != 2 || p == 2) return roots_mod_p(q, p);
  const std::uint64_t a = reduce_signed(q.coeff(2), p);
  const std::uint64_t b = reduce_signed(q.coeff(1), p);
  const std::uint64_t c = reduce_signed(q.coeff(0), p);
  const std::uint64_t disc = (mulmod(b, b, p) + p - mulmod(4 % p, mulmod(a, c, p), p)) % p;
  const std::uint64_t inv2a = invmod(mulmod(2, a, p), p);
  const std::uint64_t neg_b = (p - b) % p;
  if (disc == 0) return {mulmod(neg_b, inv2a, p)};
  if (powmod(disc, (p - 1) / 2, p) != 1) return roots;
  const std::uint64_t r = sqrt_mod(disc, p);
  roots.push_back(mulmod((neg_b + r) % p, inv2a, p));
  roots.push_back(mulmod((neg_b + p - r) % p, inv2a, p));
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::uint64_t fast_count(const IntPolynomial& q, std::uint64_t p) {
  if (q.degree() <= 2) return fast_roots(q, p).size();
  return count_roots_mod_p(q, p);
}

}  // namespace concentra::detail
