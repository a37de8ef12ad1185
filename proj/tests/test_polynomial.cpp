#include "doctest.h"

#include <vector>

#include "concentra/error.hpp"
#include "concentra/polynomial.hpp"
#include "oracles.hpp"

using namespace concentra;

namespace {

IntPolynomial P(const char* s) { return IntPolynomial::parse(s); }

std::vector<std::int64_t> coeffs_of(const IntPolynomial& q) { return {q.coeffs().begin(), q.coeffs().end()}; }

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::io;
}

}  // namespace

TEST_CASE("parse and print") {
  CHECK(P("x^2+1").to_string() == "x^2 + 1");
  CHECK(P("-3*x^2 + 7x - 1").to_string() == "-3*x^2 + 7*x - 1");
  CHECK(P("X^3 - 2").to_string() == "x^3 - 2");
  CHECK(P("x + x + 1") == P("2x+1"));
  CHECK(P(P("5x^4 - x^3 + 2").to_string().c_str()) == P("5x^4 - x^3 + 2"));
  CHECK(code_of([] { P("x^"); }) == ErrorCode::parse);
  CHECK(code_of([] { P("y+1"); }) == ErrorCode::parse);
  CHECK(code_of([] { P("7"); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { P("2147483648x + 1"); }) == ErrorCode::range);
}

TEST_CASE("eval") {
  CHECK(eval(P("x^2+1"), 3) == 10);
  CHECK(eval(P("x"), 0) == 0);
  CHECK(eval(P("x^3-2"), 10) == 998);
  CHECK(eval_mod(P("x^2+1"), 7, 5) == 0);
  CHECK(eval_mod(P("x - 3"), 1, 5) == 3);
  CHECK(code_of([] { eval(P("x^5"), static_cast<i128>(1) << 30); }) == ErrorCode::overflow);
}

TEST_CASE("resultant and discriminant examples") {
  CHECK(resultant(P("x"), P("x+1")) == 1);
  CHECK(resultant(P("x"), P("x")) == 0);
  CHECK(resultant(P("x^2+1"), P("x+1")) == 2);
  CHECK(discriminant(P("x^2+1")) == -4);
  CHECK(discriminant(P("x^2+x+1")) == -3);
  CHECK(discriminant(P("3x+5")) == 1);
  CHECK(discriminant(P("x^3-2")) == -108);
}

TEST_CASE("discriminant matches closed forms on random quadratics and cubics") {
  SplitMix64 rng(2024);
  auto coef = [&] { return static_cast<std::int64_t>(rng.below(101)) - 50; };
  for (int i = 0; i < 500; ++i) {
    std::int64_t a = 0;
    while (a == 0) a = coef();
    const std::int64_t b = coef(), c = coef();
    CHECK(discriminant(IntPolynomial({c, b, a})) == oracle::disc2(a, b, c));
  }
  for (int i = 0; i < 500; ++i) {
    std::int64_t a = 0;
    while (a == 0) a = coef();
    const std::int64_t b = coef(), c = coef(), d = coef();
    CHECK(discriminant(IntPolynomial({d, c, b, a})) == oracle::disc3(a, b, c, d));
  }
}

TEST_CASE("irreducibility") {
  CHECK(check_irreducible(P("x^2+1")) == IrreducibilityVerdict::irreducible);
  CHECK(check_irreducible(P("x^2-1")) == IrreducibilityVerdict::reducible);
  CHECK(check_irreducible(P("4x^2-9")) == IrreducibilityVerdict::reducible);
  CHECK(check_irreducible(P("x^3-2")) == IrreducibilityVerdict::irreducible);
  CHECK(check_irreducible(P("x^4+4")) == IrreducibilityVerdict::reducible);
  CHECK(check_irreducible(P("x^4+x^2+1")) == IrreducibilityVerdict::reducible);
  CHECK(check_irreducible(P("x^4-2")) == IrreducibilityVerdict::irreducible);
  CHECK(check_irreducible(P("x^5-x-1")) == IrreducibilityVerdict::irreducible);
  CHECK(check_irreducible(P("x^5-1")) == IrreducibilityVerdict::reducible);
}

TEST_CASE("family validation") {
  const auto fam = parse_family("x;x+1");
  CHECK(fam.product() == P("x^2+x"));
  CHECK(fam.disc() == 1);
  CHECK(fam.lead() == 1);
  CHECK(fam.to_string() == "x;x + 1");
  CHECK(code_of([] { parse_family("x;2x"); }) == ErrorCode::not_pairwise_coprime);
  CHECK(code_of([] { parse_family("x^2+x+2"); }) == ErrorCode::fixed_divisor);
  CHECK(code_of([] { parse_family("x^4+4"); }) == ErrorCode::not_irreducible);
  CHECK(code_of([] { parse_family("2x+4"); }) == ErrorCode::fixed_divisor);
  CHECK(parse_family("x^4-2").size() == 1);
  // The product x(x+1) is always even; that is reported but allowed.
  CHECK_FALSE(fam.warnings().empty());
}

TEST_CASE("roots modulo primes") {
  CHECK(roots_mod_p(P("x^2+1"), 5) == std::vector<std::uint64_t>{2, 3});
  CHECK(roots_mod_p(P("x"), 7) == std::vector<std::uint64_t>{0});
  CHECK(roots_mod_p(P("x^2+1"), 3).empty());
  CHECK(code_of([] { roots_mod_p(P("x^2+1"), 15); }) == ErrorCode::composite_modulus);
}

TEST_CASE("splitting agrees with exhaustive scan for large primes") {
  const std::vector<const char*> polys{"x^2+1", "x^2+x+1", "x^3-2", "x^4-2", "x^5-x-1", "7x^3+3x-11"};
  for (std::uint64_t p : {10007ULL, 65537ULL, 1000003ULL}) {
    for (const char* s : polys) {
      const IntPolynomial q = P(s);
      std::vector<std::uint64_t> scan;
      for (std::uint64_t n = 0; n < p; ++n)
        if (eval_mod(q, n, p) == 0) scan.push_back(n);
      CHECK(roots_mod_p(q, p) == scan);
      CHECK(roots_mod_p_by_splitting(q, p, 99) == scan);
      CHECK(count_roots_mod_p(q, p) == scan.size());
    }
  }
}

TEST_CASE("roots of a large prime are valid") {
  const std::uint64_t p = 1000000000000000003ULL;
  const IntPolynomial q = P("x^3-2");
  for (std::uint64_t r : roots_mod_p(q, p)) CHECK(eval_mod(q, r, p) == 0);
  CHECK(roots_mod_p(q, p) == roots_mod_p(q, p, 12345));
}

TEST_CASE("Hensel lifting") {
  CHECK(lift_roots(P("x^2+1"), 5, 2).roots == std::vector<std::uint64_t>{7, 18});
  CHECK(lift_roots(P("x^2-17"), 2, 3).roots == std::vector<std::uint64_t>{1, 3, 5, 7});
  CHECK(lift_roots(P("x"), 3, 4).roots == std::vector<std::uint64_t>{0});
}

TEST_CASE("property: lifted counts equal exhaustive counts") {
  const std::vector<const char*> polys{"x^2-17", "x^2+1", "x^2+x+1", "x^3-2", "4x^2+4x+5", "x^3+x+8", "x^4-2"};
  for (const char* s : polys) {
    const IntPolynomial q = P(s);
    const auto c = coeffs_of(q);
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 17ULL}) {
      std::uint64_t m = p;
      for (int nu = 1; m <= 5000; ++nu, m *= p) {
        CAPTURE(s);
        CAPTURE(m);
        CHECK(lift_roots(q, p, nu).roots.size() == oracle::rho_scan(c, m));
      }
    }
  }
}

TEST_CASE("rho is multiplicative and matches scans") {
  CHECK(rho(P("x^2+1"), 65) == 4);
  CHECK(rho(P("x^3-2"), 1) == 1);
  CHECK(rho(P("x^2+1"), 4) == 0);
  const auto c = coeffs_of(P("x^2+x+1"));
  for (std::uint64_t m = 1; m <= 600; ++m) CHECK(rho(P("x^2+x+1"), m) == oracle::rho_scan(c, m));
}

TEST_CASE("phi_j") {
  CHECK(phi(P("x^2+1"), 5) == Rational{3, 1});
  CHECK(phi(P("x"), 1) == Rational{1, 1});
  CHECK(phi(P("x^2+x"), 2) == Rational{0, 1});
  CHECK(phi(P("x"), 12) == Rational{4, 1});
}

TEST_CASE("root bounds hold on a small corpus") {
  for (const char* s : {"x^2-17", "x^2+1", "x^3-2", "x^4-2"}) {
    const IntPolynomial q = P(s);
    const BigInt d = discriminant(q);
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 13ULL, 17ULL}) {
      const u128 rp = rho(q, p);
      std::uint64_t m = p;
      for (int nu = 1; m <= 100000; ++nu, m *= p) {
        const auto b = check_root_bounds(q.degree(), d, p, nu, rho(q, m), rp);
        CHECK(b.bound1);
        CHECK(b.bound2);
      }
    }
  }
}
