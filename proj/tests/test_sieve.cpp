#include "doctest.h"

#include <cstdio>
#include <filesystem>

#include "concentra/error.hpp"
#include "concentra/sieve.hpp"
#include "oracles.hpp"

using namespace concentra;

namespace {

oracle::cpp_int to_big(u128 v) {
  oracle::cpp_int r = static_cast<std::uint64_t>(v >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(v);
  return r;
}

// |Q(n)| equals the product, every p is prime, every exponent is maximal.
void check_row(const IntPolynomial& q, std::uint64_t n, const std::vector<PrimePower>& row) {
  std::vector<std::int64_t> c(q.coeffs().begin(), q.coeffs().end());
  oracle::cpp_int v = abs(oracle::eval(c, static_cast<std::int64_t>(n)));
  oracle::cpp_int prod = 1;
  for (const auto& pp : row) {
    const oracle::cpp_int p = to_big(pp.p);
    CHECK(oracle::probable_prime(p));
    oracle::cpp_int pk = 1;
    for (int i = 0; i < pp.nu; ++i) pk *= p;
    prod *= pk;
    CHECK(v % (pk * p) != 0);
  }
  CHECK(prod == v);
}

}  // namespace

TEST_CASE("prime tables") {
  CHECK(primes_up_to(10).primes() == std::vector<std::uint64_t>{2, 3, 5, 7});
  CHECK(primes_up_to(100).count() == 25);
  CHECK(primes_up_to(1000000).count() == 78498);
  CHECK(primes_up_to(10000000).count() == 664579);
  const PrimeTable t(100000, true);
  for (std::uint64_t n = 0; n <= 100000; ++n) CHECK(t.is_prime(n) == oracle::is_prime_trial(n));
  CHECK(t.primes(90, 110) == std::vector<std::uint64_t>{97, 101, 103, 107, 109});
  CHECK(t.spf(91) == 7);
  CHECK_THROWS_AS(PrimeTable(PrimeTable::kMaxLimit + 1), Error);
}

TEST_CASE("factorize_small") {
  const PrimeTable t(1000, true);
  CHECK(factorize_small(12, t) == std::vector<PrimePower>{{2, 2}, {3, 1}});
  CHECK(factorize_small(1, t).empty());
  CHECK(factorize_small(97, t) == std::vector<PrimePower>{{97, 1}});
  CHECK_THROWS_AS(factorize_small(1001, t), Error);
  CHECK_THROWS_AS(factorize_small(0, t), Error);
}

TEST_CASE("interval factorization of X matches factorize_small") {
  const auto fam = parse_family("x");
  const auto fac = interval_factorize(fam, 10, 5);
  const PrimeTable t(100, true);
  for (std::uint64_t n = 11; n <= 15; ++n) CHECK(fac.factors(0, n) == factorize_small(n, t));
  const auto wide = interval_factorize(fam, 0, 200000, 1000);
  const PrimeTable t2(200000, true);
  for (std::uint64_t n = 1; n <= 200000; ++n) REQUIRE(wide.factors(0, n) == factorize_small(n, t2));
}

TEST_CASE("interval factorization of X^2+1 and zero flags") {
  const auto fam = parse_family("x^2+1");
  const auto fac = interval_factorize(fam, 5, 5);
  CHECK(fac.factors(0, 8) == std::vector<PrimePower>{{5, 1}, {13, 1}});
  const auto fam2 = parse_family("x-7;x^2+x+1");
  const auto fac2 = interval_factorize(fam2, 0, 20);
  CHECK(fac2.is_zero(0, 7));
  CHECK_FALSE(fac2.is_zero(0, 8));
  CHECK(fac2.factors(0, 3) == std::vector<PrimePower>{{2, 2}});  // |3 - 7|
}

TEST_CASE("property: multiply-back over a corpus of intervals") {
  struct Case {
    const char* family;
    std::uint64_t x, y, bound;
  };
  const std::vector<Case> cases{{"x^2+1", 1000000, 1000, 0},
                                {"x^2+x+1;x^3-2", 123456789, 300, 0},
                                {"7x^3+3x-11", 10000000ULL, 200, 0},
                                {"x^4-2", 1000000ULL, 100, 200},
                                {"x^2+1", 99999999999ULL, 100, 100}};
  for (const auto& c : cases) {
    CAPTURE(c.family);
    const auto fam = parse_family(c.family);
    const auto fac = interval_factorize(fam, c.x, c.y, c.bound);
    for (std::size_t j = 0; j < fam.size(); ++j)
      for (std::uint64_t n = c.x + 1; n <= c.x + c.y; ++n) check_row(fam.member(j), n, fac.factors(j, n));
  }
}

TEST_CASE("sieve bound does not change the factorization") {
  const auto fam = parse_family("x^2+1");
  const auto a = interval_factorize(fam, 1000000, 500, 1000);
  const auto b = interval_factorize(fam, 1000000, 500, 0);
  for (std::uint64_t n = 1000001; n <= 1000500; ++n) CHECK(a.factors(0, n) == b.factors(0, n));
}

TEST_CASE("friable split") {
  const std::vector<std::vector<PrimePower>> twelve{{{2, 2}, {3, 1}}};
  const auto e = friable_split(twelve, 6, 2);
  CHECK(e.xi == 2);
  CHECK(e.a[0] == 4);
  CHECK(e.b == 3);
  CHECK(e.p_min == 3);
  const std::vector<std::vector<PrimePower>> prime{{{101, 1}}};
  const auto f = friable_split(prime, 6, 2);
  CHECK(f.xi == 100);
  CHECK(f.a[0] == 1);
  CHECK(f.b == 101);
  const std::vector<std::vector<PrimePower>> one{{}};
  const auto g = friable_split(one, 6, 2);
  CHECK(g.a[0] == 1);
  CHECK(g.b == 1);
  CHECK(g.xi_infinite);
}

TEST_CASE("property: friable decomposition invariants") {
  const auto fam = parse_family("x;x^2+1");
  const auto fac = interval_factorize(fam, 10000, 2000);
  const auto dec = friable_decompose(fac, 10000, 0.5);
  CHECK(dec.n1_count + dec.n2_count <= 2000);
  for (const auto& e : dec.entries) {
    if (e.zero) continue;
    CHECK(e.a_product <= dec.threshold);
    const u128 q = static_cast<u128>(e.n) * (static_cast<u128>(e.n) * e.n + 1);
    CHECK(e.a_product * e.b == q);
    if (e.b > 1) CHECK(e.p_min > e.xi);
    CHECK(e.in_n1 == (e.a_product <= dec.n1_threshold));
  }
  // Friable parts grow with the threshold.
  for (std::uint64_t n = 10001; n <= 10100; ++n) {
    std::vector<std::vector<PrimePower>> rows{fac.factors(0, n), fac.factors(1, n)};
    u128 prev = 0;
    for (u128 t = 1; t <= 1000000; t *= 10) {
      const auto e = friable_split(rows, t, 1);
      CHECK(e.a_product >= prev);
      prev = e.a_product;
    }
  }
}

TEST_CASE("factorization cache round trip") {
  const auto fam = parse_family("x^2+1");
  const auto fac = interval_factorize(fam, 1000, 300);
  const auto path = (std::filesystem::temp_directory_path() / "concentra_cache_test.bin").string();
  save_factorization(path, fac, family_hash(fam));
  const auto back = load_factorization(path, family_hash(fam), 1000, 300, fac.sieve_bound);
  REQUIRE(back.has_value());
  for (std::uint64_t n = 1001; n <= 1300; ++n) CHECK(back->factors(0, n) == fac.factors(0, n));
  CHECK_FALSE(load_factorization(path, family_hash(fam) + 1, 1000, 300, fac.sieve_bound).has_value());
  CHECK_FALSE(load_factorization(path, family_hash(fam), 1000, 301, fac.sieve_bound).has_value());
  std::remove(path.c_str());
  CHECK_FALSE(load_factorization(path, family_hash(fam), 1000, 300, fac.sieve_bound).has_value());
}
