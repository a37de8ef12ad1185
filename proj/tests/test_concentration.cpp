#include "doctest.h"

#include <cmath>
#include <map>
#include <numeric>

#include "concentra/concentration.hpp"
#include "concentra/error.hpp"
#include "oracles.hpp"

using namespace concentra;

namespace {

const AdditiveFunction kOmega = AdditiveFunction::omega();
const AdditiveFunction kBigOmega = AdditiveFunction::big_omega();

// n -> phi(n) / n^2 by trial division
double phi_over_square(std::uint64_t n) {
  double v = 1.0 / static_cast<double>(n);
  for (const auto& [p, e] : oracle::trial_factor(n)) v *= static_cast<double>(p - 1) / static_cast<double>(p);
  return v;
}

bool squarefree(std::uint64_t n) {
  for (const auto& [p, e] : oracle::trial_factor(n))
    if (e > 1) return false;
  return true;
}

}  // namespace

TEST_CASE("table on (10, 20] for x, x+1") {
  const auto fam = parse_family("x;x+1");
  const auto t = build_table(fam, {kOmega, kOmega}, 10, 10);
  const std::map<std::vector<std::int64_t>, std::uint64_t> expected{{{1, 1}, 1}, {{1, 2}, 4}, {{2, 1}, 3}, {{2, 2}, 2}};
  CHECK(t.counts == expected);
  const auto s = sup_concentration(t);
  CHECK(s.count == 4);
  CHECK(s.arg == std::vector<double>{1, 2});
  CHECK(table_csv(t) == "k_1,k_2,count\n1,1,1\n1,2,4\n2,1,3\n2,2,2\n");
}

TEST_CASE("small and empty tables") {
  const auto fam = parse_family("x");
  const auto t = build_table(fam, {kOmega}, 1, 1);
  CHECK(t.counts == std::map<std::vector<std::int64_t>, std::uint64_t>{{{1}, 1}});
  const auto e = build_table(fam, {kOmega}, 100, 0);
  CHECK(e.counts.empty());
  CHECK_THROWS_AS(sup_concentration(e), Error);
  CHECK(table_csv(e) == "k_1,count\n");
}

TEST_CASE("ties go to the smallest tuple") {
  ConcentrationTable t;
  t.quanta = {1};
  t.counts = {{{2}, 3}, {{1}, 3}};
  const auto s = sup_concentration(t);
  CHECK(s.arg == std::vector<double>{1});
  CHECK(s.count == 3);
}

TEST_CASE("property: tables match trial division") {
  const auto fam = parse_family("x;x^2+1");
  const auto t = build_table(fam, {kOmega, kBigOmega}, 1000, 2000);
  std::map<std::vector<std::int64_t>, std::uint64_t> ref;
  for (std::uint64_t n = 1001; n <= 3000; ++n) ++ref[{oracle::omega(n), oracle::big_omega(n * n + 1)}];
  CHECK(t.counts == ref);
  CHECK(t.total == 2000);
}

TEST_CASE("property: mass conservation with zero values") {
  const auto fam = parse_family("x-50;x^2+x+1");
  const auto t = build_table(fam, {kOmega, kOmega}, 0, 5000);
  std::uint64_t sum = 0;
  for (const auto& [k, c] : t.counts) {
    CHECK(c > 0);
    sum += c;
  }
  CHECK(t.excluded == 1);
  CHECK(sum + t.excluded == 5000);
}

TEST_CASE("property: permuting members permutes keys") {
  const auto a = build_table(parse_family("x;x^2+1;x+1"), {kOmega, kBigOmega, kOmega}, 500000, 20000);
  const auto b = build_table(parse_family("x^2+1;x+1;x"), {kBigOmega, kOmega, kOmega}, 500000, 20000);
  std::map<std::vector<std::int64_t>, std::uint64_t> permuted;
  for (const auto& [k, c] : a.counts) permuted[{k[1], k[2], k[0]}] = c;
  CHECK(permuted == b.counts);
}

TEST_CASE("property: results do not depend on the sieve bound") {
  const auto fam = parse_family("x^2+1");
  const auto a = build_table(fam, {kOmega}, 2000000, 3000, 2000);
  const auto b = build_table(fam, {kOmega}, 2000000, 3000);
  CHECK(a.counts == b.counts);
}

TEST_CASE("upper report") {
  const auto fam = parse_family("x;x+1");
  const auto rep = upper_bound_report(fam, {kOmega, kOmega}, 100000, 100000);
  CHECK(rep.ratio > 0);
  CHECK(std::isfinite(rep.ratio));
  CHECK(rep.e_values.size() == 2);
  CHECK(rep.ratio == doctest::Approx(rep.sup.count * std::sqrt(rep.e_values[0] * rep.e_values[1]) / 100000));
  CHECK(rep.z == doctest::Approx(std::exp(std::sqrt(std::log(1e5)))));
  REQUIRE(rep.beta_d.has_value());
  CHECK(*rep.beta_d == 1);
  const auto j = rep.to_json({});
  for (const char* key : {"x", "y", "sup", "arg", "E", "ratio", "parameters"}) CHECK(j.contains(key));

  const auto one = upper_bound_report(fam, {kOmega, kOmega}, 1000, 1);
  CHECK(one.sup.count <= 1);
  CHECK(one.ratio <= std::sqrt(one.e_values[0] * one.e_values[1]));
  CHECK_FALSE(upper_bound_report(parse_family("x;x^2+1"), {kOmega, kOmega}, 100, 10).beta_d.has_value());
}

TEST_CASE("lower targets") {
  const auto fam = parse_family("x^2+1");
  CHECK_THROWS_AS(lower_target(fam, {1e6}, std::log(1e6)), Error);
  const auto d = lower_target(fam, {1e6}, std::log(1e6), 0.5, 11, 10, true);
  CHECK(d.degenerate);
  CHECK(d.k == std::vector<std::int64_t>{0});

  // eps0 = 0.01 for degree 1; choose log x so that x^{eps0 / C} = 10^4.
  const auto x = parse_family("x");
  const double log_x = std::log(1e4) / 0.01;
  const auto t = lower_target(x, {AdditiveFunction::kInfinity}, log_x, 0.5, 2, 1);
  long double s = 0;
  for (std::uint64_t p : oracle::eratosthenes(10000))
    if (p > 2) s += 1.0L / p;
  CHECK(t.y_star[0] == doctest::Approx(1e4));
  CHECK(t.L[0] == doctest::Approx(static_cast<double>(s)).epsilon(1e-12));
  CHECK(t.k[0] == static_cast<std::int64_t>(std::floor(t.L[0])));

  // y_j below the cap and w above y_j: L = 0
  const auto z = lower_target(x, {5}, log_x, 0.5, 11, 1);
  CHECK(z.L[0] == 0);
  CHECK(z.k[0] == 0);

  // Primes dividing beta D are skipped: for x^2+1 that is p = 2 only.
  const auto q = lower_target(fam, {1000}, std::log(1e6) * 1000, 0.5, 1, 1);
  long double r = 0;
  for (std::uint64_t p : oracle::eratosthenes(1000))
    if (p > 2) r += static_cast<long double>(oracle::rho_scan({1, 0, 1}, p)) / p;
  CHECK(q.L[0] == doctest::Approx(static_cast<double>(r)).epsilon(1e-12));
}

TEST_CASE("lower report") {
  const auto fam = parse_family("x");
  const std::vector<AdditiveFunction> fs{AdditiveFunction::omega_y(1e5)};
  const auto target = lower_target(fam, {1e5}, std::log(1e5), 0.5, 11, 10, true);
  const auto table = build_table(fam, fs, 100000, 100000);
  const auto rep = lower_bound_report(fam, fs, table, target);
  CHECK(rep.observed == 8392);  // primes in (1e5, 2e5]
  CHECK(rep.ratio > 0);
  const auto empty = lower_bound_report(fam, fs, build_table(fam, fs, 100000, 0), target);
  CHECK(empty.ratio == 0);
  CHECK(empty.degenerate);
}

TEST_CASE("eq6 sums") {
  const auto x = parse_family("x");
  CHECK(eq6_rhs_sum(x, {kOmega}, 10, {0}) == 1);
  double hand = 0;
  for (std::uint64_t a : {2, 3, 4, 5, 7, 8, 9}) hand += phi_over_square(a);
  CHECK(eq6_rhs_sum(x, {kOmega}, 10, {1}) == doctest::Approx(hand).epsilon(1e-14));
  CHECK(eq6_rhs_sum(x, {kOmega}, 10, {1}) == doctest::Approx(537797.0 / 529200).epsilon(1e-14));
  CHECK(eq6_rhs_sum(x, {kOmega}, 10, {-1}) == 0);
  const auto four = parse_family("x;x+1;x+2;x+3");
  CHECK_THROWS_AS(eq6_rhs_sum(four, {kOmega, kOmega, kOmega, kOmega}, 10, {1, 1, 1, 1}), Error);
}

TEST_CASE("property: joint eq6 sums match brute force") {
  const auto fam = parse_family("x;x+1");
  const std::uint64_t A = 300;
  for (std::int64_t k1 = 0; k1 <= 2; ++k1) {
    for (std::int64_t k2 = 0; k2 <= 2; ++k2) {
      double ref = 0, free1 = 0, free2 = 0;
      for (std::uint64_t a = 1; a <= A; ++a) {
        if (oracle::omega(a) != k1) continue;
        free1 += phi_over_square(a);
        for (std::uint64_t b = 1; b <= A; ++b) {
          if (oracle::omega(b) != k2) continue;
          if (std::gcd(a, b) == 1) ref += phi_over_square(a) * phi_over_square(b);
        }
      }
      for (std::uint64_t b = 1; b <= A; ++b)
        if (oracle::omega(b) == k2) free2 += phi_over_square(b);
      const double joint = eq6_rhs_sum(fam, {kOmega, kOmega}, A, {double(k1), double(k2)});
      const double dropped = eq6_rhs_sum(fam, {kOmega, kOmega}, A, {double(k1), double(k2)}, true);
      CHECK(joint == doctest::Approx(ref).epsilon(1e-12));
      CHECK(dropped == doctest::Approx(free1 * free2).epsilon(1e-12));
      CHECK(joint <= dropped + 1e-12);
    }
  }
}

TEST_CASE("property: three-member eq6 sums match brute force") {
  const auto fam = parse_family("x;x+1;x^2+1");
  const std::uint64_t A = 60;
  const std::vector<double> k{1, 1, 1};
  const auto weight = [](std::uint64_t a, const std::vector<std::int64_t>& c) {
    return static_cast<double>(oracle::rho_scan(c, a)) * phi_over_square(a);
  };
  const std::vector<std::vector<std::int64_t>> cs{{0, 1}, {1, 1}, {1, 0, 1}};
  double ref = 0;
  for (std::uint64_t a = 1; a <= A; ++a) {
    if (oracle::omega(a) != 1 || a % 2 == 0) continue;  // 2 is the only prime of beta D
    for (std::uint64_t b = 1; b <= A; ++b) {
      if (oracle::omega(b) != 1 || b % 2 == 0 || std::gcd(a, b) != 1) continue;
      for (std::uint64_t c = 1; c <= A; ++c) {
        if (oracle::omega(c) != 1 || c % 2 == 0 || std::gcd(a, c) != 1 || std::gcd(b, c) != 1) continue;
        ref += weight(a, cs[0]) * weight(b, cs[1]) * weight(c, cs[2]);
      }
    }
  }
  CHECK(fam.beta_d() == 16);
  CHECK(eq6_rhs_sum(fam, {kOmega, kOmega, kOmega}, A, k) == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("Poisson profile matches direct enumeration") {
  const auto x = parse_family("x");
  const double log_x = std::log(1000.0) / 0.01;  // x^{eps0} = 1000
  const auto rep = poisson_profile_check(x, 0, log_x, AdditiveFunction::kInfinity, 11, 1);
  CHECK(rep.bound == 1000);
  REQUIRE(rep.rows.size() == static_cast<std::size_t>(rep.k + 1));
  std::vector<double> lhs(rep.rows.size(), 0.0);
  for (std::uint64_t n = 1; n <= 1000; ++n) {
    if (!squarefree(n)) continue;
    const auto f = oracle::trial_factor(n);
    if (!f.empty() && f.front().first <= 11) continue;
    const auto k = f.size();
    if (k < lhs.size()) lhs[k] += phi_over_square(n);
  }
  // prod (p - 1) / p^2 = phi(n) / n^2 for squarefree n
  for (std::size_t k = 0; k < lhs.size(); ++k) CHECK(rep.rows[k].lhs == doctest::Approx(lhs[k]).epsilon(1e-12));
  CHECK(rep.rows[0].lhs == 1);  // every prime counts when y_j is infinite
  CHECK(rep.smooth);
  const auto capped = poisson_profile_check(x, 0, log_x, AdditiveFunction::kInfinity, 11, 1, 0.5, 0);
  CHECK(capped.rows.size() == 1);
  const auto none = poisson_profile_check(x, 0, log_x, AdditiveFunction::kInfinity, 11, 1, 0.5, -1);
  CHECK(none.rows.empty());
}
