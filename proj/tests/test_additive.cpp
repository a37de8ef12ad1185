#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "concentra/additive.hpp"
#include "concentra/error.hpp"
#include "concentra/quadrature.hpp"
#include "oracles.hpp"

using namespace concentra;

namespace {

std::vector<PrimePower> fac(std::uint64_t n) {
  std::vector<PrimePower> out;
  for (const auto& [p, e] : oracle::trial_factor(n)) out.push_back({p, e});
  return out;
}

double reciprocal_sum(std::uint64_t x) {
  long double s = 0;
  for (std::uint64_t p : oracle::eratosthenes(x)) s += 1.0L / p;
  return static_cast<double>(s);
}

}  // namespace

TEST_CASE("eval_f") {
  CHECK(eval_f(AdditiveFunction::big_omega(), fac(12)) == 3);
  CHECK(eval_f(AdditiveFunction::omega(), fac(12)) == 2);
  CHECK(eval_f(AdditiveFunction::omega_y(5), fac(77)) == 0);
  CHECK(eval_f(AdditiveFunction::omega_y(7), fac(77)) == 1);
  CHECK(eval_f(AdditiveFunction::omega(), fac(1)) == 0);
}

TEST_CASE("property: additivity on random coprime pairs") {
  SplitMix64 rng(11);
  const std::vector<AdditiveFunction> fs{AdditiveFunction::omega(), AdditiveFunction::big_omega(),
                                         AdditiveFunction::omega_y(100)};
  int tested = 0;
  while (tested < 10000) {
    const std::uint64_t m = 1 + rng.below(1000000), n = 1 + rng.below(1000000);
    if (std::gcd(m, n) != 1) continue;
    ++tested;
    for (const auto& f : fs) REQUIRE(eval_f(f, fac(m * n)) == eval_f(f, fac(m)) + eval_f(f, fac(n)));
  }
}

TEST_CASE("omega and big-omega agree with trial division") {
  for (std::uint64_t n = 1; n <= 5000; ++n) {
    CHECK(eval_f(AdditiveFunction::omega(), fac(n)) == oracle::omega(n));
    CHECK(eval_f(AdditiveFunction::big_omega(), fac(n)) == oracle::big_omega(n));
  }
}

TEST_CASE("descriptors") {
  CHECK(AdditiveFunction::parse("omega").kind() == AdditiveKind::omega);
  CHECK(AdditiveFunction::parse("big-omega").kind() == AdditiveKind::big_omega);
  CHECK(AdditiveFunction::parse("omega_y:1000").y() == 1000);
  CHECK(std::isinf(AdditiveFunction::parse("omega_y:inf").y()));
  CHECK(AdditiveFunction::parse(AdditiveFunction::omega_y(30).descriptor()).y() == 30);
  CHECK_THROWS_AS(AdditiveFunction::parse("sigma"), Error);
  CHECK_THROWS_AS(AdditiveFunction::parse("custom:/nonexistent/file"), Error);
}

TEST_CASE("custom functions from a file") {
  const auto path = (std::filesystem::temp_directory_path() / "concentra_custom_f.txt").string();
  {
    std::ofstream f(path);
    f << "# log-like weights\n2 1 0.5\n2 2 1.25\n3 1 2\ndefault 1\n";
  }
  const auto f = AdditiveFunction::parse("custom:" + path);
  CHECK(f.at(2, 1) == 0.5);
  CHECK(f.at(2, 2) == 1.25);
  CHECK(f.at(3, 1) == 2);
  CHECK(f.at(7, 3) == 1);
  CHECK(eval_f(f, fac(4 * 3 * 5)) == doctest::Approx(4.25));
  CHECK_FALSE(f.integer_valued());
  {
    std::ofstream g(path);
    g << "2 1 x\n";
  }
  CHECK_THROWS_AS(AdditiveFunction::from_file(path), Error);
  std::filesystem::remove(path);
}

TEST_CASE("E_f values") {
  const auto omega = AdditiveFunction::omega();
  CHECK(e_f(omega, 100, Weight::unit()).value == doctest::Approx(1 + reciprocal_sum(100)).epsilon(1e-14));
  CHECK(e_f(omega, 100, Weight::unit()).value == doctest::Approx(2.80281720104887).epsilon(1e-13));
  CHECK(e_f(AdditiveFunction::omega_y(1), 1e6, Weight::unit()).value == 1);
  const IntPolynomial x = IntPolynomial::parse("x");
  CHECK(e_f(omega, 1e5, Weight::rho(x)).value == e_f(omega, 1e5, Weight::unit()).value);
  CHECK(e_f(omega, 1e6, Weight::unit()).value == doctest::Approx(1 + reciprocal_sum(1000000)).epsilon(1e-13));
  CHECK_THROWS_AS(e_f(omega, 1.5, Weight::unit()), Error);
}

TEST_CASE("E_f with rho weights matches a scan") {
  const IntPolynomial q = IntPolynomial::parse("x^2+1");
  long double s = 1;
  for (std::uint64_t p : oracle::eratosthenes(20000)) s += static_cast<long double>(oracle::rho_scan({1, 0, 1}, p)) / p;
  CHECK(e_f(AdditiveFunction::omega(), 20000, Weight::rho(q)).value == doctest::Approx(static_cast<double>(s)).epsilon(1e-13));
}

TEST_CASE("property: E_f is monotone and tracks log log x") {
  const auto omega = AdditiveFunction::omega();
  double prev = 0, prev_gap = 0;
  for (double x = 10; x <= 1e7; x *= 10) {
    const double e = e_f(omega, x, Weight::unit()).value;
    CHECK(e >= prev);
    const double gap = e - std::log(std::log(x));
    if (x > 1e6) CHECK(std::fabs(gap - prev_gap) < 0.05);
    prev = e;
    prev_gap = gap;
  }
}

TEST_CASE("logarithmic integral") {
  CHECK(log_integral_from_2(10) == doctest::Approx(5.12043572466981).epsilon(1e-13));
  CHECK(log_integral(1e7) == doctest::Approx(664918.40504857).epsilon(1e-12));
  CHECK(kLi2 == doctest::Approx(1.04516378011749));
  const double simpson = oracle::simpson([](double t) { return 1 / std::log(t); }, 2, 1000, 200000);
  CHECK(log_integral_from_2(1000) == doctest::Approx(simpson).epsilon(1e-11));
}

TEST_CASE("Mertens deviations") {
  const auto fam = parse_family("x");
  const auto small = mertens_deviation(fam, 0, 10, {10});
  CHECK(small.dev_log == doctest::Approx(std::fabs(1.0 / 2 + 1.0 / 3 + 1.0 / 5 + 1.0 / 7 - std::log(std::log(10.0)))));
  CHECK(small.dev_log == doctest::Approx(0.342).epsilon(1e-3));
  const auto big = mertens_deviation(fam, 0, 1e6, default_mertens_grid(1e6));
  CHECK(big.terminal_offset == doctest::Approx(reciprocal_sum(1000000) - std::log(std::log(1e6))).epsilon(1e-12));
  CHECK(big.terminal_offset == doctest::Approx(0.2615).epsilon(0.002 / 0.2615));
  CHECK(default_mertens_grid(1e6) == std::vector<double>{10, 100, 1e3, 1e4, 1e5, 1e6});
  CHECK(default_mertens_grid(5e4) == std::vector<double>{10, 100, 1e3, 1e4, 5e4});
  CHECK_THROWS_AS(mertens_deviation(fam, 0, 1e6, {}), Error);
}

TEST_CASE("property: dev_log is nondecreasing in X") {
  const auto fam = parse_family("x;x^2+1;x^2+x+1");
  for (std::size_t j = 0; j < fam.size(); ++j) {
    double prev = 0;
    for (double X : {1e2, 1e3, 1e4, 1e5}) {
      const double d = mertens_deviation(fam, j, X, default_mertens_grid(X)).dev_log;
      CHECK(d >= prev);
      prev = d;
    }
  }
}

TEST_CASE("condition star") {
  const auto w = AdditiveFunction::omega();
  const auto r = star_condition_check(w, 10, 2, 2);
  CHECK(r.values == std::vector<double>{0, 1});
  CHECK(r.pass);
  CHECK(r.rough_count == 1 + 21);  // 1 and the primes in (10, 100]
  const auto r1 = star_condition_check(w, 10, 1, 2);
  CHECK(r1.rough_count == 1);
  CHECK(r1.pass);
  const auto r3 = star_condition_check(AdditiveFunction::big_omega(), 30, 3, 2);
  CHECK(r3.values.size() <= 8);
  CHECK(r3.pass);
  CHECK_THROWS_AS(star_condition_check(w, 100, 5, 2), Error);
}

TEST_CASE("property: rough counts match trial division") {
  for (double t : {10.0, 30.0}) {
    const auto r = star_condition_check(AdditiveFunction::omega(), t, 2, 2);
    std::uint64_t count = 0;
    for (std::uint64_t n = 1; n <= r.limit; ++n) {
      const auto f = oracle::trial_factor(n);
      if (f.empty() || static_cast<double>(f.front().first) > t) ++count;
    }
    CHECK(r.rough_count == count);
  }
}

TEST_CASE("beta D factor") {
  CHECK(beta_d_factor(parse_family("x;x+1")) == 1);
  CHECK(beta_d_factor(parse_family("x^2+1")) == 2);
  CHECK(beta_d_factor(parse_family("x")) == 1);
  try {
    beta_d_factor(parse_family("x;x^2+1"));
    FAIL("expected DegenerateFactor");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate_factor);
    CHECK(std::string(e.what()).find('2') != std::string::npos);
  }
}
