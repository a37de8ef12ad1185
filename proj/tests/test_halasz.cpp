#include "doctest.h"

#include <cmath>
#include <numbers>

#include "concentra/error.hpp"
#include "concentra/halasz.hpp"
#include "oracles.hpp"

using namespace concentra;

namespace {

const AdditiveFunction kOmega = AdditiveFunction::omega();

// (1 + S) e^{-S} integrated by a fine periodic trapezoid.
double integral_oracle(const BConfig& cfg, int nodes) {
  return oracle::periodic_mean(
      [&](double t) {
        double s = 0;
        for (const auto& [n, b] : cfg.B) s += b * std::pow(std::sin(std::numbers::pi * n * t), 2);
        return (1 + s) * std::exp(-s);
      },
      nodes);
}

}  // namespace

TEST_CASE("integral examples") {
  const auto empty = integral_lemma_check({});
  CHECK(empty.integral == doctest::Approx(1).epsilon(1e-14));
  CHECK(empty.ratio == doctest::Approx(1).epsilon(1e-14));

  BConfig b100;
  b100.B[1] = 100;
  const auto r = integral_lemma_check(b100);
  CHECK(r.integral == doctest::Approx(0.0849867643753938).epsilon(1e-12));
  CHECK(r.ratio == doctest::Approx(0.854106411414216).epsilon(1e-12));
  CHECK(r.integral == doctest::Approx(integral_oracle(b100, 1 << 16)).epsilon(1e-12));

  BConfig b1;
  b1.B[1] = 1;
  const auto s = integral_lemma_check(b1);
  CHECK(s.integral == doctest::Approx(0.889342504081289).epsilon(1e-12));
  CHECK(s.ratio == doctest::Approx(1.25772023086661).epsilon(1e-12));
  CHECK(s.ratio > 1.2);
  CHECK(s.ratio < 1.3);
}

TEST_CASE("integral rejects bad configurations") {
  BConfig bad;
  bad.B[3] = -1;
  CHECK_THROWS_AS(integral_lemma_check(bad), Error);
  BConfig zero;
  zero.B[0] = 1;
  CHECK_THROWS_AS(integral_lemma_check(zero), Error);
  BConfig huge;
  huge.B[1] = 2e6;
  CHECK_THROWS_AS(integral_lemma_check(huge), Error);
}

TEST_CASE("property: random configurations agree with a trapezoid oracle and stay below 1") {
  for (std::uint64_t i = 0; i < 20; ++i) {
    const BConfig cfg = random_bconfig(lemma1_config_seed(7, i));
    const auto r = integral_lemma_check(cfg);
    CHECK(r.integral <= 1 + 1e-12);
    CHECK(r.integral == doctest::Approx(integral_oracle(cfg, 1 << 20)).epsilon(1e-8));
  }
}

TEST_CASE("single-B identity") {
  const std::vector<std::pair<double, double>> frozen{{1e-4, 0.999950001874948}, {1e-8, 0.999999995000000},
                                                      {1, 0.645035270449150},    {10, 0.183540812609328},
                                                      {100, 0.0565616266474542}, {1e4, 0.00564203689874459}};
  for (const auto& [B, v] : frozen) {
    const auto id = single_b_identity(B);
    CHECK(std::fabs(id.lhs - id.rhs) <= 1e-8);
    CHECK(id.lhs == doctest::Approx(v).epsilon(1e-12));
  }
  // e^{-1/2} I_0(1/2)
  CHECK(single_b_identity(1).lhs == doctest::Approx(std::exp(-0.5) * std::cyl_bessel_i(0.0, 0.5)).epsilon(1e-13));
  CHECK(single_b_identity(1e4).lhs == doctest::Approx(1 / std::sqrt(std::numbers::pi * 1e4)).epsilon(1e-4));
  CHECK_THROWS_AS(single_b_identity(0), Error);
}

TEST_CASE("random configurations are reproducible") {
  const BConfig a = random_bconfig(123), b = random_bconfig(123);
  CHECK(a.B == b.B);
  CHECK(!a.B.empty());
  CHECK(a.B.size() <= 20);
  for (const auto& [n, v] : a.B) {
    CHECK(n != 0);
    CHECK(std::abs(n) <= 50);
    CHECK(v >= 1e-2);
    CHECK(v <= 1e4);
  }
  const auto s1 = run_lemma1_suite(10, 5), s2 = run_lemma1_suite(10, 5);
  CHECK(s1.to_json().dump() == s2.to_json().dump());
  CHECK(s1.to_json()["summary"]["configCount"] == 10);
}

TEST_CASE("friable sets") {
  CHECK(friable_set(10, 2).elements == std::vector<std::uint64_t>{1, 2, 4, 8});
  CHECK(friable_set(10, 10).elements == std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  // 2^a 3^b <= 100
  CHECK(friable_set(100, 3).size() == 20);
  CHECK(friable_set(0, 5).size() == 0);
  CHECK_THROWS_AS(friable_set(20000000, 2), Error);
}

TEST_CASE("property: friable membership agrees with trial division") {
  for (std::uint64_t y : {2, 7, 30, 1000}) {
    const auto s = friable_set(3000, y);
    std::vector<std::uint64_t> ref;
    for (std::uint64_t n = 1; n <= 3000; ++n) {
      const auto f = oracle::trial_factor(n);
      if (f.empty() || f.back().first <= y) ref.push_back(n);
    }
    CHECK(s.elements == ref);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(multiply_back(s.factors(i)) == s.elements[i]);
  }
}

TEST_CASE("weighted concentration") {
  const auto w = weighted_concentration(kOmega, WeightFunction::unit(), 10, 10);
  CHECK(w.value == 7);
  CHECK(w.arg == 1);
  const auto zero = AdditiveFunction::custom({}, 0.0);
  CHECK(weighted_concentration(zero, WeightFunction::unit(), 100, 5).value == friable_set(100, 5).size());
  CHECK_THROWS_AS(weighted_concentration(kOmega, WeightFunction::unit(), 0, 10), Error);
}

TEST_CASE("weights") {
  const auto q = IntPolynomial::parse("x^2+1");
  const auto rho = WeightFunction::rho(q);
  CHECK(rho.at(5, 1) == 2);
  CHECK(rho.at(3, 1) == 0);
  CHECK(rho.at(2, 2) == 0);
  const auto tilde = WeightFunction::rho_tilde(q, 10);
  CHECK(tilde.at(5, 2) == doctest::Approx(2 * 25.0 / 20));
  CHECK(tilde.at(13, 1) == 0);
  CHECK(WeightFunction::unit()(std::vector<PrimePower>{}) == 1);
}

TEST_CASE("characteristic sums") {
  const auto unit = WeightFunction::unit();
  CHECK(char_sum(kOmega, unit, 10, 10, 0).real() == doctest::Approx(10));
  CHECK(char_sum(kOmega, unit, 10, 10, 0.5).real() == doctest::Approx(-4));
  CHECK(std::abs(char_sum(kOmega, unit, 10, 10, 0.5).imag()) < 1e-12);
  const auto at1 = char_sum(kOmega, unit, 1000, 1000, 1.0);
  CHECK(at1.real() == doctest::Approx(1000));
}

TEST_CASE("property: |R(t)| <= R(0) and R(0) equals the group total") {
  const auto q = IntPolynomial::parse("x^2+1");
  for (const auto& r : {WeightFunction::unit(), WeightFunction::rho(q)}) {
    const auto groups = friable_groups(AdditiveFunction::big_omega(), r, 5000, 100);
    double total = 0;
    for (const auto& [k, v] : groups) total += v;
    const double r0 = char_sum(AdditiveFunction::big_omega(), groups, 0).real();
    CHECK(r0 == doctest::Approx(total));
    for (double t = 0.01; t < 1; t += 0.037) CHECK(std::abs(char_sum(AdditiveFunction::big_omega(), groups, t)) <= r0 + 1e-9);
  }
}

TEST_CASE("Fourier inversion") {
  const auto unit = WeightFunction::unit();
  const auto c1 = fourier_inversion_check(kOmega, unit, 10, 10, 1);
  CHECK(c1.exact == 7);
  CHECK(c1.integral == doctest::Approx(7).epsilon(1e-12));
  CHECK(c1.pass);
  const auto c0 = fourier_inversion_check(kOmega, unit, 10, 10, 0);
  CHECK(c0.exact == 1);
  CHECK(c0.pass);
  const auto miss = fourier_inversion_check(kOmega, unit, 10, 10, 9);
  CHECK(miss.exact == 0);
  CHECK(std::fabs(miss.integral) < 1e-9);
  const auto half = AdditiveFunction::custom({{{2, 1}, 0.5}}, 1.0);
  CHECK_THROWS_AS(fourier_inversion_check(half, unit, 10, 10, 1), Error);
}

TEST_CASE("property: Fourier inversion on every attained value") {
  for (const auto& f : {kOmega, AdditiveFunction::big_omega()}) {
    for (std::uint64_t x : {100, 1000}) {
      const auto groups = friable_groups(f, WeightFunction::unit(), x, x);
      for (const auto& [k, v] : groups) CHECK(fourier_inversion_check(f, groups, k).pass);
    }
  }
}
