#pragma once

// Oscillatory integral bound, friable sets and characteristic sums.

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"

#include "concentra/additive.hpp"
#include "concentra/arith.hpp"
#include "concentra/polynomial.hpp"

namespace concentra {

using Json = nlohmann::ordered_json;

/// Finitely supported n -> B_n >= 0 on nonzero integers.
struct BConfig {
  std::map<std::int64_t, double> B;

  double total() const;
  /// S(t) = sum B_n sin^2(pi n t).
  double S(double t) const;
};

struct IntegralCheck {
  double integral = 0.0;  // I = int_0^1 (1 + S) e^{-S}
  double ratio = 0.0;     // I sqrt(1 + sum B)
  double error = 0.0;
};

/// Support size <= 1000, every B_n <= 1e6.
IntegralCheck integral_lemma_check(const BConfig& cfg, double tolerance = 1e-10);

struct SingleBIdentity {
  double lhs = 0.0;  // int_0^1 exp(-B sin^2(pi t)) dt
  double rhs = 0.0;  // (2/pi) int_0^sqrt(B) exp(-u^2) / sqrt(B - u^2) du, via u = sqrt(B) sin(theta)
};

SingleBIdentity single_b_identity(double B, double tolerance = 1e-12);

struct Lemma1Config {
  std::uint64_t seed = 0;
  BConfig cfg;
  double sum_b = 0.0;
  double integral = 0.0;
  double ratio = 0.0;
};

struct Lemma1Suite {
  std::uint64_t master_seed = 0;
  double tolerance = 1e-10;
  std::vector<Lemma1Config> configs;
  double max_ratio = 0.0;
  double max_integral = 0.0;
  std::vector<std::pair<double, SingleBIdentity>> identities;
  double max_identity_gap = 0.0;
  bool pass = false;  // ratios <= 3, I <= 1, identity gaps <= 1e-8
  Json to_json() const;
};

/// Random BConfig for one seed: 1..20 distinct frequencies in [-50, 50] \ {0},
/// magnitudes log-uniform in [1e-2, 1e4].
BConfig random_bconfig(std::uint64_t seed);
/// Seed of configuration i: SplitMix64(master + i).next().
std::uint64_t lemma1_config_seed(std::uint64_t master, std::uint64_t i);
Lemma1Suite run_lemma1_suite(std::size_t count = 200, std::uint64_t master_seed = 42, double tolerance = 1e-10);

/// n <= x with largest prime factor <= y, ascending, with factorizations.
struct FriableSet {
  std::uint64_t x = 0, y = 0;
  std::vector<std::uint64_t> elements;
  std::vector<std::uint32_t> offsets{0};
  std::vector<std::uint64_t> primes;
  std::vector<std::uint8_t> exponents;

  std::size_t size() const { return elements.size(); }
  std::vector<PrimePower> factors(std::size_t i) const;
};

inline constexpr std::uint64_t kMaxFriableX = 10000000;

/// Calls fn(n, factors) for every n in S(x, y), in generation order. Capacity above 1e7.
void for_each_friable(std::uint64_t x, std::uint64_t y,
                      const std::function<void(std::uint64_t, std::span<const PrimePower>)>& fn);
FriableSet friable_set(std::uint64_t x, std::uint64_t y);

enum class WeightKind { unit, rho, rho_tilde };

/// Multiplicative r >= 0 with r(1) = 1.
class WeightFunction {
 public:
  static WeightFunction unit();
  /// r(p^nu) = rho(p^nu).
  static WeightFunction rho(IntPolynomial q);
  /// r(p^nu) = rho(p^nu) p^nu / phi(p^nu) for p <= limit, 0 above.
  static WeightFunction rho_tilde(IntPolynomial q, std::uint64_t limit = UINT64_MAX);

  WeightKind kind() const { return kind_; }
  double at(std::uint64_t p, int nu) const;
  double operator()(std::span<const PrimePower> factors) const;
  std::string describe() const;

 private:
  WeightKind kind_ = WeightKind::unit;
  std::optional<IntPolynomial> q_;
  std::uint64_t limit_ = UINT64_MAX;
  mutable std::map<std::pair<std::uint64_t, int>, double> cache_;
};

/// Sum of r(n) over S(x, y) grouped by the key of f(n).
std::map<std::int64_t, double> friable_groups(const AdditiveFunction& f, const WeightFunction& r, std::uint64_t x,
                                              std::uint64_t y);

struct WeightedSup {
  double value = 0.0;
  double arg = 0.0;
};

/// Largest group; ties go to the smaller k. InvalidArgument when x < 1.
WeightedSup weighted_concentration(const AdditiveFunction& f, const WeightFunction& r, std::uint64_t x,
                                   std::uint64_t y);

/// R(t) = sum over S(x, y) of r(n) e^{2 pi i f(n) t}.
std::complex<double> char_sum(const AdditiveFunction& f, const WeightFunction& r, std::uint64_t x, std::uint64_t y,
                              double t);
std::complex<double> char_sum(const AdditiveFunction& f, const std::map<std::int64_t, double>& groups, double t);

struct FourierCheck {
  double k = 0.0;
  double integral = 0.0;  // int_0^1 R(t) e^{-2 pi i k t} dt, evaluated as an exact DFT
  double exact = 0.0;     // direct weighted count at f(n) = k
  bool pass = false;      // agreement within 1e-9
};

/// Requires integer values on S(x, y); throws NonIntegerValues otherwise.
FourierCheck fourier_inversion_check(const AdditiveFunction& f, const WeightFunction& r, std::uint64_t x,
                                     std::uint64_t y, std::int64_t k);
FourierCheck fourier_inversion_check(const AdditiveFunction& f, const std::map<std::int64_t, double>& groups,
                                     std::int64_t k);

}  // namespace concentra
