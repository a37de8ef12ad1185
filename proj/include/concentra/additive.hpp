#pragma once

// Additive functions, E_f(x; r), Mertens-type deviations, and the rough-number
// value-set condition.

#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "concentra/arith.hpp"
#include "concentra/polynomial.hpp"

namespace concentra {

enum class AdditiveKind { omega, big_omega, omega_y, custom };

/// f determined by its values on prime powers. f(1) = f(0) = 0, f(-n) = f(n).
class AdditiveFunction {
 public:
  static constexpr double kInfinity = std::numeric_limits<double>::infinity();
  static constexpr double kDefaultQuantum = 1e-9;

  static AdditiveFunction omega();
  static AdditiveFunction big_omega();
  /// Distinct prime factors p <= y; y may be kInfinity.
  static AdditiveFunction omega_y(double y);
  /// Values for listed (p, nu); every other prime power maps to default_value.
  static AdditiveFunction custom(std::map<std::pair<u128, int>, double> values, double default_value,
                                 std::string source = "inline");
  /// Reads "p nu value" lines plus one "default value" line; '#' starts a comment.
  static AdditiveFunction from_file(const std::string& path);
  /// omega | big-omega | omega_y:<y or inf> | custom:<path>
  static AdditiveFunction parse(std::string_view descriptor);

  AdditiveKind kind() const { return kind_; }
  double y() const { return y_; }
  /// f(p^nu) for prime p and nu >= 1.
  double at(u128 p, int nu) const;
  bool integer_valued() const { return kind_ != AdditiveKind::custom || integer_custom_; }
  /// Step used to turn values into exact table keys.
  double quantum() const { return quantum_; }
  void set_quantum(double q);
  std::string descriptor() const;

  /// Exact key for value v: round(v / quantum).
  std::int64_t key(double value) const;
  double value_of_key(std::int64_t key) const { return static_cast<double>(key) * quantum_; }

 private:
  AdditiveKind kind_ = AdditiveKind::omega;
  double y_ = kInfinity;
  std::map<std::pair<u128, int>, double> custom_;
  double default_value_ = 0.0;
  bool integer_custom_ = false;
  double quantum_ = 1.0;
  std::string source_;
};

/// Sum of f(p^nu) over the factorization.
double eval_f(const AdditiveFunction& f, std::span<const PrimePower> factors);

/// Weight r(p): unit, or the root count rho of a polynomial.
struct Weight {
  const IntPolynomial* poly = nullptr;  // null means unit weight
  static Weight unit() { return {}; }
  static Weight rho(const IntPolynomial& q) { return {&q}; }
  std::string describe() const;
};

struct EfResult {
  double x = 0.0;
  std::string weight;
  double value = 1.0;
};

/// E_f(x; r) = 1 + sum over p <= x with f(p) != 0 of r(p)/p. Requires 2 <= x <= 2^34.
EfResult e_f(const AdditiveFunction& f, double x, const Weight& weight);

/// sum_{lo < p <= hi} r(p)/p over primes with f(p) != 0 (pass omega for all primes),
/// restricted to p not dividing `exclude` when it is nonzero.
double prime_reciprocal_sum(const AdditiveFunction& f, std::uint64_t lo, std::uint64_t hi, const Weight& weight,
                            const BigInt& exclude = 0);

struct MertensPoint {
  double t = 0.0;
  double reciprocal_sum = 0.0;  // sum_{p <= t} rho(p)/p
  double loglog = 0.0;          // log log t
  double offset = 0.0;          // reciprocal_sum - loglog
  double count_sum = 0.0;       // sum_{p <= t} rho(p)
  double li = 0.0;              // li(t) = Li(t) + li(2)
  double li_offset = 0.0;       // count_sum - li
};

struct MertensDeviation {
  std::size_t member = 0;
  double X = 0.0;
  double dev_log = 0.0;         // max |offset| over the grid
  double dev_li = 0.0;          // max |li_offset| over the grid
  double dev_li_scaled = 0.0;   // max |li_offset| / (1 + t exp(-sqrt(log t)))
  double terminal_offset = 0.0; // offset at the largest grid point
  std::vector<MertensPoint> points;
};

/// Powers of ten in [10, X] together with X.
std::vector<double> default_mertens_grid(double X);

/// Deviations of member j over the grid (values in [10, X]); EmptyGrid if the grid is empty.
MertensDeviation mertens_deviation(const PolynomialFamily& family, std::size_t j, double X,
                                   std::vector<double> grid);

struct StarReport {
  double t = 0.0;
  double u = 0.0;
  double V = 0.0;
  std::uint64_t limit = 0;          // floor(t^u)
  std::uint64_t rough_count = 0;    // n <= limit with P^-(n) > t, n = 1 included
  std::vector<double> values;       // distinct f-values, ascending
  double bound = 0.0;               // V^u
  bool pass = false;
};

/// Distinct f-values over n <= t^u with smallest prime factor > t. Requires t >= 2, t^u <= 1e9.
StarReport star_condition_check(const AdditiveFunction& f, double t, double u, double V);

/// |beta D| / phi_0(|beta D|), with phi_0 built from the product polynomial.
/// Throws DegenerateFactor naming the prime p with rho_0(p) = p.
double beta_d_factor(const PolynomialFamily& family);

}  // namespace concentra
