#pragma once

// Joint value histograms of (f_1(Q_1(n)), ..., f_r(Q_r(n))) on (x, x+y] and the
// reports built on them.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "concentra/additive.hpp"
#include "concentra/polynomial.hpp"

namespace concentra {

using Json = nlohmann::ordered_json;

struct ConcentrationTable {
  std::string family;
  std::vector<std::string> functions;
  std::vector<double> quanta;   // key step per coordinate
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  std::map<std::vector<std::int64_t>, std::uint64_t> counts;
  std::uint64_t total = 0;      // counted n
  std::uint64_t excluded = 0;   // n with Q(n) = 0

  std::vector<double> values(const std::vector<std::int64_t>& key) const;
  /// Count at the given value tuple (0 if unattained).
  std::uint64_t count_at(const std::vector<double>& values) const;
  std::vector<std::int64_t> key_of(const std::vector<double>& values) const;
};

/// Exact histogram over x < n <= x + y. sieve_bound = 0 selects the default.
ConcentrationTable build_table(const PolynomialFamily& family, const std::vector<AdditiveFunction>& functions,
                               std::uint64_t x, std::uint64_t y, std::uint64_t sieve_bound = 0);

struct SupResult {
  std::vector<double> arg;
  std::uint64_t count = 0;
};

/// Largest count; ties go to the lexicographically smallest tuple. EmptyTable if empty.
SupResult sup_concentration(const ConcentrationTable& table);

std::string table_csv(const ConcentrationTable& table);

struct ReportParams {
  double epsilon = 0.5;
  double delta = 0.5;
  double lambda = 0.5;
  double w = 11;
  double C = 10;
};

struct UpperReport {
  std::uint64_t x = 0, y = 0;
  SupResult sup;
  std::vector<double> e_values;   // E_{f_j}(x; rho_j)
  double reference = 0.0;         // y / prod sqrt(E_j)
  double ratio = 0.0;             // sup / reference
  double ratio_loglog = 0.0;      // sup (log log x)^{r/2} / y
  double z = 0.0;                 // exp((log x)^{1 - lambda})
  std::optional<double> beta_d;   // |beta D| / phi_0(|beta D|), absent when degenerate
  Json to_json(const ReportParams& params) const;
};

UpperReport upper_bound_report(const PolynomialFamily& family, const std::vector<AdditiveFunction>& functions,
                               const ConcentrationTable& table, const ReportParams& params = {});
UpperReport upper_bound_report(const PolynomialFamily& family, const std::vector<AdditiveFunction>& functions,
                               std::uint64_t x, std::uint64_t y, const ReportParams& params = {});

struct LowerTarget {
  double log_x = 0.0;
  double epsilon = 0.5, w = 11, C = 10;
  double epsilon0 = 0.0;           // epsilon / (50 g)
  std::vector<double> y;           // y_j (infinity allowed)
  std::vector<double> y_star;      // min(y_j, x^{eps0 / C})
  std::vector<double> L;
  std::vector<std::int64_t> k;     // floor(L_j)
  bool degenerate = false;         // x^{eps0 / C} < w, so every L_j = 0
  Json to_json() const;
};

/// Sums L_j over w < p <= y_j^*, p not dividing beta D. Throws Error(range) when
/// x^{eps0/C} < w unless allow_degenerate is set.
LowerTarget lower_target(const PolynomialFamily& family, const std::vector<double>& y_js, double log_x,
                         double epsilon = 0.5, double w = 11, double C = 10, bool allow_degenerate = false);

struct LowerReport {
  std::uint64_t x = 0, y = 0;
  std::vector<std::int64_t> k;
  std::uint64_t observed = 0;
  std::vector<double> e_values;    // E_{omega_{y_j}}(x; rho_j)
  double ratio = 0.0;              // observed sqrt(prod E_j) / y
  bool degenerate = false;
  Json to_json() const;
};

/// functions must be omega_{y_j}; counts the table at the target tuple.
LowerReport lower_bound_report(const PolynomialFamily& family, const std::vector<AdditiveFunction>& functions,
                               const ConcentrationTable& table, const LowerTarget& target);

/// Joint sum over a_1, ..., a_r <= bound with f_j(a_j) = k_j, (a_i, a_j) = (a_j, beta D) = 1 of
/// prod_j rho_j(a_j) phi(a_j) / a_j^2. With drop_constraints the coprimality conditions are
/// ignored and the result is the product of the r separate sums. Requires r <= 3, bound <= 1e8.
double eq6_rhs_sum(const PolynomialFamily& family, const std::vector<AdditiveFunction>& functions,
                   std::uint64_t bound, const std::vector<double>& k, bool drop_constraints = false);

struct PoissonRow {
  std::int64_t kprime = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct PoissonReport {
  double log_x = 0.0;
  std::uint64_t bound = 0;        // floor(x^{eps0})
  double y_star = 0.0;
  double L = 0.0;
  std::int64_t k = 0;
  double tail = 0.0;              // sum over y* < p <= x, p not dividing beta D, of rho(p)/p
  double tail_exact_to = 0.0;     // primes summed exactly up to here, asymptotic above
  std::vector<PoissonRow> rows;
  bool in_band = false;           // every ratio in [0.1, 10]
  bool smooth = false;            // every lhs > 0
  Json to_json() const;
};

/// Compares the squarefree W-rough sums against L^k'/k'! exp(tail) for 0 <= k' <= floor(L)
/// (or up to kprime_max when given).
PoissonReport poisson_profile_check(const PolynomialFamily& family, std::size_t j, double log_x, double y_j,
                                    double w, double C, double epsilon = 0.5,
                                    std::optional<std::int64_t> kprime_max = std::nullopt);

}  // namespace concentra
