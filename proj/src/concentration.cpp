#include "concentra/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <unordered_map>

#include "concentra/error.hpp"
#include "concentra/parallel.hpp"
#include "concentra/sieve.hpp"
#include "fastroots.hpp"

namespace concentra {

namespace {

Json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<double> ConcentrationTable::values(const std::vector<std::int64_t>& key) const {
  std::vector<double> out(key.size());
  for (std::size_t j = 0; j < key.size(); ++j) out[j] = static_cast<double>(key[j]) * quanta[j];
  return out;
}

std::vector<std::int64_t> ConcentrationTable::key_of(const std::vector<double>& v) const {
  if (v.size() != quanta.size()) throw Error(ErrorCode::invalid_argument, "value tuple has the wrong length");
  std::vector<std::int64_t> key(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) key[j] = std::llround(v[j] / quanta[j]);
  return key;
}

std::uint64_t ConcentrationTable::count_at(const std::vector<double>& v) const {
  auto it = counts.find(key_of(v));
  return it == counts.end() ? 0 : it->second;
}

ConcentrationTable build_table(const PolynomialFamily& family, const std::vector<AdditiveFunction>& functions,
                               std::uint64_t x, std::uint64_t y, std::uint64_t sieve_bound) {
  if (functions.size() != family.size())
    throw Error(ErrorCode::invalid_argument, "need one additive function per family member");
  ConcentrationTable table;
  table.family = family.to_string();
  table.x = x;
  table.y = y;
  for (const auto& f : functions) {
    table.functions.push_back(f.descriptor());
    table.quanta.push_back(f.quantum());
  }
  if (y == 0) return table;
  if (x + y < x) throw Error(ErrorCode::overflow, "interval end exceeds 64 bits");
  const IntervalSieve sieve(family, sieve_bound == 0 ? default_sieve_bound(family, x, y) : sieve_bound);
  const std::uint64_t segments = (y + kSegmentSize - 1) / kSegmentSize;
  const std::size_t r = family.size();
  std::vector<std::map<std::vector<std::int64_t>, std::uint64_t>> partial(segments);
  std::vector<std::uint64_t> excluded(segments, 0);
  parallel_for(segments, [&](std::size_t s) {
    const std::uint64_t lo = s * kSegmentSize;
    const std::uint64_t count = std::min(kSegmentSize, y - lo);
    std::vector<FactorBlock> blocks;
    for (std::size_t j = 0; j < r; ++j) blocks.push_back(sieve.factor_block(j, x + 1 + lo, count));
    std::vector<std::int64_t> key(r);
    for (std::uint64_t i = 0; i < count; ++i) {
      bool zero = false;
      for (std::size_t j = 0; j < r && !zero; ++j) {
        const FactorBlock& b = blocks[j];
        if (b.zero[i]) {
          zero = true;
          break;
        }
        double v = 0.0;
        for (std::size_t k = b.row_begin(i); k < b.row_end(i); ++k) v += functions[j].at(b.primes[k], b.exponents[k]);
        key[j] = functions[j].key(v);
      }
      if (zero)
        ++excluded[s];
      else
        ++partial[s][key];
    }
  });
  for (std::uint64_t s = 0; s < segments; ++s) {
    for (const auto& [key, c] : partial[s]) table.counts[key] += c;
    table.excluded += excluded[s];
  }
  table.total = y - table.excluded;
  return table;
}

SupResult sup_concentration(const ConcentrationTable& table) {
  if (table.counts.empty()) throw Error(ErrorCode::empty_table, "concentration table is empty");
  const std::vector<std::int64_t>* best = nullptr;
  std::uint64_t best_count = 0;
  for (const auto& [key, c] : table.counts) {
    if (c > best_count) {
      best = &key;
      best_count = c;
    }
  }
  return {table.values(*best), best_count};
}

std::string table_csv(const ConcentrationTable& table) {
  std::string out;
  for (std::size_t j = 0; j < table.quanta.size(); ++j) out += "k_" + std::to_string(j + 1) + ",";
  out += "count\n";
  for (const auto& [key, c] : table.counts) {
    for (double v : table.values(key)) out += format_value(v) + ",";
    out += std::to_string(c) + "\n";
  }
  return out;
}

Json UpperReport::to_json(const ReportParams& params) const {
  Json j;
  j["x"] = x;
  j["y"] = y;
  j["sup"] = sup.count;
  j["arg"] = sup.arg;
  j["E"] = e_values;
  j["reference"] = reference;
  j["ratio"] = ratio;
  j["ratio_loglog"] = ratio_loglog;
  j["z"] = number_or_inf(z);
  j["beta_d_factor"] = beta_d ? Json(*beta_d) : Json(nullptr);
  j["parameters"] = {{"epsilon", params.epsilon}, {"delta", params.delta}, {"lambda", params.lambda},
                     {"w", params.w}, {"C", params.C}};
  return j;
}

UpperReport upper_bound_report(const PolynomialFamily& family, const std::vector<AdditiveFunction>& functions,
                               const ConcentrationTable& table, const ReportParams& params) {
  UpperReport rep;
  rep.x = table.x;
  rep.y = table.y;
  if (!table.counts.empty()) rep.sup = sup_concentration(table);
  const double xe = std::max<double>(static_cast<double>(table.x), 2.0);
  double prod = 1.0;
  for (std::size_t j = 0; j < family.size(); ++j) {
    rep.e_values.push_back(e_f(functions[j], xe, Weight::rho(family.member(j))).value);
    prod *= std::sqrt(rep.e_values.back());
  }
  if (table.y > 0) {
    rep.reference = static_cast<double>(table.y) / prod;
    rep.ratio = static_cast<double>(rep.sup.count) / rep.reference;
    if (xe >= 3) {
      rep.ratio_loglog = static_cast<double>(rep.sup.count) *
                         std::pow(std::log(std::log(xe)), static_cast<double>(family.size()) / 2) /
                         static_cast<double>(table.y);
    }
  }
  rep.z = std::exp(std::pow(std::log(xe), 1 - params.lambda));
  try {
    rep.beta_d = beta_d_factor(family);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::degenerate_factor) throw;
  }
  return rep;
}

UpperReport upper_bound_report(const PolynomialFamily& family, const std::vector<AdditiveFunction>& functions,
                               std::uint64_t x, std::uint64_t y, const ReportParams& params) {
  return upper_bound_report(family, functions, build_table(family, functions, x, y), params);
}

Json LowerTarget::to_json() const {
  Json j;
  j["log_x"] = log_x;
  j["epsilon"] = epsilon;
  j["epsilon0"] = epsilon0;
  j["w"] = w;
  j["C"] = C;
  Json ys = Json::array(), stars = Json::array();
  for (double v : y) ys.push_back(number_or_inf(v));
  for (double v : y_star) stars.push_back(number_or_inf(v));
  j["y"] = ys;
  j["y_star"] = stars;
  j["L"] = L;
  j["k"] = k;
  j["degenerate"] = degenerate;
  return j;
}

LowerTarget lower_target(const PolynomialFamily& family, const std::vector<double>& y_js, double log_x,
                         double epsilon, double w, double C, bool allow_degenerate) {
  if (y_js.size() != family.size()) throw Error(ErrorCode::invalid_argument, "need one y_j per family member");
  if (!(log_x > 0)) throw Error(ErrorCode::invalid_argument, "x must exceed 1");
  if (!(epsilon > 0 && epsilon < 1)) throw Error(ErrorCode::invalid_argument, "epsilon must lie in (0, 1)");
  if (!(w >= 1) || !(C >= 1)) throw Error(ErrorCode::invalid_argument, "w and C must be at least 1");
  LowerTarget t;
  t.log_x = log_x;
  t.epsilon = epsilon;
  t.w = w;
  t.C = C;
  t.epsilon0 = epsilon / (50.0 * family.degree());
  t.y = y_js;
  const double cap = std::exp(t.epsilon0 / C * log_x);
  if (cap < w) {
    if (!allow_degenerate)
      throw Error(ErrorCode::range, "x^{eps0/C} = " + format_value(cap) + " is below w = " + format_value(w));
    t.degenerate = true;
  }
  const BigInt bd = family.beta_d();
  for (std::size_t j = 0; j < family.size(); ++j) {
    const double star = std::min(y_js[j], cap);
    t.y_star.push_back(star);
    double L = 0.0;
    if (!t.degenerate && star > w) {
      if (star > static_cast<double>(PrimeTable::kMaxLimit)) throw Error(ErrorCode::capacity, "y_j^* exceeds 2^34");
      L = prime_reciprocal_sum(AdditiveFunction::omega(), static_cast<std::uint64_t>(std::floor(w)),
                               static_cast<std::uint64_t>(std::floor(star)), Weight::rho(family.member(j)), bd);
    }
    t.L.push_back(L);
    t.k.push_back(static_cast<std::int64_t>(std::floor(L)));
  }
  return t;
}

Json LowerReport::to_json() const {
  Json j;
  j["x"] = x;
  j["y"] = y;
  j["k"] = k;
  j["observed"] = observed;
  j["E"] = e_values;
  j["ratio"] = ratio;
  j["degenerate"] = degenerate;
  return j;
}

LowerReport lower_bound_report(const PolynomialFamily& family, const std::vector<AdditiveFunction>& functions,
                               const ConcentrationTable& table, const LowerTarget& target) {
  if (target.k.size() != family.size()) throw Error(ErrorCode::invalid_argument, "target does not match the family");
  LowerReport rep;
  rep.x = table.x;
  rep.y = table.y;
  rep.k = target.k;
  rep.degenerate = target.degenerate || table.y == 0;
  std::vector<double> kv(target.k.begin(), target.k.end());
  rep.observed = table.count_at(kv);
  const double xe = std::max<double>(static_cast<double>(table.x), 2.0);
  double prod = 1.0;
  for (std::size_t j = 0; j < family.size(); ++j) {
    rep.e_values.push_back(e_f(functions[j], xe, Weight::rho(family.member(j))).value);
    prod *= rep.e_values.back();
  }
  if (table.y > 0) rep.ratio = static_cast<double>(rep.observed) * std::sqrt(prod) / static_cast<double>(table.y);
  return rep;
}

namespace {

// rho_j(p^nu) with a small cache for nu >= 2.
class RhoCache {
 public:
  explicit RhoCache(const IntPolynomial& q) : q_(q) {}
  std::uint64_t at(std::uint64_t p, int nu) {
    if (nu == 1) return detail::fast_count(q_, p);
    auto [it, fresh] = cache_.try_emplace((static_cast<u128>(p) << 8) | static_cast<unsigned>(nu), 0);
    if (fresh) {
      u128 m = 1;
      for (int i = 0; i < nu; ++i) m *= p;
      it->second = static_cast<std::uint64_t>(rho(q_, m));
    }
    return it->second;
  }

 private:
  const IntPolynomial& q_;
  std::map<u128, std::uint64_t> cache_;
};

struct Eq6Item {
  std::uint64_t a;
  double weight;
  std::vector<std::uint64_t> primes;
};

// All a <= bound with f(a) at the requested key and rho(a) != 0.
std::vector<Eq6Item> eq6_items(const IntPolynomial& q, const AdditiveFunction& f, std::uint64_t bound,
                               std::int64_t key, const BigInt& exclude, const std::vector<std::uint64_t>& primes) {
  RhoCache rc(q);
  std::vector<Eq6Item> items;
  std::vector<std::uint64_t> stack;
  std::function<void(std::uint64_t, std::size_t, double, double)> walk = [&](std::uint64_t a, std::size_t start,
                                                                              double fa, double wa) {
    if (f.key(fa) == key) items.push_back({a, wa, stack});
    for (std::size_t i = start; i < primes.size(); ++i) {
      const std::uint64_t p = primes[i];
      if (p > bound / a) break;
      if (exclude != 0 && exclude % p == 0) continue;
      std::uint64_t pk = p;
      double local = 1.0;
      stack.push_back(p);
      for (int nu = 1;; ++nu) {
        const std::uint64_t r = rc.at(p, nu);
        local = (nu == 1) ? static_cast<double>(p - 1) / (static_cast<double>(p) * static_cast<double>(p))
                          : local / static_cast<double>(p);
        if (r != 0) walk(a * pk, i + 1, fa + f.at(p, nu), wa * static_cast<double>(r) * local);
        if (pk > bound / a / p) break;
        pk *= p;
      }
      stack.pop_back();
    }
  };
  walk(1, 0, 0.0, 1.0);
  return items;
}

double sum_weights(const std::vector<Eq6Item>& items) {
  CompensatedSum s;
  for (const auto& it : items) s.add(it.weight);
  return s.value();
}

// G(d) = sum of weights of items divisible by d.
class DivisorSums {
 public:
  DivisorSums(const std::vector<Eq6Item>& items, std::uint64_t bound) : bound_(bound) {
    for (const auto& it : items) weight_[it.a] = it.weight;
  }
  double at(std::uint64_t d) {
    if (d > bound_) return 0.0;
    auto [it, fresh] = memo_.try_emplace(d, 0.0);
    if (fresh) {
      CompensatedSum s;
      for (std::uint64_t m = d; m <= bound_; m += d) {
        auto w = weight_.find(m);
        if (w != weight_.end()) s.add(w->second);
      }
      it->second = s.value();
    }
    return it->second;
  }

 private:
  std::uint64_t bound_;
  std::unordered_map<std::uint64_t, double> weight_;
  std::unordered_map<std::uint64_t, double> memo_;
};

// sum over d | prod(primes), squarefree, of mu(d) G(d).
double mobius_sum(const std::vector<std::uint64_t>& primes, DivisorSums& g, std::uint64_t bound) {
  CompensatedSum s;
  std::function<void(std::size_t, std::uint64_t, int)> rec = [&](std::size_t i, std::uint64_t d, int sign) {
    if (i == primes.size()) {
      s.add(sign * g.at(d));
      return;
    }
    rec(i + 1, d, sign);
    if (d <= bound / primes[i]) rec(i + 1, d * primes[i], -sign);
  };
  rec(0, 1, 1);
  return s.value();
}

std::vector<std::uint64_t> merge_primes(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  std::vector<std::uint64_t> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

double eq6_rhs_sum(const PolynomialFamily& family, const std::vector<AdditiveFunction>& functions,
                   std::uint64_t bound, const std::vector<double>& k, bool drop_constraints) {
  const std::size_t r = family.size();
  if (functions.size() != r || k.size() != r) throw Error(ErrorCode::invalid_argument, "arity mismatch");
  if (r > 3) throw Error(ErrorCode::capacity, "joint coprimality is supported for at most 3 members");
  if (bound > 100000000ULL) throw Error(ErrorCode::capacity, "x^{eps0} exceeds 1e8");
  if (bound < 1) return 0.0;
  const BigInt exclude = drop_constraints ? BigInt(0) : family.beta_d();
  const auto primes = PrimeTable(std::max<std::uint64_t>(bound, 2)).primes(2, bound);
  std::vector<std::vector<Eq6Item>> items;
  for (std::size_t j = 0; j < r; ++j) {
    items.push_back(eq6_items(family.member(j), functions[j], bound, functions[j].key(k[j]), exclude, primes));
  }
  if (drop_constraints || r == 1) {
    double prod = 1.0;
    for (const auto& it : items) prod *= sum_weights(it);
    return prod;
  }
  DivisorSums last(items[r - 1], bound);
  CompensatedSum total;
  if (r == 2) {
    for (const auto& a1 : items[0]) total.add(a1.weight * mobius_sum(a1.primes, last, bound));
    return total.value();
  }
  if (static_cast<double>(items[0].size()) * static_cast<double>(items[1].size()) > 2e8)
    throw Error(ErrorCode::capacity, "too many (a_1, a_2) pairs");
  for (const auto& a1 : items[0]) {
    for (const auto& a2 : items[1]) {
      if (std::gcd(a1.a, a2.a) != 1) continue;
      total.add(a1.weight * a2.weight * mobius_sum(merge_primes(a1.primes, a2.primes), last, bound));
    }
  }
  return total.value();
}

Json PoissonReport::to_json() const {
  Json j;
  j["log_x"] = log_x;
  j["bound"] = bound;
  j["y_star"] = number_or_inf(y_star);
  j["L"] = L;
  j["k"] = k;
  j["tail"] = tail;
  j["tail_exact_to"] = tail_exact_to;
  Json rs = Json::array();
  for (const auto& row : rows)
    rs.push_back({{"kprime", row.kprime}, {"lhs", row.lhs}, {"rhs", row.rhs}, {"ratio", row.ratio}});
  j["rows"] = rs;
  j["in_band"] = in_band;
  j["smooth"] = smooth;
  return j;
}

PoissonReport poisson_profile_check(const PolynomialFamily& family, std::size_t j, double log_x, double y_j,
                                    double w, double C, double epsilon, std::optional<std::int64_t> kprime_max) {
  if (j >= family.size()) throw Error(ErrorCode::range, "member index out of range");
  if (!(log_x > 0)) throw Error(ErrorCode::invalid_argument, "x must exceed 1");
  PoissonReport rep;
  rep.log_x = log_x;
  const double eps0 = epsilon / (50.0 * family.degree());
  const long double a_bound = std::exp(static_cast<long double>(eps0) * log_x);
  if (a_bound > 1e8L) throw Error(ErrorCode::capacity, "x^{eps0} exceeds 1e8");
  rep.bound = static_cast<std::uint64_t>(std::floor(a_bound * (1 + 1e-15L)));
  const double cap = std::exp(eps0 / C * log_x);
  rep.y_star = std::min(y_j, cap);
  const IntPolynomial& q = family.member(j);
  const BigInt bd = family.beta_d();
  const auto omega = AdditiveFunction::omega();
  if (rep.y_star > w)
    rep.L = prime_reciprocal_sum(omega, static_cast<std::uint64_t>(std::floor(w)),
                                 static_cast<std::uint64_t>(std::floor(rep.y_star)), Weight::rho(q), bd);
  rep.k = static_cast<std::int64_t>(std::floor(rep.L));
  const std::int64_t kmax = kprime_max.value_or(rep.k);
  if (kmax < 0) return rep;

  // Tail sum: exact up to max(1e7, y*) (capped at x), Mertens asymptotics beyond.
  const double x_val = log_x < std::log(static_cast<double>(PrimeTable::kMaxLimit)) ? std::exp(log_x)
                                                                                      : HUGE_VAL;
  rep.tail_exact_to = std::min(x_val, std::max(1e7, std::floor(rep.y_star)));
  const auto lo = static_cast<std::uint64_t>(std::floor(rep.y_star));
  const auto hi = static_cast<std::uint64_t>(std::floor(rep.tail_exact_to));
  rep.tail = prime_reciprocal_sum(omega, lo, hi, Weight::rho(q), bd);
  if (log_x > std::log(rep.tail_exact_to)) rep.tail += std::log(log_x / std::log(rep.tail_exact_to));

  // LHS: squarefree n <= bound, primes > w, p not dividing beta D.
  std::vector<CompensatedSum> lhs(static_cast<std::size_t>(kmax + 1));
  const auto w_floor = static_cast<std::uint64_t>(std::floor(w));
  std::vector<std::uint64_t> primes;
  if (rep.bound > w_floor) primes = PrimeTable(rep.bound).primes(w_floor + 1, rep.bound);
  std::vector<double> local(primes.size(), 0.0);
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const std::uint64_t p = primes[i];
    if (bd % p == 0) continue;
    const double r = static_cast<double>(detail::fast_count(q, p));
    local[i] = r * static_cast<double>(p - 1) / (static_cast<double>(p) * static_cast<double>(p));
  }
  std::function<void(std::uint64_t, std::size_t, std::int64_t, double)> walk =
      [&](std::uint64_t n, std::size_t start, std::int64_t cnt, double weight) {
        lhs[static_cast<std::size_t>(cnt)].add(weight);
        for (std::size_t i = start; i < primes.size(); ++i) {
          const std::uint64_t p = primes[i];
          if (p > rep.bound / n) break;
          if (local[i] == 0.0) continue;
          const std::int64_t c = cnt + (static_cast<double>(p) <= y_j ? 1 : 0);
          if (c > kmax) continue;
          walk(n * p, i + 1, c, weight * local[i]);
        }
      };
  walk(1, 0, 0, 1.0);
  rep.in_band = true;
  rep.smooth = true;
  double factorial = 1.0;
  for (std::int64_t kp = 0; kp <= kmax; ++kp) {
    if (kp > 0) factorial *= static_cast<double>(kp);
    PoissonRow row;
    row.kprime = kp;
    row.lhs = lhs[static_cast<std::size_t>(kp)].value();
    row.rhs = std::pow(rep.L, static_cast<double>(kp)) / factorial * std::exp(rep.tail);
    row.ratio = row.rhs > 0 ? row.lhs / row.rhs : 0.0;
    if (!(row.ratio >= 0.1 && row.ratio <= 10)) rep.in_band = false;
    if (!(row.lhs > 0)) rep.smooth = false;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace concentra
