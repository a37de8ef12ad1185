#include "concentra/additive.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "concentra/error.hpp"
#include "concentra/parallel.hpp"
#include "concentra/quadrature.hpp"
#include "concentra/sieve.hpp"
#include "fastroots.hpp"

namespace concentra {

AdditiveFunction AdditiveFunction::omega() { return {}; }

AdditiveFunction AdditiveFunction::big_omega() {
  AdditiveFunction f;
  f.kind_ = AdditiveKind::big_omega;
  return f;
}

AdditiveFunction AdditiveFunction::omega_y(double y) {
  if (std::isnan(y)) throw Error(ErrorCode::invalid_argument, "omega_y threshold is NaN");
  AdditiveFunction f;
  f.kind_ = AdditiveKind::omega_y;
  f.y_ = y;
  return f;
}

AdditiveFunction AdditiveFunction::custom(std::map<std::pair<u128, int>, double> values, double default_value,
                                          std::string source) {
  AdditiveFunction f;
  f.kind_ = AdditiveKind::custom;
  f.default_value_ = default_value;
  f.integer_custom_ = std::floor(default_value) == default_value;
  for (const auto& [pp, v] : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::invalid_argument, "custom value must be finite");
    if (pp.second < 1) throw Error(ErrorCode::invalid_argument, "custom exponent must be at least 1");
    if (std::floor(v) != v) f.integer_custom_ = false;
  }
  f.custom_ = std::move(values);
  f.quantum_ = kDefaultQuantum;
  f.source_ = std::move(source);
  return f;
}

AdditiveFunction AdditiveFunction::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot read " + path);
  std::map<std::pair<u128, int>, double> values;
  double default_value = 0.0;
  bool have_default = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string first;
    if (!(ss >> first)) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    if (first == "default") {
      if (!(ss >> default_value)) throw Error(ErrorCode::parse, "missing default value at " + where);
      have_default = true;
    } else {
      int nu = 0;
      double v = 0;
      if (!(ss >> nu >> v)) throw Error(ErrorCode::parse, "expected 'p nu value' at " + where);
      const i128 p = parse_i128(first);
      if (p < 2 || !is_prime(static_cast<u128>(p))) throw Error(ErrorCode::parse, "not a prime at " + where);
      values[{static_cast<u128>(p), nu}] = v;
    }
    std::string rest;
    if (ss >> rest) throw Error(ErrorCode::parse, "trailing text at " + where);
  }
  if (!have_default) throw Error(ErrorCode::parse, path + " lacks a 'default' line");
  return custom(std::move(values), default_value, path);
}

AdditiveFunction AdditiveFunction::parse(std::string_view descriptor) {
  if (descriptor == "omega") return omega();
  if (descriptor == "big-omega" || descriptor == "big_omega" || descriptor == "Omega") return big_omega();
  if (descriptor.starts_with("omega_y:")) {
    const std::string arg(descriptor.substr(8));
    if (arg == "inf" || arg == "infinity") return omega_y(kInfinity);
    char* end = nullptr;
    const double y = std::strtod(arg.c_str(), &end);
    if (arg.empty() || *end != '\0') throw Error(ErrorCode::parse, "bad omega_y threshold: " + arg);
    return omega_y(y);
  }
  if (descriptor.starts_with("custom:")) return from_file(std::string(descriptor.substr(7)));
  throw Error(ErrorCode::parse, "unknown additive function: " + std::string(descriptor));
}

double AdditiveFunction::at(u128 p, int nu) const {
  switch (kind_) {
    case AdditiveKind::omega:
      return 1.0;
    case AdditiveKind::big_omega:
      return nu;
    case AdditiveKind::omega_y:
      return static_cast<long double>(p) <= static_cast<long double>(y_) ? 1.0 : 0.0;
    case AdditiveKind::custom: {
      auto it = custom_.find({p, nu});
      return it == custom_.end() ? default_value_ : it->second;
    }
  }
  return 0.0;
}

void AdditiveFunction::set_quantum(double q) {
  if (!(q > 0)) throw Error(ErrorCode::invalid_argument, "quantum must be positive");
  quantum_ = q;
}

std::string AdditiveFunction::descriptor() const {
  switch (kind_) {
    case AdditiveKind::omega:
      return "omega";
    case AdditiveKind::big_omega:
      return "big-omega";
    case AdditiveKind::omega_y: {
      if (std::isinf(y_)) return "omega_y:inf";
      std::ostringstream ss;
      ss.precision(17);
      ss << y_;
      return "omega_y:" + ss.str();
    }
    case AdditiveKind::custom:
      return "custom:" + source_;
  }
  return {};
}

std::int64_t AdditiveFunction::key(double value) const { return std::llround(value / quantum_); }

double eval_f(const AdditiveFunction& f, std::span<const PrimePower> factors) {
  double s = 0.0;
  for (const auto& pp : factors) s += f.at(pp.p, pp.nu);
  return s;
}

std::string Weight::describe() const { return poly ? "rho[" + poly->to_string() + "]" : "unit"; }

namespace {

// Deterministic blocked sum of term(p) over primes in (lo, hi].
double blocked_prime_sum(std::uint64_t lo, std::uint64_t hi, const std::function<double(std::uint64_t)>& term) {
  if (hi <= lo) return 0.0;
  const PrimeTable table(hi);
  constexpr std::uint64_t kBlock = std::uint64_t{1} << 20;
  const std::uint64_t blocks = (hi - lo + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks, 0.0);
  parallel_for(blocks, [&](std::size_t b) {
    CompensatedSum s;
    const std::uint64_t from = lo + 1 + b * kBlock;
    const std::uint64_t to = std::min(hi, lo + (b + 1) * kBlock);
    table.for_each_prime(from, to, [&](std::uint64_t p) { s.add(term(p)); });
    partial[b] = s.value();
  });
  CompensatedSum total;
  for (double v : partial) total.add(v);
  return total.value();
}

double weight_at(const Weight& w, std::uint64_t p) {
  return w.poly ? static_cast<double>(detail::fast_count(*w.poly, p)) : 1.0;
}

std::uint64_t floor_limit(double x) {
  if (!(x >= 2)) throw Error(ErrorCode::invalid_argument, "x must be at least 2");
  if (x > static_cast<double>(PrimeTable::kMaxLimit)) throw Error(ErrorCode::capacity, "x exceeds 2^34");
  return static_cast<std::uint64_t>(std::floor(x));
}

}  // namespace

double prime_reciprocal_sum(const AdditiveFunction& f, std::uint64_t lo, std::uint64_t hi, const Weight& weight,
                            const BigInt& exclude) {
  if (hi > PrimeTable::kMaxLimit) throw Error(ErrorCode::capacity, "prime range exceeds 2^34");
  if (f.kind() == AdditiveKind::omega_y && f.y() < static_cast<double>(hi))
    hi = f.y() < static_cast<double>(lo) ? lo : static_cast<std::uint64_t>(std::floor(f.y()));
  return blocked_prime_sum(lo, hi, [&](std::uint64_t p) {
    if (f.at(p, 1) == 0.0) return 0.0;
    if (exclude != 0 && exclude % p == 0) return 0.0;
    return weight_at(weight, p) / static_cast<double>(p);
  });
}

EfResult e_f(const AdditiveFunction& f, double x, const Weight& weight) {
  const std::uint64_t limit = floor_limit(x);
  return {x, weight.describe(), 1.0 + prime_reciprocal_sum(f, 1, limit, weight)};
}

std::vector<double> default_mertens_grid(double X) {
  std::vector<double> grid;
  for (double t = 10; t <= X * (1 + 1e-12); t *= 10) grid.push_back(t);
  if (grid.empty() || grid.back() < X) {
    if (X >= 10) grid.push_back(X);
  }
  return grid;
}

MertensDeviation mertens_deviation(const PolynomialFamily& family, std::size_t j, double X, std::vector<double> grid) {
  if (grid.empty()) throw Error(ErrorCode::empty_grid, "sample grid is empty");
  if (!(X >= 10)) throw Error(ErrorCode::invalid_argument, "X must be at least 10");
  if (j >= family.size()) throw Error(ErrorCode::range, "member index out of range");
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.front() < 10 || grid.back() > X) throw Error(ErrorCode::range, "grid points must lie in [10, X]");
  const IntPolynomial& q = family.member(j);
  const std::uint64_t limit = floor_limit(grid.back());
  const PrimeTable table(limit);
  MertensDeviation out;
  out.member = j;
  out.X = X;
  CompensatedSum recip, count;
  std::size_t g = 0;
  auto record = [&](double t) {
    MertensPoint pt;
    pt.t = t;
    pt.reciprocal_sum = recip.value();
    pt.loglog = std::log(std::log(t));
    pt.offset = pt.reciprocal_sum - pt.loglog;
    pt.count_sum = count.value();
    pt.li = log_integral(t);
    pt.li_offset = pt.count_sum - pt.li;
    out.dev_log = std::max(out.dev_log, std::fabs(pt.offset));
    out.dev_li = std::max(out.dev_li, std::fabs(pt.li_offset));
    out.dev_li_scaled =
        std::max(out.dev_li_scaled, std::fabs(pt.li_offset) / (1 + t * std::exp(-std::sqrt(std::log(t)))));
    out.points.push_back(pt);
  };
  table.for_each_prime(2, limit, [&](std::uint64_t p) {
    while (g < grid.size() && grid[g] < static_cast<double>(p)) record(grid[g++]);
    const double r = static_cast<double>(detail::fast_count(q, p));
    recip.add(r / static_cast<double>(p));
    count.add(r);
  });
  while (g < grid.size()) record(grid[g++]);
  out.terminal_offset = out.points.back().offset;
  return out;
}

namespace {

std::uint64_t power_floor(double t, double u) {
  if (std::floor(t) == t && std::floor(u) == u && u >= 0 && u <= 64) {
    u128 v = 1;
    const u128 base = static_cast<u128>(t);
    for (int i = 0; i < static_cast<int>(u); ++i) {
      v *= base;
      if (v > u128{1} << 62) return std::uint64_t{1} << 62;
    }
    return static_cast<std::uint64_t>(v);
  }
  const long double v = std::pow(static_cast<long double>(t), static_cast<long double>(u));
  if (v > 0x1p62L) return std::uint64_t{1} << 62;
  return static_cast<std::uint64_t>(std::floor(v));
}

}  // namespace

StarReport star_condition_check(const AdditiveFunction& f, double t, double u, double V) {
  if (!(t >= 2)) throw Error(ErrorCode::invalid_argument, "t must be at least 2");
  if (!(u >= 0)) throw Error(ErrorCode::invalid_argument, "u must be nonnegative");
  StarReport rep;
  rep.t = t;
  rep.u = u;
  rep.V = V;
  rep.limit = power_floor(t, u);
  if (rep.limit > 1000000000ULL) throw Error(ErrorCode::capacity, "t^u exceeds 1e9");
  rep.bound = std::pow(V, u);
  std::set<std::int64_t> keys{f.key(0.0)};
  rep.rough_count = 1;
  const auto tf = static_cast<std::uint64_t>(std::floor(t));
  std::vector<std::uint64_t> primes;
  if (rep.limit > tf) primes = PrimeTable(rep.limit).primes(tf + 1, rep.limit);
  const std::uint64_t limit = rep.limit;
  std::function<void(std::uint64_t, std::size_t, double)> walk = [&](std::uint64_t m, std::size_t start, double fm) {
    for (std::size_t i = start; i < primes.size(); ++i) {
      const std::uint64_t p = primes[i];
      if (p > limit / m) break;
      std::uint64_t n = m * p;
      for (int nu = 1;; ++nu) {
        const double fv = fm + f.at(p, nu);
        keys.insert(f.key(fv));
        ++rep.rough_count;
        walk(n, i + 1, fv);
        if (n > limit / p) break;
        n *= p;
      }
    }
  };
  walk(1, 0, 0.0);
  for (std::int64_t k : keys) rep.values.push_back(f.value_of_key(k));
  rep.pass = static_cast<double>(rep.values.size()) <= rep.bound * (1 + 1e-12);
  return rep;
}

double beta_d_factor(const PolynomialFamily& family) {
  const BigInt m = family.beta_d();
  if (m > BigInt(kI128Max)) throw Error(ErrorCode::overflow, "|beta D| exceeds 127 bits");
  const u128 value = static_cast<u128>(parse_i128(m.str()));
  double ratio = 1.0;
  for (const auto& [p, nu] : factorize(value)) {
    (void)nu;
    if (p >= (u128{1} << 63)) throw Error(ErrorCode::range, "prime factor of beta D exceeds 2^63");
    const std::uint64_t p64 = static_cast<std::uint64_t>(p);
    const std::uint64_t r = count_roots_mod_p(family.product(), p64);
    if (r >= p64)
      throw Error(ErrorCode::degenerate_factor,
                  "phi_0(beta D) = 0 because rho_0(" + std::to_string(p64) + ") = " + std::to_string(p64));
    ratio *= static_cast<double>(p64) / static_cast<double>(p64 - r);
  }
  return ratio;
}

}  // namespace concentra
