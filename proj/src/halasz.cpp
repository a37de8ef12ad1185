#include "concentra/halasz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "concentra/error.hpp"
#include "concentra/parallel.hpp"
#include "concentra/quadrature.hpp"
#include "concentra/sieve.hpp"

namespace concentra {

double BConfig::total() const {
  CompensatedSum s;
  for (const auto& [n, b] : B) s.add(b);
  return s.value();
}

double BConfig::S(double t) const {
  double s = 0.0;
  for (const auto& [n, b] : B) {
    const double v = std::sin(std::numbers::pi * static_cast<double>(n) * t);
    s += b * v * v;
  }
  return s;
}

IntegralCheck integral_lemma_check(const BConfig& cfg, double tolerance) {
  if (cfg.B.size() > 1000) throw Error(ErrorCode::capacity, "support larger than 1000");
  std::set<std::pair<std::int64_t, std::int64_t>> cuts{{0, 1}, {1, 1}};
  for (const auto& [n, b] : cfg.B) {
    if (n == 0) throw Error(ErrorCode::invalid_argument, "B_0 is not allowed");
    if (!(b >= 0) || b > 1e6) throw Error(ErrorCode::invalid_argument, "B_n must lie in [0, 1e6]");
    if (b == 0) continue;
    const std::int64_t d = n < 0 ? -n : n;
    for (std::int64_t m = 1; m < d; ++m) {
      const std::int64_t g = std::gcd(m, d);
      cuts.insert({m / g, d / g});
    }
  }
  // The integrand peaks where every sin(pi n t) vanishes, which is on this grid.
  std::vector<double> points;
  for (const auto& [m, d] : cuts) points.push_back(static_cast<double>(m) / static_cast<double>(d));
  std::sort(points.begin(), points.end());
  const auto f = [&](double t) {
    const double s = cfg.S(t);
    return (1 + s) * std::exp(-s);
  };
  const double panel_tol = tolerance / static_cast<double>(points.size() - 1);
  CompensatedSum value;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const auto r = integrate(f, points[i], points[i + 1], panel_tol);
    value.add(r.value);
    error += r.error;
  }
  IntegralCheck out;
  out.integral = value.value();
  out.error = error;
  out.ratio = out.integral * std::sqrt(1 + cfg.total());
  return out;
}

SingleBIdentity single_b_identity(double B, double tolerance) {
  if (!(B > 0)) throw Error(ErrorCode::invalid_argument, "B must be positive");
  SingleBIdentity out;
  const auto lhs = [B](double t) {
    const double s = std::sin(std::numbers::pi * t);
    return std::exp(-B * s * s);
  };
  out.lhs = integrate(lhs, 0.0, 0.5, 0.5 * tolerance).value + integrate(lhs, 0.5, 1.0, 0.5 * tolerance).value;
  // u = sqrt(B) sin(theta) removes the endpoint singularity.
  const auto rhs = [B](double theta) {
    const double s = std::sin(theta);
    return std::exp(-B * s * s);
  };
  out.rhs = 2 / std::numbers::pi * integrate(rhs, 0.0, std::numbers::pi / 2, tolerance * std::numbers::pi / 2).value;
  return out;
}

std::uint64_t lemma1_config_seed(std::uint64_t master, std::uint64_t i) { return SplitMix64(master + i).next(); }

BConfig random_bconfig(std::uint64_t seed) {
  SplitMix64 rng(seed);
  BConfig cfg;
  const std::uint64_t size = 1 + rng.below(20);
  const double lo = std::log(1e-2), hi = std::log(1e4);
  while (cfg.B.size() < size) {
    std::int64_t n = static_cast<std::int64_t>(rng.below(100)) - 50;
    if (n >= 0) ++n;
    if (cfg.B.count(n)) continue;
    cfg.B[n] = std::exp(lo + (hi - lo) * rng.uniform());
  }
  return cfg;
}

Lemma1Suite run_lemma1_suite(std::size_t count, std::uint64_t master_seed, double tolerance) {
  Lemma1Suite suite;
  suite.master_seed = master_seed;
  suite.tolerance = tolerance;
  suite.configs.resize(count);
  parallel_for(count, [&](std::size_t i) {
    Lemma1Config& c = suite.configs[i];
    c.seed = lemma1_config_seed(master_seed, i);
    c.cfg = random_bconfig(c.seed);
    c.sum_b = c.cfg.total();
    const IntegralCheck r = integral_lemma_check(c.cfg, tolerance);
    c.integral = r.integral;
    c.ratio = r.ratio;
  });
  suite.pass = true;
  for (const auto& c : suite.configs) {
    suite.max_ratio = std::max(suite.max_ratio, c.ratio);
    suite.max_integral = std::max(suite.max_integral, c.integral);
  }
  if (suite.max_ratio > 3.0 || suite.max_integral > 1.0 + tolerance) suite.pass = false;
  for (double B : {1e-4, 1.0, 10.0, 100.0, 1e4}) {
    const SingleBIdentity id = single_b_identity(B);
    suite.identities.emplace_back(B, id);
    suite.max_identity_gap = std::max(suite.max_identity_gap, std::fabs(id.lhs - id.rhs));
  }
  if (suite.max_identity_gap > 1e-8) suite.pass = false;
  return suite;
}

Json Lemma1Suite::to_json() const {
  Json j;
  j["seed"] = master_seed;
  j["tolerance"] = tolerance;
  Json cs = Json::array();
  for (const auto& c : configs) {
    Json support = Json::array();
    for (const auto& [n, b] : c.cfg.B) support.push_back({n, b});
    cs.push_back({{"seed", c.seed}, {"support", support}, {"sumB", c.sum_b}, {"integral", c.integral},
                  {"ratio", c.ratio}});
  }
  j["configs"] = cs;
  Json ids = Json::array();
  for (const auto& [B, id] : identities) ids.push_back({{"B", B}, {"lhs", id.lhs}, {"rhs", id.rhs}});
  j["single_b"] = ids;
  j["summary"] = {{"maxRatio", max_ratio},
                  {"maxIntegral", max_integral},
                  {"maxIdentityGap", max_identity_gap},
                  {"configCount", configs.size()},
                  {"pass", pass}};
  return j;
}

std::vector<PrimePower> FriableSet::factors(std::size_t i) const {
  std::vector<PrimePower> out;
  for (std::uint32_t k = offsets[i]; k < offsets[i + 1]; ++k) out.push_back({primes[k], exponents[k]});
  return out;
}

void for_each_friable(std::uint64_t x, std::uint64_t y,
                      const std::function<void(std::uint64_t, std::span<const PrimePower>)>& fn) {
  if (x > kMaxFriableX) throw Error(ErrorCode::capacity, "friable enumeration is limited to x <= 1e7");
  if (x < 1) return;
  const std::uint64_t top = std::min(x, y);
  const auto primes = top >= 2 ? PrimeTable(top).primes(2, top) : std::vector<std::uint64_t>{};
  std::vector<PrimePower> stack;
  const std::function<void(std::uint64_t, std::size_t)> walk = [&](std::uint64_t n, std::size_t start) {
    fn(n, stack);
    for (std::size_t i = start; i < primes.size(); ++i) {
      const std::uint64_t p = primes[i];
      if (p > x / n) break;
      std::uint64_t m = n;
      stack.push_back({p, 0});
      while (m <= x / p) {
        m *= p;
        ++stack.back().nu;
        walk(m, i + 1);
      }
      stack.pop_back();
    }
  };
  walk(1, 0);
}

FriableSet friable_set(std::uint64_t x, std::uint64_t y) {
  std::vector<std::pair<std::uint64_t, std::vector<PrimePower>>> raw;
  for_each_friable(x, y, [&](std::uint64_t n, std::span<const PrimePower> f) {
    raw.emplace_back(n, std::vector<PrimePower>(f.begin(), f.end()));
  });
  std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  FriableSet s;
  s.x = x;
  s.y = y;
  for (const auto& [n, f] : raw) {
    s.elements.push_back(n);
    for (const auto& pp : f) {
      s.primes.push_back(static_cast<std::uint64_t>(pp.p));
      s.exponents.push_back(static_cast<std::uint8_t>(pp.nu));
    }
    s.offsets.push_back(static_cast<std::uint32_t>(s.primes.size()));
  }
  return s;
}

WeightFunction WeightFunction::unit() { return {}; }

WeightFunction WeightFunction::rho(IntPolynomial q) {
  WeightFunction w;
  w.kind_ = WeightKind::rho;
  w.q_ = std::move(q);
  return w;
}

WeightFunction WeightFunction::rho_tilde(IntPolynomial q, std::uint64_t limit) {
  WeightFunction w;
  w.kind_ = WeightKind::rho_tilde;
  w.q_ = std::move(q);
  w.limit_ = limit;
  return w;
}

double WeightFunction::at(std::uint64_t p, int nu) const {
  if (kind_ == WeightKind::unit) return 1.0;
  if (kind_ == WeightKind::rho_tilde && p > limit_) return 0.0;
  auto [it, fresh] = cache_.try_emplace({p, nu}, 0.0);
  if (fresh) {
    u128 m = 1;
    for (int i = 0; i < nu; ++i) m *= p;
    double v = static_cast<double>(concentra::rho(*q_, m));
    // p^nu / phi(p^nu) = p / (p - 1)
    if (kind_ == WeightKind::rho_tilde) v *= static_cast<double>(p) / static_cast<double>(p - 1);
    it->second = v;
  }
  return it->second;
}

double WeightFunction::operator()(std::span<const PrimePower> factors) const {
  double v = 1.0;
  for (const auto& pp : factors) v *= at(static_cast<std::uint64_t>(pp.p), pp.nu);
  return v;
}

std::string WeightFunction::describe() const {
  switch (kind_) {
    case WeightKind::unit:
      return "unit";
    case WeightKind::rho:
      return "rho[" + q_->to_string() + "]";
    case WeightKind::rho_tilde:
      return "rho_tilde[" + q_->to_string() + "]" + (limit_ == UINT64_MAX ? "" : ":" + std::to_string(limit_));
  }
  return "unit";
}

std::map<std::int64_t, double> friable_groups(const AdditiveFunction& f, const WeightFunction& r, std::uint64_t x,
                                              std::uint64_t y) {
  if (x < 1) throw Error(ErrorCode::invalid_argument, "S(x, y) is empty for x < 1");
  std::map<std::int64_t, CompensatedSum> acc;
  for_each_friable(x, y, [&](std::uint64_t, std::span<const PrimePower> fac) {
    const double w = r(fac);
    if (w != 0.0) acc[f.key(eval_f(f, fac))].add(w);
  });
  std::map<std::int64_t, double> out;
  for (const auto& [k, s] : acc) out[k] = s.value();
  return out;
}

WeightedSup weighted_concentration(const AdditiveFunction& f, const WeightFunction& r, std::uint64_t x,
                                   std::uint64_t y) {
  const auto groups = friable_groups(f, r, x, y);
  WeightedSup best;
  bool first = true;
  for (const auto& [k, v] : groups) {
    if (first || v > best.value) {
      best = {v, f.value_of_key(k)};
      first = false;
    }
  }
  return best;
}

std::complex<double> char_sum(const AdditiveFunction& f, const std::map<std::int64_t, double>& groups, double t) {
  CompensatedSum re, im;
  for (const auto& [k, w] : groups) {
    // Reduce f(n) t mod 1 before scaling by 2 pi.
    double phase = std::fmod(f.value_of_key(k) * t, 1.0);
    phase *= 2 * std::numbers::pi;
    re.add(w * std::cos(phase));
    im.add(w * std::sin(phase));
  }
  return {re.value(), im.value()};
}

std::complex<double> char_sum(const AdditiveFunction& f, const WeightFunction& r, std::uint64_t x, std::uint64_t y,
                              double t) {
  return char_sum(f, friable_groups(f, r, x, y), t);
}

FourierCheck fourier_inversion_check(const AdditiveFunction& f, const std::map<std::int64_t, double>& groups,
                                     std::int64_t k) {
  std::int64_t lo = k, hi = k;
  for (const auto& [key, w] : groups) {
    const double v = f.value_of_key(key);
    if (v != std::round(v)) throw Error(ErrorCode::non_integer_values, "f takes the non-integer value " + std::to_string(v));
    lo = std::min(lo, static_cast<std::int64_t>(v));
    hi = std::max(hi, static_cast<std::int64_t>(v));
  }
  if (hi - lo > 1000000) throw Error(ErrorCode::capacity, "value range too wide for the discrete transform");
  // R is a trigonometric polynomial with frequencies in [lo, hi]; N nodes integrate
  // R(t) e^{-2 pi i k t} exactly.
  const std::int64_t N = hi - lo + 1;
  FourierCheck out;
  out.k = static_cast<double>(k);
  CompensatedSum re;
  for (std::int64_t m = 0; m < N; ++m) {
    const double t = static_cast<double>(m) / static_cast<double>(N);
    const std::complex<double> R = char_sum(f, groups, t);
    const double phase = -2 * std::numbers::pi * std::fmod(static_cast<double>(((k % N) + N) % N * m % N) / N, 1.0);
    re.add((R * std::complex<double>(std::cos(phase), std::sin(phase))).real());
  }
  out.integral = re.value() / static_cast<double>(N);
  for (const auto& [key, w] : groups)
    if (f.value_of_key(key) == static_cast<double>(k)) out.exact += w;
  out.pass = std::fabs(out.integral - out.exact) <= 1e-9;
  return out;
}

FourierCheck fourier_inversion_check(const AdditiveFunction& f, const WeightFunction& r, std::uint64_t x,
                                     std::uint64_t y, std::int64_t k) {
  return fourier_inversion_check(f, friable_groups(f, r, x, y), k);
}

}  // namespace concentra
