#pragma once

// Slow reference implementations that share no code with the library.

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/miller_rabin.hpp>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

using i128 = __int128;
using boost::multiprecision::cpp_int;

// coeffs[i] multiplies x^i
inline cpp_int eval(const std::vector<std::int64_t>& c, std::int64_t n) {
  cpp_int v = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * n + *it;
  return v;
}

inline std::uint64_t rho_scan(const std::vector<std::int64_t>& c, std::uint64_t m) {
  std::uint64_t count = 0;
  for (std::uint64_t n = 0; n < m; ++n) {
    i128 v = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
      v = (v * static_cast<i128>(n) + *it) % static_cast<i128>(m);
    }
    if (v % static_cast<i128>(m) == 0) ++count;
  }
  return count;
}

inline bool is_prime_trial(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<std::pair<std::uint64_t, int>> trial_factor(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, int>> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    out.emplace_back(d, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline int omega(std::uint64_t n) { return static_cast<int>(trial_factor(n).size()); }

inline int big_omega(std::uint64_t n) {
  int s = 0;
  for (const auto& [p, e] : trial_factor(n)) s += e;
  return s;
}

inline bool probable_prime(const cpp_int& n) { return n > 1 && boost::multiprecision::miller_rabin_test(n, 30); }

inline std::vector<std::uint64_t> eratosthenes(std::uint64_t n) {
  std::vector<bool> comp(n + 1, false);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (comp[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= n; j += i) comp[j] = true;
  }
  return out;
}

inline cpp_int disc2(cpp_int a, cpp_int b, cpp_int c) { return b * b - 4 * a * c; }

// a x^3 + b x^2 + c x + d
inline cpp_int disc3(cpp_int a, cpp_int b, cpp_int c, cpp_int d) {
  return b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d + 18 * a * b * c * d;
}

// Plain trapezoid on a 1-periodic integrand, n nodes.
inline double periodic_mean(const std::function<double(double)>& f, int n) {
  long double s = 0;
  for (int i = 0; i < n; ++i) s += f(static_cast<double>(i) / n);
  return static_cast<double>(s / n);
}

// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const long double h = (static_cast<long double>(b) - a) / n;
  long double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4 : 2) * f(static_cast<double>(a + i * h));
  return static_cast<double>(s * h / 3);
}

}  // namespace oracle
