#pragma once

// Verification suites behind `concentra verify`. Each returns a pass flag and a
// deterministic JSON report (no timings, no thread-dependent fields).

#include <cstdint>
#include <string>
#include <vector>

#include "concentra/concentration.hpp"

namespace concentra {

struct SuiteResult {
  bool pass = false;
  Json report;
};

struct UpperSuiteConfig {
  std::string family = "x";
  std::vector<std::string> functions{"omega"};
  std::vector<int> decades{5, 6, 7};  // x = 10^d, y = x
  std::string metric = "ratio";       // ratio: sup prod sqrt(E) / y; loglog: sup (log log x)^{r/2} / y
  double band = 2.0;                  // pass when max / min <= band
  ReportParams params;
};
SuiteResult verify_upper(const UpperSuiteConfig& cfg);

struct LowerSuiteConfig {
  std::string family = "x";
  std::vector<double> y_js;           // empty: y_j = x for each member; infinity allowed
  std::vector<int> decades{5, 6, 7};
  double floor = 0.2;                 // pass when min >= floor * max and min > 0
  bool allow_degenerate = true;
  ReportParams params;
};
SuiteResult verify_lower(const LowerSuiteConfig& cfg);

SuiteResult verify_lemma1(std::size_t configs = 200, std::uint64_t seed = 42, double tolerance = 1e-10);

struct FourierSuiteConfig {
  std::vector<std::uint64_t> xs{100, 1000, 10000};  // x = y
  std::vector<std::string> functions{"omega", "big-omega"};
};
SuiteResult verify_fourier(const FourierSuiteConfig& cfg);

struct MertensSuiteConfig {
  std::string family = "x;x^2+1;x^2+x+1";
  double X = 1e7;
  std::vector<int> increment_decades{4, 5, 6};  // Delta_k = D(10^{k+1}) - D(10^k), nonincreasing in k
  double constant = 0.2615;                     // expected terminal offset for Q = X
  double constant_tol = 0.002;
};
SuiteResult verify_mertens(const MertensSuiteConfig& cfg);

struct StarSuiteConfig {
  std::vector<std::string> functions{"omega", "big-omega"};
  std::vector<double> ts{10, 30, 100};
  std::vector<double> us{1, 2, 3};
  double V = 2;
};
SuiteResult verify_star(const StarSuiteConfig& cfg);

}  // namespace concentra
