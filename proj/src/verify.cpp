#include "concentra/verify.hpp"

#include <algorithm>
#include <cmath>

#include "concentra/error.hpp"
#include "concentra/halasz.hpp"

namespace concentra {

namespace {

std::vector<AdditiveFunction> parse_functions(const std::vector<std::string>& descriptors, std::size_t r) {
  if (descriptors.size() != r) throw Error(ErrorCode::invalid_argument, "need one function per family member");
  std::vector<AdditiveFunction> out;
  for (const auto& d : descriptors) out.push_back(AdditiveFunction::parse(d));
  return out;
}

std::uint64_t pow10(int d) {
  if (d < 0 || d > 18) throw Error(ErrorCode::range, "decade out of range");
  std::uint64_t v = 1;
  for (int i = 0; i < d; ++i) v *= 10;
  return v;
}

Json finite_or_string(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

SuiteResult verify_upper(const UpperSuiteConfig& cfg) {
  if (cfg.metric != "ratio" && cfg.metric != "loglog")
    throw Error(ErrorCode::invalid_argument, "metric must be ratio or loglog");
  if (cfg.decades.empty()) throw Error(ErrorCode::invalid_argument, "no decades given");
  const PolynomialFamily family = parse_family(cfg.family);
  const auto functions = parse_functions(cfg.functions, family.size());
  Json rows = Json::array();
  double lo = HUGE_VAL, hi = 0.0;
  for (int d : cfg.decades) {
    const std::uint64_t x = pow10(d);
    const UpperReport rep = upper_bound_report(family, functions, x, x, cfg.params);
    const double m = cfg.metric == "ratio" ? rep.ratio : rep.ratio_loglog;
    lo = std::min(lo, m);
    hi = std::max(hi, m);
    Json row = rep.to_json(cfg.params);
    row["metric"] = m;
    rows.push_back(row);
  }
  const double spread = lo > 0 ? hi / lo : HUGE_VAL;
  SuiteResult out;
  out.pass = lo > 0 && spread <= cfg.band;
  out.report = {{"suite", "upper"},    {"family", family.to_string()}, {"functions", cfg.functions},
                {"metric", cfg.metric}, {"band", cfg.band},             {"decades", rows},
                {"min", lo},            {"max", hi},                    {"spread", finite_or_string(spread)},
                {"pass", out.pass}};
  return out;
}

SuiteResult verify_lower(const LowerSuiteConfig& cfg) {
  if (cfg.decades.empty()) throw Error(ErrorCode::invalid_argument, "no decades given");
  const PolynomialFamily family = parse_family(cfg.family);
  if (!cfg.y_js.empty() && cfg.y_js.size() != family.size())
    throw Error(ErrorCode::invalid_argument, "need one y_j per family member");
  Json rows = Json::array();
  double lo = HUGE_VAL, hi = 0.0;
  for (int d : cfg.decades) {
    const std::uint64_t x = pow10(d);
    std::vector<double> ys = cfg.y_js;
    if (ys.empty()) ys.assign(family.size(), static_cast<double>(x));
    const LowerTarget target = lower_target(family, ys, std::log(static_cast<double>(x)), cfg.params.epsilon,
                                            cfg.params.w, cfg.params.C, cfg.allow_degenerate);
    std::vector<AdditiveFunction> functions;
    for (double yj : ys) functions.push_back(AdditiveFunction::omega_y(yj));
    const ConcentrationTable table = build_table(family, functions, x, x);
    const LowerReport rep = lower_bound_report(family, functions, table, target);
    lo = std::min(lo, rep.ratio);
    hi = std::max(hi, rep.ratio);
    rows.push_back({{"target", target.to_json()}, {"report", rep.to_json()}});
  }
  SuiteResult out;
  out.pass = lo > 0 && lo >= cfg.floor * hi;
  out.report = {{"suite", "lower"}, {"family", family.to_string()}, {"floor", cfg.floor}, {"decades", rows},
                {"min", lo},        {"max", hi},                    {"pass", out.pass}};
  return out;
}

SuiteResult verify_lemma1(std::size_t configs, std::uint64_t seed, double tolerance) {
  const Lemma1Suite suite = run_lemma1_suite(configs, seed, tolerance);
  SuiteResult out;
  out.pass = suite.pass;
  out.report = suite.to_json();
  out.report["suite"] = "lemma1";
  return out;
}

SuiteResult verify_fourier(const FourierSuiteConfig& cfg) {
  SuiteResult out;
  out.pass = true;
  Json runs = Json::array();
  double worst = 0.0;
  for (const auto& desc : cfg.functions) {
    const AdditiveFunction f = AdditiveFunction::parse(desc);
    for (std::uint64_t x : cfg.xs) {
      const auto groups = friable_groups(f, WeightFunction::unit(), x, x);
      Json checks = Json::array();
      bool ok = true;
      for (const auto& [key, w] : groups) {
        const double v = f.value_of_key(key);
        const FourierCheck c = fourier_inversion_check(f, groups, static_cast<std::int64_t>(std::llround(v)));
        worst = std::max(worst, std::fabs(c.integral - c.exact));
        ok = ok && c.pass;
        checks.push_back({{"k", c.k}, {"integral", c.integral}, {"exact", c.exact}, {"pass", c.pass}});
      }
      out.pass = out.pass && ok;
      runs.push_back({{"f", f.descriptor()}, {"x", x}, {"y", x}, {"checks", checks}, {"pass", ok}});
    }
  }
  out.report = {{"suite", "fourier"}, {"runs", runs}, {"max_abs_error", worst}, {"pass", out.pass}};
  return out;
}

SuiteResult verify_mertens(const MertensSuiteConfig& cfg) {
  const PolynomialFamily family = parse_family(cfg.family);
  SuiteResult out;
  out.pass = true;
  Json members = Json::array();
  for (std::size_t j = 0; j < family.size(); ++j) {
    const MertensDeviation dev = mertens_deviation(family, j, cfg.X, default_mertens_grid(cfg.X));
    // Running maximum of |offset| at each grid point.
    std::vector<std::pair<double, double>> running;
    double m = 0.0;
    Json points = Json::array();
    for (const auto& p : dev.points) {
      m = std::max(m, std::fabs(p.offset));
      running.emplace_back(p.t, m);
      points.push_back({{"t", p.t},
                        {"offset", p.offset},
                        {"dev_log", m},
                        {"li_offset", p.li_offset}});
    }
    const auto at = [&](double t) {
      for (const auto& [tt, v] : running)
        if (std::fabs(tt - t) <= 1e-9 * t) return v;
      throw Error(ErrorCode::range, "grid lacks t = " + std::to_string(t));
    };
    Json increments = Json::array();
    bool monotone = true;
    double prev = HUGE_VAL;
    for (int k : cfg.increment_decades) {
      const double inc = at(static_cast<double>(pow10(k + 1))) - at(static_cast<double>(pow10(k)));
      increments.push_back({{"k", k}, {"increment", inc}});
      if (inc > prev + 1e-12) monotone = false;
      prev = inc;
    }
    bool ok = monotone;
    Json entry = {{"member", family.member(j).to_string()},
                  {"dev_log", dev.dev_log},
                  {"dev_li", dev.dev_li},
                  {"dev_li_scaled", dev.dev_li_scaled},
                  {"terminal_offset", dev.terminal_offset},
                  {"increments", increments},
                  {"monotone", monotone}};
    if (family.member(j).to_string() == "x") {
      const bool near = std::fabs(dev.terminal_offset - cfg.constant) <= cfg.constant_tol;
      entry["constant_check"] = near;
      ok = ok && near;
    }
    entry["points"] = points;
    entry["pass"] = ok;
    out.pass = out.pass && ok;
    members.push_back(entry);
  }
  out.report = {{"suite", "mertens"},
                {"family", family.to_string()},
                {"X", cfg.X},
                {"constant", cfg.constant},
                {"constant_tol", cfg.constant_tol},
                {"members", members},
                {"pass", out.pass}};
  return out;
}

SuiteResult verify_star(const StarSuiteConfig& cfg) {
  SuiteResult out;
  out.pass = true;
  Json checks = Json::array();
  for (const auto& desc : cfg.functions) {
    const AdditiveFunction f = AdditiveFunction::parse(desc);
    for (double t : cfg.ts) {
      for (double u : cfg.us) {
        const StarReport r = star_condition_check(f, t, u, cfg.V);
        out.pass = out.pass && r.pass;
        checks.push_back({{"f", f.descriptor()},
                          {"t", t},
                          {"u", u},
                          {"limit", r.limit},
                          {"rough_count", r.rough_count},
                          {"distinct_values", r.values.size()},
                          {"bound", r.bound},
                          {"pass", r.pass}});
      }
    }
  }
  out.report = {{"suite", "star"}, {"V", cfg.V}, {"checks", checks}, {"pass", out.pass}};
  return out;
}

}  // namespace concentra
