#include "concentra/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "concentra/additive.hpp"
#include "concentra/concentration.hpp"
#include "concentra/error.hpp"
#include "concentra/halasz.hpp"
#include "concentra/parallel.hpp"
#include "concentra/polynomial.hpp"
#include "concentra/sieve.hpp"
#include "concentra/verify.hpp"

namespace concentra {

std::uint64_t parse_count(const std::string& text) {
  if (text.empty()) throw Error(ErrorCode::parse, "empty number");
  if (text.find_first_not_of("0123456789") == std::string::npos) {
    try {
      return std::stoull(text);
    } catch (const std::exception&) {
      throw Error(ErrorCode::parse, "integer out of range: " + text);
    }
  }
  std::size_t used = 0;
  long double v = 0;
  try {
    v = std::stold(text, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::parse, "not a number: " + text);
  }
  if (used != text.size()) throw Error(ErrorCode::parse, "not a number: " + text);
  if (!(v >= 0) || v != std::floor(v) || v >= 18446744073709551616.0L)
    throw Error(ErrorCode::parse, "expected a nonnegative integer: " + text);
  return static_cast<std::uint64_t>(v);
}

double parse_real(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "+inf") return HUGE_VAL;
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::parse, "not a number: " + text);
  }
  if (used != text.size() || std::isnan(v)) throw Error(ErrorCode::parse, "not a number: " + text);
  return v;
}

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(sep, start);
    if (end == std::string::npos) end = text.size();
    std::string piece = text.substr(start, end - start);
    const auto a = piece.find_first_not_of(" \t");
    const auto b = piece.find_last_not_of(" \t");
    if (a != std::string::npos) out.push_back(piece.substr(a, b - a + 1));
    start = end + 1;
  }
  return out;
}

namespace {

std::vector<AdditiveFunction> parse_functions(const std::string& text, std::size_t r) {
  std::vector<AdditiveFunction> out;
  for (const auto& d : split_list(text, ';')) out.push_back(AdditiveFunction::parse(d));
  if (out.size() == 1 && r > 1) out.assign(r, out.front());
  if (out.size() != r) throw Error(ErrorCode::invalid_argument, "need one function per family member");
  return out;
}

std::vector<std::string> function_descriptors(const std::string& text, std::size_t r) {
  auto out = split_list(text, ';');
  if (out.size() == 1 && r > 1) out.assign(r, out.front());
  return out;
}

template <class T, class F>
std::vector<T> parse_each(const std::string& text, F f) {
  std::vector<T> out;
  for (const auto& s : split_list(text, ',')) out.push_back(static_cast<T>(f(s)));
  return out;
}

WeightFunction parse_weight(const std::string& text) {
  if (text == "unit") return WeightFunction::unit();
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw Error(ErrorCode::parse, "unknown weight: " + text);
  const std::string kind = text.substr(0, colon), rest = text.substr(colon + 1);
  if (kind == "rho") return WeightFunction::rho(IntPolynomial::parse(rest));
  if (kind == "rho_tilde") {
    const auto at = rest.find('@');
    if (at == std::string::npos) return WeightFunction::rho_tilde(IntPolynomial::parse(rest));
    return WeightFunction::rho_tilde(IntPolynomial::parse(rest.substr(0, at)), parse_count(rest.substr(at + 1)));
  }
  throw Error(ErrorCode::parse, "unknown weight: " + text);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::io, "cannot open " + path);
  f << text;
  if (!f) throw Error(ErrorCode::io, "cannot write " + path);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Joint value statistics of additive functions on polynomial values", "concentra"};
  app.set_config("--config", "", "key=value configuration file; flags override it");
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker cap (default: CONCENTRA_THREADS or all cores)");

  // rho
  auto* rho_cmd = app.add_subcommand("rho", "root counts rho(p^nu) and the classical bounds");
  std::string rho_poly, rho_max = "100";
  rho_cmd->add_option("--poly", rho_poly, "polynomial, e.g. x^2+1")->required();
  rho_cmd->add_option("--max", rho_max, "largest prime power");

  // efx
  auto* efx_cmd = app.add_subcommand("efx", "E_f(x; r)");
  std::string efx_f = "omega", efx_x, efx_weight = "unit";
  efx_cmd->add_option("--f", efx_f, "additive function");
  efx_cmd->add_option("--x", efx_x, "x")->required();
  efx_cmd->add_option("--weight", efx_weight, "unit or rho:<poly>");

  // mertens
  auto* mer_cmd = app.add_subcommand("mertens", "Mertens-type deviations per member");
  std::string mer_family, mer_X = "1e7", mer_grid;
  mer_cmd->add_option("--family", mer_family, "members separated by ';'")->required();
  mer_cmd->add_option("--X", mer_X, "largest grid point");
  mer_cmd->add_option("--grid", mer_grid, "comma-separated grid (default: powers of ten and X)");

  // concentration
  auto* con_cmd = app.add_subcommand("concentration", "joint histogram on (x, x+y] with the upper report");
  std::string con_family, con_f = "omega", con_x, con_y, con_bound = "0", con_out = "concentration";
  ReportParams con_params;
  bool con_eq6 = false;
  con_cmd->add_option("--family", con_family, "members separated by ';'")->required();
  con_cmd->add_option("--f", con_f, "functions separated by ';'");
  con_cmd->add_option("--x", con_x, "x")->required();
  con_cmd->add_option("--y", con_y, "y")->required();
  con_cmd->add_option("--sieve-bound", con_bound, "sieve prime bound (0: default)");
  con_cmd->add_option("--out", con_out, "output prefix for .csv and .json");
  con_cmd->add_option("--epsilon", con_params.epsilon);
  con_cmd->add_option("--delta", con_params.delta);
  con_cmd->add_option("--lambda", con_params.lambda);
  con_cmd->add_option("--w", con_params.w);
  con_cmd->add_option("--C", con_params.C);
  con_cmd->add_flag("--eq6", con_eq6, "also evaluate the restricted sum at the sup tuple");

  // lower-target
  auto* lt_cmd = app.add_subcommand("lower-target", "L_j and k_j for the lower bound");
  std::string lt_family, lt_x, lt_y, lt_log_x;
  double lt_eps = 0.5, lt_w = 11, lt_C = 10;
  bool lt_degenerate = false, lt_poisson = false;
  std::size_t lt_member = 0;
  lt_cmd->add_option("--family", lt_family, "members separated by ';'")->required();
  auto* lt_x_opt = lt_cmd->add_option("--x", lt_x, "x");
  lt_cmd->add_option("--log-x", lt_log_x, "log x, for x beyond double range")->excludes(lt_x_opt);
  lt_cmd->add_option("--y", lt_y, "y_j separated by ';' (default x)");
  lt_cmd->add_option("--epsilon", lt_eps);
  lt_cmd->add_option("--w", lt_w);
  lt_cmd->add_option("--C", lt_C);
  lt_cmd->add_flag("--allow-degenerate", lt_degenerate, "accept x^{eps0/C} < w");
  lt_cmd->add_flag("--poisson", lt_poisson, "also report the Poisson profile of one member");
  lt_cmd->add_option("--member", lt_member, "member for --poisson");

  // verify
  auto* ver_cmd = app.add_subcommand("verify", "verification suites");
  ver_cmd->require_subcommand(1);
  std::string ver_out;
  ver_cmd->add_option("--out", ver_out, "write the JSON report here instead of stdout");

  auto* vu = ver_cmd->add_subcommand("upper", "ratio stability of the upper bound");
  UpperSuiteConfig upper_cfg;
  std::string vu_f = "omega", vu_decades = "5,6,7";
  vu->add_option("--family", upper_cfg.family);
  vu->add_option("--f", vu_f);
  vu->add_option("--decades", vu_decades);
  vu->add_option("--metric", upper_cfg.metric, "ratio or loglog");
  vu->add_option("--band", upper_cfg.band);

  auto* vl = ver_cmd->add_subcommand("lower", "positivity of the lower bound");
  LowerSuiteConfig lower_cfg;
  std::string vl_y, vl_decades = "5,6,7";
  vl->add_option("--family", lower_cfg.family);
  vl->add_option("--y", vl_y, "y_j separated by ';' (default x)");
  vl->add_option("--decades", vl_decades);
  vl->add_option("--floor", lower_cfg.floor);
  vl->add_option("--epsilon", lower_cfg.params.epsilon);
  vl->add_option("--w", lower_cfg.params.w);
  vl->add_option("--C", lower_cfg.params.C);

  auto* v1 = ver_cmd->add_subcommand("lemma1", "oscillatory integral suite");
  std::string v1_configs = "200", v1_seed = "42";
  double v1_tol = 1e-10;
  v1->add_option("--configs", v1_configs);
  v1->add_option("--seed", v1_seed);
  v1->add_option("--tolerance", v1_tol);

  auto* vf = ver_cmd->add_subcommand("fourier", "Fourier inversion on friable sets");
  std::string vf_x = "100,1000,10000", vf_f = "omega;big-omega";
  vf->add_option("--x", vf_x, "comma-separated x = y values");
  vf->add_option("--f", vf_f);

  auto* vm = ver_cmd->add_subcommand("mertens", "decade increments of the Mertens deviation");
  MertensSuiteConfig mertens_cfg;
  std::string vm_X = "1e7";
  vm->add_option("--family", mertens_cfg.family);
  vm->add_option("--X", vm_X);
  vm->add_option("--constant", mertens_cfg.constant);
  vm->add_option("--constant-tol", mertens_cfg.constant_tol);

  auto* vs = ver_cmd->add_subcommand("star", "value-set condition on rough numbers");
  StarSuiteConfig star_cfg;
  std::string vs_f = "omega", vs_t = "10,30,100", vs_u = "1,2,3";
  vs->add_option("--f", vs_f);
  vs->add_option("--t", vs_t);
  vs->add_option("--u", vs_u);
  vs->add_option("--V", star_cfg.V);

  // charsum
  auto* cs_cmd = app.add_subcommand("charsum", "R(t) over S(x, y)");
  std::string cs_f = "omega", cs_x, cs_y, cs_t = "0", cs_weight = "unit";
  cs_cmd->add_option("--f", cs_f);
  cs_cmd->add_option("--x", cs_x)->required();
  cs_cmd->add_option("--y", cs_y)->required();
  cs_cmd->add_option("--t", cs_t, "comma-separated t values");
  cs_cmd->add_option("--weight", cs_weight, "unit, rho:<poly> or rho_tilde:<poly>[@limit]");

  // friable
  auto* fr_cmd = app.add_subcommand("friable", "enumerate S(x, y)");
  std::string fr_x, fr_y;
  fr_cmd->add_option("--x", fr_x)->required();
  fr_cmd->add_option("--y", fr_y)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (threads > 0) set_thread_cap(threads);

    if (rho_cmd->parsed()) {
      const IntPolynomial q = IntPolynomial::parse(rho_poly);
      const std::uint64_t max = parse_count(rho_max);
      const BigInt disc = discriminant(q);
      out << "p,nu,rho,bound1,bound2_applies,bound2\n";
      if (max >= 2) {
        const PrimeTable table(max);
        for (std::uint64_t p : table.primes(2, max)) {
          const u128 rp = rho(q, p);
          u128 m = p;
          for (int nu = 1;; ++nu) {
            const u128 r = nu == 1 ? rp : rho(q, m);
            const RootBoundCheck b = check_root_bounds(q.degree(), disc, p, nu, r, rp);
            out << p << "," << nu << "," << to_string(r) << "," << (b.bound1 ? "ok" : "violated") << ","
                << (b.bound2_applies ? "yes" : "no") << "," << (b.bound2 ? "ok" : "violated") << "\n";
            if (m > max / p) break;
            m *= p;
          }
        }
      }
      return kExitPass;
    }

    if (efx_cmd->parsed()) {
      const AdditiveFunction f = AdditiveFunction::parse(efx_f);
      std::optional<IntPolynomial> q;
      if (efx_weight != "unit") {
        if (efx_weight.rfind("rho:", 0) != 0) throw Error(ErrorCode::parse, "weight must be unit or rho:<poly>");
        q = IntPolynomial::parse(efx_weight.substr(4));
      }
      const EfResult r = e_f(f, parse_real(efx_x), q ? Weight::rho(*q) : Weight::unit());
      out << dump({{"f", f.descriptor()}, {"x", r.x}, {"weight", r.weight}, {"E", r.value}});
      return kExitPass;
    }

    if (mer_cmd->parsed()) {
      const PolynomialFamily family = parse_family(mer_family);
      const double X = parse_real(mer_X);
      const auto grid = mer_grid.empty() ? default_mertens_grid(X) : parse_each<double>(mer_grid, parse_real);
      Json members = Json::array();
      for (std::size_t j = 0; j < family.size(); ++j) {
        const MertensDeviation d = mertens_deviation(family, j, X, grid);
        Json pts = Json::array();
        for (const auto& p : d.points)
          pts.push_back({{"t", p.t},
                         {"reciprocal_sum", p.reciprocal_sum},
                         {"loglog", p.loglog},
                         {"offset", p.offset},
                         {"count_sum", p.count_sum},
                         {"li", p.li},
                         {"li_offset", p.li_offset}});
        members.push_back({{"member", family.member(j).to_string()},
                           {"dev_log", d.dev_log},
                           {"dev_li", d.dev_li},
                           {"dev_li_scaled", d.dev_li_scaled},
                           {"terminal_offset", d.terminal_offset},
                           {"points", pts}});
      }
      out << dump({{"family", family.to_string()}, {"X", X}, {"members", members}});
      return kExitPass;
    }

    if (con_cmd->parsed()) {
      const PolynomialFamily family = parse_family(con_family);
      const auto functions = parse_functions(con_f, family.size());
      const std::uint64_t x = parse_count(con_x), y = parse_count(con_y), bound = parse_count(con_bound);
      if (con_eq6 && family.size() > 3)
        throw Error(ErrorCode::capacity, "joint coprimality is supported for at most 3 members");
      const ConcentrationTable table = build_table(family, functions, x, y, bound);
      const UpperReport rep = upper_bound_report(family, functions, table, con_params);
      Json j = rep.to_json(con_params);
      j["family"] = family.to_string();
      j["functions"] = table.functions;
      j["total"] = table.total;
      j["excluded"] = table.excluded;
      for (const auto& w : family.warnings()) j["warnings"].push_back(w);
      if (con_eq6 && !table.counts.empty()) {
        const double eps0 = con_params.epsilon / (50.0 * family.degree());
        const auto a = static_cast<std::uint64_t>(std::floor(std::pow(static_cast<double>(x), eps0)));
        j["eq6"] = {{"bound", a},
                    {"k", rep.sup.arg},
                    {"value", eq6_rhs_sum(family, functions, a, rep.sup.arg)},
                    {"unconstrained", eq6_rhs_sum(family, functions, a, rep.sup.arg, true)}};
      }
      write_text(con_out + ".csv", table_csv(table));
      write_text(con_out + ".json", dump(j));
      if (table.counts.empty()) err << "warning: empty table (y = 0)\n";
      out << "sup " << rep.sup.count << " ratio " << rep.ratio << " -> " << con_out << ".csv, " << con_out
          << ".json\n";
      return kExitPass;
    }

    if (lt_cmd->parsed()) {
      const PolynomialFamily family = parse_family(lt_family);
      if (lt_x.empty() && lt_log_x.empty()) throw Error(ErrorCode::invalid_argument, "give --x or --log-x");
      const double log_x = lt_log_x.empty() ? std::log(parse_real(lt_x)) : parse_real(lt_log_x);
      if (!(log_x > 0)) throw Error(ErrorCode::invalid_argument, "x must exceed 1");
      std::vector<double> ys;
      for (const auto& s : split_list(lt_y, ';')) ys.push_back(parse_real(s));
      if (ys.empty()) ys.assign(family.size(), std::exp(log_x));
      const LowerTarget t = lower_target(family, ys, log_x, lt_eps, lt_w, lt_C, lt_degenerate);
      Json j = t.to_json();
      if (lt_poisson) {
        if (lt_member >= family.size()) throw Error(ErrorCode::range, "member index out of range");
        j["poisson"] =
            poisson_profile_check(family, lt_member, log_x, ys[lt_member], lt_w, lt_C, lt_eps).to_json();
      }
      out << dump(j);
      return kExitPass;
    }

    if (ver_cmd->parsed()) {
      SuiteResult r;
      std::string name;
      if (vu->parsed()) {
        name = "upper";
        upper_cfg.functions = function_descriptors(vu_f, parse_family(upper_cfg.family).size());
        upper_cfg.decades = parse_each<int>(vu_decades, [](const std::string& s) { return parse_count(s); });
        r = verify_upper(upper_cfg);
      } else if (vl->parsed()) {
        name = "lower";
        for (const auto& s : split_list(vl_y, ';')) lower_cfg.y_js.push_back(parse_real(s));
        lower_cfg.decades = parse_each<int>(vl_decades, [](const std::string& s) { return parse_count(s); });
        r = verify_lower(lower_cfg);
      } else if (v1->parsed()) {
        name = "lemma1";
        r = verify_lemma1(parse_count(v1_configs), parse_count(v1_seed), v1_tol);
      } else if (vf->parsed()) {
        name = "fourier";
        FourierSuiteConfig cfg;
        cfg.xs = parse_each<std::uint64_t>(vf_x, parse_count);
        cfg.functions = split_list(vf_f, ';');
        r = verify_fourier(cfg);
      } else if (vm->parsed()) {
        name = "mertens";
        mertens_cfg.X = parse_real(vm_X);
        r = verify_mertens(mertens_cfg);
      } else {
        name = "star";
        star_cfg.functions = split_list(vs_f, ';');
        star_cfg.ts = parse_each<double>(vs_t, parse_real);
        star_cfg.us = parse_each<double>(vs_u, parse_real);
        r = verify_star(star_cfg);
      }
      if (ver_out.empty())
        out << dump(r.report);
      else
        write_text(ver_out, dump(r.report));
      err << "verify " << name << ": " << (r.pass ? "PASS" : "FAIL") << "\n";
      return r.pass ? kExitPass : kExitFail;
    }

    if (cs_cmd->parsed()) {
      const AdditiveFunction f = AdditiveFunction::parse(cs_f);
      const WeightFunction w = parse_weight(cs_weight);
      const auto groups = friable_groups(f, w, parse_count(cs_x), parse_count(cs_y));
      Json values = Json::array();
      for (double t : parse_each<double>(cs_t, parse_real)) {
        const auto R = char_sum(f, groups, t);
        values.push_back({{"t", t}, {"re", R.real()}, {"im", R.imag()}, {"abs", std::abs(R)}});
      }
      Json g = Json::array();
      for (const auto& [k, v] : groups) g.push_back({{"k", f.value_of_key(k)}, {"weight", v}});
      out << dump({{"f", f.descriptor()}, {"weight", w.describe()}, {"groups", g}, {"R", values}});
      return kExitPass;
    }

    if (fr_cmd->parsed()) {
      const FriableSet s = friable_set(parse_count(fr_x), parse_count(fr_y));
      out << "n,factorization\n";
      for (std::size_t i = 0; i < s.size(); ++i) {
        out << s.elements[i] << ",";
        bool first = true;
        for (const auto& pp : s.factors(i)) {
          out << (first ? "" : "*") << to_string(pp.p);
          if (pp.nu > 1) out << "^" << pp.nu;
          first = false;
        }
        out << "\n";
      }
      return kExitPass;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace concentra
