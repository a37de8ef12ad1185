#include "concentra/quadrature.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "concentra/error.hpp"
#include "concentra/parallel.hpp"

namespace concentra {

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double value;
  double error;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kXgk[i];
    const double s = f(c - dx) + f(c + dx);
    kronrod += kWgk[i] * s;
    if (i % 2 == 1) gauss += kWg[i / 2] * s;
  }
  return {kronrod * h, std::fabs((kronrod - gauss) * h)};
}

struct Adaptive {
  const std::function<double(double)>& f;
  int max_depth;
  int evaluations = 0;
  bool failed = false;
  CompensatedSum value;
  double error = 0.0;

  void run(double a, double b, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const Panel left = gk15(f, a, m), right = gk15(f, m, b);
    evaluations += 30;
    const double err = left.error + right.error;
    if (err <= tol || depth >= max_depth || !(m > a && m < b)) {
      if (err > tol) failed = true;
      value.add(left.value);
      value.add(right.value);
      error += err;
      return;
    }
    run(a, m, 0.5 * tol, depth + 1);
    run(m, b, 0.5 * tol, depth + 1);
  }
};

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                           double rel_tol, int max_depth) {
  if (a == b) return {};
  const Panel whole = gk15(f, a, b);
  double tol = abs_tol;
  if (rel_tol > 0) tol = std::max(tol, rel_tol * std::fabs(whole.value));
  Adaptive ad{f, max_depth, 15, false, {}, 0.0};
  ad.run(a, b, tol, 0);
  QuadratureResult out{ad.value.value(), ad.error, ad.evaluations};
  if (ad.failed && out.error > tol)
    throw Error(ErrorCode::quadrature, "adaptive quadrature did not converge; achieved error " +
                                           std::to_string(out.error) + " > tolerance " + std::to_string(tol));
  return out;
}

QuadratureResult integrate_periodic(const std::function<double(double)>& f, double abs_tol, int nodes,
                                    int max_nodes) {
  if (nodes < 2) nodes = 2;
  auto rule = [&](int n) {
    CompensatedSum s;
    for (int i = 0; i < n; ++i) s.add(f(static_cast<double>(i) / n));
    return s.value() / n;
  };
  double prev = rule(nodes);
  int evals = nodes;
  for (int n = 2 * nodes; n <= max_nodes; n *= 2) {
    // Only odd nodes are new at each doubling.
    CompensatedSum odd;
    for (int i = 1; i < n; i += 2) odd.add(f(static_cast<double>(i) / n));
    evals += n / 2;
    const double next = 0.5 * prev + odd.value() / n;
    const double diff = std::fabs(next - prev);
    if (diff <= abs_tol) return {next, diff, evals};
    prev = next;
  }
  throw Error(ErrorCode::quadrature, "periodic rule did not converge within " + std::to_string(max_nodes) + " nodes");
}

double log_integral_from_2(double t) {
  if (!(t >= 2)) throw Error(ErrorCode::invalid_argument, "Li(t) requires t >= 2");
  if (t == 2) return 0.0;
  // u = e^s: integral of e^s / s over [log 2, log t].
  const double a = std::log(2.0), b = std::log(t);
  const auto f = [](double s) { return std::exp(s) / s; };
  return integrate(f, a, b, 0.0, 1e-13).value;
}

}  // namespace concentra
