#include "spdc/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace spdc {

namespace {

// Gauss-Kronrod 21-point abscissae and weights (QUADPACK dqk21).  The
// 10-point Gauss rule uses the odd-indexed Kronrod nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980878043, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Segment {
  double a, b;
  complex value;
  double error;
  double resabs;
};

Segment gk21(const RealToComplex& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double abs_half = std::abs(half);

  const complex fc = f(centre);
  complex res_k = fc * kWgk[10];
  complex res_g = 0.0;
  double res_abs = std::abs(fc) * kWgk[10];
  std::array<complex, 10> f1{}, f2{};

  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(centre - dx);
    f2[j] = f(centre + dx);
    const complex sum = f1[j] + f2[j];
    res_k += kWgk[j] * sum;
    res_abs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) res_g += kWg[j / 2] * sum;
  }

  const complex mean = res_k * 0.5;
  double res_asc = kWgk[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j) {
    res_asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }

  Segment s{a, b, res_k * half, std::abs((res_k - res_g) * half),
            res_abs * abs_half};
  res_asc *= abs_half;
  if (res_asc != 0.0 && s.error != 0.0) {
    s.error = res_asc * std::min(1.0, std::pow(200.0 * s.error / res_asc, 1.5));
  }
  if (s.resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) {
    s.error = std::max(50.0 * kEps * s.resabs, s.error);
  }
  return s;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(relative_tolerance > 0.0) || !(absolute_tolerance > 0.0)) {
    throw std::invalid_argument("quadrature tolerances must be positive");
  }
  if (max_subdivisions < 1) {
    throw std::invalid_argument("max_subdivisions must be positive");
  }
  if (!(radial_cutoff_factor >= 5.0)) {
    throw std::invalid_argument("radial_cutoff_factor must be at least 5");
  }
}

double assoc_laguerre(int p, int a, double x) {
  if (p < 0 || p > kMaxPolynomialDegree) {
    throw std::domain_error("assoc_laguerre: degree p must lie in [0, " +
                            std::to_string(kMaxPolynomialDegree) + "]");
  }
  if (a < 0 || a > kMaxPolynomialDegree) {
    throw std::domain_error("assoc_laguerre: order a must lie in [0, " +
                            std::to_string(kMaxPolynomialDegree) + "]");
  }
  if (!std::isfinite(x)) throw std::domain_error("assoc_laguerre: x must be finite");

  if (p == 0) return 1.0;
  double prev = 1.0;
  double curr = 1.0 + a - x;
  for (int k = 1; k < p; ++k) {
    const double next = ((2.0 * k + 1.0 + a - x) * curr - (k + a) * prev) / (k + 1.0);
    prev = curr;
    curr = next;
  }
  return curr;
}

double hermite_normalized(int n, double t) {
  if (n < 0 || n > kMaxPolynomialDegree) {
    throw std::domain_error("hermite_normalized: degree must lie in [0, " +
                            std::to_string(kMaxPolynomialDegree) + "]");
  }
  if (n == 0) return 1.0;
  double prev = 1.0;
  double curr = std::sqrt(2.0) * t;
  for (int k = 1; k < n; ++k) {
    const double next =
        std::sqrt(2.0 / (k + 1.0)) * t * curr - std::sqrt(k / (k + 1.0)) * prev;
    prev = curr;
    curr = next;
  }
  return curr;
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

QuadratureResult quad_interval(const RealToComplex& f, double a, double b,
                               const QuadratureSpec& spec) {
  spec.validate();
  QuadratureResult out;
  if (a == b) return out;

  std::vector<Segment> segments;
  segments.reserve(64);
  segments.push_back(gk21(f, a, b));
  out.evaluations = 21;

  for (;;) {
    complex total = 0.0;
    double err = 0.0;
    double resabs = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < segments.size(); ++i) {
      total += segments[i].value;
      err += segments[i].error;
      resabs += segments[i].resabs;
      if (segments[i].error > segments[worst].error) worst = i;
    }
    const double tol = std::max(spec.absolute_tolerance,
                                spec.relative_tolerance * std::abs(total));
    // A total below the roundoff floor cannot be improved by bisection.
    if (err <= tol || err <= 100.0 * kEps * resabs) {
      out.value = total;
      out.error = err;
      return out;
    }
    if (static_cast<int>(segments.size()) >= spec.max_subdivisions) {
      throw ConvergenceError("adaptive quadrature: " +
                                 std::to_string(spec.max_subdivisions) +
                                 " subdivisions exhausted",
                             total, err);
    }
    const Segment w = segments[worst];
    const double mid = 0.5 * (w.a + w.b);
    segments[worst] = gk21(f, w.a, mid);
    segments.push_back(gk21(f, mid, w.b));
    out.evaluations += 42;
  }
}

QuadratureResult quad_radial(const RealToComplex& f, double cutoff,
                             const QuadratureSpec& spec) {
  if (!(cutoff > 0.0)) throw std::invalid_argument("quad_radial: cutoff must be positive");
  return quad_interval(f, 0.0, cutoff, spec);
}

QuadratureResult quad_plane(const PlaneToComplex& f, double half_width,
                            const QuadratureSpec& spec) {
  if (!(half_width > 0.0)) {
    throw std::invalid_argument("quad_plane: half_width must be positive");
  }
  spec.validate();
  const double width = 2.0 * half_width;
  QuadratureSpec inner = spec;
  inner.relative_tolerance = 0.25 * spec.relative_tolerance;
  inner.absolute_tolerance = 0.25 * spec.absolute_tolerance / width;

  double worst_inner = 0.0;
  int inner_evals = 0;
  auto column = [&](double x) -> complex {
    const auto r = quad_interval([&](double y) { return f(x, y); }, -half_width,
                                 half_width, inner);
    worst_inner = std::max(worst_inner, r.error);
    inner_evals += r.evaluations;
    return r.value;
  };
  QuadratureResult out = quad_interval(column, -half_width, half_width, spec);
  out.error += width * worst_inner;
  out.evaluations = inner_evals;
  return out;
}

}  // namespace spdc
