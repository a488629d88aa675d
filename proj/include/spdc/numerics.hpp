#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

namespace spdc {

using complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Largest degree / order accepted by the polynomial evaluators.
inline constexpr int kMaxPolynomialDegree = 200;

struct QuadratureSpec {
  double relative_tolerance = 1e-9;
  double absolute_tolerance = 1e-13;
  int max_subdivisions = 4000;
  // Integration radius in units of the relevant beam waist.
  double radial_cutoff_factor = 8.0;

  // Throws std::invalid_argument when an invariant is violated.
  void validate() const;

  QuadratureSpec with_tolerance(double rel, double abs) const {
    QuadratureSpec s = *this;
    s.relative_tolerance = rel;
    s.absolute_tolerance = abs;
    return s;
  }
};

// Thrown when an adaptive rule runs out of subdivisions.  Carries the best
// estimate so callers can decide whether it is usable.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, complex estimate, double error)
      : std::runtime_error(what), estimate_(estimate), error_(error) {}

  complex estimate() const { return estimate_; }
  double error_bound() const { return error_; }

 private:
  complex estimate_;
  double error_;
};

struct QuadratureResult {
  complex value;
  double error = 0.0;
  int evaluations = 0;
};

/// Generalized Laguerre polynomial L_p^a(x), three-term recurrence in p.
double assoc_laguerre(int p, int a, double x);

/// Hermite function normalised so that h_n(t) = H_n(t) / sqrt(2^n n!).
double hermite_normalized(int n, double t);

/// Unnormalised sinc, sin(x)/x.
double sinc(double x);

using RealToComplex = std::function<complex(double)>;
using PlaneToComplex = std::function<complex(double, double)>;

/// Adaptive Gauss-Kronrod (10/21) integration of f over [a, b].
QuadratureResult quad_interval(const RealToComplex& f, double a, double b,
                               const QuadratureSpec& spec);

/// Integral of f over [0, cutoff].  The caller supplies the radial Jacobian.
QuadratureResult quad_radial(const RealToComplex& f, double cutoff,
                             const QuadratureSpec& spec);

/// Tensor-product adaptive integral of f over [-h, h]^2.
QuadratureResult quad_plane(const PlaneToComplex& f, double half_width,
                            const QuadratureSpec& spec);

}  // namespace spdc
