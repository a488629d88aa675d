#include "spdc/modes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace spdc {

namespace {

// Above this |l| the power s^|l| is formed in log space.
constexpr int kDirectPowerLimit = 40;

const BeamSpec& checked(const BeamSpec& beam) {
  beam.validate();
  return beam;
}

template <class Index>
Index checked(Index index) {
  index.validate();
  return index;
}

complex unit_phase(double theta) { return {std::cos(theta), std::sin(theta)}; }

double curvature_coefficient(const BeamSpec& beam, double z) {
  const double dz = z - beam.waist_plane_z;
  const double zr = beam.rayleigh_range();
  return beam.wavenumber() * dz / (2.0 * (dz * dz + zr * zr));
}

double gouy_phase(const BeamSpec& beam, double z, int order) {
  const double dz = z - beam.waist_plane_z;
  return -(order + 1.0) * std::atan(dz / beam.rayleigh_range());
}

}  // namespace

void LGIndex::validate() const {
  if (p < 0) throw std::domain_error("LGIndex: radial index p must be nonnegative");
  if (order() > kMaxPolynomialDegree) {
    throw std::domain_error("LGIndex: order 2p+|l| must not exceed " +
                            std::to_string(kMaxPolynomialDegree));
  }
}

void HGIndex::validate() const {
  if (m < 0 || n < 0) throw std::domain_error("HGIndex: indices must be nonnegative");
  if (order() > kMaxPolynomialDegree) {
    throw std::domain_error("HGIndex: order m+n must not exceed " +
                            std::to_string(kMaxPolynomialDegree));
  }
}

void BeamSpec::validate() const {
  if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
    throw std::domain_error("BeamSpec: wavelength must be positive");
  }
  if (!(waist > 0.0) || !std::isfinite(waist)) {
    throw std::domain_error("BeamSpec: waist must be positive");
  }
  if (!std::isfinite(waist_plane_z)) throw std::domain_error("BeamSpec: waist plane must be finite");
}

double BeamSpec::width_at(double z) const {
  const double t = (z - waist_plane_z) / rayleigh_range();
  return waist * std::sqrt(1.0 + t * t);
}

LgRadialProfile::LgRadialProfile(int p, int abs_l, double waist)
    : p_(p), a_(abs_l), waist_(waist) {
  LGIndex{p, abs_l}.validate();
  if (!(waist > 0.0)) throw std::domain_error("LgRadialProfile: waist must be positive");
  log_norm_ = 0.5 * (std::log(2.0 / kPi) + std::lgamma(p + 1.0) - std::lgamma(p + a_ + 1.0)) -
              std::log(waist);
  norm_ = std::exp(log_norm_);
}

double LgRadialProfile::operator()(double rho) const {
  const double s = std::sqrt(2.0) * rho / waist_;
  const double x = s * s;
  const double lag = assoc_laguerre(p_, a_, x);
  if (a_ == 0) return norm_ * lag * std::exp(-0.5 * x);
  if (rho == 0.0 || lag == 0.0) return 0.0;
  if (a_ <= kDirectPowerLimit) return norm_ * std::pow(s, a_) * lag * std::exp(-0.5 * x);
  const double mag = std::exp(log_norm_ + a_ * std::log(s) - 0.5 * x + std::log(std::abs(lag)));
  return lag < 0.0 ? -mag : mag;
}

LgMode::LgMode(LGIndex index, const BeamSpec& beam, double z)
    : index_(index),
      profile_(checked(index).p, std::abs(index.l), checked(beam).width_at(z)),
      curvature_(curvature_coefficient(beam, z)),
      gouy_(gouy_phase(beam, z, index.order())) {
  if (!std::isfinite(z)) throw std::domain_error("LgMode: plane z must be finite");
}

complex LgMode::radial(double rho) const {
  return profile_(rho) * unit_phase(curvature_ * rho * rho + gouy_);
}

complex LgMode::operator()(TransversePoint pt) const {
  const double rho = pt.rho();
  return profile_(rho) * unit_phase(curvature_ * rho * rho + gouy_ + index_.l * pt.phi());
}

complex lg_field(LGIndex index, const BeamSpec& beam, TransversePoint pt, double z) {
  return LgMode(index, beam, z)(pt);
}

LgFourierProfile::LgFourierProfile(LGIndex index, const BeamSpec& beam)
    : index_(index),
      profile_(checked(index).p, std::abs(index.l), 2.0 / checked(beam).waist) {
  static const complex kPowers[4] = {{1.0, 0.0}, {0.0, -1.0}, {-1.0, 0.0}, {0.0, 1.0}};
  phase_ = kPowers[index.order() % 4];
}

complex LgFourierProfile::radial(double q) const { return phase_ * profile_(q); }

complex LgFourierProfile::operator()(double qx, double qy) const {
  return radial(std::hypot(qx, qy)) * unit_phase(index_.l * std::atan2(qy, qx));
}

LgFourierProfile lg_fourier_profile(LGIndex index, const BeamSpec& beam) {
  return LgFourierProfile(index, beam);
}

HgMode::HgMode(HGIndex index, const BeamSpec& beam, double z)
    : index_(index),
      width_((checked(index), checked(beam).width_at(z))),
      norm_(std::sqrt(2.0 / kPi) / width_),
      curvature_(curvature_coefficient(beam, z)),
      gouy_(gouy_phase(beam, z, index.order())) {
  if (!std::isfinite(z)) throw std::domain_error("HgMode: plane z must be finite");
}

complex HgMode::operator()(TransversePoint pt) const {
  const double sx = std::sqrt(2.0) * pt.x / width_;
  const double sy = std::sqrt(2.0) * pt.y / width_;
  const double rho2 = pt.x * pt.x + pt.y * pt.y;
  const double amp = norm_ * hermite_normalized(index_.m, sx) * hermite_normalized(index_.n, sy) *
                     std::exp(-rho2 / (width_ * width_));
  return amp * unit_phase(curvature_ * rho2 + gouy_);
}

complex hg_field(HGIndex index, const BeamSpec& beam, TransversePoint pt, double z) {
  return HgMode(index, beam, z)(pt);
}

std::vector<ConvertedComponent> pi2_convert(HGIndex index, ConverterOrientation orientation) {
  index.validate();
  const int p = std::min(index.m, index.n);
  const int l = orientation == ConverterOrientation::plus45 ? index.n - index.m
                                                             : index.m - index.n;
  const double sign = (p % 2 == 0) ? 1.0 : -1.0;
  return {{LGIndex{p, l}, complex(sign, 0.0)}};
}

std::vector<double> diagonal_hg_decomposition(HGIndex index, ConverterOrientation orientation) {
  index.validate();
  const int order = index.order();
  // Coefficients of ((1+t)/sqrt2)^m ((1-t)/sqrt2)^n.
  std::vector<double> poly(order + 1, 0.0);
  poly[0] = 1.0;
  int degree = 0;
  auto multiply = [&](double sign) {
    for (int k = degree + 1; k >= 1; --k) poly[k] = (poly[k] + sign * poly[k - 1]) / std::sqrt(2.0);
    poly[0] /= std::sqrt(2.0);
    ++degree;
  };
  for (int i = 0; i < index.m; ++i) multiply(+1.0);
  for (int i = 0; i < index.n; ++i) multiply(-1.0);

  std::vector<double> b(order + 1);
  for (int k = 0; k <= order; ++k) {
    const double scale = std::exp(0.5 * (std::lgamma(order - k + 1.0) + std::lgamma(k + 1.0) -
                                         std::lgamma(index.m + 1.0) - std::lgamma(index.n + 1.0)));
    b[k] = scale * poly[k];
    if (orientation == ConverterOrientation::minus45 && k % 2 == 1) b[k] = -b[k];
  }
  return b;
}

complex diagonal_hg_field(HGIndex index, ConverterOrientation orientation, const BeamSpec& beam,
                          TransversePoint pt, double z) {
  const double u = (pt.x + pt.y) / std::sqrt(2.0);
  const double v = (pt.x - pt.y) / std::sqrt(2.0);
  const TransversePoint rotated =
      orientation == ConverterOrientation::plus45 ? TransversePoint{u, v} : TransversePoint{v, u};
  return hg_field(index, beam, rotated, z);
}

complex converted_field(HGIndex index, ConverterOrientation orientation, const BeamSpec& beam,
                        TransversePoint pt, double z) {
  const auto b = diagonal_hg_decomposition(index, orientation);
  const int order = index.order();
  static const complex kMinusI[4] = {{1.0, 0.0}, {0.0, -1.0}, {-1.0, 0.0}, {0.0, 1.0}};
  complex sum = 0.0;
  for (int k = 0; k <= order; ++k) {
    if (b[k] == 0.0) continue;
    sum += b[k] * kMinusI[k % 4] * hg_field(HGIndex{order - k, k}, beam, pt, z);
  }
  return sum;
}

complex mode_inner_product(const FieldFn& a, const FieldFn& b, double half_width,
                           const QuadratureSpec& spec) {
  return quad_plane(
             [&](double x, double y) {
               const TransversePoint pt{x, y};
               return std::conj(a(pt)) * b(pt);
             },
             half_width, spec)
      .value;
}

}  // namespace spdc
