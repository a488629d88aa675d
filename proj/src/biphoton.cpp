#include "spdc/biphoton.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace spdc {

namespace {

double one_minus_sinc(double x) {
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    return x2 / 6.0 - x2 * x2 / 120.0 + x2 * x2 * x2 / 5040.0;
  }
  return 1.0 - std::sin(x) / x;
}

}  // namespace

void CrystalParams::validate() const {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::domain_error("CrystalParams: length must be positive");
  }
  if (!(pump_wavenumber > 0.0) || !std::isfinite(pump_wavenumber)) {
    throw std::domain_error("CrystalParams: pump wavenumber must be positive");
  }
}

BeamSpec PumpSpec::rescaled_beam() const {
  return {2.0 * beam.wavelength, std::sqrt(2.0) * beam.waist, beam.waist_plane_z};
}

BiphotonModel::BiphotonModel(PumpSpec pump, CrystalParams crystal, double detection_plane_z,
                             bool thin_crystal)
    : pump_((pump.validate(), pump)),
      crystal_((crystal.validate(), crystal)),
      detection_z_(detection_plane_z),
      thin_(thin_crystal),
      rescaled_(pump_.rescaled_beam()),
      u_(pump_.mode, rescaled_, detection_plane_z) {
  const double k_beam = pump_.beam.wavenumber();
  if (std::abs(k_beam - crystal_.pump_wavenumber) > 1e-12 * k_beam) {
    throw std::domain_error("BiphotonModel: crystal wavenumber does not match the pump wavelength");
  }
  if (!thin_ && !(detection_z_ > 0.0)) {
    throw std::domain_error("BiphotonModel: finite-crystal model needs detection plane Z > 0");
  }
}

complex angular_amplitude(const BiphotonModel& model, WaveVector q_s, WaveVector q_i) {
  const double length = model.crystal().length;
  const double k = model.crystal().pump_wavenumber;
  const auto v = lg_fourier_profile(model.pump().mode, model.pump().beam);
  const double dx = q_s.qx - q_i.qx;
  const double dy = q_s.qy - q_i.qy;
  const double prefactor = std::sqrt(2.0 * length / k) / kPi;
  return prefactor * v(q_s.qx + q_i.qx, q_s.qy + q_i.qy) *
         sinc(length * (dx * dx + dy * dy) / (4.0 * k));
}

bool within_paraxial_bound(const BiphotonModel& model, WaveVector q_s, WaveVector q_i) {
  const double bound = 0.1 * model.crystal().pump_wavenumber;
  return std::hypot(q_s.qx, q_s.qy) <= bound && std::hypot(q_i.qx, q_i.qy) <= bound;
}

double f_kernel(const BiphotonModel& model, double rho) {
  const double z = model.detection_plane_z();
  if (!(z > 0.0)) throw std::domain_error("f_kernel: detection plane Z must be positive");
  const double kl = model.crystal().pump_wavenumber * model.crystal().length;
  return std::sqrt(kl) / (2.0 * kPi * z) * sinc(kl * rho * rho / (8.0 * z * z));
}

complex psi(const BiphotonModel& model, TransversePoint rho_s, TransversePoint rho_i) {
  constexpr double kInvSqrt2 = 0.70710678118654752440;
  const TransversePoint sum{(rho_s.x + rho_i.x) * kInvSqrt2, (rho_s.y + rho_i.y) * kInvSqrt2};
  const complex u = model.pump_field(sum);
  if (model.thin_crystal()) return u;
  const double dx = rho_s.x - rho_i.x;
  const double dy = rho_s.y - rho_i.y;
  return u * f_kernel(model, std::sqrt(0.5 * (dx * dx + dy * dy)));
}

double coincidence_probability(const BiphotonModel& model, TransversePoint rho_s,
                               TransversePoint rho_i) {
  return std::norm(psi(model, rho_s, rho_i));
}

ThinCrystalError thin_crystal_error(const CrystalParams& crystal, const BeamSpec& pump_beam,
                                    int order, double detection_z, const QuadratureSpec& spec) {
  crystal.validate();
  pump_beam.validate();
  spec.validate();
  if (order < 0 || order > kMaxPolynomialDegree) {
    throw std::domain_error("thin_crystal_error: order must lie in [0, " +
                            std::to_string(kMaxPolynomialDegree) + "]");
  }
  if (!(detection_z > 0.0)) {
    throw std::domain_error("thin_crystal_error: detection plane Z must be positive");
  }

  const BeamSpec beam = PumpSpec{LGIndex{}, pump_beam}.rescaled_beam();
  // (w(Z)/Z)^2, which tends to (w_c/zR)^2 as Z -> infinity.
  double angular_width2 = 0.0;
  if (std::isinf(detection_z)) {
    const double zr = beam.rayleigh_range();
    angular_width2 = beam.waist * beam.waist / (zr * zr);
  } else {
    const double w = beam.width_at(detection_z);
    angular_width2 = w * w / (detection_z * detection_z);
  }
  const double kl = crystal.pump_wavenumber * crystal.length;

  // Work in t = s / w(Z).  F(sqrt2 S)/F(0) = sinc(K L s^2 / (4 Z^2)).
  const double kernel_scale = kl * angular_width2 / 4.0;
  const double cutoff = std::sqrt(order + 1.0) + spec.radial_cutoff_factor;

  ThinCrystalError worst{0.0, order, 0, order};
  for (int p = 0; 2 * p <= order; ++p) {
    const int a = order - 2 * p;
    const LgRadialProfile u(p, a, 1.0);
    // 1 - A_F/A_1 is integrated directly to avoid cancellation.
    const auto deficit = quad_radial(
        [&](double t) {
          const double v = u(t);
          return complex(2.0 * kPi * t * v * v * one_minus_sinc(kernel_scale * t * t));
        },
        cutoff, spec);
    const auto plain = quad_radial(
        [&](double t) {
          const double v = u(t);
          return complex(2.0 * kPi * t * v * v);
        },
        cutoff, spec);
    const double eps = std::abs(deficit.value.real() / plain.value.real());
    if (eps > worst.epsilon || p == 0) worst = {eps, order, p, a};
  }
  return worst;
}

}  // namespace spdc
