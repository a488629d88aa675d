#pragma once

#include <limits>

#include "spdc/modes.hpp"
#include "spdc/numerics.hpp"

namespace spdc {

struct CrystalParams {
  double length = 0.0;            // L, along z
  double pump_wavenumber = 0.0;   // K = 2 pi / lambda_o (vacuum)

  static CrystalParams for_pump(double length, double pump_wavelength) {
    return {length, 2.0 * kPi / pump_wavelength};
  }
  void validate() const;
};

struct PumpSpec {
  LGIndex mode;
  BeamSpec beam;  // lambda_o, w_o

  void validate() const {
    mode.validate();
    beam.validate();
  }
  /// Beam with the pump's angular spectrum at the down-converted wavelength:
  /// lambda_c = 2 lambda_o, w_c = sqrt(2) w_o.
  BeamSpec rescaled_beam() const;
};

/// Owner of the two-photon detection amplitude.  Immutable once built.
class BiphotonModel {
 public:
  BiphotonModel(PumpSpec pump, CrystalParams crystal, double detection_plane_z,
                bool thin_crystal);

  const PumpSpec& pump() const { return pump_; }
  const CrystalParams& crystal() const { return crystal_; }
  double detection_plane_z() const { return detection_z_; }
  bool thin_crystal() const { return thin_; }
  const BeamSpec& rescaled_beam() const { return rescaled_; }

  /// U, the rescaled pump mode at the detection plane.
  complex pump_field(TransversePoint pt) const { return u_(pt); }
  const LgMode& pump_mode() const { return u_; }

 private:
  PumpSpec pump_;
  CrystalParams crystal_;
  double detection_z_;
  bool thin_;
  BeamSpec rescaled_;
  LgMode u_;
};

/// Transverse wavevector, rad/m per component.
struct WaveVector {
  double qx = 0.0;
  double qy = 0.0;
};

/// Phi(q_s, q_i) = (1/pi) sqrt(2L/K) v(q_s + q_i) sinc(L |q_s - q_i|^2 / 4K).
complex angular_amplitude(const BiphotonModel& model, WaveVector q_s, WaveVector q_i);

/// True when both wavevectors satisfy |q| <= 0.1 K.
bool within_paraxial_bound(const BiphotonModel& model, WaveVector q_s, WaveVector q_i);

/// F(rho) = sqrt(KL) / (2 pi Z) sinc(K L rho^2 / (8 Z^2)).
double f_kernel(const BiphotonModel& model, double rho);

/// Psi(rho_s, rho_i) = U((rho_s + rho_i)/sqrt2) F(|rho_s - rho_i|/sqrt2); F = 1
/// in the thin-crystal regime.
complex psi(const BiphotonModel& model, TransversePoint rho_s, TransversePoint rho_i);

double coincidence_probability(const BiphotonModel& model, TransversePoint rho_s,
                               TransversePoint rho_i);

// Detection plane used to request the far-field limit of thin_crystal_error.
inline constexpr double kFarField = std::numeric_limits<double>::infinity();

struct ThinCrystalError {
  double epsilon = 0.0;
  int order = 0;
  // Indices realising the worst case: p_s = p_i = p, l_s = -l_i = l.
  int p = 0;
  int l = 0;
};

/// Relative deviation |1 - A_F(0)/A_1(0)| of the kernel-weighted overlap from
/// the unweighted one, maximised over the equal-split index pairs of order N.
/// Modes are the rescaled-pump family taken at plane Z (or the far-field limit
/// when Z is kFarField).
ThinCrystalError thin_crystal_error(const CrystalParams& crystal, const BeamSpec& pump_beam,
                                    int order, double detection_z,
                                    const QuadratureSpec& spec = {});

}  // namespace spdc
