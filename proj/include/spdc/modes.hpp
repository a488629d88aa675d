#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "spdc/numerics.hpp"

namespace spdc {

// Lengths are metres throughout; these convert at API boundaries.
constexpr double from_mm(double v) { return v * 1e-3; }
constexpr double from_nm(double v) { return v * 1e-9; }
constexpr double to_mm(double v) { return v * 1e3; }

struct LGIndex {
  int p = 0;  // radial
  int l = 0;  // azimuthal, OAM in units of hbar

  int order() const { return 2 * p + std::abs(l); }
  void validate() const;
  friend bool operator==(const LGIndex&, const LGIndex&) = default;
};

struct HGIndex {
  int m = 0;  // x order
  int n = 0;  // y order

  int order() const { return m + n; }
  void validate() const;
  friend bool operator==(const HGIndex&, const HGIndex&) = default;
};

struct BeamSpec {
  double wavelength = 0.0;
  double waist = 0.0;  // 1/e field radius at the waist plane
  double waist_plane_z = 0.0;

  void validate() const;
  double wavenumber() const { return 2.0 * kPi / wavelength; }
  double rayleigh_range() const { return kPi * waist * waist / wavelength; }
  double width_at(double z) const;
};

struct TransversePoint {
  double x = 0.0;
  double y = 0.0;

  double rho() const { return std::hypot(x, y); }
  // In (-pi, pi]; 0 at the origin.
  double phi() const { return std::atan2(y, x); }

  static TransversePoint polar(double rho, double phi) {
    return {rho * std::cos(phi), rho * std::sin(phi)};
  }
  friend TransversePoint operator+(TransversePoint a, TransversePoint b) {
    return {a.x + b.x, a.y + b.y};
  }
  friend TransversePoint operator-(TransversePoint a, TransversePoint b) {
    return {a.x - b.x, a.y - b.y};
  }
  friend TransversePoint operator*(double s, TransversePoint a) {
    return {s * a.x, s * a.y};
  }
  friend bool operator==(const TransversePoint&, const TransversePoint&) = default;
};

/// Real waist-plane LG radial profile u_p^{|l|}(rho) for a given waist,
/// normalised so that 2*pi * int |u|^2 rho drho = 1.
class LgRadialProfile {
 public:
  LgRadialProfile(int p, int abs_l, double waist);

  double operator()(double rho) const;
  double waist() const { return waist_; }

 private:
  int p_;
  int a_;
  double waist_;
  double log_norm_;
  double norm_;
};

/// LG mode of a given beam evaluated on a fixed transverse plane z.
/// Phase convention: exp(+i k rho^2 / 2R(z)) exp(-i (N+1) atan(z/zR)) exp(i l phi).
class LgMode {
 public:
  LgMode(LGIndex index, const BeamSpec& beam, double z);

  complex operator()(TransversePoint pt) const;
  /// Field without the azimuthal factor, at radius rho.
  complex radial(double rho) const;

  const LGIndex& index() const { return index_; }
  double width() const { return profile_.waist(); }

 private:
  LGIndex index_;
  LgRadialProfile profile_;
  double curvature_;  // k / (2 R(z))
  double gouy_;
};

complex lg_field(LGIndex index, const BeamSpec& beam, TransversePoint pt, double z);

/// Angular spectrum of the waist-plane LG field under the unitary transform
/// V(q) = (1/2pi) int U(rho) exp(-i q.rho) d^2rho.  The result is an LG
/// profile of waist 2/w times (-i)^N, with the azimuthal index preserved.
class LgFourierProfile {
 public:
  LgFourierProfile(LGIndex index, const BeamSpec& beam);

  complex radial(double q) const;
  complex operator()(double qx, double qy) const;

  int azimuthal_index() const { return index_.l; }
  double q_waist() const { return profile_.waist(); }

 private:
  LGIndex index_;
  LgRadialProfile profile_;
  complex phase_;
};

LgFourierProfile lg_fourier_profile(LGIndex index, const BeamSpec& beam);

class HgMode {
 public:
  HgMode(HGIndex index, const BeamSpec& beam, double z);

  complex operator()(TransversePoint pt) const;

 private:
  HGIndex index_;
  double width_;
  double norm_;
  double curvature_;
  double gouy_;
};

complex hg_field(HGIndex index, const BeamSpec& beam, TransversePoint pt, double z);

// Orientation of a diagonal HG mode relative to the cylindrical-lens axes.
// plus45 carries the m index along the (x+y) diagonal; minus45 mirrors it.
enum class ConverterOrientation { plus45, minus45 };

struct ConvertedComponent {
  LGIndex index;
  complex weight;
};

/// LG content of the pi/2 converter output for a diagonal HG_{m,n} input.
/// plus45 gives l = n - m, minus45 gives l = m - n; p = min(m, n).
std::vector<ConvertedComponent> pi2_convert(
    HGIndex index, ConverterOrientation orientation = ConverterOrientation::plus45);

/// Coefficients b_k of the diagonal HG_{m,n} in the axis-aligned basis
/// HG_{N-k,k}, k = 0..N.
std::vector<double> diagonal_hg_decomposition(HGIndex index,
                                              ConverterOrientation orientation);

/// HG_{m,n} rotated onto the diagonal selected by orientation.
complex diagonal_hg_field(HGIndex index, ConverterOrientation orientation,
                          const BeamSpec& beam, TransversePoint pt, double z);

/// Field leaving the converter: each axis-aligned component HG_{N-k,k} of the
/// diagonal input picks up a relative phase of -pi/2 per step in k.
complex converted_field(HGIndex index, ConverterOrientation orientation,
                        const BeamSpec& beam, TransversePoint pt, double z);

using FieldFn = std::function<complex(TransversePoint)>;

/// <A, B> = int conj(A) B dA over the square [-h, h]^2.
complex mode_inner_product(const FieldFn& a, const FieldFn& b, double half_width,
                           const QuadratureSpec& spec);

}  // namespace spdc
