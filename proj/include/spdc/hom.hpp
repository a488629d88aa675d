#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spdc/biphoton.hpp"
#include "spdc/modes.hpp"

namespace spdc {

struct BeamSplitterSpec {
  double t = 0.70710678118654752440;  // transmission amplitude
  double r = 0.70710678118654752440;  // reflection amplitude

  static BeamSplitterSpec balanced() { return {}; }
  static BeamSplitterSpec from_transmittance(double transmittance);
  void validate() const;
  bool is_balanced() const;
};

struct ScanGrid {
  double x_min = 0.0, x_max = 0.0;
  double y_min = 0.0, y_max = 0.0;
  int nx = 0, ny = 0;

  void validate() const;
  // Node coordinates are formed symmetrically so a symmetric grid with an odd
  // node count has an exact 0 on its centre line.
  double x(int i) const { return ((nx - 1 - i) * x_min + i * x_max) / (nx - 1); }
  double y(int j) const { return ((ny - 1 - j) * y_min + j * y_max) / (ny - 1); }
  double dx() const { return (x_max - x_min) / (nx - 1); }
  double dy() const { return (y_max - y_min) / (ny - 1); }

  static ScanGrid centred(TransversePoint centre, double half_width, int n);
};

enum class Regime { balanced, unbalanced };
const char* to_string(Regime regime);

struct CoincidenceMap {
  ScanGrid grid;
  std::vector<double> values;  // row-major, values[j * nx + i] at (x(i), y(j))
  TransversePoint fixed_detector;
  Regime regime = Regime::balanced;
  // Maximum before normalisation.
  double raw_max = 0.0;

  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * grid.nx + i]; }
  /// Bilinear interpolation; nullopt outside the grid.
  std::optional<double> interpolate(TransversePoint pt) const;
};

// Uniform-disc detector apertures, averaged by stratified sampling.
struct ApertureSpec {
  bool enabled = false;
  double d1_radius = 0.25e-3;
  double d2_radius = 0.5e-3;
  int radial_strata = 4;
  int angular_strata = 8;
  std::uint64_t seed = 0;
};

struct OutputAmplitudes {
  complex psi_tt;
  complex psi_rr;
};

/// psi_tt = t^2 Psi(rho1, rho2); psi_rr = -r^2 Psi((x2,-y2), (x1,-y1)).
OutputAmplitudes output_amplitudes(const BiphotonModel& model, const BeamSplitterSpec& bs,
                                   TransversePoint rho_1, TransversePoint rho_2);

/// Arguments at which the both-reflected path samples Psi.
std::pair<TransversePoint, TransversePoint> reflected_arguments(TransversePoint rho_1,
                                                                TransversePoint rho_2);

complex coincidence_amplitude(const BiphotonModel& model, const BeamSplitterSpec& bs,
                              TransversePoint rho_1, TransversePoint rho_2);

struct RThetaCoords {
  double R = 0.0;
  double theta = 0.0;
  bool theta_defined = false;  // false when R == 0
};

/// R = |rho1 + rho2| / sqrt2, theta = direction of rho1 + rho2.
RThetaCoords rtheta_coords(TransversePoint rho_1, TransversePoint rho_2);

CoincidenceMap balanced_map(const BiphotonModel& model, const BeamSplitterSpec& bs,
                            const ScanGrid& grid, TransversePoint d2, int threads = 1,
                            const ApertureSpec& apertures = {});

CoincidenceMap unbalanced_map(const BiphotonModel& model, const BeamSplitterSpec& bs,
                              const ScanGrid& grid, TransversePoint d2, int threads = 1,
                              const ApertureSpec& apertures = {});

/// |u_p^l(R)|^2 sin^2(l theta), with u the rescaled pump mode at the model's
/// detection plane.
double analytic_pattern(const BiphotonModel& model, double R, double theta);

/// Connected components (4-connectivity) of {value >= threshold}.
int count_lobes(const CoincidenceMap& map, double threshold = 0.5);

struct MapPeak {
  int i = 0, j = 0;
  TransversePoint location;
  double value = 0.0;
};
/// First maximum in row-major order.
MapPeak find_peak(const CoincidenceMap& map);

/// Largest |map(p) - reference(p - offset)| over nodes p of map whose shifted
/// position lies inside reference.  Also reports the number of nodes compared.
struct TranslationMismatch {
  double max_abs = 0.0;
  std::size_t compared = 0;
};
TranslationMismatch translation_mismatch(const CoincidenceMap& map, const CoincidenceMap& reference,
                                         TransversePoint offset);

}  // namespace spdc
