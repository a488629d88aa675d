#pragma once

#include <compare>
#include <map>
#include <span>
#include <vector>

#include "spdc/biphoton.hpp"
#include "spdc/modes.hpp"
#include "spdc/numerics.hpp"

namespace spdc {

// Labels of one LG (x) LG product term: signal (l_s, p_s), idler (l_i, p_i).
struct CoefficientKey {
  int ls = 0;
  int ps = 0;
  int li = 0;
  int pi = 0;

  LGIndex signal() const { return {ps, ls}; }
  LGIndex idler() const { return {pi, li}; }
  int max_order() const { return std::max(signal().order(), idler().order()); }
  CoefficientKey swapped() const { return {li, pi, ls, ps}; }

  friend auto operator<=>(const CoefficientKey&, const CoefficientKey&) = default;
};

// Full-crystal coefficients integrate over four dimensions; orders above this
// are refused.
inline constexpr int kFullCoefficientMaxOrder = 12;

/// Keys with both mode orders <= n_max and l_s + l_i = l.
std::vector<CoefficientKey> allowed_keys(int pump_l, int n_max);
/// Keys with both mode orders <= n_max and l_s + l_i != l.
std::vector<CoefficientKey> forbidden_keys(int pump_l, int n_max);

/// Thin-crystal coefficient from the angular-spectrum overlap
///   C = 4 pi int d^2q V_p^l(sqrt2 q) conj(V_s(q)) conj(V_i(q)),
/// which equals the direct position-space projection of U((rho_s+rho_i)/sqrt2)
/// onto U_s (x) U_i.  Basis and pump share the rescaled beam (2 lambda_o,
/// sqrt2 w_o).  Returns exactly 0 when l_s + l_i != l.
complex coefficient_thin(const PumpSpec& pump, CoefficientKey key,
                         const QuadratureSpec& spec = {});

/// Finite-crystal coefficient from the (R, S) form with the kernel F/F(0)
/// retained.  Modes are taken at the model's detection plane.  The angular
/// integral over R is done numerically, so forbidden keys come out at
/// quadrature-noise level rather than exactly 0.
complex coefficient_full(const BiphotonModel& model, CoefficientKey key,
                         const QuadratureSpec& spec = {});

class CoefficientTable {
 public:
  CoefficientTable(PumpSpec pump, int max_order);

  const PumpSpec& pump() const { return pump_; }
  int max_order() const { return max_order_; }
  const std::map<CoefficientKey, complex>& entries() const { return entries_; }

  void set(CoefficientKey key, complex value);
  complex at(CoefficientKey key) const;

  /// Sum of |C|^2 over the stored entries.
  double normalization() const;
  /// Sum of |C|^2 before the last normalize() call.
  double raw_normalization() const { return raw_norm_; }
  void normalize();

  /// Spiral spectrum P(m): sum over p_s, p_i of |C(l - m, p_s, m, p_i)|^2,
  /// keyed by the idler index m.
  std::map<int, double> marginal() const;

 private:
  PumpSpec pump_;
  int max_order_;
  std::map<CoefficientKey, complex> entries_;
  double raw_norm_ = 0.0;
};

/// Thin-crystal table over allowed keys of order <= n_max, normalised.
CoefficientTable spiral_spectrum(const PumpSpec& pump, int n_max, const QuadratureSpec& spec = {},
                                 int threads = 1);

/// 1 - S(n_max)/S(n_max + 2), with S the unnormalised sum of |C|^2.
double truncation_tail(const PumpSpec& pump, int n_max, const QuadratureSpec& spec = {},
                       int threads = 1);

struct SelectionDefect {
  double max_forbidden = 0.0;
  double max_allowed = 0.0;
  CoefficientKey worst{};

  double relative() const { return max_allowed > 0.0 ? max_forbidden / max_allowed : 0.0; }
};

/// Evaluates the full angular-spectrum integral over the q plane (no use of
/// the Kronecker delta) for every forbidden key up to n_max.
SelectionDefect selection_defect(const PumpSpec& pump, int n_max, const QuadratureSpec& spec = {},
                                 int threads = 1);

enum class WitnessVerdict { entangled_consistent, inconclusive };

const char* to_string(WitnessVerdict verdict);

// One term of the OAM-conserving classical mixture.
struct ClassicalComponent {
  int idler_l = 0;
  double weight = 0.0;
  LGIndex signal;
  LGIndex idler;
};

struct WitnessReport {
  TransversePoint zero_signal;
  TransversePoint zero_idler;
  std::vector<TransversePoint> translation_samples;
  std::vector<double> quantum_P_values;
  std::vector<double> classical_Pcc_values;
  double quantum_scale = 0.0;
  double classical_scale = 0.0;
  // Values below null_fraction * scale count as zero.
  double null_fraction = 1e-10;
  // A classical value above visible_fraction * classical_scale is a detection.
  double visible_fraction = 1e-3;
  std::vector<ClassicalComponent> components;
  WitnessVerdict verdict = WitnessVerdict::inconclusive;
};

/// Displacements used when the caller provides none, scaled to the rescaled
/// beam waist.
std::vector<TransversePoint> default_witness_deltas(const PumpSpec& pump);

/// Compares the thin-crystal P along rho_s0 + D, rho_i0 - D (with
/// U((rho_s0 + rho_i0)/sqrt2) = 0 at the vortex axis) against a classical
/// mixture built from the dominant LG pairs of the spiral spectrum.
/// Throws std::domain_error for l = 0.
WitnessReport classical_witness(const PumpSpec& pump, std::span<const TransversePoint> deltas,
                                int n_max = 8, const QuadratureSpec& spec = {});

}  // namespace spdc
