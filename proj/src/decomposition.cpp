#include "spdc/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "spdc/parallel.hpp"

namespace spdc {

namespace {

// Beam whose angular spectrum has unit q-space waist: lengths in the
// thin-crystal integrals are measured in units of 2 / w_c.
const BeamSpec kUnitSpectrumBeam{1.0, 2.0, 0.0};

std::vector<LGIndex> modes_up_to(int n_max) {
  std::vector<LGIndex> out;
  for (int l = -n_max; l <= n_max; ++l) {
    for (int p = 0; 2 * p + std::abs(l) <= n_max; ++p) out.push_back({p, l});
  }
  return out;
}

double cutoff_for(const QuadratureSpec& spec, int order) {
  return spec.radial_cutoff_factor + std::sqrt(static_cast<double>(order));
}

complex unit_phase(double theta) { return {std::cos(theta), std::sin(theta)}; }

// Maximum of |u|^2 for a unit-waist radial profile, sampled densely.
double radial_peak_intensity(const LgRadialProfile& u, double cutoff) {
  constexpr int kSamples = 4000;
  double best = 0.0;
  for (int i = 0; i <= kSamples; ++i) {
    const double v = u(cutoff * i / kSamples);
    best = std::max(best, v * v);
  }
  return best;
}

}  // namespace

std::vector<CoefficientKey> allowed_keys(int pump_l, int n_max) {
  std::vector<CoefficientKey> out;
  const auto modes = modes_up_to(n_max);
  for (const auto& s : modes) {
    for (const auto& i : modes) {
      if (s.l + i.l == pump_l) out.push_back({s.l, s.p, i.l, i.p});
    }
  }
  return out;
}

std::vector<CoefficientKey> forbidden_keys(int pump_l, int n_max) {
  std::vector<CoefficientKey> out;
  const auto modes = modes_up_to(n_max);
  for (const auto& s : modes) {
    for (const auto& i : modes) {
      if (s.l + i.l != pump_l) out.push_back({s.l, s.p, i.l, i.p});
    }
  }
  return out;
}

complex coefficient_thin(const PumpSpec& pump, CoefficientKey key, const QuadratureSpec& spec) {
  pump.validate();
  key.signal().validate();
  key.idler().validate();
  if (key.ls + key.li != pump.mode.l) return 0.0;

  const LgFourierProfile vp(pump.mode, kUnitSpectrumBeam);
  const LgFourierProfile vs(key.signal(), kUnitSpectrumBeam);
  const LgFourierProfile vi(key.idler(), kUnitSpectrumBeam);
  const int order = std::max({pump.mode.order(), key.signal().order(), key.idler().order()});
  const auto r = quad_radial(
      [&](double t) {
        // conj(vs) * conj(vi) is symmetric in s <-> i bit for bit.
        return t * vp.radial(std::sqrt(2.0) * t) * (std::conj(vs.radial(t)) * std::conj(vi.radial(t)));
      },
      cutoff_for(spec, order), spec);
  const double wc = pump.rescaled_beam().waist;
  return 4.0 * kPi * kPi * wc * r.value;
}

complex coefficient_full(const BiphotonModel& model, CoefficientKey key, const QuadratureSpec& spec) {
  key.signal().validate();
  key.idler().validate();
  const LGIndex pump_index = model.pump().mode;
  const int order = std::max({pump_index.order(), key.signal().order(), key.idler().order()});
  if (order > kFullCoefficientMaxOrder) {
    throw std::domain_error("coefficient_full: mode orders above " +
                            std::to_string(kFullCoefficientMaxOrder) + " are not supported");
  }
  const double z = model.detection_plane_z();
  if (!(z > 0.0)) throw std::domain_error("coefficient_full: detection plane Z must be positive");

  const BeamSpec& beam = model.rescaled_beam();
  const double w = beam.width_at(z);
  const LgMode u(pump_index, beam, z);
  const LgMode a(key.signal(), beam, z);
  const LgMode b(key.idler(), beam, z);
  const double kl = model.crystal().pump_wavenumber * model.crystal().length;
  // F(sqrt2 S)/F(0) in units sigma = |S| / w.
  const double kernel_scale = kl * w * w / (4.0 * z * z);
  const int m = key.ls + key.li;
  const double cutoff = cutoff_for(spec, order);

  QuadratureSpec inner = spec;
  inner.relative_tolerance = 0.1 * spec.relative_tolerance;
  inner.absolute_tolerance = 0.1 * spec.absolute_tolerance;

  auto overlap_at = [&](double r) -> complex {
    // I(r) = int d^2 sigma F^(sigma) conj(A(r/2 + sigma)) conj(B(r/2 - sigma)).
    const double half = cutoff + 0.5 * r;
    return quad_plane(
               [&](double sx, double sy) {
                 const double s2 = sx * sx + sy * sy;
                 const TransversePoint pa{w * (0.5 * r + sx), w * sy};
                 const TransversePoint pb{w * (0.5 * r - sx), -w * sy};
                 return sinc(kernel_scale * s2) * std::conj(a(pa) * b(pb)) * (w * w);
               },
               half, inner)
        .value;
  };
  auto angular_at = [&](double r) -> complex {
    const double rho = w * r / std::sqrt(2.0);
    return quad_interval(
               [&](double phi) {
                 return u(TransversePoint::polar(rho, phi)) * w * unit_phase(-m * phi);
               },
               0.0, 2.0 * kPi, inner)
        .value;
  };

  const double r_max = std::sqrt(2.0) * cutoff;
  const auto outer = quad_radial(
      [&](double r) {
        const complex ang = angular_at(r);
        if (ang == 0.0) return complex(0.0);
        return r * ang * overlap_at(r);
      },
      r_max, spec);
  return w * outer.value;
}

CoefficientTable::CoefficientTable(PumpSpec pump, int max_order)
    : pump_(std::move(pump)), max_order_(max_order) {
  if (max_order < 0) throw std::domain_error("CoefficientTable: max_order must be nonnegative");
}

void CoefficientTable::set(CoefficientKey key, complex value) {
  if (key.signal().order() > max_order_ || key.idler().order() > max_order_) {
    throw std::domain_error("CoefficientTable: key exceeds the truncation order");
  }
  entries_[key] = value;
}

complex CoefficientTable::at(CoefficientKey key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? complex(0.0) : it->second;
}

double CoefficientTable::normalization() const {
  double sum = 0.0;
  for (const auto& [key, c] : entries_) sum += std::norm(c);
  return sum;
}

void CoefficientTable::normalize() {
  raw_norm_ = normalization();
  if (raw_norm_ <= 0.0) return;
  const double scale = 1.0 / std::sqrt(raw_norm_);
  for (auto& [key, c] : entries_) c *= scale;
}

std::map<int, double> CoefficientTable::marginal() const {
  std::map<int, double> out;
  for (const auto& [key, c] : entries_) out[key.li] += std::norm(c);
  return out;
}

CoefficientTable spiral_spectrum(const PumpSpec& pump, int n_max, const QuadratureSpec& spec,
                                 int threads) {
  pump.validate();
  const auto keys = allowed_keys(pump.mode.l, n_max);
  std::vector<complex> values(keys.size());
  parallel_for(keys.size(), threads,
               [&](std::size_t i) { values[i] = coefficient_thin(pump, keys[i], spec); });
  CoefficientTable table(pump, n_max);
  for (std::size_t i = 0; i < keys.size(); ++i) table.set(keys[i], values[i]);
  table.normalize();
  return table;
}

double truncation_tail(const PumpSpec& pump, int n_max, const QuadratureSpec& spec, int threads) {
  const double here = spiral_spectrum(pump, n_max, spec, threads).raw_normalization();
  const double next = spiral_spectrum(pump, n_max + 2, spec, threads).raw_normalization();
  return 1.0 - here / next;
}

SelectionDefect selection_defect(const PumpSpec& pump, int n_max, const QuadratureSpec& spec,
                                 int threads) {
  pump.validate();
  const double wc = pump.rescaled_beam().waist;
  const auto forbidden = forbidden_keys(pump.mode.l, n_max);
  const auto allowed = allowed_keys(pump.mode.l, n_max);
  const LgFourierProfile vp(pump.mode, kUnitSpectrumBeam);

  std::vector<double> forbidden_abs(forbidden.size());
  parallel_for(forbidden.size(), threads, [&](std::size_t k) {
    const CoefficientKey key = forbidden[k];
    const LgFourierProfile vs(key.signal(), kUnitSpectrumBeam);
    const LgFourierProfile vi(key.idler(), kUnitSpectrumBeam);
    const int winding = pump.mode.l - key.ls - key.li;
    const int order = std::max({pump.mode.order(), key.signal().order(), key.idler().order()});
    const auto r = quad_plane(
        [&](double tx, double ty) {
          const double t = std::hypot(tx, ty);
          const double phi = std::atan2(ty, tx);
          return vp.radial(std::sqrt(2.0) * t) * std::conj(vs.radial(t) * vi.radial(t)) *
                 unit_phase(winding * phi);
        },
        cutoff_for(spec, order), spec);
    forbidden_abs[k] = std::abs(2.0 * kPi * wc * r.value);
  });
  std::vector<double> allowed_abs(allowed.size());
  parallel_for(allowed.size(), threads, [&](std::size_t k) {
    allowed_abs[k] = std::abs(coefficient_thin(pump, allowed[k], spec));
  });

  SelectionDefect out;
  for (std::size_t k = 0; k < forbidden.size(); ++k) {
    if (forbidden_abs[k] > out.max_forbidden) {
      out.max_forbidden = forbidden_abs[k];
      out.worst = forbidden[k];
    }
  }
  for (double v : allowed_abs) out.max_allowed = std::max(out.max_allowed, v);
  return out;
}

const char* to_string(WitnessVerdict verdict) {
  return verdict == WitnessVerdict::entangled_consistent ? "entangled_consistent" : "inconclusive";
}

std::vector<TransversePoint> default_witness_deltas(const PumpSpec& pump) {
  const double w = pump.rescaled_beam().waist;
  const std::vector<TransversePoint> unit = {{0.0, 0.0},  {0.3, 0.0},  {0.0, 0.3},  {0.5, 0.5},
                                             {1.0, 0.0},  {-0.7, 0.2}, {0.0, -1.2}, {-0.4, -0.9}};
  std::vector<TransversePoint> out;
  for (const auto& d : unit) out.push_back(w * d);
  return out;
}

WitnessReport classical_witness(const PumpSpec& pump, std::span<const TransversePoint> deltas,
                                int n_max, const QuadratureSpec& spec) {
  pump.validate();
  if (pump.mode.l == 0) {
    throw std::domain_error("classical_witness: pump must carry OAM (l != 0)");
  }
  const BeamSpec beam = pump.rescaled_beam();
  const double z0 = beam.waist_plane_z;
  const double w = beam.waist;

  WitnessReport report;
  report.zero_signal = {0.5 * w, 0.0};
  report.zero_idler = {-0.5 * w, 0.0};
  report.translation_samples.assign(deltas.begin(), deltas.end());

  // Quantum side: thin-crystal Psi = U((rho_s + rho_i)/sqrt2).
  const LgMode u(pump.mode, beam, z0);
  report.quantum_scale =
      radial_peak_intensity(LgRadialProfile(pump.mode.p, std::abs(pump.mode.l), 1.0),
                            cutoff_for(spec, pump.mode.order())) /
      (w * w);
  constexpr double kInvSqrt2 = 0.70710678118654752440;

  // Classical side: one dominant (p_s, p_i) pair per idler OAM value.
  const auto table = spiral_spectrum(pump, n_max, spec);
  const auto weights = table.marginal();
  for (const auto& [li, weight] : weights) {
    if (weight <= 0.0) continue;
    CoefficientKey best{};
    double best_norm = -1.0;
    for (const auto& [key, c] : table.entries()) {
      if (key.li == li && std::norm(c) > best_norm) {
        best_norm = std::norm(c);
        best = key;
      }
    }
    report.components.push_back({li, weight, best.signal(), best.idler()});
  }
  std::vector<std::pair<LgMode, LgMode>> fields;
  for (const auto& comp : report.components) {
    fields.emplace_back(LgMode(comp.signal, beam, z0), LgMode(comp.idler, beam, z0));
    const double fs = radial_peak_intensity(
        LgRadialProfile(comp.signal.p, std::abs(comp.signal.l), 1.0),
        cutoff_for(spec, comp.signal.order()));
    const double gi = radial_peak_intensity(
        LgRadialProfile(comp.idler.p, std::abs(comp.idler.l), 1.0),
        cutoff_for(spec, comp.idler.order()));
    report.classical_scale += comp.weight * fs * gi / (w * w * w * w);
  }

  bool quantum_null = true;
  bool classical_visible = false;
  for (const auto& d : deltas) {
    const TransversePoint rs = report.zero_signal + d;
    const TransversePoint ri = report.zero_idler - d;
    const TransversePoint sum{(rs.x + ri.x) * kInvSqrt2, (rs.y + ri.y) * kInvSqrt2};
    const double quantum = std::norm(u(sum));
    double classical = 0.0;
    for (std::size_t k = 0; k < fields.size(); ++k) {
      classical += report.components[k].weight * std::norm(fields[k].first(rs)) *
                   std::norm(fields[k].second(ri));
    }
    report.quantum_P_values.push_back(quantum);
    report.classical_Pcc_values.push_back(classical);
    if (quantum >= report.null_fraction * report.quantum_scale) quantum_null = false;
    if (classical > report.visible_fraction * report.classical_scale) classical_visible = true;
  }
  report.verdict = (quantum_null && classical_visible) ? WitnessVerdict::entangled_consistent
                                                       : WitnessVerdict::inconclusive;
  return report;
}

}  // namespace spdc
