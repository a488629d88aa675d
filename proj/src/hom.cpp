#include "spdc/hom.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

#include "spdc/parallel.hpp"

namespace spdc {

namespace {

struct DetectorOffsets {
  std::vector<TransversePoint> d1;
  std::vector<TransversePoint> d2;
};

double unit_uniform(std::mt19937_64& rng) {
  // 53 random bits; mt19937_64's output sequence is fixed by the standard.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<TransversePoint> stratified_disc(double radius, int radial, int angular,
                                             std::mt19937_64& rng) {
  std::vector<TransversePoint> out;
  out.reserve(static_cast<std::size_t>(radial) * angular);
  for (int a = 0; a < radial; ++a) {
    for (int b = 0; b < angular; ++b) {
      const double r = radius * std::sqrt((a + unit_uniform(rng)) / radial);
      const double phi = 2.0 * kPi * (b + unit_uniform(rng)) / angular;
      out.push_back(TransversePoint::polar(r, phi));
    }
  }
  return out;
}

DetectorOffsets detector_offsets(const ApertureSpec& apertures) {
  if (!apertures.enabled) return {{{0.0, 0.0}}, {{0.0, 0.0}}};
  if (!(apertures.d1_radius >= 0.0) || !(apertures.d2_radius >= 0.0) ||
      apertures.radial_strata < 1 || apertures.angular_strata < 1) {
    throw std::domain_error("ApertureSpec: radii must be nonnegative and strata positive");
  }
  std::mt19937_64 rng(apertures.seed);
  DetectorOffsets out;
  out.d1 = stratified_disc(apertures.d1_radius, apertures.radial_strata,
                           apertures.angular_strata, rng);
  out.d2 = stratified_disc(apertures.d2_radius, apertures.radial_strata,
                           apertures.angular_strata, rng);
  // Pair the strata of D1 with a shuffled order of D2's strata.
  std::vector<std::size_t> order(out.d2.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  for (std::size_t k = order.size(); k > 1; --k) {
    const std::size_t pick = static_cast<std::size_t>(rng() % k);
    std::swap(order[k - 1], order[pick]);
  }
  std::vector<TransversePoint> shuffled;
  for (std::size_t k : order) shuffled.push_back(out.d2[k]);
  out.d2 = std::move(shuffled);
  return out;
}

template <class PointValue>
CoincidenceMap fill_map(const ScanGrid& grid, TransversePoint d2, Regime regime, int threads,
                        const ApertureSpec& apertures, PointValue&& value) {
  grid.validate();
  const DetectorOffsets offsets = detector_offsets(apertures);
  CoincidenceMap map;
  map.grid = grid;
  map.fixed_detector = d2;
  map.regime = regime;
  map.values.assign(static_cast<std::size_t>(grid.nx) * grid.ny, 0.0);

  parallel_for(static_cast<std::size_t>(grid.ny), threads, [&](std::size_t row) {
    const int j = static_cast<int>(row);
    for (int i = 0; i < grid.nx; ++i) {
      const TransversePoint p1{grid.x(i), grid.y(j)};
      double sum = 0.0;
      for (std::size_t k = 0; k < offsets.d1.size(); ++k) {
        sum += value(p1 + offsets.d1[k], d2 + offsets.d2[k]);
      }
      map.values[row * grid.nx + i] = sum / static_cast<double>(offsets.d1.size());
    }
  });

  map.raw_max = 0.0;
  for (double v : map.values) map.raw_max = std::max(map.raw_max, v);
  if (map.raw_max > 1e-30) {
    for (double& v : map.values) v /= map.raw_max;
  } else {
    std::fill(map.values.begin(), map.values.end(), 0.0);
  }
  return map;
}

}  // namespace

BeamSplitterSpec BeamSplitterSpec::from_transmittance(double transmittance) {
  if (!(transmittance >= 0.0 && transmittance <= 1.0)) {
    throw std::domain_error("BeamSplitterSpec: transmittance must lie in [0, 1]");
  }
  return {std::sqrt(transmittance), std::sqrt(1.0 - transmittance)};
}

void BeamSplitterSpec::validate() const {
  if (!(t >= 0.0 && t <= 1.0) || !(r >= 0.0 && r <= 1.0)) {
    throw std::domain_error("BeamSplitterSpec: t and r must lie in [0, 1]");
  }
  if (std::abs(t * t + r * r - 1.0) > 1e-12) {
    throw std::domain_error("BeamSplitterSpec: t^2 + r^2 must equal 1");
  }
}

bool BeamSplitterSpec::is_balanced() const { return std::abs(t - r) <= 1e-12; }

void ScanGrid::validate() const {
  if (!(x_max > x_min) || !(y_max > y_min)) {
    throw std::domain_error("ScanGrid: max must exceed min on both axes");
  }
  if (nx < 2 || ny < 2) throw std::domain_error("ScanGrid: nx and ny must be at least 2");
}

ScanGrid ScanGrid::centred(TransversePoint centre, double half_width, int n) {
  return {centre.x - half_width, centre.x + half_width, centre.y - half_width,
          centre.y + half_width, n, n};
}

const char* to_string(Regime regime) {
  return regime == Regime::balanced ? "balanced" : "unbalanced";
}

std::optional<double> CoincidenceMap::interpolate(TransversePoint pt) const {
  const double fx = (pt.x - grid.x_min) / grid.dx();
  const double fy = (pt.y - grid.y_min) / grid.dy();
  constexpr double kSlack = 1e-9;
  if (fx < -kSlack || fy < -kSlack || fx > grid.nx - 1 + kSlack || fy > grid.ny - 1 + kSlack) {
    return std::nullopt;
  }
  const double cx = std::clamp(fx, 0.0, grid.nx - 1.0);
  const double cy = std::clamp(fy, 0.0, grid.ny - 1.0);
  const int i0 = std::min(static_cast<int>(cx), grid.nx - 2);
  const int j0 = std::min(static_cast<int>(cy), grid.ny - 2);
  const double tx = cx - i0;
  const double ty = cy - j0;
  return (1 - tx) * (1 - ty) * at(i0, j0) + tx * (1 - ty) * at(i0 + 1, j0) +
         (1 - tx) * ty * at(i0, j0 + 1) + tx * ty * at(i0 + 1, j0 + 1);
}

std::pair<TransversePoint, TransversePoint> reflected_arguments(TransversePoint rho_1,
                                                                TransversePoint rho_2) {
  return {{rho_2.x, -rho_2.y}, {rho_1.x, -rho_1.y}};
}

OutputAmplitudes output_amplitudes(const BiphotonModel& model, const BeamSplitterSpec& bs,
                                   TransversePoint rho_1, TransversePoint rho_2) {
  const auto [s, i] = reflected_arguments(rho_1, rho_2);
  return {bs.t * bs.t * psi(model, rho_1, rho_2), -(bs.r * bs.r) * psi(model, s, i)};
}

complex coincidence_amplitude(const BiphotonModel& model, const BeamSplitterSpec& bs,
                              TransversePoint rho_1, TransversePoint rho_2) {
  const auto a = output_amplitudes(model, bs, rho_1, rho_2);
  return a.psi_tt + a.psi_rr;
}

RThetaCoords rtheta_coords(TransversePoint rho_1, TransversePoint rho_2) {
  const double sx = rho_1.x + rho_2.x;
  const double sy = rho_1.y + rho_2.y;
  RThetaCoords out;
  out.R = std::hypot(sx, sy) / std::sqrt(2.0);
  out.theta_defined = out.R > 0.0;
  out.theta = out.theta_defined ? std::atan2(sy, sx) : 0.0;
  return out;
}

CoincidenceMap balanced_map(const BiphotonModel& model, const BeamSplitterSpec& bs,
                            const ScanGrid& grid, TransversePoint d2, int threads,
                            const ApertureSpec& apertures) {
  bs.validate();
  return fill_map(grid, d2, Regime::balanced, threads, apertures,
                  [&](TransversePoint p1, TransversePoint p2) {
                    return std::norm(coincidence_amplitude(model, bs, p1, p2));
                  });
}

CoincidenceMap unbalanced_map(const BiphotonModel& model, const BeamSplitterSpec& bs,
                              const ScanGrid& grid, TransversePoint d2, int threads,
                              const ApertureSpec& apertures) {
  bs.validate();
  return fill_map(grid, d2, Regime::unbalanced, threads, apertures,
                  [&](TransversePoint p1, TransversePoint p2) {
                    const auto a = output_amplitudes(model, bs, p1, p2);
                    return std::norm(a.psi_tt) + std::norm(a.psi_rr);
                  });
}

double analytic_pattern(const BiphotonModel& model, double R, double theta) {
  const double s = std::sin(model.pump().mode.l * theta);
  return std::norm(model.pump_mode().radial(R)) * s * s;
}

int count_lobes(const CoincidenceMap& map, double threshold) {
  const int nx = map.grid.nx;
  const int ny = map.grid.ny;
  if (map.values.empty()) return 0;
  std::vector<char> seen(map.values.size(), 0);
  std::vector<std::pair<int, int>> stack;
  int lobes = 0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * nx + i;
      if (seen[k] || map.values[k] < threshold) continue;
      ++lobes;
      seen[k] = 1;
      stack.push_back({i, j});
      while (!stack.empty()) {
        const auto [ci, cj] = stack.back();
        stack.pop_back();
        const int di[4] = {1, -1, 0, 0};
        const int dj[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
          const int ni = ci + di[d];
          const int nj = cj + dj[d];
          if (ni < 0 || nj < 0 || ni >= nx || nj >= ny) continue;
          const std::size_t nk = static_cast<std::size_t>(nj) * nx + ni;
          if (seen[nk] || map.values[nk] < threshold) continue;
          seen[nk] = 1;
          stack.push_back({ni, nj});
        }
      }
    }
  }
  return lobes;
}

MapPeak find_peak(const CoincidenceMap& map) {
  MapPeak peak;
  peak.value = -1.0;
  for (int j = 0; j < map.grid.ny; ++j) {
    for (int i = 0; i < map.grid.nx; ++i) {
      if (map.at(i, j) > peak.value) peak = {i, j, {map.grid.x(i), map.grid.y(j)}, map.at(i, j)};
    }
  }
  return peak;
}

TranslationMismatch translation_mismatch(const CoincidenceMap& map, const CoincidenceMap& reference,
                                         TransversePoint offset) {
  TranslationMismatch out;
  for (int j = 0; j < map.grid.ny; ++j) {
    for (int i = 0; i < map.grid.nx; ++i) {
      const TransversePoint p{map.grid.x(i), map.grid.y(j)};
      const auto ref = reference.interpolate(p - offset);
      if (!ref) continue;
      out.max_abs = std::max(out.max_abs, std::abs(map.at(i, j) - *ref));
      ++out.compared;
    }
  }
  return out;
}

}  // namespace spdc
