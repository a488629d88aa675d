#include <doctest.h>

#include <cmath>
#include <random>

#include "spdc/biphoton.hpp"

using namespace spdc;

namespace {

const BeamSpec kPumpBeam{from_nm(351.1), from_mm(1.0), 0.0};

BiphotonModel make(LGIndex mode, bool thin, double length_mm = 7.0, double z = 1.0) {
  return BiphotonModel(PumpSpec{mode, kPumpBeam}, CrystalParams::for_pump(from_mm(length_mm), kPumpBeam.wavelength),
                       z, thin);
}

}  // namespace

TEST_CASE("crystal and model validation") {
  CHECK_THROWS_AS(CrystalParams::for_pump(0.0, 351e-9).validate(), std::domain_error);
  CHECK_THROWS_AS(CrystalParams::for_pump(1e-3, -1.0).validate(), std::domain_error);
  // Crystal wavenumber must belong to the pump wavelength.
  CHECK_THROWS_AS(BiphotonModel(PumpSpec{{0, 1}, kPumpBeam}, CrystalParams::for_pump(1e-3, 400e-9), 1.0, true),
                  std::domain_error);
  CHECK_THROWS_AS(make({0, 1}, false, 7.0, 0.0), std::domain_error);
  CHECK_NOTHROW(make({0, 1}, true, 7.0, 0.0));
  CHECK_THROWS_AS(f_kernel(make({0, 1}, true, 7.0, 0.0), 1e-3), std::domain_error);
}

TEST_CASE("rescaled beam") {
  const PumpSpec pump{{0, 1}, kPumpBeam};
  const BeamSpec c = pump.rescaled_beam();
  CHECK(c.wavelength == doctest::Approx(2 * kPumpBeam.wavelength));
  CHECK(c.waist == doctest::Approx(std::sqrt(2.0) * kPumpBeam.waist));
  // Same Rayleigh range as the pump.
  CHECK(c.rayleigh_range() == doctest::Approx(kPumpBeam.rayleigh_range()).epsilon(1e-14));
}

TEST_CASE("thin-crystal psi is U of the scaled sum coordinate") {
  const auto m = make({1, 2}, true);
  const TransversePoint s{3e-4, -1e-3}, i{-2e-4, 5e-4};
  const TransversePoint sum{(s.x + i.x) / std::sqrt(2.0), (s.y + i.y) / std::sqrt(2.0)};
  CHECK(std::abs(psi(m, s, i) - lg_field({1, 2}, m.rescaled_beam(), sum, 1.0)) < 1e-12 * std::abs(psi(m, s, i)));
  CHECK(std::abs(psi(m, s, i) - psi(m, i, s)) == 0.0);
}

TEST_CASE("full psi carries the F kernel") {
  const auto thin = make({0, 1}, true, 7.0, 0.5);
  const auto full = make({0, 1}, false, 7.0, 0.5);
  const TransversePoint s{1e-3, 2e-4}, i{-4e-4, 7e-4};
  const double rho = std::hypot(s.x - i.x, s.y - i.y) / std::sqrt(2.0);
  CHECK(std::abs(psi(full, s, i) - psi(thin, s, i) * f_kernel(full, rho)) < 1e-12 * std::abs(psi(full, s, i)));
  const double kl = full.crystal().pump_wavenumber * full.crystal().length;
  CHECK(f_kernel(full, 0.0) == doctest::Approx(std::sqrt(kl) / (2 * kPi * 0.5)));
}

TEST_CASE("translation invariance of the thin-crystal amplitude") {
  const auto m = make({0, 2}, true);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-2e-3, 2e-3);
  const double peak = std::abs(m.pump_mode().radial(m.rescaled_beam().width_at(1.0)));
  for (int k = 0; k < 200; ++k) {
    const TransversePoint s{d(rng), d(rng)}, i{d(rng), d(rng)}, delta{d(rng), d(rng)};
    const complex a = psi(m, s, i);
    const complex b = psi(m, s + delta, i - delta);
    CHECK(std::abs(a - b) <= 1e-12 * std::max(std::abs(a), peak));
  }
}

TEST_CASE("angular amplitude") {
  const auto m = make({0, 1}, false, 1.0);
  const WaveVector qs{200.0, -50.0}, qi{-80.0, 30.0};
  const auto v = lg_fourier_profile({0, 1}, kPumpBeam);
  const double L = 1e-3, K = m.crystal().pump_wavenumber;
  const double dq2 = 280.0 * 280.0 + 80.0 * 80.0;
  const complex expected = std::sqrt(2 * L / K) / kPi * v(120.0, -20.0) * sinc(L * dq2 / (4 * K));
  CHECK(std::abs(angular_amplitude(m, qs, qi) - expected) < 1e-14 * std::abs(expected));
  CHECK(within_paraxial_bound(m, qs, qi));
  CHECK_FALSE(within_paraxial_bound(m, {0.11 * K, 0.0}, qi));
}

TEST_CASE("thin-crystal error: frozen far-field and Z = 1 m values") {
  // Independent oracle: panelled Gauss-Legendre in numpy, converged to 1e-13.
  const CrystalParams crystal = CrystalParams::for_pump(1e-3, 351e-9);
  const BeamSpec beam{351e-9, 1e-3, 0.0};
  struct Row {
    int n;
    double far, z1, z2;
  };
  for (const Row& r : {Row{4, 1.9764545726e-08, 1.3001586566e-04, 8.7389111562e-06},
                       Row{16, 2.2573188985e-07, 1.4837447895e-03, 9.9802262013e-05},
                       Row{64, 3.2965118781e-06, 2.1414429832e-02, 1.4563270957e-03},
                       Row{100, 7.9588336334e-06, 5.0786154590e-02, 3.5118236650e-03}}) {
    const auto far = thin_crystal_error(crystal, beam, r.n, kFarField);
    CHECK(far.epsilon == doctest::Approx(r.far).epsilon(1e-7));
    CHECK(far.p == r.n / 2);
    CHECK(thin_crystal_error(crystal, beam, r.n, 1.0).epsilon == doctest::Approx(r.z1).epsilon(1e-7));
    CHECK(thin_crystal_error(crystal, beam, r.n, 2.0).epsilon == doctest::Approx(r.z2).epsilon(1e-7));
  }
}

TEST_CASE("thin-crystal error properties") {
  const BeamSpec beam{351e-9, 1e-3, 0.0};
  const auto tiny = CrystalParams::for_pump(1e-9, 351e-9);
  CHECK(thin_crystal_error(tiny, beam, 100, kFarField).epsilon < 1e-8);
  CHECK(thin_crystal_error(tiny, beam, 100, 1.0).epsilon < 1e-8);
  const auto crystal = CrystalParams::for_pump(1e-3, 351e-9);
  double prev = 0.0;
  for (int n : {0, 2, 4, 8, 16, 32, 64, 100}) {
    const auto e = thin_crystal_error(crystal, beam, n, 2.0);
    CHECK(e.epsilon >= prev);
    CHECK(2 * e.p + std::abs(e.l) == n);
    prev = e.epsilon;
  }
  // Longer crystals deviate more.
  CHECK(thin_crystal_error(CrystalParams::for_pump(7e-3, 351e-9), beam, 16, kFarField).epsilon >
        thin_crystal_error(crystal, beam, 16, kFarField).epsilon);
  CHECK_THROWS(thin_crystal_error(crystal, beam, -1, kFarField));
  CHECK_THROWS(thin_crystal_error(crystal, beam, 4, 0.0));
}
