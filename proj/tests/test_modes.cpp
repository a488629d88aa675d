#include <doctest.h>

#include <cmath>

#include "spdc/modes.hpp"

using namespace spdc;

namespace {

const BeamSpec kBeam{from_nm(702.2), from_mm(1.4142135623730951), 0.0};
const QuadratureSpec kTight = QuadratureSpec{}.with_tolerance(1e-10, 1e-12);

FieldFn lg_fn(LGIndex i, const BeamSpec& b, double z) {
  LgMode m(i, b, z);
  return [m](TransversePoint p) { return m(p); };
}

// (-i)^|l| int u(rho) J_|l|(q rho) rho drho, the Hankel form of the unitary
// transform of u(rho) exp(i l phi).
complex hankel_oracle(LGIndex idx, const BeamSpec& beam, double q) {
  LgRadialProfile u(idx.p, std::abs(idx.l), beam.waist);
  const auto r = quad_interval(
      [&](double rho) { return complex(u(rho) * std::cyl_bessel_j(std::abs(idx.l), q * rho) * rho); },
      0.0, 12.0 * beam.waist, kTight);
  complex phase(1.0, 0.0);
  for (int k = 0; k < std::abs(idx.l); ++k) phase *= complex(0.0, -1.0);
  return phase * r.value;
}

}  // namespace

TEST_CASE("index validation") {
  CHECK_THROWS_AS(LGIndex({-1, 0}).validate(), std::domain_error);
  CHECK_THROWS_AS(LGIndex({0, 201}).validate(), std::domain_error);
  CHECK_NOTHROW(LGIndex({100, 0}).validate());
  CHECK_THROWS_AS(HGIndex({-1, 0}).validate(), std::domain_error);
  CHECK_THROWS_AS(LgMode({0, 1}, BeamSpec{0.0, 1e-3, 0.0}, 0.0), std::domain_error);
  CHECK_THROWS_AS(LgMode({0, 1}, BeamSpec{1e-6, -1e-3, 0.0}, 0.0), std::domain_error);
  CHECK(LGIndex{2, -3}.order() == 7);
}

TEST_CASE("beam geometry") {
  const BeamSpec b{from_nm(632.8), from_mm(0.5), 0.1};
  const double zr = b.rayleigh_range();
  CHECK(zr == doctest::Approx(kPi * 0.25e-6 / 632.8e-9));
  CHECK(b.width_at(0.1) == doctest::Approx(0.5e-3));
  CHECK(b.width_at(0.1 + zr) == doctest::Approx(0.5e-3 * std::sqrt(2.0)));
}

TEST_CASE("LG0^1 has a null core and unit phase winding") {
  const LgMode m({0, 1}, kBeam, 0.0);
  CHECK(std::abs(m({0.0, 0.0})) == 0.0);
  const double r = kBeam.waist / 2;
  const double a0 = std::arg(m(TransversePoint::polar(r, 0.1)));
  const double a1 = std::arg(m(TransversePoint::polar(r, 0.1 + kPi / 2)));
  CHECK(std::remainder(a1 - a0 - kPi / 2, 2 * kPi) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("LG normalisation and orthogonality samples") {
  const double h = 8.0 * kBeam.width_at(0.3);
  for (double z : {0.0, 0.3}) {
    CHECK(std::abs(mode_inner_product(lg_fn({0, 0}, kBeam, z), lg_fn({0, 0}, kBeam, z), h, kTight)) ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(mode_inner_product(lg_fn({2, 3}, kBeam, z), lg_fn({2, 3}, kBeam, z), h, kTight)) ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(mode_inner_product(lg_fn({1, 2}, kBeam, z), lg_fn({0, 2}, kBeam, z), h, kTight)) < 1e-9);
    CHECK(std::abs(mode_inner_product(lg_fn({0, 1}, kBeam, z), lg_fn({0, -1}, kBeam, z), h, kTight)) < 1e-9);
  }
}

TEST_CASE("radial profile: high-|l| log branch is continuous and normalised") {
  for (int l : {39, 40, 41, 60}) {
    LgRadialProfile u(1, l, 1.0);
    const auto r = quad_interval([&](double x) { return complex(2 * kPi * x * u(x) * u(x)); }, 0.0, 20.0,
                                 kTight);
    CHECK(r.value.real() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("Fourier profile matches the Hankel oracle") {
  for (LGIndex idx : {LGIndex{0, 0}, LGIndex{0, 1}, LGIndex{1, -2}, LGIndex{2, 3}, LGIndex{0, -4}}) {
    const LgFourierProfile v(idx, kBeam);
    CHECK(v.q_waist() == doctest::Approx(2.0 / kBeam.waist));
    for (double qw : {0.0, 0.4, 1.1, 2.3}) {
      const double q = qw * 2.0 / kBeam.waist;
      const complex oracle = hankel_oracle(idx, kBeam, q);
      const complex got = v.radial(q);
      CHECK(std::abs(got - oracle) < 1e-9 * kBeam.waist);
    }
  }
}

TEST_CASE("Fourier profile against a direct 2D transform") {
  // V(q) = (1/2pi) int U(rho) exp(-i q.rho) d^2 rho evaluated numerically.
  const LGIndex idx{1, 1};
  const LgMode u(idx, kBeam, 0.0);
  const LgFourierProfile v(idx, kBeam);
  const double qx = 0.7 / kBeam.waist, qy = -0.4 / kBeam.waist;
  const auto r = quad_plane(
      [&](double x, double y) { return u({x, y}) * std::exp(complex(0.0, -(qx * x + qy * y))); },
      8 * kBeam.waist, QuadratureSpec{}.with_tolerance(1e-9, 1e-15));
  CHECK(std::abs(r.value / (2 * kPi) - v(qx, qy)) < 1e-7 * std::abs(v(qx, qy)));
}

TEST_CASE("HG modes are orthonormal and agree with the Gaussian") {
  const double h = 8.0 * kBeam.waist;
  auto hg = [&](HGIndex i) {
    HgMode m(i, kBeam, 0.2);
    return FieldFn([m](TransversePoint p) { return m(p); });
  };
  CHECK(std::abs(mode_inner_product(hg({2, 1}), hg({2, 1}), h, kTight)) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(mode_inner_product(hg({2, 1}), hg({1, 2}), h, kTight)) < 1e-9);
  const TransversePoint pt{3e-4, -7e-4};
  CHECK(std::abs(hg_field({0, 0}, kBeam, pt, 0.2) - lg_field({0, 0}, kBeam, pt, 0.2)) < 1e-12 / kBeam.waist);
}

TEST_CASE("pi/2 converter index map") {
  auto one = [](HGIndex i, ConverterOrientation o) {
    const auto c = pi2_convert(i, o);
    REQUIRE(c.size() == 1);
    return c.front();
  };
  CHECK(one({0, 1}, ConverterOrientation::plus45).index == LGIndex{0, 1});
  CHECK(one({0, 2}, ConverterOrientation::plus45).index == LGIndex{0, 2});
  CHECK(one({1, 0}, ConverterOrientation::plus45).index == LGIndex{0, -1});
  CHECK(one({0, 1}, ConverterOrientation::minus45).index == LGIndex{0, -1});
  CHECK(one({2, 3}, ConverterOrientation::plus45).index == LGIndex{2, 1});
  CHECK(one({1, 1}, ConverterOrientation::plus45).index == LGIndex{1, 0});
  CHECK(std::abs(one({1, 1}, ConverterOrientation::plus45).weight - complex(-1.0, 0.0)) < 1e-15);
}

TEST_CASE("diagonal HG decomposition") {
  for (HGIndex idx : {HGIndex{0, 1}, HGIndex{2, 1}, HGIndex{3, 3}}) {
    for (auto o : {ConverterOrientation::plus45, ConverterOrientation::minus45}) {
      const auto b = diagonal_hg_decomposition(idx, o);
      REQUIRE(b.size() == static_cast<std::size_t>(idx.order() + 1));
      double sum = 0.0;
      for (double v : b) sum += v * v;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
      // Reconstruct the rotated field from the axis-aligned components.
      const TransversePoint pt{2.1e-4, 9.3e-4};
      complex recon = 0.0;
      for (int k = 0; k <= idx.order(); ++k) recon += b[k] * hg_field({idx.order() - k, k}, kBeam, pt, 0.0);
      CHECK(std::abs(recon - diagonal_hg_field(idx, o, kBeam, pt, 0.0)) < 1e-12 / kBeam.waist);
    }
  }
}

TEST_CASE("converted field equals the predicted LG component") {
  const double h = 8.0 * kBeam.waist;
  for (HGIndex idx : {HGIndex{0, 1}, HGIndex{0, 2}, HGIndex{2, 1}}) {
    for (auto o : {ConverterOrientation::plus45, ConverterOrientation::minus45}) {
      const auto target = pi2_convert(idx, o).front();
      const FieldFn conv = [=](TransversePoint p) { return converted_field(idx, o, kBeam, p, 0.0); };
      const complex overlap = mode_inner_product(lg_fn(target.index, kBeam, 0.0), conv, h, kTight);
      CHECK(std::norm(overlap) > 1.0 - 1e-8);
      CHECK(std::abs(overlap - target.weight) < 1e-8);
    }
  }
}
