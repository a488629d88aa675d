#include <doctest.h>

#include <cmath>
#include <vector>

#include "spdc/decomposition.hpp"

using namespace spdc;

namespace {

const BeamSpec kPumpBeam{from_nm(351.1), from_mm(1.0), 0.0};
PumpSpec pump(int p, int l) { return {{p, l}, kPumpBeam}; }

struct Rule {
  std::vector<double> x, w;
};

// Gauss-Hermite rule for int exp(-x^2) g(x) dx, Newton on the orthonormal
// Hermite recurrence.
Rule gauss_hermite(int n) {
  Rule r{std::vector<double>(n), std::vector<double>(n)};
  const double pim4 = std::pow(kPi, -0.25);
  double z = 0.0;
  // Largest roots first; the negative half is mirrored.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1) - 1.85575 * std::pow(2.0 * n + 1, -1.0 / 6);
    } else if (i == 1) {
      z -= 1.14 * std::pow(n, 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * r.x[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * r.x[1];
    } else {
      z = 2.0 * z - r.x[i - 2];
    }
    double pp = 0.0;
    for (int it = 0; it < 200; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    r.x[i] = z;
    r.x[n - 1 - i] = -z;
    r.w[i] = r.w[n - 1 - i] = 2.0 / (pp * pp);
  }
  return r;
}

// Position-space projection of U((rho_s + rho_i)/sqrt2) onto U_s (x) U_i at
// the waist, integrated over (R, S) = ((rho_s + rho_i)/sqrt2, (rho_s -
// rho_i)/sqrt2).  The integrand is a polynomial times
// exp(-2R^2/w^2 - S^2/w^2), so a scaled Gauss-Hermite rule is exact.
complex position_oracle(const PumpSpec& p, CoefficientKey key) {
  const BeamSpec b = p.rescaled_beam();
  const LgMode u(p.mode, b, b.waist_plane_z), us(key.signal(), b, b.waist_plane_z),
      ui(key.idler(), b, b.waist_plane_z);
  const Rule g = gauss_hermite(16);
  const double w = b.waist;
  const double aR = w / std::sqrt(2.0);  // R = aR x
  const double aS = w;                   // S = aS x
  const double s2 = 1.0 / std::sqrt(2.0);
  const std::size_t n = g.x.size();
  complex total = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t bb = 0; bb < n; ++bb) {
      const TransversePoint R{aR * g.x[a], aR * g.x[bb]};
      const double eR = std::exp(g.x[a] * g.x[a] + g.x[bb] * g.x[bb]);
      const complex uR = u(R) * eR;
      complex inner = 0.0;
      for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t d = 0; d < n; ++d) {
          const TransversePoint S{aS * g.x[c], aS * g.x[d]};
          const double eS = std::exp(g.x[c] * g.x[c] + g.x[d] * g.x[d]);
          inner += g.w[c] * g.w[d] * eS * std::conj(us(s2 * (R + S)) * ui(s2 * (R - S)));
        }
      }
      total += g.w[a] * g.w[bb] * uR * inner;
    }
  }
  return total * aR * aR * aS * aS;
}

}  // namespace

TEST_CASE("key enumeration") {
  const auto allowed = allowed_keys(1, 2);
  const auto forbidden = forbidden_keys(1, 2);
  // 6 modes of order <= 2, 36 pairs in total.
  CHECK(allowed.size() + forbidden.size() == 36);
  for (const auto& k : allowed) CHECK(k.ls + k.li == 1);
  for (const auto& k : forbidden) CHECK(k.ls + k.li != 1);
  CHECK(CoefficientKey{2, 1, -1, 0}.max_order() == 4);
  CHECK(CoefficientKey{2, 1, -1, 0}.swapped() == CoefficientKey{-1, 0, 2, 1});
}

TEST_CASE("thin coefficient: closed form for the Gaussian pump") {
  const double wc = std::sqrt(2.0) * kPumpBeam.waist;
  CHECK(coefficient_thin(pump(0, 0), {0, 0, 0, 0}).real() == doctest::Approx(std::sqrt(2 * kPi) * wc).epsilon(1e-12));
}

TEST_CASE("thin coefficient against the position-space oracle") {
  struct Case {
    PumpSpec p;
    CoefficientKey key;
  };
  for (const Case& c : {Case{pump(0, 1), {1, 0, 0, 0}}, Case{pump(0, 1), {-1, 1, 2, 1}},
                        Case{pump(1, 1), {1, 0, 0, 1}}, Case{pump(0, 2), {3, 0, -1, 0}}}) {
    const complex oracle = position_oracle(c.p, c.key);
    const complex got = coefficient_thin(c.p, c.key);
    CHECK(std::abs(got - oracle) < 1e-12 * std::abs(oracle));
  }
}

TEST_CASE("thin coefficient: frozen angular-spectrum values") {
  // Independent scipy evaluation of the same radial integral.
  CHECK(coefficient_thin(pump(0, 1), {1, 0, 0, 0}).real() == doctest::Approx(2.506628274631001e-03).epsilon(1e-11));
  CHECK(coefficient_thin(pump(0, 1), {2, 1, -1, 0}).real() == doctest::Approx(1.534990061919733e-03).epsilon(1e-11));
  CHECK(coefficient_thin(pump(0, 1), {0, 1, 1, 1}).real() == doctest::Approx(8.862269254527582e-04).epsilon(1e-11));
  CHECK(coefficient_thin(pump(0, 1), {-1, 1, 2, 1}).real() == doctest::Approx(-1.085401881837402e-03).epsilon(1e-11));
  CHECK(coefficient_thin(pump(1, 1), {1, 0, 0, 1}).real() == doctest::Approx(1.772453850905516e-03).epsilon(1e-11));
}

TEST_CASE("selection rule and exchange symmetry") {
  CHECK(coefficient_thin(pump(0, 1), {1, 0, 1, 0}) == complex(0.0, 0.0));
  CHECK(coefficient_thin(pump(0, 2), {0, 0, 0, 0}) == complex(0.0, 0.0));
  for (const auto& k : allowed_keys(2, 4)) {
    CHECK(std::abs(coefficient_thin(pump(0, 2), k) - coefficient_thin(pump(0, 2), k.swapped())) < 1e-18);
  }
  const auto defect = selection_defect(pump(0, 1), 2);
  CHECK(defect.max_allowed > 0.0);
  CHECK(defect.relative() < 1e-12);
}

TEST_CASE("spiral spectrum: frozen marginals and symmetry") {
  struct Case {
    int l;
    double raw;
    std::vector<std::pair<int, double>> P;
  };
  const std::vector<Case> cases = {
      {0, 9.556661959008e-05, {{0, 0.4124815910176}, {1, 0.1801050566014}, {-2, 0.08335506964314}, {3, 0.0212601174162}}},
      {1, 8.148199149091e-05, {{0, 0.2028502579163}, {1, 0.2028502579163}, {-1, 0.1622802063331}, {3, 0.08098949508641}}},
      {2, 7.136538819480e-05, {{1, 0.1865743825635}, {0, 0.1774391161361}, {-1, 0.1115577241364}, {-2, 0.0766072695226}}},
  };
  for (const auto& c : cases) {
    const auto table = spiral_spectrum(pump(0, c.l), 8);
    CHECK(table.raw_normalization() == doctest::Approx(c.raw).epsilon(1e-10));
    CHECK(table.normalization() == doctest::Approx(1.0).epsilon(1e-12));
    const auto P = table.marginal();
    for (const auto& [m, v] : c.P) CHECK(P.at(m) == doctest::Approx(v).epsilon(1e-10));
    for (const auto& [m, v] : P) CHECK(v == doctest::Approx(P.at(c.l - m)).epsilon(1e-12));
    for (const auto& [key, coeff] : table.entries()) CHECK(key.ls + key.li == c.l);
  }
}

TEST_CASE("truncation tail follows the non-normalisable thin-crystal amplitude") {
  // The thin-crystal amplitude is constant along rho_s - rho_i, so the
  // captured norm keeps growing with n_max; the tail stays near 20 %.
  CHECK(truncation_tail(pump(0, 0), 8) == doctest::Approx(1.928244657441e-01).epsilon(1e-9));
  CHECK(truncation_tail(pump(0, 1), 8) == doctest::Approx(2.106239864469e-01).epsilon(1e-9));
  CHECK(truncation_tail(pump(0, 2), 8) == doctest::Approx(2.255568890061e-01).epsilon(1e-9));
  CHECK(spiral_spectrum(pump(0, 1), 10).raw_normalization() > spiral_spectrum(pump(0, 1), 8).raw_normalization());
}

TEST_CASE("full coefficient reduces to the thin one for a short crystal") {
  const BiphotonModel m(pump(0, 1), CrystalParams::for_pump(1e-5, kPumpBeam.wavelength), 1.0, false);
  const auto spec = QuadratureSpec{}.with_tolerance(1e-7, 1e-14);
  for (CoefficientKey k : {CoefficientKey{1, 0, 0, 0}, CoefficientKey{2, 0, -1, 0}}) {
    const complex thin = coefficient_thin(pump(0, 1), k);
    CHECK(std::abs(coefficient_full(m, k, spec) - thin) < 1e-6 * std::abs(thin));
  }
  // A long crystal with a near detection plane shrinks the coefficient.
  const BiphotonModel near(pump(0, 1), CrystalParams::for_pump(7e-3, kPumpBeam.wavelength), 0.2, false);
  CHECK(std::abs(coefficient_full(near, {1, 0, 0, 0}, spec)) < std::abs(coefficient_thin(pump(0, 1), {1, 0, 0, 0})));
  CHECK_THROWS_AS(coefficient_full(m, {13, 0, -12, 0}, spec), std::domain_error);
}

TEST_CASE("classical witness") {
  for (int l : {1, 2, -1}) {
    const auto p = pump(0, l);
    const auto deltas = default_witness_deltas(p);
    const auto report = classical_witness(p, deltas);
    CHECK(report.verdict == WitnessVerdict::entangled_consistent);
    REQUIRE(report.quantum_P_values.size() == deltas.size());
    for (double q : report.quantum_P_values) CHECK(q < report.null_fraction * report.quantum_scale);
    double top = 0.0;
    for (double c : report.classical_Pcc_values) top = std::max(top, c);
    CHECK(top > report.visible_fraction * report.classical_scale);
    double weight = 0.0;
    for (const auto& c : report.components) {
      CHECK(c.signal.l + c.idler.l == l);
      weight += c.weight;
    }
    CHECK(weight == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(classical_witness(pump(0, 0), default_witness_deltas(pump(0, 0))), std::domain_error);
  CHECK(std::string(to_string(WitnessVerdict::inconclusive)) == "inconclusive");
}
