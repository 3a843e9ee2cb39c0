#include <doctest.h>

#include <cmath>
#include <random>

#include "kerrphc/band_structure.hpp"
#include "kerrphc/errors.hpp"

using namespace kerrphc;

namespace {

CrystalSpec gaas_crystal() {
  return {{"air", 1.0, 1.0, 0.0}, {"GaAs/GaAlAs", 13.0, 1.0, 0.0}, 3.57e-7, 3.57e-7};
}

CrystalSpec homogeneous(double eps, double la = 3.0e-7, double lb = 4.0e-7) {
  return {{"A", eps, 1.0, 0.0}, {"B", eps, 1.0, 0.0}, la, lb};
}

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

// Band edges of the air / eps = 13 quarter-stack with l_a = l_b, in
// omega L / 2 pi c. Frozen from a 30-digit root search on a 1.2e5-point
// brute-force scan of |G| = 1.
const double kOracleEdges[] = {0.0,
                               0.150855456246342, 0.256567797238066,
                               0.351940438141722, 0.506057643167156,
                               0.590852249916645, 0.733594712386155,
                               0.844255992985985, 0.913178140613967,
                               1.05549930447466,  1.10152880950082};

// Homogeneous folded light line, band m (1-based), reduced phase kappa.
double folded_line_norm(double kappa, int m, double eps) {
  const double unfolded = (m % 2 == 1) ? (m - 1) * kPi + kappa : m * kPi - kappa;
  return unfolded / (2.0 * kPi * std::sqrt(eps));
}

}  // namespace

TEST_CASE("layer_wavevectors") {
  const PhysicalConstants k;
  auto crystal = gaas_crystal();
  const auto [k1, k2] = layer_wavevectors(2.23e15, crystal, k);
  CHECK(rel_close(k1, 2.23e15 / 3.0e8, 1e-15));
  CHECK(rel_close(k1, 7.43e6, 1e-3));
  CHECK(rel_close(k2, std::sqrt(13.0) * k1, 1e-15));
  const auto zero = layer_wavevectors(0.0, crystal, k);
  CHECK(zero.first == 0.0);
  CHECK(zero.second == 0.0);
}

TEST_CASE("dispersion_rhs limits and homogeneous identity") {
  const PhysicalConstants k;
  const auto crystal = gaas_crystal();
  CHECK(dispersion_rhs(0.0, crystal, k) == 1.0);
  CHECK(dispersion_rhs(1.0, crystal, k) == doctest::Approx(1.0).epsilon(1e-12));

  const auto h = homogeneous(2.25);
  for (double omega : {1e14, 7e14, 2.3e15, 9e15}) {
    const double expected = std::cos(h.period() * omega / k.c * 1.5);
    CHECK(std::abs(dispersion_rhs(omega, h, k) - expected) <= 1e-13);
  }

  const double g = dispersion_rhs(norm_to_omega(0.843, crystal, k), crystal, k);
  CHECK(g == doctest::Approx(0.987760654712103).epsilon(1e-12));
  // Quoted kL = 0.158 at this frequency, to three figures.
  CHECK(std::abs(g - std::cos(0.158)) < 5e-4);
}

TEST_CASE("band edges match the brute-force oracle") {
  BandEdgeScanner scanner(gaas_crystal());
  for (int band = 1; band <= 5; ++band) {
    const auto [lo, hi] = scanner.band(band);
    CAPTURE(band);
    CHECK(lo == doctest::Approx(kOracleEdges[2 * band - 2]).epsilon(1e-12));
    CHECK(hi == doctest::Approx(kOracleEdges[2 * band - 1]).epsilon(1e-12));
  }
  // The quoted frequency sits in band 4, just under its upper edge.
  const auto [lo4, hi4] = scanner.band(4);
  CHECK(lo4 < 0.843);
  CHECK(0.843 < hi4);

  const auto si = band_edges(1, gaas_crystal());
  CHECK(si.first == 0.0);
}

TEST_CASE("edge scan is independent of the kernel variant") {
  BandEdgeScanner ref(gaas_crystal(), simd::kernels_for(simd::Isa::scalar));
  BandEdgeScanner fast(gaas_crystal(), simd::kernels());
  for (int band = 1; band <= 8; ++band) {
    CHECK(ref.band(band) == fast.band(band));
  }
}

TEST_CASE("homogeneous stack has zero-width gaps at n pi") {
  for (double eps : {1.0, 2.25, 13.0}) {
    const auto h = homogeneous(eps);
    BandEdgeScanner scanner(h);
    for (int band = 1; band <= 6; ++band) {
      const auto [lo, hi] = scanner.band(band);
      CAPTURE(eps);
      CAPTURE(band);
      CHECK(lo == doctest::Approx((band - 1) / (2.0 * std::sqrt(eps))).epsilon(1e-9));
      CHECK(hi == doctest::Approx(band / (2.0 * std::sqrt(eps))).epsilon(1e-9));
    }
  }
}

TEST_CASE("solve_k at the reference operating points") {
  const PhysicalConstants k;
  const auto crystal = gaas_crystal();
  const double L = crystal.period();

  const auto at = [&](double omega) { return std::get<DispersionPoint>(solve_k(omega, crystal, k)); };

  const auto p1 = at(omega_from_lambda(8.47e-7, k));
  CHECK(p1.band == 4);
  CHECK(p1.k * L == doctest::Approx(0.158184571914134).epsilon(1e-9));

  const auto p2 = at(omega_from_lambda(8.5e-7, k));
  CHECK(p2.k * L == doctest::Approx(0.294786475350972).epsilon(1e-9));
  CHECK(p2.band == 4);

  const auto p3 = at(norm_to_omega(0.843, crystal, k));
  CHECK(p3.k * L == doctest::Approx(0.156616691488618).epsilon(1e-9));
  CHECK(p3.band == 4);

  CHECK_THROWS_AS(solve_k(0.0, crystal, k), DomainError);
}

TEST_CASE("solve_k reports gaps with their edges") {
  const PhysicalConstants k;
  const auto crystal = gaas_crystal();
  const double mid = 0.5 * (kOracleEdges[5] + kOracleEdges[6]);  // gap above band 3
  const auto sol = solve_k(norm_to_omega(mid, crystal, k), crystal, k);
  REQUIRE(std::holds_alternative<BandGap>(sol));
  const auto gap = std::get<BandGap>(sol);
  CHECK(gap.below_band == 3);
  CHECK(omega_to_norm(gap.omega_low, crystal, k) == doctest::Approx(kOracleEdges[5]).epsilon(1e-12));
  CHECK(omega_to_norm(gap.omega_high, crystal, k) == doctest::Approx(kOracleEdges[6]).epsilon(1e-12));
}

TEST_CASE("vacuum stack follows the folded light line") {
  const PhysicalConstants k;
  const auto vac = homogeneous(1.0);
  const double L = vac.period();
  for (double x : {0.1, 0.37, 0.8, 1.23, 2.61}) {
    const double omega = norm_to_omega(x, vac, k);
    const auto p = std::get<DispersionPoint>(solve_k(omega, vac, k));
    const double free_kl = omega / k.c * L;
    const double folded = std::abs(std::remainder(free_kl, 2.0 * kPi));
    CHECK(p.k * L == doctest::Approx(folded).epsilon(1e-9));
  }
  CHECK(solve_omega(1.0 / L, 1, vac, k) == doctest::Approx(k.c / L).epsilon(1e-12));
}

TEST_CASE("solve_omega") {
  const PhysicalConstants k;
  const auto crystal = gaas_crystal();
  const double L = crystal.period();
  CHECK(solve_omega(0.0, 1, crystal, k) == 0.0);
  const double x = omega_to_norm(solve_omega(0.158 / L, 4, crystal, k), crystal, k);
  CHECK(x == doctest::Approx(0.842978137179697).epsilon(1e-11));
  CHECK(std::abs(x - 0.843) < 1e-3);
  // Negative k maps by symmetry.
  CHECK(solve_omega(-0.5 / L, 2, crystal, k) == solve_omega(0.5 / L, 2, crystal, k));

  CHECK_THROWS_AS(solve_omega(0.1 / L, 0, crystal, k), DomainError);
  CHECK_THROWS_AS(solve_omega(3.2 / L, 1, crystal, k), DomainError);
}

TEST_CASE("homogeneous-limit equivalence over random samples") {
  const PhysicalConstants k;
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> eps_dist(1.0, 16.0);
  std::uniform_real_distribution<double> kappa_dist(0.0, kPi);
  std::uniform_int_distribution<int> band_dist(1, 6);
  for (int trial = 0; trial < 100; ++trial) {
    const double eps = eps_dist(rng);
    const double kappa = kappa_dist(rng);
    const int band = band_dist(rng);
    const auto h = homogeneous(eps, 2.0e-7, 5.0e-7);
    const double x = omega_to_norm(solve_omega(kappa / h.period(), band, h, k), h, k);
    CAPTURE(eps);
    CAPTURE(kappa);
    CAPTURE(band);
    CHECK(x == doctest::Approx(folded_line_norm(kappa, band, eps)).epsilon(1e-9));
  }
}

TEST_CASE("solve_omega / solve_k round trip") {
  const PhysicalConstants k;
  const auto crystal = gaas_crystal();
  const double L = crystal.period();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> kappa_dist(0.02, kPi - 0.02);
  std::uniform_int_distribution<int> band_dist(1, 6);
  for (int trial = 0; trial < 60; ++trial) {
    const double kappa = kappa_dist(rng);
    const int band = band_dist(rng);
    const double omega = solve_omega(kappa / L, band, crystal, k);
    const auto p = std::get<DispersionPoint>(solve_k(omega, crystal, k));
    CHECK(p.band == band);
    CHECK(p.k * L == doctest::Approx(kappa).epsilon(1e-9));
    CHECK(std::abs(dispersion_residual(p, crystal, k)) <= 1e-9);
  }
}

TEST_CASE("gap detection agrees with |G| > 1") {
  const auto crystal = gaas_crystal();
  BandEdgeScanner scanner(crystal);
  for (int i = 1; i < 2000; ++i) {
    const double x = 1.05 * i / 2000.0;
    const double g = dispersion_rhs_norm(x, crystal);
    const auto loc = scanner.locate(x);
    CAPTURE(x);
    if (std::abs(std::abs(g) - 1.0) < 1e-9) continue;  // too close to an edge to call
    CHECK((loc.gap_below > 0) == (std::abs(g) > 1.0));
  }
}

TEST_CASE("group velocity") {
  const PhysicalConstants k;
  const auto crystal = gaas_crystal();
  const double L = crystal.period();

  const auto p = std::get<DispersionPoint>(solve_k(norm_to_omega(0.843, crystal, k), crystal, k));
  CHECK(group_velocity(p, crystal, k) / k.c == doctest::Approx(0.0988995423870552).epsilon(1e-8));
  const auto p2 = std::get<DispersionPoint>(solve_k(omega_from_lambda(8.5e-7, k), crystal, k));
  CHECK(group_velocity(p2, crystal, k) / k.c == doctest::Approx(0.170838175980748).epsilon(1e-8));
  const auto p3 = std::get<DispersionPoint>(solve_k(omega_from_lambda(8.47e-7, k), crystal, k));
  CHECK(group_velocity(p3, crystal, k) / k.c == doctest::Approx(0.0998161070611795).epsilon(1e-8));

  const auto vac = homogeneous(1.0);
  for (double kappa : {0.3, 1.0, 2.5}) {
    for (int band : {1, 2, 3}) {
      const DispersionPoint q{kappa / vac.period(), solve_omega(kappa / vac.period(), band, vac, k),
                              band};
      CHECK(group_velocity(q, vac, k) == doctest::Approx(k.c).epsilon(1e-12));
    }
  }

  // Tangential band touching in a homogeneous stack: sin kL = 0 and G' = 0.
  const double touch = norm_to_omega(0.5, vac, k);
  CHECK_THROWS_AS(group_velocity({kPi / vac.period(), touch, 1}, vac, k), NumericalError);

  // Implicit differentiation vs central differences of solve_omega.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> kappa_dist(0.05, kPi - 0.05);
  for (int trial = 0; trial < 40; ++trial) {
    const double kappa = kappa_dist(rng);
    const int band = 1 + trial % 5;
    const double h = 1e-6 * kPi / L;
    const double k0 = kappa / L;
    const DispersionPoint q{k0, solve_omega(k0, band, crystal, k), band};
    const double fd =
        std::abs(solve_omega(k0 + h, band, crystal, k) - solve_omega(k0 - h, band, crystal, k)) /
        (2 * h);
    CHECK(group_velocity(q, crystal, k) == doctest::Approx(fd).epsilon(1e-4));
  }
}

TEST_CASE("normalized results are scale invariant") {
  const PhysicalConstants k;
  const auto base = gaas_crystal();
  for (double s : {1e-3, 0.37, 5.0, 2e4}) {
    CrystalSpec scaled = base;
    scaled.l_a *= s;
    scaled.l_b *= s;
    const double omega = omega_from_lambda(8.47e-7, k);
    const auto a = std::get<DispersionPoint>(solve_k(omega, base, k));
    const auto b = std::get<DispersionPoint>(solve_k(omega / s, scaled, k));
    CHECK(b.band == a.band);
    CHECK(b.k * scaled.period() == doctest::Approx(a.k * base.period()).epsilon(1e-12));
    CHECK(group_velocity(b, scaled, k) == doctest::Approx(group_velocity(a, base, k)).epsilon(1e-12));
  }
}

TEST_CASE("band_scan structure") {
  const PhysicalConstants k;
  const auto crystal = gaas_crystal();
  const auto table = band_scan(crystal, k, 4, 200);
  REQUIRE(table.points.size() == 800);
  for (int b = 1; b <= 4; ++b) {
    const auto* first = &table.points[static_cast<std::size_t>((b - 1) * 200)];
    double prev = table.omega_norm(first[0]);
    for (int j = 1; j < 200; ++j) {
      const double w = table.omega_norm(first[j]);
      // Odd bands rise from k = 0, even bands fall.
      if (b % 2 == 1) {
        CHECK(w > prev);
      } else {
        CHECK(w < prev);
      }
      prev = w;
    }
  }
  for (const auto& p : table.points) CHECK(std::abs(dispersion_residual(p, crystal, k)) <= 1e-9);
  // Gap ordering: every band lies above the previous one.
  for (int b = 1; b < 4; ++b) {
    double top = 0.0, bottom = 1e9;
    for (const auto& p : table.points) {
      if (p.band == b) top = std::max(top, table.omega_norm(p));
      if (p.band == b + 1) bottom = std::min(bottom, table.omega_norm(p));
    }
    CHECK(top < bottom);
  }
  // The marked operating point (0.158, 0.843) lies between band-4 samples.
  bool bracketed = false;
  for (std::size_t i = 600; i + 1 < 800; ++i) {
    const double k0 = table.k_norm(table.points[i]);
    const double k1 = table.k_norm(table.points[i + 1]);
    if (k0 <= 0.158 && 0.158 <= k1) {
      const double w0 = table.omega_norm(table.points[i]);
      const double w1 = table.omega_norm(table.points[i + 1]);
      bracketed = std::min(w0, w1) - 1e-3 <= 0.843 && 0.843 <= std::max(w0, w1) + 1e-3;
    }
  }
  CHECK(bracketed);

  const auto minimal = band_scan(crystal, k, 2, 2);
  CHECK(minimal.points.size() == 4);
  CHECK_THROWS_AS(band_scan(crystal, k, 2, 1), DomainError);
}

TEST_CASE("crystal validation") {
  auto c = gaas_crystal();
  c.l_a = 0.0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = gaas_crystal();
  c.material_b.mu_rel = 2.0;
  CHECK_THROWS_AS(c.validate(), DomainError);
}
