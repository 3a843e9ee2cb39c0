#include <doctest.h>

#include <cmath>
#include <random>

#include "kerrphc/errors.hpp"
#include "kerrphc/fock.hpp"

using namespace kerrphc;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

FockVector random_state(int modes, int nmax, std::mt19937_64& rng, int max_terms = 12) {
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> occ(0, nmax);
  FockVector v(modes, nmax);
  for (int t = 0; t < max_terms; ++t) {
    Occupation o(static_cast<std::size_t>(modes), 0);
    int left = occ(rng);
    for (int m = 0; m < modes && left > 0; ++m) {
      std::uniform_int_distribution<int> take(0, left);
      const int n = (m == modes - 1) ? left : take(rng);
      o[static_cast<std::size_t>(m)] = n;
      left -= n;
    }
    v.add(o, {g(rng), g(rng)});
  }
  return v.normalized();
}

double distance(const FockVector& a, const FockVector& b) { return max_deviation(a, b); }

}  // namespace

TEST_CASE("beamsplitter on small inputs") {
  const auto hom = apply_beamsplitter(FockVector::basis(2, 2, {1, 1}), 0, 1);
  CHECK(std::abs(hom.amplitude({2, 0}) - kInvSqrt2) <= 1e-12);
  CHECK(std::abs(hom.amplitude({0, 2}) + kInvSqrt2) <= 1e-12);
  CHECK(std::abs(hom.amplitude({1, 1})) <= 1e-12);  // Hong-Ou-Mandel dip

  const auto vac = apply_beamsplitter(FockVector::basis(2, 2, {0, 0}), 0, 1);
  CHECK(vac.terms().size() == 1);
  CHECK(vac.amplitude({0, 0}) == Amplitude(1.0));

  const auto two = apply_beamsplitter(FockVector::basis(2, 2, {2, 0}), 0, 1);
  CHECK(std::abs(two.amplitude({2, 0}) - 0.5) <= 1e-12);
  CHECK(std::abs(two.amplitude({1, 1}) - kInvSqrt2) <= 1e-12);
  CHECK(std::abs(two.amplitude({0, 2}) - 0.5) <= 1e-12);

  // Embedded in a larger register, spectator modes are untouched.
  const auto wide = apply_beamsplitter(FockVector::basis(4, 3, {1, 1, 0, 1}), 0, 2);
  CHECK(std::abs(wide.amplitude({1, 1, 0, 1}) - kInvSqrt2) <= 1e-12);
  CHECK(std::abs(wide.amplitude({0, 1, 1, 1}) - kInvSqrt2) <= 1e-12);

  CHECK_THROWS_AS(apply_beamsplitter(FockVector::basis(2, 2, {1, 1}), 1, 1), UsageError);
  CHECK_THROWS_AS(apply_beamsplitter(FockVector::basis(2, 2, {1, 1}), 0, 2), UsageError);
}

TEST_CASE("kerr phase and NS gate") {
  const auto two = apply_kerr_phase(FockVector::basis(1, 3, {2}), 0, kNsPhase);
  CHECK(std::abs(two.amplitude({2}) + 1.0) <= 1e-12);
  const auto three = apply_kerr_phase(FockVector::basis(1, 3, {3}), 0, kNsPhase);
  CHECK(std::abs(three.amplitude({3}) + 1.0) <= 1e-12);
  for (double chi_t : {0.3, -2.0, 17.0}) {
    CHECK(apply_kerr_phase(FockVector::basis(1, 3, {0}), 0, chi_t).amplitude({0}) == Amplitude(1.0));
    CHECK(apply_kerr_phase(FockVector::basis(1, 3, {1}), 0, chi_t).amplitude({1}) == Amplitude(1.0));
  }

  const double s = 1.0 / std::sqrt(3.0);
  FockVector in(1, 2);
  in.set({0}, s).set({1}, s).set({2}, s);
  FockVector expected(1, 2);
  expected.set({0}, s).set({1}, s).set({2}, -s);
  CHECK(distance(apply_ns_gate(in, 0), expected) <= 1e-12);
  CHECK(apply_ns_gate(FockVector::basis(1, 2, {1}), 0).amplitude({1}) == Amplitude(1.0));
}

TEST_CASE("NS gate twice is the identity on n <= 2") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto v = random_state(2, 2, rng);
    CHECK(distance(apply_ns_gate(apply_ns_gate(v, 0), 0), v) <= 1e-12);
    CHECK(distance(apply_ns_gate(apply_ns_gate(v, 1), 1), v) <= 1e-12);
  }
}

TEST_CASE("conditional sign flip truth table") {
  const DualRailQubit x{0, 1}, y{2, 3};
  for (int j : {0, 1}) {
    for (int k : {0, 1}) {
      const auto in = dual_rail_basis(4, 2, x, j, y, k);
      const auto out = csf_network(in, x, y);
      const double sign = (j == 1 && k == 1) ? -1.0 : 1.0;
      CAPTURE(j);
      CAPTURE(k);
      CHECK(distance(out, in * sign) <= 1e-12);
      CHECK(fidelity(in * sign, out) >= 1.0 - 1e-12);
    }
  }

  // Product of |+> states.
  FockVector plus(4, 2);
  for (int j : {0, 1})
    for (int k : {0, 1}) plus = plus + dual_rail_basis(4, 2, x, j, y, k) * 0.5;
  FockVector expected = plus + dual_rail_basis(4, 2, x, 1, y, 1) * -1.0;
  CHECK(distance(csf_network(plus, x, y), expected) <= 1e-12);

  // Opposite sign of chi t gives the same gate.
  CHECK(distance(csf_network(plus, x, y, -kNsPhase), expected) <= 1e-12);

  CHECK_THROWS_AS(csf_network(plus, x, DualRailQubit{1, 3}), UsageError);
  CHECK_THROWS_AS(csf_network(plus, x, DualRailQubit{2, 2}), UsageError);
}

TEST_CASE("verify_csf_truth_table") {
  const auto reports = verify_csf_truth_table(4);
  REQUIRE(reports.size() == 5);
  CHECK(reports[0].label == "|00>");
  CHECK(reports[3].label == "|11>");
  CHECK(reports[4].label == "random");
  for (const auto& r : reports) {
    CAPTURE(r.label);
    CHECK(r.fidelity >= 1.0 - 1e-12);
    CHECK(r.fidelity <= 1.0 + 1e-12);
    CHECK(r.max_deviation <= 1e-12);
  }
  // Seeded: repeated runs agree exactly.
  const auto again = verify_csf_truth_table(4);
  CHECK(distance(again[4].output, reports[4].output) == 0.0);
}

TEST_CASE("detuned Kerr phase is detected") {
  const double delta = 1e-3;
  const double chi_t = kNsPhase * (1.0 + delta);
  const auto reports = verify_csf_truth_table(4, chi_t);
  // |11> only picks up a global phase e^{i pi (1 + delta)}.
  CHECK(reports[3].fidelity == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(reports[3].max_deviation ==
        doctest::Approx(std::abs(std::polar(1.0, kPi * (1.0 + delta)) + 1.0)).epsilon(1e-9));
  CHECK(reports[4].fidelity < 1.0 - 1e-8);
  CHECK(reports[4].max_deviation > 1e-4);

  const DualRailQubit x{0, 1}, y{2, 3};
  FockVector plus(4, 2), expected(4, 2);
  for (int j : {0, 1})
    for (int k : {0, 1}) {
      plus = plus + dual_rail_basis(4, 2, x, j, y, k) * 0.5;
      expected = expected + dual_rail_basis(4, 2, x, j, y, k) * ((j & k) ? -0.5 : 0.5);
    }
  const double oracle = std::norm(3.0 + std::polar(1.0, kPi * delta)) / 16.0;
  CHECK(fidelity(expected, csf_network(plus, x, y, chi_t)) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("gates preserve norm and photon-number distribution") {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<int> mode(0, 3), kind(0, 2);
  std::uniform_real_distribution<double> phase(-4.0, 4.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto v = random_state(4, 4, rng, 6);
    int i = mode(rng), j = mode(rng);
    if (i == j) j = (i + 1) % 4;
    FockVector out = v;
    switch (kind(rng)) {
      case 0: out = apply_beamsplitter(v, i, j); break;
      case 1: out = apply_kerr_phase(v, i, phase(rng)); break;
      default: out = apply_ns_gate(v, i); break;
    }
    CHECK(std::abs(out.norm() - 1.0) <= 1e-12);
    const auto before = v.photon_number_distribution();
    const auto after = out.photon_number_distribution();
    for (const auto& [n, p] : before) CHECK(std::abs(after.at(n) - p) <= 1e-12);
  }
}

TEST_CASE("beamsplitter is an involution") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const auto v = random_state(3, 6, rng);
    CHECK(distance(apply_beamsplitter(apply_beamsplitter(v, 0, 2), 0, 2), v) <= 1e-12);
  }
}

TEST_CASE("gates are linear") {
  std::mt19937_64 rng(31);
  const Amplitude a(0.3, -1.1), b(-0.7, 0.2);
  for (int trial = 0; trial < 100; ++trial) {
    const auto u = random_state(2, 5, rng);
    const auto v = random_state(2, 5, rng);
    const auto lhs = apply_beamsplitter(u * a + v * b, 0, 1);
    const auto rhs = apply_beamsplitter(u, 0, 1) * a + apply_beamsplitter(v, 0, 1) * b;
    CHECK(distance(lhs, rhs) <= 1e-12);
    const auto lk = apply_kerr_phase(u * a + v * b, 1, 0.9);
    const auto rk = apply_kerr_phase(u, 1, 0.9) * a + apply_kerr_phase(v, 1, 0.9) * b;
    CHECK(distance(lk, rk) <= 1e-12);
  }
}

TEST_CASE("quartic operator identity") {
  const auto diag = quartic_diagonal(10);
  REQUIRE(diag.size() == 11);
  CHECK(diag[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(diag[1] == doctest::Approx(15.0).epsilon(1e-14));
  CHECK(diag[2] == doctest::Approx(39.0).epsilon(1e-14));
  CHECK(operator_identity_residual(10) <= 1e-10);
  CHECK(operator_identity_residual(4) <= 1e-10);
  CHECK(operator_identity_residual(24) <= 1e-10);

  // The (6, 8, 1) expansion agrees on the pair term but misses 4n + 2.
  const QuarticDiagonal truncated{6.0, 8.0, 1.0};
  CHECK(truncated.at(0) == 1.0);
  CHECK(operator_identity_residual(10, truncated) == doctest::Approx(4.0 * 6 + 2.0).epsilon(1e-12));
  for (int n = 0; n <= 6; ++n) CHECK(kNormalOrderedQuartic.at(n) - truncated.at(n) == 4.0 * n + 2.0);

  CHECK_THROWS_AS(operator_identity_residual(3), UsageError);
}

TEST_CASE("FockVector bookkeeping") {
  FockVector v(2, 3);
  CHECK_THROWS_AS(v.set({1, 3}, 1.0), UsageError);
  CHECK_THROWS_AS(v.set({1}, 1.0), UsageError);
  CHECK_THROWS_AS(v.set({-1, 0}, 1.0), UsageError);
  CHECK_THROWS_AS(FockVector(0, 2), UsageError);
  CHECK_THROWS_AS(FockVector(2, 25), UsageError);
  v.set({1, 2}, {0.0, 2.0});
  v.add({1, 2}, {1e-17, -2.0});
  CHECK(v.pruned().terms().empty());
  CHECK_THROWS_AS(FockVector(2, 3).normalized(), DomainError);
  CHECK_THROWS_AS(FockVector(2, 3) + FockVector(3, 3), UsageError);
  CHECK(fidelity(FockVector::basis(2, 3, {1, 0}), FockVector::basis(2, 3, {0, 1})) == 0.0);
}

TEST_CASE("JSON round trip") {
  std::mt19937_64 rng(8);
  const auto v = random_state(3, 4, rng);
  const auto j = fock_to_json(v);
  CHECK(j.at("num_modes") == 3);
  CHECK(j.at("max_total_photons") == 4);
  const auto back = fock_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.num_modes() == 3);
  CHECK(distance(back, v) == 0.0);

  const auto hom = fock_to_json(apply_beamsplitter(FockVector::basis(2, 2, {1, 1}), 0, 1));
  CHECK(hom.contains("2,0"));
  CHECK(hom.at("0,2")[0].get<double>() == doctest::Approx(-kInvSqrt2));

  CHECK_THROWS(fock_from_json(nlohmann::json::parse(R"({"num_modes": 2, "max_total_photons": 2, "1,x": [1, 0]})")));
  CHECK_THROWS(fock_from_json(nlohmann::json::parse(R"({"num_modes": 2, "max_total_photons": 2, "3,0": [1, 0]})")));
}
