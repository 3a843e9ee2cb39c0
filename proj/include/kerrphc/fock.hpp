#pragma once

// Sparse multimode Fock-space states and the gates of the Kerr
// conditional sign-flip network.

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "kerrphc/physics.hpp"

namespace kerrphc {

using Occupation = std::vector<int>;
using Amplitude = std::complex<double>;

/// Amplitudes below this are dropped after every gate.
inline constexpr double kPruneThreshold = 1e-15;

/// State over occupation tuples (n_1, ..., n_m) with sum n_i <= N_max.
/// Missing tuples have amplitude zero. Gates return new values.
class FockVector {
 public:
  FockVector(int num_modes, int max_total_photons);

  static FockVector basis(int num_modes, int max_total_photons, const Occupation& occupation);

  int num_modes() const { return num_modes_; }
  int max_total_photons() const { return max_total_photons_; }
  const std::map<Occupation, Amplitude>& terms() const { return terms_; }

  Amplitude amplitude(const Occupation& occupation) const;

  // Both throw UsageError for a tuple of the wrong length, with a negative
  // entry, or over the truncation bound.
  FockVector& set(const Occupation& occupation, Amplitude value);
  FockVector& add(const Occupation& occupation, Amplitude value);

  double norm_squared() const;
  double norm() const;
  FockVector normalized() const;
  FockVector pruned(double threshold = kPruneThreshold) const;

  /// <this|other>.
  Amplitude inner(const FockVector& other) const;

  /// Probability of each total photon number.
  std::map<int, double> photon_number_distribution() const;

  FockVector operator+(const FockVector& other) const;
  FockVector operator*(Amplitude factor) const;

  void check_mode(int mode) const;

 private:
  void check_occupation(const Occupation& occupation) const;
  void check_compatible(const FockVector& other) const;

  int num_modes_;
  int max_total_photons_;
  std::map<Occupation, Amplitude> terms_;
};

/// Fidelity |<e|a>|^2 / (|e|^2 |a|^2).
double fidelity(const FockVector& expected, const FockVector& actual);

/// Largest |expected - actual| over all tuples.
double max_deviation(const FockVector& expected, const FockVector& actual);

/// 50:50 beamsplitter a_i^+ -> (a_i^+ + a_j^+)/sqrt2, a_j^+ -> (a_i^+ - a_j^+)/sqrt2.
/// The mode matrix is its own inverse.
FockVector apply_beamsplitter(const FockVector& state, int i, int j);

/// |n> on mode i picks up exp(i chi_t n (n - 1)).
FockVector apply_kerr_phase(const FockVector& state, int i, double chi_t);

inline constexpr double kNsPhase = kPi / 2.0;

/// Nonlinear sign shift: a|0> + b|1> + c|2> -> a|0> + b|1> - c|2>.
FockVector apply_ns_gate(const FockVector& state, int i);

/// Logical |0> = (0, 1) and |1> = (1, 0) photons on (x1, x2).
struct DualRailQubit {
  int x1 = 0;
  int x2 = 1;
};

/// Beamsplitter on (x.x1, y.x1), Kerr phase chi_t on both outputs, same
/// beamsplitter again. chi_t = pi/2 gives |j>|k> -> (-1)^{jk} |j>|k>.
FockVector csf_network(const FockVector& state, const DualRailQubit& x, const DualRailQubit& y,
                       double chi_t = kNsPhase);

/// Two dual-rail qubits in logical basis state |j k>.
FockVector dual_rail_basis(int num_modes, int max_total_photons, const DualRailQubit& x, int j,
                           const DualRailQubit& y, int k);

struct GateReport {
  std::string label;
  FockVector output;
  double fidelity = 0.0;
  double max_deviation = 0.0;
};

/// Runs the four logical basis states and one seeded random superposition
/// through csf_network on modes x = (0, 1), y = (2, 3), comparing with
/// diag(1, 1, 1, -1).
std::vector<GateReport> verify_csf_truth_table(int max_total_photons, double chi_t = kNsPhase,
                                               std::uint64_t seed = 20070101);

/// Number-conserving part c2 (a^+)^2 a^2 + c1 a^+ a + c0 of (a^+ - a)^4.
struct QuarticDiagonal {
  double pair = 6.0;
  double number = 12.0;
  double constant = 3.0;

  double at(int n) const { return pair * n * (n - 1) + number * n + constant; }
};

/// Coefficients obtained by normal ordering (a^+ - a)^4 exactly.
inline constexpr QuarticDiagonal kNormalOrderedQuartic{6.0, 12.0, 3.0};

/// Diagonal of (a^+ - a)^4 built as a dense matrix on levels 0..N_max.
std::vector<double> quartic_diagonal(int max_level);

/// max |<n|(a^+ - a)^4|n> - form.at(n)| over n = 0..N_max-4. Levels within 4
/// of the truncation edge are skipped. Throws UsageError for N_max < 4.
double operator_identity_residual(int max_level,
                                  const QuarticDiagonal& form = kNormalOrderedQuartic);

/// {"num_modes": m, "max_total_photons": N, "n1,n2,...": [re, im], ...}
nlohmann::json fock_to_json(const FockVector& state);
FockVector fock_from_json(const nlohmann::json& j);

}  // namespace kerrphc
