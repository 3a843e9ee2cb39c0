#include "kerrphc/fock.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "kerrphc/errors.hpp"

namespace kerrphc {

namespace {

// Factorials stay exact in long double far past this.
constexpr int kMaxSupportedPhotons = 24;

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t out = 1;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

long double factorial(int n) {
  long double out = 1.0L;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

std::string occupation_key(const Occupation& occ) {
  std::string key;
  for (std::size_t i = 0; i < occ.size(); ++i) {
    if (i) key += ',';
    key += std::to_string(occ[i]);
  }
  return key;
}

}  // namespace

FockVector::FockVector(int num_modes, int max_total_photons)
    : num_modes_(num_modes), max_total_photons_(max_total_photons) {
  if (num_modes < 1) throw UsageError("FockVector needs at least one mode");
  if (max_total_photons < 0 || max_total_photons > kMaxSupportedPhotons) {
    throw UsageError("photon truncation must lie in [0, " +
                     std::to_string(kMaxSupportedPhotons) + "]");
  }
}

FockVector FockVector::basis(int num_modes, int max_total_photons, const Occupation& occupation) {
  FockVector v(num_modes, max_total_photons);
  v.set(occupation, 1.0);
  return v;
}

void FockVector::check_mode(int mode) const {
  if (mode < 0 || mode >= num_modes_) {
    throw UsageError("mode index " + std::to_string(mode) + " out of range");
  }
}

void FockVector::check_occupation(const Occupation& occ) const {
  if (static_cast<int>(occ.size()) != num_modes_) {
    throw UsageError("occupation tuple has wrong number of modes");
  }
  int total = 0;
  for (int n : occ) {
    if (n < 0) throw UsageError("negative occupation number");
    total += n;
  }
  if (total > max_total_photons_) {
    throw UsageError("occupation " + occupation_key(occ) + " exceeds the truncation bound " +
                     std::to_string(max_total_photons_));
  }
}

void FockVector::check_compatible(const FockVector& other) const {
  if (other.num_modes_ != num_modes_ || other.max_total_photons_ != max_total_photons_) {
    throw UsageError("Fock vectors live in different truncated spaces");
  }
}

Amplitude FockVector::amplitude(const Occupation& occ) const {
  const auto it = terms_.find(occ);
  return it == terms_.end() ? Amplitude{} : it->second;
}

FockVector& FockVector::set(const Occupation& occ, Amplitude value) {
  check_occupation(occ);
  if (value == Amplitude{}) {
    terms_.erase(occ);
  } else {
    terms_[occ] = value;
  }
  return *this;
}

FockVector& FockVector::add(const Occupation& occ, Amplitude value) {
  check_occupation(occ);
  terms_[occ] += value;
  return *this;
}

double FockVector::norm_squared() const {
  double sum = 0.0;
  for (const auto& [occ, amp] : terms_) sum += std::norm(amp);
  return sum;
}

double FockVector::norm() const { return std::sqrt(norm_squared()); }

FockVector FockVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw DomainError("cannot normalize the zero vector");
  return *this * Amplitude(1.0 / n);
}

FockVector FockVector::pruned(double threshold) const {
  FockVector out(num_modes_, max_total_photons_);
  for (const auto& [occ, amp] : terms_) {
    if (std::abs(amp) >= threshold) out.terms_.emplace(occ, amp);
  }
  return out;
}

Amplitude FockVector::inner(const FockVector& other) const {
  check_compatible(other);
  Amplitude sum{};
  for (const auto& [occ, amp] : terms_) {
    const auto it = other.terms_.find(occ);
    if (it != other.terms_.end()) sum += std::conj(amp) * it->second;
  }
  return sum;
}

std::map<int, double> FockVector::photon_number_distribution() const {
  std::map<int, double> dist;
  for (const auto& [occ, amp] : terms_) {
    dist[std::accumulate(occ.begin(), occ.end(), 0)] += std::norm(amp);
  }
  return dist;
}

FockVector FockVector::operator+(const FockVector& other) const {
  check_compatible(other);
  FockVector out = *this;
  for (const auto& [occ, amp] : other.terms_) out.terms_[occ] += amp;
  return out;
}

FockVector FockVector::operator*(Amplitude factor) const {
  FockVector out = *this;
  for (auto& [occ, amp] : out.terms_) amp *= factor;
  return out;
}

double fidelity(const FockVector& expected, const FockVector& actual) {
  const double denom = expected.norm_squared() * actual.norm_squared();
  if (denom == 0.0) throw DomainError("fidelity of a zero vector");
  return std::norm(expected.inner(actual)) / denom;
}

double max_deviation(const FockVector& expected, const FockVector& actual) {
  double worst = 0.0;
  for (const auto& [occ, amp] : expected.terms()) {
    worst = std::max(worst, std::abs(amp - actual.amplitude(occ)));
  }
  for (const auto& [occ, amp] : actual.terms()) {
    if (!expected.terms().contains(occ)) worst = std::max(worst, std::abs(amp));
  }
  return worst;
}

FockVector apply_beamsplitter(const FockVector& state, int i, int j) {
  state.check_mode(i);
  state.check_mode(j);
  if (i == j) throw UsageError("beamsplitter needs two distinct modes");

  FockVector out(state.num_modes(), state.max_total_photons());
  for (const auto& [occ, amp] : state.terms()) {
    const int p = occ[i];
    const int q = occ[j];
    const int total = p + q;
    // (a_i^+ + a_j^+)^p (a_i^+ - a_j^+)^q = sum_u c_u (a_i^+)^u (a_j^+)^(total-u)
    std::vector<std::int64_t> c(total + 1, 0);
    for (int r = 0; r <= p; ++r) {
      for (int s = 0; s <= q; ++s) {
        const std::int64_t sign = ((q - s) % 2 == 0) ? 1 : -1;
        c[r + s] += sign * binomial(p, r) * binomial(q, s);
      }
    }
    const long double in_norm = factorial(p) * factorial(q);
    const long double split = std::pow(2.0L, -0.5L * total);
    Occupation target = occ;
    for (int u = 0; u <= total; ++u) {
      if (c[u] == 0) continue;
      const int v = total - u;
      const long double weight =
          split * static_cast<long double>(c[u]) *
          std::sqrt(factorial(u) * factorial(v) / in_norm);
      target[i] = u;
      target[j] = v;
      out.add(target, amp * static_cast<double>(weight));
    }
  }
  return out.pruned();
}

FockVector apply_kerr_phase(const FockVector& state, int i, double chi_t) {
  state.check_mode(i);
  FockVector out(state.num_modes(), state.max_total_photons());
  for (const auto& [occ, amp] : state.terms()) {
    const int n = occ[i];
    out.set(occ, amp * std::polar(1.0, chi_t * n * (n - 1)));
  }
  return out.pruned();
}

FockVector apply_ns_gate(const FockVector& state, int i) {
  return apply_kerr_phase(state, i, kNsPhase);
}

FockVector csf_network(const FockVector& state, const DualRailQubit& x, const DualRailQubit& y,
                       double chi_t) {
  const int modes[] = {x.x1, x.x2, y.x1, y.x2};
  for (int m : modes) state.check_mode(m);
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      if (modes[a] == modes[b]) throw UsageError("dual-rail qubits must use four distinct modes");
    }
  }
  FockVector s = apply_beamsplitter(state, x.x1, y.x1);
  s = apply_kerr_phase(s, x.x1, chi_t);
  s = apply_kerr_phase(s, y.x1, chi_t);
  return apply_beamsplitter(s, x.x1, y.x1);
}

FockVector dual_rail_basis(int num_modes, int max_total_photons, const DualRailQubit& x, int j,
                           const DualRailQubit& y, int k) {
  Occupation occ(static_cast<std::size_t>(num_modes), 0);
  FockVector probe(num_modes, max_total_photons);
  for (int m : {x.x1, x.x2, y.x1, y.x2}) probe.check_mode(m);
  occ[j ? x.x1 : x.x2] += 1;
  occ[k ? y.x1 : y.x2] += 1;
  return FockVector::basis(num_modes, max_total_photons, occ);
}

std::vector<GateReport> verify_csf_truth_table(int max_total_photons, double chi_t,
                                               std::uint64_t seed) {
  if (max_total_photons < 2) {
    throw UsageError("conditional sign flip needs a truncation of at least 2 photons");
  }
  constexpr int kModes = 4;
  const DualRailQubit x{0, 1};
  const DualRailQubit y{2, 3};
  const auto basis = [&](int j, int k) {
    return dual_rail_basis(kModes, max_total_photons, x, j, y, k);
  };

  std::vector<GateReport> reports;
  const auto run = [&](std::string label, const FockVector& input, const FockVector& expected) {
    FockVector out = csf_network(input, x, y, chi_t);
    reports.push_back(
        {std::move(label), out, fidelity(expected, out), max_deviation(expected, out)});
  };

  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      const double sign = (j && k) ? -1.0 : 1.0;
      run("|" + std::to_string(j) + std::to_string(k) + ">", basis(j, k),
          basis(j, k) * Amplitude(sign));
    }
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  FockVector input(kModes, max_total_photons);
  FockVector expected(kModes, max_total_photons);
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      const Amplitude a{gauss(rng), gauss(rng)};
      const double sign = (j && k) ? -1.0 : 1.0;
      input = input + basis(j, k) * a;
      expected = expected + basis(j, k) * (a * sign);
    }
  }
  const double n = input.norm();
  run("random", input * Amplitude(1.0 / n), expected * Amplitude(1.0 / n));
  return reports;
}

std::vector<double> quartic_diagonal(int max_level) {
  if (max_level < 0) throw UsageError("negative truncation level");
  const int dim = max_level + 1;
  Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(dim, dim);  // annihilation a
  for (int n = 1; n < dim; ++n) lower(n - 1, n) = std::sqrt(static_cast<double>(n));
  const Eigen::MatrixXd x = lower.transpose() - lower;
  const Eigen::MatrixXd x2 = x * x;
  const Eigen::MatrixXd x4 = x2 * x2;
  std::vector<double> diag(static_cast<std::size_t>(dim));
  for (int n = 0; n < dim; ++n) diag[static_cast<std::size_t>(n)] = x4(n, n);
  return diag;
}

double operator_identity_residual(int max_level, const QuarticDiagonal& form) {
  if (max_level < 4) throw UsageError("operator identity check needs N_max >= 4");
  const auto diag = quartic_diagonal(max_level);
  double worst = 0.0;
  for (int n = 0; n <= max_level - 4; ++n) {
    worst = std::max(worst, std::abs(diag[static_cast<std::size_t>(n)] - form.at(n)));
  }
  return worst;
}

nlohmann::json fock_to_json(const FockVector& state) {
  nlohmann::json j;
  j["num_modes"] = state.num_modes();
  j["max_total_photons"] = state.max_total_photons();
  for (const auto& [occ, amp] : state.terms()) {
    j[occupation_key(occ)] = {amp.real(), amp.imag()};
  }
  return j;
}

FockVector fock_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("num_modes") || !j.contains("max_total_photons")) {
    throw UsageError("Fock state JSON needs num_modes and max_total_photons");
  }
  FockVector out(j.at("num_modes").get<int>(), j.at("max_total_photons").get<int>());
  for (const auto& [key, value] : j.items()) {
    if (key == "num_modes" || key == "max_total_photons") continue;
    Occupation occ;
    std::stringstream ss(key);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        occ.push_back(std::stoi(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw UsageError("bad occupation key '" + key + "'");
      }
    }
    if (!value.is_array() || value.size() != 2) {
      throw UsageError("amplitude for '" + key + "' must be [re, im]");
    }
    out.set(occ, {value[0].get<double>(), value[1].get<double>()});
  }
  return out;
}

}  // namespace kerrphc
