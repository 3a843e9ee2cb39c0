#include "kerrphc/band_structure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kerrphc/errors.hpp"

namespace kerrphc {

namespace {

// |G| above 1 by more than this counts as a gap on the scan grid.
constexpr double kGapSlack = 1e-12;
// A local maximum of |G| reaching within this of 1 is a (possibly
// zero-width) band edge.
constexpr double kTouchTolerance = 1e-9;
constexpr double kResidualTolerance = 1e-9;
constexpr std::size_t kScanChunk = 1024;

double sign_of(double v) { return v < 0.0 ? -1.0 : 1.0; }

template <class F>
double bisect(F&& f, double lo, double hi, const char* what) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) {
    // Touching roots land here with |f| at rounding level at one end.
    const double best = std::abs(flo) <= std::abs(fhi) ? lo : hi;
    if (std::min(std::abs(flo), std::abs(fhi)) < 1e-12) return best;
    std::ostringstream msg;
    msg.precision(15);
    msg << "bracketing failure in " << what << ": f(" << lo << ") = " << flo << ", f(" << hi
        << ") = " << fhi;
    throw NumericalError(msg.str());
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void CrystalSpec::validate() const {
  material_a.validate();
  material_b.validate();
  if (!(l_a > 0.0) || !(l_b > 0.0) || !std::isfinite(l_a) || !std::isfinite(l_b)) {
    throw DomainError("layer thicknesses must be finite and positive");
  }
  if (material_a.mu_rel != 1.0 || material_b.mu_rel != 1.0) {
    throw DomainError("band structure assumes non-magnetic layers (mu_rel = 1)");
  }
}

simd::CellPhases CrystalSpec::cell_phases() const {
  const double na = std::sqrt(material_a.eps_rel);
  const double nb = std::sqrt(material_b.eps_rel);
  const double L = period();
  return {2.0 * kPi * na * l_a / L, 2.0 * kPi * nb * l_b / L,
          (na * na + nb * nb) / (2.0 * na * nb)};
}

double BandTable::omega_norm(const DispersionPoint& p) const {
  return p.omega * period / (2.0 * kPi * c);
}

double omega_to_norm(double omega, const CrystalSpec& crystal,
                     const PhysicalConstants& constants) {
  return omega * crystal.period() / (2.0 * kPi * constants.c);
}

double norm_to_omega(double x, const CrystalSpec& crystal, const PhysicalConstants& constants) {
  return x * 2.0 * kPi * constants.c / crystal.period();
}

std::pair<double, double> layer_wavevectors(double omega, const CrystalSpec& crystal,
                                            const PhysicalConstants& constants) {
  if (!(omega >= 0.0)) throw DomainError("angular frequency must be non-negative");
  const double k0 = omega / constants.c;
  return {k0 * std::sqrt(crystal.material_a.eps_rel), k0 * std::sqrt(crystal.material_b.eps_rel)};
}

double dispersion_rhs_norm(double x, const CrystalSpec& crystal) {
  // The 0/0 in the mixing factor never appears here because it is written
  // in terms of refractive indices; x = 0 still returns exactly 1.
  if (x == 0.0) return 1.0;
  const auto cell = crystal.cell_phases();
  const double a = cell.alpha * x;
  const double b = cell.beta * x;
  return std::cos(a) * std::cos(b) - cell.mix * std::sin(a) * std::sin(b);
}

double dispersion_rhs_slope_norm(double x, const CrystalSpec& crystal) {
  const auto cell = crystal.cell_phases();
  const double sa = std::sin(cell.alpha * x), ca = std::cos(cell.alpha * x);
  const double sb = std::sin(cell.beta * x), cb = std::cos(cell.beta * x);
  return -cell.alpha * sa * cb - cell.beta * ca * sb -
         cell.mix * (cell.alpha * ca * sb + cell.beta * sa * cb);
}

double dispersion_rhs(double omega, const CrystalSpec& crystal,
                      const PhysicalConstants& constants) {
  if (!(omega >= 0.0)) throw DomainError("angular frequency must be non-negative");
  return dispersion_rhs_norm(omega_to_norm(omega, crystal, constants), crystal);
}

double dispersion_residual(const DispersionPoint& point, const CrystalSpec& crystal,
                           const PhysicalConstants& constants) {
  return std::cos(point.k * crystal.period()) - dispersion_rhs(point.omega, crystal, constants);
}

BandEdgeScanner::BandEdgeScanner(const CrystalSpec& crystal, const simd::Kernels& kernels)
    : crystal_(crystal), phases_(crystal.cell_phases()), kernels_(&kernels) {
  crystal_.validate();
  const double na = std::sqrt(crystal.material_a.eps_rel);
  const double nb = std::sqrt(crystal.material_b.eps_rel);
  // Bands are spaced by roughly 1 / (2 n_avg) in x, n_avg the optical-path
  // average index of the cell.
  const double n_avg = (na * crystal.l_a + nb * crystal.l_b) / crystal.period();
  step_ = 1.0 / (2.0 * n_avg * kPointsPerBandSpan);
  min_index_ = std::min(na, nb);
  edges_.push_back(0.0);
  extend_grid();
  processed_ = 1;
}

void BandEdgeScanner::extend_grid() {
  const std::size_t first = g_.size();
  std::vector<double> x(kScanChunk);
  for (std::size_t i = 0; i < kScanChunk; ++i) x[i] = x_at(first + i);
  g_.resize(first + kScanChunk);
  kernels_->dispersion_rhs(phases_, x, std::span<double>(g_).subspan(first));
  if (first == 0) g_[0] = 1.0;
}

void BandEdgeScanner::process_point(std::size_t i) {
  const auto G = [this](double x) { return dispersion_rhs_norm(x, crystal_); };
  const auto outside = [](double g) { return std::abs(g) > 1.0 + kGapSlack; };
  const auto push = [this](double e) {
    if (e < edges_.back()) {
      throw NumericalError("band edge scan produced out-of-order edges");
    }
    edges_.push_back(e);
  };

  const double gp = g_[i - 1];
  const double gi = g_[i];

  if (i >= 2) {
    const double gpp = g_[i - 2];
    const bool interior_peak = !outside(gpp) && !outside(gp) && !outside(gi) &&
                               std::abs(gp) >= std::abs(gpp) && std::abs(gp) >= std::abs(gi) &&
                               std::abs(gp) > 0.5;
    if (interior_peak) {
      const double lo = x_at(i - 2);
      const double hi = x_at(i);
      const auto slope = [this](double x) { return dispersion_rhs_slope_norm(x, crystal_); };
      if ((slope(lo) < 0.0) != (slope(hi) < 0.0)) {
        const double peak = bisect(slope, lo, hi, "band-edge extremum");
        const double gpeak = G(peak);
        if (std::abs(gpeak) >= 1.0 - kTouchTolerance) {
          if (outside(gpeak)) {
            // Narrow gap entirely between grid points.
            const double level = sign_of(gpeak);
            const auto f = [&](double x) { return G(x) - level; };
            push(bisect(f, lo, peak, "narrow gap lower edge"));
            push(bisect(f, peak, hi, "narrow gap upper edge"));
          } else {
            push(peak);
            push(peak);
          }
        }
      }
    }
  }

  if (outside(gp) != outside(gi)) {
    const double level = sign_of(outside(gi) ? gi : gp);
    const auto f = [&](double x) { return G(x) - level; };
    push(bisect(f, x_at(i - 1), x_at(i), "band edge"));
  } else if (outside(gp) && outside(gi) && sign_of(gp) != sign_of(gi)) {
    throw NumericalError("band edge scan grid too coarse: a whole band fits in one cell");
  }
}

void BandEdgeScanner::ensure_edges(std::size_t count) {
  const double limit = (static_cast<double>(count) + 8.0) / min_index_;
  while (edges_.size() < count) {
    if (x_at(processed_) > limit) {
      std::ostringstream msg;
      msg << "band edge scan exhausted at x = " << x_at(processed_) << " with "
          << edges_.size() << " of " << count << " edges found";
      throw NumericalError(msg.str());
    }
    if (processed_ >= g_.size()) extend_grid();
    process_point(processed_);
    ++processed_;
  }
}

void BandEdgeScanner::ensure_scanned_past(double x) {
  // Edges from a peak at point i are only found once point i + 1 is processed.
  while (processed_ < 2 || x_at(processed_ - 2) <= x) {
    if (processed_ >= g_.size()) extend_grid();
    process_point(processed_);
    ++processed_;
  }
}

std::pair<double, double> BandEdgeScanner::band(int band) {
  if (band < 1) throw DomainError("band index must be >= 1");
  const auto m = static_cast<std::size_t>(band);
  ensure_edges(2 * m);
  return {edges_[2 * m - 2], edges_[2 * m - 1]};
}

BandEdgeScanner::Location BandEdgeScanner::locate(double x) {
  if (!(x >= 0.0)) throw DomainError("normalized frequency must be non-negative");
  ensure_scanned_past(x);
  const auto idx = static_cast<std::size_t>(
      std::upper_bound(edges_.begin(), edges_.end(), x) - edges_.begin());
  Location loc;
  if (idx % 2 == 1) {
    loc.band = static_cast<int>((idx - 1) / 2 + 1);
  } else if (x == edges_[idx - 1]) {
    loc.band = static_cast<int>(idx / 2);
  } else {
    loc.gap_below = static_cast<int>(idx / 2);
    ensure_edges(idx + 1);
  }
  return loc;
}

BlochSolution solve_k(double omega, const CrystalSpec& crystal,
                      const PhysicalConstants& constants) {
  if (!(omega > 0.0)) throw DomainError("angular frequency must be positive");
  crystal.validate();
  BandEdgeScanner scanner(crystal);
  const double x = omega_to_norm(omega, crystal, constants);
  const auto loc = scanner.locate(x);
  if (loc.band == 0) {
    const auto below = scanner.band(loc.gap_below);
    const auto above = scanner.band(loc.gap_below + 1);
    return BandGap{loc.gap_below, norm_to_omega(below.second, crystal, constants),
                   norm_to_omega(above.first, crystal, constants)};
  }
  const double g = std::clamp(dispersion_rhs_norm(x, crystal), -1.0, 1.0);
  return DispersionPoint{std::acos(g) / crystal.period(), omega, loc.band};
}

double solve_omega(double k, int band, const CrystalSpec& crystal,
                   const PhysicalConstants& constants, BandEdgeScanner& scanner) {
  const double L = crystal.period();
  double kappa = std::abs(k) * L;
  if (kappa > kPi * (1.0 + 1e-12)) {
    throw DomainError("Bloch wave vector outside the first Brillouin zone");
  }
  kappa = std::min(kappa, kPi);
  const auto [lo, hi] = scanner.band(band);
  const double target = std::cos(kappa);
  const auto f = [&](double x) { return dispersion_rhs_norm(x, crystal) - target; };
  const double x = bisect(f, lo, hi, "solve_omega");
  const double residual = std::abs(f(x));
  if (residual > kResidualTolerance) {
    std::ostringstream msg;
    msg << "solve_omega residual " << residual << " at kL = " << kappa << ", band " << band;
    throw NumericalError(msg.str());
  }
  return norm_to_omega(x, crystal, constants);
}

double solve_omega(double k, int band, const CrystalSpec& crystal,
                   const PhysicalConstants& constants) {
  BandEdgeScanner scanner(crystal);
  return solve_omega(k, band, crystal, constants, scanner);
}

std::pair<double, double> band_edges(int band, const CrystalSpec& crystal,
                                     const PhysicalConstants& constants) {
  BandEdgeScanner scanner(crystal);
  const auto [lo, hi] = scanner.band(band);
  return {norm_to_omega(lo, crystal, constants), norm_to_omega(hi, crystal, constants)};
}

double group_velocity(const DispersionPoint& point, const CrystalSpec& crystal,
                      const PhysicalConstants& constants) {
  crystal.validate();
  const double x = omega_to_norm(point.omega, crystal, constants);
  const double kappa = point.k * crystal.period();
  const double s = std::sin(kappa);
  const double slope = dispersion_rhs_slope_norm(x, crystal);
  if (std::abs(s) < 1e-12 && std::abs(slope) < 1e-9) {
    throw NumericalError("group velocity undefined at a degenerate band edge (sin kL = 0, G' = 0)");
  }
  if (slope == 0.0) throw NumericalError("group velocity diverges: G'(omega) = 0");
  // -sin(kL) dkL = G'(x) dx and omega/k scale as 2 pi c.
  return 2.0 * kPi * constants.c * std::abs(s / slope);
}

BandTable band_scan(const CrystalSpec& crystal, const PhysicalConstants& constants, int bands,
                    int samples) {
  if (samples < 2) throw DomainError("band_scan needs at least 2 samples");
  if (bands < 1) throw DomainError("band_scan needs at least 1 band");
  crystal.validate();
  BandEdgeScanner scanner(crystal);
  BandTable table;
  table.bands = bands;
  table.samples = samples;
  table.period = crystal.period();
  table.c = constants.c;
  table.points.reserve(static_cast<std::size_t>(bands) * samples);
  for (int b = 1; b <= bands; ++b) {
    for (int j = 0; j < samples; ++j) {
      const double kappa = kPi * j / (samples - 1);
      const double k = kappa / table.period;
      table.points.push_back({k, solve_omega(k, b, crystal, constants, scanner), b});
    }
  }
  return table;
}

}  // namespace kerrphc
