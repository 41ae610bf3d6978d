#include "homsim/biphoton.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dft.hpp"
#include "homsim/constants.hpp"

namespace homsim {

namespace {

constexpr double kNormTolerance = 1e-9;
constexpr double kRequiredCoverage = 0.999;

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

void validate_grid_shape(double step, std::size_t count) {
  if (count < 3)
    throw std::invalid_argument("amplitude grid needs at least 3 points");
  if (count % 2 == 0)
    throw std::invalid_argument("amplitude grid needs an odd point count");
  if (!(step > 0.0) || !std::isfinite(step))
    throw std::invalid_argument("amplitude grid step must be positive");
}

template <typename Values>
double riemann_mass(const Values& values, double step) {
  double sum = 0.0;
  for (const auto& v : values) sum += std::norm(v);
  return sum * step;
}

template <typename Values>
void normalize(Values& values, double step) {
  const double mass = riemann_mass(values, step);
  if (!(mass > 0.0) || !std::isfinite(mass))
    throw std::invalid_argument("amplitude has zero or non-finite mass");
  const double scale = 1.0 / std::sqrt(mass);
  for (auto& v : values) v *= scale;
}

}  // namespace

void CrystalConfig::validate() const {
  if (!(length_mm > 0.0))
    throw std::invalid_argument("crystal length must be positive");
  if (dvg_fs_per_mm == 0.0 || !std::isfinite(dvg_fs_per_mm))
    throw std::invalid_argument(
        "inverse-group-velocity difference D must be nonzero");
  if (!(pump_wavelength_nm > 0.0))
    throw std::invalid_argument("pump wavelength must be positive");
}

double mismatch(const CrystalConfig& crystal, double omega_rad_per_fs) {
  return crystal.dvg_fs_per_mm * omega_rad_per_fs;
}

void GridSpec::validate() const {
  if (!(span_rad_per_fs > 0.0))
    throw std::invalid_argument("grid span must be positive");
  if (points < 3) throw std::invalid_argument("grid needs at least 3 points");
  if (points % 2 == 0)
    throw std::invalid_argument("grid point count must be odd");
}

GridSpec GridSpec::default_for(const CrystalConfig& crystal) {
  crystal.validate();
  const double first_zero =
      kTwoPi / std::abs(crystal.length_mm * crystal.dvg_fs_per_mm);
  return GridSpec{2.0 * 320.0 * first_zero, 8193};
}

SpectralAmplitude::SpectralAmplitude(double grid_step,
                                     std::vector<std::complex<double>> values)
    : step_(grid_step), values_(std::move(values)) {
  validate_grid_shape(step_, values_.size());
  half_ = static_cast<int>(values_.size() - 1) / 2;
  normalize(values_, step_);
}

double SpectralAmplitude::norm_sum() const {
  return riemann_mass(values_, step_);
}

TemporalAmplitude::TemporalAmplitude(double grid_step_fs,
                                     std::vector<std::complex<double>> values)
    : step_(grid_step_fs), values_(std::move(values)) {
  validate_grid_shape(step_, values_.size());
  half_ = static_cast<int>(values_.size() - 1) / 2;
  const double mass = riemann_mass(values_, step_);
  if (std::abs(mass - 1.0) > kNormTolerance)
    throw std::invalid_argument("temporal amplitude is not normalized");
}

double TemporalAmplitude::norm_sum() const {
  return riemann_mass(values_, step_);
}

SpectralAmplitude sinc_state_function(const CrystalConfig& crystal,
                                      const GridSpec& grid) {
  crystal.validate();
  grid.validate();

  const double alpha = 0.5 * crystal.length_mm * crystal.dvg_fs_per_mm;
  const double step = grid.step();
  const int half = (grid.points - 1) / 2;

  std::vector<std::complex<double>> values(grid.points);
  double mass = 0.0;
  for (int i = 0; i < grid.points; ++i) {
    const double omega = (i - half) * step;
    const double x = alpha * omega;
    const double amp = crystal.length_mm * sinc(x);
    values[i] = std::polar(amp, x);
    mass += amp * amp;
  }
  mass *= step;

  // Post-hoc mass coverage against the closed-form integral of the
  // unnormalized |Phi~|^2, which is L^2 * pi / |alpha|.
  const double analytic =
      crystal.length_mm * crystal.length_mm * kPi / std::abs(alpha);
  const double coverage = mass / analytic;
  if (coverage < kRequiredCoverage) {
    // tail mass scales as 1/span, so the span that would reach the
    // required coverage is span * (1-coverage)/(1-required)
    const double span_needed = grid.span_rad_per_fs * (1.0 - coverage) /
                               (1.0 - kRequiredCoverage);
    std::ostringstream msg;
    msg << "spectral grid covers only " << coverage * 100.0
        << "% of the |Phi~|^2 mass (need >= 99.9%); widen the span to about "
        << span_needed << " rad/fs";
    throw std::invalid_argument(msg.str());
  }

  return SpectralAmplitude(step, std::move(values));
}

TemporalAmplitude to_temporal(const SpectralAmplitude& spec) {
  const int n = spec.size();
  const double domega = spec.grid_step();
  const double dt = kTwoPi / (n * domega);
  auto values = detail::time_from_spectrum(spec.values(), domega);
  return TemporalAmplitude(dt, std::move(values));
}

SpectralAmplitude to_spectral(const TemporalAmplitude& temporal) {
  const int n = temporal.size();
  const double dt = temporal.grid_step();
  const double domega = kTwoPi / (n * dt);
  auto values = detail::spectrum_from_time(temporal.values(), dt);
  return SpectralAmplitude(domega, std::move(values));
}

}  // namespace homsim
