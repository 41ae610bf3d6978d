#pragma once

#include <complex>
#include <vector>

namespace homsim {

/// Collinear type-II down-conversion crystal under the linearized
/// phase-mismatch model: Delta(omega) = D * omega, with D the
/// inverse-group-velocity difference between the ordinary and
/// extraordinary waves. Dispersion itself is out of scope; D is an input.
struct CrystalConfig {
  double length_mm = 0.5;          ///< crystal length L
  double dvg_fs_per_mm = 0.0;      ///< D, coefficient of the linear mismatch
  double pump_wavelength_nm = 351.1;  ///< monochromatic cw pump

  /// Throws std::invalid_argument on violated invariants
  /// (L > 0, D != 0, pump wavelength > 0).
  void validate() const;

  /// Width of the rectangular |Phi(t)|^2 support, L*D (signed, fs).
  double rect_width_fs() const { return length_mm * dvg_fs_per_mm; }

  /// Compensator delay of the interference extremum, L*D/2 (signed, fs).
  double dip_center_fs() const { return 0.5 * rect_width_fs(); }
};

/// Linearized wave-vector mismatch D*omega, in rad/mm.
double mismatch(const CrystalConfig& crystal, double omega_rad_per_fs);

/// Uniform detuning grid: `points` samples (odd, so omega = 0 is sampled)
/// spanning [-span/2, +span/2] in rad/fs.
struct GridSpec {
  double span_rad_per_fs = 0.0;
  int points = 0;

  void validate() const;
  double step() const { return span_rad_per_fs / (points - 1); }

  /// Default grid for a crystal: 8193 points over +-320 first-zero
  /// spacings of the sinc. Covers 99.97% of the spectral mass and keeps
  /// downstream probabilities converged to well below 1e-6.
  static GridSpec default_for(const CrystalConfig& crystal);
};

/// Biphoton spectral amplitude Phi~(omega) sampled on a uniform detuning
/// grid symmetric about zero (detuning about the degenerate frequency
/// omega_p/2). Normalized so that sum |Phi~|^2 * step == 1.
class SpectralAmplitude {
 public:
  /// Takes ownership of `values` on the (step, count) grid and normalizes.
  /// Count must be odd and >= 3; the total |values|^2 mass must be nonzero.
  SpectralAmplitude(double grid_step, std::vector<std::complex<double>> values);

  int size() const { return static_cast<int>(values_.size()); }
  double grid_step() const { return step_; }
  double omega(int i) const { return (i - half_) * step_; }
  const std::vector<std::complex<double>>& values() const { return values_; }

  /// Riemann sum of |Phi~|^2 * step (1 within 1e-9 by construction).
  double norm_sum() const;

 private:
  double step_;
  int half_;
  std::vector<std::complex<double>> values_;
};

/// Temporal amplitude Phi(t), the inverse Fourier transform of Phi~(omega),
/// on the conjugate uniform grid (dt * domega = 2*pi/N) symmetric about zero.
class TemporalAmplitude {
 public:
  TemporalAmplitude(double grid_step_fs, std::vector<std::complex<double>> values);

  int size() const { return static_cast<int>(values_.size()); }
  double grid_step() const { return step_; }
  double time(int i) const { return (i - half_) * step_; }
  double t_min() const { return time(0); }
  double t_max() const { return time(size() - 1); }
  const std::vector<std::complex<double>>& values() const { return values_; }

  double norm_sum() const;

 private:
  double step_;
  int half_;
  std::vector<std::complex<double>> values_;
};

/// Spectral amplitude of a single bulk crystal:
///   Phi~(omega) ∝ L * sinc((L/2) * D * omega) * exp(i * L * D * omega / 2),
/// normalized on the grid. Throws if the grid is degenerate or covers less
/// than 99.9% of the analytic spectral mass (the error reports the achieved
/// coverage and the span that would suffice).
SpectralAmplitude sinc_state_function(const CrystalConfig& crystal,
                                      const GridSpec& grid);

/// Unitary centered transforms between the conjugate grids; exact discrete
/// Parseval, round trip is the identity to machine precision.
TemporalAmplitude to_temporal(const SpectralAmplitude& spec);
SpectralAmplitude to_spectral(const TemporalAmplitude& temporal);

}  // namespace homsim
