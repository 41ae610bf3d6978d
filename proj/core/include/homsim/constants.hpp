#pragma once

namespace homsim {

// hc in eV*nm (2019 SI exact values of h, c, e).
inline constexpr double kPlanckCEvNm = 1239.841984332;

// FWHM -> sigma divisor for a Gaussian line shape.
inline constexpr double kFwhmPerSigma = 2.3548;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Photon energy in eV for a vacuum wavelength in nm.
inline constexpr double photon_energy_ev(double wavelength_nm) {
  return kPlanckCEvNm / wavelength_nm;
}

}  // namespace homsim
