#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "homsim/rng.hpp"

namespace homsim {

/// Phenomenological transition-edge sensor: binomial quantum efficiency,
/// Gaussian energy resolution, and a thermal relaxation window inside
/// which absorptions pile up into one summed-energy readout.
struct DetectorModel {
  double eta = 0.2;                ///< quantum efficiency in [0, 1]
  double photon_energy_ev = 0.0;   ///< energy of one signal photon
  double energy_fwhm_ev = 0.25;    ///< Gaussian smearing, FWHM
  double relax_window_us = 15.0;   ///< pileup/integration window
  char id = 'A';                   ///< detector label, 'A' or 'B'

  void validate() const;
  std::int64_t relax_window_ns() const {
    return static_cast<std::int64_t>(relax_window_us * 1000.0);
  }
};

/// A photon bundle absorbed at one detector at one timestamp.
struct Arrival {
  std::int64_t t_ns = 0;
  int photons = 0;
};

/// One time-stamped detector readout.
struct EventRecord {
  std::int64_t t_ns = 0;
  char det = 'A';
  double energy_ev = 0.0;
  int n_inferred = 0;
};

/// Binomial thinning: each of n_incident photons survives with
/// probability eta. Deterministic under a fixed stream.
int thin(int n_incident, double eta, RandomStream& rng);

/// Total deposited energy for n absorbed photons: n * E plus Gaussian
/// noise of sigma = FWHM / 2.3548, clamped at zero.
double measure_energy(int n_absorbed, const DetectorModel& model,
                      RandomStream& rng);

/// Photon number inferred from a measured energy: the nearest nonnegative
/// integer multiple of the photon energy, half-integer ties rounding up.
int infer_count(double energy_ev, const DetectorModel& model);

/// Coalesces consecutive arrivals whose gap is below the relaxation
/// window into one group carrying the summed photon number and the first
/// arrival's timestamp. Input must be time-ordered; photon totals are
/// conserved.
std::vector<Arrival> pileup_merge(std::span<const Arrival> arrivals,
                                  const DetectorModel& model);

}  // namespace homsim
