#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "homsim/detector.hpp"
#include "homsim/interference.hpp"

namespace homsim {

/// Photon counts that reach detectors (A, B) for one pair, after the beam
/// splitter and the polarizers but before detector thinning.
enum class PairOutcome : int {
  two_zero = 0,   // both photons to A
  zero_two = 1,   // both photons to B
  one_one = 2,    // one to each
  one_zero = 3,   // one survives, to A
  zero_one = 4,   // one survives, to B
  zero_zero = 5,  // both absorbed by the polarizers
};

inline int photons_to_a(PairOutcome o) {
  constexpr std::array<int, 6> k{2, 0, 1, 1, 0, 0};
  return k[static_cast<int>(o)];
}
inline int photons_to_b(PairOutcome o) {
  constexpr std::array<int, 6> k{0, 2, 1, 0, 1, 0};
  return k[static_cast<int>(o)];
}

/// Per-pair probability table over the six outcomes. The interfering
/// two-survivor entries come from the curve point; the single-survivor and
/// vacuum channels are fixed at 1/4 each by the polarizer branching, so the
/// table sums to one and each detector sees a mean of 1/2 photon per pair
/// independent of delay.
struct OutcomeDistribution {
  std::array<double, 6> p{};

  static OutcomeDistribution from_point(const InterferencePoint& point);
  PairOutcome sample(RandomStream& rng) const;
  double total() const;
};

/// Complete description of one Monte Carlo acquisition run.
struct RunConfig {
  double pair_rate_per_s = 1000.0;  ///< Poisson pair rate at the beam splitter
  std::optional<double> duration_s;       ///< exactly one of duration /
  std::optional<std::uint64_t> pair_count;  ///< pair_count must be set
  double tau_fs = 0.0;         ///< re-centered delay (0 = dip/peak center)
  CrystalConfig crystal;
  ExchangeSign sign = ExchangeSign::boson;
  double visibility = 1.0;
  DetectorModel detector_a;
  DetectorModel detector_b;
  std::uint64_t seed = 0;

  void validate() const;
};

/// A generated (or deserialized) run: its configuration, the number of
/// pairs actually produced, and the time-ordered detector events.
struct EventStream {
  RunConfig config;
  std::uint64_t pairs_generated = 0;
  std::vector<EventRecord> events;
};

/// Runs the full pipeline: Poisson pair arrivals, outcome sampling at the
/// configured delay, binomial thinning, pileup merging, and energy
/// readout. Deterministic in every byte for a fixed config (including
/// seed); photons of a same-port pair share one timestamp and therefore
/// always merge into a single 2E readout.
EventStream generate(const RunConfig& config);

}  // namespace homsim
