#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <span>
#include <vector>

#include "homsim/acquisition.hpp"

namespace homsim {

/// Event-stream tallies: singles are n_inferred = 1 readouts, doubles are
/// n_inferred = 2 (the direct same-port pair signature), cross counts the
/// coincidence-windowed (A:1, B:1) matches.
struct CountsSummary {
  std::uint64_t n_pairs_assumed = 0;
  std::uint64_t singles_a = 0;
  std::uint64_t singles_b = 0;
  std::uint64_t doubles_a = 0;
  std::uint64_t doubles_b = 0;
  std::uint64_t cross = 0;
  std::int64_t window_ns = 0;
};

inline constexpr std::int64_t kDefaultWindowNs = 1000;

/// Single-pass greedy cross-coincidence matcher. Events must arrive in
/// time order; each n = 1 event is matched at most once, to the earliest
/// unmatched opposite-detector single within the window (|dt| <= window,
/// boundary inclusive). Feeding a stream in arbitrary time-contiguous
/// chunks yields the same tallies as one pass over the whole stream.
class Classifier {
 public:
  explicit Classifier(std::int64_t window_ns = kDefaultWindowNs);

  void feed(const EventRecord& event);
  CountsSummary finish(std::uint64_t n_pairs_assumed) const;

 private:
  std::int64_t window_ns_;
  std::int64_t last_t_;
  CountsSummary counts_;
  std::deque<std::int64_t> pending_a_;
  std::deque<std::int64_t> pending_b_;
};

CountsSummary classify(const EventStream& stream,
                       std::int64_t window_ns = kDefaultWindowNs);

/// Efficiency-corrected probability estimates with binomial standard
/// errors propagated through the eta division.
struct EstimatedPoint {
  double tau_fs = 0.0;
  double p20_hat = 0.0;
  double p02_hat = 0.0;
  double p11_hat = 0.0;
  double p20_err = 0.0;
  double p02_err = 0.0;
  double p11_err = 0.0;
  bool eta_corrected = false;
  bool degenerate = false;  ///< some count was zero; its stderr is zero too
};

EstimatedPoint estimate(const CountsSummary& summary, double eta_a,
                        double eta_b, double tau_fs);

struct EtaEstimate {
  double eta_a = 0.0;
  double eta_b = 0.0;
};

/// Absolute efficiency calibration from a distinguishable-delay run.
/// Inverts the heralding ratios r_a = cross/singles_b, r_b = cross/singles_a
/// of this apparatus (50/50 splitter + 45 deg polarizers), where a B single
/// heralds an A-bound partner only in the (1,1) channel:
///   r_a = eta_a / (4 - eta_b)  =>  eta_a = 4 r_a (1 - r_b) / (1 - r_a r_b)
/// and symmetrically for eta_b. Exact in the distinguishable limit.
EtaEstimate klyshko_eta(const CountsSummary& summary);

/// Pair-count normalization for streams lacking a trusted header, from the
/// same distinguishable-limit model (cross = N * eta_a * eta_b / 8).
/// Carries the calibration noise of klyshko_eta; flagged by the caller.
std::uint64_t pairs_from_klyshko(const CountsSummary& summary);

/// Triangle-model fit of an estimated curve: least squares over the p11 and
/// p20 series jointly, free (visibility, center, base width), inner
/// closed-form visibility and Nelder-Mead over (center, width).
struct TriangleFit {
  double visibility = 0.0;
  double tau_center_fs = 0.0;
  double width_fs = 0.0;  ///< fitted base width (L*D for the ideal curve)
  double residual_norm = 0.0;
  bool converged = false;
  bool width_identifiable = true;
  int iterations = 0;
};

TriangleFit fit_visibility(std::span<const EstimatedPoint> curve);

/// Curve CSV: "tau_fs,p20,p20_err,p02,p02_err,p11,p11_err".
void write_estimates_csv(std::span<const EstimatedPoint> points,
                         const std::filesystem::path& file);
std::vector<EstimatedPoint> read_estimates_csv(
    const std::filesystem::path& file);

/// Theory CSV: "tau_fs,p20,p02,p11".
void write_curve_csv(const InterferenceCurve& curve,
                     const std::filesystem::path& file);
std::vector<InterferencePoint> read_curve_csv(
    const std::filesystem::path& file);

}  // namespace homsim
