#pragma once

#include <span>
#include <vector>

#include "homsim/biphoton.hpp"

namespace homsim {

/// Relative delay between the orthogonally polarized photons, in fs.
struct Delay {
  double fs = 0.0;
};

/// Exchange statistics of the interfering pair.
enum class ExchangeSign : int { boson = +1, fermion = -1 };

inline int sign_of(ExchangeSign s) { return static_cast<int>(s); }

/// One point of the coincidence curves: P(2,0) and P(0,2) are the
/// same-port pair probabilities at detectors A and B, P(1,1) the
/// cross-port probability. They always satisfy p20 == p02 and
/// p20 + p02 + p11 == 1/4.
struct InterferencePoint {
  double tau_fs = 0.0;
  double p20 = 0.0;
  double p02 = 0.0;
  double p11 = 0.0;

  void validate() const;
};

struct CurveMetadata {
  CrystalConfig crystal;
  GridSpec grid;
  ExchangeSign sign = ExchangeSign::boson;
  double visibility = 1.0;
  /// Raw compensator delay of the dip/peak extremum (L*D/2). Public tau
  /// values are re-centered so the extremum sits at tau = 0.
  double dip_center_raw_fs = 0.0;
};

struct InterferenceCurve {
  std::vector<InterferencePoint> points;
  CurveMetadata meta;
};

/// Same-port pair probability (Eq.-level quadrature):
///   (1/32) * integral |Phi(t - tau) + s * Phi(-t - tau)|^2 dt
/// with s = +1 for bosons, -1 for fermions. tau is the raw physical delay.
/// The shift is applied as a spectral phase ramp (exact for the grid's
/// bandlimited representative); the integral is the rectangle rule on the
/// grid, evaluated in the frequency domain via discrete Parseval.
/// Throws if the shift wraps more than 0.1% of the wavepacket mass around
/// the grid (the message names the required grid extension).
double same_port_probability(const TemporalAmplitude& phi, Delay delay,
                             ExchangeSign sign);

/// Cross-port probability:
///   (1/16) * integral |Phi(t - tau) - s * Phi(-t - tau)|^2 dt.
double cross_port_probability(const TemporalAmplitude& phi, Delay delay,
                              ExchangeSign sign);

/// Full curve over re-centered delays (tau = 0 at the extremum). Builds the
/// state once and evaluates both probabilities per point. The visibility
/// factor v blends each probability with its distinguishable-limit value,
///   p = p_far + v * (p_ideal - p_far),
/// which preserves the p20+p02+p11 = 1/4 sum exactly for every v.
InterferenceCurve sweep(const CrystalConfig& crystal,
                        std::span<const double> taus_fs, ExchangeSign sign,
                        double visibility);
InterferenceCurve sweep(const CrystalConfig& crystal,
                        std::span<const double> taus_fs, ExchangeSign sign,
                        double visibility, const GridSpec& grid);

/// Closed form for the sinc state under the linear mismatch: a triangular
/// dip/peak of base width W = |L*D| centered at tau = 0 (re-centered
/// convention). For bosons p11 = (1/8)(1 - tri), p20 = p02 = (1/16)(1 + tri);
/// the fermionic case swaps enhancement and suppression.
InterferencePoint triangle_oracle(const CrystalConfig& crystal, Delay delay,
                                  ExchangeSign sign);

/// Single curve point at a re-centered delay with the visibility blend
/// applied; the building block shared by sweep() and the event generator.
InterferencePoint interference_point(const CrystalConfig& crystal, double tau_fs,
                                     ExchangeSign sign, double visibility,
                                     const GridSpec& grid);

namespace detail {

/// Frequency-domain overlap engine for a fixed temporal amplitude.
/// Thread-safe for concurrent const use once constructed.
class OverlapEngine {
 public:
  explicit OverlapEngine(const TemporalAmplitude& phi);
  explicit OverlapEngine(const SpectralAmplitude& spec);

  double same_port(double tau_fs, ExchangeSign sign) const;
  double cross_port(double tau_fs, ExchangeSign sign) const;

 private:
  double quadrature(double tau_fs, int relative_sign) const;
  void check_shift(double tau_fs) const;

  std::vector<std::complex<double>> spectrum_;
  double domega_ = 0.0;
  int half_ = 0;
  // time-side mass profile for the off-grid shift check
  double dt_ = 0.0;
  double t_max_ = 0.0;
  std::vector<double> tail_mass_;  // tail_mass_[k] = sum_{j >= k} |phi_j|^2 dt
};

}  // namespace detail

}  // namespace homsim
