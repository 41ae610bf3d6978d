#include "homsim/interference.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "dft.hpp"
#include "homsim/constants.hpp"

namespace homsim {

namespace {

constexpr double kSumTolerance = 1e-9;
constexpr double kClampSlack = 1e-12;
constexpr double kMaxLostMass = 1e-3;  // 0.1% of the wavepacket

// Distinguishable-limit values used in the visibility blend.
constexpr double kFarSame = 1.0 / 16.0;
constexpr double kFarCross = 1.0 / 8.0;

double clamp_probability(double p) {
  if (p < 0.0) {
    if (p >= -kClampSlack) return 0.0;
    throw std::logic_error("quadrature produced a negative probability");
  }
  if (p > 0.25) {
    if (p <= 0.25 + kClampSlack) return 0.25;
    throw std::logic_error("quadrature produced a probability above 1/4");
  }
  return p;
}

double unit_triangle(double u) {
  const double a = std::abs(u);
  return a >= 1.0 ? 0.0 : 1.0 - a;
}

}  // namespace

void InterferencePoint::validate() const {
  if (!std::isfinite(tau_fs))
    throw std::invalid_argument("delay must be finite");
  for (double p : {p20, p02, p11})
    if (!(p >= 0.0) || p > 0.25 + kClampSlack)
      throw std::invalid_argument("probability outside [0, 1/4]");
  if (p20 != p02)
    throw std::invalid_argument("p20 and p02 must be equal");
  if (std::abs(p20 + p02 + p11 - 0.25) > kSumTolerance)
    throw std::invalid_argument("p20 + p02 + p11 must equal 1/4");
}

namespace detail {

OverlapEngine::OverlapEngine(const TemporalAmplitude& phi) {
  const int n = phi.size();
  dt_ = phi.grid_step();
  t_max_ = phi.t_max();
  domega_ = kTwoPi / (n * dt_);
  half_ = (n - 1) / 2;
  spectrum_ = detail::spectrum_from_time(phi.values(), dt_);

  tail_mass_.assign(n + 1, 0.0);
  for (int k = n - 1; k >= 0; --k)
    tail_mass_[k] = tail_mass_[k + 1] + std::norm(phi.values()[k]) * dt_;
}

OverlapEngine::OverlapEngine(const SpectralAmplitude& spec)
    : OverlapEngine(to_temporal(spec)) {}

// Mass of |phi|^2 at grid times strictly above x (left tails use the
// complement against the total).
void OverlapEngine::check_shift(double tau_fs) const {
  const int n = static_cast<int>(tail_mass_.size()) - 1;
  const double total = tail_mass_[0];
  const double t_min = -t_max_;

  auto mass_above = [&](double x) {
    if (x >= t_max_) return 0.0;
    if (x < t_min) return total;
    const int k = static_cast<int>(std::floor((x - t_min) / dt_)) + 1;
    return tail_mass_[std::clamp(k, 0, n)];
  };
  auto mass_below = [&](double x) {
    if (x <= t_min) return 0.0;
    if (x > t_max_) return total;
    const int k = static_cast<int>(std::ceil((x - t_min) / dt_));
    return total - tail_mass_[std::clamp(k, 0, n)];
  };

  // Phi(t - tau) uses Phi on [t_min - tau, t_max - tau]; Phi(-t - tau)
  // uses it on [-t_max - tau, t_max - tau]. Whatever falls outside wraps
  // around the periodic grid and must stay negligible.
  const double direct =
      mass_above(t_max_ - tau_fs) + mass_below(t_min - tau_fs);
  const double mirrored =
      mass_above(t_max_ - tau_fs) + mass_below(-t_max_ - tau_fs);
  const double lost = std::max(direct, mirrored);
  if (lost <= kMaxLostMass * total) return;

  // smallest symmetric window holding all but 0.05% of the mass per side
  double d = 0.0;
  for (int k = 0; k < n; ++k) {
    if (tail_mass_[k] <= 5e-4 * total) {
      d = std::abs(t_min + (k - 1) * dt_);
      break;
    }
  }
  std::ostringstream msg;
  msg << "delay " << tau_fs << " fs shifts " << 100.0 * lost / total
      << "% of the wavepacket mass off the time grid (limit 0.1%); "
      << "rebuild with a grid spanning at least +-"
      << d + std::abs(tau_fs) << " fs (current +-" << t_max_ << " fs)";
  throw std::invalid_argument(msg.str());
}

// Rectangle-rule value of sum_j |S_j e^{-i w_j tau} + r * S_{N-1-j} e^{+i w_j tau}|^2 dw.
// By discrete Parseval this equals the time-domain rectangle rule over
// the spectrally shifted samples of |Phi(t-tau) + r*Phi(-t-tau)|^2.
double OverlapEngine::quadrature(double tau_fs, int relative_sign) const {
  const int n = static_cast<int>(spectrum_.size());
  const double r = static_cast<double>(relative_sign);
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const double omega = (j - half_) * domega_;
    const std::complex<double> ph = std::polar(1.0, -omega * tau_fs);
    const std::complex<double> a = spectrum_[j] * ph;
    const std::complex<double> b = spectrum_[n - 1 - j] * std::conj(ph);
    sum += std::norm(a + r * b);
  }
  return sum * domega_;
}

double OverlapEngine::same_port(double tau_fs, ExchangeSign sign) const {
  check_shift(tau_fs);
  return clamp_probability(quadrature(tau_fs, sign_of(sign)) / 32.0);
}

double OverlapEngine::cross_port(double tau_fs, ExchangeSign sign) const {
  check_shift(tau_fs);
  return clamp_probability(quadrature(tau_fs, -sign_of(sign)) / 16.0);
}

}  // namespace detail

double same_port_probability(const TemporalAmplitude& phi, Delay delay,
                             ExchangeSign sign) {
  return detail::OverlapEngine(phi).same_port(delay.fs, sign);
}

double cross_port_probability(const TemporalAmplitude& phi, Delay delay,
                              ExchangeSign sign) {
  return detail::OverlapEngine(phi).cross_port(delay.fs, sign);
}

namespace {

InterferencePoint blended_point(const detail::OverlapEngine& engine,
                                double tau_centered_fs, double dip_center_fs,
                                ExchangeSign sign, double visibility) {
  const double raw = tau_centered_fs + dip_center_fs;
  const double same = engine.same_port(raw, sign);
  const double cross = engine.cross_port(raw, sign);
  InterferencePoint pt;
  pt.tau_fs = tau_centered_fs;
  pt.p20 = kFarSame + visibility * (same - kFarSame);
  pt.p02 = pt.p20;
  pt.p11 = kFarCross + visibility * (cross - kFarCross);
  pt.validate();
  return pt;
}

void validate_sweep_args(std::span<const double> taus, double visibility) {
  if (taus.empty()) throw std::invalid_argument("tau list must be nonempty");
  for (std::size_t i = 0; i + 1 < taus.size(); ++i)
    if (!(taus[i] < taus[i + 1]))
      throw std::invalid_argument("tau list must be strictly increasing");
  if (!(visibility >= 0.0 && visibility <= 1.0))
    throw std::invalid_argument("visibility must lie in [0, 1]");
}

}  // namespace

InterferenceCurve sweep(const CrystalConfig& crystal,
                        std::span<const double> taus_fs, ExchangeSign sign,
                        double visibility, const GridSpec& grid) {
  crystal.validate();
  validate_sweep_args(taus_fs, visibility);

  const auto state = sinc_state_function(crystal, grid);
  const detail::OverlapEngine engine(state);
  const double tau0 = crystal.dip_center_fs();

  InterferenceCurve curve;
  curve.meta = CurveMetadata{crystal, grid, sign, visibility, tau0};
  curve.points.reserve(taus_fs.size());
  for (double tau : taus_fs)
    curve.points.push_back(blended_point(engine, tau, tau0, sign, visibility));
  return curve;
}

InterferenceCurve sweep(const CrystalConfig& crystal,
                        std::span<const double> taus_fs, ExchangeSign sign,
                        double visibility) {
  return sweep(crystal, taus_fs, sign, visibility,
               GridSpec::default_for(crystal));
}

InterferencePoint interference_point(const CrystalConfig& crystal,
                                     double tau_fs, ExchangeSign sign,
                                     double visibility, const GridSpec& grid) {
  crystal.validate();
  if (!(visibility >= 0.0 && visibility <= 1.0))
    throw std::invalid_argument("visibility must lie in [0, 1]");
  const auto state = sinc_state_function(crystal, grid);
  const detail::OverlapEngine engine(state);
  return blended_point(engine, tau_fs, crystal.dip_center_fs(), sign,
                       visibility);
}

InterferencePoint triangle_oracle(const CrystalConfig& crystal, Delay delay,
                                  ExchangeSign sign) {
  crystal.validate();
  const double half_width = 0.5 * std::abs(crystal.rect_width_fs());
  const double tri = unit_triangle(delay.fs / half_width);
  InterferencePoint pt;
  pt.tau_fs = delay.fs;
  if (sign == ExchangeSign::boson) {
    pt.p20 = (1.0 + tri) / 16.0;
    pt.p11 = (1.0 - tri) / 8.0;
  } else {
    pt.p20 = (1.0 - tri) / 16.0;
    pt.p11 = (1.0 + tri) / 8.0;
  }
  pt.p02 = pt.p20;
  pt.validate();
  return pt;
}

}  // namespace homsim
