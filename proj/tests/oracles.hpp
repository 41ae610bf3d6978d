#pragma once

// Test-side oracles, deliberately independent of the library's numeric
// paths: a direct O(N^2) centered transform, a linear-interpolation
// time-domain overlap quadrature, chi-squared tail probabilities, and a
// tiny least-squares regression.

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "homsim/biphoton.hpp"

namespace oracles {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// phi_k = (domega/sqrt(2pi)) * sum_j S_j exp(+i w_j t_k), evaluated term by
// term, so any FFT bookkeeping bug in the library cannot hide here
inline std::vector<std::complex<double>> slow_time_from_spectrum(
    const std::vector<std::complex<double>>& spectrum, double domega) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(spectrum.size());
  const std::ptrdiff_t h = (n - 1) / 2;
  const double dt = kTwoPi / (n * domega);
  std::vector<std::complex<double>> out(n);
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    std::complex<double> acc{0.0, 0.0};
    const double t = (k - h) * dt;
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      const double w = (j - h) * domega;
      acc += spectrum[j] * std::polar(1.0, w * t);
    }
    out[k] = acc * (domega / std::sqrt(kTwoPi));
  }
  return out;
}

// linear interpolation of a sampled amplitude, zero outside the grid
inline std::complex<double> interp(const homsim::TemporalAmplitude& phi,
                                   double t) {
  const double pos = (t - phi.t_min()) / phi.grid_step();
  if (pos < 0.0 || pos > phi.size() - 1) return {0.0, 0.0};
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= static_cast<std::size_t>(phi.size())) return phi.values().back();
  const double f = pos - static_cast<double>(i);
  return (1.0 - f) * phi.values()[i] + f * phi.values()[i + 1];
}

// rectangle rule for integral |phi(t-tau) + r*phi(-t-tau)|^2 dt with
// interpolated shifts; the independently-coded route for Eq.-style checks
inline double interp_overlap_quadrature(const homsim::TemporalAmplitude& phi,
                                        double tau, int r) {
  double sum = 0.0;
  for (int k = 0; k < phi.size(); ++k) {
    const double t = phi.time(k);
    const std::complex<double> a = interp(phi, t - tau);
    const std::complex<double> b = interp(phi, -t - tau);
    sum += std::norm(a + static_cast<double>(r) * b);
  }
  return sum * phi.grid_step();
}

// regularized incomplete gamma functions (series + Lentz continued
// fraction), accurate to ~1e-12 for the moderate arguments used here
inline double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 500; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double f = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-15) break;
  }
  return f * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q domain");
  if (x == 0.0) return 1.0;
  return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

// upper-tail p-value of a chi-squared statistic
inline double chi2_pvalue(double chi2, int dof) {
  return gamma_q(0.5 * dof, 0.5 * chi2);
}

struct Regression {
  double slope = 0.0;
  double slope_err = 0.0;
};

inline Regression linear_regression(const std::vector<double>& x,
                                    const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 3 || y.size() != n) throw std::invalid_argument("regression input");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double resid = y[i] - my - slope * (x[i] - mx);
    ss += resid * resid;
  }
  const double sigma2 = ss / (n - 2);
  return Regression{slope, std::sqrt(sigma2 / sxx)};
}

}  // namespace oracles
