#include "dft.hpp"

#include <fftw3.h>

#include <cmath>
#include <stdexcept>

#include "homsim/constants.hpp"

namespace homsim::detail {

namespace {

// e^{2*pi*i*m/N} with m reduced into [0, N)
std::complex<double> root_of_unity(long long m, long long n) {
  m %= n;
  if (m < 0) m += n;
  const double ang = kTwoPi * static_cast<double>(m) / static_cast<double>(n);
  return {std::cos(ang), std::sin(ang)};
}

std::vector<std::complex<double>> run_fftw(
    std::vector<std::complex<double>> in, int sign) {
  const int n = static_cast<int>(in.size());
  std::vector<std::complex<double>> out(in.size());
  fftw_plan plan = fftw_plan_dft_1d(
      n, reinterpret_cast<fftw_complex*>(in.data()),
      reinterpret_cast<fftw_complex*>(out.data()), sign, FFTW_ESTIMATE);
  if (!plan) throw std::runtime_error("fftw plan creation failed");
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  return out;
}

}  // namespace

std::vector<std::complex<double>> time_from_spectrum(
    const std::vector<std::complex<double>>& spectrum, double domega) {
  const long long n = static_cast<long long>(spectrum.size());
  const long long h = (n - 1) / 2;

  // phi_k = c * e^{2pi i h(h-k)/N} * IDFT[S_j e^{-2pi i jh/N}]_k
  std::vector<std::complex<double>> pre(spectrum.size());
  for (long long j = 0; j < n; ++j)
    pre[j] = spectrum[j] * root_of_unity(-j * h, n);

  auto y = run_fftw(std::move(pre), FFTW_BACKWARD);

  const double c = domega / std::sqrt(kTwoPi);
  for (long long k = 0; k < n; ++k) y[k] *= c * root_of_unity(h * (h - k), n);
  return y;
}

std::vector<std::complex<double>> spectrum_from_time(
    const std::vector<std::complex<double>>& values, double dt) {
  const long long n = static_cast<long long>(values.size());
  const long long h = (n - 1) / 2;

  // S_j = c * e^{2pi i (jh - h^2)/N} * DFT[phi_k e^{+2pi i hk/N}]_j
  std::vector<std::complex<double>> pre(values.size());
  for (long long k = 0; k < n; ++k)
    pre[k] = values[k] * root_of_unity(h * k, n);

  auto y = run_fftw(std::move(pre), FFTW_FORWARD);

  const double c = dt / std::sqrt(kTwoPi);
  for (long long j = 0; j < n; ++j) y[j] *= c * root_of_unity(j * h - h * h, n);
  return y;
}

}  // namespace homsim::detail
