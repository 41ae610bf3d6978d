#pragma once

#include <complex>
#include <vector>

namespace homsim::detail {

// Centered unitary DFT pair on symmetric grids with dt*domega = 2*pi/N
// (N odd, index h = (N-1)/2 is the origin sample):
//   time_from_spectrum:  phi_k = (domega/sqrt(2pi)) * sum_j S_j e^{+i w_j t_k}
//   spectrum_from_time:  S_j  = (dt/sqrt(2pi))     * sum_k phi_k e^{-i w_j t_k}
// Implemented with FFTW plus pre/post phase twiddles; exact inverses of
// each other up to rounding.
std::vector<std::complex<double>> time_from_spectrum(
    const std::vector<std::complex<double>>& spectrum, double domega);

std::vector<std::complex<double>> spectrum_from_time(
    const std::vector<std::complex<double>>& values, double dt);

}  // namespace homsim::detail
