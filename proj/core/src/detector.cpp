#include "homsim/detector.hpp"

#include <cmath>
#include <stdexcept>

#include "homsim/constants.hpp"

namespace homsim {

void DetectorModel::validate() const {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::invalid_argument("quantum efficiency must lie in [0, 1]");
  if (!(photon_energy_ev > 0.0))
    throw std::invalid_argument("photon energy must be positive");
  if (!(energy_fwhm_ev >= 0.0))
    throw std::invalid_argument("energy FWHM must be nonnegative");
  if (!(relax_window_us > 0.0))
    throw std::invalid_argument("relaxation window must be positive");
  if (id != 'A' && id != 'B')
    throw std::invalid_argument("detector id must be 'A' or 'B'");
}

int thin(int n_incident, double eta, RandomStream& rng) {
  if (n_incident < 0)
    throw std::invalid_argument("incident photon count must be nonnegative");
  return rng.binomial(n_incident, eta);
}

double measure_energy(int n_absorbed, const DetectorModel& model,
                      RandomStream& rng) {
  if (n_absorbed < 0)
    throw std::invalid_argument("absorbed photon count must be nonnegative");
  double energy = n_absorbed * model.photon_energy_ev;
  if (model.energy_fwhm_ev > 0.0) {
    const double sigma = model.energy_fwhm_ev / kFwhmPerSigma;
    energy += sigma * rng.gaussian();
  }
  return energy < 0.0 ? 0.0 : energy;
}

int infer_count(double energy_ev, const DetectorModel& model) {
  if (energy_ev < 0.0)
    throw std::invalid_argument("measured energy must be nonnegative");
  // nearest integer with half-integer ties rounding up
  return static_cast<int>(std::floor(energy_ev / model.photon_energy_ev + 0.5));
}

std::vector<Arrival> pileup_merge(std::span<const Arrival> arrivals,
                                  const DetectorModel& model) {
  const std::int64_t window = model.relax_window_ns();
  std::vector<Arrival> groups;
  std::int64_t last_t = 0;
  bool open = false;
  for (const Arrival& a : arrivals) {
    if (open && a.t_ns < last_t)
      throw std::invalid_argument("arrivals must be time-ordered");
    if (open && a.t_ns - last_t < window) {
      groups.back().photons += a.photons;
    } else {
      groups.push_back(Arrival{a.t_ns, a.photons});
      open = true;
    }
    last_t = a.t_ns;
  }
  return groups;
}

}  // namespace homsim
