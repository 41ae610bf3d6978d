#include "homsim/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace homsim {

namespace {

constexpr double kTableTolerance = 1e-12;

std::int64_t to_ns(double seconds) {
  return static_cast<std::int64_t>(std::llround(seconds * 1e9));
}

}  // namespace

OutcomeDistribution OutcomeDistribution::from_point(
    const InterferencePoint& point) {
  point.validate();
  OutcomeDistribution d;
  d.p[static_cast<int>(PairOutcome::two_zero)] = point.p20;
  d.p[static_cast<int>(PairOutcome::zero_two)] = point.p02;
  d.p[static_cast<int>(PairOutcome::one_one)] = point.p11;
  d.p[static_cast<int>(PairOutcome::one_zero)] = 0.25;
  d.p[static_cast<int>(PairOutcome::zero_one)] = 0.25;
  d.p[static_cast<int>(PairOutcome::zero_zero)] = 0.25;
  if (std::abs(d.total() - 1.0) > kTableTolerance)
    throw std::logic_error("outcome table does not sum to 1");
  return d;
}

double OutcomeDistribution::total() const {
  double s = 0.0;
  for (double v : p) s += v;
  return s;
}

PairOutcome OutcomeDistribution::sample(RandomStream& rng) const {
  const double u = rng.uniform();
  double acc = 0.0;
  for (int i = 0; i < 5; ++i) {
    acc += p[i];
    if (u < acc) return static_cast<PairOutcome>(i);
  }
  return PairOutcome::zero_zero;
}

void RunConfig::validate() const {
  if (!(pair_rate_per_s > 0.0))
    throw std::invalid_argument("pair rate must be positive");
  if (duration_s.has_value() == pair_count.has_value())
    throw std::invalid_argument(
        "exactly one of duration_s and pair_count must be set");
  if (duration_s && !(*duration_s > 0.0))
    throw std::invalid_argument("duration must be positive");
  if (!std::isfinite(tau_fs)) throw std::invalid_argument("tau must be finite");
  if (!(visibility >= 0.0 && visibility <= 1.0))
    throw std::invalid_argument("visibility must lie in [0, 1]");
  crystal.validate();
  detector_a.validate();
  detector_b.validate();
  if (detector_a.id == detector_b.id)
    throw std::invalid_argument("detectors must carry distinct ids");
}

EventStream generate(const RunConfig& config) {
  config.validate();

  const InterferencePoint point =
      interference_point(config.crystal, config.tau_fs, config.sign,
                         config.visibility, GridSpec::default_for(config.crystal));
  const OutcomeDistribution table = OutcomeDistribution::from_point(point);

  // stream 0 drives arrivals and outcome draws, streams 1/2 everything
  // detector-local, so the two detectors stay statistically independent
  RandomStream source = RandomStream::derive(config.seed, 0);
  RandomStream rng_a = RandomStream::derive(config.seed, 1);
  RandomStream rng_b = RandomStream::derive(config.seed, 2);

  const double mean_gap_s = 1.0 / config.pair_rate_per_s;
  std::vector<Arrival> arrivals_a;
  std::vector<Arrival> arrivals_b;

  double clock_s = 0.0;
  std::uint64_t pairs = 0;
  for (;;) {
    if (config.pair_count && pairs >= *config.pair_count) break;
    clock_s += source.exponential(mean_gap_s);
    if (config.duration_s && clock_s > *config.duration_s) break;
    ++pairs;

    const std::int64_t t = to_ns(clock_s);
    const PairOutcome outcome = table.sample(source);

    if (const int na = photons_to_a(outcome); na > 0) {
      const int kept = thin(na, config.detector_a.eta, rng_a);
      if (kept > 0) arrivals_a.push_back(Arrival{t, kept});
    }
    if (const int nb = photons_to_b(outcome); nb > 0) {
      const int kept = thin(nb, config.detector_b.eta, rng_b);
      if (kept > 0) arrivals_b.push_back(Arrival{t, kept});
    }
  }

  EventStream stream;
  stream.config = config;
  stream.pairs_generated = pairs;

  auto read_out = [&stream](const std::vector<Arrival>& arrivals,
                            const DetectorModel& model, RandomStream& rng) {
    for (const Arrival& g : pileup_merge(arrivals, model)) {
      const double energy = measure_energy(g.photons, model, rng);
      stream.events.push_back(
          EventRecord{g.t_ns, model.id, energy, infer_count(energy, model)});
    }
  };
  read_out(arrivals_a, config.detector_a, rng_a);
  read_out(arrivals_b, config.detector_b, rng_b);

  std::sort(stream.events.begin(), stream.events.end(),
            [](const EventRecord& x, const EventRecord& y) {
              return x.t_ns != y.t_ns ? x.t_ns < y.t_ns : x.det < y.det;
            });
  return stream;
}

}  // namespace homsim
