#include "lanefree/saturation.hpp"

#include <cmath>
#include <stdexcept>

namespace lanefree {

namespace {
constexpr double kTol = 1e-9;
}

PackingSample pack_street(double street_width, const VehiclePopulation& pop, Rng& rng) {
  PackingSample sample;
  double used = 0.0;
  while (true) {
    // Width is the only dimension that matters here; draw it the same way
    // sample_vehicle does.
    double w;
    if (rng.bernoulli(pop.narrow_rate)) {
      w = pop.narrow_width;
    } else {
      w = rng.truncated_normal(pop.width_mean, pop.width_sd, pop.width_min, pop.width_max);
    }
    const double gap = sample.n_fit > 0 ? pop.lateral_gap : 0.0;
    if (used + gap + w > street_width + kTol) break;
    used += gap + w;
    sample.widths_used.push_back(w);
    ++sample.n_fit;
  }
  return sample;
}

LaneCountEstimate equivalent_lane_count(double street_width, const VehiclePopulation& pop,
                                        long samples, Rng& rng) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  if (street_width < 0.0) throw std::invalid_argument("street width must be >= 0");
  double sum = 0.0, sum_sq = 0.0;
  for (long i = 0; i < samples; ++i) {
    const double n = pack_street(street_width, pop, rng).n_fit;
    sum += n;
    sum_sq += n * n;
  }
  LaneCountEstimate e;
  e.mean = sum / samples;
  const double var = std::max(0.0, sum_sq / samples - e.mean * e.mean);
  e.stderr_ = std::sqrt(var / samples);
  return e;
}

double saturation_flow(double n_prime, double gross_headway_s) {
  if (!(gross_headway_s > 0.0)) throw std::invalid_argument("gross headway must be > 0");
  return 3600.0 * n_prime / gross_headway_s;
}

double lane_based_flow(double street_width, double lane_width, double gross_headway_s) {
  if (!(lane_width > 0.0)) throw std::invalid_argument("lane width must be > 0");
  const double lanes = std::floor(street_width / lane_width + kTol);
  return saturation_flow(lanes, gross_headway_s);
}

std::vector<SaturationPoint> saturation_sweep(const SaturationSweepConfig& cfg,
                                              const VehiclePopulation& base_pop) {
  std::vector<SaturationPoint> points;
  std::uint64_t salt = 0;
  for (double rate : cfg.narrow_rates) {
    VehiclePopulation pop = base_pop;
    pop.narrow_rate = rate;
    for (double w : cfg.widths) {
      Rng rng(Rng::derive(cfg.seed, salt++));
      const LaneCountEstimate e = equivalent_lane_count(w, pop, cfg.samples, rng);
      SaturationPoint p;
      p.width = w;
      p.narrow_rate = rate;
      p.n_prime = e.mean;
      p.flow_vph = saturation_flow(e.mean, cfg.gross_headway_s);
      p.stderr_vph = saturation_flow(e.stderr_, cfg.gross_headway_s);
      p.lane_based_vph = lane_based_flow(w, cfg.lane_width, cfg.gross_headway_s);
      points.push_back(p);
    }
  }
  return points;
}

}  // namespace lanefree
