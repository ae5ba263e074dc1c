#include "lanefree/demand.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lanefree {

VehicleSpec sample_vehicle(const VehiclePopulation& pop, Rng& rng) {
  VehicleSpec v;
  if (rng.bernoulli(pop.narrow_rate)) {
    v.width = pop.narrow_width;
    v.length = pop.narrow_length;
  } else {
    v.width = rng.truncated_normal(pop.width_mean, pop.width_sd, pop.width_min, pop.width_max);
    v.length = rng.truncated_normal(pop.length_mean, pop.length_sd, pop.length_min, pop.length_max);
  }
  v.effective_width = v.width + pop.lateral_gap;
  v.v_f = pop.v_f;
  v.a_lon_max = pop.a_lon_max;
  v.a_lat_max = pop.a_lat_max;
  return v;
}

double DemandSpec::approach_rate(Approach a) const {
  const double axis_demand = nominal_vph / 2.0;
  const bool major = (a == Approach::south || a == Approach::west);
  return axis_demand * (major ? beta : 1.0 - beta);
}

void DemandSpec::validate() const {
  const double sum = turn_ratios.left + turn_ratios.straight + turn_ratios.right;
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("turn ratios must sum to 1");
  if (turn_ratios.left < 0 || turn_ratios.straight < 0 || turn_ratios.right < 0)
    throw std::invalid_argument("turn ratios must be non-negative");
  if (nominal_vph < 0) throw std::invalid_argument("nominal demand must be >= 0");
  if (beta < 0.5 || beta > 1.0) throw std::invalid_argument("beta must be in [0.5, 1]");
}

std::vector<Arrival> generate_arrivals(const DemandSpec& demand,
                                       const VehiclePopulation& pop, double duration) {
  demand.validate();
  if (!(duration > 0.0)) throw std::invalid_argument("duration must be > 0");

  std::vector<Arrival> all;
  for (int ai = 0; ai < 4; ++ai) {
    const auto approach = static_cast<Approach>(ai);
    const double rate_per_s = demand.approach_rate(approach) / 3600.0;
    if (rate_per_s <= 0.0) continue;
    Rng rng(Rng::derive(demand.seed, static_cast<std::uint64_t>(ai)));
    double t = 0.0;
    while (true) {
      t += rng.exponential(rate_per_s);
      if (t >= duration) break;
      Arrival a;
      a.time = t;
      a.approach = approach;
      const double u = rng.uniform();
      Turn turn = u < demand.turn_ratios.left ? Turn::left
                  : u < demand.turn_ratios.left + demand.turn_ratios.straight ? Turn::straight
                                                                              : Turn::right;
      a.destination = destination_of(approach, turn);
      a.vehicle = sample_vehicle(pop, rng);
      all.push_back(a);
    }
  }
  std::stable_sort(all.begin(), all.end(), [](const Arrival& a, const Arrival& b) {
    if (a.time != b.time) return a.time < b.time;
    return static_cast<int>(a.approach) < static_cast<int>(b.approach);
  });
  return all;
}

void write_arrivals_csv(std::ostream& out, const std::vector<Arrival>& arrivals) {
  out << "time,approach,destination,width,length\n";
  out.precision(17);
  for (const Arrival& a : arrivals) {
    out << a.time << ',' << to_string(a.approach) << ',' << to_string(a.destination) << ','
        << a.vehicle.width << ',' << a.vehicle.length << '\n';
  }
}

std::vector<Arrival> read_arrivals_csv(std::istream& in, const VehiclePopulation& pop) {
  std::vector<Arrival> arrivals;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty arrivals file");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string time_s, approach_s, dest_s, width_s, length_s;
    if (!std::getline(ss, time_s, ',') || !std::getline(ss, approach_s, ',') ||
        !std::getline(ss, dest_s, ',') || !std::getline(ss, width_s, ',') ||
        !std::getline(ss, length_s))
      throw std::runtime_error("arrivals line " + std::to_string(line_no) + ": expected 5 fields");
    Arrival a;
    a.time = std::stod(time_s);
    auto ap = approach_from_string(approach_s);
    auto de = approach_from_string(dest_s);
    if (!ap || !de || !turn_between(*ap, *de))
      throw std::runtime_error("arrivals line " + std::to_string(line_no) + ": bad movement");
    a.approach = *ap;
    a.destination = *de;
    a.vehicle.width = std::stod(width_s);
    a.vehicle.length = std::stod(length_s);
    a.vehicle.effective_width = a.vehicle.width + pop.lateral_gap;
    a.vehicle.v_f = pop.v_f;
    a.vehicle.a_lon_max = pop.a_lon_max;
    a.vehicle.a_lat_max = pop.a_lat_max;
    arrivals.push_back(a);
  }
  if (!std::is_sorted(arrivals.begin(), arrivals.end(),
                      [](const Arrival& a, const Arrival& b) { return a.time < b.time; }))
    throw std::runtime_error("arrivals file must be sorted by time");
  return arrivals;
}

}  // namespace lanefree
