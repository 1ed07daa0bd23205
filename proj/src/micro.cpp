#include "narreq/micro.hpp"

#include <cmath>
#include <random>

#include "narreq/error.hpp"

namespace narreq {

namespace {

const Rat& cap_of(const GroupPopulation& pop, Policy a) {
  return a == Policy::kHigh ? pop.cap_high : pop.cap_low;
}

void check_population(const GroupPopulation& pop) {
  if (!(pop.mass > 0) || !(pop.cap_high > 0) || !(pop.cap_low > 0))
    fail(Err::kMalformedConfig, "population mass and cost caps must be positive");
}

double unit_double(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

}  // namespace

Rat implied_potential(const GroupPopulation& pop, Policy a) {
  check_population(pop);
  Rat f = pop.mass / cap_of(pop, a);
  f.canonicalize();
  return f;
}

MobilizationResult simulate_mobilization(const GroupPopulation& pop, Policy a, const Rat& p,
                                         std::uint64_t draws, std::uint64_t seed) {
  check_population(pop);
  if (p < 0) fail(Err::kMalformedConfig, "belief must be nonnegative");
  if (draws < 1) fail(Err::kMalformedConfig, "need at least one draw");
  const Rat& cap = cap_of(pop, a);
  MobilizationResult r;
  r.draws = draws;
  r.clamped = p >= cap;
  Rat frac = r.clamped ? Rat(1) : p / cap;
  r.analytic = pop.mass * frac;
  r.analytic.canonicalize();

  double cap_d = rat_d(cap);
  double p_d = rat_d(p);
  double mass_d = rat_d(pop.mass);
  std::mt19937_64 rng(seed);
  for (std::uint64_t k = 0; k < draws; ++k) {
    double cost = cap_d * unit_double(rng);
    if (p_d > cost) ++r.mobilized;
  }
  double phat = static_cast<double>(r.mobilized) / static_cast<double>(draws);
  r.empirical = mass_d * phat;
  r.std_err = mass_d * std::sqrt(phat * (1.0 - phat) / static_cast<double>(draws));
  return r;
}

}  // namespace narreq
