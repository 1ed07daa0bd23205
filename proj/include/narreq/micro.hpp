#pragma once

#include <cstdint>

#include "narreq/society.hpp"

namespace narreq {

// A population of unit-utility individuals with uniformly distributed
// participation costs on [0, cap]; the cap may differ across policies.
struct GroupPopulation {
  Rat mass;
  Rat cap_high;
  Rat cap_low;
};

// The mobilization-potential abstraction this microfounds: f = mass / cap.
Rat implied_potential(const GroupPopulation& pop, Policy a);

struct MobilizationResult {
  Rat analytic;      // mass * min(p / cap, 1)
  double empirical;  // mass * mobilized fraction
  double std_err;    // mass * sqrt(phat * (1 - phat) / draws)
  std::uint64_t mobilized = 0;
  std::uint64_t draws = 0;
  bool clamped = false;  // p >= cap: every cost lies below the belief
};

// Draw costs, mobilize an individual iff the outcome belief strictly exceeds
// its cost, and report empirical against analytic mass.
MobilizationResult simulate_mobilization(const GroupPopulation& pop, Policy a, const Rat& p,
                                         std::uint64_t draws, std::uint64_t seed);

}  // namespace narreq
