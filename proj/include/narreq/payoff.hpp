#pragma once

#include <optional>
#include <vector>

#include "narreq/belief.hpp"

namespace narreq {

struct PayoffReport {
  std::vector<std::optional<Rat>> payoff;  // per platform; nullopt when the belief is undefined
  Rat max_payoff;
  std::vector<int> argmax;  // canonical order; the first element wins deterministic ties
};

// Equilibrium payoff level: q times the aggregate high potential of the
// optimal high coalition.
Rat u_star(const Society& soc);

// Support one coalition member lends the platform: belief times the member's
// potential. The member must belong to the coalition and back the policy.
std::optional<Rat> group_support(const PlatformTable& table, const PlatformDistribution& sigma,
                                 const Platform& z, int group);

std::optional<Rat> platform_payoff(const PlatformTable& table, const PlatformDistribution& sigma,
                                   const Platform& z);

PayoffReport payoff_report(const PlatformTable& table, const PlatformDistribution& sigma);
PayoffReport payoff_report(const HistoryCounters& counters);

// Argmax platforms in canonical order.
std::vector<int> dominant_set(const PlatformTable& table, const PlatformDistribution& sigma);

}  // namespace narreq
