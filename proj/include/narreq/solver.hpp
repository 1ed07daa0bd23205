#pragma once

#include <string>
#include <utility>
#include <vector>

#include "narreq/belief.hpp"

namespace narreq {

// One scapegoat-narrative class in the linear equilibrium system. A low-policy
// platform using narrative set `s` runs with coalition `coalition`; its
// binding payoff condition reads alpha * excess / f_h_star = sum of masses on
// weak supersets of `s`. For n=2 the two classes are the denial narrative
// (coalition {2}) and the merged tribal class (coalition {1}).
struct ReducedEntry {
  GroupSet s = 0;
  GroupSet coalition = 0;
  Rat excess;  // F(low, coalition) - f_h_star; eligible for mass iff positive
};

struct ReducedProblem {
  std::vector<ReducedEntry> entries;  // superset-first: popcount descending, then mask
  Rat f_h_star;                       // F(high, optimal high coalition)
  Rat d;                              // F(low, N) - F(high, N)
  GroupSet h_coalition = 0;
  int n = 0;
  std::vector<GroupSet> merged_tribal_sets;  // n=2: family sets folded into the tribal class
};

ReducedProblem build_reduced_problem(const Society& soc, const NarrativeDomain& domain);

struct LayerDecomposition {
  std::vector<GroupSet> s_bar;                 // eligible sets, superset-first
  std::vector<std::vector<GroupSet>> layers;   // antichain peeling, maximal sets first
  std::vector<std::vector<GroupSet>> parents;  // per s_bar member: strict supersets within s_bar
};

LayerDecomposition layer_decomposition(const ReducedProblem& rp);

struct EquilibriumResult {
  Rat alpha;   // mass of the high-policy platform with the true narrative
  Rat u_star;  // common payoff of every supported platform
  Rat d;
  Platform h_platform;
  std::vector<GroupSet> sets;        // reduced sets, superset-first
  std::vector<GroupSet> coalitions;  // per set: the low coalition it runs with
  std::vector<Rat> sigma_bar;        // per set: equilibrium mass
  std::vector<Rat> weights;          // per set: sigma_bar / alpha
  std::vector<std::pair<Platform, Rat>> support;  // positive-mass platforms, canonical order
  LayerDecomposition decomposition;
  std::string method;
};

enum class SolveMethod { kAuto, kGeneral, kTwoGroup, kTaxonomy, kRich };

const char* solve_method_name(SolveMethod m);

// Build a full result from per-entry weights w = sigma_bar / alpha; shared by
// every solve path and the certifier's oracle so layouts stay comparable.
EquilibriumResult assemble_result(const Society& soc, const ReducedProblem& rp,
                                  std::vector<Rat> weights, const std::string& method);

EquilibriumResult solve_general(const Society& soc, const NarrativeDomain& domain);
EquilibriumResult solve_two_group(const Society& soc, const NarrativeDomain& domain);
EquilibriumResult solve_taxonomy_closed_form(const Society& soc, const NarrativeDomain& domain);
EquilibriumResult solve_rich_closed_form(const Society& soc, const NarrativeDomain& domain);
EquilibriumResult solve(const Society& soc, const NarrativeDomain& domain,
                        SolveMethod method = SolveMethod::kAuto);

bool same_equilibrium(const EquilibriumResult& a, const EquilibriumResult& b);

// Masses aggregated over narratives, i.e. the induced (policy, coalition) law.
std::vector<std::pair<std::pair<Policy, GroupSet>, Rat>> policy_coalition_marginal(
    const EquilibriumResult& r);

// Result as a mass vector over an enumerated table built from the same inputs.
PlatformDistribution distribution_from_result(const PlatformTable& table,
                                              const EquilibriumResult& r);

}  // namespace narreq
