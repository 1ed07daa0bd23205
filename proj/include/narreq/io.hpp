#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "narreq/certifier.hpp"
#include "narreq/dynamics.hpp"
#include "narreq/micro.hpp"

namespace narreq {

using Json = nlohmann::json;

struct LoadedConfig {
  Society soc;
  NarrativeDomain domain;
};

// Rationals arrive as "p/q" / decimal strings or exact JSON integers.
// Non-integral JSON floats are refused: they are binary approximations.
Rat rat_from_json(const Json& v, const std::string& what);

LoadedConfig load_config_json(const Json& j);
LoadedConfig load_config_file(const std::string& path);

Json platform_to_json(const Platform& z);
Platform platform_from_json(const Json& j, int n);

Json result_to_json(const EquilibriumResult& r);
Json report_to_json(const CertReport& rep);
Json limit_to_json(const LimitEstimate& est);
Json mobilization_to_json(const GroupPopulation& pop, Policy a, const Rat& p,
                          const MobilizationResult& r);
Json final_masses_json(const PlatformTable& table, const PlatformDistribution& initial,
                       const std::vector<std::uint64_t>& counts, std::uint64_t horizon);

// Accepts a bare platform/mass array or a solve output document (its
// "support" field). Masses must sum to one; platforms must be enumerable.
PlatformDistribution candidate_from_json(const PlatformTable& table, const Json& j);

void write_trace_csv(std::ostream& os, const Trace& trace);
Json trace_sidecar_json(const Trace& trace);

}  // namespace narreq
