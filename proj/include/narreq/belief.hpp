#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "narreq/society.hpp"

namespace narreq {

struct Signature {
  Narrative narr;
  SigValue value;
};

Signature signature_of(const Narrative& narr, Policy a, GroupSet coalition);

// Probability mass over the platforms of one PlatformTable, aligned by index.
struct PlatformDistribution {
  std::vector<Rat> mass;

  std::vector<int> support() const;
  void validate_normalized() const;  // throws MalformedConfig
};

PlatformDistribution uniform_distribution(const PlatformTable& table);

// Belief that the outcome is good conditional on observing the target
// signature value, computed from scratch. A signature citing the policy
// cause with a low realization pins the belief to zero outright; otherwise
// a zero matching mass leaves the belief undefined (nullopt).
std::optional<Rat> conditional_outcome_probability(const PlatformTable& table,
                                                   const PlatformDistribution& sigma,
                                                   const Rat& q, const Signature& target);

// Running history of dominant platforms. Stores the initial distribution's
// per-cell mass plus integer dominant counts, so the represented distribution
// is sigma_t = (sigma_1 + sum of dominant point masses) / t. Per-cell reads
// normalize on the fly; one recorded period touches each narrative once.
class HistoryCounters {
 public:
  HistoryCounters() = default;

  static HistoryCounters init(const PlatformTable& table, const PlatformDistribution& initial);

  void record_dominant(int platform);

  std::uint64_t t() const { return t_; }
  const PlatformTable& table() const { return *table_; }

  Rat mass_high(int cell) const;
  Rat mass_total(int cell) const;
  Rat cell_belief(int cell) const;  // q * high / total; cells always carry mass
  Rat platform_belief(int platform) const;
  Rat platform_mass(int platform) const;
  std::uint64_t dominant_count(int platform) const { return dom_[platform]; }
  const std::vector<std::uint64_t>& dominant_counts() const { return dom_; }
  const PlatformDistribution& initial() const { return initial_; }

 private:
  const PlatformTable* table_ = nullptr;
  std::uint64_t t_ = 0;
  std::vector<Rat> base_hi_, base_tot_;
  std::vector<std::uint64_t> cnt_hi_, cnt_tot_;
  std::vector<std::uint64_t> dom_;
  PlatformDistribution initial_;
};

}  // namespace narreq
