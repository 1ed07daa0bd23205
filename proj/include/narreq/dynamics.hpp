#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "narreq/payoff.hpp"

namespace narreq {

enum class TieBreak { kCanonical, kRandom };
enum class SimMode { kAuto, kExact, kFast };

struct DynOptions {
  std::uint64_t horizon = 0;
  SimMode mode = SimMode::kAuto;  // auto: exact up to 10^4 periods, fast beyond
  TieBreak tie = TieBreak::kCanonical;
  std::uint64_t seed = 0;
  std::vector<int> track;  // platform ids whose payoffs go into the trace
  std::optional<PlatformDistribution> initial;  // default: uniform
};

// Full per-period dominant/payoff series plus downsampled emission rows
// (every period up to 10^4, then one row per 10, 100, ... periods).
struct Trace {
  const PlatformTable* table = nullptr;
  std::uint64_t horizon = 0;
  Rat u_star;
  double u_star_d = 0;
  std::vector<std::int32_t> dominant;  // dominant[t-1] = platform id in period t
  std::vector<double> max_payoff;
  std::vector<std::uint64_t> rows;
  std::vector<int> track_ids;
  std::vector<std::vector<double>> tracked;  // tracked[r][k]: payoff at rows[r]
};

struct DynResult {
  Trace trace;
  std::vector<std::uint64_t> dominant_counts;  // per platform over all periods
  PlatformDistribution initial;
  SimMode mode_used = SimMode::kExact;
};

// Exact-rational simulator of the dominant-platform process: in each period
// the payoff maximizer under the running empirical distribution is recorded
// into the history with weight 1/(t+1).
class ExactSimulator {
 public:
  ExactSimulator(const PlatformTable& table, const PlatformDistribution& initial, TieBreak tie,
                 std::uint64_t seed);

  struct Step {
    int dominant = -1;
    Rat max_payoff;
  };
  Step step();

  const HistoryCounters& counters() const { return counters_; }
  Rat payoff_of(int platform) const;  // under the current distribution

 private:
  TieBreak tie_;
  std::mt19937_64 rng_;
  HistoryCounters counters_;
};

// Double-precision twin for long horizons. Aggregates are base mass plus
// integer counts, so values stay exactly representable far beyond 10^6
// periods. Near-ties of the running maximum are re-resolved in exact
// arithmetic, so dominant choices and tie-break draws match the exact
// simulator step for step; only the reported payoffs are rounded.
class FastSimulator {
 public:
  FastSimulator(const PlatformTable& table, const PlatformDistribution& initial, TieBreak tie,
                std::uint64_t seed);

  struct Step {
    int dominant = -1;
    double max_payoff = 0;
  };
  Step step();

  double payoff_of(int platform) const { return payoff_[platform]; }
  std::uint64_t t() const { return t_; }
  const std::vector<std::uint64_t>& dominant_counts() const { return dom_; }

 private:
  void refresh(int cell);

  const PlatformTable* table_ = nullptr;
  TieBreak tie_;
  std::mt19937_64 rng_;
  std::uint64_t t_ = 1;
  std::vector<double> base_hi_, base_tot_;     // initial distribution, per cell
  std::vector<Rat> rbase_hi_, rbase_tot_;      // the same aggregates, exact
  std::vector<std::uint64_t> cnt_hi_, cnt_tot_;  // recorded dominants, per cell
  std::vector<double> payoff_;                 // per platform, kept current
  std::vector<std::vector<int>> cell_members_;  // platforms owning each cell
  std::vector<std::vector<int>> touch_;        // per platform: cells it updates (lazy)
  std::vector<int> cand_;                      // scratch: argmax shortlist per step
  std::vector<std::uint64_t> dom_;
};

DynResult run_dynamics(const PlatformTable& table, const DynOptions& options);

struct LimitEstimate {
  std::uint64_t tail_periods = 0;
  // exact empirical frequencies over (policy, coalition) in the tail window
  std::vector<std::pair<std::pair<Policy, GroupSet>, Rat>> marginal;
  double max_payoff_deviation = 0;   // max |payoff - u_star| over the tail
  std::vector<double> cycle_peaks;   // per low-policy burst: peak above u_star
  std::vector<double> cycle_ratios;  // successive peak ratios
  std::uint64_t longest_low_run_tail = 0;
  bool low_run_warning = false;  // tail low-run exceeded 10/alpha_hint
};

LimitEstimate limit_estimate(const Trace& trace, const Rat& tail_fraction,
                             const std::optional<Rat>& alpha_hint = std::nullopt);

}  // namespace narreq
