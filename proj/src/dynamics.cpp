#include "narreq/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "narreq/error.hpp"

namespace narreq {

namespace {

// Seeded uniform pick without std distributions, for cross-platform
// reproducibility: rejection sampling on the top of the 64-bit range.
std::size_t bounded_pick(std::mt19937_64& rng, std::size_t n) {
  if (n <= 1) return 0;
  std::uint64_t span = std::uint64_t(-1) - std::uint64_t(-1) % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= span);
  return static_cast<std::size_t>(x % n);
}

bool record_period(std::uint64_t t) {
  if (t <= 10000) return true;
  std::uint64_t step = 10;
  for (std::uint64_t bound = 100000; t > bound; bound *= 10) step *= 10;
  return t % step == 0;
}

// Relative width of the near-tie band around the running maximum. Double
// payoffs of exactly equal rationals agree to ~1e-15, well inside.
constexpr double kTieBand = 1e-12;

}  // namespace

ExactSimulator::ExactSimulator(const PlatformTable& table, const PlatformDistribution& initial,
                               TieBreak tie, std::uint64_t seed)
    : tie_(tie), rng_(seed), counters_(HistoryCounters::init(table, initial)) {}

Rat ExactSimulator::payoff_of(int platform) const {
  Rat u = counters_.platform_belief(platform) * counters_.table().potential[platform];
  u.canonicalize();
  return u;
}

ExactSimulator::Step ExactSimulator::step() {
  PayoffReport report = payoff_report(counters_);
  Step s;
  s.max_payoff = report.max_payoff;
  std::size_t pick = tie_ == TieBreak::kCanonical ? 0 : bounded_pick(rng_, report.argmax.size());
  s.dominant = report.argmax[pick];
  counters_.record_dominant(s.dominant);
  return s;
}

FastSimulator::FastSimulator(const PlatformTable& table, const PlatformDistribution& initial,
                             TieBreak tie, std::uint64_t seed)
    : table_(&table), tie_(tie), rng_(seed) {
  initial.validate_normalized();
  std::size_t cells = table.cells.size();
  base_hi_.assign(cells, 0.0);
  base_tot_.assign(cells, 0.0);
  rbase_hi_.assign(cells, Rat(0));
  rbase_tot_.assign(cells, Rat(0));
  cnt_hi_.assign(cells, 0);
  cnt_tot_.assign(cells, 0);
  for (std::size_t p = 0; p < table.platforms.size(); ++p) {
    if (initial.mass[p] == 0)
      fail(Err::kNotFullSupport,
           "dynamics needs full-support initial mass; " + platform_str(table.platforms[p]) +
               " has none");
    const Platform& z = table.platforms[p];
    double m = rat_d(initial.mass[p]);
    for (std::size_t nid = 0; nid < table.narratives.size(); ++nid) {
      SigValue v = signature_value(table.narratives[nid], z.a, z.coalition);
      int cell = table.cell_index(static_cast<int>(nid), v);
      base_tot_[cell] += m;
      rbase_tot_[cell] += initial.mass[p];
      if (z.a == Policy::kHigh) {
        base_hi_[cell] += m;
        rbase_hi_[cell] += initial.mass[p];
      }
    }
  }
  cell_members_.assign(cells, {});
  for (std::size_t p = 0; p < table.platforms.size(); ++p)
    cell_members_[table.own_cell[p]].push_back(static_cast<int>(p));
  touch_.assign(table.platforms.size(), {});
  payoff_.assign(table.platforms.size(), 0.0);
  for (std::size_t c = 0; c < cells; ++c) refresh(static_cast<int>(c));
  dom_.assign(table.platforms.size(), 0);
}

void FastSimulator::refresh(int cell) {
  const SigValue& v = table_->cells[cell].value;
  double hi = base_hi_[cell] + static_cast<double>(cnt_hi_[cell]);
  double tot = base_tot_[cell] + static_cast<double>(cnt_tot_[cell]);
  double belief =
      v.policy == static_cast<int>(Policy::kLow) ? 0.0 : rat_d(table_->soc.q) * hi / tot;
  for (int p : cell_members_[cell]) payoff_[p] = belief * table_->potential_d[p];
}

FastSimulator::Step FastSimulator::step() {
  Step s;
  const std::size_t count = payoff_.size();
  double best = -1.0;
  for (std::size_t p = 0; p < count; ++p)
    if (payoff_[p] > best) best = payoff_[p];
  s.max_payoff = best;
  // Platforms within a hair of the maximum go through an exact re-check:
  // double rounding must not reorder payoffs that coincide as rationals.
  // Genuinely distinct payoffs at period t differ on the order of 1/t,
  // far above the band, so the shortlist stays small.
  cand_.clear();
  double cutoff = best - kTieBand * best;
  for (std::size_t p = 0; p < count; ++p)
    if (payoff_[p] >= cutoff) cand_.push_back(static_cast<int>(p));
  if (cand_.size() > 1) {
    std::vector<Rat> exact(cand_.size(), Rat(0));
    Rat best_exact(-1);
    for (std::size_t k = 0; k < cand_.size(); ++k) {
      int cell = table_->own_cell[cand_[k]];
      if (table_->cells[cell].value.policy == static_cast<int>(Policy::kLow)) continue;
      Rat hi = rbase_hi_[cell] + Rat(static_cast<unsigned long>(cnt_hi_[cell]));
      Rat tot = rbase_tot_[cell] + Rat(static_cast<unsigned long>(cnt_tot_[cell]));
      exact[k] = table_->soc.q * hi / tot * table_->potential[cand_[k]];
      exact[k].canonicalize();
    }
    for (const Rat& u : exact)
      if (u > best_exact) best_exact = u;
    std::size_t keep = 0;
    for (std::size_t k = 0; k < cand_.size(); ++k)
      if (exact[k] == best_exact) cand_[keep++] = cand_[k];
    cand_.resize(keep);
  }
  s.dominant = tie_ == TieBreak::kCanonical ? cand_.front()
                                            : cand_[bounded_pick(rng_, cand_.size())];
  std::vector<int>& touched = touch_[s.dominant];
  if (touched.empty()) {
    const Platform& z = table_->platforms[s.dominant];
    for (std::size_t nid = 0; nid < table_->narratives.size(); ++nid) {
      SigValue v = signature_value(table_->narratives[nid], z.a, z.coalition);
      touched.push_back(table_->cell_index(static_cast<int>(nid), v));
    }
  }
  bool high = table_->platforms[s.dominant].a == Policy::kHigh;
  for (int cell : touched) {
    ++cnt_tot_[cell];
    if (high) ++cnt_hi_[cell];
    refresh(cell);
  }
  ++dom_[s.dominant];
  ++t_;
  return s;
}

DynResult run_dynamics(const PlatformTable& table, const DynOptions& options) {
  if (options.horizon < 1) fail(Err::kMalformedConfig, "horizon must be at least 1");
  for (int id : options.track)
    if (id < 0 || id >= static_cast<int>(table.platforms.size()))
      fail(Err::kMalformedConfig, "tracked platform id " + std::to_string(id) + " out of range");
  DynResult res;
  res.initial = options.initial ? *options.initial : uniform_distribution(table);
  res.mode_used = options.mode == SimMode::kAuto
                      ? (options.horizon <= 10000 ? SimMode::kExact : SimMode::kFast)
                      : options.mode;
  Trace& tr = res.trace;
  tr.table = &table;
  tr.horizon = options.horizon;
  tr.u_star = u_star(table.soc);
  tr.u_star_d = rat_d(tr.u_star);
  tr.track_ids = options.track;
  tr.dominant.reserve(options.horizon);
  tr.max_payoff.reserve(options.horizon);
  res.dominant_counts.assign(table.platforms.size(), 0);

  auto emit = [&](std::uint64_t t, int dominant, double maxpay, auto&& payoff_of) {
    tr.dominant.push_back(dominant);
    tr.max_payoff.push_back(maxpay);
    ++res.dominant_counts[dominant];
    if (!record_period(t) && t != options.horizon) return;
    tr.rows.push_back(t);
    std::vector<double> vals;
    vals.reserve(tr.track_ids.size());
    for (int id : tr.track_ids) vals.push_back(payoff_of(id));
    tr.tracked.push_back(std::move(vals));
  };

  if (res.mode_used == SimMode::kExact) {
    ExactSimulator sim(table, res.initial, options.tie, options.seed);
    for (std::uint64_t t = 1; t <= options.horizon; ++t) {
      auto payoffs = [&](int id) { return rat_d(sim.payoff_of(id)); };
      std::vector<double> pre;  // tracked payoffs are measured before the update
      if (record_period(t) || t == options.horizon)
        for (int id : tr.track_ids) pre.push_back(payoffs(id));
      ExactSimulator::Step s = sim.step();
      std::size_t k = 0;
      emit(t, s.dominant, rat_d(s.max_payoff), [&](int) { return pre[k++]; });
    }
  } else {
    FastSimulator sim(table, res.initial, options.tie, options.seed);
    for (std::uint64_t t = 1; t <= options.horizon; ++t) {
      std::vector<double> pre;
      if (record_period(t) || t == options.horizon)
        for (int id : tr.track_ids) pre.push_back(sim.payoff_of(id));
      FastSimulator::Step s = sim.step();
      std::size_t k = 0;
      emit(t, s.dominant, s.max_payoff, [&](int) { return pre[k++]; });
    }
  }
  return res;
}

LimitEstimate limit_estimate(const Trace& trace, const Rat& tail_fraction,
                             const std::optional<Rat>& alpha_hint) {
  if (trace.dominant.empty()) fail(Err::kEmptyTail, "trace holds no periods");
  if (!(tail_fraction > 0) || tail_fraction > 1)
    fail(Err::kEmptyTail, "tail fraction must lie in (0, 1]");
  const PlatformTable& table = *trace.table;
  std::uint64_t total = trace.dominant.size();
  Rat want = tail_fraction * Rat(static_cast<long>(total));
  want.canonicalize();
  mpz_class quot = want.get_num() / want.get_den();  // both positive: truncation = floor
  if (quot * want.get_den() != want.get_num()) ++quot;
  std::uint64_t tail = quot.get_ui();
  if (tail < 1) tail = 1;
  if (tail > total) tail = total;

  LimitEstimate est;
  est.tail_periods = tail;
  std::map<std::pair<int, GroupSet>, std::uint64_t> counts;
  std::uint64_t low_run = 0;
  for (std::uint64_t t = total - tail; t < total; ++t) {
    const Platform& z = table.platforms[trace.dominant[t]];
    ++counts[{static_cast<int>(z.a), z.coalition}];
    if (z.a == Policy::kLow) {
      ++low_run;
      est.longest_low_run_tail = std::max(est.longest_low_run_tail, low_run);
    } else {
      low_run = 0;
    }
    double dev = std::fabs(trace.max_payoff[t] - trace.u_star_d);
    est.max_payoff_deviation = std::max(est.max_payoff_deviation, dev);
  }
  for (const auto& [key, c] : counts) {
    Rat freq = Rat(static_cast<long>(c)) / Rat(static_cast<long>(tail));
    freq.canonicalize();
    est.marginal.push_back({{static_cast<Policy>(key.first), key.second}, freq});
  }
  if (alpha_hint && *alpha_hint > 0)
    est.low_run_warning = Rat(static_cast<long>(est.longest_low_run_tail)) > 10 / *alpha_hint;

  // Low-policy bursts: each maximal run of low-policy periods is one cycle.
  bool in_low = false;
  double peak = 0;
  for (std::uint64_t t = 0; t < total; ++t) {
    bool low = table.platforms[trace.dominant[t]].a == Policy::kLow;
    if (low) {
      double amp = trace.max_payoff[t] - trace.u_star_d;
      peak = in_low ? std::max(peak, amp) : amp;
      in_low = true;
    } else if (in_low) {
      est.cycle_peaks.push_back(peak);
      in_low = false;
    }
  }
  if (in_low) est.cycle_peaks.push_back(peak);
  for (std::size_t i = 0; i + 1 < est.cycle_peaks.size(); ++i)
    est.cycle_ratios.push_back(est.cycle_peaks[i] > 0 ? est.cycle_peaks[i + 1] / est.cycle_peaks[i]
                                                      : 0.0);
  return est;
}

}  // namespace narreq
