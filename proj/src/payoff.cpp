#include "narreq/payoff.hpp"

#include "narreq/error.hpp"

namespace narreq {

Rat u_star(const Society& soc) {
  if (soc.n == 2) {
    Rat u = soc.q * soc.f(Policy::kHigh, 1);
    u.canonicalize();
    return u;
  }
  Rat u = soc.q * soc.potential(Policy::kHigh, soc.support_set(Policy::kHigh));
  u.canonicalize();
  return u;
}

std::optional<Rat> group_support(const PlatformTable& table, const PlatformDistribution& sigma,
                                 const Platform& z, int group) {
  if (!has_group(z.coalition, group) || !(table.soc.f(z.a, group) > 0))
    fail(Err::kGroupNotInCoalition,
         "group " + std::to_string(group) + " is not an admissible member of " + platform_str(z));
  auto belief = conditional_outcome_probability(table, sigma, table.soc.q,
                                                signature_of(z.narr, z.a, z.coalition));
  if (!belief) return std::nullopt;
  Rat u = *belief * table.soc.f(z.a, group);
  u.canonicalize();
  return u;
}

std::optional<Rat> platform_payoff(const PlatformTable& table, const PlatformDistribution& sigma,
                                   const Platform& z) {
  auto belief = conditional_outcome_probability(table, sigma, table.soc.q,
                                                signature_of(z.narr, z.a, z.coalition));
  if (!belief) return std::nullopt;
  Rat u = *belief * table.soc.potential(z.a, z.coalition);
  u.canonicalize();
  return u;
}

namespace {

PayoffReport report_from(const std::vector<std::optional<Rat>>& payoffs) {
  PayoffReport r;
  r.payoff = payoffs;
  r.max_payoff = 0;
  bool seen = false;
  for (const auto& u : payoffs) {
    if (!u) continue;
    if (!seen || *u > r.max_payoff) {
      r.max_payoff = *u;
      seen = true;
    }
  }
  for (size_t p = 0; p < payoffs.size(); ++p) {
    if (payoffs[p] && *payoffs[p] == r.max_payoff) r.argmax.push_back(static_cast<int>(p));
  }
  return r;
}

}  // namespace

PayoffReport payoff_report(const PlatformTable& table, const PlatformDistribution& sigma) {
  // Accumulate per-cell mass once instead of rescanning the table per platform.
  std::vector<Rat> hi(table.cells.size(), Rat(0)), tot(table.cells.size(), Rat(0));
  for (size_t p = 0; p < table.platforms.size(); ++p) {
    const Platform& z = table.platforms[p];
    for (size_t nid = 0; nid < table.narratives.size(); ++nid) {
      SigValue v = signature_value(table.narratives[nid], z.a, z.coalition);
      int cell = table.cell_index(static_cast<int>(nid), v);
      tot[cell] += sigma.mass[p];
      if (z.a == Policy::kHigh) hi[cell] += sigma.mass[p];
    }
  }
  std::vector<std::optional<Rat>> payoffs(table.platforms.size());
  for (size_t p = 0; p < table.platforms.size(); ++p) {
    int cell = table.own_cell[p];
    const SigValue& v = table.cells[cell].value;
    if (v.policy == static_cast<int>(Policy::kLow)) {
      payoffs[p] = Rat(0);
      continue;
    }
    if (tot[cell] == 0) continue;
    Rat u = table.soc.q * hi[cell] / tot[cell] * table.potential[p];
    u.canonicalize();
    payoffs[p] = u;
  }
  return report_from(payoffs);
}

PayoffReport payoff_report(const HistoryCounters& counters) {
  const PlatformTable& table = counters.table();
  std::vector<std::optional<Rat>> payoffs(table.platforms.size());
  for (size_t p = 0; p < table.platforms.size(); ++p) {
    Rat u = counters.platform_belief(static_cast<int>(p)) * table.potential[p];
    u.canonicalize();
    payoffs[p] = u;
  }
  return report_from(payoffs);
}

std::vector<int> dominant_set(const PlatformTable& table, const PlatformDistribution& sigma) {
  return payoff_report(table, sigma).argmax;
}

}  // namespace narreq
