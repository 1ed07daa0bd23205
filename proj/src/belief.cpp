#include "narreq/belief.hpp"

#include "narreq/error.hpp"

namespace narreq {

Signature signature_of(const Narrative& narr, Policy a, GroupSet coalition) {
  return {narr, signature_value(narr, a, coalition)};
}

std::vector<int> PlatformDistribution::support() const {
  std::vector<int> out;
  for (size_t p = 0; p < mass.size(); ++p) {
    if (mass[p] > 0) out.push_back(static_cast<int>(p));
  }
  return out;
}

void PlatformDistribution::validate_normalized() const {
  Rat sum = 0;
  for (const Rat& m : mass) {
    if (m < 0) fail(Err::kMalformedConfig, "negative platform mass");
    sum += m;
  }
  if (sum != 1) fail(Err::kMalformedConfig, "platform masses sum to " + rat_str(sum) + ", expected 1");
}

PlatformDistribution uniform_distribution(const PlatformTable& table) {
  PlatformDistribution d;
  size_t count = table.platforms.size();
  d.mass.assign(count, Rat(1, static_cast<unsigned long>(count)));
  for (Rat& m : d.mass) m.canonicalize();
  return d;
}

std::optional<Rat> conditional_outcome_probability(const PlatformTable& table,
                                                   const PlatformDistribution& sigma,
                                                   const Rat& q, const Signature& target) {
  if (target.value.policy == static_cast<int>(Policy::kLow)) return Rat(0);
  Rat hi = 0, tot = 0;
  for (size_t p = 0; p < table.platforms.size(); ++p) {
    const Platform& z = table.platforms[p];
    if (!(signature_value(target.narr, z.a, z.coalition) == target.value)) continue;
    tot += sigma.mass[p];
    if (z.a == Policy::kHigh) hi += sigma.mass[p];
  }
  if (tot == 0) return std::nullopt;
  Rat belief = q * hi / tot;
  belief.canonicalize();
  return belief;
}

HistoryCounters HistoryCounters::init(const PlatformTable& table, const PlatformDistribution& initial) {
  if (initial.mass.size() != table.platforms.size())
    fail(Err::kMalformedConfig, "initial distribution not aligned with the platform table");
  initial.validate_normalized();
  for (size_t p = 0; p < initial.mass.size(); ++p) {
    if (initial.mass[p] <= 0)
      fail(Err::kNotFullSupport, "initial distribution gives no mass to " + platform_str(table.platforms[p]));
  }

  HistoryCounters c;
  c.table_ = &table;
  c.t_ = 1;
  c.initial_ = initial;
  c.base_hi_.assign(table.cells.size(), Rat(0));
  c.base_tot_.assign(table.cells.size(), Rat(0));
  c.cnt_hi_.assign(table.cells.size(), 0);
  c.cnt_tot_.assign(table.cells.size(), 0);
  c.dom_.assign(table.platforms.size(), 0);

  for (size_t p = 0; p < table.platforms.size(); ++p) {
    const Platform& z = table.platforms[p];
    for (size_t nid = 0; nid < table.narratives.size(); ++nid) {
      SigValue v = signature_value(table.narratives[nid], z.a, z.coalition);
      int cell = table.cell_index(static_cast<int>(nid), v);
      c.base_tot_[cell] += initial.mass[p];
      if (z.a == Policy::kHigh) c.base_hi_[cell] += initial.mass[p];
    }
  }
  return c;
}

void HistoryCounters::record_dominant(int platform) {
  const Platform& z = table_->platforms[platform];
  for (size_t nid = 0; nid < table_->narratives.size(); ++nid) {
    SigValue v = signature_value(table_->narratives[nid], z.a, z.coalition);
    int cell = table_->cell_index(static_cast<int>(nid), v);
    ++cnt_tot_[cell];
    if (z.a == Policy::kHigh) ++cnt_hi_[cell];
  }
  ++dom_[platform];
  ++t_;
}

Rat HistoryCounters::mass_high(int cell) const {
  Rat m = (base_hi_[cell] + static_cast<unsigned long>(cnt_hi_[cell])) / Rat(static_cast<unsigned long>(t_));
  m.canonicalize();
  return m;
}

Rat HistoryCounters::mass_total(int cell) const {
  Rat m = (base_tot_[cell] + static_cast<unsigned long>(cnt_tot_[cell])) / Rat(static_cast<unsigned long>(t_));
  m.canonicalize();
  return m;
}

Rat HistoryCounters::cell_belief(int cell) const {
  Rat hi = base_hi_[cell] + static_cast<unsigned long>(cnt_hi_[cell]);
  Rat tot = base_tot_[cell] + static_cast<unsigned long>(cnt_tot_[cell]);
  Rat b = table_->soc.q * hi / tot;
  b.canonicalize();
  return b;
}

Rat HistoryCounters::platform_belief(int platform) const {
  return cell_belief(table_->own_cell[platform]);
}

Rat HistoryCounters::platform_mass(int platform) const {
  Rat m = (initial_.mass[platform] + static_cast<unsigned long>(dom_[platform])) /
          Rat(static_cast<unsigned long>(t_));
  m.canonicalize();
  return m;
}

}  // namespace narreq
