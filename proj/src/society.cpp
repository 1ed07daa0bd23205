#include "narreq/society.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <set>
#include <sstream>

#include "narreq/error.hpp"

namespace narreq {

char policy_char(Policy a) { return a == Policy::kHigh ? 'h' : 'l'; }

bool has_group(GroupSet s, int i) { return (s >> (i - 1)) & GroupSet{1}; }

GroupSet with_group(GroupSet s, int i) { return s | (GroupSet{1} << (i - 1)); }

int set_size(GroupSet s) { return std::popcount(s); }

bool subset_of(GroupSet a, GroupSet b) { return (a & ~b) == 0; }

GroupSet full_set(int n) {
  if (n >= 64) return ~GroupSet{0};
  return (GroupSet{1} << n) - 1;
}

std::vector<int> group_list(GroupSet s) {
  std::vector<int> out;
  for (int i = 1; s != 0; ++i, s >>= 1) {
    if (s & 1) out.push_back(i);
  }
  return out;
}

GroupSet make_set(const std::vector<int>& groups, int n) {
  GroupSet s = 0;
  for (int g : groups) {
    if (g < 1 || g > n)
      fail(Err::kMalformedConfig, "group index " + std::to_string(g) + " outside 1.." + std::to_string(n));
    s = with_group(s, g);
  }
  return s;
}

std::string set_str(GroupSet s) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int g : group_list(s)) {
    if (!first) os << ',';
    os << g;
    first = false;
  }
  os << '}';
  return os.str();
}

const char* domain_kind_name(DomainSpec::Kind kind) {
  switch (kind) {
    case DomainSpec::Kind::kExplicit: return "explicit";
    case DomainSpec::Kind::kTaxonomy: return "taxonomy";
    case DomainSpec::Kind::kRich: return "rich";
  }
  return "?";
}

const Rat& Society::f(Policy a, int i) const {
  return a == Policy::kHigh ? f_high[i - 1] : f_low[i - 1];
}

Rat Society::potential(Policy a, GroupSet m) const {
  Rat sum = 0;
  for (int i : group_list(m)) sum += f(a, i);
  return sum;
}

GroupSet Society::support_set(Policy a) const {
  GroupSet s = 0;
  for (int i = 1; i <= n; ++i) {
    if (f(a, i) > 0) s = with_group(s, i);
  }
  return s;
}

Categories Society::categories() const {
  Categories c;
  c.n_h = support_set(Policy::kHigh);
  c.n_l = support_set(Policy::kLow);
  GroupSet all = full_set(n);
  c.left = all & ~c.n_l;
  c.right = all & ~c.n_h;
  c.center = c.n_l & c.n_h;
  return c;
}

Rat Society::d() const {
  GroupSet all = full_set(n);
  return potential(Policy::kLow, all) - potential(Policy::kHigh, all);
}

void validate_society(const Society& soc) {
  if (soc.n < 2) fail(Err::kMalformedConfig, "need at least two groups, got n=" + std::to_string(soc.n));
  if (soc.n > 64) fail(Err::kMalformedConfig, "at most 64 groups supported, got n=" + std::to_string(soc.n));
  if (static_cast<int>(soc.f_high.size()) != soc.n || static_cast<int>(soc.f_low.size()) != soc.n)
    fail(Err::kMalformedConfig, "potential table must list exactly n groups");
  if (soc.q <= 0 || soc.q > 1) fail(Err::kInvalidQ, "q must lie in (0,1], got " + rat_str(soc.q));

  for (int i = 1; i <= soc.n; ++i) {
    const Rat& fh = soc.f(Policy::kHigh, i);
    const Rat& fl = soc.f(Policy::kLow, i);
    if (fh < 0 || fl < 0)
      fail(Err::kMalformedConfig, "negative potential for group " + std::to_string(i));
    if (fh == 0 && fl == 0)
      fail(Err::kGroupSupportsNothing, "group " + std::to_string(i) + " supports neither policy");
  }

  Categories cats = soc.categories();
  if (cats.n_h == 0) fail(Err::kPolicyUnsupported, "no group supports the high policy");
  if (cats.n_l == 0) fail(Err::kPolicyUnsupported, "no group supports the low policy");

  if (soc.n == 2) {
    if (!(soc.f(Policy::kHigh, 1) > soc.f(Policy::kHigh, 2)))
      fail(Err::kTwoGroupOrderingViolated, "two-group setting requires f_1(h) > f_2(h)");
    if (!(soc.f(Policy::kLow, 2) > soc.f(Policy::kLow, 1)))
      fail(Err::kTwoGroupOrderingViolated, "two-group setting requires f_2(l) > f_1(l)");
  } else {
    if (cats.left == 0) fail(Err::kEmptyCategory, "left category (groups supporting only high) is empty");
    if (cats.center == 0) fail(Err::kEmptyCategory, "center category (groups supporting both) is empty");
    if (cats.right == 0) fail(Err::kEmptyCategory, "right category (groups supporting only low) is empty");
  }
}

bool operator==(const Narrative& a, const Narrative& b) {
  return a.uses_policy == b.uses_policy && a.groups == b.groups;
}

bool narrative_less(const Narrative& a, const Narrative& b) {
  if (a.uses_policy != b.uses_policy) return !a.uses_policy;
  return a.groups < b.groups;
}

std::string narrative_str(const Narrative& s) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  if (s.uses_policy) {
    os << 0;
    first = false;
  }
  for (int g : group_list(s.groups)) {
    if (!first) os << ',';
    os << g;
    first = false;
  }
  os << '}';
  return os.str();
}

bool NarrativeDomain::contains(GroupSet s) const {
  return std::binary_search(family.begin(), family.end(), s);
}

namespace {

// Splits a cell into r contiguous chunks of near-equal size, groups ascending.
std::vector<GroupSet> split_cell(GroupSet cell, int r) {
  std::vector<int> members = group_list(cell);
  int size = static_cast<int>(members.size());
  std::vector<GroupSet> chunks;
  int base = size / r;
  int rem = size % r;
  int pos = 0;
  for (int j = 0; j < r; ++j) {
    int len = base + (j < rem ? 1 : 0);
    GroupSet chunk = 0;
    for (int k = 0; k < len; ++k) chunk = with_group(chunk, members[pos++]);
    chunks.push_back(chunk);
  }
  return chunks;
}

void for_each_subset(GroupSet mask, const std::function<void(GroupSet)>& fn) {
  GroupSet sub = mask;
  while (true) {
    fn(sub);
    if (sub == 0) break;
    sub = (sub - 1) & mask;
  }
}

}  // namespace

NarrativeDomain expand_narrative_domain(const Society& soc) {
  validate_society(soc);
  Categories cats = soc.categories();
  const DomainSpec& spec = soc.domain_spec;

  NarrativeDomain out;
  out.kind = spec.kind;
  std::set<GroupSet> family;
  family.insert(0);  // the denialist narrative is always feasible

  auto inside_some_category = [&](GroupSet s) {
    return subset_of(s, cats.left) || subset_of(s, cats.center) || subset_of(s, cats.right);
  };

  switch (spec.kind) {
    case DomainSpec::Kind::kExplicit: {
      for (GroupSet s : spec.sets) {
        if (!subset_of(s, full_set(soc.n)))
          fail(Err::kMalformedConfig, "narrative set " + set_str(s) + " outside 1..n");
        if (soc.n > 2 && !inside_some_category(s))
          fail(Err::kNarrativeOutsideCategories,
               "narrative set " + set_str(s) + " is not a subset of any category");
        family.insert(s);
      }
      if (soc.n > 2) {
        family.insert(cats.left);
        family.insert(cats.center);
        family.insert(cats.right);
      }
      break;
    }
    case DomainSpec::Kind::kTaxonomy: {
      if (soc.n == 2)
        fail(Err::kMalformedTaxonomy, "taxonomy domains need the three-category setting (n > 2)");
      TaxonomyLayer base;
      base.cells = {cats.left, cats.center, cats.right};
      std::sort(base.cells.begin(), base.cells.end());
      base.parents.assign(base.cells.size(), -1);
      out.layers.push_back(base);
      for (int r : spec.split_counts) {
        if (r < 2) fail(Err::kMalformedTaxonomy, "split count must be at least 2, got " + std::to_string(r));
        const TaxonomyLayer& prev = out.layers.back();
        TaxonomyLayer next;
        for (size_t p = 0; p < prev.cells.size(); ++p) {
          if (set_size(prev.cells[p]) < r)
            fail(Err::kMalformedTaxonomy, "cell " + set_str(prev.cells[p]) + " has fewer than " +
                                              std::to_string(r) + " groups and cannot split");
          for (GroupSet chunk : split_cell(prev.cells[p], r)) {
            next.cells.push_back(chunk);
            next.parents.push_back(static_cast<int>(p));
          }
        }
        out.layers.push_back(next);
      }
      for (const TaxonomyLayer& layer : out.layers)
        for (GroupSet cell : layer.cells) family.insert(cell);
      break;
    }
    case DomainSpec::Kind::kRich: {
      if (soc.n == 2)
        fail(Err::kMalformedTaxonomy, "rich domains need the three-category setting (n > 2)");
      for (GroupSet cat : {cats.left, cats.center, cats.right}) {
        if (set_size(cat) > 20)
          fail(Err::kPlatformSpaceTooLarge,
               "rich domain over a category of " + std::to_string(set_size(cat)) + " groups");
        for_each_subset(cat, [&](GroupSet s) { family.insert(s); });
      }
      break;
    }
  }

  out.family.assign(family.begin(), family.end());
  return out;
}

bool operator==(const Platform& x, const Platform& y) {
  return x.a == y.a && x.coalition == y.coalition && x.narr == y.narr;
}

bool platform_less(const Platform& x, const Platform& y) {
  if (x.a != y.a) return static_cast<int>(x.a) < static_cast<int>(y.a);
  if (x.coalition != y.coalition) return x.coalition < y.coalition;
  return narrative_less(x.narr, y.narr);
}

std::string platform_str(const Platform& z) {
  std::ostringstream os;
  os << '(' << policy_char(z.a) << ',' << set_str(z.coalition) << ',' << narrative_str(z.narr) << ')';
  return os.str();
}

bool operator==(const SigValue& a, const SigValue& b) {
  return a.policy == b.policy && a.members == b.members;
}

bool operator<(const SigValue& a, const SigValue& b) {
  if (a.policy != b.policy) return a.policy < b.policy;
  return a.members < b.members;
}

SigValue signature_value(const Narrative& narr, Policy a, GroupSet coalition) {
  SigValue v;
  v.policy = narr.uses_policy ? static_cast<int>(a) : -1;
  v.members = narr.groups & coalition;
  return v;
}

int PlatformTable::narrative_index(const Narrative& s) const {
  auto it = narr_lookup.find({s.uses_policy, s.groups});
  return it == narr_lookup.end() ? -1 : it->second;
}

int PlatformTable::platform_index(const Platform& z) const {
  auto it = plat_lookup.find({static_cast<int>(z.a), z.coalition, z.narr.uses_policy, z.narr.groups});
  return it == plat_lookup.end() ? -1 : it->second;
}

int PlatformTable::cell_index(int narrative, const SigValue& v) const {
  auto it = cell_lookup.find({narrative, v.policy, v.members});
  return it == cell_lookup.end() ? -1 : it->second;
}

namespace {

// Admissible coalitions for one policy: nonempty strict subsets of N whose
// members all have positive potential. The two-group setting uses singleton
// coalitions only.
std::vector<GroupSet> admissible_coalitions(const Society& soc, Policy a) {
  GroupSet sup = soc.support_set(a);
  std::vector<GroupSet> out;
  if (soc.n == 2) {
    for (int i = 1; i <= 2; ++i) {
      if (has_group(sup, i)) out.push_back(with_group(0, i));
    }
    return out;
  }
  std::vector<int> bits = group_list(sup);
  int b = static_cast<int>(bits.size());
  GroupSet all = full_set(soc.n);
  for (std::uint64_t k = 1; k < (std::uint64_t{1} << b); ++k) {
    GroupSet c = 0;
    for (int j = 0; j < b; ++j) {
      if ((k >> j) & 1) c = with_group(c, bits[j]);
    }
    if (c != all) out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

unsigned __int128 coalition_count(const Society& soc, Policy a) {
  GroupSet sup = soc.support_set(a);
  if (soc.n == 2) return set_size(sup);
  int b = set_size(sup);
  if (b >= 64) return ~static_cast<unsigned __int128>(0);
  unsigned __int128 c = (static_cast<unsigned __int128>(1) << b) - 1;
  if (sup == full_set(soc.n)) c -= 1;  // the grand coalition is never allowed
  return c;
}

}  // namespace

PlatformTable enumerate_platforms(const Society& soc, const NarrativeDomain& domain, std::uint64_t guard) {
  validate_society(soc);

  unsigned __int128 total = coalition_count(soc, Policy::kLow) + coalition_count(soc, Policy::kHigh);
  total *= 2 * static_cast<unsigned __int128>(domain.family.size());
  if (total > guard)
    fail(Err::kPlatformSpaceTooLarge,
         "platform count exceeds guard of " + std::to_string(guard));

  PlatformTable t;
  t.soc = soc;
  t.domain = domain;
  t.cats = soc.categories();

  for (bool uses : {false, true}) {
    for (GroupSet s : domain.family) t.narratives.push_back({uses, s});
  }
  std::sort(t.narratives.begin(), t.narratives.end(), narrative_less);
  for (size_t i = 0; i < t.narratives.size(); ++i)
    t.narr_lookup[{t.narratives[i].uses_policy, t.narratives[i].groups}] = static_cast<int>(i);

  for (Policy a : {Policy::kLow, Policy::kHigh}) {
    for (GroupSet c : admissible_coalitions(soc, a)) {
      Rat f = soc.potential(a, c);
      for (const Narrative& s : t.narratives) {
        t.platforms.push_back({a, c, s});
        t.potential.push_back(f);
        t.potential_d.push_back(rat_d(f));
      }
    }
  }

  t.own_cell.resize(t.platforms.size());
  for (size_t p = 0; p < t.platforms.size(); ++p) {
    const Platform& z = t.platforms[p];
    t.plat_lookup[{static_cast<int>(z.a), z.coalition, z.narr.uses_policy, z.narr.groups}] =
        static_cast<int>(p);
    int nid = t.narrative_index(z.narr);
    SigValue v = signature_value(z.narr, z.a, z.coalition);
    auto key = std::tuple<int, int, GroupSet>{nid, v.policy, v.members};
    auto it = t.cell_lookup.find(key);
    if (it == t.cell_lookup.end()) {
      it = t.cell_lookup.emplace(key, static_cast<int>(t.cells.size())).first;
      t.cells.push_back({nid, v});
    }
    t.own_cell[p] = it->second;
  }

  GroupSet h_coal = soc.n == 2 ? with_group(0, 1) : t.cats.n_h;
  t.h_top = t.platform_index({Policy::kHigh, h_coal, {true, 0}});
  return t;
}

}  // namespace narreq
