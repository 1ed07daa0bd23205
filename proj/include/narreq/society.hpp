#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "narreq/rational.hpp"

namespace narreq {

// Only the high policy can produce the good outcome.
enum class Policy : int { kLow = 0, kHigh = 1 };

char policy_char(Policy a);

// Group sets as bit fields: bit i-1 represents group i. Supports n <= 64.
using GroupSet = std::uint64_t;

bool has_group(GroupSet s, int i);
GroupSet with_group(GroupSet s, int i);
int set_size(GroupSet s);
bool subset_of(GroupSet a, GroupSet b);
GroupSet full_set(int n);
std::vector<int> group_list(GroupSet s);
GroupSet make_set(const std::vector<int>& groups, int n);
std::string set_str(GroupSet s);

struct DomainSpec {
  enum class Kind { kExplicit, kTaxonomy, kRich };
  Kind kind = Kind::kExplicit;
  std::vector<GroupSet> sets;     // explicit narrative family (group parts only)
  std::vector<int> split_counts;  // taxonomy: r_2..r_K, each cell splits this many ways
};

const char* domain_kind_name(DomainSpec::Kind kind);

struct Categories {
  GroupSet n_h = 0;    // groups with positive potential for the high policy
  GroupSet n_l = 0;    // same for the low policy
  GroupSet left = 0;   // support only high
  GroupSet center = 0; // support both
  GroupSet right = 0;  // support only low
};

struct Society {
  int n = 0;
  Rat q;
  std::vector<Rat> f_high;  // f_high[i-1] = potential of group i for the high policy
  std::vector<Rat> f_low;
  DomainSpec domain_spec;

  const Rat& f(Policy a, int i) const;
  Rat potential(Policy a, GroupSet m) const;  // F(a, M), sum of potentials over M
  GroupSet support_set(Policy a) const;       // groups with positive potential for a
  Categories categories() const;
  Rat d() const;  // F(low, N) - F(high, N), the intrinsic advantage of the low policy
};

// Throws on any violated structural assumption (see error.hpp kinds).
void validate_society(const Society& soc);

// A narrative names postulated causes: optionally the policy itself plus a
// set of groups whose hold on power supposedly drives outcomes.
struct Narrative {
  bool uses_policy = false;
  GroupSet groups = 0;
};

bool operator==(const Narrative& a, const Narrative& b);
bool narrative_less(const Narrative& a, const Narrative& b);
std::string narrative_str(const Narrative& s);

struct TaxonomyLayer {
  std::vector<GroupSet> cells;
  std::vector<int> parents;  // index into the previous layer's cells; -1 at layer 0
};

struct NarrativeDomain {
  DomainSpec::Kind kind = DomainSpec::Kind::kExplicit;
  std::vector<GroupSet> family;      // sorted, deduped, always contains the empty set
  std::vector<TaxonomyLayer> layers; // taxonomy only; layer 0 holds the three categories

  bool contains(GroupSet s) const;
};

NarrativeDomain expand_narrative_domain(const Society& soc);

struct Platform {
  Policy a = Policy::kLow;
  GroupSet coalition = 0;
  Narrative narr;
};

bool operator==(const Platform& x, const Platform& y);
bool platform_less(const Platform& x, const Platform& y);
std::string platform_str(const Platform& z);

// Realized value of a narrative's signature under a platform: the policy bit
// (if the narrative cites the policy) and the coalition membership bit of
// every cited group.
struct SigValue {
  int policy = -1;  // -1 when the narrative omits the policy cause, else 0/1
  GroupSet members = 0;
};

bool operator==(const SigValue& a, const SigValue& b);
bool operator<(const SigValue& a, const SigValue& b);

SigValue signature_value(const Narrative& narr, Policy a, GroupSet coalition);

constexpr std::uint64_t kDefaultPlatformGuard = 1000000;

// Enumerated platform space with cached potentials and signature cells.
// A cell is one (narrative, signature value) class; belief queries and the
// dynamics aggregate probability mass per cell.
struct PlatformTable {
  Society soc;
  NarrativeDomain domain;
  Categories cats;

  std::vector<Narrative> narratives;  // canonical order
  std::vector<Platform> platforms;    // canonical order
  std::vector<Rat> potential;         // per platform, F(a, C)
  std::vector<double> potential_d;

  struct Cell {
    int narrative = 0;
    SigValue value;
  };
  std::vector<Cell> cells;
  std::vector<int> own_cell;  // platform index -> cell of its own signature
  int h_top = -1;             // index of the high-policy platform with the true narrative

  int narrative_index(const Narrative& s) const;
  int platform_index(const Platform& z) const;
  int cell_index(int narrative, const SigValue& v) const;

  std::map<std::pair<bool, GroupSet>, int> narr_lookup;
  std::map<std::tuple<int, GroupSet, bool, GroupSet>, int> plat_lookup;
  std::map<std::tuple<int, int, GroupSet>, int> cell_lookup;
};

PlatformTable enumerate_platforms(const Society& soc, const NarrativeDomain& domain,
                                  std::uint64_t guard = kDefaultPlatformGuard);

}  // namespace narreq
