#include "narreq/solver.hpp"

#include <algorithm>
#include <cassert>
#include <map>

#include "narreq/error.hpp"
#include "narreq/payoff.hpp"

namespace narreq {

namespace {

bool strict_subset(GroupSet a, GroupSet b) { return a != b && subset_of(a, b); }

// Superset-first: strict supersets always precede, so the weight recursion
// can run in one left-to-right pass.
bool entry_order(const ReducedEntry& x, const ReducedEntry& y) {
  int px = set_size(x.s), py = set_size(y.s);
  if (px != py) return px > py;
  return x.s < y.s;
}

}  // namespace

ReducedProblem build_reduced_problem(const Society& soc, const NarrativeDomain& domain) {
  ReducedProblem rp;
  rp.n = soc.n;
  rp.d = soc.d();
  if (soc.n == 2) {
    // Coalitions are singletons; the high policy runs with group 1. Every
    // nonempty narrative paired with coalition {1} induces the same belief
    // cell (membership of the named groups is constant across coalition-{1}
    // platforms), so all fold into one tribal class represented by the
    // smallest family set. The empty narrative runs with group 2.
    rp.h_coalition = with_group(0, 1);
    rp.f_h_star = soc.f(Policy::kHigh, 1);
    GroupSet rep = 0;
    for (GroupSet s : domain.family)
      if (s != 0) {
        if (rep == 0) rep = s;
        rp.merged_tribal_sets.push_back(s);
      }
    if (rep != 0)
      rp.entries.push_back({rep, with_group(0, 1), soc.f(Policy::kLow, 1) - rp.f_h_star});
    rp.entries.push_back({0, with_group(0, 2), soc.f(Policy::kLow, 2) - rp.f_h_star});
    return rp;
  }
  Categories cats = soc.categories();
  rp.h_coalition = cats.n_h;
  rp.f_h_star = soc.potential(Policy::kHigh, cats.n_h);
  for (GroupSet s : domain.family)
    if (subset_of(s, cats.right)) {
      GroupSet c = cats.n_l & ~s;
      rp.entries.push_back({s, c, soc.potential(Policy::kLow, c) - rp.f_h_star});
    }
  std::sort(rp.entries.begin(), rp.entries.end(), entry_order);
  return rp;
}

LayerDecomposition layer_decomposition(const ReducedProblem& rp) {
  LayerDecomposition ld;
  for (const ReducedEntry& e : rp.entries)
    if (e.excess > 0) ld.s_bar.push_back(e.s);
  std::vector<GroupSet> remaining = ld.s_bar;
  while (!remaining.empty()) {
    std::vector<GroupSet> layer, rest;
    for (GroupSet s : remaining) {
      bool maximal = true;
      for (GroupSet t : remaining)
        if (strict_subset(s, t)) {
          maximal = false;
          break;
        }
      (maximal ? layer : rest).push_back(s);
    }
    ld.layers.push_back(layer);
    remaining = rest;
  }
  for (GroupSet s : ld.s_bar) {
    std::vector<GroupSet> par;
    for (GroupSet t : ld.s_bar)
      if (strict_subset(s, t)) par.push_back(t);
    ld.parents.push_back(par);
  }
  return ld;
}

EquilibriumResult assemble_result(const Society& soc, const ReducedProblem& rp,
                                  std::vector<Rat> weights, const std::string& method) {
  EquilibriumResult r;
  r.d = rp.d;
  r.method = method;
  Rat wsum = 0;
  for (const Rat& w : weights) wsum += w;
  r.alpha = Rat(1) / (1 + wsum);
  r.u_star = u_star(soc);
  r.h_platform = Platform{Policy::kHigh, rp.h_coalition, Narrative{true, 0}};
  for (const ReducedEntry& e : rp.entries) {
    r.sets.push_back(e.s);
    r.coalitions.push_back(e.coalition);
  }
  r.weights = std::move(weights);
  for (const Rat& w : r.weights) r.sigma_bar.push_back(r.alpha * w);
  r.support.emplace_back(r.h_platform, r.alpha);
  for (size_t i = 0; i < r.sets.size(); ++i)
    if (r.sigma_bar[i] > 0)
      r.support.emplace_back(Platform{Policy::kLow, r.coalitions[i], Narrative{false, r.sets[i]}},
                             r.sigma_bar[i]);
  std::sort(r.support.begin(), r.support.end(),
            [](const auto& x, const auto& y) { return platform_less(x.first, y.first); });
  r.decomposition = layer_decomposition(rp);
  Rat total = r.alpha;
  for (const Rat& m : r.sigma_bar) total += m;
  assert(total == 1);
  return r;
}

namespace {

void require_categories_in_family(const Society& soc, const NarrativeDomain& domain) {
  if (soc.n == 2) return;
  Categories cats = soc.categories();
  for (GroupSet cat : {cats.left, cats.center, cats.right})
    if (!domain.contains(cat))
      fail(Err::kAssumptionViolated,
           "category " + set_str(cat) + " is missing from the narrative family");
}

// Weights from the solved reduced problem, matching the entry layout of rp.
std::vector<Rat> fill_weights(const ReducedProblem& rp, const std::map<GroupSet, Rat>& by_set) {
  std::vector<Rat> w(rp.entries.size(), Rat(0));
  for (size_t i = 0; i < rp.entries.size(); ++i) {
    auto it = by_set.find(rp.entries[i].s);
    if (it != by_set.end()) w[i] = it->second;
  }
  return w;
}

}  // namespace

EquilibriumResult solve_general(const Society& soc, const NarrativeDomain& domain) {
  validate_society(soc);
  require_categories_in_family(soc, domain);
  ReducedProblem rp = build_reduced_problem(soc, domain);
  std::vector<Rat> w(rp.entries.size(), Rat(0));
  for (size_t i = 0; i < rp.entries.size(); ++i) {
    const ReducedEntry& e = rp.entries[i];
    if (e.excess <= 0) continue;  // F(l,S) >= d: no mass, and no binding demand
    Rat demand = e.excess / rp.f_h_star;
    for (size_t j = 0; j < i; ++j)
      if (strict_subset(e.s, rp.entries[j].s)) demand -= w[j];
    if (demand > 0) w[i] = demand;
  }
  return assemble_result(soc, rp, std::move(w), "general");
}

EquilibriumResult solve_two_group(const Society& soc, const NarrativeDomain& domain) {
  if (soc.n != 2) fail(Err::kNotTwoGroups, "two-group closed form needs n = 2");
  validate_society(soc);
  ReducedProblem rp = build_reduced_problem(soc, domain);
  const Rat& f1h = soc.f(Policy::kHigh, 1);
  const Rat& f1l = soc.f(Policy::kLow, 1);
  const Rat& f2l = soc.f(Policy::kLow, 2);
  Rat alpha, denial, tribal;
  if (f1h >= f2l) {  // case I: truth wins outright
    alpha = 1;
    denial = 0;
    tribal = 0;
  } else if (f1h >= f1l) {  // case II, no tribal platform
    alpha = f1h / f2l;
    denial = (f2l - f1h) / f2l;
    tribal = 0;
  } else {  // case II with a tribal platform
    alpha = f1h / f2l;
    denial = (f2l - f1l) / f2l;
    tribal = (f1l - f1h) / f2l;
  }
  bool have_tribal = !rp.merged_tribal_sets.empty();
  if (tribal > 0 && !have_tribal)
    fail(Err::kAssumptionViolated,
         "equilibrium needs a tribal narrative but the family has no nonempty set");
  std::map<GroupSet, Rat> by_set;
  by_set[0] = denial / alpha;
  if (have_tribal) by_set[rp.entries.front().s] = tribal / alpha;
  return assemble_result(soc, rp, fill_weights(rp, by_set), "two-group");
}

EquilibriumResult solve_taxonomy_closed_form(const Society& soc, const NarrativeDomain& domain) {
  if (domain.kind != DomainSpec::Kind::kTaxonomy || domain.layers.empty())
    fail(Err::kMalformedConfig, "taxonomy closed form needs a taxonomy domain");
  validate_society(soc);
  Categories cats = soc.categories();
  Rat f_h = soc.potential(Policy::kHigh, cats.n_h);           // F(h,N)
  Rat f_l_center = soc.potential(Policy::kLow, cats.center);  // F(l,N^h)
  Rat f_l_right = soc.potential(Policy::kLow, cats.right);    // F(l,N\N^h)
  if (!(f_l_center > f_h))
    fail(Err::kAssumptionViolated,
         "taxonomy closed form assumes F(l,N^h) > F(h,N); got " + rat_str(f_l_center) +
             " <= " + rat_str(f_h));
  size_t depth = domain.layers.size();  // K
  long r_excess = 0;                    // R = sum over refinement layers of (r_k - 1)
  for (size_t k = 1; k < depth; ++k) {
    size_t prev = domain.layers[k - 1].cells.size();
    size_t cur = domain.layers[k].cells.size();
    assert(prev > 0 && cur % prev == 0);
    r_excess += static_cast<long>(cur / prev) - 1;
  }
  Rat alpha = f_h / (f_l_center + Rat(std::max(r_excess, 1L)) * f_l_right);
  std::map<GroupSet, Rat> by_set;
  by_set[cats.right] = (f_l_center - f_h) / f_h;
  if (depth == 1) by_set[0] = f_l_right / f_h;  // denialist mass only when K = 1
  for (size_t k = 1; k < depth; ++k) {
    const TaxonomyLayer& layer = domain.layers[k];
    for (size_t c = 0; c < layer.cells.size(); ++c) {
      GroupSet s = layer.cells[c];
      if (!subset_of(s, cats.right)) continue;
      GroupSet parent = domain.layers[k - 1].cells[layer.parents[c]];
      by_set[s] = soc.potential(Policy::kLow, parent & ~s) / f_h;
    }
  }
  ReducedProblem rp = build_reduced_problem(soc, domain);
  EquilibriumResult r = assemble_result(soc, rp, fill_weights(rp, by_set), "taxonomy");
  assert(r.alpha == alpha);
  return r;
}

EquilibriumResult solve_rich_closed_form(const Society& soc, const NarrativeDomain& domain) {
  if (domain.kind != DomainSpec::Kind::kRich)
    fail(Err::kMalformedConfig, "rich closed form needs a rich domain");
  validate_society(soc);
  Categories cats = soc.categories();
  Rat f_h = soc.potential(Policy::kHigh, cats.n_h);
  Rat f_l_center = soc.potential(Policy::kLow, cats.center);
  Rat f_l_right = soc.potential(Policy::kLow, cats.right);
  if (!(f_l_center > f_h))
    fail(Err::kAssumptionViolated,
         "rich closed form assumes F(l,N^h) > F(h,N); got " + rat_str(f_l_center) +
             " <= " + rat_str(f_h));
  Rat alpha = f_h / (f_l_center + f_l_right);  // F(h,N)/F(l,N)
  std::map<GroupSet, Rat> by_set;
  by_set[cats.right] = (f_l_center - f_h) / f_h;
  for (int i : group_list(cats.right))
    by_set[cats.right & ~with_group(0, i)] = soc.f(Policy::kLow, i) / f_h;
  ReducedProblem rp = build_reduced_problem(soc, domain);
  EquilibriumResult r = assemble_result(soc, rp, fill_weights(rp, by_set), "rich");
  assert(r.alpha == alpha);
  return r;
}

const char* solve_method_name(SolveMethod m) {
  switch (m) {
    case SolveMethod::kAuto: return "auto";
    case SolveMethod::kGeneral: return "general";
    case SolveMethod::kTwoGroup: return "two-group";
    case SolveMethod::kTaxonomy: return "taxonomy";
    case SolveMethod::kRich: return "rich";
  }
  return "?";
}

EquilibriumResult solve(const Society& soc, const NarrativeDomain& domain, SolveMethod method) {
  switch (method) {
    case SolveMethod::kGeneral: return solve_general(soc, domain);
    case SolveMethod::kTwoGroup: return solve_two_group(soc, domain);
    case SolveMethod::kTaxonomy: return solve_taxonomy_closed_form(soc, domain);
    case SolveMethod::kRich: return solve_rich_closed_form(soc, domain);
    case SolveMethod::kAuto: break;
  }
  if (soc.n == 2) return solve_two_group(soc, domain);
  if (domain.kind == DomainSpec::Kind::kTaxonomy) return solve_taxonomy_closed_form(soc, domain);
  if (domain.kind == DomainSpec::Kind::kRich) return solve_rich_closed_form(soc, domain);
  return solve_general(soc, domain);
}

bool same_equilibrium(const EquilibriumResult& a, const EquilibriumResult& b) {
  if (a.alpha != b.alpha) return false;
  if (a.sets != b.sets || a.coalitions != b.coalitions) return false;
  if (a.sigma_bar != b.sigma_bar) return false;
  if (a.support.size() != b.support.size()) return false;
  for (size_t i = 0; i < a.support.size(); ++i)
    if (!(a.support[i].first == b.support[i].first) || a.support[i].second != b.support[i].second)
      return false;
  return true;
}

std::vector<std::pair<std::pair<Policy, GroupSet>, Rat>> policy_coalition_marginal(
    const EquilibriumResult& r) {
  std::map<std::pair<int, GroupSet>, Rat> acc;
  for (const auto& [z, m] : r.support) acc[{static_cast<int>(z.a), z.coalition}] += m;
  std::vector<std::pair<std::pair<Policy, GroupSet>, Rat>> out;
  for ([[maybe_unused]] const auto& [key, m] : acc)
    out.push_back({{static_cast<Policy>(key.first), key.second}, m});
  return out;
}

PlatformDistribution distribution_from_result(const PlatformTable& table,
                                              const EquilibriumResult& r) {
  PlatformDistribution sigma;
  sigma.mass.assign(table.platforms.size(), Rat(0));
  for (const auto& [z, m] : r.support) {
    int idx = table.platform_index(z);
    if (idx < 0)
      fail(Err::kMalformedConfig, "support platform " + platform_str(z) + " is not enumerable");
    sigma.mass[idx] += m;
  }
  return sigma;
}

}  // namespace narreq
