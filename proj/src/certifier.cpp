#include "narreq/certifier.hpp"

#include <algorithm>
#include <map>

#include "narreq/error.hpp"
#include "narreq/payoff.hpp"

namespace narreq {

namespace {

bool strict_subset(GroupSet a, GroupSet b) { return a != b && subset_of(a, b); }

struct CellAgg {
  std::vector<Rat> hi;
  std::vector<Rat> tot;
};

CellAgg cell_aggregates(const PlatformTable& table, const std::vector<Rat>& mass) {
  CellAgg agg;
  agg.hi.assign(table.cells.size(), Rat(0));
  agg.tot.assign(table.cells.size(), Rat(0));
  for (size_t p = 0; p < table.platforms.size(); ++p) {
    if (mass[p] == 0) continue;
    const Platform& z = table.platforms[p];
    for (size_t nid = 0; nid < table.narratives.size(); ++nid) {
      SigValue v = signature_value(table.narratives[nid], z.a, z.coalition);
      int cell = table.cell_index(static_cast<int>(nid), v);
      agg.tot[cell] += mass[p];
      if (z.a == Policy::kHigh) agg.hi[cell] += mass[p];
    }
  }
  return agg;
}

// Payoff of platform p in the tremble limit. A policy bit in the signature
// pins the belief (zero under low, one under high). A cell the candidate
// reaches pins it through the mass ratio, and a cell whose members all share
// one policy is pinned by membership alone. A mixed cell left unreached pins
// nothing: vanishing trembles can steer its limit belief anywhere in [0,1].
std::optional<Rat> limit_payoff(const PlatformTable& table, const CellAgg& cand,
                                const CellAgg& unif, size_t p) {
  int cell = table.own_cell[p];
  const SigValue& v = table.cells[cell].value;
  if (v.policy == static_cast<int>(Policy::kLow)) return Rat(0);
  Rat ratio;
  if (v.policy == static_cast<int>(Policy::kHigh))
    ratio = 1;
  else if (cand.tot[cell] > 0)
    ratio = cand.hi[cell] / cand.tot[cell];
  else if (unif.hi[cell] == 0)
    return Rat(0);
  else if (unif.hi[cell] == unif.tot[cell])
    ratio = 1;
  else
    return std::nullopt;
  Rat u = table.soc.q * ratio * table.potential[p];
  u.canonicalize();
  return u;
}

Rat mixture_payoff(const PlatformTable& table, const CellAgg& cand, const CellAgg& unif,
                   const Rat& eps, size_t p) {
  int cell = table.own_cell[p];
  const SigValue& v = table.cells[cell].value;
  if (v.policy == static_cast<int>(Policy::kLow)) return Rat(0);
  Rat hi = (1 - eps) * cand.hi[cell] + eps * unif.hi[cell];
  Rat tot = (1 - eps) * cand.tot[cell] + eps * unif.tot[cell];
  Rat u = table.soc.q * hi / tot * table.potential[p];
  u.canonicalize();
  return u;
}

}  // namespace

CertReport verify_equilibrium(const PlatformTable& table, const PlatformDistribution& candidate,
                              const VerifyOptions& opts) {
  candidate.validate_normalized();
  const Society& soc = table.soc;
  const Categories& cats = table.cats;
  CertReport rep;
  Rat level = u_star(soc);

  std::vector<int> support;
  for (size_t p = 0; p < table.platforms.size(); ++p)
    if (candidate.mass[p] > 0) support.push_back(static_cast<int>(p));

  GroupSet h_coalition = soc.n == 2 ? with_group(0, 1) : cats.n_h;
  Platform h_plat{Policy::kHigh, h_coalition, Narrative{true, 0}};

  // (a) support shape: the high policy only via the true platform; low
  // platforms in the exclusionary form of the characterization.
  bool h_found = false;
  int tribal_entries = 0;  // n=2 only: distinct low platforms in the tribal class
  for (int p : support) {
    const Platform& z = table.platforms[p];
    if (z.a == Policy::kHigh) {
      if (z.coalition != h_coalition)
        rep.violations.push_back({"support-shape", z, std::nullopt, Rat(0), Rat(0),
                                  "high policy must run with coalition " + set_str(h_coalition)});
      else if (z.narr == h_plat.narr)
        h_found = true;
      continue;
    }
    if (z.narr.uses_policy) {
      rep.violations.push_back({"support-shape", z, z.narr, Rat(0), Rat(0),
                                "low platforms cannot carry the policy-cause narrative"});
      continue;
    }
    if (soc.n == 2) {
      GroupSet want = z.narr.groups == 0 ? with_group(0, 2) : with_group(0, 1);
      if (z.coalition != want)
        rep.violations.push_back({"support-shape", z, z.narr, Rat(0), Rat(0),
                                  "low coalition must be " + set_str(want) + " for narrative " +
                                      narrative_str(z.narr)});
      else if (z.narr.groups != 0)
        ++tribal_entries;
      continue;
    }
    if (!subset_of(z.narr.groups, cats.right)) {
      rep.violations.push_back({"support-shape", z, z.narr, Rat(0), Rat(0),
                                "narrative names groups inside " + set_str(cats.n_h) +
                                    "; supported scapegoat sets lie in " + set_str(cats.right)});
      continue;
    }
    GroupSet want = cats.n_l & ~z.narr.groups;
    if (z.coalition != want)
      rep.violations.push_back({"support-shape", z, z.narr, Rat(0), Rat(0),
                                "coalition for scapegoat set " + set_str(z.narr.groups) +
                                    " must be " + set_str(want)});
  }
  if (!h_found)
    rep.violations.push_back({"support-shape", h_plat, std::nullopt, Rat(0), Rat(0),
                              "the true platform " + platform_str(h_plat) + " carries no mass"});
  if (tribal_entries > 1)
    rep.violations.push_back(
        {"essential-simplicity", std::nullopt, std::nullopt, Rat(0), Rat(0),
         "tribal narratives are belief-equivalent; essential selection uses one representative"});

  // (b) the linear inequality system over the reduced classes.
  ReducedProblem rp = build_reduced_problem(soc, table.domain);
  Rat alpha = 0;
  {
    int idx = table.platform_index(h_plat);
    if (idx >= 0) alpha = candidate.mass[idx];
  }
  std::vector<Rat> entry_mass(rp.entries.size(), Rat(0));
  for (size_t i = 0; i < rp.entries.size(); ++i) {
    if (soc.n == 2 && rp.entries[i].s != 0) {
      // the folded tribal class: every nonempty narrative with coalition {1}
      for (GroupSet s : rp.merged_tribal_sets) {
        int idx = table.platform_index({Policy::kLow, with_group(0, 1), Narrative{false, s}});
        if (idx >= 0) entry_mass[i] += candidate.mass[idx];
      }
      continue;
    }
    int idx = table.platform_index(
        {Policy::kLow, rp.entries[i].coalition, Narrative{false, rp.entries[i].s}});
    if (idx >= 0) entry_mass[i] = candidate.mass[idx];
  }
  for (size_t i = 0; i < rp.entries.size(); ++i) {
    const ReducedEntry& e = rp.entries[i];
    BindingRow row;
    row.s = e.s;
    row.lhs = alpha * e.excess / rp.f_h_star;
    row.lhs.canonicalize();
    row.rhs = 0;
    for (size_t j = 0; j < rp.entries.size(); ++j)
      if (subset_of(e.s, rp.entries[j].s)) row.rhs += entry_mass[j];
    row.mass = entry_mass[i];
    row.required_binding = row.mass > 0;
    Narrative witness{false, e.s};
    if (row.lhs > row.rhs)
      rep.violations.push_back({"step6-inequality", std::nullopt, witness, row.lhs, row.rhs,
                                "demand exceeds matching mass for set " + set_str(e.s)});
    else if (row.required_binding && row.lhs != row.rhs)
      rep.violations.push_back({"step6-binding", std::nullopt, witness, row.lhs, row.rhs,
                                "positive mass on " + set_str(e.s) +
                                    " requires the inequality to bind"});
    rep.rows.push_back(row);
  }

  // (c) payoff dominance at the tremble limit, independently of (b): every
  // platform with a pinned payoff stays at or below the level, support sits
  // exactly on it. Unpinned cells never cap: some tremble sequence drives
  // their beliefs (hence every deviation payoff inside them) to zero.
  CellAgg cand = cell_aggregates(table, candidate.mass);
  PlatformDistribution unif_sigma = uniform_distribution(table);
  CellAgg unif = cell_aggregates(table, unif_sigma.mass);
  std::vector<std::optional<Rat>> u0(table.platforms.size());
  for (size_t p = 0; p < table.platforms.size(); ++p) {
    u0[p] = limit_payoff(table, cand, unif, p);
    if (u0[p] && *u0[p] > level)
      rep.violations.push_back({"payoff-dominance", table.platforms[p], std::nullopt, *u0[p],
                                level, "payoff above the equilibrium level"});
    if (candidate.mass[p] > 0 && (!u0[p] || *u0[p] != level))
      rep.violations.push_back({"support-payoff", table.platforms[p], std::nullopt,
                                u0[p] ? *u0[p] : Rat(0), level,
                                "supported platform off the equilibrium level"});
  }

  // (d) essentiality: a false narrative must strictly beat the true one on
  // the same (a,C); a narrative must strictly beat each of its subsets. An
  // unpinned alternative is suppressible to zero, so it never binds here.
  for (int p : support) {
    const Platform& z = table.platforms[p];
    if (!u0[p]) continue;  // already flagged above
    if (!(z.narr == Narrative{true, 0})) {
      int base = table.platform_index({z.a, z.coalition, Narrative{true, 0}});
      if (base >= 0 && u0[base] && !(*u0[base] < *u0[p]))
        rep.violations.push_back({"essential-policy-cause", z, Narrative{true, 0}, *u0[base],
                                  *u0[p], "the true narrative does at least as well on this (a,C)"});
    }
    if (z.narr.uses_policy) continue;
    for (GroupSet sub : table.domain.family) {
      if (!strict_subset(sub, z.narr.groups)) continue;
      int alt = table.platform_index({z.a, z.coalition, Narrative{false, sub}});
      if (alt >= 0 && u0[alt] && !(*u0[alt] < *u0[p]))
        rep.violations.push_back({"essential-simplicity", z, Narrative{false, sub}, *u0[alt],
                                  *u0[p],
                                  "dropping " + set_str(z.narr.groups & ~sub) +
                                      " from the narrative loses nothing"});
    }
  }

  // Sensitivity probe at eps and eps/10.
  rep.sensitivity.eps = opts.eps;
  for (int half = 0; half < 2; ++half) {
    Rat eps = half == 0 ? opts.eps : opts.eps / 10;
    Rat worst = 0;
    for (int p : support) {
      Rat u = mixture_payoff(table, cand, unif, eps, static_cast<size_t>(p));
      Rat dev = u > level ? (u - level) / level : (level - u) / level;
      if (dev > worst) worst = dev;
    }
    worst.canonicalize();
    bool pass = worst <= Rat(10000) * eps;
    if (half == 0) {
      rep.sensitivity.max_rel_dev_at_eps = worst;
      rep.sensitivity.pass_at_eps = pass;
    } else {
      rep.sensitivity.max_rel_dev_at_eps_tenth = worst;
      rep.sensitivity.pass_at_eps_tenth = pass;
    }
  }

  rep.passed = rep.violations.empty();
  return rep;
}

std::optional<std::vector<Rat>> solve_linear_system(std::vector<std::vector<Rat>> a,
                                                    std::vector<Rat> b) {
  size_t n = b.size();
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Rat factor = a[r][col] / a[col][col];
      for (size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  std::vector<Rat> x(n);
  for (size_t i = 0; i < n; ++i) {
    x[i] = b[i] / a[i][i];
    x[i].canonicalize();
  }
  return x;
}

EquilibriumResult oracle_solve(const Society& soc, const NarrativeDomain& domain, int bound) {
  validate_society(soc);
  ReducedProblem rp = build_reduced_problem(soc, domain);
  std::vector<size_t> eligible;  // indices into rp.entries with positive excess
  for (size_t i = 0; i < rp.entries.size(); ++i)
    if (rp.entries[i].excess > 0) eligible.push_back(i);
  if (eligible.size() > static_cast<size_t>(bound))
    fail(Err::kOracleBoundExceeded, "binding-set enumeration over " +
                                        std::to_string(eligible.size()) +
                                        " sets exceeds the bound " + std::to_string(bound));

  std::vector<std::vector<Rat>> survivors;  // weights per entry (sigma_bar / alpha)
  for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << eligible.size()); ++pick) {
    std::vector<size_t> binding;
    for (size_t k = 0; k < eligible.size(); ++k)
      if (pick >> k & 1) binding.push_back(eligible[k]);
    size_t m = binding.size();
    // unknowns: alpha, then sigma_bar over the binding sets
    std::vector<std::vector<Rat>> a(m + 1, std::vector<Rat>(m + 1, Rat(0)));
    std::vector<Rat> b(m + 1, Rat(0));
    for (size_t r = 0; r < m; ++r) {
      const ReducedEntry& e = rp.entries[binding[r]];
      a[r][0] = e.excess / rp.f_h_star;
      for (size_t c = 0; c < m; ++c)
        if (subset_of(e.s, rp.entries[binding[c]].s)) a[r][c + 1] = -1;
    }
    a[m][0] = 1;
    for (size_t c = 0; c < m; ++c) a[m][c + 1] = 1;
    b[m] = 1;
    auto sol = solve_linear_system(std::move(a), std::move(b));
    if (!sol) continue;
    const Rat& alpha = (*sol)[0];
    if (!(alpha > 0)) continue;
    bool ok = true;
    for (size_t r = 0; r < m && ok; ++r)
      if (!((*sol)[r + 1] > 0)) ok = false;  // strict: the binding set is the support
    if (!ok) continue;
    for (size_t k = 0; k < eligible.size() && ok; ++k) {
      if (pick >> k & 1) continue;
      const ReducedEntry& e = rp.entries[eligible[k]];
      Rat lhs = alpha * e.excess / rp.f_h_star;
      Rat rhs = 0;
      for (size_t c = 0; c < m; ++c)
        if (subset_of(e.s, rp.entries[binding[c]].s)) rhs += (*sol)[c + 1];
      if (lhs > rhs) ok = false;
    }
    if (!ok) continue;
    std::vector<Rat> weights(rp.entries.size(), Rat(0));
    for (size_t c = 0; c < m; ++c) {
      weights[binding[c]] = (*sol)[c + 1] / alpha;
      weights[binding[c]].canonicalize();
    }
    survivors.push_back(std::move(weights));
  }
  if (survivors.empty())
    fail(Err::kNoSolutionFound, "no binding set satisfies the full system");
  if (survivors.size() > 1)
    fail(Err::kMultipleSolutions,
         std::to_string(survivors.size()) + " binding sets satisfy the full system");
  return assemble_result(soc, rp, std::move(survivors.front()), "oracle");
}

}  // namespace narreq
