#pragma once

// Shared fixtures and deterministic instance generators for the test suite.

#include <random>
#include <string>
#include <vector>

#include "narreq/certifier.hpp"
#include "narreq/dynamics.hpp"
#include "narreq/io.hpp"
#include "narreq/micro.hpp"

namespace narreq {

inline Rat rat(const std::string& text) { return parse_rat(text, "fixture literal"); }

// Two-group society behind the damped-cycle payoff figure:
// f_1 = (h:1, l:2), f_2 = (h:1/2, l:3), q = 1/2. Equilibrium (1/3, 1/3, 1/3).
inline Society figure_society() {
  Society s;
  s.n = 2;
  s.q = Rat(1, 2);
  s.f_high = {Rat(1), Rat(1, 2)};
  s.f_low = {Rat(2), Rat(3)};
  s.domain_spec.kind = DomainSpec::Kind::kExplicit;
  s.domain_spec.sets = {make_set({1}, 2), make_set({2}, 2)};
  return s;
}

// Four-group worked example: f_1=(1,0), f_2=(1,3), f_3=f_4=(0,1), q=1/2,
// narrative family {{1},{2},{3},{4},{3,4}}. Equilibrium (2/5, 1/5, 1/5, 1/5).
inline Society four_group_society() {
  Society s;
  s.n = 4;
  s.q = Rat(1, 2);
  s.f_high = {Rat(1), Rat(1), Rat(0), Rat(0)};
  s.f_low = {Rat(0), Rat(3), Rat(1), Rat(1)};
  s.domain_spec.kind = DomainSpec::Kind::kExplicit;
  s.domain_spec.sets = {make_set({1}, 4), make_set({2}, 4), make_set({3}, 4), make_set({4}, 4),
                        make_set({3, 4}, 4)};
  return s;
}

inline NarrativeDomain domain_of(const Society& soc) { return expand_narrative_domain(soc); }

inline PlatformTable table_of(const Society& soc) {
  return enumerate_platforms(soc, domain_of(soc));
}

// --- deterministic random instances ---------------------------------------

inline long pick(std::mt19937_64& rng, long lo, long hi) {
  return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// mpq_class(num, den) keeps the raw pair; canonicalize before any arithmetic.
inline Rat rand_rat(std::mt19937_64& rng, long num_lo, long num_hi, long den_hi) {
  Rat r(pick(rng, num_lo, num_hi), pick(rng, 1, den_hi));
  r.canonicalize();
  return r;
}

inline Rat rand_pos_rat(std::mt19937_64& rng) { return rand_rat(rng, 1, 12, 4); }

inline Rat rand_q(std::mt19937_64& rng) {
  Rat q(pick(rng, 1, 4), 4);
  q.canonicalize();
  return q;
}

// n=2 with the required orderings f_1(h) > f_2(h), f_2(l) > f_1(l); the
// narrative family always holds both singletons.
inline Society random_two_group(std::mt19937_64& rng) {
  Society s;
  s.n = 2;
  s.q = rand_q(rng);
  Rat f1h = rand_pos_rat(rng);
  Rat shrink(pick(rng, 1, 3), 4);  // keeps f_2(h) strictly below f_1(h)
  shrink.canonicalize();
  Rat f2h = pick(rng, 0, 3) == 0 ? Rat(0) : Rat(f1h * shrink);
  Rat f1l = pick(rng, 0, 3) == 0 ? Rat(0) : rand_pos_rat(rng);
  Rat f2l = f1l + rand_pos_rat(rng);
  s.f_high = {f1h, f2h};
  s.f_low = {f1l, f2l};
  s.domain_spec.kind = DomainSpec::Kind::kExplicit;
  s.domain_spec.sets = {make_set({1}, 2), make_set({2}, 2)};
  return s;
}

// Three-category society with |left|,|center| <= 2 and |right| <= 3; the
// narrative family holds the categories plus random subsets of the right.
inline Society random_explicit_society(std::mt19937_64& rng) {
  Society s;
  int nl = static_cast<int>(pick(rng, 1, 2));
  int nc = static_cast<int>(pick(rng, 1, 2));
  int nr = static_cast<int>(pick(rng, 1, 3));
  s.n = nl + nc + nr;
  s.q = rand_q(rng);
  for (int i = 1; i <= s.n; ++i) {
    if (i <= nl) {
      s.f_high.push_back(rand_pos_rat(rng));
      s.f_low.push_back(Rat(0));
    } else if (i <= nl + nc) {
      s.f_high.push_back(rand_pos_rat(rng));
      s.f_low.push_back(rand_pos_rat(rng));
    } else {
      s.f_high.push_back(Rat(0));
      s.f_low.push_back(rand_pos_rat(rng));
    }
  }
  s.domain_spec.kind = DomainSpec::Kind::kExplicit;
  GroupSet right = 0;
  for (int i = nl + nc + 1; i <= s.n; ++i) right = with_group(right, i);
  GroupSet sub = right;
  do {  // every subset of the right category, kept with probability 1/2
    if (sub != 0 && (rng() & 1)) s.domain_spec.sets.push_back(sub);
    sub = (sub - 1) & right;
  } while (sub != right);
  if (nc > 1 && (rng() & 1))  // occasionally a strict center subset (mass 0)
    s.domain_spec.sets.push_back(with_group(0, nl + 1));
  return s;
}

// Raise center low-potentials until F(l, center) > F(h, N) holds, the
// standing assumption of the closed forms.
inline void enforce_low_advantage(Society& s) {
  Categories cats = s.categories();
  Rat f_h = s.potential(Policy::kHigh, cats.n_h);
  Rat f_lc = s.potential(Policy::kLow, cats.center);
  if (f_lc > f_h) return;
  int first_center = group_list(cats.center).front();
  s.f_low[first_center - 1] += f_h - f_lc + 1;
}

// Nested-partition society: depth K in {1,2}; for K=2 every base category
// splits into r parts, so categories need at least r groups each (n <= 10).
inline Society random_taxonomy_society(std::mt19937_64& rng) {
  Society s;
  int depth = static_cast<int>(pick(rng, 1, 2));
  int r = static_cast<int>(pick(rng, 2, 3));
  int lo = depth == 1 ? 1 : r;
  int hi = depth == 1 ? 3 : r + (r == 2 ? 1 : 0);
  int nl = static_cast<int>(pick(rng, lo, hi));
  int nc = static_cast<int>(pick(rng, lo, hi));
  int nr = static_cast<int>(pick(rng, lo, hi));
  s.n = nl + nc + nr;
  s.q = rand_q(rng);
  for (int i = 1; i <= s.n; ++i) {
    bool in_left = i <= nl;
    bool in_center = !in_left && i <= nl + nc;
    s.f_high.push_back(in_left || in_center ? rand_pos_rat(rng) : Rat(0));
    s.f_low.push_back(in_left ? Rat(0) : rand_pos_rat(rng));
  }
  s.domain_spec.kind = DomainSpec::Kind::kTaxonomy;
  if (depth == 2) s.domain_spec.split_counts = {r};
  enforce_low_advantage(s);
  return s;
}

// Every-subset-of-each-category domain with |right| <= 6.
inline Society random_rich_society(std::mt19937_64& rng) {
  Society s;
  int nl = static_cast<int>(pick(rng, 1, 2));
  int nc = static_cast<int>(pick(rng, 1, 2));
  int nr = static_cast<int>(pick(rng, 1, 6));
  s.n = nl + nc + nr;
  s.q = rand_q(rng);
  for (int i = 1; i <= s.n; ++i) {
    bool in_left = i <= nl;
    bool in_center = !in_left && i <= nl + nc;
    s.f_high.push_back(in_left || in_center ? rand_pos_rat(rng) : Rat(0));
    s.f_low.push_back(in_left ? Rat(0) : rand_pos_rat(rng));
  }
  s.domain_spec.kind = DomainSpec::Kind::kRich;
  enforce_low_advantage(s);
  return s;
}

}  // namespace narreq
