#include <algorithm>

#include "testlib.hpp"

using namespace narreq;

namespace {

PlatformDistribution random_distribution(const PlatformTable& table, std::mt19937_64& rng) {
  PlatformDistribution sigma;
  sigma.mass.assign(table.platforms.size(), Rat(0));
  Rat total(0);
  for (auto& m : sigma.mass) {
    m = Rat(pick(rng, 1, 9));  // full support keeps every belief defined
    total += m;
  }
  for (auto& m : sigma.mass) m /= total;
  return sigma;
}

}  // namespace

TEST_CASE("payoff level U*") {
  CHECK(u_star(figure_society()) == Rat(1, 2));      // q * f_1(h), two-group rule
  CHECK(u_star(four_group_society()) == Rat(1));     // q * F(h, N^h)
}

TEST_CASE("group support: worked cases and admissibility") {
  PlatformTable table = table_of(figure_society());
  PlatformDistribution u = uniform_distribution(table);
  Platform h_top = table.platforms[table.h_top];
  auto s1 = group_support(table, u, h_top, 1);
  REQUIRE(s1.has_value());
  CHECK(*s1 == table.soc.q * table.soc.f(Policy::kHigh, 1));

  Platform low_true{Policy::kLow, make_set({2}, 2), Narrative{true, 0}};
  auto s2 = group_support(table, u, low_true, 2);
  REQUIRE(s2.has_value());
  CHECK(*s2 == 0);  // citing the policy under l pins the belief to zero

  CHECK_THROWS_AS(group_support(table, u, h_top, 2), Error);  // 2 not in {1}
  try {
    group_support(table, u, h_top, 2);
  } catch (const Error& e) {
    CHECK(e.kind() == Err::kGroupNotInCoalition);
  }
}

TEST_CASE("payoff factorizes as belief times aggregate potential") {
  PlatformTable table = table_of(four_group_society());
  std::mt19937_64 rng(5);
  for (int round = 0; round < 10; ++round) {
    PlatformDistribution sigma = random_distribution(table, rng);
    for (const Platform& z : table.platforms) {
      auto u = platform_payoff(table, sigma, z);
      auto belief = conditional_outcome_probability(table, sigma, table.soc.q,
                                                    signature_of(z.narr, z.a, z.coalition));
      REQUIRE(u.has_value());
      REQUIRE(belief.has_value());
      CHECK(*u == *belief * table.soc.potential(z.a, z.coalition));
      CHECK(*u >= 0);
      Rat sum(0);  // payoff decomposes over coalition members
      for (int i : group_list(z.coalition)) sum += *group_support(table, sigma, z, i);
      CHECK(sum == *u);
    }
  }
}

TEST_CASE("the true high platform's payoff is constant in sigma") {
  PlatformTable table = table_of(four_group_society());
  std::mt19937_64 rng(7);
  Rat level = u_star(table.soc);
  for (int round = 0; round < 10; ++round) {
    PlatformDistribution sigma = random_distribution(table, rng);
    auto u = platform_payoff(table, sigma, table.platforms[table.h_top]);
    REQUIRE(u.has_value());
    CHECK(*u == level);
  }
}

TEST_CASE("equilibrium payoffs of the worked examples") {
  PlatformTable table = table_of(figure_society());
  EquilibriumResult r = solve(table.soc, table.domain);
  PlatformDistribution sigma = distribution_from_result(table, r);
  Rat q = table.soc.q;

  Platform denial{Policy::kLow, make_set({2}, 2), Narrative{false, 0}};
  CHECK(*platform_payoff(table, sigma, denial) == q * r.alpha * table.soc.f(Policy::kLow, 2));
  Platform tribal{Policy::kLow, make_set({1}, 2), Narrative{false, make_set({1}, 2)}};
  Rat tribal_mass = sigma.mass[table.platform_index(tribal)];
  CHECK(*platform_payoff(table, sigma, tribal) ==
        q * (r.alpha / (r.alpha + tribal_mass)) * table.soc.f(Policy::kLow, 1));
  // every supported platform sits exactly at U* = q * f_1(h) = 1/2
  for (int p : sigma.support()) {
    auto u = platform_payoff(table, sigma, table.platforms[p]);
    REQUIRE(u.has_value());
    CHECK(*u == Rat(1, 2));
  }
}

TEST_CASE("dominant set equals brute-force argmax and orders canonically") {
  PlatformTable table = table_of(figure_society());
  std::mt19937_64 rng(13);
  for (int round = 0; round < 10; ++round) {
    PlatformDistribution sigma = random_distribution(table, rng);
    PayoffReport rep = payoff_report(table, sigma);
    std::vector<int> brute;
    Rat best(-1);
    for (size_t p = 0; p < table.platforms.size(); ++p) {
      REQUIRE(rep.payoff[p].has_value());
      if (*rep.payoff[p] > best) best = *rep.payoff[p];
    }
    for (size_t p = 0; p < table.platforms.size(); ++p)
      if (*rep.payoff[p] == best) brute.push_back(static_cast<int>(p));
    CHECK(dominant_set(table, sigma) == brute);
    CHECK(rep.argmax == brute);
    CHECK(rep.max_payoff == best);
    CHECK(std::is_sorted(brute.begin(), brute.end()));
  }
}

TEST_CASE("uniform start: low shouting wins, truth wins among high platforms") {
  PlatformTable table = table_of(figure_society());
  PlatformDistribution u = uniform_distribution(table);
  PayoffReport rep = payoff_report(table, u);
  // the three belief-equivalent (l,{2},non-policy) platforms tie on top
  std::vector<int> want = {
      table.platform_index({Policy::kLow, make_set({2}, 2), Narrative{false, 0}}),
      table.platform_index({Policy::kLow, make_set({2}, 2), Narrative{false, make_set({1}, 2)}}),
      table.platform_index({Policy::kLow, make_set({2}, 2), Narrative{false, make_set({2}, 2)}})};
  std::sort(want.begin(), want.end());
  CHECK(rep.argmax == want);
  CHECK(rep.max_payoff == Rat(3, 4));
  // among high platforms the fully-believed (true,S) cells tie at q*f_1(h);
  // canonical order puts the plain policy-cause narrative first
  Rat best_h(-1);
  std::vector<int> top_h;
  for (size_t p = 0; p < table.platforms.size(); ++p) {
    if (table.platforms[p].a != Policy::kHigh) continue;
    Rat v = *rep.payoff[p];
    if (v > best_h) {
      best_h = v;
      top_h.assign(1, static_cast<int>(p));
    } else if (v == best_h) {
      top_h.push_back(static_cast<int>(p));
    }
  }
  std::vector<int> want_h = {
      table.platform_index({Policy::kHigh, make_set({1}, 2), Narrative{true, 0}}),
      table.platform_index({Policy::kHigh, make_set({1}, 2), Narrative{true, make_set({1}, 2)}}),
      table.platform_index({Policy::kHigh, make_set({1}, 2), Narrative{true, make_set({2}, 2)}})};
  std::sort(want_h.begin(), want_h.end());
  CHECK(top_h == want_h);
  CHECK(top_h.front() == table.h_top);
  CHECK(best_h == Rat(1, 2));
}

TEST_CASE("a history of low dominants still leaves the truth on top") {
  PlatformTable table = table_of(figure_society());
  // nearly all mass on one low platform, a sliver of uniform keeps full support
  PlatformDistribution sigma = uniform_distribution(table);
  int low = table.platform_index({Policy::kLow, make_set({2}, 2), Narrative{false, 0}});
  for (auto& m : sigma.mass) m /= 10000;
  sigma.mass[low] += 1 - Rat(1, 10000);
  sigma.validate_normalized();
  PayoffReport rep = payoff_report(table, sigma);
  CHECK(std::find(rep.argmax.begin(), rep.argmax.end(), table.h_top) != rep.argmax.end());
  CHECK(rep.max_payoff == u_star(table.soc));
}

TEST_CASE("q-scaling and f-scaling leave the argmax set unchanged") {
  Society base = four_group_society();
  PlatformTable t0 = table_of(base);
  std::mt19937_64 rng(17);
  PlatformDistribution sigma = random_distribution(t0, rng);

  Society q_scaled = base;
  q_scaled.q = base.q / 5;
  PlatformTable t1 = table_of(q_scaled);
  Society f_scaled = base;
  for (auto& v : f_scaled.f_high) v *= Rat(7, 3);
  for (auto& v : f_scaled.f_low) v *= Rat(7, 3);
  PlatformTable t2 = table_of(f_scaled);
  REQUIRE(t1.platforms.size() == t0.platforms.size());
  REQUIRE(t2.platforms.size() == t0.platforms.size());

  PayoffReport r0 = payoff_report(t0, sigma);
  PayoffReport r1 = payoff_report(t1, sigma);
  PayoffReport r2 = payoff_report(t2, sigma);
  CHECK(r1.argmax == r0.argmax);
  CHECK(r2.argmax == r0.argmax);
  CHECK(r1.max_payoff == r0.max_payoff / 5);
  CHECK(r2.max_payoff == r0.max_payoff * Rat(7, 3));
  for (size_t p = 0; p < t0.platforms.size(); ++p) {
    CHECK(*r1.payoff[p] == *r0.payoff[p] / 5);
    CHECK(*r2.payoff[p] == *r0.payoff[p] * Rat(7, 3));
  }
}

TEST_CASE("payoff report from counters equals the from-scratch report") {
  PlatformTable table = table_of(four_group_society());
  HistoryCounters h = HistoryCounters::init(table, uniform_distribution(table));
  std::mt19937_64 rng(29);
  for (int step = 0; step < 50; ++step)
    h.record_dominant(static_cast<int>(pick(rng, 0, static_cast<long>(table.platforms.size()) - 1)));
  PlatformDistribution scratch;
  scratch.mass.resize(table.platforms.size());
  for (size_t p = 0; p < table.platforms.size(); ++p)
    scratch.mass[p] =
        (h.initial().mass[p] + Rat(static_cast<long>(h.dominant_count(static_cast<int>(p))))) /
        Rat(static_cast<long>(h.t()));
  PayoffReport a = payoff_report(h);
  PayoffReport b = payoff_report(table, scratch);
  CHECK(a.argmax == b.argmax);
  CHECK(a.max_payoff == b.max_payoff);
  for (size_t p = 0; p < table.platforms.size(); ++p) CHECK(*a.payoff[p] == *b.payoff[p]);
}
