#include "testlib.hpp"

using namespace narreq;

namespace {

// The Prop-1 equilibrium of the figure society as an explicit mass vector.
PlatformDistribution figure_equilibrium(const PlatformTable& table) {
  PlatformDistribution sigma;
  sigma.mass.assign(table.platforms.size(), Rat(0));
  auto put = [&](Policy a, std::vector<int> c, Narrative narr, const Rat& m) {
    int idx = table.platform_index({a, make_set(c, table.soc.n), narr});
    REQUIRE(idx >= 0);
    sigma.mass[idx] = m;
  };
  put(Policy::kHigh, {1}, Narrative{true, 0}, Rat(1, 3));
  put(Policy::kLow, {2}, Narrative{false, 0}, Rat(1, 3));
  put(Policy::kLow, {1}, Narrative{false, make_set({1}, 2)}, Rat(1, 3));
  return sigma;
}

}  // namespace

TEST_CASE("distribution validation") {
  PlatformTable table = table_of(figure_society());
  PlatformDistribution u = uniform_distribution(table);
  u.validate_normalized();
  CHECK(u.support().size() == 24);
  PlatformDistribution bad = u;
  bad.mass[0] += Rat(1, 100);
  CHECK_THROWS_AS(bad.validate_normalized(), Error);
  bad = u;
  bad.mass[0] = -u.mass[0];
  CHECK_THROWS_AS(bad.validate_normalized(), Error);
}

TEST_CASE("conditional probabilities match the worked cases") {
  PlatformTable table = table_of(figure_society());
  Rat q = table.soc.q;
  PlatformDistribution sigma = figure_equilibrium(table);

  // the true narrative under the high policy reveals the policy: belief q
  auto truth = conditional_outcome_probability(
      table, sigma, q, signature_of(Narrative{true, 0}, Policy::kHigh, make_set({1}, 2)));
  REQUIRE(truth.has_value());
  CHECK(*truth == q);

  // the true narrative under the low policy pins the belief to zero
  auto low = conditional_outcome_probability(
      table, sigma, q, signature_of(Narrative{true, 0}, Policy::kLow, make_set({2}, 2)));
  REQUIRE(low.has_value());
  CHECK(*low == 0);

  // the denialist narrative sees the h-share of total mass
  auto denial = conditional_outcome_probability(
      table, sigma, q, signature_of(Narrative{false, 0}, Policy::kLow, make_set({2}, 2)));
  REQUIRE(denial.has_value());
  CHECK(*denial == q * Rat(1, 3));

  // tribal narrative {1}, member realization: q * (1/3) / (1/3 + 1/3) = q/2
  auto tribal = conditional_outcome_probability(
      table, sigma, q,
      signature_of(Narrative{false, make_set({1}, 2)}, Policy::kLow, make_set({1}, 2)));
  REQUIRE(tribal.has_value());
  CHECK(*tribal == q / 2);
}

TEST_CASE("zero matching mass is Undefined, not zero") {
  PlatformTable table = table_of(figure_society());
  PlatformDistribution point;
  point.mass.assign(table.platforms.size(), Rat(0));
  point.mass[table.h_top] = Rat(1);
  auto none = conditional_outcome_probability(
      table, point, table.soc.q,
      signature_of(Narrative{false, make_set({2}, 2)}, Policy::kLow, make_set({2}, 2)));
  CHECK(!none.has_value());
}

TEST_CASE("beliefs stay within [0, q] under random distributions") {
  PlatformTable table = table_of(four_group_society());
  std::mt19937_64 rng(11);
  for (int round = 0; round < 20; ++round) {
    PlatformDistribution sigma;
    sigma.mass.assign(table.platforms.size(), Rat(0));
    Rat total(0);
    for (auto& m : sigma.mass) {
      m = Rat(pick(rng, 0, 6));
      total += m;
    }
    if (total == 0) continue;
    for (auto& m : sigma.mass) m /= total;
    for (const Platform& z : table.platforms) {
      auto p = conditional_outcome_probability(table, sigma, table.soc.q,
                                               signature_of(z.narr, z.a, z.coalition));
      if (!p.has_value()) continue;
      CHECK(*p >= 0);
      CHECK(*p <= table.soc.q);
    }
  }
}

TEST_CASE("counter initialization requires full support") {
  PlatformTable table = table_of(figure_society());
  PlatformDistribution u = uniform_distribution(table);
  HistoryCounters h = HistoryCounters::init(table, u);
  CHECK(h.t() == 1);
  PlatformDistribution hole = u;
  hole.mass[3] += hole.mass[5];
  hole.mass[5] = 0;
  CHECK_THROWS_AS(HistoryCounters::init(table, hole), Error);
  try {
    HistoryCounters::init(table, hole);
  } catch (const Error& e) {
    CHECK(e.kind() == Err::kNotFullSupport);
  }
}

TEST_CASE("aggregates partition all probability per narrative") {
  PlatformTable table = table_of(four_group_society());
  HistoryCounters h = HistoryCounters::init(table, uniform_distribution(table));
  h.record_dominant(table.h_top);
  h.record_dominant(0);
  for (size_t n = 0; n < table.narratives.size(); ++n) {
    Rat total(0);
    for (size_t c = 0; c < table.cells.size(); ++c) {
      if (table.cells[c].narrative != static_cast<int>(n)) continue;
      CHECK(h.mass_high(static_cast<int>(c)) <= h.mass_total(static_cast<int>(c)));
      total += h.mass_total(static_cast<int>(c));
    }
    CHECK(total == 1);
  }
}

TEST_CASE("recording applies the 1/(t+1) update") {
  PlatformTable table = table_of(figure_society());
  int z = table.h_top;
  int zp = z == 0 ? 1 : 0;
  PlatformDistribution init;
  init.mass.assign(table.platforms.size(), Rat(1, 88));  // 22 platforms at 1/88
  init.mass[z] = Rat(1, 2);
  init.mass[zp] = Rat(1, 4);
  init.validate_normalized();
  HistoryCounters h = HistoryCounters::init(table, init);
  h.record_dominant(z);
  CHECK(h.t() == 2);
  CHECK(h.platform_mass(z) == Rat(3, 4));   // 1/2 + (1/2)(1/2)
  CHECK(h.platform_mass(zp) == Rat(1, 8));  // (1/2)(1/4)
}

TEST_CASE("incremental aggregates equal from-scratch recomputation") {
  for (const Society& soc : {figure_society(), four_group_society()}) {
    PlatformTable table = table_of(soc);
    PlatformDistribution init = uniform_distribution(table);
    HistoryCounters h = HistoryCounters::init(table, init);
    std::mt19937_64 rng(23);
    for (int step = 1; step <= 200; ++step) {
      h.record_dominant(static_cast<int>(pick(rng, 0, static_cast<long>(table.platforms.size()) - 1)));
      if (step % 40 != 0 && step != 1) continue;
      // scratch distribution: (sigma_1 + sum of dominant point masses) / t
      PlatformDistribution scratch;
      scratch.mass.resize(table.platforms.size());
      for (size_t p = 0; p < table.platforms.size(); ++p)
        scratch.mass[p] = (init.mass[p] + Rat(static_cast<long>(h.dominant_count(static_cast<int>(p))))) /
                          Rat(static_cast<long>(h.t()));
      scratch.validate_normalized();
      for (size_t p = 0; p < table.platforms.size(); ++p) {
        CHECK(h.platform_mass(static_cast<int>(p)) == scratch.mass[p]);
        const Platform& z = table.platforms[p];
        auto direct = conditional_outcome_probability(table, scratch, soc.q,
                                                      signature_of(z.narr, z.a, z.coalition));
        REQUIRE(direct.has_value());  // full support throughout
        CHECK(h.platform_belief(static_cast<int>(p)) == *direct);
      }
    }
  }
}

TEST_CASE("belief drift directions after one recorded dominant") {
  PlatformTable table = table_of(figure_society());
  HistoryCounters h = HistoryCounters::init(table, uniform_distribution(table));
  std::vector<Rat> before(table.platforms.size());
  for (size_t p = 0; p < table.platforms.size(); ++p)
    before[p] = h.platform_belief(static_cast<int>(p));

  SUBCASE("high dominant raises matching low-platform beliefs strictly") {
    h.record_dominant(table.h_top);
    const Platform& dom = table.platforms[table.h_top];
    for (size_t p = 0; p < table.platforms.size(); ++p) {
      const Platform& z = table.platforms[p];
      if (z.a != Policy::kLow) continue;
      Rat after = h.platform_belief(static_cast<int>(p));
      bool match = signature_value(z.narr, z.a, z.coalition) ==
                   signature_value(z.narr, dom.a, dom.coalition);
      if (match)
        CHECK(after > before[p]);
      else
        CHECK(after == before[p]);
    }
  }

  SUBCASE("low dominant weakly lowers low-platform beliefs, strictly iff matching") {
    int low_dom = table.platform_index(
        {Policy::kLow, make_set({2}, 2), Narrative{false, 0}});
    REQUIRE(low_dom >= 0);
    h.record_dominant(low_dom);
    const Platform& dom = table.platforms[low_dom];
    for (size_t p = 0; p < table.platforms.size(); ++p) {
      const Platform& z = table.platforms[p];
      if (z.a != Policy::kLow) continue;
      Rat after = h.platform_belief(static_cast<int>(p));
      bool match = signature_value(z.narr, z.a, z.coalition) ==
                   signature_value(z.narr, dom.a, dom.coalition);
      CHECK(after <= before[p]);
      if (match && before[p] > 0) CHECK(after < before[p]);
      if (!match) CHECK(after == before[p]);
    }
  }
}
