#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace gg_test;

namespace {

GaugedMapDatum segment_datum(long long dP, long long du, std::initializer_list<std::size_t> s = {1, 2}) {
  return GaugedMapDatum(ws1({-1, 1}), {dP}, du, sup(s, 2));
}

}  // namespace

TEST(MundetWeight, Examples) {
  auto d = segment_datum(1, 0);
  EXPECT_EQ(mundet_weight(d, Rational(1), vec({0})), Rational(0));
  // −(dP,λ) + k·min((θ−μ_i)(λ))
  EXPECT_EQ(mundet_weight(d, Rational(1), vec({1})), Rational(-2));
  EXPECT_EQ(mundet_weight(d, Rational(1), vec({-1})), Rational(0));
  EXPECT_EQ(mundet_weight(d, Rational(1, 2), OneParameterSubgroup{{-1}}), Rational(1, 2));
  EXPECT_THROW(mundet_weight(d, Rational(0), vec({1})), input_error);
  EXPECT_THROW(mundet_weight(d, Rational(-1), vec({1})), input_error);
}

TEST(MundetClassify, Examples) {
  auto d = segment_datum(1, 1);
  auto at1 = mundet_classify(d, Rational(1));
  EXPECT_TRUE(at1.semistable);
  EXPECT_FALSE(at1.stable);
  auto at2 = mundet_classify(d, Rational(2));
  EXPECT_TRUE(at2.semistable && at2.polystable && at2.stable);
  EXPECT_FALSE(mundet_classify(d, Rational(1, 2)).semistable);

  // dP = 0 reduces to the point criterion at every k.
  auto z = segment_datum(0, 0);
  for (auto k : {Rational(1, 3), Rational(1), Rational(7)}) EXPECT_TRUE(mundet_classify(z, k).semistable);
}

TEST(MundetClassify, AgreesWithWeightSignOnBox) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t r = uniform(rng, 1, 2), m = uniform(rng, 1, 4);
    auto ws = random_ws(rng, r, m, 3);
    std::vector<long long> dP(r);
    for (auto& x : dP) x = uniform(rng, -3, 3);
    GaugedMapDatum d(ws, dP, 0, Support::from_mask(uniform(rng, 1, (1 << m) - 1), m));
    for (auto k : {Rational(1, 2), Rational(1), Rational(2), Rational(3)}) {
      bool semistable = mundet_classify(d, k).semistable;
      long long radius = std::max(1LL, mundet_witness_radius(d, k));
      bool any_positive = false;
      for (const auto& l : lattice_box(r, radius))
        if (mundet_weight(d, k, to_rational(l)).sign() > 0) any_positive = true;
      EXPECT_EQ(semistable, !any_positive);
    }
  }
}

TEST(LargeK, Examples) {
  // θ interior.
  auto inside = large_k_semistable(segment_datum(3, 0));
  EXPECT_TRUE(inside.semistable);
  EXPECT_EQ(inside.threshold, Rational(3));
  // θ outside.
  EXPECT_FALSE(large_k_semistable(GaugedMapDatum(ws1({1, 2}), {1}, 0, sup({1, 2}, 2))).semistable);
  // θ on the boundary: one-sided membership of θ − t·dP.
  EXPECT_FALSE(large_k_semistable(GaugedMapDatum(ws1({0, 1}), {1}, 0, sup({1, 2}, 2))).semistable);
  auto inward = large_k_semistable(GaugedMapDatum(ws1({0, 1}), {-1}, 0, sup({1, 2}, 2)));
  EXPECT_TRUE(inward.semistable);
  EXPECT_EQ(inward.threshold, Rational(1));
  // dP = 0: point criterion, no walls.
  auto flat = large_k_semistable(segment_datum(0, 0));
  EXPECT_TRUE(flat.semistable);
  EXPECT_EQ(flat.threshold, Rational(0));
}

TEST(LargeK, MatchesClassificationBeyondThreshold) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t r = uniform(rng, 1, 2), m = uniform(rng, 1, 4);
    auto ws = random_ws(rng, r, m, 2);
    std::vector<long long> dP(r);
    for (auto& x : dP) x = uniform(rng, -2, 2);
    GaugedMapDatum d(ws, dP, 0, Support::from_mask(uniform(rng, 1, (1 << m) - 1), m));
    auto v = large_k_semistable(d);
    Rational beyond = v.threshold + Rational(1);
    EXPECT_EQ(v.semistable, mundet_classify(d, beyond).semistable);
    EXPECT_EQ(v.semistable, mundet_classify(d, beyond * Rational(10)).semistable);
  }
}

TEST(Energy, Examples) {
  GaugedMapDatum a(ws1({0}, 1), {2}, 3, sup({1}, 1));
  EXPECT_EQ(energy(a), Rational(5));
  EXPECT_EQ(energy(segment_datum(0, 0)), Rational(0));
  auto d = segment_datum(1, 1);
  EXPECT_TRUE(mundet_classify(d, Rational(1)).semistable);
  EXPECT_EQ(energy(d), Rational(1));
}

TEST(Energy, QuantizedForIntegralData) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    auto ws = random_ws(rng, 2, 3, 3);
    std::vector<long long> dP{uniform(rng, -4, 4), uniform(rng, -4, 4)};
    GaugedMapDatum d(ws, dP, uniform(rng, -4, 4), Support::all(3));
    EXPECT_TRUE(energy(d).is_integer());
    // Scaling the weight lattice by 1/k gives energies in (1/k)Z.
    long long k = uniform(rng, 1, 4);
    WeightSystem scaled_ws(2, ws.weights, scale(ws.theta, Rational(1, k)));
    GaugedMapDatum ds(scaled_ws, dP, uniform(rng, -4, 4), Support::all(3));
    EXPECT_TRUE((energy(ds) * Rational(k)).is_integer());
  }
}

TEST(DegreeFeasible, Examples) {
  auto z = degree_feasible(segment_datum(0, 0));
  EXPECT_TRUE(z.feasible);
  EXPECT_EQ(z.slacks, vec({0, 0}));
  auto f = degree_feasible(segment_datum(1, 1));
  EXPECT_TRUE(f.feasible);
  EXPECT_EQ(f.slacks, vec({0, 2}));
  auto bad = degree_feasible(segment_datum(1, 0));
  EXPECT_FALSE(bad.feasible);
  EXPECT_EQ(bad.slacks[0], Rational(-1));
}

TEST(Walls, Examples) {
  auto w = walls(ws1({-1, 1}), sup({1, 2}, 2), {1});
  EXPECT_EQ(w.walls, std::vector<Rational>{Rational(1)});
  EXPECT_TRUE(w.degenerate_supports.empty());
  EXPECT_TRUE(walls(ws1({-1, 1}), sup({1, 2}, 2), {0}).walls.empty());
  WeightSystem tri(2, {vec({0, 0}), vec({2, 0}), vec({0, 2})}, vecq({"1/2", "1/2"}));
  EXPECT_EQ(walls(tri, Support::all(3), {1, 1}).walls, std::vector<Rational>{Rational(2)});
  auto two = walls(ws1({-2, -1, 1}), sup({1, 2}, 3), {1});
  EXPECT_EQ(two.walls, (std::vector<Rational>{Rational(1, 2), Rational(1)}));
}

TEST(Walls, DegenerateSupportIsFlagged) {
  WeightSystem ws(2, {vec({-1, 0}), vec({1, 0})}, vec({0, 0}));
  auto w = walls(ws, Support::all(2), {1, 0});
  EXPECT_EQ(w.walls, std::vector<Rational>{Rational(1)});
  ASSERT_EQ(w.degenerate_supports.size(), 1u);
}

TEST(Walls, ClosedConditionPattern) {
  std::mt19937_64 rng(24);
  int seen = 0;
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t r = uniform(rng, 1, 2), m = uniform(rng, 1, 4);
    auto ws = random_ws(rng, r, m, 2);
    std::vector<long long> dP(r);
    for (auto& x : dP) x = uniform(rng, -2, 2);
    auto s = Support::from_mask(uniform(rng, 1, (1 << m) - 1), m);
    auto w = walls(ws, s, dP).walls;
    GaugedMapDatum d(ws, dP, 0, s);
    for (std::size_t i = 0; i < w.size(); ++i) {
      Rational gap = w[i] / Rational(4);
      if (i > 0) gap = std::min(gap, (w[i] - w[i - 1]) / Rational(2));
      if (i + 1 < w.size()) gap = std::min(gap, (w[i + 1] - w[i]) / Rational(2));
      bool before = mundet_classify(d, w[i] - gap).semistable;
      bool at = mundet_classify(d, w[i]).semistable;
      bool after = mundet_classify(d, w[i] + gap).semistable;
      EXPECT_TRUE(at);
      EXPECT_TRUE(!before || !after);
      ++seen;
    }
    // The verdict is constant between walls: check one interior point per gap.
    std::vector<Rational> edges{Rational(0)};
    edges.insert(edges.end(), w.begin(), w.end());
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      Rational a = edges[i] + (edges[i + 1] - edges[i]) / Rational(3);
      Rational b = edges[i] + (edges[i + 1] - edges[i]) * Rational(2, 3);
      EXPECT_EQ(mundet_classify(d, a).semistable, mundet_classify(d, b).semistable);
    }
  }
  EXPECT_GT(seen, 30);
}

TEST(QuotDimension, Examples) {
  // All weights 1, θ = 1: m·(dP + du + 1) − 1.
  for (std::size_t m = 1; m <= 4; ++m) {
    for (long long dP = 0; dP <= 3; ++dP) {
      for (long long du = 0; du <= 2; ++du) {
        std::vector<RationalVector> w(m, vec({1}));
        GaugedMapDatum d(WeightSystem(1, w, vec({1})), {dP}, du, Support::all(m));
        EXPECT_EQ(quot_dimension(d, 0), static_cast<long long>(m) * (dP + du + 1) - 1);
      }
    }
  }
  GaugedMapDatum two(WeightSystem(1, {vec({1}), vec({1})}, vec({1})), {0}, 0, Support::all(2));
  EXPECT_EQ(quot_dimension(two, 0), 1);
  GaugedMapDatum three(WeightSystem(1, {vec({1}), vec({1}), vec({1})}, vec({1})), {1}, 1, Support::all(3));
  EXPECT_EQ(quot_dimension(three, 1), 5);
}

TEST(QuotDimension, RejectsRiemannRochViolation) {
  GaugedMapDatum d(WeightSystem(1, {vec({1})}, vec({1})), {0}, 0, Support::all(1));
  EXPECT_THROW(quot_dimension(d, 1), input_error);
  EXPECT_THROW(quot_dimension(d, -1), input_error);
}

TEST(EnumerateBounded, ZeroEnergyGivesTrivialMaps) {
  auto list = enumerate_bounded(ws1({-1, 1}), EnergyBudget(Rational(0)), AtK{Rational(1)});
  ASSERT_FALSE(list.empty());
  for (const auto& d : list) {
    EXPECT_EQ(d.dP, std::vector<long long>{0});
    EXPECT_EQ(d.du, 0);
  }
}

TEST(EnumerateBounded, LargeKMatchesNaiveDoubleBoxScan) {
  auto ws = ws1({-1, 1});
  auto list = enumerate_bounded(ws, EnergyBudget(Rational(2)), LargeK{});
  ASSERT_FALSE(list.empty());
  std::set<std::tuple<std::uint64_t, long long, long long>> got;
  for (const auto& d : list) {
    EXPECT_GE(energy(d), Rational(0));
    EXPECT_LE(energy(d), Rational(2));
    EXPECT_EQ(Rational(d.du), energy(d));
    got.insert({d.support.mask(), d.dP[0], d.du});
  }
  // Naive scan over a box twice the size of any plausible solution.
  std::set<std::tuple<std::uint64_t, long long, long long>> naive;
  for (const auto& s : all_supports(2))
    for (long long dP = -8; dP <= 8; ++dP)
      for (long long du = -8; du <= 8; ++du) {
        GaugedMapDatum d(ws, {dP}, du, s);
        Rational e = energy(d);
        if (e.sign() < 0 || e > Rational(2)) continue;
        if (!degree_feasible(d).feasible || !large_k_semistable(d).semistable) continue;
        naive.insert({s.mask(), dP, du});
      }
  EXPECT_EQ(got, naive);
}

TEST(EnumerateBounded, AtKMatchesNaiveScan) {
  std::mt19937_64 rng(25);
  int instances = 0;
  while (instances < 5) {
    auto ws = random_ws(rng, 2, 4, 2);
    try {
      require_bounded_family(ws);
    } catch (const infeasible_error&) {
      continue;
    }
    ++instances;
    for (auto k : {Rational(1), Rational(2)}) {
      auto list = enumerate_bounded(ws, EnergyBudget(Rational(3)), AtK{k});
      std::set<std::tuple<std::uint64_t, long long, long long, long long>> got, naive;
      for (const auto& d : list) got.insert({d.support.mask(), d.dP[0], d.dP[1], d.du});
      for (const auto& s : all_supports(ws.size()))
        for (long long a = -10; a <= 10; ++a)
          for (long long b = -10; b <= 10; ++b)
            for (long long du = -25; du <= 25; ++du) {
              Rational e = ws.theta[0] * Rational(a) + ws.theta[1] * Rational(b) + Rational(du);
              if (e.sign() < 0 || e > Rational(3)) continue;
              GaugedMapDatum d(ws, {a, b}, du, s);
              if (!degree_feasible(d).feasible || !mundet_classify(d, k).semistable) continue;
              naive.insert({s.mask(), a, b, du});
            }
      EXPECT_EQ(got, naive);
    }
  }
}

TEST(EnumerateBounded, RejectsUnboundedFamilies) {
  // θ on the boundary of the full hull: semistable but not stable.
  EXPECT_THROW(enumerate_bounded(ws1({0, 1}), EnergyBudget(Rational(1)), LargeK{}), infeasible_error);
  EXPECT_THROW(EnergyBudget(Rational(-1)), input_error);
}

TEST(EnumerateBounded, ChainHoldsAtBaseLinearization) {
  auto ws = ws1({-1, 2});
  for (const auto& d : enumerate_bounded(ws, EnergyBudget(Rational(6)), AtK{Rational(1)})) {
    auto dv = d.degree_dual();
    Rational middle = dot(sub(ws.theta, dv), d.degree()) + Rational(d.du);
    EXPECT_GE(energy(d), middle);
    EXPECT_GE(middle, Rational(0));
  }
}

TEST(EnumerateBounded, DeterministicAcrossThreadCounts) {
  WeightSystem ws(2, {vec({1, 0}), vec({0, 1}), vec({-1, -1}), vec({2, -1})}, vec({0, 0}));
  setenv("GITGAUGE_THREADS", "1", 1);
  auto serial = enumerate_bounded(ws, EnergyBudget(Rational(3)), AtK{Rational(1)});
  setenv("GITGAUGE_THREADS", "4", 1);
  auto parallel = enumerate_bounded(ws, EnergyBudget(Rational(3)), AtK{Rational(1)});
  unsetenv("GITGAUGE_THREADS");
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].support, parallel[i].support);
    EXPECT_EQ(serial[i].dP, parallel[i].dP);
    EXPECT_EQ(serial[i].du, parallel[i].du);
  }
}
