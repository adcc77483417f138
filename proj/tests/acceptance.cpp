// Acceptance run: nine seeded criteria, one PASS/FAIL line each.
// Exit status is nonzero when any criterion fails or exceeds its time limit.

#include "gitgauge/gitgauge.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace gitgauge;

namespace {

// Time limits in seconds.
constexpr double kLimitOracle = 60;
constexpr double kLimitQuot = 1;
constexpr double kLimitEnergy = 30;
constexpr double kLimitWalls = 60;
constexpr double kLimitCounts = 1;
constexpr double kLimitDimInvariant = 120;
constexpr double kLimitTropical = 5;
constexpr double kLimitKN = 60;
constexpr double kLimitTreeOracle = 60;

constexpr std::uint64_t kSeed = 20240611;

long long uniform(std::mt19937_64& rng, long long lo, long long hi) {
  return std::uniform_int_distribution<long long>(lo, hi)(rng);
}

WeightSystem random_ws(std::mt19937_64& rng, std::size_t r, std::size_t m, long long bound, bool half_theta) {
  std::vector<RationalVector> w(m, RationalVector(r));
  for (auto& mu : w)
    for (auto& x : mu) x = uniform(rng, -bound, bound);
  RationalVector theta(r);
  for (auto& x : theta) x = half_theta ? Rational(uniform(rng, -2 * bound, 2 * bound), 2) : Rational(uniform(rng, -1, 1));
  return WeightSystem(r, std::move(w), std::move(theta));
}

/// Random symmetric positive-definite integer matrix.
InnerProduct random_metric(std::mt19937_64& rng, std::size_t r) {
  for (;;) {
    RationalMatrix m(r, RationalVector(r));
    for (std::size_t i = 0; i < r; ++i) {
      m[i][i] = uniform(rng, 1, 3);
      for (std::size_t j = 0; j < i; ++j) m[i][j] = m[j][i] = uniform(rng, -1, 1);
    }
    // Diagonal dominance is enough for r ≤ 3 with these ranges.
    bool dominant = true;
    for (std::size_t i = 0; i < r; ++i) {
      Rational off;
      for (std::size_t j = 0; j < r; ++j)
        if (j != i) off += m[i][j].sign() < 0 ? -m[i][j] : m[i][j];
      if (!(off < m[i][i])) dominant = false;
    }
    if (dominant) return InnerProduct(std::move(m));
  }
}

struct Outcome {
  bool ok = true;
  std::string detail;
};

class Failures {
public:
  void add(const std::string& msg) {
    std::lock_guard lock(mutex_);
    ++count_;
    if (first_.empty()) first_ = msg;
  }
  Outcome outcome(const std::string& summary) const {
    if (count_ == 0) return {true, summary};
    return {false, summary + "; " + std::to_string(count_) + " failures, first: " + first_};
  }

private:
  mutable std::mutex mutex_;
  std::size_t count_ = 0;
  std::string first_;
};

std::string show(const RationalVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].str();
  return s + ")";
}

std::string show(const Support& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.indices().size(); ++i) out += (i ? "," : "") + std::to_string(s.indices()[i] + 1);
  return out + "}";
}

// ---------------------------------------------------------------------------

Outcome criterion_oracle_equivalence() {
  constexpr std::size_t kInstances = 500;
  Failures f;
  std::vector<std::size_t> supports_checked(kInstances);
  parallel_for(kInstances, [&](std::size_t i) {
    std::mt19937_64 rng(kSeed + i);
    auto r = static_cast<std::size_t>(uniform(rng, 1, 3));
    auto m = static_cast<std::size_t>(uniform(rng, 1, 6));
    auto ws = random_ws(rng, r, m, 3, i % 2 == 1);
    for (const auto& s : all_supports(m)) {
      bool exact = classify(ws, s).semistable;
      oracle::OracleBudget b;
      b.lattice_radius = std::max<long long>(1, witness_radius(ws, s));
      auto v = oracle::brute_force_classify(ws, s, b);
      ++supports_checked[i];
      if (v.semistable != exact)
        f.add("instance " + std::to_string(i) + " support " + show(s) + ": exact " + (exact ? "semistable" : "unstable"));
      else if (v.witness && !(hm_weight(ws, s, *v.witness).sign() > 0))
        f.add("instance " + std::to_string(i) + ": witness weight not positive");
    }
  });
  std::size_t total = 0;
  for (auto c : supports_checked) total += c;
  return f.outcome(std::to_string(kInstances) + " instances, " + std::to_string(total) + " supports");
}

Outcome criterion_quot_dimension() {
  Failures f;
  std::size_t cases = 0;
  for (long long k = 1; k <= 4; ++k)
    for (long long total = 0; total <= 5; ++total) {
      ++cases;
      std::vector<RationalVector> w(static_cast<std::size_t>(k), RationalVector{Rational(1)});
      WeightSystem ws(1, std::move(w), RationalVector{Rational(1)});
      for (long long dp = 0; dp <= total; ++dp) {
        GaugedMapDatum d(ws, {dp}, total - dp, Support::all(ws.size()));
        long long expected = k * (total + 1) - 1;
        long long got = quot_dimension(d, 0);
        if (got != expected)
          f.add("k=" + std::to_string(k) + " d=" + std::to_string(total) + ": got " + std::to_string(got) +
                ", expected " + std::to_string(expected));
      }
    }
  return f.outcome(std::to_string(cases) + " (k, d(P)+d(u)) cases");
}

/// Fixed corpus of weight systems for which the bounded-energy family is
/// finite, drawn by rejection sampling from a seeded stream.
std::vector<WeightSystem> bounded_corpus(std::size_t count) {
  std::mt19937_64 rng(kSeed ^ 0xe7e7);
  std::vector<WeightSystem> out;
  while (out.size() < count) {
    auto r = static_cast<std::size_t>(uniform(rng, 1, 2));
    auto m = static_cast<std::size_t>(uniform(rng, r + 1, r + 2));
    auto ws = random_ws(rng, r, m, 2, true);
    if (out.size() % 3 == 2 && r == 2) ws.metric = random_metric(rng, r);
    try {
      require_bounded_family(ws);
    } catch (const infeasible_error&) {
      continue;
    }
    out.push_back(std::move(ws));
  }
  return out;
}

Outcome criterion_energy_positivity() {
  Failures f;
  auto corpus = bounded_corpus(10);
  const Rational E(10);
  std::size_t data = 0;
  for (std::size_t c = 0; c < corpus.size(); ++c) {
    const auto& ws = corpus[c];
    const std::string tag = "system " + std::to_string(c);
    auto at1 = enumerate_bounded(ws, EnergyBudget(E), AtK{Rational(1)});
    std::set<Support> zero_supports;
    for (const auto& d : at1) {
      ++data;
      Rational e = energy(d);
      bool trivial = d.du == 0 && std::all_of(d.dP.begin(), d.dP.end(), [](long long x) { return x == 0; });
      if (e.sign() < 0) f.add(tag + ": negative energy " + e.str());
      if ((e.sign() == 0) != trivial) f.add(tag + ": energy zero iff trivial degrees violated");
      if (trivial) zero_supports.insert(d.support);
      // (θ − d(P)^∨, d(P)) + d(u): below the energy by |d(P)|², and a convex
      // combination of the feasibility slacks, hence nonnegative.
      RationalVector shifted = sub(ws.theta, d.degree_dual());
      Rational middle = dot(shifted, d.degree()) + Rational(d.du);
      if (middle > e) f.add(tag + ": chain fails at the upper step");
      if (middle.sign() < 0) f.add(tag + ": chain fails at the lower step");
      if (e - middle != ws.metric.norm2(d.degree())) f.add(tag + ": energy gap differs from |d(P)|^2");
      if (!degree_feasible(d).feasible) f.add(tag + ": enumerated datum not degree-feasible");
    }
    // Zero energy must occur for exactly the supports whose hull contains θ.
    for (const auto& s : all_supports(ws.size()))
      if (classify(ws, s).semistable != (zero_supports.count(s) > 0))
        f.add(tag + ": trivial datum presence differs from semistability for support " + show(s));
    for (const auto& d : enumerate_bounded(ws, EnergyBudget(E), LargeK{})) {
      ++data;
      if (energy(d).sign() < 0) f.add(tag + ": negative energy in the large-k family");
    }
  }
  return f.outcome(std::to_string(corpus.size()) + " systems, " + std::to_string(data) + " data at E=10");
}

Outcome criterion_walls() {
  constexpr std::size_t kInstances = 100;
  constexpr long long kBoxRadius = 4;
  Failures f;
  std::vector<std::size_t> wall_count(kInstances);
  parallel_for(kInstances, [&](std::size_t i) {
    std::mt19937_64 rng(kSeed + 7919 * (i + 1));
    auto r = static_cast<std::size_t>(uniform(rng, 1, 2));
    auto m = static_cast<std::size_t>(uniform(rng, 1, 4));
    auto ws = random_ws(rng, r, m, 2, i % 2 == 0);
    std::uint64_t mask = static_cast<std::uint64_t>(uniform(rng, 1, (1LL << m) - 1));
    Support s = Support::from_mask(mask, m);
    std::vector<long long> dP(r, 0);
    while (std::all_of(dP.begin(), dP.end(), [](long long x) { return x == 0; }))
      for (auto& x : dP) x = uniform(rng, -2, 2);
    const std::string tag = "instance " + std::to_string(i);

    auto w = walls(ws, s, dP).walls;
    wall_count[i] = w.size();
    auto grid = oracle::critical_k_grid(ws, s, dP, kBoxRadius);
    long long radius = kBoxRadius;
    for (const auto& k : grid) {
      GaugedMapDatum d(ws, dP, 0, s);
      radius = std::max(radius, mundet_witness_radius(d, k));
    }
    auto brackets = oracle::scan_walls(ws, s, dP, grid, radius);
    for (const auto& b : brackets) {
      auto inside = std::count_if(w.begin(), w.end(), [&](const Rational& x) { return !(x < b.lo) && !(b.hi < x); });
      if (inside != 1)
        f.add(tag + ": bracket [" + b.lo.str() + ", " + b.hi.str() + "] holds " + std::to_string(inside) + " walls");
    }
    for (const auto& x : w) {
      bool covered = std::any_of(brackets.begin(), brackets.end(),
                                 [&](const oracle::WallBracket& b) { return !(x < b.lo) && !(b.hi < x); });
      if (!covered) f.add(tag + ": wall " + x.str() + " is not bracketed");
    }
  });
  std::size_t total = 0;
  for (auto c : wall_count) total += c;
  return f.outcome(std::to_string(kInstances) + " instances, " + std::to_string(total) + " walls");
}

Outcome criterion_type_counts() {
  Failures f;
  const std::size_t expected[] = {1, 2, 6};
  for (int n = 0; n <= 2; ++n) {
    auto got = scaled::enumerate_types(n, scaled::CurveMode::Projective).size();
    if (got != expected[n])
      f.add("n=" + std::to_string(n) + ": " + std::to_string(got) + " types, expected " + std::to_string(expected[n]));
  }
  std::multiset<long long> dims;
  for (const auto& t : scaled::enumerate_types(2, scaled::CurveMode::Projective)) dims.insert(scaled::stratum_dimension(t));
  if (dims != std::multiset<long long>{3, 2, 2, 2, 1, 1}) f.add("n=2 dimension multiset differs");
  return f.outcome("counts 1, 2, 6; n=2 dimensions {3,2,2,2,1,1}");
}

Outcome criterion_dimension_invariant() {
  Failures f;
  std::size_t types = 0;
  for (auto mode : {scaled::CurveMode::Projective, scaled::CurveMode::Affine})
    for (int n = 0; n <= 5; ++n) {
      long long target = mode == scaled::CurveMode::Projective ? n + 1 : n - 1;
      for (const auto& t : scaled::enumerate_types(n, mode)) {
        ++types;
        long long sum = scaled::stratum_dimension(t) + scaled::stratum_codimension(t);
        if (sum != target) f.add(scaled::canonical_form(t) + ": dim + codim = " + std::to_string(sum));
      }
    }
  return f.outcome(std::to_string(types) + " types, n <= 5, both modes");
}

Outcome criterion_tropical() {
  constexpr int kSamples = 1000;
  Failures f;
  std::mt19937_64 rng(kSeed ^ 0x7709);
  for (int sample = 0; sample < kSamples; ++sample) {
    int n = static_cast<int>(uniform(rng, 1, 12));
    scaled::CombinatorialType t;
    std::vector<int> parent(n, -1);
    t.vertices.push_back({"v0", std::nullopt, scaled::ScalingClass::Zero});
    scaled::ValuationAssignment val;
    for (int i = 1; i < n; ++i) {
      parent[i] = static_cast<int>(uniform(rng, 0, i - 1));
      t.vertices.push_back({"v" + std::to_string(i), "v" + std::to_string(parent[i]), scaled::ScalingClass::Zero});
      val.edge_valuations["v" + std::to_string(i)] = Rational(uniform(rng, 1, 4), uniform(rng, 1, 3));
    }
    // Bias δ toward values that put zeros on the tree.
    val.delta_valuation = Rational(-uniform(rng, 0, 12), uniform(rng, 1, 3));
    auto limit = scaled::tropical_limit(t, val);
    const std::string tag = "sample " + std::to_string(sample);
    for (int v = 0; v < n; ++v) {
      // Independent recomputation of the weight.
      Rational w = val.delta_valuation;
      int transitions = 0;
      for (int c = v; c != -1; c = parent[c]) {
        if (parent[c] != -1) w += val.edge_valuations.at("v" + std::to_string(c));
        if (limit[c].cls == scaled::ScalingClass::Transition) ++transitions;
      }
      if (w != limit[v].weight) f.add(tag + ": weight mismatch at v" + std::to_string(v));
      if (transitions > 1) f.add(tag + ": two transitions on the path to v" + std::to_string(v));
      if (parent[v] != -1 && scaled::order(limit[v].cls) > scaled::order(limit[parent[v]].cls))
        f.add(tag + ": class increases toward v" + std::to_string(v));
    }
  }
  return f.outcome(std::to_string(kSamples) + " samples");
}

Outcome criterion_kn_partition() {
  constexpr std::size_t kSystems = 50;
  Failures f;
  std::vector<std::size_t> unstable_counts(kSystems);
  parallel_for(kSystems, [&](std::size_t i) {
    std::mt19937_64 rng(kSeed + 104729 * (i + 1));
    auto r = static_cast<std::size_t>(uniform(rng, 1, 3));
    auto m = static_cast<std::size_t>(uniform(rng, 1, 5));
    auto ws = random_ws(rng, r, m, 3, i % 2 == 0);
    if (i % 3 == 0 && r > 1) ws.metric = random_metric(rng, r);
    const long long box = r == 3 ? 3 : 5;
    const std::string tag = "system " + std::to_string(i);

    auto strata = kn_partition(ws);
    auto candidates = kn_candidates(ws);
    std::set<RationalVector> stratum_lambdas;
    std::map<Support, int> assigned;
    for (const auto& st : strata) {
      stratum_lambdas.insert(st.lambda);
      for (const auto& mem : st.members) ++assigned[mem.support];
    }
    if (stratum_lambdas != candidates) f.add(tag + ": stratum index set differs from kn_candidates");
    for (const auto& s : all_supports(m)) {
      bool unstable = !classify(ws, s).semistable;
      unstable_counts[i] += unstable;
      int times = assigned.count(s) ? assigned[s] : 0;
      if (times != (unstable ? 1 : 0))
        f.add(tag + ": support " + show(s) + " assigned " + std::to_string(times) + " times");
    }
    for (const auto& st : strata) {
      const Rational n2 = ws.metric.norm2(st.lambda);
      for (const auto& mem : st.members) {
        const Support& s = mem.support;
        Rational best = hm_weight(ws, s, st.lambda);
        if (best != n2) f.add(tag + ": lambda " + show(st.lambda) + " is not normalized");
        // μ(x,λ)/|λ| ≤ |λ*| for every box direction, squared when positive.
        for (const auto& l : lattice_box(r, box)) {
          if (std::all_of(l.begin(), l.end(), [](long long x) { return x == 0; })) continue;
          auto lr = to_rational(l);
          Rational w = hm_weight(ws, s, lr);
          if (w.sign() > 0 && w * w > n2 * ws.metric.norm2(lr)) {
            f.add(tag + ": direction " + show(lr) + " beats " + show(st.lambda) + " on " + show(s));
            break;
          }
        }
      }
    }
  });
  std::size_t total = 0;
  for (auto c : unstable_counts) total += c;
  return f.outcome(std::to_string(kSystems) + " systems, " + std::to_string(total) + " unstable supports");
}

Outcome criterion_tree_oracle() {
  Failures f;
  std::ostringstream summary;
  for (auto mode : {scaled::CurveMode::Projective, scaled::CurveMode::Affine})
    for (int n = 0; n <= 3; ++n) {
      auto rep = oracle::exhaustive_tree_check(n, mode, {});
      summary << (summary.tellp() ? " " : "") << scaled::to_string(mode)[0] << n << "=" << rep.oracle_count;
      if (!rep.empty())
        f.add(std::string(scaled::to_string(mode)) + " n=" + std::to_string(n) + ": " +
              std::to_string(rep.only_in_oracle.size()) + " only in oracle, " +
              std::to_string(rep.only_in_enumeration.size()) + " only in enumeration");
    }
  return f.outcome("counts " + summary.str());
}

struct Criterion {
  const char* name;
  double limit;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"hull_vs_lattice_oracle", kLimitOracle, criterion_oracle_equivalence},
      {"quot_dimension", kLimitQuot, criterion_quot_dimension},
      {"energy_positivity", kLimitEnergy, criterion_energy_positivity},
      {"wall_brackets", kLimitWalls, criterion_walls},
      {"scaled_type_counts", kLimitCounts, criterion_type_counts},
      {"dimension_codimension", kLimitDimInvariant, criterion_dimension_invariant},
      {"tropical_monotonicity", kLimitTropical, criterion_tropical},
      {"kn_partition", kLimitKN, criterion_kn_partition},
      {"tree_oracle_diff", kLimitTreeOracle, criterion_tree_oracle},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = secs < c.limit;
    bool pass = o.ok && in_time;
    failed += !pass;
    std::printf("%s %zu %-22s %.3fs/%gs  %s%s\n", pass ? "PASS" : "FAIL", i + 1, c.name, secs, c.limit,
                o.detail.c_str(), in_time ? "" : " (time limit exceeded)");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
