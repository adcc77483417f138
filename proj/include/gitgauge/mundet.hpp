#pragma once

// Mundet stability for torus-gauged maps C → P(V)/T, described by their
// discrete invariants: bundle degree d(P), section degree d(u) and the
// support of the section components.
//
// Sign convention: the Mundet weight at polarization power k is
//   −(d(P)^∨, λ) + k · min_{i∈S} (θ − μ_i)(λ),
// so a datum is semistable iff θ − d(P)^∨/k lies in hull{μ_i : i ∈ S}.
// This is the orientation under which the energy (θ,d(P)) + d(u) of every
// semistable datum is nonnegative.

#include "gitgauge/git.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <variant>
#include <vector>

namespace gitgauge {

struct GaugedMapDatum {
  WeightSystem ws;
  std::vector<long long> dP;
  long long du = 0;
  Support support;

  GaugedMapDatum() = default;
  GaugedMapDatum(WeightSystem w, std::vector<long long> bundle_degree, long long section_degree, Support s)
      : ws(std::move(w)), dP(std::move(bundle_degree)), du(section_degree), support(std::move(s)) {
    validate();
  }

  void validate() const {
    ws.validate();
    if (dP.size() != ws.rank) throw input_error("datum: dP has wrong dimension");
    if (support.size() == 0) throw input_error("datum: support must be nonempty");
    if (support.indices().back() >= ws.size()) throw input_error("datum: support index out of range");
  }

  RationalVector degree() const { return to_rational(dP); }
  /// d(P)^∨ as a covector.
  RationalVector degree_dual() const { return ws.metric.lower(degree()); }
};

struct MundetClass {
  bool semistable = false;
  bool polystable = false;
  bool stable = false;
};

struct LargeKVerdict {
  bool semistable = false;
  /// Largest wall in k (verdict constant beyond it), 0 when there is none.
  Rational threshold;
};

struct DegreeFeasibility {
  bool feasible = true;
  /// (μ_i, d(P)^∨) + d(u) for each i in the support, in support order.
  std::vector<Rational> slacks;
};

struct WallSet {
  std::vector<Rational> walls;
  std::vector<Support> degenerate_supports;
};

struct EnergyBudget {
  Rational E;

  explicit EnergyBudget(Rational e) : E(std::move(e)) {
    if (E.sign() < 0) throw input_error("energy budget must be nonnegative");
  }
};

struct AtK {
  Rational k;
};
struct LargeK {};
using EnumerationMode = std::variant<AtK, LargeK>;

namespace detail {

inline void require_positive_k(const Rational& k) {
  if (k.sign() <= 0) throw input_error("polarization power k must be positive");
}

inline RationalVector shifted_point(const GaugedMapDatum& d, const Rational& k) {
  return sub(d.ws.theta, scale(d.degree_dual(), Rational(1) / k));
}

}  // namespace detail

inline Rational mundet_weight(const GaugedMapDatum& d, const Rational& k, const RationalVector& lambda) {
  detail::require_positive_k(k);
  require_dimension(lambda, d.ws.rank, "one-parameter subgroup");
  std::optional<Rational> m;
  for (auto i : d.support.indices()) {
    Rational v = dot(sub(d.ws.theta, d.ws.weights[i]), lambda);
    if (!m || v < *m) m = v;
  }
  return -dot(d.degree_dual(), lambda) + k * *m;
}

inline Rational mundet_weight(const GaugedMapDatum& d, const Rational& k, const OneParameterSubgroup& lambda) {
  return mundet_weight(d, k, lambda.as_rational());
}

inline MundetClass mundet_classify(const GaugedMapDatum& d, const Rational& k) {
  detail::require_positive_k(k);
  auto loc = hull_position(support_points(d.ws, d.support), detail::shifted_point(d, k));
  MundetClass c;
  c.semistable = loc.position != HullPosition::Outside;
  c.polystable = loc.position == HullPosition::RelativeInterior;
  c.stable = c.polystable && loc.hull_affine_dimension == d.ws.rank;
  return c;
}

/// Radius of a lattice box guaranteed to contain a destabilizing λ at power k
/// (from the exact separating certificate), or 0 when semistable.
inline long long mundet_witness_radius(const GaugedMapDatum& d, const Rational& k) {
  detail::require_positive_k(k);
  auto m = hull_contains(support_points(d.ws, d.support), detail::shifted_point(d, k));
  return m.inside ? 0 : sup_norm(primitive_integer_vector(m.covector));
}

/// Walls in k for one support and bundle degree: the values 1/t where the
/// ray θ − t·d(P)^∨ meets the relative boundary of hull{μ_i : i ∈ S}.
inline WallSet walls(const WeightSystem& ws, const Support& s, const std::vector<long long>& dP) {
  if (dP.size() != ws.rank) throw input_error("walls: dP has wrong dimension");
  WallSet out;
  RationalVector dir = scale(ws.metric.lower(to_rational(dP)), Rational(-1));
  auto pts = support_points(ws, s);
  for (const auto& t : ray_boundary_crossings(pts, ws.theta, dir)) out.walls.push_back(Rational(1) / t);
  std::sort(out.walls.begin(), out.walls.end());
  if (affine_dimension(pts) < ws.rank && !is_zero(dir)) {
    auto seg = ray_interval(pts, ws.theta, dir);
    if (seg && seg->second.sign() > 0) out.degenerate_supports.push_back(s);
  }
  return out;
}

inline LargeKVerdict large_k_semistable(const GaugedMapDatum& d) {
  LargeKVerdict v;
  auto pts = support_points(d.ws, d.support);
  RationalVector dir = scale(d.degree_dual(), Rational(-1));
  if (is_zero(dir)) {
    v.semistable = hull_contains(pts, d.ws.theta).inside;
    return v;
  }
  // Semistable for every large k iff θ − t·d(P)^∨ ∈ hull for all small t > 0.
  auto seg = ray_interval(pts, d.ws.theta, dir);
  v.semistable = seg && seg->first.sign() <= 0 && seg->second.sign() > 0;
  auto w = walls(d.ws, d.support, d.dP).walls;
  if (!w.empty()) v.threshold = w.back();
  return v;
}

inline Rational energy(const GaugedMapDatum& d) { return dot(d.ws.theta, d.degree()) + Rational(d.du); }

inline DegreeFeasibility degree_feasible(const GaugedMapDatum& d) {
  DegreeFeasibility f;
  for (auto i : d.support.indices()) {
    Rational slack = dot(d.ws.weights[i], d.degree()) + Rational(d.du);
    if (slack.sign() < 0) f.feasible = false;
    f.slacks.push_back(std::move(slack));
  }
  return f;
}

/// Dimension of the quot-scheme compactification W^ss/T for a curve of the
/// given genus, valid when every summand P(V_i) ⊗ L^∨ has degree > 2g − 2.
inline long long quot_dimension(const GaugedMapDatum& d, long long genus) {
  if (genus < 0) throw input_error("quot_dimension: genus must be nonnegative");
  mpz_class total = 0;
  for (std::size_t i = 0; i < d.ws.size(); ++i) {
    Rational deg = dot(d.ws.weights[i], d.degree()) + Rational(d.du);
    if (!deg.is_integer()) throw input_error("quot_dimension: non-integral line bundle degree");
    if (deg <= Rational(2 * genus - 2))
      throw input_error("quot_dimension: degree " + deg.str() + " of summand " + std::to_string(i + 1) +
                        " is not above 2g-2; Riemann-Roch regime violated");
    mpz_class h0 = deg.numerator() - static_cast<long>(genus) + 1;
    if (h0 > 0) total += h0;
  }
  total -= static_cast<long>(d.ws.rank);
  if (!total.fits_slong_p()) throw input_error("quot_dimension: result exceeds 64-bit range");
  return total.get_si();
}

inline bool semistable_in_mode(const GaugedMapDatum& d, const EnumerationMode& mode) {
  if (const auto* at = std::get_if<AtK>(&mode)) return mundet_classify(d, at->k).semistable;
  return large_k_semistable(d).semistable;
}

/// Every support S whose hull contains θ must contain it in the relative
/// interior with full affine dimension (semistable = stable); otherwise the
/// family of semistable data of bounded energy is not finite in general.
inline void require_bounded_family(const WeightSystem& ws) {
  if (!classify(ws, Support::all(ws.size())).stable)
    throw infeasible_error("unbounded family: theta is not in the interior of a full-dimensional weight hull");
  for (const auto& s : all_supports(ws.size())) {
    auto c = classify(ws, s);
    if (c.semistable && !c.stable)
      throw infeasible_error("unbounded family: stable differs from semistable for some support");
  }
}

struct SearchBox {
  std::vector<long long> lo;
  std::vector<long long> hi;
};

/// Bounds on each d(P)_j over the rational relaxation of the enumeration
/// constraints for one support, found by exact LP. Empty if infeasible.
inline std::optional<SearchBox> certified_degree_box(const WeightSystem& ws, const Support& s, const Rational& E,
                                                     const EnumerationMode& mode) {
  const std::size_t r = ws.rank;
  lp::Model model;
  for (std::size_t j = 0; j < r; ++j) model.add_variable(true);
  const std::size_t du = model.add_variable(true);
  const std::size_t nvars_base = model.variable_count();

  auto row_with = [&](const RationalVector& dp_coeffs, const Rational& du_coeff) {
    RationalVector row(nvars_base);
    for (std::size_t j = 0; j < r; ++j) row[j] = dp_coeffs[j];
    row[du] = du_coeff;
    return row;
  };

  const auto* at = std::get_if<AtK>(&mode);
  std::vector<std::size_t> coeff_vars;
  if (at) {
    for (std::size_t i = 0; i < s.size(); ++i) coeff_vars.push_back(model.add_variable());
  }
  for (auto i : s.indices()) model.add_constraint(row_with(ws.weights[i], 1), lp::Relation::GreaterEqual, 0);
  model.add_constraint(row_with(ws.theta, 1), lp::Relation::GreaterEqual, 0);
  model.add_constraint(row_with(ws.theta, 1), lp::Relation::LessEqual, E);
  if (at) {
    // Σ c_i μ_i + M·dP / k = θ, Σ c_i = 1.
    const auto& metric = ws.metric.matrix();
    for (std::size_t j = 0; j < r; ++j) {
      RationalVector row(model.variable_count());
      for (std::size_t l = 0; l < r; ++l) row[l] = metric[j][l] / at->k;
      for (std::size_t a = 0; a < s.size(); ++a) row[coeff_vars[a]] = ws.weights[s.indices()[a]][j];
      model.add_constraint(std::move(row), lp::Relation::Equal, ws.theta[j]);
    }
    RationalVector sum(model.variable_count());
    for (auto v : coeff_vars) sum[v] = 1;
    model.add_constraint(std::move(sum), lp::Relation::Equal, 1);
  }

  SearchBox box;
  for (std::size_t j = 0; j < r; ++j) {
    RationalVector obj(model.variable_count());
    obj[j] = 1;
    auto hi = model.maximize(obj);
    if (hi.status == lp::Status::Infeasible) return std::nullopt;
    auto lo = model.minimize(obj);
    if (hi.status == lp::Status::Unbounded || lo.status == lp::Status::Unbounded)
      throw infeasible_error("unbounded family: degree polytope is unbounded");
    Rational h = hi.objective.floor(), l = lo.objective.ceil();
    if (!h.numerator().fits_slong_p() || !l.numerator().fits_slong_p())
      throw infeasible_error("unbounded family: degree box exceeds 64-bit range");
    box.hi.push_back(h.numerator().get_si());
    box.lo.push_back(l.numerator().get_si());
  }
  return box;
}

/// Canonical order: support, then dP, then du.
inline bool datum_less(const GaugedMapDatum& a, const GaugedMapDatum& b) {
  if (a.support != b.support) return a.support < b.support;
  if (a.dP != b.dP) return a.dP < b.dP;
  return a.du < b.du;
}

/// All (S, d(P), d(u)) that are semistable in `mode`, degree-feasible, and
/// have energy in [0, E]. Completeness rests on the LP-certified degree box.
inline std::vector<GaugedMapDatum> enumerate_bounded(const WeightSystem& ws, const EnergyBudget& budget,
                                                     const EnumerationMode& mode) {
  ws.validate();
  if (const auto* at = std::get_if<AtK>(&mode)) detail::require_positive_k(at->k);
  require_bounded_family(ws);

  auto supports = all_supports(ws.size());
  std::vector<std::vector<GaugedMapDatum>> found(supports.size());
  parallel_for(supports.size(), [&](std::size_t idx) {
    const Support& s = supports[idx];
    if (std::holds_alternative<LargeK>(mode) && !classify(ws, s).semistable) return;
    auto box = certified_degree_box(ws, s, budget.E, mode);
    if (!box) return;
    const std::size_t r = ws.rank;
    std::vector<long long> dp(box->lo);
    for (std::size_t j = 0; j < r; ++j)
      if (box->lo[j] > box->hi[j]) return;
    for (;;) {
      RationalVector dpr = to_rational(dp);
      Rational theta_dp = dot(ws.theta, dpr);
      Rational du_lo = (-theta_dp).ceil();
      for (auto i : s.indices()) du_lo = std::max(du_lo, (-dot(ws.weights[i], dpr)).ceil());
      Rational du_hi = (budget.E - theta_dp).floor();
      for (Rational du = du_lo; du <= du_hi; du += 1) {
        GaugedMapDatum d(ws, dp, du.numerator().get_si(), s);
        if (semistable_in_mode(d, mode)) found[idx].push_back(std::move(d));
      }
      std::size_t j = 0;
      for (; j < r; ++j) {
        if (dp[j] < box->hi[j]) {
          ++dp[j];
          break;
        }
        dp[j] = box->lo[j];
      }
      if (j == r) break;
    }
  });
  std::vector<GaugedMapDatum> out;
  for (auto& v : found)
    for (auto& d : v) out.push_back(std::move(d));
  std::sort(out.begin(), out.end(), datum_less);
  return out;
}

}  // namespace gitgauge
