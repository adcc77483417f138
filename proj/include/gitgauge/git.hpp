#pragma once

// Hilbert–Mumford classification and Kirwan–Ness strata for a torus acting
// on P(V) with a shifted linearization. Stability of a point only depends on
// its support (the coordinates where it is nonzero), so supports are the unit
// of classification throughout.
//
// Conventions: weights μ_i and the shift θ are covectors, one-parameter
// subgroups λ are coweights, and μ_i(λ) is the coordinate pairing. The metric
// acts on coweights; covectors use its dual.

#include "gitgauge/geometry.hpp"
#include "gitgauge/parallel.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace gitgauge {

struct WeightSystem {
  std::size_t rank = 0;
  std::vector<RationalVector> weights;
  RationalVector theta;
  InnerProduct metric;

  WeightSystem() = default;
  WeightSystem(std::size_t r, std::vector<RationalVector> mu, RationalVector shift)
      : rank(r), weights(std::move(mu)), theta(std::move(shift)), metric(InnerProduct::identity(r)) {
    validate();
  }
  WeightSystem(std::size_t r, std::vector<RationalVector> mu, RationalVector shift, InnerProduct form)
      : rank(r), weights(std::move(mu)), theta(std::move(shift)), metric(std::move(form)) {
    validate();
  }

  std::size_t size() const { return weights.size(); }

  void validate() const {
    if (rank < 1) throw input_error("weight system: rank must be >= 1");
    if (weights.empty()) throw input_error("weight system: at least one weight required");
    for (const auto& w : weights) require_dimension(w, rank, "weight");
    require_dimension(theta, rank, "theta");
    if (metric.dimension() != rank) throw input_error("weight system: metric dimension differs from rank");
  }
};

/// Nonempty set of 0-based weight indices, kept sorted.
class Support {
public:
  Support() = default;
  Support(std::vector<std::size_t> indices, std::size_t m) : indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
    if (indices_.empty()) throw input_error("support: must be nonempty");
    if (indices_.back() >= m) throw input_error("support: index out of range");
  }

  static Support all(std::size_t m) {
    std::vector<std::size_t> idx(m);
    for (std::size_t i = 0; i < m; ++i) idx[i] = i;
    return Support(std::move(idx), m);
  }

  static Support from_mask(std::uint64_t mask, std::size_t m) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (std::uint64_t{1} << i)) idx.push_back(i);
    return Support(std::move(idx), m);
  }

  std::uint64_t mask() const {
    std::uint64_t out = 0;
    for (auto i : indices_) out |= std::uint64_t{1} << i;
    return out;
  }

  const std::vector<std::size_t>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool contains(std::size_t i) const { return std::binary_search(indices_.begin(), indices_.end(), i); }

  friend bool operator==(const Support&, const Support&) = default;
  friend auto operator<=>(const Support&, const Support&) = default;

private:
  std::vector<std::size_t> indices_;
};

/// Integer coweight λ, the one-parameter subgroup z ↦ z^λ.
struct OneParameterSubgroup {
  std::vector<long long> lambda;

  RationalVector as_rational() const { return to_rational(lambda); }
};

struct StabilityClass {
  bool semistable = false;
  bool polystable = false;
  bool stable = false;

  friend bool operator==(const StabilityClass&, const StabilityClass&) = default;
};

/// Stability can be read off the affine hull dimension or the linear span
/// dimension of the weights. Both are reported so instances
/// where the two readings differ can be flagged.
struct StabilityDiagnostic {
  std::size_t hull_affine_dimension = 0;
  std::size_t span_dimension = 0;
  bool readings_disagree = false;
};

inline PointSet support_points(const WeightSystem& ws, const Support& s) {
  PointSet pts;
  pts.reserve(s.size());
  for (auto i : s.indices()) pts.push_back(ws.weights.at(i));
  return pts;
}

/// μ(x,λ) = min_{i∈S} (−μ_i(λ)) + θ(λ); accepts rational λ.
inline Rational hm_weight(const WeightSystem& ws, const Support& s, const RationalVector& lambda) {
  require_dimension(lambda, ws.rank, "one-parameter subgroup");
  std::optional<Rational> nu;
  for (auto i : s.indices()) {
    Rational v = -dot(ws.weights[i], lambda);
    if (!nu || v < *nu) nu = v;
  }
  return *nu + dot(ws.theta, lambda);
}

inline Rational hm_weight(const WeightSystem& ws, const Support& s, const OneParameterSubgroup& lambda) {
  return hm_weight(ws, s, lambda.as_rational());
}

inline StabilityClass classify(const WeightSystem& ws, const Support& s) {
  auto loc = hull_position(support_points(ws, s), ws.theta);
  StabilityClass c;
  c.semistable = loc.position != HullPosition::Outside;
  c.polystable = loc.position == HullPosition::RelativeInterior;
  c.stable = c.polystable && loc.hull_affine_dimension == ws.rank;
  return c;
}

inline StabilityDiagnostic stability_diagnostic(const WeightSystem& ws, const Support& s) {
  auto pts = support_points(ws, s);
  StabilityDiagnostic d;
  d.hull_affine_dimension = affine_dimension(pts);
  d.span_dimension = span_dimension(pts);
  bool polystable = classify(ws, s).polystable;
  d.readings_disagree = polystable && ((d.hull_affine_dimension == ws.rank) != (d.span_dimension == ws.rank));
  return d;
}

/// The Kirwan–Ness optimal destabilizing coweight, absent when semistable.
///
/// λ maximizes μ(x,λ)/|λ| and is normalized so that μ(x,λ) = (λ,λ). It is the
/// metric-dual image of the point of hull{θ − μ_i} closest to the origin in
/// the dual metric.
inline std::optional<RationalVector> optimal_destabilizer(const WeightSystem& ws, const Support& s) {
  if (classify(ws, s).semistable) return std::nullopt;
  PointSet shifted;
  for (auto i : s.indices()) shifted.push_back(sub(ws.theta, ws.weights[i]));
  if (ws.metric.is_identity()) return closest_point(shifted, ws.metric);
  InnerProduct dual = ws.metric.dual();
  RationalVector c = closest_point(shifted, dual);
  return dual.lower(c);
}

/// A primitive integer one-parameter subgroup with positive weight, taken from
/// the exact separating certificate of the hull test. Absent when semistable.
inline std::optional<OneParameterSubgroup> integer_witness(const WeightSystem& ws, const Support& s) {
  auto membership = hull_contains(support_points(ws, s), ws.theta);
  if (membership.inside) return std::nullopt;
  return OneParameterSubgroup{primitive_integer_vector(membership.covector)};
}

/// Lattice radius guaranteeing a brute-force scan finds a destabilizer, or 0.
inline long long witness_radius(const WeightSystem& ws, const Support& s) {
  auto w = integer_witness(ws, s);
  return w ? sup_norm(w->lambda) : 0;
}

struct KNMember {
  Support support;
  /// Coordinates surviving in lim_{z→0} z^λ x: the i ∈ S attaining
  /// ν(x,λ) = min(−μ_i(λ)).
  Support limit_support;
};

struct KNStratum {
  RationalVector lambda;
  /// Z_λ is cut out by the weights with μ_i(λ) equal to this level,
  /// θ(λ) − (λ,λ).
  Rational fixed_level;
  std::vector<std::size_t> fixed_indices;
  std::vector<KNMember> members;
};

inline std::vector<Support> all_supports(std::size_t m) {
  if (m > 20) throw input_error("too many weights for subset enumeration");
  std::vector<Support> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) out.push_back(Support::from_mask(mask, m));
  return out;
}

namespace detail {

inline std::vector<std::pair<Support, RationalVector>> unstable_destabilizers(const WeightSystem& ws) {
  auto supports = all_supports(ws.size());
  std::vector<std::optional<RationalVector>> lambdas(supports.size());
  parallel_for(supports.size(), [&](std::size_t i) { lambdas[i] = optimal_destabilizer(ws, supports[i]); });
  std::vector<std::pair<Support, RationalVector>> out;
  for (std::size_t i = 0; i < supports.size(); ++i)
    if (lambdas[i]) out.emplace_back(supports[i], std::move(*lambdas[i]));
  return out;
}

}  // namespace detail

/// C(X): distinct optimal destabilizers over all unstable supports.
inline std::set<RationalVector> kn_candidates(const WeightSystem& ws) {
  std::set<RationalVector> out;
  for (auto& [s, lambda] : detail::unstable_destabilizers(ws)) out.insert(lambda);
  return out;
}

/// Unstable supports grouped by optimal destabilizer, sorted by λ.
inline std::vector<KNStratum> kn_partition(const WeightSystem& ws) {
  std::map<RationalVector, KNStratum> strata;
  for (auto& [s, lambda] : detail::unstable_destabilizers(ws)) {
    auto [it, fresh] = strata.try_emplace(lambda);
    KNStratum& st = it->second;
    if (fresh) {
      st.lambda = lambda;
      st.fixed_level = dot(ws.theta, lambda) - ws.metric.norm2(lambda);
      for (std::size_t i = 0; i < ws.size(); ++i)
        if (dot(ws.weights[i], lambda) == st.fixed_level) st.fixed_indices.push_back(i);
    }
    std::optional<Rational> nu;
    for (auto i : s.indices()) {
      Rational v = -dot(ws.weights[i], lambda);
      if (!nu || v < *nu) nu = v;
    }
    std::vector<std::size_t> limit;
    for (auto i : s.indices())
      if (-dot(ws.weights[i], lambda) == *nu) limit.push_back(i);
    st.members.push_back({s, Support(std::move(limit), ws.size())});
  }
  std::vector<KNStratum> out;
  for (auto& [lambda, st] : strata) out.push_back(std::move(st));
  return out;
}

}  // namespace gitgauge
