#pragma once

// Exact polyhedral primitives on finite point sets in Q^r: hull membership
// with certificates, relative position, metric closest point, ray/boundary
// crossings and the integer box used by brute-force checks.

#include "gitgauge/linalg.hpp"
#include "gitgauge/simplex.hpp"

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace gitgauge {

using PointSet = std::vector<RationalVector>;

/// Outcome of a convex-hull membership query.
///
/// Inside: `coefficients` are nonnegative, sum to one and reproduce the query
/// point exactly. Outside: `covector` ξ and `bound` c satisfy ξ(p) <= c for
/// every generator p and ξ(q) = c + margin with margin > 0.
struct HullMembership {
  bool inside = false;
  RationalVector coefficients;
  RationalVector covector;
  Rational bound;
  Rational margin;
};

enum class HullPosition { Outside, RelativeBoundary, RelativeInterior };

struct HullLocation {
  HullPosition position = HullPosition::Outside;
  std::size_t hull_affine_dimension = 0;
};

namespace detail {

inline std::size_t check_points(const PointSet& points, const RationalVector& q) {
  if (points.empty()) throw input_error("hull: empty point set");
  const std::size_t r = q.size();
  for (const auto& p : points) require_dimension(p, r, "hull point");
  return r;
}

}  // namespace detail

inline HullMembership hull_contains(const PointSet& points, const RationalVector& q) {
  const std::size_t r = detail::check_points(points, q);
  const std::size_t m = points.size();
  // Columns are convex coefficients; rows are the r coordinates and Σc = 1.
  RationalMatrix a(r + 1, RationalVector(m));
  RationalVector b(r + 1);
  for (std::size_t j = 0; j < r; ++j) {
    for (std::size_t i = 0; i < m; ++i) a[j][i] = points[i][j];
    b[j] = q[j];
  }
  for (std::size_t i = 0; i < m; ++i) a[r][i] = 1;
  b[r] = 1;

  auto res = lp::minimize_standard(a, b, RationalVector(m, Rational(0)));
  HullMembership out;
  if (res.status == lp::Status::Optimal) {
    out.inside = true;
    out.coefficients = std::move(res.x);
    return out;
  }
  // Farkas: y·[p;1] <= 0 for all p and y·[q;1] > 0.
  out.covector.assign(res.farkas.begin(), res.farkas.begin() + static_cast<std::ptrdiff_t>(r));
  out.bound = -res.farkas[r];
  out.margin = dot(out.covector, q) - out.bound;
  return out;
}

inline HullLocation hull_position(const PointSet& points, const RationalVector& q) {
  const std::size_t r = detail::check_points(points, q);
  HullLocation loc;
  loc.hull_affine_dimension = affine_dimension(points);
  if (!hull_contains(points, q).inside) return loc;
  if (loc.hull_affine_dimension == 0) {
    loc.position = HullPosition::RelativeInterior;
    return loc;
  }
  // q is in the relative interior iff it is a convex combination with every
  // coefficient strictly positive: maximize the smallest coefficient.
  lp::Model model;
  const std::size_t m = points.size();
  for (std::size_t i = 0; i < m; ++i) model.add_variable();
  std::size_t t = model.add_variable();
  for (std::size_t j = 0; j < r; ++j) {
    RationalVector row(m + 1);
    for (std::size_t i = 0; i < m; ++i) row[i] = points[i][j];
    model.add_constraint(std::move(row), lp::Relation::Equal, q[j]);
  }
  RationalVector sum(m + 1, Rational(1));
  sum[t] = 0;
  model.add_constraint(std::move(sum), lp::Relation::Equal, Rational(1));
  for (std::size_t i = 0; i < m; ++i) {
    RationalVector row(m + 1);
    row[i] = 1;
    row[t] = -1;
    model.add_constraint(std::move(row), lp::Relation::GreaterEqual, Rational(0));
  }
  RationalVector objective(m + 1);
  objective[t] = 1;
  auto res = model.maximize(objective);
  loc.position = (res.status == lp::Status::Optimal && res.objective.sign() > 0) ? HullPosition::RelativeInterior
                                                                                 : HullPosition::RelativeBoundary;
  return loc;
}

inline const char* to_string(HullPosition p) {
  switch (p) {
    case HullPosition::Outside: return "outside";
    case HullPosition::RelativeBoundary: return "relative_boundary";
    case HullPosition::RelativeInterior: return "relative_interior";
  }
  return "?";
}

/// The unique point of conv(points) of minimal norm under `metric`.
///
/// The minimizer lies in the relative interior of the hull of some affinely
/// independent subset of at most r+1 points, where it is the unconstrained
/// minimizer over that subset's affine hull. Every such subset is tried and
/// the feasible candidate of least norm wins.
inline RationalVector closest_point(const PointSet& points, const InnerProduct& metric) {
  if (points.empty()) throw input_error("closest_point: empty point set");
  const std::size_t r = metric.dimension();
  for (const auto& p : points) require_dimension(p, r, "closest_point point");

  PointSet pts;
  {
    std::set<RationalVector> seen;
    for (const auto& p : points)
      if (seen.insert(p).second) pts.push_back(p);
  }
  const std::size_t m = pts.size();
  if (m > 24) throw input_error("closest_point: too many distinct points for face enumeration");
  const std::size_t max_face = std::min(m, r + 1);

  std::optional<RationalVector> best;
  Rational best_norm;
  std::vector<std::size_t> face;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << m); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) > max_face) continue;
    face.clear();
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (std::uint32_t{1} << i)) face.push_back(i);
    const RationalVector& base = pts[face[0]];
    const std::size_t k = face.size() - 1;
    // x = base + D β minimizes (x,x) over the affine hull when
    // (DᵀMD) β = -DᵀM base.
    RationalMatrix dirs(k);
    for (std::size_t a = 0; a < k; ++a) dirs[a] = sub(pts[face[a + 1]], base);
    RationalVector beta;
    if (k > 0) {
      RationalMatrix gram(k, RationalVector(k));
      RationalVector rhs(k);
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t c = 0; c < k; ++c) gram[a][c] = metric(dirs[a], dirs[c]);
        rhs[a] = -metric(dirs[a], base);
      }
      auto sol = solve(gram, rhs);
      if (!sol) continue;  // affinely dependent subset
      beta = std::move(*sol);
    }
    Rational alpha0(1);
    bool feasible = true;
    for (const auto& bj : beta) {
      if (bj.sign() < 0) feasible = false;
      alpha0 -= bj;
    }
    if (!feasible || alpha0.sign() < 0) continue;
    RationalVector x = base;
    for (std::size_t a = 0; a < k; ++a) x = add(x, scale(dirs[a], beta[a]));
    Rational n2 = metric.norm2(x);
    if (!best || n2 < best_norm) {
      best = std::move(x);
      best_norm = n2;
    }
  }
  return *best;
}

/// Closed parameter interval {t ∈ Q : base + t·direction ∈ hull}, or empty.
/// Direction must be nonzero (the interval is then bounded).
inline std::optional<std::pair<Rational, Rational>> ray_interval(const PointSet& points, const RationalVector& base,
                                                                  const RationalVector& direction) {
  const std::size_t r = detail::check_points(points, base);
  require_dimension(direction, r, "ray direction");
  if (is_zero(direction)) throw input_error("ray_interval: zero direction");
  const std::size_t m = points.size();
  lp::Model model;
  for (std::size_t i = 0; i < m; ++i) model.add_variable();
  const std::size_t t = model.add_variable(true);
  for (std::size_t j = 0; j < r; ++j) {
    RationalVector row(m + 1);
    for (std::size_t i = 0; i < m; ++i) row[i] = points[i][j];
    row[t] = -direction[j];
    model.add_constraint(std::move(row), lp::Relation::Equal, base[j]);
  }
  RationalVector sum(m + 1, Rational(1));
  sum[t] = 0;
  model.add_constraint(std::move(sum), lp::Relation::Equal, Rational(1));
  RationalVector objective(m + 1);
  objective[t] = 1;
  auto lo = model.minimize(objective);
  if (lo.status == lp::Status::Infeasible) return std::nullopt;
  auto hi = model.maximize(objective);
  if (lo.status != lp::Status::Optimal || hi.status != lp::Status::Optimal)
    throw std::logic_error("ray_interval: unbounded ray through a bounded hull");
  return std::make_pair(lo.objective, hi.objective);
}

/// Parameters t > 0 where base + t·direction changes its relative position
/// with respect to the hull. Line ∩ hull is a segment [lo, hi] whose relative
/// interior is either entirely in the hull's relative interior or entirely
/// on its boundary, so only the segment endpoints can be breakpoints.
inline std::vector<Rational> ray_boundary_crossings(const PointSet& points, const RationalVector& base,
                                                    const RationalVector& direction) {
  const std::size_t r = detail::check_points(points, base);
  require_dimension(direction, r, "ray direction");
  if (is_zero(direction)) return {};
  auto seg = ray_interval(points, base, direction);
  std::vector<Rational> out;
  if (!seg) return out;
  if (seg->first.sign() > 0) out.push_back(seg->first);
  if (seg->second.sign() > 0 && seg->second != seg->first) out.push_back(seg->second);
  return out;
}

/// All nonzero integer vectors of length r with sup-norm <= bound, in
/// odometer order. Models a forward range.
class LatticeBox {
public:
  using Point = std::vector<long long>;

  LatticeBox(std::size_t rank, long long bound) : rank_(rank), bound_(bound) {
    if (rank < 1) throw input_error("lattice_box: rank must be >= 1");
    if (bound < 1) throw input_error("lattice_box: bound must be >= 1");
  }

  class iterator {
  public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = Point;
    using difference_type = std::ptrdiff_t;
    using pointer = const Point*;
    using reference = const Point&;

    iterator() = default;
    iterator(std::size_t rank, long long bound, bool end) : bound_(bound), done_(end), cur_(rank, -bound) {
      if (!done_ && is_origin()) advance();
    }

    reference operator*() const { return cur_; }
    pointer operator->() const { return &cur_; }
    iterator& operator++() {
      advance();
      return *this;
    }
    iterator operator++(int) {
      auto tmp = *this;
      advance();
      return tmp;
    }
    friend bool operator==(const iterator& a, const iterator& b) {
      if (a.done_ || b.done_) return a.done_ == b.done_;
      return a.cur_ == b.cur_;
    }

  private:
    bool is_origin() const {
      return std::all_of(cur_.begin(), cur_.end(), [](long long v) { return v == 0; });
    }
    void step() {
      for (auto& v : cur_) {
        if (v < bound_) {
          ++v;
          return;
        }
        v = -bound_;
      }
      done_ = true;
    }
    void advance() {
      do step();
      while (!done_ && is_origin());
    }

    long long bound_ = 0;
    bool done_ = true;
    Point cur_;
  };

  iterator begin() const { return {rank_, bound_, false}; }
  iterator end() const { return {rank_, bound_, true}; }

  /// (2B+1)^r - 1
  std::size_t size() const {
    std::size_t side = static_cast<std::size_t>(2 * bound_ + 1);
    std::size_t total = 1;
    for (std::size_t i = 0; i < rank_; ++i) total *= side;
    return total - 1;
  }

private:
  std::size_t rank_;
  long long bound_;
};

inline LatticeBox lattice_box(std::size_t rank, long long bound) { return LatticeBox(rank, bound); }

/// Smallest positive integer multiple of a nonzero rational vector that is
/// integral and primitive.
inline std::vector<long long> primitive_integer_vector(const RationalVector& v) {
  mpz_class lcm = 1;
  for (const auto& x : v) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.denominator().get_mpz_t());
  std::vector<mpz_class> ints;
  mpz_class g = 0;
  for (const auto& x : v) {
    mpz_class n = x.numerator() * (lcm / x.denominator());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    ints.push_back(n);
  }
  if (g == 0) throw input_error("primitive_integer_vector: zero vector");
  std::vector<long long> out;
  for (auto& n : ints) {
    n /= g;
    if (!n.fits_slong_p()) throw input_error("primitive_integer_vector: entry exceeds 64-bit range");
    out.push_back(n.get_si());
  }
  return out;
}

inline long long sup_norm(const std::vector<long long>& v) {
  long long b = 0;
  for (auto x : v) b = std::max(b, x < 0 ? -x : x);
  return b;
}

}  // namespace gitgauge
