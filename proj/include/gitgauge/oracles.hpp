#pragma once

// Brute-force verifiers. Each oracle evaluates weights with its own integer
// arithmetic and its own combinatorics; the analytic modules are only used
// for their data types and, in exhaustive_tree_check, for the enumeration
// being audited.

#include "gitgauge/mundet.hpp"
#include "gitgauge/scaled.hpp"

#include <algorithm>
#include <functional>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace gitgauge::oracle {

struct OracleBudget {
  long long lattice_radius = 1;
  std::vector<Rational> k_grid;
  /// 0 selects 2n + 2.
  int tree_vertex_cap = 0;
};

struct OracleVerdict {
  bool semistable = true;
  std::optional<OneParameterSubgroup> witness;
  /// Weight of the witness, when present.
  Rational witness_weight;
  std::size_t points_scanned = 0;
};

namespace detail {

using i128 = __int128;

/// Rows scaled by a common denominator into 64-bit integers.
struct IntegerRows {
  std::vector<std::vector<long long>> rows;
  mpz_class scale = 1;
};

inline IntegerRows integerize(const std::vector<RationalVector>& rows) {
  IntegerRows out;
  for (const auto& row : rows)
    for (const auto& x : row) mpz_lcm(out.scale.get_mpz_t(), out.scale.get_mpz_t(), x.denominator().get_mpz_t());
  for (const auto& row : rows) {
    std::vector<long long> ints;
    for (const auto& x : row) {
      mpz_class n = x.numerator() * (out.scale / x.denominator());
      if (!n.fits_slong_p() || abs(n) > mpz_class(1) << 40) throw input_error("oracle: entries too large for integer scan");
      ints.push_back(n.get_si());
    }
    out.rows.push_back(std::move(ints));
  }
  return out;
}

inline i128 idot(const std::vector<long long>& a, const std::vector<long long>& b) {
  i128 s = 0;
  for (std::size_t j = 0; j < a.size(); ++j) s += static_cast<i128>(a[j]) * b[j];
  return s;
}

inline Rational from_i128(i128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
  mpz_class hi = static_cast<unsigned long>(u >> 64), lo = static_cast<unsigned long>(u & ~0ULL);
  mpz_class z = (hi << 64) + lo;
  return Rational(neg ? mpz_class(-z) : z, 1);
}

/// For each λ in the box: (A, H) with A = a(λ) and H = min_i v_i(λ), both
/// scaled by the common denominator.
struct Evaluator {
  std::vector<std::vector<long long>> v;
  std::vector<long long> a;
  mpz_class scale;

  Evaluator(const std::vector<RationalVector>& shifted, const RationalVector& linear) {
    auto rows = shifted;
    rows.push_back(linear);
    auto ints = integerize(rows);
    a = ints.rows.back();
    ints.rows.pop_back();
    v = std::move(ints.rows);
    scale = ints.scale;
  }

  std::pair<i128, i128> at(const std::vector<long long>& lambda) const {
    i128 h = idot(v.front(), lambda);
    for (std::size_t i = 1; i < v.size(); ++i) h = std::min(h, idot(v[i], lambda));
    return {idot(a, lambda), h};
  }
};

inline std::vector<RationalVector> shifted_weights(const WeightSystem& ws, const Support& s) {
  std::vector<RationalVector> out;
  for (auto i : s.indices()) {
    RationalVector row(ws.rank);
    for (std::size_t j = 0; j < ws.rank; ++j) row[j] = ws.theta[j] - ws.weights[i][j];
    out.push_back(std::move(row));
  }
  return out;
}

inline RationalVector metric_image(const WeightSystem& ws, const std::vector<long long>& dP) {
  RationalVector out(ws.rank);
  const auto& m = ws.metric.matrix();
  for (std::size_t j = 0; j < ws.rank; ++j)
    for (std::size_t l = 0; l < ws.rank; ++l) out[j] += m[j][l] * Rational(dP[l]);
  return out;
}

/// Generic scan: weight(λ) = (p·H − q·A) / (q·scale) for k = p/q.
inline OracleVerdict scan(const Evaluator& ev, std::size_t rank, const Rational& k, long long radius) {
  if (radius < 1) throw input_error("oracle: lattice radius must be >= 1");
  if (!k.numerator().fits_slong_p() || !k.denominator().fits_slong_p()) throw input_error("oracle: k too large");
  const i128 p = k.numerator().get_si(), q = k.denominator().get_si();
  OracleVerdict out;
  for (const auto& lambda : lattice_box(rank, radius)) {
    ++out.points_scanned;
    auto [A, H] = ev.at(lambda);
    i128 w = p * H - q * A;
    if (w > 0) {
      out.semistable = false;
      out.witness = OneParameterSubgroup{lambda};
      out.witness_weight = from_i128(w) / (from_i128(q) * Rational(ev.scale, 1));
      return out;
    }
  }
  return out;
}

}  // namespace detail

/// Semistable iff no λ in the box of the budget radius has positive
/// Hilbert–Mumford weight. Sound only when the radius covers the certificate
/// radius supplied by the analytic side.
inline OracleVerdict brute_force_classify(const WeightSystem& ws, const Support& s, const OracleBudget& budget) {
  detail::Evaluator ev(detail::shifted_weights(ws, s), RationalVector(ws.rank));
  return detail::scan(ev, ws.rank, Rational(1), budget.lattice_radius);
}

inline OracleVerdict brute_force_mundet(const GaugedMapDatum& d, const Rational& k, const OracleBudget& budget) {
  if (k.sign() <= 0) throw input_error("oracle: k must be positive");
  detail::Evaluator ev(detail::shifted_weights(d.ws, d.support), detail::metric_image(d.ws, d.dP));
  return detail::scan(ev, d.ws.rank, k, budget.lattice_radius);
}

struct WallBracket {
  Rational lo;
  Rational hi;
  bool semistable_lo = false;
  bool semistable_hi = false;
};

/// Consecutive grid values where the brute-force verdict changes.
inline std::vector<WallBracket> scan_walls(const WeightSystem& ws, const Support& s, const std::vector<long long>& dP,
                                           const std::vector<Rational>& grid, long long radius) {
  if (dP.size() != ws.rank) throw input_error("scan_walls: dP has wrong dimension");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i].sign() <= 0) throw input_error("scan_walls: grid values must be positive");
    if (i && !(grid[i - 1] < grid[i])) throw input_error("scan_walls: grid must be strictly increasing");
  }
  if (radius < 1) throw input_error("scan_walls: radius must be >= 1");
  detail::Evaluator ev(detail::shifted_weights(ws, s), detail::metric_image(ws, dP));
  std::vector<std::pair<detail::i128, detail::i128>> values;
  for (const auto& lambda : lattice_box(ws.rank, radius)) values.push_back(ev.at(lambda));
  auto semistable_at = [&](const Rational& k) {
    const detail::i128 p = k.numerator().get_si(), q = k.denominator().get_si();
    for (auto [A, H] : values)
      if (p * H - q * A > 0) return false;
    return true;
  };
  std::vector<WallBracket> out;
  std::optional<bool> prev;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    bool cur = semistable_at(grid[i]);
    if (prev && *prev != cur) out.push_back({grid[i - 1], grid[i], *prev, cur});
    prev = cur;
  }
  return out;
}

/// Every positive k = a(λ)/h(λ) at which the weight of some λ in the box
/// changes sign, together with midpoints and the points min/2 and 2·max.
/// Suitable as a scan grid: each verdict change happens at one of these k.
inline std::vector<Rational> critical_k_grid(const WeightSystem& ws, const Support& s, const std::vector<long long>& dP,
                                             long long radius) {
  if (dP.size() != ws.rank) throw input_error("critical_k_grid: dP has wrong dimension");
  detail::Evaluator ev(detail::shifted_weights(ws, s), detail::metric_image(ws, dP));
  std::set<Rational> crit;
  for (const auto& lambda : lattice_box(ws.rank, radius)) {
    auto [A, H] = ev.at(lambda);
    if (H == 0) continue;
    Rational k = detail::from_i128(A) / detail::from_i128(H);
    if (k.sign() > 0) crit.insert(k);
  }
  if (crit.empty()) return {Rational(1)};
  std::vector<Rational> pts(crit.begin(), crit.end());
  std::vector<Rational> grid{pts.front() / Rational(2)};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) grid.push_back((pts[i - 1] + pts[i]) / Rational(2));
    grid.push_back(pts[i]);
  }
  grid.push_back(pts.back() * Rational(2));
  return grid;
}

// ---------------------------------------------------------------------------
// Scaled-type enumeration oracle

struct TreeCheckReport {
  int n = 0;
  scaled::CurveMode mode = scaled::CurveMode::Projective;
  int vertex_cap = 0;
  std::size_t oracle_count = 0;
  std::size_t enumerated_count = 0;
  std::vector<std::string> only_in_oracle;
  std::vector<std::string> only_in_enumeration;

  bool empty() const { return only_in_oracle.empty() && only_in_enumeration.empty(); }
};

namespace detail {

/// Rooted unlabeled tree as a preorder parent array.
using Shape = std::vector<int>;

/// All rooted trees with exactly `size` vertices, each once. Not thread-safe.
inline const std::vector<Shape>& shapes_of_size(int size) {
  static std::map<int, std::vector<Shape>> memo;
  if (auto it = memo.find(size); it != memo.end()) return it->second;
  std::vector<Shape> out;
  if (size == 1) {
    out.push_back({-1});
  } else {
    // Children as a nondecreasing sequence of (subtree size, subtree index).
    std::vector<std::pair<int, int>> chosen;
    std::function<void(int, std::pair<int, int>)> pick = [&](int remaining, std::pair<int, int> min_key) {
      if (remaining == 0) {
        Shape s{-1};
        for (auto [sz, idx] : chosen) {
          const Shape& sub = shapes_of_size(sz)[idx];
          int offset = static_cast<int>(s.size());
          for (std::size_t i = 0; i < sub.size(); ++i) s.push_back(i == 0 ? 0 : sub[i] + offset);
        }
        out.push_back(std::move(s));
        return;
      }
      for (int sz = min_key.first; sz <= remaining; ++sz) {
        int count = static_cast<int>(shapes_of_size(sz).size());
        for (int idx = sz == min_key.first ? min_key.second : 0; idx < count; ++idx) {
          chosen.emplace_back(sz, idx);
          pick(remaining - sz, {sz, idx});
          chosen.pop_back();
        }
      }
    };
    pick(size - 1, {1, 0});
  }
  return memo.emplace(size, std::move(out)).first->second;
}

// Classes: 0 Zero, 1 Transition, 2 Infinite. Projective root: 3 FreeDelta,
// 4 ForcedInfinite.
constexpr int kZero = 0, kTrans = 1, kInf = 2, kFree = 3, kForced = 4;

inline bool edge_ok(int parent, int child) {
  switch (parent) {
    case kInf:
    case kForced: return true;
    default: return child == kZero;  // Zero, Transition, FreeDelta
  }
}

struct Candidate {
  const Shape* shape;
  std::vector<int> cls;
  std::vector<int> mark_vertex;  // per marking label 1..n (index label−1)
};

inline std::string oracle_encoding(bool affine, const std::vector<int>& parent, const std::vector<int>& cls,
                                   const std::vector<std::vector<int>>& marks) {
  std::vector<std::vector<int>> kids(parent.size());
  for (std::size_t i = 0; i < parent.size(); ++i)
    if (parent[i] >= 0) kids[parent[i]].push_back(static_cast<int>(i));
  std::function<std::string(int)> enc = [&](int v) {
    std::string s = "<" + std::to_string(cls[v]) + ";";
    auto m = marks[v];
    std::sort(m.begin(), m.end());
    for (int x : m) s += std::to_string(x) + ".";
    std::vector<std::string> sub;
    for (int c : kids[v]) sub.push_back(enc(c));
    std::sort(sub.begin(), sub.end());
    for (const auto& t : sub) s += t;
    return s + ">";
  };
  int root = static_cast<int>(std::find(parent.begin(), parent.end(), -1) - parent.begin());
  return std::string(affine ? "a" : "p") + enc(root);
}

/// Oracle encoding of a type read straight from its fields.
inline std::string oracle_encoding(const scaled::CombinatorialType& t) {
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < t.vertices.size(); ++i) index[t.vertices[i].id] = static_cast<int>(i);
  std::vector<int> parent(t.vertices.size(), -1), cls(t.vertices.size());
  std::vector<std::vector<int>> marks(t.vertices.size());
  for (std::size_t i = 0; i < t.vertices.size(); ++i) {
    const auto& v = t.vertices[i];
    if (v.parent) parent[i] = index.at(*v.parent);
    cls[i] = static_cast<int>(v.cls);
    if (!v.parent && t.mode == scaled::CurveMode::Projective)
      cls[i] = t.root_class == scaled::RootClass::FreeDelta ? kFree : kForced;
  }
  for (const auto& [label, id] : t.markings) marks[index.at(id)].push_back(label);
  return oracle_encoding(t.mode == scaled::CurveMode::Affine, parent, cls, marks);
}

}  // namespace detail

/// All types found by generating every rooted tree up to the cap, every class
/// and marking assignment, and keeping the valid stable ones (oracle
/// encodings).
inline std::set<std::string> brute_force_types(int n, scaled::CurveMode mode, int cap) {
  using namespace detail;
  if (n < 0 || n > 6) throw input_error("exhaustive_tree_check: n must be in [0, 6]");
  if (cap < 1) throw input_error("exhaustive_tree_check: vertex cap must be >= 1");
  const bool affine = mode == scaled::CurveMode::Affine;
  std::set<std::string> found;
  for (int size = 1; size <= cap; ++size) {
    for (const Shape& shape : shapes_of_size(size)) {
      std::vector<int> nchildren(size, 0);
      for (int i = 1; i < size; ++i) ++nchildren[shape[i]];
      int leaves = 0;
      for (int i = 1; i < size; ++i) leaves += nchildren[i] == 0;
      if (leaves > n) continue;  // every non-root leaf needs a marking

      std::vector<int> cls(size);
      std::vector<int> root_options = affine ? std::vector<int>{kTrans, kInf} : std::vector<int>{kFree, kForced};
      std::function<void(int)> assign = [&](int v) {
        if (v < size) {
          for (int c : {kZero, kTrans, kInf}) {
            if (!edge_ok(cls[shape[v]], c)) continue;
            cls[v] = c;
            assign(v + 1);
          }
          return;
        }
        // Root class consistency.
        bool any_nonzero = false;
        for (int i = 1; i < size; ++i) any_nonzero |= cls[i] != kZero;
        if (cls[0] == kForced && !any_nonzero) return;
        if (cls[0] == kFree && any_nonzero) return;
        // Markable vertices and deficits.
        std::vector<int> markable;
        int deficit_total = 0;
        for (int i = 0; i < size; ++i) {
          bool can_mark = cls[i] == kZero || cls[i] == kTrans || cls[i] == kFree;
          if (can_mark) markable.push_back(i);
          if (i == 0 && !affine) continue;
          int special = nchildren[i] + 1;  // parent edge, or z0 on the affine root
          int need = (cls[i] == kTrans ? 2 : 3) - special;
          if (need > 0) {
            if (!can_mark) return;
            deficit_total += need;
          }
        }
        if (deficit_total > n) return;
        std::vector<std::vector<int>> marks(size);
        std::function<void(int)> place = [&](int label) {
          if (label > n) {
            for (int i = 0; i < size; ++i) {
              if (i == 0 && !affine) continue;
              int special = nchildren[i] + 1 + static_cast<int>(marks[i].size());
              if (special < (cls[i] == kTrans ? 2 : 3)) return;
            }
            if (size == cap) throw input_error("exhaustive_tree_check: vertex cap too small");
            found.insert(oracle_encoding(affine, shape, cls, marks));
            return;
          }
          for (int v : markable) {
            marks[v].push_back(label);
            place(label + 1);
            marks[v].pop_back();
          }
        };
        place(1);
      };
      for (int rc : root_options) {
        cls[0] = rc;
        assign(1);
      }
    }
  }
  return found;
}

inline TreeCheckReport exhaustive_tree_check(int n, scaled::CurveMode mode, const OracleBudget& budget) {
  TreeCheckReport rep;
  rep.n = n;
  rep.mode = mode;
  rep.vertex_cap = budget.tree_vertex_cap > 0 ? budget.tree_vertex_cap : 2 * n + 2;
  auto oracle_side = brute_force_types(n, mode, rep.vertex_cap);
  std::set<std::string> enum_side;
  for (const auto& t : scaled::enumerate_types(n, mode)) enum_side.insert(detail::oracle_encoding(t));
  rep.oracle_count = oracle_side.size();
  rep.enumerated_count = enum_side.size();
  std::set_difference(oracle_side.begin(), oracle_side.end(), enum_side.begin(), enum_side.end(),
                      std::back_inserter(rep.only_in_oracle));
  std::set_difference(enum_side.begin(), enum_side.end(), oracle_side.begin(), oracle_side.end(),
                      std::back_inserter(rep.only_in_enumeration));
  return rep;
}

}  // namespace gitgauge::oracle
