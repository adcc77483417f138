#pragma once

// Combinatorial types of stable scaled marked curves over a smooth curve C
// (projective mode) and of affine scaled curves (affine mode): validation,
// stability, enumeration up to isomorphism, stratum dimensions and the
// tropical limit of scalings under node smoothing.
//
// A type is a rooted tree. In projective mode the root is the component
// mapping isomorphically to C; in affine mode the root carries the extra
// marking z0 where the scaling is infinite. Every other vertex is a bubble
// with scaling class Zero, Transition (finite nonzero) or Infinite.

#include "gitgauge/linalg.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace gitgauge::scaled {

enum class ScalingClass { Zero, Transition, Infinite };
enum class RootClass { FreeDelta, ForcedInfinite };
enum class CurveMode { Projective, Affine };

inline int order(ScalingClass c) { return static_cast<int>(c); }

inline const char* to_string(ScalingClass c) {
  switch (c) {
    case ScalingClass::Zero: return "zero";
    case ScalingClass::Transition: return "transition";
    case ScalingClass::Infinite: return "infinite";
  }
  return "?";
}
inline const char* to_string(RootClass c) { return c == RootClass::FreeDelta ? "free_delta" : "forced_infinite"; }
inline const char* to_string(CurveMode m) { return m == CurveMode::Projective ? "projective" : "affine"; }

struct TypeVertex {
  std::string id;
  std::optional<std::string> parent;
  /// Ignored for the projective root, which uses CombinatorialType::root_class.
  ScalingClass cls = ScalingClass::Zero;
};

struct CombinatorialType {
  CurveMode mode = CurveMode::Projective;
  std::vector<TypeVertex> vertices;
  RootClass root_class = RootClass::FreeDelta;
  /// marking label (1-based) -> vertex id
  std::map<int, std::string> markings;
  /// affine mode: id of the vertex carrying z0 (must be the root)
  std::optional<std::string> z0;

  std::size_t marking_count() const { return markings.size(); }
};

struct Violation {
  std::string code;
  std::string message;
  std::string vertex;
};

/// Index-based view of a structurally sound type.
struct TreeView {
  std::size_t root = 0;
  std::vector<std::optional<std::size_t>> parent;
  std::vector<std::vector<std::size_t>> children;
  std::vector<std::vector<int>> marks;
  std::map<std::string, std::size_t> index;
};

namespace detail {

/// Builds the index view; appends structural violations (ids, root, cycles).
inline std::optional<TreeView> build_view(const CombinatorialType& t, std::vector<Violation>* out) {
  auto report = [&](std::string code, std::string msg, std::string v) {
    if (out) out->push_back({std::move(code), std::move(msg), std::move(v)});
  };
  TreeView view;
  const std::size_t n = t.vertices.size();
  bool ok = true;
  for (std::size_t i = 0; i < n; ++i)
    if (!view.index.emplace(t.vertices[i].id, i).second) {
      report("duplicate_id", "duplicate vertex id", t.vertices[i].id);
      ok = false;
    }
  if (!ok) return std::nullopt;
  view.parent.resize(n);
  view.children.resize(n);
  view.marks.resize(n);
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& v = t.vertices[i];
    if (!v.parent) {
      roots.push_back(i);
      continue;
    }
    auto it = view.index.find(*v.parent);
    if (it == view.index.end()) {
      report("unknown_parent", "parent '" + *v.parent + "' does not exist", v.id);
      ok = false;
      continue;
    }
    view.parent[i] = it->second;
    view.children[it->second].push_back(i);
  }
  if (roots.size() != 1) {
    report(roots.empty() ? "missing_root" : "multiple_roots",
           roots.empty() ? "no root vertex (every vertex has a parent)" : "more than one root vertex", "");
    return std::nullopt;
  }
  if (!ok) return std::nullopt;
  view.root = roots.front();
  // Connected and acyclic iff every vertex is reached from the root.
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{view.root};
  std::size_t reached = 0;
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    if (seen[v]) continue;
    seen[v] = true;
    ++reached;
    for (auto c : view.children[v]) stack.push_back(c);
  }
  if (reached != n) {
    for (std::size_t i = 0; i < n; ++i)
      if (!seen[i]) {
        report("cycle", "vertex is on a cycle or disconnected from the root", t.vertices[i].id);
        break;
      }
    return std::nullopt;
  }
  for (const auto& [label, id] : t.markings) {
    auto it = view.index.find(id);
    if (it != view.index.end()) view.marks[it->second].push_back(label);
  }
  return view;
}

/// Scaling class used for monotonicity; the projective FreeDelta root only
/// admits Zero children, which the root-class check enforces separately.
inline ScalingClass effective_class(const CombinatorialType& t, const TreeView& view, std::size_t v) {
  if (v == view.root && t.mode == CurveMode::Projective)
    return t.root_class == RootClass::ForcedInfinite ? ScalingClass::Infinite : ScalingClass::Zero;
  return t.vertices[v].cls;
}

}  // namespace detail

inline std::vector<Violation> validate_type(const CombinatorialType& t) {
  std::vector<Violation> out;
  auto view = detail::build_view(t, &out);
  if (!view) return out;
  const auto& vs = t.vertices;

  // Monotonicity along every edge: classes never increase, and a Transition
  // vertex only has Zero below it.
  for (std::size_t v = 0; v < vs.size(); ++v) {
    if (v == view->root) continue;
    std::size_t p = *view->parent[v];
    if (p == view->root && t.mode == CurveMode::Projective) continue;
    ScalingClass pc = detail::effective_class(t, *view, p), vc = vs[v].cls;
    if (pc == ScalingClass::Transition && vc == ScalingClass::Transition)
      out.push_back({"two_transitions", "two transitions on a path", vs[v].id});
    else if (order(vc) > order(pc))
      out.push_back({"scaling_increases", "scaling class increases along a root-to-leaf path", vs[v].id});
  }

  const auto& root = vs[view->root];
  if (t.mode == CurveMode::Projective) {
    bool any_nonzero = false;
    for (std::size_t v = 0; v < vs.size(); ++v)
      if (v != view->root && vs[v].cls != ScalingClass::Zero) any_nonzero = true;
    if (t.root_class == RootClass::FreeDelta && any_nonzero)
      out.push_back({"root_class", "free-delta root requires every bubble to have zero scaling", root.id});
    if (t.root_class == RootClass::ForcedInfinite && !any_nonzero)
      out.push_back({"root_class", "forced-infinite root requires a bubble with nonzero scaling", root.id});
    if (t.z0) out.push_back({"z0_placement", "z0 is only meaningful in affine mode", *t.z0});
  } else {
    if (root.cls == ScalingClass::Zero)
      out.push_back({"affine_root_class", "affine distinguished vertex must be transition or infinite", root.id});
    if (!t.z0 || *t.z0 != root.id)
      out.push_back({"z0_placement", "z0 must sit on the distinguished root vertex", t.z0.value_or("")});
  }

  int expected = 1;
  for (const auto& [label, id] : t.markings) {
    if (label != expected++) {
      out.push_back({"marking_labels", "marking labels must be exactly 1..n", id});
      break;
    }
  }
  for (const auto& [label, id] : t.markings) {
    auto it = view->index.find(id);
    if (it == view->index.end()) {
      out.push_back({"marking_vertex", "marking " + std::to_string(label) + " refers to an unknown vertex", id});
      continue;
    }
    if (detail::effective_class(t, *view, it->second) == ScalingClass::Infinite)
      out.push_back({"marking_on_infinite", "marking on infinite-scaling component", id});
  }
  return out;
}

inline void require_valid(const CombinatorialType& t) {
  auto v = validate_type(t);
  if (!v.empty()) throw input_error("invalid combinatorial type: " + v.front().message + " (" + v.front().vertex + ")");
}

inline TreeView view_of(const CombinatorialType& t) {
  require_valid(t);
  return *detail::build_view(t, nullptr);
}

struct VertexCount {
  std::string id;
  int special = 0;
  /// 0 for the exempt projective root.
  int required = 0;
};

struct StabilityReport {
  bool stable = true;
  std::vector<VertexCount> vertices;
};

inline int special_points(const CombinatorialType& t, const TreeView& view, std::size_t v) {
  int s = static_cast<int>(view.marks[v].size() + view.children[v].size());
  if (view.parent[v]) ++s;
  if (t.mode == CurveMode::Affine && v == view.root) ++s;  // z0
  return s;
}

inline StabilityReport is_stable_type(const CombinatorialType& t) {
  auto view = view_of(t);
  StabilityReport rep;
  for (std::size_t v = 0; v < t.vertices.size(); ++v) {
    VertexCount c{t.vertices[v].id, special_points(t, view, v), 0};
    bool exempt = v == view.root && t.mode == CurveMode::Projective;
    if (!exempt) c.required = t.vertices[v].cls == ScalingClass::Transition ? 2 : 3;
    if (c.special < c.required) rep.stable = false;
    rep.vertices.push_back(std::move(c));
  }
  return rep;
}

inline std::string canonical_form(const CombinatorialType& t) {
  auto view = view_of(t);
  std::function<std::string(std::size_t)> enc = [&](std::size_t v) {
    std::string s;
    if (v == view.root && t.mode == CurveMode::Projective)
      s = t.root_class == RootClass::FreeDelta ? "F" : "R";
    else
      s = t.vertices[v].cls == ScalingClass::Zero ? "Z" : t.vertices[v].cls == ScalingClass::Transition ? "T" : "I";
    auto marks = view.marks[v];
    std::sort(marks.begin(), marks.end());
    s += "{";
    for (std::size_t i = 0; i < marks.size(); ++i) s += (i ? "," : "") + std::to_string(marks[i]);
    s += "}(";
    std::vector<std::string> kids;
    for (auto c : view.children[v]) kids.push_back(enc(c));
    std::sort(kids.begin(), kids.end());
    for (const auto& k : kids) s += k;
    return s + ")";
  };
  return std::string(t.mode == CurveMode::Projective ? "P:" : "A:") + enc(view.root);
}

inline std::size_t edge_count(const CombinatorialType& t) { return t.vertices.size() - 1; }

inline std::size_t transition_count(const CombinatorialType& t, const TreeView& view) {
  std::size_t n = 0;
  for (std::size_t v = 0; v < t.vertices.size(); ++v) {
    bool projective_root = v == view.root && t.mode == CurveMode::Projective;
    if (!projective_root && t.vertices[v].cls == ScalingClass::Transition) ++n;
  }
  return n;
}

namespace detail {

inline void require_stable(const CombinatorialType& t) {
  if (!is_stable_type(t).stable) throw input_error("combinatorial type is not stable");
}

}  // namespace detail

/// Sum of local contributions: the projective root contributes its special
/// points (positions on C) plus one for a free scaling; each other vertex
/// contributes s(v) − dim Aut, with a two-dimensional automorphism group for
/// transition components (affine structure) and three otherwise.
inline long long stratum_dimension(const CombinatorialType& t) {
  detail::require_stable(t);
  auto view = view_of(t);
  long long dim = 0;
  for (std::size_t v = 0; v < t.vertices.size(); ++v) {
    long long s = special_points(t, view, v);
    if (v == view.root && t.mode == CurveMode::Projective) {
      dim += s + (t.root_class == RootClass::FreeDelta ? 1 : 0);
      continue;
    }
    long long c = s - (t.vertices[v].cls == ScalingClass::Transition ? 2 : 3);
    if (c < 0) throw std::logic_error("negative dimension contribution on a stable type");
    dim += c;
  }
  return dim;
}

/// One smoothing parameter per node, less one balancing relation per extra
/// transition component, plus the scaling on the root when it is tied to
/// the bubbles.
inline long long stratum_codimension(const CombinatorialType& t) {
  detail::require_stable(t);
  auto view = view_of(t);
  long long indicator = 1;
  if (t.mode == CurveMode::Projective) indicator = t.root_class == RootClass::ForcedInfinite ? 1 : 0;
  return static_cast<long long>(edge_count(t)) - static_cast<long long>(transition_count(t, view)) + indicator;
}

/// Root-to-vertex edge indicator vector (edges indexed by child vertex).
inline RationalVector path_vector(const TreeView& view, std::size_t v) {
  RationalVector p(view.parent.size());
  for (std::size_t cur = v; view.parent[cur]; cur = *view.parent[cur]) p[cur] = 1;
  return p;
}

/// Rank of the lattice spanned by the balancing relations between pairs of
/// transition components: the signed edge-exponent vector of the path
/// between them.
inline std::size_t balanced_rank(const CombinatorialType& t) {
  auto view = view_of(t);
  std::vector<std::size_t> trans;
  for (std::size_t v = 0; v < t.vertices.size(); ++v) {
    bool projective_root = v == view.root && t.mode == CurveMode::Projective;
    if (!projective_root && t.vertices[v].cls == ScalingClass::Transition) trans.push_back(v);
  }
  RationalMatrix relations;
  for (std::size_t a = 0; a < trans.size(); ++a)
    for (std::size_t b = a + 1; b < trans.size(); ++b)
      relations.push_back(sub(path_vector(view, trans[a]), path_vector(view, trans[b])));
  if (relations.empty()) return 0;
  return rank(std::move(relations));
}

struct StratumReport {
  long long dimension = 0;
  long long codimension = 0;
  std::size_t balanced_rank = 0;
  std::vector<VertexCount> vertex_details;
};

inline StratumReport stratum_report(const CombinatorialType& t) {
  StratumReport r;
  r.dimension = stratum_dimension(t);
  r.codimension = stratum_codimension(t);
  r.balanced_rank = balanced_rank(t);
  r.vertex_details = is_stable_type(t).vertices;
  return r;
}

// ---------------------------------------------------------------------------
// Tropical limit

struct ValuationAssignment {
  /// child vertex id -> valuation of the smoothing parameter of its parent edge
  std::map<std::string, Rational> edge_valuations;
  Rational delta_valuation;
};

struct VertexLimit {
  std::string id;
  Rational weight;
  ScalingClass cls = ScalingClass::Zero;
};

inline ScalingClass class_of_weight(const Rational& w) {
  if (w.sign() < 0) return ScalingClass::Infinite;
  if (w.sign() == 0) return ScalingClass::Transition;
  return ScalingClass::Zero;
}

/// Limit scaling class of every component: the one-form on a component is δ
/// times the product of smoothing parameters along its path to the root, so
/// its valuation is w(v) = val(δ) + Σ val(γ_e) over that path.
/// Only the tree shape of `t` is used.
inline std::vector<VertexLimit> tropical_limit(const CombinatorialType& t, const ValuationAssignment& val) {
  std::vector<Violation> structural;
  auto view = detail::build_view(t, &structural);
  if (!view) throw input_error("tropical_limit: invalid tree shape: " + structural.front().message);
  for (std::size_t v = 0; v < t.vertices.size(); ++v) {
    if (v == view->root) continue;
    auto it = val.edge_valuations.find(t.vertices[v].id);
    if (it == val.edge_valuations.end()) throw input_error("tropical_limit: missing valuation for edge to " + t.vertices[v].id);
    if (it->second.sign() <= 0) throw input_error("tropical_limit: edge valuations must be positive");
  }
  for (const auto& [id, value] : val.edge_valuations) {
    auto it = view->index.find(id);
    if (it == view->index.end() || it->second == view->root)
      throw input_error("tropical_limit: valuation given for unknown edge '" + id + "'");
  }
  std::vector<VertexLimit> out(t.vertices.size());
  std::vector<std::size_t> stack{view->root};
  out[view->root] = {t.vertices[view->root].id, val.delta_valuation, class_of_weight(val.delta_valuation)};
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (auto c : view->children[v]) {
      Rational w = out[v].weight + val.edge_valuations.at(t.vertices[c].id);
      out[c] = {t.vertices[c].id, w, class_of_weight(w)};
      stack.push_back(c);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Enumeration

namespace detail {

struct Node {
  ScalingClass cls = ScalingClass::Zero;
  std::uint32_t marks = 0;
  std::vector<std::shared_ptr<const Node>> children;
  std::string key;  // canonical encoding of the subtree
};
using NodePtr = std::shared_ptr<const Node>;

inline std::string encode_subtree(ScalingClass cls, std::uint32_t marks, const std::vector<NodePtr>& kids) {
  std::string s = cls == ScalingClass::Zero ? "Z" : cls == ScalingClass::Transition ? "T" : "I";
  s += "{";
  bool first = true;
  for (int i = 0; i < 32; ++i)
    if (marks & (1u << i)) {
      s += (first ? "" : ",") + std::to_string(i + 1);
      first = false;
    }
  s += "}(";
  std::vector<std::string> keys;
  for (const auto& k : kids) keys.push_back(k->key);
  std::sort(keys.begin(), keys.end());
  for (const auto& k : keys) s += k;
  return s + ")";
}

/// Set partitions of `mask` into nonempty blocks (canonical: each block
/// contains the lowest remaining element).
inline void set_partitions(std::uint32_t mask, std::vector<std::uint32_t>& cur,
                           const std::function<void(const std::vector<std::uint32_t>&)>& emit) {
  if (mask == 0) {
    emit(cur);
    return;
  }
  std::uint32_t low = mask & (~mask + 1);
  std::uint32_t rest = mask ^ low;
  // iterate subsets of rest
  for (std::uint32_t sub = rest;; sub = (sub - 1) & rest) {
    cur.push_back(low | sub);
    set_partitions(rest ^ sub, cur, emit);
    cur.pop_back();
    if (sub == 0) break;
  }
}

inline std::vector<ScalingClass> allowed_children(ScalingClass parent) {
  switch (parent) {
    case ScalingClass::Infinite: return {ScalingClass::Zero, ScalingClass::Transition, ScalingClass::Infinite};
    default: return {ScalingClass::Zero};
  }
}

class Generator {
public:
  /// All stable subtrees (hanging from a parent edge) with vertex class `cls`
  /// whose markings are exactly `mask`.
  const std::vector<NodePtr>& subtrees(std::uint32_t mask, ScalingClass cls) {
    auto key = std::make_pair(mask, cls);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<NodePtr> out;
    const int required = cls == ScalingClass::Transition ? 2 : 3;
    for_each_vertex(mask, cls, cls != ScalingClass::Infinite, 1, required, allowed_children(cls), false,
                    [&](NodePtr n) { out.push_back(std::move(n)); });
    return memo_.emplace(key, std::move(out)).first->second;
  }

  /// Enumerates vertices of class `cls` with markings drawn from `mask`: own
  /// markings A ⊆ mask (if allowed), the rest split into child blocks.
  /// `extra` counts special points not in A or children (parent edge, z0).
  void for_each_vertex(std::uint32_t mask, ScalingClass cls, bool may_mark, int extra, int required,
                       const std::vector<ScalingClass>& child_classes, bool need_nonzero_child,
                       const std::function<void(NodePtr)>& emit) {
    auto own_options = may_mark ? subsets_of(mask) : std::vector<std::uint32_t>{0};
    for (std::uint32_t own : own_options) {
      std::uint32_t rest = mask ^ own;
      std::vector<std::uint32_t> cur;
      set_partitions(rest, cur, [&](const std::vector<std::uint32_t>& blocks) {
        int special = extra + __builtin_popcount(own) + static_cast<int>(blocks.size());
        if (special < required) return;
        // A single child carrying every marking with nothing else on this
        // vertex only terminates via Transition -> Zero.
        std::vector<NodePtr> chosen;
        expand(blocks, 0, child_classes, need_nonzero_child, false, chosen, [&](const std::vector<NodePtr>& kids) {
          auto n = std::make_shared<Node>();
          n->cls = cls;
          n->marks = own;
          n->children = kids;
          n->key = encode_subtree(cls, own, kids);
          emit(std::move(n));
        });
      });
    }
  }

private:
  static std::vector<std::uint32_t> subsets_of(std::uint32_t mask) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t sub = mask;; sub = (sub - 1) & mask) {
      out.push_back(sub);
      if (sub == 0) break;
    }
    return out;
  }

  void expand(const std::vector<std::uint32_t>& blocks, std::size_t i, const std::vector<ScalingClass>& classes,
              bool need_nonzero, bool have_nonzero, std::vector<NodePtr>& chosen,
              const std::function<void(const std::vector<NodePtr>&)>& emit) {
    if (i == blocks.size()) {
      if (!need_nonzero || have_nonzero) emit(chosen);
      return;
    }
    for (auto c : classes) {
      const auto& options = subtrees(blocks[i], c);
      for (const auto& opt : options) {
        chosen.push_back(opt);
        expand(blocks, i + 1, classes, need_nonzero, have_nonzero || c != ScalingClass::Zero, chosen, emit);
        chosen.pop_back();
      }
    }
  }

  std::map<std::pair<std::uint32_t, ScalingClass>, std::vector<NodePtr>> memo_;
};

inline CombinatorialType materialize(CurveMode mode, RootClass root_class, const Node& root) {
  CombinatorialType t;
  t.mode = mode;
  t.root_class = root_class;
  std::function<void(const Node&, std::optional<std::string>)> walk = [&](const Node& n,
                                                                         std::optional<std::string> parent) {
    std::string id = "v" + std::to_string(t.vertices.size());
    t.vertices.push_back({id, parent, n.cls});
    for (int i = 0; i < 32; ++i)
      if (n.marks & (1u << i)) t.markings[i + 1] = id;
    std::vector<const Node*> kids;
    for (const auto& k : n.children) kids.push_back(k.get());
    std::sort(kids.begin(), kids.end(), [](const Node* a, const Node* b) { return a->key < b->key; });
    for (const auto* k : kids) walk(*k, id);
  };
  walk(root, std::nullopt);
  if (mode == CurveMode::Affine) t.z0 = t.vertices.front().id;
  return t;
}

}  // namespace detail

/// Every stable type with markings 1..n up to isomorphism, sorted by
/// canonical form.
inline std::vector<CombinatorialType> enumerate_types(int n, CurveMode mode) {
  if (n < 0 || n > 12) throw input_error("enumerate_types: n must be in [0, 12]");
  const std::uint32_t all = n == 0 ? 0 : ((1u << n) - 1);
  detail::Generator gen;
  std::vector<CombinatorialType> out;
  auto collect = [&](RootClass rc) {
    return [&, rc](detail::NodePtr root) { out.push_back(detail::materialize(mode, rc, *root)); };
  };
  const std::vector<ScalingClass> any = {ScalingClass::Zero, ScalingClass::Transition, ScalingClass::Infinite};
  if (mode == CurveMode::Projective) {
    // The root is exempt from stability.
    gen.for_each_vertex(all, ScalingClass::Zero, true, 0, 0, {ScalingClass::Zero}, false,
                        collect(RootClass::FreeDelta));
    gen.for_each_vertex(all, ScalingClass::Infinite, false, 0, 0, any, true, collect(RootClass::ForcedInfinite));
  } else {
    gen.for_each_vertex(all, ScalingClass::Transition, true, 1, 2, {ScalingClass::Zero}, false,
                        collect(RootClass::FreeDelta));
    gen.for_each_vertex(all, ScalingClass::Infinite, false, 1, 3, any, false, collect(RootClass::FreeDelta));
  }
  std::vector<std::pair<std::string, CombinatorialType>> keyed;
  for (auto& t : out) keyed.emplace_back(canonical_form(t), std::move(t));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
              keyed.end());
  std::vector<CombinatorialType> result;
  for (auto& [k, t] : keyed) result.push_back(std::move(t));
  return result;
}

}  // namespace gitgauge::scaled
