#pragma once

// JSON encoding of weight systems, gauged-map data, scaled types and
// valuations. Rationals are written as integers when integral and as "p/q"
// strings otherwise; supports are 1-based on the wire.

#include "gitgauge/mundet.hpp"
#include "gitgauge/scaled.hpp"

#include <json.hpp>

#include <initializer_list>
#include <set>
#include <string>
#include <vector>

namespace gitgauge::io {

using json = nlohmann::json;

inline json to_json(const Rational& q) {
  if (q.is_integer() && q.numerator().fits_slong_p()) return json(static_cast<long long>(q.numerator().get_si()));
  return json(q.str());
}

inline json to_json(const RationalVector& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

inline Rational rational_from(const json& j, const std::string& what) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  throw input_error(what + ": expected an integer or a \"p/q\" string");
}

inline RationalVector vector_from(const json& j, const std::string& what) {
  if (!j.is_array()) throw input_error(what + ": expected an array");
  RationalVector out;
  for (const auto& x : j) out.push_back(rational_from(x, what));
  return out;
}

inline long long integer_from(const json& j, const std::string& what) {
  if (!j.is_number_integer()) throw input_error(what + ": expected an integer");
  return j.get<long long>();
}

inline std::vector<long long> integers_from(const json& j, const std::string& what) {
  if (!j.is_array()) throw input_error(what + ": expected an array of integers");
  std::vector<long long> out;
  for (const auto& x : j) out.push_back(integer_from(x, what));
  return out;
}

inline void require_object(const json& j, const std::string& what) {
  if (!j.is_object()) throw input_error(what + ": expected a JSON object");
}

inline void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& what) {
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) throw input_error(what + ": unknown key '" + it.key() + "'");
}

inline const json& field(const json& j, const char* key, const std::string& what) {
  auto it = j.find(key);
  if (it == j.end()) throw input_error(what + ": missing key '" + key + "'");
  return *it;
}

// ---------------------------------------------------------------------------
// Weight systems and supports

inline json support_to_json(const Support& s) {
  json out = json::array();
  for (auto i : s.indices()) out.push_back(i + 1);
  return out;
}

inline Support support_from(const json& j, std::size_t m) {
  if (!j.is_array() || j.empty()) throw input_error("support: expected a nonempty array of 1-based indices");
  std::vector<std::size_t> idx;
  for (const auto& x : j) {
    long long v = integer_from(x, "support");
    if (v < 1 || static_cast<std::size_t>(v) > m) throw input_error("support: index out of range 1.." + std::to_string(m));
    idx.push_back(static_cast<std::size_t>(v - 1));
  }
  return Support(std::move(idx), m);
}

inline json to_json(const WeightSystem& ws) {
  json out;
  out["rank"] = ws.rank;
  json w = json::array();
  for (const auto& mu : ws.weights) w.push_back(to_json(mu));
  out["weights"] = std::move(w);
  out["theta"] = to_json(ws.theta);
  if (!ws.metric.is_identity()) {
    json m = json::array();
    for (const auto& row : ws.metric.matrix()) m.push_back(to_json(row));
    out["metric"] = std::move(m);
  }
  return out;
}

inline WeightSystem weight_system_from(const json& j) {
  require_object(j, "weight system");
  long long r = integer_from(field(j, "rank", "weight system"), "rank");
  if (r < 1 || r > 16) throw input_error("weight system: rank must be in [1, 16]");
  const json& wj = field(j, "weights", "weight system");
  if (!wj.is_array()) throw input_error("weights: expected an array of vectors");
  std::vector<RationalVector> weights;
  for (const auto& w : wj) weights.push_back(vector_from(w, "weights"));
  RationalVector theta = vector_from(field(j, "theta", "weight system"), "theta");
  if (auto it = j.find("metric"); it != j.end()) {
    if (!it->is_array()) throw input_error("metric: expected a matrix");
    RationalMatrix m;
    for (const auto& row : *it) m.push_back(vector_from(row, "metric"));
    return WeightSystem(static_cast<std::size_t>(r), std::move(weights), std::move(theta), InnerProduct(std::move(m)));
  }
  return WeightSystem(static_cast<std::size_t>(r), std::move(weights), std::move(theta));
}

/// Weight system plus optional support (full support when absent).
inline std::pair<WeightSystem, Support> classify_input_from(const json& j) {
  require_object(j, "input");
  reject_unknown_keys(j, {"rank", "weights", "theta", "metric", "support"}, "input");
  auto ws = weight_system_from(j);
  Support s = j.contains("support") ? support_from(j["support"], ws.size()) : Support::all(ws.size());
  return {std::move(ws), std::move(s)};
}

// ---------------------------------------------------------------------------
// Gauged-map data

inline json to_json(const GaugedMapDatum& d) {
  json out = to_json(d.ws);
  out["dP"] = d.dP;
  out["du"] = d.du;
  out["support"] = support_to_json(d.support);
  out["energy"] = to_json(energy(d));
  return out;
}

inline GaugedMapDatum datum_from(const json& j) {
  require_object(j, "datum");
  reject_unknown_keys(j, {"rank", "weights", "theta", "metric", "support", "dP", "du", "energy"}, "datum");
  auto ws = weight_system_from(j);
  auto dP = integers_from(field(j, "dP", "datum"), "dP");
  long long du = integer_from(field(j, "du", "datum"), "du");
  Support s = support_from(field(j, "support", "datum"), ws.size());
  GaugedMapDatum d(std::move(ws), std::move(dP), du, std::move(s));
  if (auto it = j.find("energy"); it != j.end() && rational_from(*it, "energy") != energy(d))
    throw input_error("datum: stated energy does not match (theta, dP) + du");
  return d;
}

// ---------------------------------------------------------------------------
// Scaled types

inline scaled::ScalingClass scaling_class_from(const std::string& s) {
  if (s == "zero") return scaled::ScalingClass::Zero;
  if (s == "transition") return scaled::ScalingClass::Transition;
  if (s == "infinite") return scaled::ScalingClass::Infinite;
  throw input_error("unknown scaling class '" + s + "'");
}

inline scaled::CurveMode mode_from(const std::string& s) {
  if (s == "projective") return scaled::CurveMode::Projective;
  if (s == "affine") return scaled::CurveMode::Affine;
  throw input_error("mode must be \"projective\" or \"affine\"");
}

inline json to_json(const scaled::CombinatorialType& t) {
  json out;
  out["mode"] = scaled::to_string(t.mode);
  json vs = json::array();
  for (const auto& v : t.vertices) {
    json jv;
    jv["id"] = v.id;
    if (v.parent) jv["parent"] = *v.parent;
    if (!v.parent && t.mode == scaled::CurveMode::Projective)
      jv["class"] = scaled::to_string(t.root_class);
    else
      jv["class"] = scaled::to_string(v.cls);
    vs.push_back(std::move(jv));
  }
  out["vertices"] = std::move(vs);
  json marks = json::object();
  for (const auto& [label, id] : t.markings) marks[std::to_string(label)] = id;
  out["markings"] = std::move(marks);
  if (t.z0) out["z0"] = *t.z0;
  return out;
}

inline scaled::CombinatorialType type_from(const json& j) {
  require_object(j, "type");
  reject_unknown_keys(j, {"mode", "vertices", "markings", "z0"}, "type");
  scaled::CombinatorialType t;
  const json& mj = field(j, "mode", "type");
  if (!mj.is_string()) throw input_error("type: mode must be a string");
  t.mode = mode_from(mj.get<std::string>());
  const json& vj = field(j, "vertices", "type");
  if (!vj.is_array() || vj.empty()) throw input_error("type: vertices must be a nonempty array");
  for (const auto& v : vj) {
    require_object(v, "vertex");
    reject_unknown_keys(v, {"id", "class", "parent"}, "vertex");
    const json& id = field(v, "id", "vertex");
    const json& cls = field(v, "class", "vertex");
    if (!id.is_string() || !cls.is_string()) throw input_error("vertex: id and class must be strings");
    scaled::TypeVertex tv;
    tv.id = id.get<std::string>();
    if (auto p = v.find("parent"); p != v.end()) {
      if (!p->is_string()) throw input_error("vertex: parent must be a string");
      tv.parent = p->get<std::string>();
    }
    std::string c = cls.get<std::string>();
    if (c == "free_delta" || c == "forced_infinite") {
      if (tv.parent || t.mode != scaled::CurveMode::Projective)
        throw input_error("vertex '" + tv.id + "': root classes apply only to the projective root");
      t.root_class = c == "free_delta" ? scaled::RootClass::FreeDelta : scaled::RootClass::ForcedInfinite;
    } else {
      if (!tv.parent && t.mode == scaled::CurveMode::Projective)
        throw input_error("vertex '" + tv.id + "': projective root class must be free_delta or forced_infinite");
      tv.cls = scaling_class_from(c);
    }
    t.vertices.push_back(std::move(tv));
  }
  if (auto m = j.find("markings"); m != j.end()) {
    require_object(*m, "markings");
    for (auto it = m->begin(); it != m->end(); ++it) {
      int label = 0;
      try {
        std::size_t used = 0;
        label = std::stoi(it.key(), &used);
        if (used != it.key().size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw input_error("markings: key '" + it.key() + "' is not an integer label");
      }
      if (!it->is_string()) throw input_error("markings: values must be vertex ids");
      t.markings[label] = it->get<std::string>();
    }
  }
  if (auto z = j.find("z0"); z != j.end()) {
    if (!z->is_string()) throw input_error("z0 must be a vertex id");
    t.z0 = z->get<std::string>();
  }
  return t;
}

inline scaled::ValuationAssignment valuations_from(const json& j) {
  require_object(j, "valuations");
  reject_unknown_keys(j, {"edges", "delta"}, "valuations");
  scaled::ValuationAssignment v;
  const json& edges = field(j, "edges", "valuations");
  require_object(edges, "valuations.edges");
  for (auto it = edges.begin(); it != edges.end(); ++it) v.edge_valuations[it.key()] = rational_from(*it, "edge valuation");
  v.delta_valuation = rational_from(field(j, "delta", "valuations"), "delta");
  return v;
}

}  // namespace gitgauge::io
