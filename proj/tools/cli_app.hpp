#pragma once

// Command-line front end. run() is separate from main so tests can drive it
// with in-memory streams.

#include "gitgauge/gitgauge.hpp"
#include "gitgauge/json_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace gitgauge::cli {

using io::json;

enum ExitCode : int { Ok = 0, InputError = 1, Infeasible = 2 };

struct Options {
  bool pretty = false;
  bool stream = false;
  std::string input;
  std::string valuations;
  std::string k;
  bool large_k = false;
  std::string energy;
  long long genus = 0;
  int n = 0;
  std::string mode = "projective";
  long long radius = 0;
  std::string grid;
  int cap = 0;
};

inline std::string dump(const json& j, bool pretty) { return pretty ? j.dump(2) : j.dump(); }

inline json read_json(const std::string& path, std::istream& in) {
  if (path.empty()) throw input_error("--input is required");
  std::string text;
  if (path == "-") {
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  } else {
    std::ifstream f(path);
    if (!f) throw input_error("cannot open input file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw input_error(std::string("malformed JSON: ") + e.what());
  }
}

inline Rational parse_k(const Options& o) {
  if (o.large_k && !o.k.empty()) throw input_error("--k and --large-k are mutually exclusive");
  if (o.k.empty()) throw input_error("--k or --large-k is required");
  Rational k = Rational::parse(o.k);
  if (k.sign() <= 0) throw input_error("--k must be positive");
  return k;
}

inline std::vector<Rational> parse_grid(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(Rational::parse(item));
  if (out.empty()) throw input_error("--grid must list at least one value");
  return out;
}

inline json stability_json(bool semistable, bool polystable, bool stable) {
  return json{{"semistable", semistable}, {"polystable", polystable}, {"stable", stable}};
}

inline json lambda_json(const std::vector<long long>& l) { return json(l); }

inline json cmd_classify(const Options& o, std::istream& in) {
  auto [ws, s] = io::classify_input_from(read_json(o.input, in));
  auto c = classify(ws, s);
  json out = stability_json(c.semistable, c.polystable, c.stable);
  if (!c.semistable) {
    out["optimal_destabilizer"] = io::to_json(*optimal_destabilizer(ws, s));
    auto w = integer_witness(ws, s);
    out["witness"] = lambda_json(w->lambda);
    out["witness_weight"] = io::to_json(hm_weight(ws, s, *w));
  }
  auto diag = stability_diagnostic(ws, s);
  if (diag.readings_disagree)
    out["diagnostic"] = json{{"hull_affine_dimension", diag.hull_affine_dimension},
                             {"span_dimension", diag.span_dimension},
                             {"readings_disagree", true}};
  return out;
}

inline json cmd_kn(const Options& o, std::istream& in) {
  auto [ws, unused] = io::classify_input_from(read_json(o.input, in));
  json candidates = json::array();
  for (const auto& l : kn_candidates(ws)) candidates.push_back(io::to_json(l));
  json strata = json::array();
  for (const auto& st : kn_partition(ws)) {
    json members = json::array();
    for (const auto& m : st.members)
      members.push_back(
          {{"support", io::support_to_json(m.support)}, {"limit_support", io::support_to_json(m.limit_support)}});
    json fixed = json::array();
    for (auto i : st.fixed_indices) fixed.push_back(i + 1);
    strata.push_back({{"lambda", io::to_json(st.lambda)},
                      {"norm2", io::to_json(ws.metric.norm2(st.lambda))},
                      {"fixed_level", io::to_json(st.fixed_level)},
                      {"fixed_indices", std::move(fixed)},
                      {"members", std::move(members)}});
  }
  return {{"candidates", std::move(candidates)}, {"strata", std::move(strata)}};
}

inline json cmd_mundet_classify(const Options& o, std::istream& in) {
  auto d = io::datum_from(read_json(o.input, in));
  json out;
  if (o.large_k) {
    if (!o.k.empty()) throw input_error("--k and --large-k are mutually exclusive");
    auto v = large_k_semistable(d);
    out = {{"large_k", true}, {"semistable", v.semistable}, {"threshold", io::to_json(v.threshold)}};
  } else {
    Rational k = parse_k(o);
    auto c = mundet_classify(d, k);
    out = stability_json(c.semistable, c.polystable, c.stable);
    out["k"] = io::to_json(k);
    if (!c.semistable) out["witness_radius"] = mundet_witness_radius(d, k);
  }
  auto f = degree_feasible(d);
  out["energy"] = io::to_json(energy(d));
  out["degree_feasible"] = f.feasible;
  return out;
}

inline json cmd_mundet_walls(const Options& o, std::istream& in) {
  auto d = io::datum_from(read_json(o.input, in));
  auto w = walls(d.ws, d.support, d.dP);
  json degenerate = json::array();
  for (const auto& s : w.degenerate_supports) degenerate.push_back(io::support_to_json(s));
  return {{"walls", io::to_json(w.walls)}, {"degenerate_supports", std::move(degenerate)}};
}

inline json cmd_mundet_enumerate(const Options& o, std::istream& in) {
  auto [ws, unused] = io::classify_input_from(read_json(o.input, in));
  if (o.energy.empty()) throw input_error("--energy is required");
  EnergyBudget budget(Rational::parse(o.energy));
  EnumerationMode mode = LargeK{};
  if (!o.large_k) mode = AtK{parse_k(o)};
  else if (!o.k.empty()) throw input_error("--k and --large-k are mutually exclusive");
  json out = json::array();
  for (const auto& d : enumerate_bounded(ws, budget, mode)) out.push_back(io::to_json(d));
  return out;
}

inline json cmd_mundet_quot_dim(const Options& o, std::istream& in) {
  auto d = io::datum_from(read_json(o.input, in));
  return {{"dimension", quot_dimension(d, o.genus)}, {"genus", o.genus}};
}

inline json cmd_scaled_enumerate(const Options& o) {
  json out = json::array();
  for (const auto& t : scaled::enumerate_types(o.n, io::mode_from(o.mode))) out.push_back(io::to_json(t));
  return out;
}

inline json cmd_scaled_check(const Options& o, std::istream& in) {
  auto t = io::type_from(read_json(o.input, in));
  auto violations = scaled::validate_type(t);
  json out;
  out["valid"] = violations.empty();
  json vj = json::array();
  for (const auto& v : violations) vj.push_back({{"code", v.code}, {"message", v.message}, {"vertex", v.vertex}});
  out["violations"] = std::move(vj);
  if (!violations.empty()) return out;
  auto st = scaled::is_stable_type(t);
  out["stable"] = st.stable;
  json counts = json::array();
  for (const auto& c : st.vertices) counts.push_back({{"id", c.id}, {"special", c.special}, {"required", c.required}});
  out["vertices"] = std::move(counts);
  out["canonical"] = scaled::canonical_form(t);
  out["balanced_rank"] = scaled::balanced_rank(t);
  if (st.stable) {
    out["dimension"] = scaled::stratum_dimension(t);
    out["codimension"] = scaled::stratum_codimension(t);
  }
  return out;
}

inline json cmd_scaled_limit(const Options& o, std::istream& in) {
  auto t = io::type_from(read_json(o.input, in));
  if (o.valuations.empty()) throw input_error("--valuations is required");
  auto v = io::valuations_from(read_json(o.valuations, in));
  json out = json::array();
  for (const auto& l : scaled::tropical_limit(t, v))
    out.push_back({{"id", l.id}, {"weight", io::to_json(l.weight)}, {"class", scaled::to_string(l.cls)}});
  return {{"vertices", std::move(out)}};
}

/// Radius for a brute-force scan: the requested one, which must cover the
/// certified witness radius, or the certified radius itself (at least 1).
inline long long coupled_radius(long long requested, long long certified) {
  if (requested == 0) return std::max(1LL, certified);
  if (requested < 1) throw input_error("--radius must be >= 1");
  if (requested < certified)
    throw input_error("--radius " + std::to_string(requested) + " is below the certified witness radius " +
                      std::to_string(certified));
  return requested;
}

inline json verdict_json(const oracle::OracleVerdict& v, long long radius) {
  json out{{"semistable", v.semistable}, {"radius", radius}, {"points_scanned", v.points_scanned}};
  if (v.witness) {
    out["witness"] = lambda_json(v.witness->lambda);
    out["witness_weight"] = io::to_json(v.witness_weight);
  }
  return out;
}

inline json cmd_oracle_classify(const Options& o, std::istream& in) {
  auto [ws, s] = io::classify_input_from(read_json(o.input, in));
  oracle::OracleBudget b;
  b.lattice_radius = coupled_radius(o.radius, witness_radius(ws, s));
  return verdict_json(oracle::brute_force_classify(ws, s, b), b.lattice_radius);
}

inline json cmd_oracle_mundet(const Options& o, std::istream& in) {
  auto d = io::datum_from(read_json(o.input, in));
  Rational k = parse_k(o);
  oracle::OracleBudget b;
  b.lattice_radius = coupled_radius(o.radius, mundet_witness_radius(d, k));
  auto out = verdict_json(oracle::brute_force_mundet(d, k, b), b.lattice_radius);
  out["k"] = io::to_json(k);
  return out;
}

inline json cmd_oracle_walls(const Options& o, std::istream& in) {
  auto d = io::datum_from(read_json(o.input, in));
  long long radius = o.radius == 0 ? 4 : o.radius;
  if (radius < 1) throw input_error("--radius must be >= 1");
  auto grid = o.grid.empty() ? oracle::critical_k_grid(d.ws, d.support, d.dP, radius) : parse_grid(o.grid);
  long long certified = 0;
  for (const auto& k : grid) certified = std::max(certified, mundet_witness_radius(d, k));
  if (certified > radius) {
    if (o.radius != 0)
      throw input_error("--radius " + std::to_string(radius) + " is below the certified witness radius " +
                        std::to_string(certified));
    radius = certified;
  }
  json brackets = json::array();
  for (const auto& br : oracle::scan_walls(d.ws, d.support, d.dP, grid, radius))
    brackets.push_back({{"lo", io::to_json(br.lo)},
                        {"hi", io::to_json(br.hi)},
                        {"semistable_lo", br.semistable_lo},
                        {"semistable_hi", br.semistable_hi}});
  return {{"brackets", std::move(brackets)}, {"grid_size", grid.size()}, {"radius", radius}};
}

inline json cmd_oracle_trees(const Options& o) {
  oracle::OracleBudget b;
  b.tree_vertex_cap = o.cap;
  auto rep = oracle::exhaustive_tree_check(o.n, io::mode_from(o.mode), b);
  return {{"n", rep.n},
          {"mode", scaled::to_string(rep.mode)},
          {"vertex_cap", rep.vertex_cap},
          {"oracle_count", rep.oracle_count},
          {"enumerated_count", rep.enumerated_count},
          {"only_in_oracle", rep.only_in_oracle},
          {"only_in_enumeration", rep.only_in_enumeration},
          {"identical", rep.empty()}};
}

inline void emit(const json& payload, const Options& o, std::ostream& out) {
  if (o.stream && payload.is_array()) {
    for (const auto& item : payload) out << item.dump() << '\n';
    return;
  }
  out << (o.stream ? payload.dump() : dump(payload, o.pretty)) << '\n';
}

inline void emit_error(const char* status, const std::string& message, const Options& o, std::ostream& out) {
  json err{{"status", status}, {"error", message}};
  out << dump(err, o.pretty && !o.stream) << '\n';
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::istream& in) {
  Options o;
  CLI::App app{"Exact stability computations for torus actions, gauged maps and scaled curves"};
  app.name("gitgauge");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--pretty", o.pretty, "Indent JSON output");
  app.add_flag("--stream", o.stream, "Print arrays as one JSON object per line");

  auto input = [&](CLI::App* sub) { sub->add_option("--input", o.input, "JSON input file, or - for stdin")->required(); };
  auto k_flags = [&](CLI::App* sub) {
    sub->add_option("--k", o.k, "Polarization power as p/q or an integer");
    sub->add_flag("--large-k", o.large_k, "Use the large-k limit");
  };

  std::function<json()> action;
  auto bind = [&](CLI::App* sub, std::function<json()> fn) {
    sub->callback([&action, fn] { action = fn; });
  };

  auto* classify_cmd = app.add_subcommand("classify", "Hilbert-Mumford classification of a support");
  input(classify_cmd);
  bind(classify_cmd, [&] { return cmd_classify(o, in); });

  auto* kn_cmd = app.add_subcommand("kn", "Kirwan-Ness candidates and strata");
  input(kn_cmd);
  bind(kn_cmd, [&] { return cmd_kn(o, in); });

  auto* mundet = app.add_subcommand("mundet", "Gauged-map stability");
  mundet->require_subcommand(1);
  auto* m_classify = mundet->add_subcommand("classify", "Mundet classification of a datum");
  input(m_classify);
  k_flags(m_classify);
  bind(m_classify, [&] { return cmd_mundet_classify(o, in); });
  auto* m_walls = mundet->add_subcommand("walls", "Walls in k for the datum's support and bundle degree");
  input(m_walls);
  bind(m_walls, [&] { return cmd_mundet_walls(o, in); });
  auto* m_enum = mundet->add_subcommand("enumerate", "Semistable data with energy at most E");
  input(m_enum);
  k_flags(m_enum);
  m_enum->add_option("--energy", o.energy, "Energy bound E")->required();
  bind(m_enum, [&] { return cmd_mundet_enumerate(o, in); });
  auto* m_quot = mundet->add_subcommand("quot-dim", "Dimension of the quot-scheme compactification");
  input(m_quot);
  m_quot->add_option("--genus", o.genus, "Genus of the curve");
  bind(m_quot, [&] { return cmd_mundet_quot_dim(o, in); });

  auto* scaled_cmd = app.add_subcommand("scaled", "Scaled-curve combinatorics");
  scaled_cmd->require_subcommand(1);
  auto* s_enum = scaled_cmd->add_subcommand("enumerate", "Stable types with n markings");
  s_enum->add_option("--n", o.n, "Number of markings")->required();
  s_enum->add_option("--mode", o.mode, "projective or affine");
  bind(s_enum, [&] { return cmd_scaled_enumerate(o); });
  auto* s_check = scaled_cmd->add_subcommand("check", "Validate a type and report its stratum");
  input(s_check);
  bind(s_check, [&] { return cmd_scaled_check(o, in); });
  auto* s_limit = scaled_cmd->add_subcommand("limit", "Tropical limit of scalings");
  input(s_limit);
  s_limit->add_option("--valuations", o.valuations, "Valuations JSON file")->required();
  bind(s_limit, [&] { return cmd_scaled_limit(o, in); });

  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force verifiers");
  oracle_cmd->require_subcommand(1);
  auto* o_classify = oracle_cmd->add_subcommand("classify", "Lattice scan of Hilbert-Mumford weights");
  input(o_classify);
  o_classify->add_option("--radius", o.radius, "Lattice radius (default: certified radius)");
  bind(o_classify, [&] { return cmd_oracle_classify(o, in); });
  auto* o_mundet = oracle_cmd->add_subcommand("mundet", "Lattice scan of Mundet weights");
  input(o_mundet);
  o_mundet->add_option("--k", o.k, "Polarization power")->required();
  o_mundet->add_option("--radius", o.radius, "Lattice radius (default: certified radius)");
  bind(o_mundet, [&] { return cmd_oracle_mundet(o, in); });
  auto* o_walls = oracle_cmd->add_subcommand("walls", "Grid scan for verdict changes in k");
  input(o_walls);
  o_walls->add_option("--grid", o.grid, "Comma-separated increasing k values");
  o_walls->add_option("--radius", o.radius, "Lattice radius");
  bind(o_walls, [&] { return cmd_oracle_walls(o, in); });
  auto* o_trees = oracle_cmd->add_subcommand("trees", "Exhaustive tree generation diffed against enumeration");
  o_trees->add_option("--n", o.n, "Number of markings")->required();
  o_trees->add_option("--mode", o.mode, "projective or affine");
  o_trees->add_option("--cap", o.cap, "Vertex cap (default 2n+2)");
  bind(o_trees, [&] { return cmd_oracle_trees(o); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, out);
    emit_error("input_error", e.what(), o, out);
    return InputError;
  }

  try {
    if (!action) throw input_error("no command given");
    emit(action(), o, out);
    return Ok;
  } catch (const infeasible_error& e) {
    emit_error("infeasible", e.what(), o, out);
    return Infeasible;
  } catch (const input_error& e) {
    emit_error("input_error", e.what(), o, out);
    return InputError;
  } catch (const json::exception& e) {
    emit_error("input_error", e.what(), o, out);
    return InputError;
  }
}

}  // namespace gitgauge::cli
