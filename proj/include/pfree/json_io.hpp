#pragma once

// JSON renderings of property reports, isometry pairs and verification reports, plus
// the text rendering used by `analyze`, which is produced from the JSON so both views
// always agree.

#include <memory>
#include <sstream>
#include <string>

#include <json.hpp>

#include "pfree/analysis.hpp"
#include "pfree/graph.hpp"
#include "pfree/partlyfree.hpp"
#include "pfree/path.hpp"

namespace pfree {

using Json = nlohmann::ordered_json;

inline std::string written_word(const Graph& g, const std::vector<Edge>& traversal) {
  return format_path(*Path::from_traversal(g, traversal));
}

/// `graph` may be null for metadata-only families.
inline Json report_to_json(std::string_view subject, const Graph* graph, const PropertyReport& r) {
  Json j;
  j["subject"] = std::string(subject);
  Json gj;
  if (graph) {
    gj["kind"] = graph->truncation() ? "family-truncation" : "finite";
    if (graph->truncation()) {
      gj["family"] = graph->truncation()->family;
      gj["truncation"] = graph->truncation()->parameter;
    }
    gj["vertices"] = graph->vertex_count();
    gj["edges"] = graph->edge_count();
  } else {
    gj["kind"] = "family";
    gj["family"] = std::string(subject);
  }
  j["graph"] = gj;
  j["properties"] = {{"double_cycle", r.has_double_cycle},
                     {"uniform_double_cycle", r.uniform_double_cycle},
                     {"aperiodic_path", r.aperiodic_path},
                     {"uniform_aperiodic_path", r.uniform_aperiodic_path},
                     {"vertex_count_finite", r.vertex_count_finite}};
  j["algebras"] = {{"LG_partly_free", r.lg_partly_free},
                   {"LG_unitally_partly_free", r.lg_unitally_partly_free},
                   {"AG_partly_free", r.ag_partly_free},
                   {"AG_unitally_partly_free", r.ag_unitally_partly_free}};
  j["hyperreflexive_sufficient"] = r.hyperreflexive_sufficient;
  Json witnesses = Json::array();
  if (graph)
    for (const auto& w : r.double_cycles)
      witnesses.push_back({{"vertex", graph->name(w.base)},
                           {"w1", written_word(*graph, w.first.word)},
                           {"w2", written_word(*graph, w.second.word)}});
  j["witnesses"] = witnesses;
  if (r.infinite_path) {
    const auto& c = *r.infinite_path;
    j["infinite_path"] = {{"family", c.family}, {"start", c.start_vertex}, {"rule", c.rule}, {"first_edges", c.first_edges(6)}};
  }
  j["warnings"] = r.warnings;
  return j;
}

inline std::string render_report_text(const Json& j) {
  std::ostringstream out;
  auto yes = [](const Json& v) { return v.get<bool>() ? "yes" : "no"; };
  out << "graph: " << j["subject"].get<std::string>();
  const auto& g = j["graph"];
  if (g.contains("vertices"))
    out << " (" << g["vertices"].get<std::size_t>() << " vertices, " << g["edges"].get<std::size_t>() << " edges";
  else
    out << " (countable family, no finite window";
  if (g.contains("truncation")) out << ", window of " << g["family"].get<std::string>() << " at K=" << g["truncation"].get<std::size_t>();
  out << ")\n";
  const auto& p = j["properties"];
  out << "  double-cycle property          " << yes(p["double_cycle"]) << '\n';
  out << "  uniform double-cycle property  " << yes(p["uniform_double_cycle"]) << '\n';
  out << "  aperiodic path property        " << yes(p["aperiodic_path"]) << '\n';
  out << "  uniform aperiodic path         " << yes(p["uniform_aperiodic_path"]) << '\n';
  const auto& a = j["algebras"];
  out << "  L_G partly free                " << yes(a["LG_partly_free"]) << '\n';
  out << "  L_G unitally partly free       " << yes(a["LG_unitally_partly_free"]) << '\n';
  out << "  A_G partly free                " << yes(a["AG_partly_free"]) << '\n';
  out << "  A_G unitally partly free       " << yes(a["AG_unitally_partly_free"]) << '\n';
  out << "  hyper-reflexive (transpose)    " << yes(j["hyperreflexive_sufficient"]) << '\n';
  for (const auto& w : j["witnesses"])
    out << "  witness at " << w["vertex"].get<std::string>() << ": w1 = " << w["w1"].get<std::string>()
        << ", w2 = " << w["w2"].get<std::string>() << '\n';
  if (j.contains("infinite_path")) {
    const auto& c = j["infinite_path"];
    out << "  infinite path from " << c["start"].get<std::string>() << ": " << c["rule"].get<std::string>() << '\n';
  }
  for (const auto& w : j["warnings"]) out << "  warning: " << w.get<std::string>() << '\n';
  return out.str();
}

class PairFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Json pair_to_json(const FormalIsometryPair& p) {
  const auto& g = *p.graph;
  auto summands = [&](const std::vector<Summand>& list) {
    Json a = Json::array();
    for (const auto& s : list) a.push_back({{"source", g.name(s.source)}, {"word", format_path(s.word)}});
    return a;
  };
  auto names = [&](const std::set<Vertex>& set) {
    Json a = Json::array();
    for (auto v : set) a.push_back(g.name(v));
    return a;
  };
  Json j;
  j["mode"] = to_string(p.mode);
  j["summands_u"] = summands(p.u);
  j["summands_v"] = summands(p.v);
  j["initial_set"] = names(p.initial_set);
  if (p.range_set != p.initial_set) j["range_set"] = names(p.range_set);
  return j;
}

inline FormalIsometryPair pair_from_json(const Json& j, std::shared_ptr<const Graph> g) {
  try {
    FormalIsometryPair p;
    p.graph = g;
    auto mode = parse_pair_mode(j.at("mode").get<std::string>());
    if (!mode) throw PairFormatError("unknown pair mode '" + j.at("mode").get<std::string>() + "'");
    p.mode = *mode;
    auto vertex = [&](const std::string& name) {
      auto v = g->find_vertex(name);
      if (!v) throw PairFormatError("unknown vertex '" + name + "'");
      return *v;
    };
    auto summands = [&](const Json& a, std::vector<Summand>& out) {
      for (const auto& s : a) {
        auto x = vertex(s.at("source").get<std::string>());
        auto w = parse_path(*g, s.at("word").get<std::string>());
        out.push_back({x, std::move(w)});
      }
    };
    summands(j.at("summands_u"), p.u);
    summands(j.at("summands_v"), p.v);
    for (const auto& v : j.at("initial_set")) p.initial_set.insert(vertex(v.get<std::string>()));
    if (j.contains("range_set"))
      for (const auto& v : j["range_set"]) p.range_set.insert(vertex(v.get<std::string>()));
    else
      p.range_set = p.initial_set;
    auto problems = p.invariant_violations();
    if (!problems.empty()) throw PairFormatError(problems.front());
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw PairFormatError(std::string("malformed pair JSON: ") + e.what());
  } catch (const PathError& e) {
    throw PairFormatError(e.what());
  }
}

inline Json verification_to_json(const VerificationReport& r) {
  return {{"passed", r.passed()},
          {"nonzero", r.nonzero},
          {"orthogonal", r.orthogonal},
          {"initial_projections", r.initial_projections},
          {"range_contained", r.range_contained},
          {"standard_form", r.standard_form},
          {"depth", r.depth},
          {"interior_level", r.interior_level},
          {"notes", r.notes},
          {"exactness", r.exactness}};
}

inline std::string render_verification_text(const VerificationReport& r) {
  std::ostringstream out;
  auto line = [&](const char* label, bool ok) { out << "  " << (ok ? "ok   " : "FAIL ") << label << '\n'; };
  out << "depth N=" << r.depth << ", interior level m=" << r.interior_level << " (" << r.exactness << ")\n";
  line("U, V nonzero", r.nonzero);
  line("U*V = 0", r.orthogonal);
  line("U*U E_m = V*V E_m = sum_{x in I} P_x E_m", r.initial_projections);
  line("E_m UU* E_m and E_m VV* E_m below the range projection", r.range_contained);
  line("initial projections in standard form over I", r.standard_form);
  for (const auto& n : r.notes) out << "  note: " << n << '\n';
  out << (r.passed() ? "PASS" : "FAIL") << '\n';
  return out.str();
}

}  // namespace pfree
