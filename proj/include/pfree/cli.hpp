#pragma once

// The `pfree` command line. run_cli is callable in-process so the tests and the
// acceptance suite exercise exactly what the binary does.
//
// Exit codes: 0 success, 1 usage / input / precondition error, 2 a verification or
// oracle check failed.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pfree/analysis.hpp"
#include "pfree/catalog.hpp"
#include "pfree/fock.hpp"
#include "pfree/graph.hpp"
#include "pfree/json_io.hpp"
#include "pfree/oracle.hpp"
#include "pfree/partlyfree.hpp"
#include "pfree/rational.hpp"

namespace pfree {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_failed = 2;

class CliError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CliConfig {
  std::string command;
  std::string subject;
  std::size_t depth = 6;
  bool json = false;
  bool dot = false;
  std::uint64_t seed = 1;
  std::size_t cap = default_basis_cap;
  std::string mode;
  std::string pair_file;
  std::string op;
  std::optional<std::size_t> window;
  std::size_t count = 200;
  std::size_t max_cycle = 0;
};

/// A catalog name or a graph file.
struct Subject {
  std::string name;
  std::optional<CatalogEntry> entry;
  std::shared_ptr<const Graph> graph;  // null for metadata-only families

  bool is_family() const { return entry && entry->is_family(); }
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Subject resolve_subject(const std::string& name, std::optional<std::size_t> window) {
  Subject s;
  s.name = name;
  std::optional<CatalogEntry> entry;
  try {
    entry = builtin(name);
  } catch (const CatalogError&) {
  }
  if (entry) {
    if (entry->graph || entry->family->truncate) s.graph = std::make_shared<const Graph>(entry_graph(*entry, window));
    s.name = entry->name;
    s.entry = std::move(entry);
    return s;
  }
  auto text = read_file(name);
  try {
    s.graph = std::make_shared<const Graph>(parse_graph(text));
  } catch (const GraphParseError& e) {
    throw CliError(name + ": " + e.what());
  }
  return s;
}

inline const Graph& require_graph(const Subject& s) {
  if (!s.graph) throw CliError(s.name + " has no finite truncation (metadata only)");
  return *s.graph;
}

/// `[coef*]atom` terms joined by + or -, atoms L:word, R:word, P:vertex, Q:vertex.
inline SparseOp parse_op_literal(std::string_view text, const std::shared_ptr<const FockBasis>& b) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw CliError("empty operator literal");
  const auto& g = b->graph();
  auto result = SparseOp::zero(b);
  std::size_t pos = 0;
  while (pos < s.size()) {
    Rational sign(1);
    if (s[pos] == '+' || s[pos] == '-') {
      if (s[pos] == '-') sign = -1;
      ++pos;
    } else if (pos != 0) {
      throw CliError("expected + or - in operator literal");
    }
    auto end = s.find_first_of("+-", pos);
    auto term = std::string_view(s).substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    pos = end == std::string::npos ? s.size() : end;
    if (term.empty()) throw CliError("empty term in operator literal");
    Rational coef(1);
    if (auto star = term.find('*'); star != std::string_view::npos) {
      try {
        coef = parse_rational(term.substr(0, star));
      } catch (const std::invalid_argument& e) {
        throw CliError(e.what());
      }
      term.remove_prefix(star + 1);
    }
    if (term.size() < 3 || term[1] != ':') throw CliError("bad operator atom '" + std::string(term) + "'");
    auto kind = term[0];
    auto arg = term.substr(2);
    auto vertex = [&] {
      auto v = g.find_vertex(arg);
      if (!v) throw CliError("unknown vertex '" + std::string(arg) + "'");
      return Path::unit(g, *v);
    };
    SparseOp atom = SparseOp::zero(b);
    try {
      switch (kind) {
        case 'L': atom = left_op(b, parse_path(g, arg)); break;
        case 'R': atom = right_op(b, parse_path(g, arg)); break;
        case 'P': atom = left_op(b, vertex()); break;
        case 'Q': atom = right_op(b, vertex()); break;
        default: throw CliError("unknown operator kind '" + std::string(1, kind) + "'");
      }
    } catch (const PathError& e) {
      throw CliError(e.what());
    }
    result = result + (sign * coef) * atom;
  }
  return result;
}

inline FormalIsometryPair construct_for_mode(const Subject& s, const CliConfig& cfg) {
  auto mode = parse_pair_mode(cfg.mode);
  if (!mode) throw CliError("unknown mode '" + cfg.mode + "' (double-cycle, infinite-path, unital, quiver)");
  switch (*mode) {
    case PairMode::infinite_path:
      if (!s.is_family()) throw ConstructionError("infinite-path mode needs a catalog family; a finite graph has no proper infinite path");
      return construct_pair_infinite_path(s.name, cfg.window.value_or(s.entry->family->default_window));
    case PairMode::unital:
      if (s.is_family()) throw ConstructionError("unital mode needs a finite graph; use infinite-path for families");
      return construct_pair_unital(s.graph);
    case PairMode::quiver:
      require_graph(s);
      return quiver_pair(s.graph);
    case PairMode::double_cycle: {
      auto witnesses = double_cycle_witnesses(require_graph(s));
      if (witnesses.empty()) throw ConstructionError("graph has no double-cycle");
      return construct_pair_double_cycle(s.graph, witnesses.front());
    }
  }
  throw CliError("unreachable");
}

namespace detail {

inline int cmd_analyze(const CliConfig& cfg, std::ostream& out) {
  auto s = resolve_subject(cfg.subject, cfg.window);
  if (cfg.dot) {
    out << to_dot(require_graph(s), s.name);
    return exit_ok;
  }
  auto report = s.is_family() ? s.entry->expected : classify_finite(*s.graph);
  auto j = report_to_json(s.name, s.graph.get(), report);
  if (cfg.json)
    out << j.dump(2) << '\n';
  else
    out << render_report_text(j);
  return exit_ok;
}

inline int cmd_verify(const CliConfig& cfg, std::ostream& out) {
  auto s = resolve_subject(cfg.subject, cfg.window);
  if (cfg.mode.empty() == cfg.pair_file.empty()) throw CliError("verify needs exactly one of --mode or --pair");
  FormalIsometryPair pair;
  if (!cfg.pair_file.empty()) {
    require_graph(s);
    pair = pair_from_json(Json::parse(read_file(cfg.pair_file), nullptr, true, true), s.graph);
  } else {
    pair = construct_for_mode(s, cfg);
  }
  auto b = build_basis(pair.graph, cfg.depth, cfg.cap);
  auto report = verify_pair(pair, b);
  if (cfg.json) {
    Json j;
    j["pair"] = pair_to_json(pair);
    j["verification"] = verification_to_json(report);
    out << j.dump(2) << '\n';
  } else {
    out << "pair (" << to_string(pair.mode) << ") on " << s.name << ": " << pair.u.size() << " summand(s) each\n";
    out << render_verification_text(report);
  }
  return report.passed() ? exit_ok : exit_failed;
}

inline int cmd_construct(const CliConfig& cfg, std::ostream& out) {
  auto s = resolve_subject(cfg.subject, cfg.window);
  if (cfg.mode.empty()) throw CliError("construct needs --mode");
  out << pair_to_json(construct_for_mode(s, cfg)).dump(2) << '\n';
  return exit_ok;
}

inline int cmd_oracle(const CliConfig& cfg, std::ostream& out) {
  if (!cfg.subject.empty()) {
    auto s = resolve_subject(cfg.subject, cfg.window);
    const auto& g = require_graph(s);
    bool brute = oracle_has_double_cycle(g, cfg.max_cycle);
    bool scc = !double_cycle_witnesses(g).empty();
    out << "simple-cycle oracle: " << (brute ? "double-cycle" : "none") << "\nSCC decision:        "
        << (scc ? "double-cycle" : "none") << '\n'
        << (brute == scc ? "agree" : "DISAGREE") << '\n';
    return brute == scc ? exit_ok : exit_failed;
  }
  auto r = run_oracle_batch(cfg.seed, cfg.count);
  if (cfg.json) {
    out << Json{{"seed", cfg.seed}, {"graphs", r.graphs}, {"with_double_cycle", r.with_double_cycle},
                {"disagreements", r.disagreements}}
               .dump(2)
        << '\n';
  } else {
    out << "seed " << cfg.seed << ": " << r.graphs << " random graphs, " << r.with_double_cycle
        << " with a double-cycle, " << r.disagreements << " disagreement(s)\n";
    if (!r.agrees()) out << "first disagreement:\n" << r.first_disagreement;
  }
  return r.agrees() ? exit_ok : exit_failed;
}

inline int cmd_fock(const CliConfig& cfg, std::ostream& out) {
  auto s = resolve_subject(cfg.subject, cfg.window);
  if (cfg.op.empty()) throw CliError("fock needs --op");
  require_graph(s);
  auto b = build_basis(s.graph, cfg.depth, cfg.cap);
  out << export_sparse(parse_op_literal(cfg.op, b));
  return exit_ok;
}

inline int cmd_catalog_list(std::ostream& out) {
  for (const auto& name : catalog_names()) {
    auto c = builtin(name);
    out << name << (c.is_family() ? "  [family]  " : "  [finite]  ") << c.note << '\n';
  }
  return exit_ok;
}

/// Without --depth each entry uses its own default depth.
inline int cmd_catalog_check(const CliConfig& cfg, bool depth_given, std::ostream& out) {
  std::optional<std::size_t> depth;
  if (depth_given) depth = cfg.depth;
  auto r = check_entry(cfg.subject, depth, cfg.window);
  out << r.name << '\n';
  for (const auto& l : r.lines) out << "  " << l << '\n';
  out << (r.passed ? "PASS" : "FAIL") << '\n';
  return r.passed ? exit_ok : exit_failed;
}

}  // namespace detail

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Partly free free semigroupoid algebras: graph decisions and exact Fock-space checks", "pfree"};
  app.require_subcommand(1);
  CliConfig cfg;
  bool depth_given = false;

  auto add_depth = [&](CLI::App* c) {
    c->add_option_function<std::size_t>(
         "--depth", [&](std::size_t d) { cfg.depth = d; depth_given = true; }, "Fock truncation depth N (default 6)");
    c->add_option("--cap", cfg.cap, "refuse bases larger than this many paths");
  };
  auto add_window = [&](CLI::App* c) { c->add_option("--window", cfg.window, "window K for catalog families"); };

  auto* analyze = app.add_subcommand("analyze", "classify a graph file or catalog entry");
  analyze->add_option("subject", cfg.subject, "graph file or catalog name")->required();
  analyze->add_flag("--json", cfg.json, "JSON report");
  analyze->add_flag("--dot", cfg.dot, "print the graph in DOT");
  add_window(analyze);

  auto* verify = app.add_subcommand("verify", "construct or load an isometry pair and verify it exactly");
  verify->add_option("subject", cfg.subject, "graph file or catalog name")->required();
  verify->add_option("--mode", cfg.mode, "double-cycle | infinite-path | unital | quiver");
  verify->add_option("--pair", cfg.pair_file, "pair JSON file");
  verify->add_flag("--json", cfg.json, "JSON report");
  add_depth(verify);
  add_window(verify);

  auto* construct = app.add_subcommand("construct", "emit the isometry pair as JSON");
  construct->add_option("subject", cfg.subject, "graph file or catalog name")->required();
  construct->add_option("--mode", cfg.mode, "double-cycle | infinite-path | unital | quiver")->required();
  add_window(construct);

  auto* oracle = app.add_subcommand("oracle", "compare the double-cycle decision with simple-cycle enumeration");
  oracle->add_option("subject", cfg.subject, "graph to check; random graphs when omitted");
  oracle->add_option("--seed", cfg.seed, "random seed (default 1)");
  oracle->add_option("--count", cfg.count, "number of random graphs (default 200)");
  oracle->add_option("--max-cycle", cfg.max_cycle, "longest simple cycle enumerated (default |V|)");
  oracle->add_flag("--json", cfg.json, "JSON summary");
  add_window(oracle);

  auto* fock = app.add_subcommand("fock", "export an operator on the truncated Fock space");
  fock->add_option("subject", cfg.subject, "graph file or catalog name")->required();
  fock->add_option("--op", cfg.op, "e.g. \"4/1*L:e + 2*P:x2\"")->required();
  add_depth(fock);
  add_window(fock);

  auto* catalog = app.add_subcommand("catalog", "built-in examples");
  catalog->require_subcommand(1);
  catalog->add_subcommand("list", "list catalog entries");
  auto* check = catalog->add_subcommand("check", "classify and verify one entry");
  check->add_option("name", cfg.subject, "catalog name")->required();
  add_depth(check);
  add_window(check);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (analyze->parsed()) return detail::cmd_analyze(cfg, out);
    if (verify->parsed()) return detail::cmd_verify(cfg, out);
    if (construct->parsed()) return detail::cmd_construct(cfg, out);
    if (oracle->parsed()) return detail::cmd_oracle(cfg, out);
    if (fock->parsed()) return detail::cmd_fock(cfg, out);
    if (check->parsed()) return detail::cmd_catalog_check(cfg, depth_given, out);
    return detail::cmd_catalog_list(out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
}

}  // namespace pfree
