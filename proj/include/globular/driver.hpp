#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "globular/discrete.hpp"
#include "globular/error.hpp"
#include "globular/globsum.hpp"
#include "globular/groupoid_io.hpp"
#include "globular/grpd_backend.hpp"
#include "globular/omega.hpp"
#include "globular/path_tower.hpp"
#include "globular/table.hpp"
#include "globular/theta0.hpp"

// Report-producing core behind the command line tool.  A RunConfig describes
// one invocation; run() executes it, writes exactly one JSON document to the
// stream, and returns the process exit code.  Reports are serialized with
// ordered_json and contain no timing, paths resolved by the OS, or other
// run-dependent data, so the same configuration and inputs always produce the
// same bytes.

namespace globular {

struct RunConfig {
  std::string command;            // theta0 | tower | op | certify | eval
  std::string backend = "chart";  // chart | discrete
  std::uint32_t size = 1;         // discrete backend: point count
  std::string input_path;         // chart backend: fixture file
  std::string table_a;            // theta0: domain table
  std::string table_b;            // theta0: codomain table
  std::string op_name;            // op: operation to synthesize
  std::uint32_t dim = 2;          // tower truncation
  std::uint32_t max_dim = 1;      // certify: table dimension bound
  std::uint32_t max_len = 3;      // certify: table length bound
  std::size_t budget = 4096;      // certify: candidate pool bound
  std::string theta_path;         // eval: shape morphism file
  bool pretty = false;
};

inline std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hash_hex(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(bytes)));
  return buf;
}

// Exit 1 marks rejected input (the message names the offending entry); every
// other failure from the library maps to exit 2.
inline int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::MalformedTable:
    case ErrorKind::MalformedInput:
    case ErrorKind::UnknownCell:
      return 1;
    default:
      return 2;
  }
}

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::MalformedTable: return "malformed-table";
    case ErrorKind::MalformedInput: return "malformed-input";
    case ErrorKind::UnknownCell: return "unknown-cell";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::NotParallel: return "not-parallel";
    case ErrorKind::BoundaryMismatch: return "boundary-mismatch";
    case ErrorKind::NotComposable: return "not-composable";
    case ErrorKind::NotLMap: return "not-l-map";
    case ErrorKind::NotAnRMap: return "not-r-map";
    case ErrorKind::SquareDoesNotCommute: return "square-does-not-commute";
    case ErrorKind::TruncationExceeded: return "truncation-exceeded";
    case ErrorKind::UnknownOperation: return "unknown-operation";
    case ErrorKind::MissingPrerequisite: return "missing-prerequisite";
    case ErrorKind::NotUnderA0: return "not-under-point";
    case ErrorKind::BackendLawFailure: return "backend-law-failure";
    case ErrorKind::OutOfRange: return "out-of-range";
  }
  return "unknown";
}

namespace driver_detail {

// Fixture files wrap one of two payloads:
//   {"chart": [[objects, group_order], ...]}   components of a finite groupoid
//   {"groupoid": {...}}                        explicit dense presentation
inline GroupoidPtr parse_fixture(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  require(!j.is_discarded(), ErrorKind::MalformedInput,
          "fixture is not valid JSON");
  require(j.is_object(), ErrorKind::MalformedInput,
          "fixture must be a JSON object");
  if (j.contains("chart")) {
    const json& chart = j["chart"];
    require(chart.is_array() && !chart.empty(), ErrorKind::MalformedInput,
            "'chart' must be a non-empty array");
    std::vector<ChartComponent> comps;
    for (std::size_t i = 0; i < chart.size(); ++i) {
      const json& e = chart[i];
      require(e.is_array() && e.size() == 2 && e[0].is_number_unsigned() &&
                  e[1].is_number_unsigned(),
              ErrorKind::MalformedInput,
              "chart entry " + std::to_string(i) +
                  " must be [objects, group_order]");
      comps.push_back(ChartComponent{e[0].get<std::uint32_t>(),
                                     e[1].get<std::uint32_t>()});
    }
    return make_chart_groupoid(comps);
  }
  if (j.contains("groupoid")) return parse_groupoid(j["groupoid"].dump());
  fail(ErrorKind::MalformedInput,
       "fixture needs a 'chart' or 'groupoid' entry");
}

template <typename B>
struct ReportTraits;

template <>
struct ReportTraits<GroupoidCategory> {
  static json obj(const GroupoidPtr& g) {
    return json{{"objects", g->object_count()}, {"arrows", g->arrow_count()}};
  }
  static json mor(const Functor& f) {
    json images = json::array();
    for (std::uint32_t o = 0; o < f.dom->object_count(); ++o)
      images.push_back(f.apply_obj(o));
    return json{{"dom_objects", f.dom->object_count()},
                {"cod_objects", f.cod->object_count()},
                {"object_map", std::move(images)}};
  }
};

template <>
struct ReportTraits<DiscreteBackend> {
  static json obj(const FinSet& s) { return json{{"size", s.size}}; }
  static json mor(const FinMap& f) {
    return json{{"dom_size", f.dom_size},
                {"cod_size", f.cod_size},
                {"table", f.table}};
  }
};

inline json describe_table_cells(const Table& t) {
  const auto sum = glob_sum(t);
  json dims = json::array();
  for (int d = 0; d <= sum.carrier->truncation; ++d)
    dims.push_back(sum.carrier->cells[d]);
  return dims;
}

inline void run_theta0(const RunConfig& cfg, json& report) {
  const Table a = parse_table(cfg.table_a);
  const Table b = parse_table(cfg.table_b);
  report["input"] =
      json{{"hash", hash_hex("theta0:" + table_to_string(a) + "->" +
                             table_to_string(b))}};
  const auto hom = theta0_hom(a, b);
  json morphisms = json::array();
  for (const auto& f : hom) morphisms.push_back(json{{"map", f.map.map}});
  report["payload"] = json{{"dom", table_to_string(a)},
                           {"cod", table_to_string(b)},
                           {"dom_cells", describe_table_cells(a)},
                           {"cod_cells", describe_table_cells(b)},
                           {"count", hom.size()},
                           {"morphisms", std::move(morphisms)}};
}

template <typename B>
void run_tower(const B& b, typename B::Obj base, const RunConfig& cfg,
               json& report) {
  using T = ReportTraits<B>;
  PathTower<B> tw(b, std::move(base), cfg.dim);
  json levels = json::array();
  for (std::uint32_t n = 0; n <= cfg.dim; ++n)
    levels.push_back(json{{"dim", n}, {"space", T::obj(tw.level(n))}});
  json boundaries = json::array();
  for (std::uint32_t n = 1; n <= cfg.dim; ++n)
    boundaries.push_back(
        json{{"dim", n}, {"apex", T::obj(tw.boundary(n).apex)}});
  json certs = json::array();
  for (const auto& c : tw.certificates())
    certs.push_back(json{{"level", c.level},
                         {"subject", c.subject},
                         {"property", c.property},
                         {"mode", c.mode},
                         {"holds", c.holds}});
  report["payload"] = json{{"truncation", cfg.dim},
                           {"levels", std::move(levels)},
                           {"boundaries", std::move(boundaries)},
                           {"certificates", std::move(certs)}};
}

// lunit and runit rewrite a unit inserted by the binary operation; the
// associator rewrites two stacked binary operations.
inline std::vector<std::string> op_closure(const std::string& name) {
  if (name == "lunit" || name == "runit") return {"unit", "m", name};
  if (name == "a") return {"m", name};
  return {name};
}

template <typename B>
void run_op(const B& b, typename B::Obj base, const RunConfig& cfg,
            json& report) {
  using T = ReportTraits<B>;
  PathTower<B> tw(b, std::move(base), cfg.dim);
  EndTheoryHandle<B> handle(tw);
  json ops = json::array();
  for (const auto& dep : op_closure(cfg.op_name)) {
    const auto& w = synth_operation(handle, dep);
    ops.push_back(json{{"name", w.name},
                       {"table", table_to_string(w.dom_table)},
                       {"target_dim", w.target_dim},
                       {"witness", T::mor(w.h)},
                       {"src_composite", T::mor(w.lhs)},
                       {"tgt_composite", T::mor(w.rhs)}});
  }
  report["payload"] = json{{"requested", cfg.op_name},
                           {"operations", std::move(ops)}};
}

template <typename B>
void run_certify(const B& b, typename B::Obj base, const RunConfig& cfg,
                 json& report) {
  PathTower<B> tw(b, std::move(base), cfg.dim);
  EndTheoryHandle<B> handle(tw);
  json synthesized = json::array();
  json skipped = json::array();
  for (const char* name :
       {"unit", "m", "w", "lunit", "runit", "a", "vcomp"}) {
    try {
      synth_operation(handle, name);
      synthesized.push_back(name);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::TruncationExceeded) throw;
      skipped.push_back(json{{"name", name}, {"reason", e.what()}});
    }
  }
  const auto rep =
      certify_contractible(handle, cfg.max_dim, cfg.max_len, cfg.budget);
  report["payload"] = json{{"ops", std::move(synthesized)},
                           {"ops_skipped", std::move(skipped)},
                           {"max_dim", rep.max_dim},
                           {"max_len", rep.max_len},
                           {"budget", rep.budget},
                           {"tables_examined", rep.tables_examined},
                           {"candidates", rep.candidates},
                           {"pairs", rep.pairs},
                           {"lifted", rep.lifted},
                           {"budget_exhausted", rep.budget_exhausted},
                           {"failures", rep.failures},
                           {"all_lifted", rep.all_lifted()}};
}

// Shape morphism files: {"dom": "(0)", "cod": "(1)", "map": [[...], ...]}
// where map[n][i] sends cell i of the domain shape in dimension n to a cell
// index of the codomain shape.
inline Theta0Morphism parse_theta(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  require(!j.is_discarded(), ErrorKind::MalformedInput,
          "shape morphism is not valid JSON");
  require(j.is_object() && j.contains("dom") && j.contains("cod") &&
              j.contains("map"),
          ErrorKind::MalformedInput,
          "shape morphism needs 'dom', 'cod' and 'map' entries");
  require(j["dom"].is_string() && j["cod"].is_string(),
          ErrorKind::MalformedInput,
          "'dom' and 'cod' must be table strings");
  const Table dom = parse_table(j["dom"].get<std::string>());
  const Table cod = parse_table(j["cod"].get<std::string>());
  const json& m = j["map"];
  require(m.is_array(), ErrorKind::MalformedInput, "'map' must be an array");
  std::vector<std::vector<int>> map;
  for (std::size_t n = 0; n < m.size(); ++n) {
    require(m[n].is_array(), ErrorKind::MalformedInput,
            "'map' entry " + std::to_string(n) + " must be an array");
    std::vector<int> row;
    for (const json& v : m[n]) {
      require(v.is_number_integer(), ErrorKind::MalformedInput,
              "'map' entry " + std::to_string(n) +
                  " must contain cell indices");
      row.push_back(v.get<int>());
    }
    map.push_back(std::move(row));
  }
  const auto a = glob_sum(dom);
  const auto b = glob_sum(cod);
  GlobularSetMap f{a.carrier, b.carrier, std::move(map)};
  validate(f);
  return Theta0Morphism{dom, cod, std::move(f)};
}

template <typename B>
void run_eval(const B& b, typename B::Obj base, const RunConfig& cfg,
              json& report, const Theta0Morphism& theta) {
  using T = ReportTraits<B>;
  PathTower<B> tw(b, std::move(base), cfg.dim);
  EndTheoryHandle<B> handle(tw);
  const auto m = eval_algebra(handle, theta);
  // The action on algebras is contravariant: a map of shapes pulls cells of
  // the codomain pasting back to the domain pasting.
  report["payload"] =
      json{{"theta",
            json{{"dom", table_to_string(theta.dom_table)},
                 {"cod", table_to_string(theta.cod_table)},
                 {"map", theta.map.map}}},
           {"result", json{{"dom_table", table_to_string(theta.cod_table)},
                           {"cod_table", table_to_string(theta.dom_table)},
                           {"morphism", T::mor(m)}}}};
}

template <typename B>
void dispatch(const B& b, typename B::Obj base, const RunConfig& cfg,
              json& report, const Theta0Morphism* theta) {
  if (cfg.command == "tower") {
    run_tower(b, std::move(base), cfg, report);
  } else if (cfg.command == "op") {
    run_op(b, std::move(base), cfg, report);
  } else if (cfg.command == "certify") {
    run_certify(b, std::move(base), cfg, report);
  } else {
    run_eval(b, std::move(base), cfg, report, *theta);
  }
}

}  // namespace driver_detail

inline int run(const RunConfig& cfg, std::ostream& out) {
  json report;
  report["tool"] = "globular";
  report["command"] = cfg.command;
  json config;
  if (cfg.command == "theta0") {
    config["table_a"] = cfg.table_a;
    config["table_b"] = cfg.table_b;
  } else {
    config["backend"] = cfg.backend;
    if (cfg.backend == "discrete") config["size"] = cfg.size;
    config["dim"] = cfg.dim;
  }
  if (cfg.command == "op") config["op"] = cfg.op_name;
  if (cfg.command == "certify") {
    config["max_dim"] = cfg.max_dim;
    config["max_len"] = cfg.max_len;
    config["budget"] = cfg.budget;
  }
  report["config"] = std::move(config);
  report["status"] = "ok";

  int code = 0;
  try {
    if (cfg.command == "theta0") {
      driver_detail::run_theta0(cfg, report);
    } else {
      require(cfg.command == "tower" || cfg.command == "op" ||
                  cfg.command == "certify" || cfg.command == "eval",
              ErrorKind::MalformedInput,
              "unknown command '" + cfg.command + "'");

      Theta0Morphism theta;
      json input;
      if (cfg.command == "eval") {
        const std::string text = read_text_file(cfg.theta_path);
        input["theta_hash"] = hash_hex(text);
        theta = driver_detail::parse_theta(text);
      }

      if (cfg.backend == "discrete") {
        require(cfg.size > 0, ErrorKind::MalformedInput,
                "size must be positive");
        input["hash"] = hash_hex("discrete:" + std::to_string(cfg.size));
        report["input"] = std::move(input);
        driver_detail::dispatch(DiscreteBackend{}, FinSet{cfg.size}, cfg,
                                report, &theta);
      } else if (cfg.backend == "chart") {
        const std::string text = read_text_file(cfg.input_path);
        input["hash"] = hash_hex(text);
        report["input"] = std::move(input);
        GroupoidPtr base = driver_detail::parse_fixture(text);
        driver_detail::dispatch(GroupoidCategory{}, std::move(base), cfg,
                                report, &theta);
      } else {
        fail(ErrorKind::MalformedInput,
             "unknown backend '" + cfg.backend + "'");
      }
    }
  } catch (const Error& e) {
    report["status"] = "error";
    report["error"] = json{{"kind", error_kind_name(e.kind())},
                           {"message", e.what()}};
    code = exit_code_for(e.kind());
  }
  out << (cfg.pretty ? report.dump(2) : report.dump()) << "\n";
  return code;
}

}  // namespace globular
