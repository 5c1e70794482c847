#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "globular/globsum.hpp"

namespace globular {

// Morphism between pasting shapes: a globular map of the carriers.
struct Theta0Morphism {
  Table dom_table;
  Table cod_table;
  GlobularSetMap map;
};

inline Theta0Morphism theta0_identity(const Table& t) {
  auto s = glob_sum(t);
  return Theta0Morphism{t, t, identity_map(s.carrier)};
}

// g after f
inline Theta0Morphism compose(const Theta0Morphism& g, const Theta0Morphism& f) {
  require(f.cod_table == g.dom_table, ErrorKind::NotComposable,
          "tables do not match: " + table_to_string(f.cod_table) + " vs " +
              table_to_string(g.dom_table));
  return Theta0Morphism{f.dom_table, g.cod_table, compose(g.map, f.map)};
}

inline bool equal(const Theta0Morphism& a, const Theta0Morphism& b) {
  return a.dom_table == b.dom_table && a.cod_table == b.cod_table && equal_maps(a.map, b.map);
}

// All globular maps from the shape of nbar to the shape of mbar, enumerated by
// backtracking dimension by dimension (candidates tried in cell order, so the
// result order is deterministic).  bound, when non-negative, must dominate the
// domain dimension; it exists to make the enumeration budget explicit.
inline std::vector<Theta0Morphism> theta0_hom(const Table& nbar, const Table& mbar,
                                              int bound = -1) {
  auto dom_sum = glob_sum(nbar);
  auto cod_sum = glob_sum(mbar);
  const GlobularSet& dom = *dom_sum.carrier;
  const GlobularSet& cod = *cod_sum.carrier;
  if (bound >= 0)
    require(bound >= dom.truncation, ErrorKind::TruncationExceeded,
            "bound " + std::to_string(bound) + " below domain dimension " +
                std::to_string(dom.truncation));

  std::vector<Theta0Morphism> out;
  for (auto& assign : enumerate_globular_assignments(dom, cod)) {
    GlobularSetMap f{dom_sum.carrier, cod_sum.carrier, std::move(assign)};
    out.push_back(Theta0Morphism{nbar, mbar, std::move(f)});
  }
  return out;
}

// Disc shape inclusions (n) -> (m) for n < m: the map sending the top cell to
// the source hemisphere s{n} (resp. the target hemisphere t{n}) and fixing the
// hemisphere labels below.  These are the images of the two globe-category
// generators; under evaluation in a backend the source-hemisphere inclusion
// induces the source map and the target-hemisphere inclusion the target map.
inline Theta0Morphism hem_src_inclusion(int n, int m) {
  require(0 <= n && n < m, ErrorKind::OutOfRange, "need 0 <= n < m");
  auto dom_sum = glob_sum(Table{n});
  auto cod_sum = glob_sum(Table{m});
  GlobularSetMap f{dom_sum.carrier, cod_sum.carrier, {}};
  f.map.resize(n + 1);
  for (int d = 0; d < n; ++d) f.map[d] = {0, 1};  // s{d} -> s{d}, t{d} -> t{d}
  f.map[n] = {0};                                 // top -> s{n}
  validate(f);
  return Theta0Morphism{Table{n}, Table{m}, std::move(f)};
}

inline Theta0Morphism hem_tgt_inclusion(int n, int m) {
  require(0 <= n && n < m, ErrorKind::OutOfRange, "need 0 <= n < m");
  auto dom_sum = glob_sum(Table{n});
  auto cod_sum = glob_sum(Table{m});
  GlobularSetMap f{dom_sum.carrier, cod_sum.carrier, {}};
  f.map.resize(n + 1);
  for (int d = 0; d < n; ++d) f.map[d] = {0, 1};
  f.map[n] = {1};  // top -> t{n}
  validate(f);
  return Theta0Morphism{Table{n}, Table{m}, std::move(f)};
}

// The j-th (0-based) segment inclusion (n_j) -> nbar.  The domain carrier is
// the singleton pasting shape, whose cell order matches the disc's.
inline Theta0Morphism segment_inclusion(const Table& nbar, int j) {
  auto sum = glob_sum(nbar);
  require(j >= 0 && j < static_cast<int>(table_segments(nbar)), ErrorKind::OutOfRange,
          "no segment " + std::to_string(j));
  auto dom_sum = glob_sum(Table{nbar[2 * j]});
  GlobularSetMap inc{dom_sum.carrier, sum.carrier, sum.cocone[j]};
  validate(inc);
  return Theta0Morphism{Table{nbar[2 * j]}, nbar, std::move(inc)};
}

// --- theory presentations ---------------------------------------------------
//
// A dimension-bounded family of named generating operations on top of the
// pasting-shape category, with relations given as pairs of composable words.
// Words read left to right: {from, [f, g, ...], to} stands for ... o g o f.

struct TheoryGenerator {
  std::string name;
  Table dom;
  Table cod;
};

struct TheoryWord {
  Table from;
  std::vector<std::string> symbols;
  Table to;
};

struct TheoryPresentation {
  int max_dim = 0;
  std::vector<TheoryGenerator> generators;
  std::vector<std::pair<TheoryWord, TheoryWord>> relations;
};

inline void validate(const TheoryPresentation& p) {
  std::map<std::string, const TheoryGenerator*> by_name;
  for (const auto& g : p.generators) {
    require(!g.name.empty(), ErrorKind::MalformedInput, "generator with empty name");
    require(by_name.emplace(g.name, &g).second, ErrorKind::MalformedInput,
            "duplicate generator name '" + g.name + "'");
    validate_table(g.dom);
    validate_table(g.cod);
    require(table_dim(g.dom) <= p.max_dim && table_dim(g.cod) <= p.max_dim,
            ErrorKind::DimensionMismatch,
            "generator '" + g.name + "' exceeds the dimension bound");
  }
  auto walk = [&](const TheoryWord& w) {
    Table at = w.from;
    validate_table(at);
    for (const auto& sym : w.symbols) {
      auto it = by_name.find(sym);
      require(it != by_name.end(), ErrorKind::MalformedInput, "unknown symbol '" + sym + "'");
      require(it->second->dom == at, ErrorKind::NotComposable,
              "word is not composable at symbol '" + sym + "'");
      at = it->second->cod;
    }
    require(at == w.to, ErrorKind::NotComposable,
            "word does not end at " + table_to_string(w.to));
  };
  for (const auto& [lhs, rhs] : p.relations) {
    walk(lhs);
    walk(rhs);
    require(lhs.from == rhs.from && lhs.to == rhs.to, ErrorKind::NotParallel,
            "relation sides have different endpoints");
  }
}

}  // namespace globular
