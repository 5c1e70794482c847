#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "globular/error.hpp"
#include "globular/table.hpp"

namespace globular {

// Finite truncated globular set: cells in dimensions 0..truncation with
// source/target boundary maps one dimension down.  The boundary maps satisfy
// ss = st and ts = tt (checked by validate()).
struct GlobularSet {
  int truncation = 0;
  std::vector<std::vector<std::string>> cells;  // cells[n] = labels in dimension n
  std::vector<std::vector<int>> src;            // src[n][i] indexes cells[n-1]; src[0] empty
  std::vector<std::vector<int>> tgt;

  int cell_count(int n) const {
    return (n < 0 || n > truncation) ? 0 : static_cast<int>(cells[n].size());
  }

  int find_cell(int n, const std::string& label) const {
    require(n >= 0 && n <= truncation, ErrorKind::OutOfRange,
            "no dimension " + std::to_string(n));
    for (std::size_t i = 0; i < cells[n].size(); ++i)
      if (cells[n][i] == label) return static_cast<int>(i);
    fail(ErrorKind::UnknownCell, "no cell '" + label + "' in dimension " + std::to_string(n));
  }

  // iterated boundary down to dimension m
  int src_iter(int n, int i, int m) const {
    for (; n > m; --n) i = src[n][i];
    return i;
  }
  int tgt_iter(int n, int i, int m) const {
    for (; n > m; --n) i = tgt[n][i];
    return i;
  }
};

inline void validate(const GlobularSet& g) {
  require(g.truncation >= 0, ErrorKind::MalformedInput, "negative truncation");
  std::size_t dims = static_cast<std::size_t>(g.truncation) + 1;
  require(g.cells.size() == dims, ErrorKind::MalformedInput,
          "cells must list dimensions 0.." + std::to_string(g.truncation));
  require(g.src.size() == dims && g.tgt.size() == dims, ErrorKind::MalformedInput,
          "src/tgt must list dimensions 0.." + std::to_string(g.truncation));
  require(g.src[0].empty() && g.tgt[0].empty(), ErrorKind::MalformedInput,
          "dimension 0 has no boundaries");
  for (int n = 0; n <= g.truncation; ++n) {
    std::map<std::string, int> seen;
    for (std::size_t i = 0; i < g.cells[n].size(); ++i) {
      require(seen.emplace(g.cells[n][i], 1).second, ErrorKind::MalformedInput,
              "duplicate cell label '" + g.cells[n][i] + "' in dimension " + std::to_string(n));
    }
    if (n == 0) continue;
    require(g.src[n].size() == g.cells[n].size() && g.tgt[n].size() == g.cells[n].size(),
            ErrorKind::MalformedInput, "boundary arrays must match cell count in dimension " +
                std::to_string(n));
    for (std::size_t i = 0; i < g.cells[n].size(); ++i) {
      int lo = static_cast<int>(g.cells[n - 1].size());
      require(g.src[n][i] >= 0 && g.src[n][i] < lo && g.tgt[n][i] >= 0 && g.tgt[n][i] < lo,
              ErrorKind::MalformedInput,
              "boundary out of range for cell '" + g.cells[n][i] + "'");
    }
  }
  for (int n = 2; n <= g.truncation; ++n) {
    for (std::size_t i = 0; i < g.cells[n].size(); ++i) {
      bool ok = g.src[n - 1][g.src[n][i]] == g.src[n - 1][g.tgt[n][i]] &&
                g.tgt[n - 1][g.src[n][i]] == g.tgt[n - 1][g.tgt[n][i]];
      require(ok, ErrorKind::MalformedInput,
              "globular identity fails at cell '" + g.cells[n][i] + "' in dimension " +
                  std::to_string(n));
    }
  }
}

// The n-disc shape: two hemisphere cells s{d}, t{d} in each dimension d < n and
// a single cell "top" in dimension n.  Every cell has source s{d-1} and target
// t{d-1} one dimension down.
inline GlobularSet representable(int n) {
  require(n >= 0, ErrorKind::OutOfRange, "negative dimension");
  GlobularSet g;
  g.truncation = n;
  g.cells.resize(n + 1);
  g.src.resize(n + 1);
  g.tgt.resize(n + 1);
  for (int d = 0; d < n; ++d)
    g.cells[d] = {"s" + std::to_string(d), "t" + std::to_string(d)};
  g.cells[n] = {"top"};
  for (int d = 1; d <= n; ++d) {
    g.src[d].assign(g.cells[d].size(), 0);
    g.tgt[d].assign(g.cells[d].size(), 1);
  }
  return g;
}

using GlobularSetPtr = std::shared_ptr<const GlobularSet>;

// Map of truncated globular sets, defined on every dimension of the domain.
// Stored as index tables per dimension; commutes with src/tgt (validated).
struct GlobularSetMap {
  GlobularSetPtr dom;
  GlobularSetPtr cod;
  std::vector<std::vector<int>> map;  // map[n][i] indexes cod->cells[n]

  int at(int n, int i) const { return map[n][i]; }
};

inline void validate(const GlobularSetMap& f) {
  require(f.dom && f.cod, ErrorKind::MalformedInput, "map missing domain or codomain");
  require(f.cod->truncation >= f.dom->truncation, ErrorKind::DimensionMismatch,
          "codomain truncation below domain truncation");
  require(f.map.size() == static_cast<std::size_t>(f.dom->truncation) + 1,
          ErrorKind::MalformedInput, "map must cover dimensions 0.." +
              std::to_string(f.dom->truncation));
  for (int n = 0; n <= f.dom->truncation; ++n) {
    require(f.map[n].size() == f.dom->cells[n].size(), ErrorKind::MalformedInput,
            "component size mismatch in dimension " + std::to_string(n));
    for (std::size_t i = 0; i < f.map[n].size(); ++i) {
      require(f.map[n][i] >= 0 && f.map[n][i] < f.cod->cell_count(n), ErrorKind::OutOfRange,
              "image out of range in dimension " + std::to_string(n));
    }
  }
  for (int n = 1; n <= f.dom->truncation; ++n) {
    for (std::size_t i = 0; i < f.map[n].size(); ++i) {
      bool ok = f.cod->src[n][f.map[n][i]] == f.map[n - 1][f.dom->src[n][i]] &&
                f.cod->tgt[n][f.map[n][i]] == f.map[n - 1][f.dom->tgt[n][i]];
      require(ok, ErrorKind::BoundaryMismatch,
              "map does not commute with boundaries at cell '" + f.dom->cells[n][i] +
                  "' in dimension " + std::to_string(n));
    }
  }
}

inline GlobularSetMap identity_map(const GlobularSetPtr& g) {
  GlobularSetMap f{g, g, {}};
  f.map.resize(g->truncation + 1);
  for (int n = 0; n <= g->truncation; ++n) {
    f.map[n].resize(g->cells[n].size());
    for (std::size_t i = 0; i < f.map[n].size(); ++i) f.map[n][i] = static_cast<int>(i);
  }
  return f;
}

// g after f
inline GlobularSetMap compose(const GlobularSetMap& g, const GlobularSetMap& f) {
  require(f.cod.get() == g.dom.get() || f.cod->cells == g.dom->cells,
          ErrorKind::NotComposable, "codomain of first factor differs from domain of second");
  GlobularSetMap h{f.dom, g.cod, {}};
  h.map.resize(f.dom->truncation + 1);
  for (int n = 0; n <= f.dom->truncation; ++n) {
    h.map[n].resize(f.map[n].size());
    for (std::size_t i = 0; i < f.map[n].size(); ++i) h.map[n][i] = g.map[n][f.map[n][i]];
  }
  return h;
}

inline bool equal_maps(const GlobularSetMap& f, const GlobularSetMap& g) {
  return f.dom->cells == g.dom->cells && f.cod->cells == g.cod->cells && f.map == g.map;
}

// A parallel pair of m-cell valued assignments f, g over an abstract finite
// domain {0, ..., size-1}.  For m = 0 any two assignments are parallel; for
// m > 0 they must agree on sources and targets pointwise.
struct ParallelPair {
  GlobularSetPtr ambient;
  int dim = 0;
  std::vector<int> f;
  std::vector<int> g;
};

inline ParallelPair parallel_pair(const GlobularSetPtr& ambient, int dim, std::vector<int> f,
                                  std::vector<int> g) {
  require(ambient != nullptr, ErrorKind::MalformedInput, "missing ambient globular set");
  require(dim >= 0 && dim <= ambient->truncation, ErrorKind::DimensionMismatch,
          "dimension " + std::to_string(dim) + " exceeds truncation " +
              std::to_string(ambient->truncation));
  require(f.size() == g.size(), ErrorKind::DimensionMismatch,
          "assignments have different domains");
  int cmax = ambient->cell_count(dim);
  for (std::size_t i = 0; i < f.size(); ++i) {
    require(f[i] >= 0 && f[i] < cmax && g[i] >= 0 && g[i] < cmax, ErrorKind::OutOfRange,
            "cell index out of range at position " + std::to_string(i));
  }
  if (dim > 0) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      bool ok = ambient->src[dim][f[i]] == ambient->src[dim][g[i]] &&
                ambient->tgt[dim][f[i]] == ambient->tgt[dim][g[i]];
      require(ok, ErrorKind::NotParallel,
              "assignments disagree on boundaries at position " + std::to_string(i));
    }
  }
  return ParallelPair{ambient, dim, std::move(f), std::move(g)};
}

// True iff h (an assignment of (dim+1)-cells over the same domain) has f as
// its pointwise source and g as its pointwise target.
inline bool is_lifting(const ParallelPair& p, const std::vector<int>& h) {
  require(p.dim + 1 <= p.ambient->truncation, ErrorKind::TruncationExceeded,
          "ambient set has no dimension " + std::to_string(p.dim + 1));
  require(h.size() == p.f.size(), ErrorKind::DimensionMismatch,
          "candidate lifting has a different domain");
  int cmax = p.ambient->cell_count(p.dim + 1);
  for (std::size_t i = 0; i < h.size(); ++i) {
    require(h[i] >= 0 && h[i] < cmax, ErrorKind::OutOfRange,
            "cell index out of range at position " + std::to_string(i));
    if (p.ambient->src[p.dim + 1][h[i]] != p.f[i]) return false;
    if (p.ambient->tgt[p.dim + 1][h[i]] != p.g[i]) return false;
  }
  return true;
}

// All dimension-preserving assignments dom -> cod commuting with boundaries,
// as raw index tables, enumerated in lexicographic cell order.
inline std::vector<std::vector<std::vector<int>>> enumerate_globular_assignments(
    const GlobularSet& dom, const GlobularSet& cod) {
  std::vector<std::vector<std::vector<int>>> out;
  if (cod.truncation < dom.truncation) return out;
  std::vector<std::vector<int>> assign(dom.truncation + 1);
  for (int n = 0; n <= dom.truncation; ++n) assign[n].assign(dom.cells[n].size(), -1);
  std::vector<std::pair<int, int>> order;
  for (int n = 0; n <= dom.truncation; ++n)
    for (int i = 0; i < dom.cell_count(n); ++i) order.emplace_back(n, i);
  auto rec = [&](auto&& self, std::size_t pos) -> void {
    if (pos == order.size()) {
      out.push_back(assign);
      return;
    }
    auto [n, i] = order[pos];
    for (int c = 0; c < cod.cell_count(n); ++c) {
      if (n > 0) {
        if (cod.src[n][c] != assign[n - 1][dom.src[n][i]]) continue;
        if (cod.tgt[n][c] != assign[n - 1][dom.tgt[n][i]]) continue;
      }
      assign[n][i] = c;
      self(self, pos + 1);
      assign[n][i] = -1;
    }
  };
  rec(rec, 0);
  return out;
}

// --- serialization ---------------------------------------------------------
//
// {"truncation": N, "cells": [[labels]...], "src": [[labels]...], "tgt": ...}
// src/tgt list dimensions 1..N and name the boundary cell one dimension down.
// Key order and cell order are fixed, so serialization is byte-stable.

inline nlohmann::ordered_json to_json(const GlobularSet& g) {
  nlohmann::ordered_json j;
  j["truncation"] = g.truncation;
  j["cells"] = g.cells;
  nlohmann::ordered_json src = nlohmann::ordered_json::array();
  nlohmann::ordered_json tgt = nlohmann::ordered_json::array();
  for (int n = 1; n <= g.truncation; ++n) {
    nlohmann::ordered_json s = nlohmann::ordered_json::array();
    nlohmann::ordered_json t = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < g.cells[n].size(); ++i) {
      s.push_back(g.cells[n - 1][g.src[n][i]]);
      t.push_back(g.cells[n - 1][g.tgt[n][i]]);
    }
    src.push_back(s);
    tgt.push_back(t);
  }
  j["src"] = src;
  j["tgt"] = tgt;
  return j;
}

inline GlobularSet globset_from_json(const nlohmann::json& j) {
  GlobularSet g;
  try {
    g.truncation = j.at("truncation").get<int>();
    g.cells = j.at("cells").get<std::vector<std::vector<std::string>>>();
    auto src = j.at("src").get<std::vector<std::vector<std::string>>>();
    auto tgt = j.at("tgt").get<std::vector<std::vector<std::string>>>();
    require(g.truncation >= 0 &&
                g.cells.size() == static_cast<std::size_t>(g.truncation) + 1 &&
                src.size() == static_cast<std::size_t>(g.truncation) &&
                tgt.size() == static_cast<std::size_t>(g.truncation),
            ErrorKind::MalformedInput, "cells/src/tgt arrays do not match truncation");
    g.src.resize(g.truncation + 1);
    g.tgt.resize(g.truncation + 1);
    for (int n = 1; n <= g.truncation; ++n) {
      for (const auto& label : src[n - 1]) g.src[n].push_back(g.find_cell(n - 1, label));
      for (const auto& label : tgt[n - 1]) g.tgt[n].push_back(g.find_cell(n - 1, label));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::MalformedInput, std::string("bad globular set JSON: ") + e.what());
  }
  validate(g);
  return g;
}

}  // namespace globular
