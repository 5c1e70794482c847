#pragma once

// Independent reference implementations used only by tests.  These recompute
// results of the library through generic machinery (colimits of arbitrary
// diagrams, exhaustive searches) so the fast/specialized code paths have
// something to disagree with.

#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "globular/functor.hpp"
#include "globular/globset.hpp"
#include "globular/globsum.hpp"
#include "globular/groupoid.hpp"
#include "globular/table.hpp"

namespace oracle {

using globular::GlobularSet;
using globular::GlobularSetMap;
using globular::GlobularSetPtr;
using globular::Table;

struct GSDiagramArrow {
  int from = 0;
  int to = 0;
  std::vector<std::vector<int>> map;  // per-dimension index tables
};

struct GSDiagram {
  std::vector<GlobularSetPtr> objects;
  std::vector<GSDiagramArrow> arrows;
};

// Dimensionwise colimit of an arbitrary finite diagram of globular sets:
// disjoint union of all cells quotiented by the relation generated by
// (o, c) ~ (o', f(c)) for every diagram arrow f: o -> o'.
inline GlobularSet generic_colimit(const GSDiagram& diagram) {
  int top_dim = 0;
  for (const auto& o : diagram.objects) top_dim = std::max(top_dim, o->truncation);

  std::vector<std::vector<int>> base(diagram.objects.size());
  int total = 0;
  for (std::size_t o = 0; o < diagram.objects.size(); ++o) {
    base[o].resize(diagram.objects[o]->truncation + 1);
    for (int d = 0; d <= diagram.objects[o]->truncation; ++d) {
      base[o][d] = total;
      total += diagram.objects[o]->cell_count(d);
    }
  }
  auto id_of = [&](std::size_t o, int d, int i) { return base[o][d] + i; };

  std::vector<int> parent(total);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent[b] = a;
  };

  for (const auto& arrow : diagram.arrows) {
    const auto& dom = *diagram.objects[arrow.from];
    for (int d = 0; d <= dom.truncation; ++d)
      for (int i = 0; i < dom.cell_count(d); ++i)
        unite(id_of(arrow.from, d, i), id_of(arrow.to, d, arrow.map[d][i]));
  }

  GlobularSet out;
  out.truncation = top_dim;
  out.cells.resize(top_dim + 1);
  out.src.resize(top_dim + 1);
  out.tgt.resize(top_dim + 1);
  std::vector<int> index(total, -1);
  for (int d = 0; d <= top_dim; ++d) {
    for (std::size_t o = 0; o < diagram.objects.size(); ++o) {
      if (d > diagram.objects[o]->truncation) continue;
      for (int i = 0; i < diagram.objects[o]->cell_count(d); ++i) {
        int me = id_of(o, d, i);
        if (find(me) == me && index[me] == -1) {
          index[me] = static_cast<int>(out.cells[d].size());
          out.cells[d].push_back("o" + std::to_string(o) + ":" +
                                 diagram.objects[o]->cells[d][i]);
        }
      }
    }
  }
  for (int d = 1; d <= top_dim; ++d) {
    out.src[d].assign(out.cells[d].size(), -1);
    out.tgt[d].assign(out.cells[d].size(), -1);
    for (std::size_t o = 0; o < diagram.objects.size(); ++o) {
      const auto& g = *diagram.objects[o];
      if (d > g.truncation) continue;
      for (int i = 0; i < g.cell_count(d); ++i) {
        int c = index[find(id_of(o, d, i))];
        out.src[d][c] = index[find(id_of(o, d - 1, g.src[d][i]))];
        out.tgt[d][c] = index[find(id_of(o, d - 1, g.tgt[d][i]))];
      }
    }
  }
  globular::validate(out);
  return out;
}

// The zig-zag diagram of a table, with a disc at every position (odd and even)
// and, for each even position, the two hemisphere inclusions into the
// neighbouring discs: top goes to the target hemisphere on the left and to the
// source hemisphere on the right.
inline GSDiagram zigzag_diagram(const Table& table) {
  globular::validate_table(table);
  GSDiagram diagram;
  for (int entry : table)
    diagram.objects.push_back(std::make_shared<GlobularSet>(globular::representable(entry)));
  auto inclusion = [](int m, bool to_source_hemisphere) {
    std::vector<std::vector<int>> map(m + 1);
    for (int d = 0; d < m; ++d) map[d] = {0, 1};
    map[m] = {to_source_hemisphere ? 0 : 1};
    return map;
  };
  for (std::size_t p = 1; p < table.size(); p += 2) {
    int m = table[p];
    diagram.arrows.push_back({static_cast<int>(p), static_cast<int>(p - 1),
                              inclusion(m, /*to_source_hemisphere=*/false)});
    diagram.arrows.push_back({static_cast<int>(p), static_cast<int>(p + 1),
                              inclusion(m, /*to_source_hemisphere=*/true)});
  }
  return diagram;
}

inline std::vector<int> colimit_cell_counts(const Table& table) {
  GlobularSet g = generic_colimit(zigzag_diagram(table));
  std::vector<int> counts;
  for (int d = 0; d <= g.truncation; ++d) counts.push_back(g.cell_count(d));
  return counts;
}

// Exhaustive groupoid axiom check through the virtual interface only.
// Associativity runs over every composable triple; callers keep inputs small
// enough for that to finish (cap guards against accidental blowups).
inline void check_groupoid_laws(const globular::Groupoid& g,
                                std::uint64_t triple_cap = (1u << 24)) {
  using globular::Arrow;
  const std::uint32_t n = g.object_count();
  std::vector<Arrow> all;
  for (std::uint32_t s = 0; s < n; ++s)
    for (std::uint32_t t = 0; t < n; ++t)
      for (std::uint32_t i = 0; i < g.hom_size(s, t); ++i)
        all.push_back(Arrow{s, t, i});

  for (std::uint32_t o = 0; o < n; ++o) {
    const Arrow e = g.identity(o);
    if (e.src != o || e.tgt != o || e.idx >= g.hom_size(o, o))
      throw std::runtime_error("identity handle invalid at object " +
                               g.object_label(o));
  }
  for (const Arrow& f : all) {
    const Arrow i = g.inverse(f);
    if (i.src != f.tgt || i.tgt != f.src)
      throw std::runtime_error("inverse endpoints wrong at " + g.arrow_label(f));
    if (g.compose(i, f) != g.identity(f.src) ||
        g.compose(f, i) != g.identity(f.tgt))
      throw std::runtime_error("inverse laws fail at " + g.arrow_label(f));
    if (g.compose(f, g.identity(f.src)) != f ||
        g.compose(g.identity(f.tgt), f) != f)
      throw std::runtime_error("identity laws fail at " + g.arrow_label(f));
  }
  std::uint64_t triples = 0;
  for (const Arrow& f : all)
    for (const Arrow& gg : all) {
      if (f.tgt != gg.src) continue;
      const Arrow gf = g.compose(gg, f);
      if (gf.src != f.src || gf.tgt != gg.tgt)
        throw std::runtime_error("composite endpoints wrong at " +
                                 g.arrow_label(gg) + " after " + g.arrow_label(f));
      for (const Arrow& h : all) {
        if (h.tgt != f.src) continue;
        if (++triples > triple_cap)
          throw std::runtime_error("associativity sweep exceeds cap");
        if (g.compose(gf, h) != g.compose(gg, g.compose(f, h)))
          throw std::runtime_error("associativity fails");
      }
    }
}

// Arrow total recomputed the slow way, one hom at a time.
inline std::uint64_t brute_arrow_count(const globular::Groupoid& g) {
  std::uint64_t total = 0;
  const std::uint32_t n = g.object_count();
  for (std::uint32_t s = 0; s < n; ++s)
    for (std::uint32_t t = 0; t < n; ++t) total += g.hom_size(s, t);
  return total;
}

// Pullback sizes recomputed from raw pairs, bypassing the pullback class:
// count object pairs and arrow pairs that the legs identify.
inline std::pair<std::uint64_t, std::uint64_t> brute_pullback_counts(
    const globular::Functor& f, const globular::Functor& g) {
  using globular::Arrow;
  std::uint64_t objs = 0, arrs = 0;
  const std::uint32_t na = f.dom->object_count();
  const std::uint32_t nb = g.dom->object_count();
  for (std::uint32_t a = 0; a < na; ++a)
    for (std::uint32_t b = 0; b < nb; ++b)
      if (f.obj(a) == g.obj(b)) ++objs;
  for (std::uint32_t a = 0; a < na; ++a)
    for (std::uint32_t a2 = 0; a2 < na; ++a2)
      for (std::uint32_t i = 0; i < f.dom->hom_size(a, a2); ++i) {
        const Arrow fa = f.arr(Arrow{a, a2, i});
        for (std::uint32_t b = 0; b < nb; ++b)
          for (std::uint32_t b2 = 0; b2 < nb; ++b2)
            for (std::uint32_t j = 0; j < g.dom->hom_size(b, b2); ++j)
              if (fa == g.arr(Arrow{b, b2, j})) ++arrs;
      }
  return {objs, arrs};
}

// True iff two globular sets are isomorphic, by exhaustive search over
// dimension-preserving boundary-respecting assignments.
inline bool isomorphic(const GlobularSet& a, const GlobularSet& b) {
  if (a.truncation != b.truncation) return false;
  for (int d = 0; d <= a.truncation; ++d)
    if (a.cell_count(d) != b.cell_count(d)) return false;
  for (const auto& assign : globular::enumerate_globular_assignments(a, b)) {
    bool bijective = true;
    for (int d = 0; d <= a.truncation && bijective; ++d) {
      std::vector<bool> hit(b.cell_count(d), false);
      for (int i : assign[d]) {
        if (hit[i]) bijective = false;
        hit[i] = true;
      }
    }
    if (bijective) return true;
  }
  return false;
}

}  // namespace oracle
