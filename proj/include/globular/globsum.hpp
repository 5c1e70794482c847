#pragma once

#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "globular/globset.hpp"
#include "globular/table.hpp"

namespace globular {

// Pasting shape of a table: copies of the disc shapes at the odd positions,
// glued over the even positions.  For an even entry m sitting between left
// segment L and right segment R the gluing identifies the hemispheres below
// dimension m across L and R and glues the m-target of L to the m-source of R
// (the composable reading order: in (1,0,1) the first arrow ends where the
// second one starts).
//
// Cells carry labels "g<segment>:<tag>" where <segment> is the 1-based ordinal
// of the odd position contributing the cell and <tag> is the disc cell name;
// identified cells keep the label from the leftmost contributing segment.
struct GlobularSum {
  Table table;
  GlobularSetPtr carrier;
  // cocone[j][d][i] = carrier index of cell i in dimension d of disc j
  std::vector<std::vector<std::vector<int>>> cocone;
};

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  // keeps the smaller root so that leftmost segments win representative choice
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent[b] = a;
  }
};

}  // namespace detail

inline GlobularSum glob_sum(const Table& table) {
  validate_table(table);
  const int nseg = static_cast<int>(table_segments(table));
  const int top_dim = table_dim(table);

  std::vector<GlobularSet> disc(nseg);
  for (int j = 0; j < nseg; ++j) disc[j] = representable(table[2 * j]);

  // flat ids over the disjoint union, ordered by (segment, dimension, cell)
  std::vector<std::vector<int>> base(nseg);  // base[j][d] = first id of (j, d)
  int total = 0;
  for (int j = 0; j < nseg; ++j) {
    base[j].resize(disc[j].truncation + 1);
    for (int d = 0; d <= disc[j].truncation; ++d) {
      base[j][d] = total;
      total += disc[j].cell_count(d);
    }
  }
  auto id_of = [&](int j, int d, int i) { return base[j][d] + i; };

  detail::UnionFind uf(total);
  // glue over each even entry: disc(m) maps into the left segment by the
  // cotarget-style inclusion (top -> t{m}) and into the right segment by the
  // cosource-style inclusion (top -> s{m}); hemisphere cells map identically.
  for (int j = 0; j + 1 < nseg; ++j) {
    int m = table[2 * j + 1];
    for (int d = 0; d < m; ++d) {
      uf.unite(id_of(j, d, 0), id_of(j + 1, d, 0));  // s{d} ~ s{d}
      uf.unite(id_of(j, d, 1), id_of(j + 1, d, 1));  // t{d} ~ t{d}
    }
    // image of the glued disc's top cell: t{m} on the left, s{m} on the right
    // (m is strictly below both neighbouring entries, so both cells exist)
    uf.unite(id_of(j, m, 1), id_of(j + 1, m, 0));
  }

  // enumerate classes in flat-id order; the class representative is the
  // smallest flat id, i.e. the leftmost segment's cell
  auto sum = std::make_shared<GlobularSet>();
  sum->truncation = top_dim;
  sum->cells.resize(top_dim + 1);
  sum->src.resize(top_dim + 1);
  sum->tgt.resize(top_dim + 1);

  std::vector<int> carrier_index(total, -1);
  std::vector<std::vector<std::vector<int>>> cocone(nseg);
  for (int j = 0; j < nseg; ++j) {
    cocone[j].resize(disc[j].truncation + 1);
    for (int d = 0; d <= disc[j].truncation; ++d)
      cocone[j][d].assign(disc[j].cell_count(d), -1);
  }

  for (int d = 0; d <= top_dim; ++d) {
    for (int j = 0; j < nseg; ++j) {
      if (d > disc[j].truncation) continue;
      for (int i = 0; i < disc[j].cell_count(d); ++i) {
        int root = uf.find(id_of(j, d, i));
        if (carrier_index[root] == -1 && root == id_of(j, d, i)) {
          carrier_index[root] = static_cast<int>(sum->cells[d].size());
          sum->cells[d].push_back("g" + std::to_string(j + 1) + ":" + disc[j].cells[d][i]);
        }
      }
    }
  }
  for (int j = 0; j < nseg; ++j)
    for (int d = 0; d <= disc[j].truncation; ++d)
      for (int i = 0; i < disc[j].cell_count(d); ++i)
        cocone[j][d][i] = carrier_index[uf.find(id_of(j, d, i))];

  for (int d = 1; d <= top_dim; ++d) {
    sum->src[d].assign(sum->cells[d].size(), -1);
    sum->tgt[d].assign(sum->cells[d].size(), -1);
    for (int j = 0; j < nseg; ++j) {
      if (d > disc[j].truncation) continue;
      for (int i = 0; i < disc[j].cell_count(d); ++i) {
        int c = cocone[j][d][i];
        sum->src[d][c] = cocone[j][d - 1][disc[j].src[d][i]];
        sum->tgt[d][c] = cocone[j][d - 1][disc[j].tgt[d][i]];
      }
    }
  }

  validate(*sum);
  return GlobularSum{table, sum, std::move(cocone)};
}

// The j-th (0-based) cocone inclusion disc(n_j) -> carrier as a globular map.
inline GlobularSetMap cocone_map(const GlobularSum& s, int j) {
  require(j >= 0 && j < static_cast<int>(s.cocone.size()), ErrorKind::OutOfRange,
          "no segment " + std::to_string(j));
  auto disc = std::make_shared<GlobularSet>(representable(s.table[2 * j]));
  GlobularSetMap f{disc, s.carrier, s.cocone[j]};
  validate(f);
  return f;
}

inline std::vector<int> sum_cell_counts(const GlobularSum& s) {
  std::vector<int> counts;
  for (int d = 0; d <= s.carrier->truncation; ++d) counts.push_back(s.carrier->cell_count(d));
  return counts;
}

}  // namespace globular
