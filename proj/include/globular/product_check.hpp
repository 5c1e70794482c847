#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "globular/error.hpp"
#include "globular/functor.hpp"
#include "globular/functor_search.hpp"
#include "globular/table.hpp"
#include "globular/theta0.hpp"

namespace globular {

// An assignment of objects to tables together with the structure morphisms a
// product interpretation must provide: one projection per segment and the
// hemisphere chains used in the wall equations. The category is presented by
// hom enumeration so the universal property can be checked literally.
template <typename C>
struct ProductAssignment {
  std::function<typename C::Obj(const Table&)> object_of;
  // j-th segment projection, object_of(nbar) -> object_of((n_j)).
  std::function<typename C::Mor(const Table&, std::size_t)> projection;
  // Iterated hemisphere map object_of((hi)) -> object_of((lo));
  // target = false gives the source side.
  std::function<typename C::Mor(int hi, int lo, bool target)> chain;
};

struct ProductCheckResult {
  bool preserved = true;
  std::uint64_t probes = 0;
  std::uint64_t mediators = 0;
  std::uint64_t cones = 0;
  std::string counterexample;
};

// Checks that object_of(nbar) is the limit of its segment diagram against
// every probe: morphisms into the assigned object must biject with wall-
// compatible leg tuples under composition with the projections.
template <typename C>
ProductCheckResult check_product_preservation(
    const C& cat, const ProductAssignment<C>& J, const Table& nbar,
    const std::vector<typename C::Obj>& probes) {
  validate_table(nbar);
  ProductCheckResult result;
  const std::size_t nseg = table_segments(nbar);

  std::vector<typename C::Mor> projs;
  for (std::size_t j = 0; j < nseg; ++j) projs.push_back(J.projection(nbar, j));
  const auto target = J.object_of(nbar);

  auto fail_with = [&](std::string what) {
    result.preserved = false;
    if (result.counterexample.empty())
      result.counterexample = table_to_string(nbar) + ": " + std::move(what);
  };

  for (const auto& probe : probes) {
    ++result.probes;
    const auto meds = cat.hom_all(probe, target);
    result.mediators += meds.size();

    std::vector<std::vector<typename C::Mor>> tuples;
    tuples.reserve(meds.size());
    for (const auto& med : meds) {
      std::vector<typename C::Mor> tuple;
      tuple.reserve(nseg);
      for (std::size_t j = 0; j < nseg; ++j)
        tuple.push_back(cat.compose(projs[j], med));
      for (std::size_t j = 0; j + 1 < nseg; ++j) {
        const int wall = nbar[2 * j + 1];
        const auto lhs =
            cat.compose(J.chain(nbar[2 * j], wall, true), tuple[j]);
        const auto rhs =
            cat.compose(J.chain(nbar[2 * j + 2], wall, false), tuple[j + 1]);
        if (!cat.mor_equal(lhs, rhs))
          fail_with("a mediator's projections violate wall " +
                    std::to_string(j));
      }
      tuples.push_back(std::move(tuple));
    }

    std::vector<std::vector<typename C::Mor>> seg_homs;
    for (std::size_t j = 0; j < nseg; ++j)
      seg_homs.push_back(cat.hom_all(probe, J.object_of(Table{nbar[2 * j]})));

    std::vector<std::size_t> pick(nseg, 0);
    bool exhausted = false;
    for (std::size_t j = 0; j < nseg; ++j) exhausted |= seg_homs[j].empty();
    std::uint64_t cone_count = 0;
    while (!exhausted) {
      bool walls_hold = true;
      for (std::size_t j = 0; j + 1 < nseg && walls_hold; ++j) {
        const int wall = nbar[2 * j + 1];
        const auto lhs = cat.compose(J.chain(nbar[2 * j], wall, true),
                                     seg_homs[j][pick[j]]);
        const auto rhs = cat.compose(J.chain(nbar[2 * j + 2], wall, false),
                                     seg_homs[j + 1][pick[j + 1]]);
        walls_hold = cat.mor_equal(lhs, rhs);
      }
      if (walls_hold) {
        ++cone_count;
        std::uint64_t matches = 0;
        for (const auto& tuple : tuples) {
          bool same = true;
          for (std::size_t j = 0; j < nseg && same; ++j)
            same = cat.mor_equal(tuple[j], seg_homs[j][pick[j]]);
          if (same) ++matches;
        }
        if (matches == 0) fail_with("a wall-compatible cone has no mediator");
        if (matches > 1) fail_with("a cone is mediated more than once");
      }
      std::size_t j = 0;
      for (; j < nseg; ++j) {
        if (++pick[j] < seg_homs[j].size()) break;
        pick[j] = 0;
      }
      exhausted = j == nseg;
    }
    result.cones += cone_count;
    if (cone_count != meds.size())
      fail_with("mediator and cone counts differ (" +
                std::to_string(meds.size()) + " vs " +
                std::to_string(cone_count) + ")");
  }
  return result;
}

// The pasting-shape category read with arrows reversed, so sums present
// themselves as products. Objects are tables; a morphism z -> w wraps an
// underlying shape map w -> z.
struct Theta0OpOracle {
  using Obj = Table;
  using Mor = Theta0Morphism;

  std::vector<Mor> hom_all(const Obj& z, const Obj& w) const {
    return theta0_hom(w, z);
  }
  Mor compose(const Mor& f, const Mor& g) const {
    return globular::compose(g, f);
  }
  bool mor_equal(const Mor& a, const Mor& b) const { return equal(a, b); }
};

// The canonical assignment in the reversed pasting-shape category: every
// table denotes itself, projections are the segment inclusions and chains the
// hemisphere inclusions.
inline ProductAssignment<Theta0OpOracle> theta0_self_assignment() {
  ProductAssignment<Theta0OpOracle> J;
  J.object_of = [](const Table& t) { return t; };
  J.projection = [](const Table& nbar, std::size_t j) {
    return segment_inclusion(nbar, static_cast<int>(j));
  };
  J.chain = [](int hi, int lo, bool target) {
    return target ? hem_tgt_inclusion(lo, hi) : hem_src_inclusion(lo, hi);
  };
  return J;
}

// Finite groupoids with hom sets enumerated by exhaustive functor search.
// Probes must stay tiny; the node budget guards against runaway searches.
struct GrpdHomOracle {
  using Obj = GroupoidPtr;
  using Mor = Functor;

  std::uint64_t node_budget = 1ull << 26;

  std::vector<Mor> hom_all(const Obj& z, const Obj& w) const {
    std::vector<Mor> out;
    FunctorSearchOptions opt;
    opt.node_budget = node_budget;
    search_functors(
        z, w,
        [&](const Functor& f) {
          out.push_back(f);
          return true;
        },
        opt);
    return out;
  }
  Mor compose(const Mor& f, const Mor& g) const {
    return compose_functors(f, g);
  }
  bool mor_equal(const Mor& f, const Mor& g) const {
    if (f.dom->serial() != g.dom->serial() ||
        f.cod->serial() != g.cod->serial())
      return false;
    for (std::uint32_t a = 0; a < f.dom->object_count(); ++a)
      if (f.obj(a) != g.obj(a)) return false;
    for (std::uint32_t a = 0; a < f.dom->object_count(); ++a)
      for (std::uint32_t b = 0; b < f.dom->object_count(); ++b)
        for (std::uint32_t i = 0; i < f.dom->hom_size(a, b); ++i) {
          const Arrow x{a, b, i};
          if (!(f.arr(x) == g.arr(x))) return false;
        }
    return true;
  }
};

}  // namespace globular
