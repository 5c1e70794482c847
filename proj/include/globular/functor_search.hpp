#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "globular/error.hpp"
#include "globular/functor.hpp"
#include "globular/groupoid.hpp"

namespace globular {

// Exhaustive enumeration of functors between finite groupoids, used as an
// independent oracle against the constructive lift algorithms. A functor out
// of a connected groupoid is determined by the image of one object, a group
// homomorphism on its vertex group, and one arrow image per remaining object
// (spanning tree); enumeration walks exactly that data per component.
//
// Constraints prune during the walk. For constraints of the shape
// "compose with a fixed functor equals a fixed functor" the local pruning is
// complete: checking tree edges and vertex loops already forces the relation
// on every arrow, because images decompose through them.
struct FunctorSearchOptions {
  // Admissible object image, called as obj_ok(dom_object, cod_object).
  std::function<bool(std::uint32_t, std::uint32_t)> obj_ok;
  // Admissible arrow image, called as arrow_ok(dom_arrow, image). Checked on
  // spanning tree edges and vertex loops while searching and, when
  // final_check is set, on every arrow before a candidate is reported.
  std::function<bool(const Arrow&, const Arrow&)> arrow_ok;
  bool final_check = true;
  std::uint64_t node_budget = 1ull << 26;
};

namespace detail {

struct SearchTree {
  std::vector<std::uint32_t> roots;
  std::vector<std::uint32_t> comp_of;
  std::vector<Arrow> to_obj;    // tree arrow root -> v, identity at the root
  std::vector<Arrow> from_obj;  // its inverse
  std::vector<std::vector<std::uint32_t>> members;  // BFS order, root first
};

inline SearchTree spanning_forest(const GroupoidPtr& g) {
  const std::uint32_t n = g->object_count();
  SearchTree t;
  t.comp_of.assign(n, 0xffffffffu);
  t.to_obj.resize(n);
  t.from_obj.resize(n);
  for (std::uint32_t root = 0; root < n; ++root) {
    if (t.comp_of[root] != 0xffffffffu) continue;
    const std::uint32_t ci = static_cast<std::uint32_t>(t.roots.size());
    t.roots.push_back(root);
    t.members.push_back({});
    t.comp_of[root] = ci;
    t.to_obj[root] = g->identity(root);
    t.from_obj[root] = t.to_obj[root];
    std::vector<std::uint32_t> queue{root};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::uint32_t a = queue[head];
      t.members[ci].push_back(a);
      for (std::uint32_t b = 0; b < n; ++b) {
        if (t.comp_of[b] != 0xffffffffu || g->hom_size(a, b) == 0) continue;
        t.comp_of[b] = ci;
        t.to_obj[b] = g->compose(Arrow{a, b, 0}, t.to_obj[a]);
        t.from_obj[b] = g->inverse(t.to_obj[b]);
        queue.push_back(b);
      }
    }
  }
  return t;
}

// The data a complete candidate carries; copied into each reported functor so
// later search states cannot disturb it.
struct Assignment {
  std::vector<std::uint32_t> obj;
  std::vector<Arrow> e;     // image of the tree arrow into each object
  std::vector<Arrow> einv;  // its inverse, in the codomain
  std::vector<std::vector<Arrow>> phi;  // per component, vertex loop images
};

}  // namespace detail

inline std::uint64_t search_functors(
    const GroupoidPtr& dom, const GroupoidPtr& cod,
    const std::function<bool(const Functor&)>& visit,
    const FunctorSearchOptions& opt = {}) {
  const auto tree = detail::spanning_forest(dom);
  const std::uint32_t n = dom->object_count();
  const std::uint32_t m = cod->object_count();
  auto obj_ok = [&](std::uint32_t a, std::uint32_t w) {
    return !opt.obj_ok || opt.obj_ok(a, w);
  };
  auto arrow_ok = [&](const Arrow& a, const Arrow& im) {
    return !opt.arrow_ok || opt.arrow_ok(a, im);
  };

  detail::Assignment cur;
  cur.obj.assign(n, 0);
  cur.e.resize(n);
  cur.einv.resize(n);
  cur.phi.resize(tree.roots.size());

  std::uint64_t nodes = 0;
  std::uint64_t found = 0;
  bool stop = false;
  auto charge = [&]() {
    require(++nodes <= opt.node_budget, ErrorKind::OutOfRange,
            "functor search exceeded its node budget");
  };

  auto emit = [&]() {
    auto plan = std::make_shared<detail::Assignment>(cur);
    auto shared_tree = std::make_shared<detail::SearchTree>(tree);
    Functor f;
    f.dom = dom;
    f.cod = cod;
    f.name = "found";
    f.obj = [plan](std::uint32_t o) { return plan->obj[o]; };
    f.arr = [plan, shared_tree, dom, cod](const Arrow& a) {
      const Arrow loop = dom->compose(
          shared_tree->from_obj[a.tgt], dom->compose(a, shared_tree->to_obj[a.src]));
      const Arrow mid = plan->phi[shared_tree->comp_of[a.src]][loop.idx];
      return cod->compose(plan->e[a.tgt], cod->compose(mid, plan->einv[a.src]));
    };
    if (opt.final_check) {
      for (std::uint32_t a = 0; a < n && !stop; ++a)
        for (std::uint32_t b = 0; b < n; ++b)
          for (std::uint32_t i = 0; i < dom->hom_size(a, b); ++i) {
            const Arrow x{a, b, i};
            if (!arrow_ok(x, f.arr(x))) return;
          }
    }
    ++found;
    if (!visit(f)) stop = true;
  };

  // Per component: image object, vertex group homomorphism, tree edges.
  std::function<void(std::uint32_t)> place_component = [&](std::uint32_t ci) {
    if (stop) return;
    if (ci == tree.roots.size()) {
      emit();
      return;
    }
    const std::uint32_t root = tree.roots[ci];
    const std::uint32_t loops = dom->hom_size(root, root);
    const std::uint32_t id_dom = dom->identity(root).idx;

    std::function<void(std::uint32_t, std::uint32_t)> place_edges =
        [&](std::uint32_t w, std::uint32_t vi) {
          if (stop) return;
          if (vi == tree.members[ci].size()) {
            place_component(ci + 1);
            return;
          }
          const std::uint32_t v = tree.members[ci][vi];
          for (std::uint32_t u = 0; u < m && !stop; ++u) {
            if (!obj_ok(v, u)) continue;
            for (std::uint32_t k = 0; k < cod->hom_size(w, u) && !stop; ++k) {
              charge();
              const Arrow ev{w, u, k};
              if (!arrow_ok(tree.to_obj[v], ev)) continue;
              cur.obj[v] = u;
              cur.e[v] = ev;
              cur.einv[v] = cod->inverse(ev);
              place_edges(w, vi + 1);
            }
          }
        };

    // Assign phi elementwise, then keep only group homomorphisms.
    std::function<void(std::uint32_t, std::uint32_t)> place_phi =
        [&](std::uint32_t w, std::uint32_t li) {
          if (stop) return;
          if (li == loops) {
            auto& phi = cur.phi[ci];
            for (std::uint32_t x = 0; x < loops; ++x)
              for (std::uint32_t y = 0; y < loops; ++y) {
                const Arrow xy = dom->compose(Arrow{root, root, x},
                                              Arrow{root, root, y});
                if (!(cod->compose(phi[x], phi[y]) == phi[xy.idx])) return;
              }
            place_edges(w, 1);
            return;
          }
          if (li == id_dom) {
            cur.phi[ci][li] = cod->identity(w);
            place_phi(w, li + 1);
            return;
          }
          for (std::uint32_t j = 0; j < cod->hom_size(w, w) && !stop; ++j) {
            charge();
            const Arrow im{w, w, j};
            if (!arrow_ok(Arrow{root, root, li}, im)) continue;
            cur.phi[ci][li] = im;
            place_phi(w, li + 1);
          }
        };

    for (std::uint32_t w = 0; w < m && !stop; ++w) {
      charge();
      if (!obj_ok(root, w)) continue;
      const Arrow idw = cod->identity(w);
      if (!arrow_ok(tree.to_obj[root], idw)) continue;
      cur.obj[root] = w;
      cur.e[root] = idw;
      cur.einv[root] = idw;
      cur.phi[ci].assign(loops, idw);
      place_phi(w, 0);
    }
  };

  place_component(0);
  return found;
}

inline std::uint64_t count_functors(const GroupoidPtr& dom,
                                    const GroupoidPtr& cod,
                                    const FunctorSearchOptions& opt = {}) {
  return search_functors(dom, cod, [](const Functor&) { return true; }, opt);
}

inline std::optional<Functor> find_functor(const GroupoidPtr& dom,
                                           const GroupoidPtr& cod,
                                           const FunctorSearchOptions& opt = {}) {
  std::optional<Functor> out;
  search_functors(
      dom, cod,
      [&](const Functor& f) {
        out = f;
        return false;
      },
      opt);
  return out;
}

}  // namespace globular
