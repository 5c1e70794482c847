#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "globular/groupoid.hpp"

namespace globular {

// A functor between groupoids, carried by closures over canonical handles.
// Optional certificate oracles travel with the functor:
//   iso_lift(d, g): for g an arrow out of obj(d) in the codomain, an arrow
//     out of d mapping to g (isofibration structure);
//   iso_witness(c): a pair (a, e) with e an iso obj(a) -> c in the codomain
//     (essential surjectivity structure).
// Oracles are advisory: every consumer verifies what it uses.
struct Functor {
  GroupoidPtr dom;
  GroupoidPtr cod;
  std::function<std::uint32_t(std::uint32_t)> obj;
  std::function<Arrow(const Arrow&)> arr;
  std::string name;
  std::function<Arrow(std::uint32_t, const Arrow&)> iso_lift;
  std::function<std::pair<std::uint32_t, Arrow>(std::uint32_t)> iso_witness;

  std::uint32_t apply_obj(std::uint32_t o) const {
    dom->check_object(o);
    const std::uint32_t r = obj(o);
    cod->check_object(r);
    return r;
  }
  Arrow apply(const Arrow& f) const {
    dom->check_arrow(f);
    Arrow r = arr(f);
    cod->check_arrow(r);
    if (r.src != obj(f.src) || r.tgt != obj(f.tgt))
      fail(ErrorKind::BoundaryMismatch,
           "functor " + name + " broke an arrow boundary at " +
               dom->arrow_label(f));
    return r;
  }
};

inline Functor identity_functor(GroupoidPtr g, std::string name = "id") {
  Functor f;
  f.dom = g;
  f.cod = g;
  f.obj = [](std::uint32_t o) { return o; };
  f.arr = [](const Arrow& a) { return a; };
  f.name = std::move(name);
  f.iso_lift = [](std::uint32_t, const Arrow& gamma) { return gamma; };
  f.iso_witness = [g](std::uint32_t c) {
    return std::pair<std::uint32_t, Arrow>{c, g->identity(c)};
  };
  return f;
}

// g after f. Oracles compose when both factors carry them.
inline Functor compose_functors(const Functor& g, const Functor& f,
                                std::string name = "") {
  require(f.cod && g.dom && f.cod->serial() == g.dom->serial(),
          ErrorKind::NotComposable,
          "functor composition mismatch: " + g.name + " after " + f.name);
  Functor h;
  h.dom = f.dom;
  h.cod = g.cod;
  auto fobj = f.obj, gobj = g.obj;
  auto farr = f.arr, garr = g.arr;
  h.obj = [fobj, gobj](std::uint32_t o) { return gobj(fobj(o)); };
  h.arr = [farr, garr](const Arrow& a) { return garr(farr(a)); };
  h.name = name.empty() ? g.name + "*" + f.name : std::move(name);
  if (f.iso_lift && g.iso_lift) {
    auto flift = f.iso_lift, glift = g.iso_lift;
    h.iso_lift = [fobj, flift, glift](std::uint32_t d, const Arrow& gamma) {
      return flift(d, glift(fobj(d), gamma));
    };
  }
  if (f.iso_witness && g.iso_witness) {
    auto fwit = f.iso_witness, gwit = g.iso_witness;
    auto gcod = g.cod;
    auto garr2 = g.arr;
    h.iso_witness = [fwit, gwit, gcod, garr2](std::uint32_t c) {
      auto [b, e] = gwit(c);
      auto [a, e2] = fwit(b);
      return std::pair<std::uint32_t, Arrow>{a, gcod->compose(e, garr2(e2))};
    };
  }
  return h;
}

// Linear indexing of a groupoid's arrows in (src, tgt, idx) order. Only
// constructible when object_count()^2 offset slots are affordable.
class ArrowIndexer {
 public:
  explicit ArrowIndexer(GroupoidPtr g) : g_(std::move(g)) {
    const std::uint64_t n = g_->object_count();
    require(n * n <= (1u << 26), ErrorKind::OutOfRange,
            "groupoid too large to index arrows linearly");
    off_.assign(n * n + 1, 0);
    std::uint64_t acc = 0;
    for (std::uint64_t p = 0; p < n * n; ++p) {
      off_[p] = acc;
      acc += g_->hom_size(static_cast<std::uint32_t>(p / n),
                          static_cast<std::uint32_t>(p % n));
    }
    off_[n * n] = acc;
  }

  std::uint64_t size() const { return off_.back(); }
  std::uint64_t linear(const Arrow& a) const {
    return off_[static_cast<std::uint64_t>(a.src) * g_->object_count() + a.tgt] +
           a.idx;
  }
  Arrow arrow(std::uint64_t lin) const {
    const std::uint64_t n = g_->object_count();
    std::uint64_t lo = 0, hi = n * n;
    while (lo + 1 < hi) {
      const std::uint64_t mid = (lo + hi) / 2;
      (off_[mid] <= lin ? lo : hi) = mid;
    }
    return Arrow{static_cast<std::uint32_t>(lo / n),
                 static_cast<std::uint32_t>(lo % n),
                 static_cast<std::uint32_t>(lin - off_[lo])};
  }
  const GroupoidPtr& groupoid() const { return g_; }

 private:
  GroupoidPtr g_;
  std::vector<std::uint64_t> off_;
};

// Replaces a functor's actions with flat-array lookups when the domain is
// small enough; otherwise returns the functor unchanged.
inline Functor memoize_functor(const Functor& f,
                               std::uint64_t arrow_cap = (1u << 22)) {
  const std::uint64_t n = f.dom->object_count();
  if (n * n > (1u << 26) || f.dom->arrow_count() > arrow_cap) return f;
  auto ix = std::make_shared<ArrowIndexer>(f.dom);
  auto objs = std::make_shared<std::vector<std::uint32_t>>();
  objs->reserve(n);
  for (std::uint32_t o = 0; o < n; ++o) objs->push_back(f.apply_obj(o));
  auto arrs = std::make_shared<std::vector<Arrow>>();
  arrs->resize(ix->size());
  for (std::uint64_t lin = 0; lin < ix->size(); ++lin)
    (*arrs)[lin] = f.apply(ix->arrow(lin));
  Functor m = f;
  m.obj = [objs](std::uint32_t o) { return (*objs)[o]; };
  m.arr = [ix, arrs](const Arrow& a) { return (*arrs)[ix->linear(a)]; };
  return m;
}

// Pointwise equality on objects and all arrows. The arrow sweep requires the
// domain within budget; callers quantifying over big domains must reduce
// first (e.g. via jointly monic projections).
inline bool functor_equal(const Functor& f, const Functor& g,
                          std::uint64_t arrow_budget = (1u << 22)) {
  require(f.dom->serial() == g.dom->serial() &&
              f.cod->serial() == g.cod->serial(),
          ErrorKind::NotComposable,
          "functor comparison across different categories: " + f.name +
              " vs " + g.name);
  const std::uint32_t n = f.dom->object_count();
  for (std::uint32_t o = 0; o < n; ++o)
    if (f.obj(o) != g.obj(o)) return false;
  require(f.dom->arrow_count() <= arrow_budget, ErrorKind::OutOfRange,
          "functor comparison domain exceeds arrow budget: " + f.name);
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b) {
      const std::uint32_t h = f.dom->hom_size(a, b);
      for (std::uint32_t i = 0; i < h; ++i)
        if (f.arr(Arrow{a, b, i}) != g.arr(Arrow{a, b, i})) return false;
    }
  return true;
}

// Functor axioms verified pointwise (identities, all composable pairs).
inline void check_functor_laws(const Functor& f,
                               std::uint64_t pair_budget = (1u << 24)) {
  const std::uint32_t n = f.dom->object_count();
  for (std::uint32_t o = 0; o < n; ++o)
    require(f.apply(f.dom->identity(o)) == f.cod->identity(f.apply_obj(o)),
            ErrorKind::MalformedInput,
            "functor " + f.name + " breaks the identity at " +
                f.dom->object_label(o));
  std::uint64_t pairs = 0;
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b) {
      const std::uint32_t hab = f.dom->hom_size(a, b);
      for (std::uint32_t c = 0; c < n; ++c) {
        const std::uint32_t hbc = f.dom->hom_size(b, c);
        pairs += static_cast<std::uint64_t>(hab) * hbc;
        require(pairs <= pair_budget, ErrorKind::OutOfRange,
                "functor law check exceeds pair budget: " + f.name);
        for (std::uint32_t i = 0; i < hab; ++i)
          for (std::uint32_t j = 0; j < hbc; ++j) {
            const Arrow x{a, b, i}, y{b, c, j};
            require(f.apply(f.dom->compose(y, x)) ==
                        f.cod->compose(f.apply(y), f.apply(x)),
                    ErrorKind::MalformedInput,
                    "functor " + f.name + " breaks composition at (" +
                        f.dom->arrow_label(y) + ", " + f.dom->arrow_label(x) + ")");
          }
      }
    }
}

}  // namespace globular
