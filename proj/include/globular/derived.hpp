#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "globular/functor.hpp"
#include "globular/groupoid.hpp"

namespace globular {

// Mapping path object of F: A -> B. Objects are triples (a, b, k) with k
// indexing hom_B(F a, b); the k-th such triple carries beta = {F a, b, k}.
// hom((a,b,k),(a',b',k')) is canonically hom_A(a,a'): the second component
// of an arrow is determined as gamma = beta' . F(alpha) . beta^{-1}.
class MappingPathGroupoid final : public Groupoid {
 public:
  explicit MappingPathGroupoid(Functor f) : f_(std::move(f)) {
    const std::uint64_t na = f_.dom->object_count();
    const std::uint64_t nb = f_.cod->object_count();
    require(na * nb <= (1u << 27), ErrorKind::OutOfRange,
            "mapping path object index would be too large");
    fobj_.reserve(na);
    for (std::uint32_t a = 0; a < na; ++a) fobj_.push_back(f_.apply_obj(a));
    off_.assign(na * nb + 1, 0);
    std::uint64_t acc = 0;
    for (std::uint32_t a = 0; a < na; ++a)
      for (std::uint32_t b = 0; b < nb; ++b) {
        off_[static_cast<std::uint64_t>(a) * nb + b] = acc;
        acc += f_.cod->hom_size(fobj_[a], b);
      }
    off_.back() = acc;
    require(acc <= 0xffffffffu, ErrorKind::OutOfRange,
            "mapping path object count exceeds handle range");
    count_ = static_cast<std::uint32_t>(acc);
  }

  std::uint32_t object_count() const override { return count_; }

  std::uint32_t obj_a(std::uint32_t o) const { return locate(o).first; }
  std::uint32_t obj_b(std::uint32_t o) const { return locate(o).second; }
  // The structure iso beta: F(obj_a) -> obj_b carried by the object.
  Arrow beta(std::uint32_t o) const {
    const auto [a, b] = locate(o);
    return Arrow{fobj_[a], b,
                 static_cast<std::uint32_t>(o - off_at(a, b))};
  }
  std::uint32_t object_of(std::uint32_t a, std::uint32_t b,
                          std::uint32_t k) const {
    f_.dom->check_object(a);
    f_.cod->check_object(b);
    require(k < f_.cod->hom_size(fobj_[a], b), ErrorKind::OutOfRange,
            "no such structure iso in the mapping path object");
    return static_cast<std::uint32_t>(off_at(a, b) + k);
  }

  std::uint32_t hom_size(std::uint32_t src, std::uint32_t tgt) const override {
    check_object(src);
    check_object(tgt);
    return f_.dom->hom_size(obj_a(src), obj_a(tgt));
  }
  std::uint32_t identity_idx(std::uint32_t o) const override {
    check_object(o);
    return f_.dom->identity_idx(obj_a(o));
  }
  Arrow compose(const Arrow& g, const Arrow& f) const override {
    check_composable(g, f);
    const Arrow c = f_.dom->compose(alpha(g), alpha(f));
    return Arrow{f.src, g.tgt, c.idx};
  }
  Arrow inverse(const Arrow& f) const override {
    check_arrow(f);
    return Arrow{f.tgt, f.src, f_.dom->inverse(alpha(f)).idx};
  }
  std::string object_label(std::uint32_t o) const override {
    check_object(o);
    return "(" + f_.dom->object_label(obj_a(o)) + "|" +
           f_.cod->object_label(obj_b(o)) + "@" +
           std::to_string(beta(o).idx) + ")";
  }
  std::uint64_t arrow_count() const override {
    const std::uint32_t na = f_.dom->object_count();
    std::vector<std::uint64_t> fib(na, 0);
    for (std::uint32_t a = 0; a < na; ++a)
      fib[a] = off_at(a + 1, 0) - off_at(a, 0);
    std::uint64_t total = 0;
    for (std::uint32_t a = 0; a < na; ++a)
      for (std::uint32_t a2 = 0; a2 < na; ++a2)
        total += fib[a] * fib[a2] * f_.dom->hom_size(a, a2);
    return total;
  }

  // First component of an arrow, as an arrow of dom(F).
  Arrow alpha(const Arrow& m) const {
    return Arrow{obj_a(m.src), obj_a(m.tgt), m.idx};
  }
  // Determined second component, as an arrow of cod(F).
  Arrow gamma(const Arrow& m) const {
    check_arrow(m);
    const Arrow fa = f_.arr(alpha(m));
    return f_.cod->compose(beta(m.tgt),
                           f_.cod->compose(fa, f_.cod->inverse(beta(m.src))));
  }

  const Functor& base() const { return f_; }

 private:
  std::uint64_t off_at(std::uint64_t a, std::uint64_t b) const {
    return off_[a * f_.cod->object_count() + b];
  }
  std::pair<std::uint32_t, std::uint32_t> locate(std::uint32_t o) const {
    check_object(o);
    std::uint64_t lo = 0, hi = off_.size() - 1;
    while (lo + 1 < hi) {
      const std::uint64_t mid = (lo + hi) / 2;
      (off_[mid] <= o ? lo : hi) = mid;
    }
    const std::uint64_t nb = f_.cod->object_count();
    return {static_cast<std::uint32_t>(lo / nb),
            static_cast<std::uint32_t>(lo % nb)};
  }

  Functor f_;
  std::vector<std::uint32_t> fobj_;
  std::vector<std::uint64_t> off_;
  std::uint32_t count_ = 0;
};

using MappingPathPtr = std::shared_ptr<const MappingPathGroupoid>;

inline MappingPathPtr make_mapping_path(Functor f) {
  return std::make_shared<const MappingPathGroupoid>(std::move(f));
}

// Section A -> M(F): a |-> (a, F a, id). Injective on objects, fully
// faithful (index-preserving on homs), essentially surjective with the
// canonical witness (a, beta): l(a) -> (a, b, beta) over alpha = id.
inline Functor mp_section(MappingPathPtr m, std::string name = "mp_l") {
  const Functor& f = m->base();
  auto a_side = f.dom;
  auto fobj = f.obj;
  auto cod = f.cod;
  Functor l;
  l.dom = a_side;
  l.cod = m;
  l.obj = [m, fobj, cod](std::uint32_t a) {
    return m->object_of(a, fobj(a), cod->identity_idx(fobj(a)));
  };
  auto lobj = l.obj;
  l.arr = [lobj](const Arrow& al) {
    return Arrow{lobj(al.src), lobj(al.tgt), al.idx};
  };
  l.iso_witness = [m, lobj, a_side](std::uint32_t o) {
    const std::uint32_t a = m->obj_a(o);
    return std::pair<std::uint32_t, Arrow>{
        a, Arrow{lobj(a), o, a_side->identity_idx(a)}};
  };
  l.name = std::move(name);
  return l;
}

// Projection M(F) -> B: (a, b, k) |-> b on objects, gamma on arrows. An
// isofibration: g: b -> b' lifts at (a, b, beta) to the arrow over id_a
// landing at (a, b', g . beta).
inline Functor mp_projection(MappingPathPtr m, std::string name = "mp_r") {
  const Functor& f = m->base();
  auto b_side = f.cod;
  auto a_side = f.dom;
  Functor r;
  r.dom = m;
  r.cod = b_side;
  r.obj = [m](std::uint32_t o) { return m->obj_b(o); };
  r.arr = [m](const Arrow& ar) { return m->gamma(ar); };
  r.iso_lift = [m, b_side, a_side](std::uint32_t d, const Arrow& g) {
    const Arrow nb = b_side->compose(g, m->beta(d));
    const std::uint32_t d2 = m->object_of(m->obj_a(d), g.tgt, nb.idx);
    return Arrow{d, d2, a_side->identity_idx(m->obj_a(d))};
  };
  r.name = std::move(name);
  return r;
}

// Strict pullback of F: A -> C against G: B -> C. Objects are the pairs
// (a, b) with F a = G b in lexicographic order; hom((a,b),(a',b')) is the
// filtered candidate list (i, j) with F(i-th) = G(j-th), again lexicographic.
class PullbackGroupoid final : public Groupoid {
 public:
  PullbackGroupoid(Functor f, Functor g)
      : f_(memoize_functor(f)), g_(memoize_functor(g)) {
    require(f_.cod->serial() == g_.cod->serial(), ErrorKind::NotComposable,
            "pullback legs must share a codomain: " + f_.name + ", " + g_.name);
    const std::uint32_t na = f_.dom->object_count();
    const std::uint32_t nb = g_.dom->object_count();
    require(static_cast<std::uint64_t>(na) * nb <= (1u << 28),
            ErrorKind::OutOfRange, "pullback object scan would be too large");
    fo_.reserve(na);
    for (std::uint32_t a = 0; a < na; ++a) fo_.push_back(f_.apply_obj(a));
    go_.reserve(nb);
    for (std::uint32_t b = 0; b < nb; ++b) go_.push_back(g_.apply_obj(b));
    for (std::uint32_t a = 0; a < na; ++a)
      for (std::uint32_t b = 0; b < nb; ++b)
        if (fo_[a] == go_[b]) objs_.emplace_back(a, b);
    require(objs_.size() <= 0xffffffffu, ErrorKind::OutOfRange,
            "pullback object count exceeds handle range");
  }

  std::uint32_t object_count() const override {
    return static_cast<std::uint32_t>(objs_.size());
  }
  std::uint32_t obj_a(std::uint32_t o) const {
    check_object(o);
    return objs_[o].first;
  }
  std::uint32_t obj_b(std::uint32_t o) const {
    check_object(o);
    return objs_[o].second;
  }
  std::uint32_t object_of(std::uint32_t a, std::uint32_t b) const {
    const auto it = std::lower_bound(objs_.begin(), objs_.end(),
                                     std::make_pair(a, b));
    if (it == objs_.end() || *it != std::make_pair(a, b))
      fail(ErrorKind::BoundaryMismatch,
           "pair is not an object of the pullback: (" +
               f_.dom->object_label(a) + ", " + g_.dom->object_label(b) + ")");
    return static_cast<std::uint32_t>(it - objs_.begin());
  }

  std::uint32_t hom_size(std::uint32_t src, std::uint32_t tgt) const override {
    check_object(src);
    check_object(tgt);
    const std::uint64_t n = objs_.size();
    if (n <= 4096) {
      if (hom_cache_.empty()) hom_cache_.assign(n * n, 0xffffffffu);
      std::uint32_t& slot = hom_cache_[src * n + tgt];
      if (slot == 0xffffffffu) slot = count_hom(src, tgt);
      return slot;
    }
    return count_hom(src, tgt);
  }
  std::uint64_t arrow_count() const override {
    if (!arrows_) {
      std::uint64_t total = 0;
      const std::uint32_t n = object_count();
      for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t b = 0; b < n; ++b) total += hom_size(a, b);
      arrows_ = total;
    }
    return *arrows_;
  }
  std::uint32_t identity_idx(std::uint32_t o) const override {
    check_object(o);
    return locate(o, o, f_.dom->identity(objs_[o].first),
                  g_.dom->identity(objs_[o].second));
  }
  Arrow compose(const Arrow& g, const Arrow& f) const override {
    check_composable(g, f);
    const auto [ga, gb] = components(g);
    const auto [fa, fb] = components(f);
    return Arrow{f.src, g.tgt,
                 locate(f.src, g.tgt, f_.dom->compose(ga, fa),
                        g_.dom->compose(gb, fb))};
  }
  Arrow inverse(const Arrow& f) const override {
    check_arrow(f);
    const auto [fa, fb] = components(f);
    return Arrow{f.tgt, f.src,
                 locate(f.tgt, f.src, f_.dom->inverse(fa), g_.dom->inverse(fb))};
  }
  std::string object_label(std::uint32_t o) const override {
    check_object(o);
    return "(" + f_.dom->object_label(objs_[o].first) + "," +
           g_.dom->object_label(objs_[o].second) + ")";
  }

  std::pair<Arrow, Arrow> components(const Arrow& p) const {
    check_arrow(p);
    std::pair<Arrow, Arrow> out;
    std::uint32_t n = 0;
    const bool found = !scan_hom(p.src, p.tgt, [&](const Arrow& x, const Arrow& y) {
      if (n++ == p.idx) {
        out = {x, y};
        return false;
      }
      return true;
    });
    require(found, ErrorKind::OutOfRange, "pullback arrow decode failure");
    return out;
  }
  Arrow arrow_of(const Arrow& pa, const Arrow& pb) const {
    const std::uint32_t s = object_of(pa.src, pb.src);
    const std::uint32_t t = object_of(pa.tgt, pb.tgt);
    return Arrow{s, t, locate(s, t, pa, pb)};
  }

  const Functor& left_leg() const { return f_; }
  const Functor& right_leg() const { return g_; }

 private:
  // Visit filtered hom candidates in canonical order; the visitor returns
  // false to stop. Returns true if the scan ran to completion.
  template <typename V>
  bool scan_hom(std::uint32_t src, std::uint32_t tgt, V&& visit) const {
    const auto [a, b] = objs_[src];
    const auto [a2, b2] = objs_[tgt];
    const std::uint32_t ha = f_.dom->hom_size(a, a2);
    const std::uint32_t hb = g_.dom->hom_size(b, b2);
    for (std::uint32_t i = 0; i < ha; ++i) {
      const Arrow x{a, a2, i};
      const Arrow fx = f_.arr(x);
      for (std::uint32_t j = 0; j < hb; ++j) {
        const Arrow y{b, b2, j};
        if (fx == g_.arr(y)) {
          if (!visit(x, y)) return false;
        }
      }
    }
    return true;
  }
  std::uint32_t count_hom(std::uint32_t src, std::uint32_t tgt) const {
    std::uint32_t n = 0;
    scan_hom(src, tgt, [&](const Arrow&, const Arrow&) { ++n; return true; });
    return n;
  }
  std::uint32_t locate(std::uint32_t src, std::uint32_t tgt, const Arrow& pa,
                       const Arrow& pb) const {
    std::uint32_t n = 0;
    std::uint32_t found = 0xffffffffu;
    scan_hom(src, tgt, [&](const Arrow& x, const Arrow& y) {
      if (x == pa && y == pb) {
        found = n;
        return false;
      }
      ++n;
      return true;
    });
    require(found != 0xffffffffu, ErrorKind::BoundaryMismatch,
            "arrow pair is not in the pullback: components disagree under the legs");
    return found;
  }

  Functor f_, g_;
  std::vector<std::uint32_t> fo_, go_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> objs_;
  mutable std::vector<std::uint32_t> hom_cache_;
  mutable std::optional<std::uint64_t> arrows_;
};

using PullbackPtr = std::shared_ptr<const PullbackGroupoid>;

inline PullbackPtr make_pullback(Functor f, Functor g) {
  return std::make_shared<const PullbackGroupoid>(std::move(f), std::move(g));
}

// First projection P -> dom(F); the pullback of G along F. Inherits an
// isofibration lift whenever G carries one.
inline Functor pb_proj1(PullbackPtr p, std::string name = "pb_p") {
  Functor pr;
  pr.dom = p;
  pr.cod = p->left_leg().dom;
  pr.obj = [p](std::uint32_t o) { return p->obj_a(o); };
  pr.arr = [p](const Arrow& a) { return p->components(a).first; };
  if (p->right_leg().iso_lift) {
    const auto glift = p->right_leg().iso_lift;
    const auto farr = p->left_leg().arr;
    pr.iso_lift = [p, glift, farr](std::uint32_t d, const Arrow& phi) {
      const Arrow psi = glift(p->obj_b(d), farr(phi));
      return p->arrow_of(phi, psi);
    };
  }
  pr.name = std::move(name);
  return pr;
}

// Second projection P -> dom(G); the pullback of F along G.
inline Functor pb_proj2(PullbackPtr p, std::string name = "pb_q") {
  Functor pr;
  pr.dom = p;
  pr.cod = p->right_leg().dom;
  pr.obj = [p](std::uint32_t o) { return p->obj_b(o); };
  pr.arr = [p](const Arrow& a) { return p->components(a).second; };
  if (p->left_leg().iso_lift) {
    const auto flift = p->left_leg().iso_lift;
    const auto garr = p->right_leg().arr;
    pr.iso_lift = [p, flift, garr](std::uint32_t d, const Arrow& psi) {
      const Arrow phi = flift(p->obj_a(d), garr(psi));
      return p->arrow_of(phi, psi);
    };
  }
  pr.name = std::move(name);
  return pr;
}

// Mediating map into a pullback: objects are paired eagerly (checking the
// cone equation objectwise), arrows are paired on demand with the pullback's
// own membership check standing in as the per-use cone verification.
inline Functor pb_mediate(PullbackPtr p, const Functor& u, const Functor& v,
                          std::string name = "pb_mediate") {
  require(u.dom->serial() == v.dom->serial(), ErrorKind::NotComposable,
          "mediating legs must share a domain");
  require(u.cod->serial() == p->left_leg().dom->serial() &&
              v.cod->serial() == p->right_leg().dom->serial(),
          ErrorKind::NotComposable, "mediating legs do not match the pullback");
  const std::uint32_t n = u.dom->object_count();
  for (std::uint32_t o = 0; o < n; ++o)
    if (p->left_leg().obj(u.obj(o)) != p->right_leg().obj(v.obj(o)))
      fail(ErrorKind::BoundaryMismatch,
           "cone does not commute over object " + u.dom->object_label(o));
  // Small domains get the arrow-level cone check up front, so an invalid
  // cone fails here instead of when the mediator is first applied.
  if (u.dom->arrow_count() <= (1u << 20)) {
    for (std::uint32_t a = 0; a < n; ++a)
      for (std::uint32_t b = 0; b < n; ++b)
        for (std::uint32_t i = 0; i < u.dom->hom_size(a, b); ++i) {
          const Arrow x{a, b, i};
          if (!(p->left_leg().apply(u.apply(x)) ==
                p->right_leg().apply(v.apply(x))))
            fail(ErrorKind::BoundaryMismatch,
                 "cone does not commute over arrow " + u.dom->arrow_label(x));
        }
  }
  Functor m;
  m.dom = u.dom;
  m.cod = p;
  auto uobj = u.obj, vobj = v.obj;
  auto uarr = u.arr, varr = v.arr;
  m.obj = [p, uobj, vobj](std::uint32_t o) {
    return p->object_of(uobj(o), vobj(o));
  };
  m.arr = [p, uarr, varr](const Arrow& a) {
    return p->arrow_of(uarr(a), varr(a));
  };
  m.name = std::move(name);
  return m;
}

}  // namespace globular
