#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "globular/error.hpp"
#include "globular/itc.hpp"

namespace globular {

// Finite sets as the degenerate identity type category: L = bijections,
// R = all maps, factorize(f) = (identity, f). Objects are skeletal, so a set
// is just its size and equality is size equality.
struct FinSet {
  std::uint32_t size = 0;
  friend bool operator==(const FinSet&, const FinSet&) = default;
};

struct FinMap {
  std::uint32_t dom_size = 0;
  std::uint32_t cod_size = 0;
  std::vector<std::uint32_t> table;

  friend bool operator==(const FinMap&, const FinMap&) = default;
};

inline void validate_map(const FinMap& f) {
  require(f.table.size() == f.dom_size, ErrorKind::MalformedInput,
          "map table length disagrees with its domain size");
  for (std::size_t i = 0; i < f.table.size(); ++i)
    require(f.table[i] < f.cod_size, ErrorKind::MalformedInput,
            "map value out of range at position " + std::to_string(i));
}

class DiscreteBackend {
 public:
  using Obj = FinSet;
  using Mor = FinMap;
  struct Factorization {
    Obj mid;
    Mor left, right;
  };
  struct PullbackSquare {
    Obj apex;
    Mor p, q;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  };

  Obj terminal() const { return FinSet{1}; }

  Mor to_terminal(const Obj& x) const {
    return FinMap{x.size, 1, std::vector<std::uint32_t>(x.size, 0)};
  }

  Mor identity(const Obj& x) const {
    FinMap f{x.size, x.size, std::vector<std::uint32_t>(x.size)};
    for (std::uint32_t i = 0; i < x.size; ++i) f.table[i] = i;
    return f;
  }

  Mor compose(const Mor& g, const Mor& f) const {
    validate_map(f);
    validate_map(g);
    require(f.cod_size == g.dom_size, ErrorKind::NotComposable,
            "maps not composable: codomain size " + std::to_string(f.cod_size) +
                " != domain size " + std::to_string(g.dom_size));
    FinMap out{f.dom_size, g.cod_size, std::vector<std::uint32_t>(f.dom_size)};
    for (std::uint32_t i = 0; i < f.dom_size; ++i)
      out.table[i] = g.table[f.table[i]];
    return out;
  }

  Obj dom(const Mor& f) const { return FinSet{f.dom_size}; }
  Obj cod(const Mor& f) const { return FinSet{f.cod_size}; }
  bool obj_equal(const Obj& a, const Obj& b) const { return a == b; }
  bool mor_equal(const Mor& f, const Mor& g) const { return f == g; }

  bool is_L(const Mor& f) const {
    validate_map(f);
    if (f.dom_size != f.cod_size) return false;
    std::vector<std::uint8_t> hit(f.cod_size, 0);
    for (const std::uint32_t v : f.table) {
      if (hit[v]) return false;
      hit[v] = 1;
    }
    return true;
  }

  bool is_R(const Mor& f) const {
    validate_map(f);
    return true;
  }

  bool jointly_monic(const Mor& p, const Mor& q) const {
    require(p.dom_size == q.dom_size, ErrorKind::NotComposable,
            "joint monicity needs a shared domain");
    std::vector<std::pair<std::uint32_t, std::uint32_t>> seen;
    seen.reserve(p.dom_size);
    for (std::uint32_t i = 0; i < p.dom_size; ++i)
      seen.emplace_back(p.table[i], q.table[i]);
    std::sort(seen.begin(), seen.end());
    return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
  }

  Factorization factorize(const Mor& f) const {
    validate_map(f);
    return Factorization{FinSet{f.dom_size}, identity(FinSet{f.dom_size}), f};
  }

  PullbackSquare pullback(const Mor& f, const Mor& r) const {
    validate_map(f);
    validate_map(r);
    require(f.cod_size == r.cod_size, ErrorKind::NotComposable,
            "pullback legs must share a codomain");
    PullbackSquare out;
    for (std::uint32_t a = 0; a < f.dom_size; ++a)
      for (std::uint32_t b = 0; b < r.dom_size; ++b)
        if (f.table[a] == r.table[b]) out.pairs.emplace_back(a, b);
    const auto n = static_cast<std::uint32_t>(out.pairs.size());
    out.apex = FinSet{n};
    out.p = FinMap{n, f.dom_size, {}};
    out.q = FinMap{n, r.dom_size, {}};
    for (const auto& [a, b] : out.pairs) {
      out.p.table.push_back(a);
      out.q.table.push_back(b);
    }
    return out;
  }

  Mor mediate(const PullbackSquare& pb, const Mor& u, const Mor& v) const {
    validate_map(u);
    validate_map(v);
    require(u.dom_size == v.dom_size, ErrorKind::NotComposable,
            "mediating legs must share a domain");
    require(u.cod_size == pb.p.cod_size && v.cod_size == pb.q.cod_size,
            ErrorKind::NotComposable, "mediating legs do not match the pullback");
    FinMap out{u.dom_size, pb.apex.size, {}};
    for (std::uint32_t x = 0; x < u.dom_size; ++x) {
      const auto key = std::make_pair(u.table[x], v.table[x]);
      const auto it = std::lower_bound(pb.pairs.begin(), pb.pairs.end(), key);
      require(it != pb.pairs.end() && *it == key, ErrorKind::BoundaryMismatch,
              "cone does not commute at element " + std::to_string(x));
      out.table.push_back(static_cast<std::uint32_t>(it - pb.pairs.begin()));
    }
    return out;
  }

  Mor lift(const Mor& l, const Mor& r, const Mor& top, const Mor& bottom) const {
    require(is_L(l), ErrorKind::NotLMap, "left leg is not a bijection");
    require(is_R(r), ErrorKind::NotAnRMap, "right leg rejected");
    require(top.dom_size == l.dom_size && top.cod_size == r.dom_size &&
                bottom.dom_size == l.cod_size && bottom.cod_size == r.cod_size,
            ErrorKind::NotComposable, "lifting square sides do not align");
    require(mor_equal(compose(r, top), compose(bottom, l)),
            ErrorKind::SquareDoesNotCommute, "lifting square does not commute");
    std::vector<std::uint32_t> linv(l.cod_size, 0);
    for (std::uint32_t a = 0; a < l.dom_size; ++a) linv[l.table[a]] = a;
    FinMap d{l.cod_size, r.dom_size, std::vector<std::uint32_t>(l.cod_size)};
    for (std::uint32_t b = 0; b < l.cod_size; ++b)
      d.table[b] = top.table[linv[b]];
    require(mor_equal(compose(d, l), top), ErrorKind::BackendLawFailure,
            "lift fails d∘l = top");
    require(mor_equal(compose(r, d), bottom), ErrorKind::BackendLawFailure,
            "lift fails r∘d = bottom");
    return d;
  }

  std::string describe(const Mor& f) const {
    std::string s = "[" + std::to_string(f.dom_size) + "->" +
                    std::to_string(f.cod_size) + ":";
    for (std::size_t i = 0; i < f.table.size(); ++i)
      s += (i ? "," : "") + std::to_string(f.table[i]);
    return s + "]";
  }
};

static_assert(IdentityTypeCategory<DiscreteBackend>);

}  // namespace globular
