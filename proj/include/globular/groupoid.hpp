#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "globular/error.hpp"

namespace globular {

// Arrow handle: idx selects within hom(src, tgt) in the owning groupoid's
// canonical hom order. Handles are only meaningful together with the
// groupoid instance that issued them.
struct Arrow {
  std::uint32_t src = 0;
  std::uint32_t tgt = 0;
  std::uint32_t idx = 0;

  friend bool operator==(const Arrow&, const Arrow&) = default;
  friend auto operator<=>(const Arrow&, const Arrow&) = default;
};

inline std::uint64_t next_groupoid_serial() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}

// A finite groupoid presented through canonical arrow handles. Composition
// uses the algebraic order: compose(g, f) = g after f, defined when
// tgt(f) == src(g). Implementations are immutable after construction.
class Groupoid {
 public:
  Groupoid() : serial_(next_groupoid_serial()) {}
  virtual ~Groupoid() = default;
  Groupoid(const Groupoid&) = delete;
  Groupoid& operator=(const Groupoid&) = delete;

  virtual std::uint32_t object_count() const = 0;
  virtual std::uint32_t hom_size(std::uint32_t src, std::uint32_t tgt) const = 0;
  virtual std::uint32_t identity_idx(std::uint32_t o) const = 0;
  virtual Arrow compose(const Arrow& g, const Arrow& f) const = 0;
  virtual Arrow inverse(const Arrow& f) const = 0;
  virtual std::string object_label(std::uint32_t o) const = 0;

  virtual std::string arrow_label(const Arrow& f) const {
    check_arrow(f);
    return "[" + object_label(f.src) + ">" + object_label(f.tgt) + "#" +
           std::to_string(f.idx) + "]";
  }

  // Total number of arrows; the default sums hom sizes over all object pairs.
  virtual std::uint64_t arrow_count() const {
    std::uint64_t total = 0;
    const std::uint32_t n = object_count();
    for (std::uint32_t a = 0; a < n; ++a)
      for (std::uint32_t b = 0; b < n; ++b) total += hom_size(a, b);
    return total;
  }

  Arrow identity(std::uint32_t o) const {
    check_object(o);
    return Arrow{o, o, identity_idx(o)};
  }

  std::uint64_t serial() const { return serial_; }

  void check_object(std::uint32_t o) const {
    if (o < object_count()) return;
    require(false, ErrorKind::OutOfRange,
            "object index " + std::to_string(o) + " out of range (have " +
                std::to_string(object_count()) + ")");
  }

  void check_arrow(const Arrow& f) const {
    check_object(f.src);
    check_object(f.tgt);
    if (f.idx < hom_size(f.src, f.tgt)) return;
    require(false, ErrorKind::OutOfRange,
            "arrow index " + std::to_string(f.idx) + " out of range in hom(" +
                object_label(f.src) + ", " + object_label(f.tgt) + ")");
  }

  void check_composable(const Arrow& g, const Arrow& f) const {
    check_arrow(g);
    check_arrow(f);
    if (f.tgt == g.src) return;
    require(false, ErrorKind::NotComposable,
            "arrows not composable: tgt " + object_label(f.tgt) +
                " != src " + object_label(g.src));
  }

 private:
  std::uint64_t serial_;
};

using GroupoidPtr = std::shared_ptr<const Groupoid>;

// Explicit presentation of a small groupoid: every arrow listed, composition
// tabulated. compose entries are triples (left, right, result) meaning
// result = left∘right with the right factor applied first.
struct DenseData {
  struct ArrowSpec {
    std::string name;
    std::uint32_t src = 0;
    std::uint32_t tgt = 0;
  };
  std::vector<std::string> objects;
  std::vector<ArrowSpec> arrows;
  std::vector<std::array<std::uint32_t, 3>> compose;  // left, right, result
  std::vector<std::uint32_t> identities;              // per object, arrow id
};

class DenseGroupoid final : public Groupoid {
 public:
  static constexpr std::uint32_t kNone = 0xffffffffu;

  // Validates the full set of groupoid axioms; throws Error(MalformedInput)
  // naming the offending entry otherwise.
  explicit DenseGroupoid(DenseData data) : d_(std::move(data)) {
    const std::uint32_t nobj = static_cast<std::uint32_t>(d_.objects.size());
    const std::uint32_t narr = static_cast<std::uint32_t>(d_.arrows.size());
    require(nobj > 0 || narr == 0, ErrorKind::MalformedInput,
            "arrows listed without objects");
    for (std::size_t i = 0; i < d_.objects.size(); ++i)
      for (std::size_t j = i + 1; j < d_.objects.size(); ++j)
        require(d_.objects[i] != d_.objects[j], ErrorKind::MalformedInput,
                "duplicate object name '" + d_.objects[i] + "'");
    for (std::size_t i = 0; i < d_.arrows.size(); ++i) {
      const auto& a = d_.arrows[i];
      require(a.src < nobj && a.tgt < nobj, ErrorKind::MalformedInput,
              "arrow '" + a.name + "' has an endpoint out of range");
      for (std::size_t j = i + 1; j < d_.arrows.size(); ++j)
        require(a.name != d_.arrows[j].name, ErrorKind::MalformedInput,
                "duplicate arrow name '" + a.name + "'");
    }

    hom_.assign(static_cast<std::size_t>(nobj) * nobj, {});
    for (std::uint32_t id = 0; id < narr; ++id)
      hom_[d_.arrows[id].src * nobj + d_.arrows[id].tgt].push_back(id);
    idx_of_.assign(narr, 0);
    for (const auto& h : hom_)
      for (std::size_t k = 0; k < h.size(); ++k)
        idx_of_[h[k]] = static_cast<std::uint32_t>(k);

    comp_.assign(static_cast<std::size_t>(narr) * narr, kNone);
    for (const auto& e : d_.compose) {
      require(e[0] < narr && e[1] < narr && e[2] < narr,
              ErrorKind::MalformedInput, "compose entry references an unknown arrow");
      const auto &l = d_.arrows[e[0]], &r = d_.arrows[e[1]], &res = d_.arrows[e[2]];
      require(r.tgt == l.src, ErrorKind::MalformedInput,
              "compose entry (" + l.name + ", " + r.name + "): factors not composable");
      require(res.src == r.src && res.tgt == l.tgt, ErrorKind::MalformedInput,
              "compose entry (" + l.name + ", " + r.name + "): result '" +
                  res.name + "' has wrong endpoints");
      auto& cell = comp_[static_cast<std::size_t>(e[0]) * narr + e[1]];
      require(cell == kNone || cell == e[2], ErrorKind::MalformedInput,
              "conflicting compose entries for (" + l.name + ", " + r.name + ")");
      cell = e[2];
    }
    for (std::uint32_t l = 0; l < narr; ++l)
      for (std::uint32_t r = 0; r < narr; ++r)
        if (d_.arrows[r].tgt == d_.arrows[l].src)
          require(comp_[static_cast<std::size_t>(l) * narr + r] != kNone,
                  ErrorKind::MalformedInput,
                  "missing compose entry for (" + d_.arrows[l].name + ", " +
                      d_.arrows[r].name + ")");

    require(d_.identities.size() == nobj, ErrorKind::MalformedInput,
            "identities must list exactly one arrow per object");
    for (std::uint32_t o = 0; o < nobj; ++o) {
      const std::uint32_t e = d_.identities[o];
      require(e < narr, ErrorKind::MalformedInput,
              "identity of object '" + d_.objects[o] + "' is not an arrow");
      require(d_.arrows[e].src == o && d_.arrows[e].tgt == o,
              ErrorKind::MalformedInput,
              "identity of object '" + d_.objects[o] + "' is not an endomorphism");
      for (std::uint32_t f = 0; f < narr; ++f) {
        if (d_.arrows[f].src == o)
          require(comp_id(f, e) == f, ErrorKind::MalformedInput,
                  "right identity law fails at arrow '" + d_.arrows[f].name + "'");
        if (d_.arrows[f].tgt == o)
          require(comp_id(e, f) == f, ErrorKind::MalformedInput,
                  "left identity law fails at arrow '" + d_.arrows[f].name + "'");
      }
    }

    for (std::uint32_t g = 0; g < narr; ++g)
      for (std::uint32_t f = 0; f < narr; ++f) {
        if (d_.arrows[f].tgt != d_.arrows[g].src) continue;
        const std::uint32_t gf = comp_id(g, f);
        for (std::uint32_t h = 0; h < narr; ++h) {
          if (d_.arrows[h].tgt != d_.arrows[f].src) continue;
          require(comp_id(gf, h) == comp_id(g, comp_id(f, h)),
                  ErrorKind::MalformedInput,
                  "associativity fails at (" + d_.arrows[g].name + ", " +
                      d_.arrows[f].name + ", " + d_.arrows[h].name + ")");
        }
      }

    inv_.assign(narr, kNone);
    for (std::uint32_t f = 0; f < narr; ++f) {
      const auto& a = d_.arrows[f];
      for (std::uint32_t g : hom_[a.tgt * nobj + a.src]) {
        if (comp_id(g, f) == d_.identities[a.src] &&
            comp_id(f, g) == d_.identities[a.tgt]) {
          inv_[f] = g;
          break;
        }
      }
      require(inv_[f] != kNone, ErrorKind::MalformedInput,
              "arrow '" + a.name + "' has no two-sided inverse");
    }
  }

  std::uint32_t object_count() const override {
    return static_cast<std::uint32_t>(d_.objects.size());
  }
  std::uint32_t hom_size(std::uint32_t src, std::uint32_t tgt) const override {
    check_object(src);
    check_object(tgt);
    return static_cast<std::uint32_t>(hom_at(src, tgt).size());
  }
  std::uint32_t identity_idx(std::uint32_t o) const override {
    check_object(o);
    return idx_of_[d_.identities[o]];
  }
  Arrow compose(const Arrow& g, const Arrow& f) const override {
    check_composable(g, f);
    const std::uint32_t id =
        comp_id(arrow_id(g), arrow_id(f));
    return Arrow{f.src, g.tgt, idx_of_[id]};
  }
  Arrow inverse(const Arrow& f) const override {
    check_arrow(f);
    return Arrow{f.tgt, f.src, idx_of_[inv_[arrow_id(f)]]};
  }
  std::string object_label(std::uint32_t o) const override {
    check_object(o);
    return d_.objects[o];
  }
  std::string arrow_label(const Arrow& f) const override {
    check_arrow(f);
    return d_.arrows[arrow_id(f)].name;
  }
  std::uint64_t arrow_count() const override { return d_.arrows.size(); }

  std::uint32_t arrow_id(const Arrow& f) const {
    check_arrow(f);
    return hom_at(f.src, f.tgt)[f.idx];
  }
  Arrow arrow_from_id(std::uint32_t id) const {
    require(id < d_.arrows.size(), ErrorKind::OutOfRange, "arrow id out of range");
    return Arrow{d_.arrows[id].src, d_.arrows[id].tgt, idx_of_[id]};
  }
  const DenseData& data() const { return d_; }

 private:
  const std::vector<std::uint32_t>& hom_at(std::uint32_t s, std::uint32_t t) const {
    return hom_[static_cast<std::size_t>(s) * d_.objects.size() + t];
  }
  std::uint32_t comp_id(std::uint32_t l, std::uint32_t r) const {
    return comp_[static_cast<std::size_t>(l) * d_.arrows.size() + r];
  }

  DenseData d_;
  std::vector<std::vector<std::uint32_t>> hom_;
  std::vector<std::uint32_t> idx_of_;
  std::vector<std::uint32_t> comp_;
  std::vector<std::uint32_t> inv_;
};

using DensePtr = std::shared_ptr<const DenseGroupoid>;

// Chart presentation: disjoint components, each a connected groupoid with
// every vertex group cyclic of the given order. hom(x, y) within a component
// has exactly group_order arrows, labeled by exponents; composition adds
// exponents. This is the generator used for samples and fixtures.
struct ChartComponent {
  std::uint32_t objects = 1;
  std::uint32_t group_order = 1;
};

inline DensePtr make_chart_groupoid(const std::vector<ChartComponent>& comps,
                                    const std::string& prefix = "c") {
  DenseData d;
  std::vector<std::uint32_t> first_obj;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    require(comps[c].objects > 0 && comps[c].group_order > 0,
            ErrorKind::MalformedInput, "chart component must be nonempty");
    first_obj.push_back(static_cast<std::uint32_t>(d.objects.size()));
    for (std::uint32_t o = 0; o < comps[c].objects; ++o)
      d.objects.push_back(prefix + std::to_string(c) + "o" + std::to_string(o));
  }
  struct Key {
    std::uint32_t src, tgt, exp;
  };
  std::vector<Key> keys;
  auto arrow_at = [&](std::uint32_t src, std::uint32_t tgt,
                      std::uint32_t exp) -> std::uint32_t {
    for (std::uint32_t i = 0; i < keys.size(); ++i)
      if (keys[i].src == src && keys[i].tgt == tgt && keys[i].exp == exp) return i;
    fail(ErrorKind::OutOfRange, "internal chart arrow lookup failure");
  };
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (std::uint32_t x = 0; x < comps[c].objects; ++x)
      for (std::uint32_t y = 0; y < comps[c].objects; ++y)
        for (std::uint32_t e = 0; e < comps[c].group_order; ++e) {
          const std::uint32_t src = first_obj[c] + x, tgt = first_obj[c] + y;
          keys.push_back({src, tgt, e});
          d.arrows.push_back({prefix + std::to_string(c) + ":" + std::to_string(x) +
                                  ">" + std::to_string(y) + ":g" + std::to_string(e),
                              src, tgt});
        }
  d.identities.assign(d.objects.size(), 0);
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (std::uint32_t x = 0; x < comps[c].objects; ++x)
      d.identities[first_obj[c] + x] =
          arrow_at(first_obj[c] + x, first_obj[c] + x, 0);
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const std::uint32_t m = comps[c].group_order;
    for (std::uint32_t x = 0; x < comps[c].objects; ++x)
      for (std::uint32_t y = 0; y < comps[c].objects; ++y)
        for (std::uint32_t z = 0; z < comps[c].objects; ++z)
          for (std::uint32_t e1 = 0; e1 < m; ++e1)
            for (std::uint32_t e2 = 0; e2 < m; ++e2)
              d.compose.push_back({arrow_at(first_obj[c] + y, first_obj[c] + z, e2),
                                   arrow_at(first_obj[c] + x, first_obj[c] + y, e1),
                                   arrow_at(first_obj[c] + x, first_obj[c] + z,
                                            (e1 + e2) % m)});
  }
  return std::make_shared<const DenseGroupoid>(std::move(d));
}

}  // namespace globular
