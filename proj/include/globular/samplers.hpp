#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "globular/discrete.hpp"
#include "globular/functor.hpp"
#include "globular/groupoid.hpp"
#include "globular/grpd_backend.hpp"
#include "globular/itc.hpp"

namespace globular {

// Structured description of a chart groupoid, kept alongside the built
// instance so functors between charts can be generated in parameterized form
// (guaranteeing functoriality by construction instead of by search).
struct Chart {
  std::vector<ChartComponent> components;
  std::vector<std::uint32_t> first_obj;
  DensePtr groupoid;
};

inline Chart build_chart(std::vector<ChartComponent> comps,
                         const std::string& prefix = "c") {
  Chart chart;
  chart.components = std::move(comps);
  std::uint32_t acc = 0;
  for (const auto& c : chart.components) {
    chart.first_obj.push_back(acc);
    acc += c.objects;
  }
  chart.groupoid = make_chart_groupoid(chart.components, prefix);
  return chart;
}

// A functor between charts in closed form. Per domain component: a target
// component, an object map, an exponent multiplier k with k*m = 0 mod m'
// (a group hom Z/m -> Z/m'), and per-object twists c. Arrows map by
//   (x -> y, e) |-> (o(x) -> o(y), k*e + c_y - c_x  mod m').
struct ChartFunctorSpec {
  struct Component {
    std::uint32_t target = 0;
    std::uint32_t multiplier = 0;
    std::vector<std::uint32_t> object_map;
    std::vector<std::uint32_t> twist;
  };
  std::vector<Component> components;
};

inline Functor make_chart_functor(const Chart& dom, const Chart& cod,
                                  const ChartFunctorSpec& spec,
                                  std::string name = "chart_map") {
  require(spec.components.size() == dom.components.size(),
          ErrorKind::MalformedInput, "chart functor spec component mismatch");
  struct Packed {
    std::vector<std::uint32_t> obj;        // global object map
    std::vector<std::uint32_t> comp_of;    // dom object -> dom component
    std::vector<std::uint32_t> local_of;   // dom object -> local index
    std::vector<std::uint32_t> mult;       // per dom component
    std::vector<std::uint32_t> mod;        // per dom component: target order
    std::vector<std::uint32_t> twist;      // per dom object
  };
  auto pk = std::make_shared<Packed>();
  for (std::size_t ci = 0; ci < dom.components.size(); ++ci) {
    const auto& sc = spec.components[ci];
    const auto& dc = dom.components[ci];
    require(sc.target < cod.components.size(), ErrorKind::OutOfRange,
            "chart functor target component out of range");
    const auto& tc = cod.components[sc.target];
    require(sc.object_map.size() == dc.objects && sc.twist.size() == dc.objects,
            ErrorKind::MalformedInput, "chart functor spec arity mismatch");
    require(static_cast<std::uint64_t>(sc.multiplier) * dc.group_order %
                    tc.group_order ==
                0,
            ErrorKind::MalformedInput,
            "chart functor multiplier is not a group hom");
    for (std::uint32_t x = 0; x < dc.objects; ++x) {
      require(sc.object_map[x] < tc.objects, ErrorKind::OutOfRange,
              "chart functor object map out of range");
      pk->obj.push_back(cod.first_obj[sc.target] + sc.object_map[x]);
      pk->comp_of.push_back(static_cast<std::uint32_t>(ci));
      pk->local_of.push_back(x);
      pk->twist.push_back(sc.twist[x] % tc.group_order);
    }
    pk->mult.push_back(sc.multiplier % tc.group_order);
    pk->mod.push_back(tc.group_order);
  }

  Functor f;
  f.dom = dom.groupoid;
  f.cod = cod.groupoid;
  f.obj = [pk](std::uint32_t o) { return pk->obj[o]; };
  f.arr = [pk](const Arrow& a) {
    const std::uint32_t ci = pk->comp_of[a.src];
    const std::uint32_t m = pk->mod[ci];
    const std::uint32_t e =
        (pk->mult[ci] * a.idx + pk->twist[a.tgt] + m - pk->twist[a.src] % m) % m;
    return Arrow{pk->obj[a.src], pk->obj[a.tgt], e};
  };
  f.name = std::move(name);
  return f;
}

// Deterministic sample stream for the groupoid backend laws.
class GroupoidSampler {
 public:
  explicit GroupoidSampler(std::uint64_t seed) : rng_(seed) {}

  Chart random_chart(const std::string& prefix) {
    std::vector<ChartComponent> comps;
    std::uint32_t remaining = pick(1, 4);
    while (remaining > 0) {
      const std::uint32_t take = pick(1, remaining);
      comps.push_back(ChartComponent{take, pick(1, 3)});
      remaining -= take;
    }
    return build_chart(std::move(comps), prefix);
  }

  ChartFunctorSpec random_spec(const Chart& dom, const Chart& cod) {
    ChartFunctorSpec spec;
    for (const auto& dc : dom.components) {
      ChartFunctorSpec::Component sc;
      sc.target = pick(0, static_cast<std::uint32_t>(cod.components.size()) - 1);
      const auto& tc = cod.components[sc.target];
      const std::uint32_t g = std::gcd(dc.group_order, tc.group_order);
      sc.multiplier = (tc.group_order / g) * pick(0, g - 1);
      for (std::uint32_t x = 0; x < dc.objects; ++x) {
        sc.object_map.push_back(pick(0, tc.objects - 1));
        sc.twist.push_back(pick(0, tc.group_order - 1));
      }
      spec.components.push_back(std::move(sc));
    }
    return spec;
  }

  Functor random_functor(const Chart& dom, const Chart& cod,
                         std::string name = "sample") {
    return make_chart_functor(dom, cod, random_spec(dom, cod), std::move(name));
  }

  // An injective equivalence into `cod`: a sub-chart with the same component
  // and vertex-group structure but possibly fewer objects per component,
  // included with a unit multiplier and random twists.
  std::pair<Chart, Functor> random_L_into(const Chart& cod) {
    std::vector<ChartComponent> comps;
    ChartFunctorSpec spec;
    for (std::size_t ci = 0; ci < cod.components.size(); ++ci) {
      const auto& tc = cod.components[ci];
      const std::uint32_t keep = pick(1, tc.objects);
      comps.push_back(ChartComponent{keep, tc.group_order});
      ChartFunctorSpec::Component sc;
      sc.target = static_cast<std::uint32_t>(ci);
      sc.multiplier = 1 % tc.group_order;
      for (std::uint32_t x = 0; x < keep; ++x) {
        sc.object_map.push_back(x);
        sc.twist.push_back(pick(0, tc.group_order - 1));
      }
      spec.components.push_back(std::move(sc));
    }
    Chart sub = build_chart(std::move(comps), "s");
    Functor inc = make_chart_functor(sub, cod, spec, "include");
    return {std::move(sub), std::move(inc)};
  }

  // An isofibration onto `cod`: the endpoint projection of the mapping path
  // object of a random functor into `cod`.
  Functor random_R_onto(const Chart& cod) {
    Chart e = random_chart("e");
    auto path = make_mapping_path(random_functor(e, cod, "base"));
    return mp_projection(path, "proj");
  }

  // Number of distinct sample groupoids drawn so far (for reporting).
  std::uint64_t draws() const { return draws_; }

  SampleSet<GroupoidCategory> sample_set(const GroupoidCategory& backend,
                                         std::uint32_t rounds) {
    SampleSet<GroupoidCategory> s;
    for (std::uint32_t i = 0; i < rounds; ++i) {
      Chart a = random_chart("a");
      Chart b = random_chart("b");
      draws_ += 2;
      s.objects.push_back(a.groupoid);
      s.morphisms.push_back(random_functor(a, b, "f" + std::to_string(i)));
      s.morphisms.push_back(identity_functor(a.groupoid));
      {
        Chart c = random_chart("m");
        ++draws_;
        s.morphisms.push_back(compose_functors(random_functor(b, c),
                                               random_functor(a, b),
                                               "g∘f" + std::to_string(i)));
      }

      // Lifting squares, two families. First: factor a random h: B -> C and
      // square an inclusion A -> B over it (top = section∘inclusion).
      {
        auto [sub, inc] = random_L_into(b);
        Chart c = random_chart("q");
        draws_ += 2;
        Functor h = random_functor(b, c, "h");
        auto fac = mapping_path_factorize(h);
        s.squares.push_back(LiftSample<GroupoidCategory>{
            inc, fac.right, compose_functors(fac.left, inc), h});
        // Second: extend a random top along the inclusion against a bang map.
        s.squares.push_back(LiftSample<GroupoidCategory>{
            inc, backend.to_terminal(c.groupoid),
            random_functor(sub, c, "top"),
            backend.to_terminal(b.groupoid)});
      }

      // Stability cospans: inclusion and mapping-path projection onto the
      // same chart.
      {
        auto [sub, inc] = random_L_into(a);
        ++draws_;
        s.cospans.push_back(
            StabilitySample<GroupoidCategory>{inc, random_R_onto(a)});
      }
    }
    return s;
  }

 private:
  std::uint32_t pick(std::uint32_t lo, std::uint32_t hi) {
    return std::uniform_int_distribution<std::uint32_t>(lo, hi)(rng_);
  }

  std::mt19937_64 rng_;
  std::uint64_t draws_ = 0;
};

// Exhaustive sample family for the discrete backend: every map between sets
// of size <= max_size for the morphism laws; every (bijection, map, top)
// square with the forced bottom; every (permutation, map) stability cospan.
inline SampleSet<DiscreteBackend> discrete_samples(std::uint32_t max_size = 4,
                                                   std::uint32_t square_size = 3) {
  SampleSet<DiscreteBackend> s;
  for (std::uint32_t n = 0; n <= max_size; ++n) s.objects.push_back(FinSet{n});

  auto all_maps = [](std::uint32_t m, std::uint32_t n) {
    std::vector<FinMap> out;
    if (m == 0) {
      out.push_back(FinMap{0, n, {}});
      return out;
    }
    if (n == 0) return out;
    std::vector<std::uint32_t> t(m, 0);
    while (true) {
      out.push_back(FinMap{m, n, t});
      std::uint32_t i = 0;
      while (i < m && ++t[i] == n) t[i++] = 0;
      if (i == m) break;
    }
    return out;
  };

  for (std::uint32_t m = 0; m <= max_size; ++m)
    for (std::uint32_t n = 0; n <= max_size; ++n)
      for (auto& f : all_maps(m, n)) s.morphisms.push_back(std::move(f));

  DiscreteBackend b;
  for (std::uint32_t a = 0; a <= max_size; ++a) {
    std::vector<FinMap> bijections;
    for (const auto& f : all_maps(a, a))
      if (b.is_L(f)) bijections.push_back(f);
    for (std::uint32_t c = 0; c <= square_size; ++c)
      for (std::uint32_t d = 0; d <= square_size; ++d)
        for (const auto& r : all_maps(c, d))
          for (const auto& top : all_maps(a, c))
            for (const auto& l : bijections) {
              FinMap linv{a, a, std::vector<std::uint32_t>(a)};
              for (std::uint32_t i = 0; i < a; ++i) linv.table[l.table[i]] = i;
              s.squares.push_back(LiftSample<DiscreteBackend>{
                  l, r, top, b.compose(b.compose(r, top), linv)});
            }
  }
  for (std::uint32_t c = 0; c <= square_size; ++c) {
    std::vector<FinMap> perms;
    for (const auto& f : all_maps(c, c))
      if (b.is_L(f)) perms.push_back(f);
    for (const auto& l : perms)
      for (std::uint32_t e = 0; e <= square_size; ++e)
        for (const auto& r : all_maps(e, c))
          s.cospans.push_back(StabilitySample<DiscreteBackend>{l, r});
  }
  return s;
}

}  // namespace globular
