#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "globular/derived.hpp"
#include "globular/discrete.hpp"
#include "globular/functor_search.hpp"
#include "globular/grpd_backend.hpp"
#include "globular/omega.hpp"
#include "globular/product_check.hpp"

using namespace globular;

namespace {

template <typename F>
void expect_error(F&& fn, ErrorKind kind, const std::string& needle) {
  try {
    fn();
    FAIL("expected an error mentioning '" << needle << "'");
  } catch (const Error& e) {
    CHECK(e.kind() == kind);
    CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring(needle));
  }
}

struct Fixture {
  GroupoidCategory cat;
  GroupoidPtr base;
  PathTower<GroupoidCategory> tower;
  EndTheoryHandle<GroupoidCategory> handle;

  Fixture(std::vector<ChartComponent> chart, std::uint32_t truncation)
      : base(make_chart_groupoid(std::move(chart), "x")),
        tower(cat, base, truncation),
        handle(tower) {}
};

// Shared read-mostly fixtures; tests that mutate handle state build their own.
Fixture& sign_fixture() {
  static Fixture f({{1, 2}}, 2);
  return f;
}

Fixture& walk_fixture() {
  static Fixture f({{2, 1}}, 2);
  return f;
}

bool functors_agree(const Functor& f, const Functor& g) {
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

// Object of X_1 presenting a base arrow as a path with identity structure iso.
std::uint32_t embed_arrow(const PathTower<GroupoidCategory>& tw,
                          const Arrow& f) {
  const auto& boundary = tw.boundary(1);
  auto pb = std::dynamic_pointer_cast<const PullbackGroupoid>(boundary.apex);
  auto mp = std::dynamic_pointer_cast<const MappingPathGroupoid>(tw.level(1));
  REQUIRE(pb);
  REQUIRE(mp);
  const auto ends = pb->object_of(f.src, f.tgt);
  const auto iso = pb->arrow_of(tw.level(0)->identity(f.src), f);
  return mp->object_of(f.src, ends, iso.idx);
}

// Independent witness-existence oracle: searches for any functor filling the
// lifting square of `w`, with both the pairing and point-restriction
// constraints folded into the pruning. Stops at the first hit.
bool search_finds_lift(const GroupoidCategory& cat,
                       const PathTower<GroupoidCategory>& tw,
                       const GlobularProduct<GroupoidCategory>& prod,
                       const OpWitness<GroupoidCategory>& w) {
  const auto pairing = tw.pairing(w.target_dim);
  const auto bottom = cat.mediate(tw.boundary(w.target_dim), w.lhs, w.rhs);
  const auto point = refl_chain(tw, 0, w.target_dim);
  const auto base = tw.level(0);
  FunctorSearchOptions opt;
  opt.obj_ok = [&](std::uint32_t o, std::uint32_t im) {
    if (pairing.obj(im) != bottom.obj(o)) return false;
    for (std::uint32_t x = 0; x < base->object_count(); ++x)
      if (prod.under.obj(x) == o && point.obj(x) != im) return false;
    return true;
  };
  opt.arrow_ok = [&](const Arrow& a, const Arrow& im) {
    if (!(pairing.apply(im) == bottom.apply(a))) return false;
    for (std::uint32_t x = 0; x < base->object_count(); ++x)
      for (std::uint32_t y = 0; y < base->object_count(); ++y)
        for (std::uint32_t i = 0; i < base->hom_size(x, y); ++i) {
          const Arrow g{x, y, i};
          if (prod.under.apply(g) == a && !(point.apply(g) == im)) return false;
        }
    return true;
  };
  bool found = false;
  search_functors(prod.apex, tw.level(w.target_dim),
                  [&](const Functor&) {
                    found = true;
                    return false;
                  },
                  opt);
  return found;
}

}  // namespace

TEST_CASE("globular products assemble stepwise") {
  auto& fx = sign_fixture();
  auto& cat = fx.cat;
  auto& tw = fx.tower;

  const auto& pair_prod = fx.handle.product(Table{1, 0, 1});
  CHECK(pair_prod.apex->object_count() == 16);
  CHECK(pair_prod.apex->arrow_count() == 512);
  REQUIRE(pair_prod.projections.size() == 2);
  REQUIRE(pair_prod.steps.size() == 1);
  CHECK(pair_prod.under_l.holds);
  CHECK(pair_prod.final_r.holds);
  for (std::size_t j = 0; j < 2; ++j)
    CHECK(cat.mor_equal(cat.compose(pair_prod.projections[j], pair_prod.under),
                        refl_chain(tw, 0, 1)));
  CHECK(cat.mor_equal(
      mediate_into(cat, pair_prod,
                   {pair_prod.projections[0], pair_prod.projections[1]}),
      cat.identity(pair_prod.apex)));

  const auto& triple = fx.handle.product(Table{1, 0, 1, 0, 1});
  CHECK(triple.apex->object_count() == 64);
  CHECK(triple.projections.size() == 3);

  expect_error([&] { fx.handle.product(Table{2, 1, 2}); },
               ErrorKind::TruncationExceeded, "truncation");
  expect_error([&] { glob_product_under(tw, Table{1, 1, 1}); },
               ErrorKind::MalformedTable, "");
}

TEST_CASE("step sections split their projection and are forced") {
  auto& fx = sign_fixture();
  auto& cat = fx.cat;
  auto& tw = fx.tower;
  const auto& prod = fx.handle.product(Table{1, 0, 1});
  const auto& sq = prod.steps[0].square;
  const auto& section = section_iprime(prod, 0);

  CHECK(prod.steps[0].section_l.holds);
  CHECK(cat.mor_equal(cat.compose(sq.p, section), cat.identity(tw.level(1))));
  const auto wall_cell = cat.compose(refl_chain(tw, 0, 1), tgt_chain(tw, 1, 0));
  CHECK(cat.mor_equal(cat.compose(sq.q, section), wall_cell));

  // Both projection constraints together pin the section completely.
  FunctorSearchOptions opt;
  opt.obj_ok = [&](std::uint32_t o, std::uint32_t im) {
    return sq.p.obj(im) == o && sq.q.obj(im) == wall_cell.obj(o);
  };
  opt.arrow_ok = [&](const Arrow& a, const Arrow& im) {
    return sq.p.apply(im) == a && sq.q.apply(im) == wall_cell.apply(a);
  };
  std::uint64_t found = 0;
  bool matches_stored = false;
  search_functors(tw.level(1), prod.apex,
                  [&](const Functor& h) {
                    ++found;
                    matches_stored = functors_agree(h, section);
                    return true;
                  },
                  opt);
  CHECK(found == 1);
  CHECK(matches_stored);

  expect_error([&] { section_iprime(prod, 1); }, ErrorKind::OutOfRange,
               "no step");
}

TEST_CASE("products satisfy the universal property against probes") {
  auto& fx = sign_fixture();
  GrpdHomOracle oracle;
  ProductAssignment<GrpdHomOracle> J;
  J.object_of = [&](const Table& t) { return fx.handle.product(t).apex; };
  J.projection = [&](const Table& t, std::size_t j) {
    return fx.handle.product(t).projections[j];
  };
  J.chain = [&](int hi, int lo, bool target) {
    return target ? tgt_chain(fx.tower, hi, lo) : src_chain(fx.tower, hi, lo);
  };
  const std::vector<GroupoidPtr> probes = {make_chart_groupoid({{1, 1}}, "pt"),
                                           make_chart_groupoid({{1, 2}}, "lp")};
  for (const Table& t : {Table{1}, Table{1, 0, 1}, Table{1, 0, 1, 0, 1}}) {
    const auto result = check_product_preservation(oracle, J, t, probes);
    INFO(table_to_string(t) << ": " << result.counterexample);
    CHECK(result.preserved);
    CHECK(result.mediators == result.cones);
    CHECK(result.mediators > 0);
  }

  // Assigning a non-product object is detected through its probes.
  ProductAssignment<GrpdHomOracle> bad = J;
  bad.object_of = [&](const Table& t) {
    return t.size() == 3 ? fx.tower.level(1) : fx.handle.product(t).apex;
  };
  bad.projection = [&](const Table& t, std::size_t j) {
    if (t.size() == 3) return identity_functor(fx.tower.level(1));
    return fx.handle.product(t).projections[j];
  };
  const auto broken =
      check_product_preservation(oracle, bad, Table{1, 0, 1}, probes);
  CHECK_FALSE(broken.preserved);
  CHECK_FALSE(broken.counterexample.empty());
}

TEST_CASE("pasting shapes are products in the reversed shape category") {
  Theta0OpOracle oracle;
  const auto J = theta0_self_assignment();
  // Shape maps only raise dimension, so probes must include shapes at least
  // as deep as the target; the table itself supplies the identity mediator.
  const std::vector<Table> probes = {Table{0},          Table{1},
                                     Table{2},          Table{1, 0, 1},
                                     Table{2, 1, 2},    Table{2, 0, 2},
                                     Table{1, 0, 2, 1, 2}};
  for (const Table& t :
       {Table{1, 0, 1}, Table{2, 1, 2}, Table{2, 0, 2}, Table{1, 0, 2, 1, 2}}) {
    const auto result = check_product_preservation(oracle, J, t, probes);
    INFO(table_to_string(t) << ": " << result.counterexample);
    CHECK(result.preserved);
    CHECK(result.mediators == result.cones);
    CHECK(result.mediators > 0);
  }
}

TEST_CASE("operation witnesses satisfy their boundary equations") {
  auto& fx = sign_fixture();
  auto& cat = fx.cat;
  auto& tw = fx.tower;

  expect_error([&] { synth_operation(fx.handle, "lunit"); },
               ErrorKind::MissingPrerequisite, "needs 'unit'");
  expect_error([&] { synth_operation(fx.handle, "comultiply"); },
               ErrorKind::UnknownOperation, "comultiply");

  for (const char* name : {"unit", "m", "w", "lunit", "runit", "a"}) {
    const auto& w = synth_operation(fx.handle, name);
    const auto& prod = fx.handle.product(w.dom_table);
    INFO(name);
    CHECK(cat.mor_equal(cat.compose(tw.src(w.target_dim), w.h), w.lhs));
    CHECK(cat.mor_equal(cat.compose(tw.tgt(w.target_dim), w.h), w.rhs));
    CHECK(cat.mor_equal(cat.compose(w.h, prod.under),
                        refl_chain(tw, 0, w.target_dim)));
  }

  // The unit is forced: its lifting square pins h on the whole domain.
  CHECK(cat.mor_equal(fx.handle.operation("unit").h, tw.refl(1)));

  // Composition recovers the designated boundary pair.
  const auto& m = fx.handle.operation("m");
  const auto& prod = fx.handle.product(Table{1, 0, 1});
  CHECK(cat.mor_equal(m.lhs, cat.compose(tw.src(1), prod.projections[0])));
  CHECK(cat.mor_equal(m.rhs, cat.compose(tw.tgt(1), prod.projections[1])));

  // The inverse swaps the hemispheres of its argument.
  const auto& w = fx.handle.operation("w");
  const auto& line = fx.handle.product(Table{1});
  CHECK(cat.mor_equal(cat.compose(tw.src(1), w.h),
                      cat.compose(tw.tgt(1), line.projections[0])));
  CHECK(cat.mor_equal(cat.compose(tw.tgt(1), w.h),
                      cat.compose(tw.src(1), line.projections[0])));
}

TEST_CASE("synthesized lifts agree with exhaustive functor search") {
  auto& fx = sign_fixture();
  for (const char* name : {"unit", "w", "m"}) {
    const auto& w = synth_operation(fx.handle, name);
    const auto& prod = fx.handle.product(w.dom_table);
    INFO(name);
    CHECK(search_finds_lift(fx.cat, fx.tower, prod, w));
  }
}

TEST_CASE("parallel pair lifting rejects malformed input") {
  auto& fx = sign_fixture();
  auto& cat = fx.cat;
  auto& tw = fx.tower;
  const auto& line = fx.handle.product(Table{1});
  const auto id1 = cat.identity(tw.level(1));

  expect_error(
      [&] {
        fx.handle.lift_parallel(Table{1}, src_chain(tw, 1, 0), id1, "bad");
      },
      ErrorKind::NotParallel, "different objects");
  expect_error(
      [&] {
        fx.handle.lift_parallel(Table{1}, refl_chain(tw, 1, 2),
                                refl_chain(tw, 1, 2), "tall");
      },
      ErrorKind::TruncationExceeded, "taller tower");

  // A constant loop path at the base is parallel to the unit but does not
  // restrict to the point.
  auto mp = std::dynamic_pointer_cast<const MappingPathGroupoid>(tw.level(1));
  REQUIRE(mp);
  const auto x0 = tw.level(0);
  const Arrow loop{0, 0, 1};
  const auto twisted = embed_arrow(tw, loop);
  Functor at_twist;
  at_twist.dom = x0;
  at_twist.cod = tw.level(1);
  at_twist.obj = [twisted](std::uint32_t) { return twisted; };
  at_twist.arr = [mp, twisted](const Arrow&) {
    return mp->identity(twisted);
  };
  at_twist.name = "at_twist";
  const auto& point_prod = fx.handle.product(Table{0});
  REQUIRE(cat.obj_equal(cat.dom(at_twist), point_prod.apex));
  expect_error(
      [&] { fx.handle.lift_parallel(Table{0}, at_twist, at_twist, "off"); },
      ErrorKind::NotUnderA0, "point");
}

TEST_CASE("binary composition is homotopic to composition of embeddings") {
  for (Fixture* fx : {&sign_fixture(), &walk_fixture()}) {
    auto& tw = fx->tower;
    const auto& m = synth_operation(fx->handle, "m");
    const auto& prod = fx->handle.product(Table{1, 0, 1});
    auto apex = std::dynamic_pointer_cast<const PullbackGroupoid>(prod.apex);
    REQUIRE(apex);

    const auto x0 = tw.level(0);
    const auto x2 = tw.level(2);
    const auto s2 = tw.src(2);
    const auto t2 = tw.tgt(2);
    for (std::uint32_t a = 0; a < x0->object_count(); ++a)
      for (std::uint32_t b = 0; b < x0->object_count(); ++b)
        for (std::uint32_t i = 0; i < x0->hom_size(a, b); ++i)
          for (std::uint32_t c = 0; c < x0->object_count(); ++c)
            for (std::uint32_t j = 0; j < x0->hom_size(b, c); ++j) {
              const Arrow f{a, b, i};
              const Arrow g{b, c, j};
              const auto pair_obj =
                  apex->object_of(embed_arrow(tw, f), embed_arrow(tw, g));
              const auto lhs = m.h.obj(pair_obj);
              const auto rhs = embed_arrow(tw, x0->compose(g, f));
              bool connected = false;
              for (std::uint32_t o = 0; o < x2->object_count() && !connected;
                   ++o)
                connected = s2.obj(o) == lhs && t2.obj(o) == rhs;
              INFO("pair (" << x0->arrow_label(f) << ", " << x0->arrow_label(g)
                            << ")");
              CHECK(connected);
            }
  }
}

TEST_CASE("discrete towers collapse with two-sided inverse witnesses") {
  DiscreteBackend db;
  PathTower<DiscreteBackend> tw(db, FinSet{3}, 3);
  for (std::uint32_t n = 1; n <= 3; ++n) {
    CHECK(db.mor_equal(db.compose(tw.src(n), tw.refl(n)),
                       db.identity(tw.level(n - 1))));
    CHECK(db.mor_equal(db.compose(tw.refl(n), tw.src(n)),
                       db.identity(tw.level(n))));
    CHECK(db.mor_equal(db.compose(tw.tgt(n), tw.refl(n)),
                       db.identity(tw.level(n - 1))));
  }
  CHECK(tw.boundary(1).apex.size == 9);
  CHECK(tw.boundary(2).apex.size == 3);

  EndTheoryHandle<DiscreteBackend> handle(tw);
  for (const char* name : {"unit", "m", "w", "lunit", "runit", "a", "vcomp"}) {
    const auto& w = synth_operation(handle, name);
    INFO(name);
    CHECK(db.mor_equal(db.compose(tw.src(w.target_dim), w.h), w.lhs));
    CHECK(db.mor_equal(db.compose(tw.tgt(w.target_dim), w.h), w.rhs));
  }
  const auto report = certify_contractible(handle, 1, 3);
  CHECK(report.all_lifted());
  CHECK(report.pairs > 0);
}

TEST_CASE("vertical composition lifts on a finite chart") {
  GroupoidCategory cat;
  auto base = make_chart_groupoid({{1, 1}, {1, 1}}, "d");
  PathTower<GroupoidCategory> tw(cat, base, 3);
  EndTheoryHandle<GroupoidCategory> handle(tw);
  const auto& w = synth_operation(handle, "vcomp");
  CHECK(w.target_dim == 2);
  CHECK(cat.mor_equal(cat.compose(tw.src(2), w.h), w.lhs));
  CHECK(cat.mor_equal(cat.compose(tw.tgt(2), w.h), w.rhs));
  const auto& prod = handle.product(Table{2, 1, 2});
  CHECK(cat.mor_equal(cat.compose(w.h, prod.under), refl_chain(tw, 0, 2)));
}

TEST_CASE("contractibility survey lifts every generated pair") {
  auto& fx = sign_fixture();
  for (const char* name : {"unit", "m", "w", "lunit", "runit", "a"})
    synth_operation(fx.handle, name);
  const auto report = certify_contractible(fx.handle, 1, 3);
  for (const auto& f : report.failures) INFO(f);
  CHECK(report.all_lifted());
  CHECK(report.tables_examined == 3);
  CHECK(report.pairs > 0);
  CHECK(report.lifted == report.pairs);
  CHECK_FALSE(report.budget_exhausted);

  expect_error([&] { certify_contractible(fx.handle, 2, 3); },
               ErrorKind::TruncationExceeded, "taller tower");
}

TEST_CASE("a corrupted product fails the survey and is recoverable") {
  Fixture fx({{1, 2}}, 2);
  for (const char* name : {"unit", "m", "w"}) synth_operation(fx.handle, name);
  const auto clean = fx.handle.product(Table{1, 0, 1});

  GlobularProduct<GroupoidCategory> corrupt = clean;
  Functor squash;
  squash.dom = clean.under.dom;
  squash.cod = clean.under.cod;
  auto under_obj = clean.under.obj;
  auto apex = clean.apex;
  squash.obj = under_obj;
  squash.arr = [under_obj, apex](const Arrow& a) {
    return apex->identity(under_obj(a.src));
  };
  squash.name = "squash";
  corrupt.under = squash;
  fx.handle.inject_product(corrupt);

  const auto broken = certify_contractible(fx.handle, 1, 3);
  CHECK_FALSE(broken.all_lifted());
  bool saw_l_failure = false;
  for (const auto& f : broken.failures)
    saw_l_failure = saw_l_failure || f.find("not an L-map") != std::string::npos;
  CHECK(saw_l_failure);

  fx.handle.inject_product(clean);
  const auto repaired = certify_contractible(fx.handle, 1, 3);
  CHECK(repaired.all_lifted());
}

TEST_CASE("evaluation interprets shape morphisms contravariantly") {
  auto& fx = sign_fixture();
  auto& cat = fx.cat;
  auto& tw = fx.tower;

  CHECK(cat.mor_equal(eval_algebra(fx.handle, hem_src_inclusion(0, 1)),
                      tw.src(1)));
  CHECK(cat.mor_equal(eval_algebra(fx.handle, hem_tgt_inclusion(0, 1)),
                      tw.tgt(1)));
  const auto& prod = fx.handle.product(Table{1, 0, 1});
  for (int j = 0; j < 2; ++j)
    CHECK(cat.mor_equal(
        eval_algebra(fx.handle, segment_inclusion(Table{1, 0, 1}, j)),
        prod.projections[j]));

  const std::vector<Table> tables = {Table{0}, Table{1}, Table{1, 0, 1}};
  for (const auto& t : tables)
    CHECK(cat.mor_equal(eval_algebra(fx.handle, theta0_identity(t)),
                        cat.identity(fx.handle.product(t).apex)));
  for (const auto& ta : tables)
    for (const auto& tb : tables)
      for (const auto& tc : tables)
        for (const auto& f : theta0_hom(ta, tb))
          for (const auto& g : theta0_hom(tb, tc)) {
            const auto both = eval_algebra(fx.handle, compose(g, f));
            const auto staged = cat.compose(eval_algebra(fx.handle, f),
                                            eval_algebra(fx.handle, g));
            CHECK(cat.mor_equal(both, staged));
          }
}

TEST_CASE("evaluation is functorial across dimensions on a finite chart") {
  GroupoidCategory cat;
  auto base = make_chart_groupoid({{1, 1}, {1, 1}}, "d");
  PathTower<GroupoidCategory> tw(cat, base, 3);
  EndTheoryHandle<GroupoidCategory> handle(tw);

  const auto tables = all_tables(3, 2);
  for (const auto& t : tables)
    CHECK(cat.mor_equal(eval_algebra(handle, theta0_identity(t)),
                        cat.identity(handle.product(t).apex)));
  for (const auto& ta : tables)
    for (const auto& tb : tables)
      for (const auto& tc : tables)
        for (const auto& f : theta0_hom(ta, tb))
          for (const auto& g : theta0_hom(tb, tc)) {
            const auto both = eval_algebra(handle, compose(g, f));
            const auto staged = cat.compose(eval_algebra(handle, f),
                                            eval_algebra(handle, g));
            CHECK(cat.mor_equal(both, staged));
          }
  for (int n = 0; n < 2; ++n)
    for (int m = n + 1; m <= 2; ++m) {
      CHECK(cat.mor_equal(eval_algebra(handle, hem_src_inclusion(n, m)),
                          src_chain(tw, m, n)));
      CHECK(cat.mor_equal(eval_algebra(handle, hem_tgt_inclusion(n, m)),
                          tgt_chain(tw, m, n)));
    }
}
