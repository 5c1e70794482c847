// Acceptance gate: one timed check per shipping criterion.  Each prints a
// single [PASS]/[FAIL] line; the process exits nonzero if any check fails or
// overruns its time budget.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "globular/derived.hpp"
#include "globular/discrete.hpp"
#include "globular/driver.hpp"
#include "globular/functor_search.hpp"
#include "globular/globsum.hpp"
#include "globular/grpd_backend.hpp"
#include "globular/itc.hpp"
#include "globular/omega.hpp"
#include "globular/path_tower.hpp"
#include "globular/samplers.hpp"
#include "globular/theta0.hpp"
#include "oracles.hpp"

using namespace globular;

namespace {

struct Detail {
  std::string text;
  bool set(const std::string& t) {
    if (text.empty()) text = t;
    return false;
  }
};

GroupoidPtr sign_base() { return make_chart_groupoid({{1, 2}}, "x"); }
GroupoidPtr discrete_base() {
  return make_chart_groupoid({{1, 1}, {1, 1}}, "x");
}
GroupoidPtr walk_base() { return make_chart_groupoid({{2, 1}}, "x"); }

struct Fixture {
  const char* name;
  GroupoidPtr base;
};

std::vector<Fixture> fixtures() {
  return {{"one-object group of order two", sign_base()},
          {"two-object discrete groupoid", discrete_base()},
          {"two-object contractible groupoid", walk_base()}};
}

// Pasting shapes against the generic colimit oracle, plus two pinned counts.
bool criterion1(Detail& d) {
  if (sum_cell_counts(glob_sum({1})) != std::vector<int>{2, 1})
    return d.set("(1) does not have cell counts (2,1)");
  if (sum_cell_counts(glob_sum({1, 0, 2, 1, 2})) != std::vector<int>{3, 4, 2})
    return d.set("(1,0,2,1,2) does not have cell counts (3,4,2)");
  for (const Table& t : all_tables(5, 3))
    if (sum_cell_counts(glob_sum(t)) != oracle::colimit_cell_counts(t))
      return d.set("cell counts disagree with the colimit oracle on " +
                   table_to_string(t));
  return true;
}

// Homs from globes realize cell counts; composition is unital on those homs
// and associative along chains of globe maps.
bool criterion2(Detail& d) {
  for (const Table& t : all_tables(5, 3)) {
    const auto sum = glob_sum(t);
    for (int n = 0; n <= 3; ++n) {
      const auto hom = theta0_hom({n}, t);
      const std::size_t cells =
          n <= sum.carrier->truncation ? sum.carrier->cells[n].size() : 0;
      if (hom.size() != cells)
        return d.set("hom((" + std::to_string(n) + ")," + table_to_string(t) +
                     ") misses the cell count");
      const auto id_dom = theta0_identity({n});
      const auto id_cod = theta0_identity(t);
      for (const auto& f : hom)
        if (!equal(compose(f, id_dom), f) || !equal(compose(id_cod, f), f))
          return d.set("identity law fails into " + table_to_string(t));
    }
    for (const auto& h : theta0_hom({2}, t))
      for (const auto& g : theta0_hom({1}, {2}))
        for (const auto& f : theta0_hom({0}, {1}))
          if (!equal(compose(h, compose(g, f)), compose(compose(h, g), f)))
            return d.set("associativity fails into " + table_to_string(t));
  }
  return true;
}

std::string first_failure(const LawReport& report) {
  for (const auto& check : report.checks)
    if (!check.passed) return check.law + ": " + check.witness;
  return "law suite failed";
}

bool has_stability_law(const LawReport& report) {
  for (const auto& check : report.checks)
    if (check.law == "L-stable-under-R-pullback" && check.cases > 0)
      return true;
  return false;
}

// Factorization system laws, exhaustively on small sets and on randomized
// groupoids, including stability of L-maps under pullback along R-maps.
bool criterion3(Detail& d) {
  DiscreteBackend db;
  const auto exhaustive = law_suite(db, discrete_samples(4, 3));
  if (!exhaustive.passed) return d.set(first_failure(exhaustive));
  if (!has_stability_law(exhaustive))
    return d.set("stability law missing from the discrete run");

  GroupoidCategory cat;
  GroupoidSampler sampler(20260816);
  const auto samples = sampler.sample_set(cat, 17);
  if (sampler.draws() < 100)
    return d.set("fewer than 100 groupoids sampled");
  const auto random = law_suite(cat, samples);
  if (!random.passed) return d.set(first_failure(random));
  if (!has_stability_law(random))
    return d.set("stability law missing from the randomized run");
  return true;
}

// Towers to level three: every certificate holds and both structure maps
// retract the cell insertion identically.
bool criterion4(Detail& d) {
  GroupoidCategory cat;
  for (const auto& fx : fixtures()) {
    PathTower<GroupoidCategory> tw(cat, fx.base, 3);
    if (tw.certificates().empty())
      return d.set(std::string(fx.name) + ": no certificates");
    for (const auto& c : tw.certificates())
      if (!c.holds)
        return d.set(std::string(fx.name) + ": certificate " + c.subject +
                     " fails at level " + std::to_string(c.level));
    for (std::uint32_t n = 1; n <= 3; ++n) {
      bool recorded = false;
      for (const auto& c : tw.certificates())
        recorded = recorded || (c.level == n && c.subject == "s o i = t o i");
      if (!recorded)
        return d.set(std::string(fx.name) +
                     ": no cell-insertion certificate at level " +
                     std::to_string(n));
    }
    for (std::uint32_t n = 1; n <= 2; ++n) {
      const auto left = cat.compose(tw.src(n), tw.refl(n));
      const auto right = cat.compose(tw.tgt(n), tw.refl(n));
      if (!cat.mor_equal(left, right))
        return d.set(std::string(fx.name) +
                     ": structure maps disagree on cells at level " +
                     std::to_string(n));
    }
  }
  PathTower<GroupoidCategory> tw(cat, sign_base(), 1);
  if (tw.level(1)->object_count() != 4 || tw.level(1)->arrow_count() != 32)
    return d.set("path space of the order-two group is not 4 objects and 32 "
                 "arrows");
  return true;
}

// Independent witness-existence oracle: exhaustive functor search over the
// lifting square, with the pairing and point constraints folded into pruning.
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
          if (prod.under.apply(g) == a && !(point.apply(g) == im))
            return false;
        }
    return true;
  };
  bool found = false;
  search_functors(
      prod.apex, tw.level(w.target_dim),
      [&](const Functor&) {
        found = true;
        return false;
      },
      opt);
  return found;
}

// Operation synthesis with exact boundary equations, full lift coverage over
// small tables, and the search oracle agreeing on the order-two group.
bool criterion5(Detail& d) {
  GroupoidCategory cat;
  for (const auto& fx : fixtures()) {
    PathTower<GroupoidCategory> tw(cat, fx.base, 2);
    EndTheoryHandle<GroupoidCategory> handle(tw);
    for (const char* name : {"unit", "m", "w", "lunit", "runit", "a"}) {
      const auto& w = synth_operation(handle, name);
      const auto& prod = handle.product(w.dom_table);
      if (!cat.mor_equal(cat.compose(tw.src(w.target_dim), w.h), w.lhs))
        return d.set(std::string(fx.name) + ": source equation fails for " +
                     name);
      if (!cat.mor_equal(cat.compose(tw.tgt(w.target_dim), w.h), w.rhs))
        return d.set(std::string(fx.name) + ": target equation fails for " +
                     name);
      if (!cat.mor_equal(cat.compose(w.h, prod.under),
                         refl_chain(tw, 0, w.target_dim)))
        return d.set(std::string(fx.name) + ": point equation fails for " +
                     name);
    }
    const auto report = certify_contractible(handle, 1, 3);
    if (!report.all_lifted())
      return d.set(std::string(fx.name) + ": " +
                   (report.failures.empty() ? "lift coverage incomplete"
                                            : report.failures.front()));
    if (report.pairs == 0)
      return d.set(std::string(fx.name) + ": no parallel pairs generated");
  }

  PathTower<GroupoidCategory> tw(cat, sign_base(), 2);
  EndTheoryHandle<GroupoidCategory> handle(tw);
  for (const char* name : {"unit", "m", "w"}) {
    const auto& w = synth_operation(handle, name);
    if (!search_finds_lift(cat, tw, handle.product(w.dom_table), w))
      return d.set(std::string("search oracle finds no lift for ") + name);
  }
  return true;
}

// Discrete model: every level is the base set up to two-sided inverses and
// every witness satisfies its triangles with the forced maps.
bool criterion6(Detail& d) {
  DiscreteBackend db;
  PathTower<DiscreteBackend> tw(db, FinSet{3}, 3);
  for (std::uint32_t n = 1; n <= 3; ++n) {
    const bool collapse =
        db.mor_equal(db.compose(tw.src(n), tw.refl(n)),
                     db.identity(tw.level(n - 1))) &&
        db.mor_equal(db.compose(tw.refl(n), tw.src(n)),
                     db.identity(tw.level(n))) &&
        db.mor_equal(db.compose(tw.tgt(n), tw.refl(n)),
                     db.identity(tw.level(n - 1)));
    if (!collapse)
      return d.set("level " + std::to_string(n) +
                   " is not isomorphic to the base set");
  }
  EndTheoryHandle<DiscreteBackend> handle(tw);
  for (const char* name : {"unit", "m", "w", "lunit", "runit", "a", "vcomp"}) {
    const auto& w = synth_operation(handle, name);
    const auto& prod = handle.product(w.dom_table);
    const bool triangles =
        db.mor_equal(db.compose(tw.src(w.target_dim), w.h), w.lhs) &&
        db.mor_equal(db.compose(tw.tgt(w.target_dim), w.h), w.rhs) &&
        db.mor_equal(db.compose(w.h, prod.under),
                     refl_chain(tw, 0, w.target_dim));
    if (!triangles)
      return d.set(std::string("triangle fails for ") + name);
  }
  return true;
}

// Object of the path space presenting a base arrow with identity structure.
std::uint32_t embed_arrow(const PathTower<GroupoidCategory>& tw,
                          const Arrow& f) {
  auto pb = std::dynamic_pointer_cast<const PullbackGroupoid>(
      tw.boundary(1).apex);
  auto mp =
      std::dynamic_pointer_cast<const MappingPathGroupoid>(tw.level(1));
  require(pb && mp, ErrorKind::MalformedInput,
          "tower level one is not a mapping path space");
  const auto ends = pb->object_of(f.src, f.tgt);
  const auto iso = pb->arrow_of(tw.level(0)->identity(f.src), f);
  return mp->object_of(f.src, ends, iso.idx);
}

// The synthesized binary operation on embedded arrows is connected to the
// true composite by a two-cell, for every composable pair.
bool criterion7(Detail& d) {
  GroupoidCategory cat;
  for (const auto& fx :
       {Fixture{"one-object group of order two", sign_base()},
        Fixture{"two-object contractible groupoid", walk_base()}}) {
    PathTower<GroupoidCategory> tw(cat, fx.base, 2);
    EndTheoryHandle<GroupoidCategory> handle(tw);
    const auto& m = synth_operation(handle, "m");
    auto apex = std::dynamic_pointer_cast<const PullbackGroupoid>(
        handle.product({1, 0, 1}).apex);
    if (!apex) return d.set("pair space is not a pullback");

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
              for (std::uint32_t o = 0;
                   o < x2->object_count() && !connected; ++o)
                connected = s2.obj(o) == lhs && t2.obj(o) == rhs;
              if (!connected)
                return d.set(std::string(fx.name) + ": no two-cell for (" +
                             x0->arrow_label(f) + ", " + x0->arrow_label(g) +
                             ")");
            }
  }
  return true;
}

std::string run_cli(const std::string& args, int& code) {
  const std::string cmd = std::string(GLOBULAR_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    code = -1;
    return "";
  }
  std::string out;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  return out;
}

// Every tool invocation used here produces byte-identical reports when run
// twice.
bool criterion8(Detail& d) {
  const std::string data = GLOBULAR_DATA_DIR;
  const std::vector<std::string> commands = {
      "theta0 \"(1)\" \"(1,0,1)\"",
      "tower " + data + "/bz2.json --dim 2",
      "op " + data + "/bz2.json --name a --dim 2",
      "certify --backend discrete --size 2 --dim 2",
      "eval " + data + "/bz2.json --theta " + data + "/theta_hem.json",
  };
  for (const auto& args : commands) {
    int code1 = 0;
    int code2 = 0;
    const std::string first = run_cli(args, code1);
    const std::string second = run_cli(args, code2);
    if (code1 != 0 || code2 != 0)
      return d.set("command failed: " + args);
    if (first.empty()) return d.set("command produced no output: " + args);
    if (first != second)
      return d.set("reports differ between runs: " + args);
  }
  return true;
}

struct Criterion {
  int id;
  const char* label;
  double budget_seconds;
  bool (*body)(Detail&);
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "pasting shape cell counts", 1.0, criterion1},
      {2, "globe homs and composition laws", 10.0, criterion2},
      {3, "factorization system laws", 30.0, criterion3},
      {4, "tower certificates to level three", 30.0, criterion4},
      {5, "operation synthesis and lift coverage", 120.0, criterion5},
      {6, "discrete model collapse", 1.0, criterion6},
      {7, "binary operation is homotopic to composition", 60.0, criterion7},
      {8, "deterministic tool reports", 30.0, criterion8},
  };

  bool all = true;
  for (const auto& c : criteria) {
    Detail detail;
    bool ok = false;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      ok = c.body(detail);
    } catch (const std::exception& e) {
      detail.set(e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (ok && secs > c.budget_seconds) {
      ok = false;
      detail.set("over the " + std::to_string(c.budget_seconds) +
                 "s time budget");
    }
    std::printf("[%s] criterion %d: %s (%.2fs)\n", ok ? "PASS" : "FAIL", c.id,
                c.label, secs);
    if (!ok && !detail.text.empty())
      std::printf("       %s\n", detail.text.c_str());
    all = all && ok;
  }
  return all ? 0 : 1;
}
