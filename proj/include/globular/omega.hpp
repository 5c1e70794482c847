#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "globular/error.hpp"
#include "globular/itc.hpp"
#include "globular/path_tower.hpp"
#include "globular/theta0.hpp"

namespace globular {

// --- structure map chains over a tower ---------------------------------------

// Iterated source map X_hi -> X_lo.
template <typename B>
  requires IdentityTypeCategory<B>
typename B::Mor src_chain(const PathTower<B>& tw, int hi, int lo) {
  require(0 <= lo && lo <= hi && hi <= static_cast<int>(tw.truncation()),
          ErrorKind::OutOfRange, "source chain endpoints out of range");
  const B& b = tw.backend();
  auto m = b.identity(tw.level(hi));
  for (int d = hi; d > lo; --d) m = b.compose(tw.src(d), m);
  return m;
}

// Iterated target map X_hi -> X_lo.
template <typename B>
  requires IdentityTypeCategory<B>
typename B::Mor tgt_chain(const PathTower<B>& tw, int hi, int lo) {
  require(0 <= lo && lo <= hi && hi <= static_cast<int>(tw.truncation()),
          ErrorKind::OutOfRange, "target chain endpoints out of range");
  const B& b = tw.backend();
  auto m = b.identity(tw.level(hi));
  for (int d = hi; d > lo; --d) m = b.compose(tw.tgt(d), m);
  return m;
}

// Iterated reflexivity X_lo -> X_hi; refl_chain(tw, 0, n) is the cell
// "constant at a point", the structure map every operation must preserve.
template <typename B>
  requires IdentityTypeCategory<B>
typename B::Mor refl_chain(const PathTower<B>& tw, int lo, int hi) {
  require(0 <= lo && lo <= hi && hi <= static_cast<int>(tw.truncation()),
          ErrorKind::OutOfRange, "reflexivity chain endpoints out of range");
  const B& b = tw.backend();
  auto m = b.identity(tw.level(lo));
  for (int d = lo + 1; d <= hi; ++d) m = b.compose(tw.refl(d), m);
  return m;
}

// --- globular products under the base point ----------------------------------

// The limit of the zig-zag named by a table, built stepwise left to right.
// Each step pulls the target composite of the prefix's final projection back
// against the source composite of the next segment. `under` is the canonical
// point X_0 -> apex; `section` at each step is the right-inverse of the step
// projection whose L-membership carries the induction.
template <typename B>
struct GlobularProduct {
  Table table;
  typename B::Obj apex;
  std::vector<typename B::Mor> projections;  // one per segment, into X_{n_j}
  typename B::Mor under;                     // X_0 -> apex
  MembershipCertificate under_l;
  MembershipCertificate final_r;  // for the last projection
  struct Step {
    typename B::PullbackSquare square;  // p to the prefix apex, q to the new segment
    typename B::Mor section;            // prefix apex -> step apex, section of p
    MembershipCertificate section_l;
  };
  std::vector<Step> steps;
};

// Mediates a cone (one leg per segment, wall equations implied) into the
// product apex by walking the step pullbacks.
template <typename B>
  requires IdentityTypeCategory<B>
typename B::Mor mediate_into(const B& b, const GlobularProduct<B>& prod,
                             const std::vector<typename B::Mor>& legs) {
  require(legs.size() == table_segments(prod.table), ErrorKind::DimensionMismatch,
          "cone must have one leg per segment of " + table_to_string(prod.table));
  auto cur = legs[0];
  for (std::size_t j = 0; j < prod.steps.size(); ++j)
    cur = b.mediate(prod.steps[j].square, cur, legs[j + 1]);
  return cur;
}

template <typename B>
  requires IdentityTypeCategory<B>
GlobularProduct<B> glob_product_under(const PathTower<B>& tw, const Table& nbar) {
  validate_table(nbar);
  require(table_dim(nbar) < static_cast<int>(tw.truncation()),
          ErrorKind::TruncationExceeded,
          "table " + table_to_string(nbar) + " needs tower truncation above " +
              std::to_string(table_dim(nbar)));
  const B& b = tw.backend();

  GlobularProduct<B> out;
  out.table = nbar;
  out.apex = tw.level(nbar[0]);
  out.projections.push_back(b.identity(out.apex));
  out.under = refl_chain(tw, 0, nbar[0]);

  auto settle = [&](bool ok, const std::string& what) {
    require(ok, ErrorKind::BackendLawFailure,
            "globular product " + table_to_string(nbar) + ": " + what);
  };

  for (std::size_t j = 0; 2 * j + 2 < nbar.size(); ++j) {
    const int seg = nbar[2 * j];        // last segment of the prefix
    const int wall = nbar[2 * j + 1];   // gluing dimension
    const int next = nbar[2 * j + 2];   // incoming segment

    const auto left = b.compose(tgt_chain(tw, seg, wall), out.projections.back());
    const auto right = src_chain(tw, next, wall);
    auto sq = b.pullback(left, right);

    // Section of the prefix projection: ride the wall cell back up along
    // reflexivity. Its legs commute because the source chain retracts the
    // reflexivity chain.
    const auto lifted_wall = b.compose(refl_chain(tw, wall, next), left);
    auto section = b.mediate(sq, b.identity(out.apex), lifted_wall);
    settle(b.mor_equal(b.compose(sq.p, section), b.identity(out.apex)),
           "step section does not split the prefix projection");
    settle(b.mor_equal(b.compose(sq.q, section), lifted_wall),
           "step section misses the reflexivity cell");
    auto section_l = certify_L(b, section);
    settle(section_l.holds, "step section is not an L-map");

    // The point of the next product, characterized two ways: stepping the
    // previous point through the section, and mediating the cone of points.
    auto mediated = b.mediate(sq, out.under, refl_chain(tw, 0, next));
    settle(b.mor_equal(b.compose(section, out.under), mediated),
           "section route and mediated route to the point disagree");

    if constexpr (requires { b.jointly_monic(sq.p, sq.q); }) {
      settle(b.jointly_monic(sq.p, sq.q),
             "step projections are not jointly monic");
    } else {
      settle(b.mor_equal(b.mediate(sq, sq.p, sq.q), b.identity(sq.apex)),
             "step projections do not mediate to the identity");
    }

    for (auto& proj : out.projections) proj = b.compose(proj, sq.p);
    out.projections.push_back(sq.q);
    out.under = mediated;
    out.apex = sq.apex;
    out.steps.push_back({std::move(sq), std::move(section), section_l});
  }

  for (std::size_t j = 0; j < out.projections.size(); ++j)
    settle(b.mor_equal(b.compose(out.projections[j], out.under),
                       refl_chain(tw, 0, nbar[2 * j])),
           "projection " + std::to_string(j) + " does not restrict the point");

  out.under_l = certify_L(b, out.under);
  settle(out.under_l.holds, "point inclusion is not an L-map");
  out.final_r = certify_R(b, out.projections.back());
  settle(out.final_r.holds, "final projection is not an R-map");
  return out;
}

// The step section: right-inverse of the prefix projection constructed while
// gluing segment `step + 1`.
template <typename B>
const typename B::Mor& section_iprime(const GlobularProduct<B>& prod,
                                      std::size_t step) {
  require(step < prod.steps.size(), ErrorKind::OutOfRange,
          "product " + table_to_string(prod.table) + " has no step " +
              std::to_string(step));
  return prod.steps[step].section;
}

// --- operation witnesses ------------------------------------------------------

// A realized operation: h maps the product of the domain table into the cells
// one dimension above its parallel pair, and recovers the pair exactly under
// source and target.
template <typename B>
struct OpWitness {
  std::string name;
  Table dom_table;
  std::uint32_t target_dim = 0;  // h lands in X_{target_dim}
  typename B::Mor h;
  typename B::Mor lhs, rhs;  // s∘h = lhs, t∘h = rhs
};

// Memoizing front end for the operation algebra over one tower. Products and
// witnesses are built once and shared; all stored morphisms commute with the
// point inclusions.
template <typename B>
  requires IdentityTypeCategory<B>
class EndTheoryHandle {
 public:
  using Mor = typename B::Mor;

  explicit EndTheoryHandle(const PathTower<B>& tower) : tw_(&tower) {}

  const PathTower<B>& tower() const { return *tw_; }

  const GlobularProduct<B>& product(const Table& nbar) {
    auto it = products_.find(nbar);
    if (it == products_.end())
      it = products_.emplace(nbar, glob_product_under(*tw_, nbar)).first;
    return it->second;
  }

  // Replaces the memoized product for its table. Reports built on this handle
  // re-verify the stored certificates, which is how corrupted data surfaces;
  // regular construction never needs this.
  void inject_product(GlobularProduct<B> prod) {
    products_.insert_or_assign(prod.table, std::move(prod));
  }

  bool has_operation(const std::string& name) const {
    return ops_.count(name) != 0;
  }

  const OpWitness<B>& operation(const std::string& name) const {
    auto it = ops_.find(name);
    require(it != ops_.end(), ErrorKind::MissingPrerequisite,
            "operation '" + name + "' has not been synthesized");
    return it->second;
  }

  const OpWitness<B>& store(OpWitness<B> w) {
    return ops_.insert_or_assign(w.name, std::move(w)).first->second;
  }

  // Lifts a parallel pair f, g: A(nbar) -> X_m through the boundary pairing
  // one dimension up. The pair must agree on its own boundary and restrict to
  // the constant cell at the point.
  OpWitness<B> lift_parallel(const Table& nbar, const Mor& f, const Mor& g,
                             std::string name) {
    const B& b = tw_->backend();
    const auto& prod = product(nbar);

    require(b.obj_equal(b.dom(f), prod.apex) && b.obj_equal(b.dom(g), prod.apex),
            ErrorKind::NotParallel,
            "pair must start at the product of " + table_to_string(nbar));
    require(b.obj_equal(b.cod(f), b.cod(g)), ErrorKind::NotParallel,
            "pair legs land in different objects");
    int m = -1;
    for (std::uint32_t d = 0; d <= tw_->truncation(); ++d)
      if (b.obj_equal(b.cod(f), tw_->level(d))) {
        m = static_cast<int>(d);
        break;
      }
    require(m >= 0, ErrorKind::NotParallel, "pair does not land on a tower level");
    require(m + 1 <= static_cast<int>(tw_->truncation()),
            ErrorKind::TruncationExceeded,
            "lifting from dimension " + std::to_string(m) +
                " needs a taller tower");

    if (m >= 1) {
      const bool same_src = b.mor_equal(b.compose(src_chain(*tw_, m, m - 1), f),
                                        b.compose(src_chain(*tw_, m, m - 1), g));
      const bool same_tgt = b.mor_equal(b.compose(tgt_chain(*tw_, m, m - 1), f),
                                        b.compose(tgt_chain(*tw_, m, m - 1), g));
      require(same_src && same_tgt, ErrorKind::NotParallel,
              "pair legs have different boundaries");
    }

    const auto point_m = refl_chain(*tw_, 0, m);
    const auto point_m1 = refl_chain(*tw_, 0, m + 1);
    require(b.mor_equal(b.compose(f, prod.under), point_m),
            ErrorKind::NotUnderA0, "first leg does not restrict to the point");
    require(b.mor_equal(b.compose(g, prod.under), point_m),
            ErrorKind::NotUnderA0, "second leg does not restrict to the point");

    const auto& boundary = tw_->boundary(m + 1);
    const auto pair_map = b.mediate(boundary, f, g);
    require(b.mor_equal(b.compose(tw_->pairing(m + 1), point_m1),
                        b.compose(pair_map, prod.under)),
            ErrorKind::NotUnderA0, "lifting square does not commute");

    OpWitness<B> w;
    w.name = std::move(name);
    w.dom_table = nbar;
    w.target_dim = static_cast<std::uint32_t>(m + 1);
    w.h = b.lift(prod.under, tw_->pairing(m + 1), point_m1, pair_map);
    w.lhs = f;
    w.rhs = g;

    auto settle = [&](bool ok, const char* what) {
      require(ok, ErrorKind::BackendLawFailure,
              "witness '" + w.name + "': " + what);
    };
    settle(b.mor_equal(b.compose(tw_->src(m + 1), w.h), f),
           "source triangle fails");
    settle(b.mor_equal(b.compose(tw_->tgt(m + 1), w.h), g),
           "target triangle fails");
    settle(b.mor_equal(b.compose(w.h, prod.under), point_m1),
           "witness does not restrict to the point");
    return w;
  }

 private:
  const PathTower<B>* tw_;
  std::map<Table, GlobularProduct<B>> products_;
  std::map<std::string, OpWitness<B>> ops_;
};

// --- the named operation registry ---------------------------------------------

// Synthesizes one of the fixed operation menu, memoized by name:
//   unit   (0) -> dim 1   constant path at a point
//   m      (1,0,1) -> dim 1   binary composition
//   w      (1) -> dim 1   inverse
//   lunit  (1) -> dim 2   left unit law
//   runit  (1) -> dim 2   right unit law
//   a      (1,0,1,0,1) -> dim 2   associativity
//   vcomp  (2,1,2) -> dim 2   vertical composition of 2-cells
// lunit/runit need unit and m first; a needs m. Prerequisites are reported,
// not implied, so callers control what gets built.
template <typename B>
  requires IdentityTypeCategory<B>
const OpWitness<B>& synth_operation(EndTheoryHandle<B>& handle,
                                    const std::string& name) {
  if (handle.has_operation(name)) return handle.operation(name);
  const PathTower<B>& tw = handle.tower();
  const B& b = tw.backend();

  auto need = [&](const char* dep) {
    require(handle.has_operation(dep), ErrorKind::MissingPrerequisite,
            "operation '" + name + "' needs '" + dep + "' first");
  };

  if (name == "unit") {
    const auto id0 = b.identity(tw.level(0));
    return handle.store(handle.lift_parallel(Table{0}, id0, id0, name));
  }
  if (name == "m") {
    const auto& prod = handle.product(Table{1, 0, 1});
    return handle.store(handle.lift_parallel(
        Table{1, 0, 1}, b.compose(tw.src(1), prod.projections[0]),
        b.compose(tw.tgt(1), prod.projections[1]), name));
  }
  if (name == "w") {
    const auto& prod = handle.product(Table{1});
    return handle.store(handle.lift_parallel(
        Table{1}, b.compose(tw.tgt(1), prod.projections[0]),
        b.compose(tw.src(1), prod.projections[0]), name));
  }
  if (name == "lunit" || name == "runit") {
    need("unit");
    need("m");
    const auto& unit = handle.operation("unit");
    const auto& comp = handle.operation("m");
    const auto& pair_prod = handle.product(Table{1, 0, 1});
    const auto id1 = b.identity(tw.level(1));
    const auto padded =
        name == "lunit"
            ? mediate_into(b, pair_prod,
                           {b.compose(unit.h, tw.src(1)), id1})
            : mediate_into(b, pair_prod,
                           {id1, b.compose(unit.h, tw.tgt(1))});
    return handle.store(handle.lift_parallel(
        Table{1}, b.compose(comp.h, padded), id1, name));
  }
  if (name == "a") {
    need("m");
    const auto& comp = handle.operation("m");
    const auto& triple = handle.product(Table{1, 0, 1, 0, 1});
    const auto& pair_prod = handle.product(Table{1, 0, 1});
    const auto& proj = triple.projections;
    const auto head = mediate_into(b, pair_prod, {proj[0], proj[1]});
    const auto tail = mediate_into(b, pair_prod, {proj[1], proj[2]});
    const auto left_first =
        mediate_into(b, pair_prod, {b.compose(comp.h, head), proj[2]});
    const auto right_first =
        mediate_into(b, pair_prod, {proj[0], b.compose(comp.h, tail)});
    return handle.store(handle.lift_parallel(
        Table{1, 0, 1, 0, 1}, b.compose(comp.h, left_first),
        b.compose(comp.h, right_first), name));
  }
  if (name == "vcomp") {
    const auto& prod = handle.product(Table{2, 1, 2});
    return handle.store(handle.lift_parallel(
        Table{2, 1, 2}, b.compose(tw.src(2), prod.projections[0]),
        b.compose(tw.tgt(2), prod.projections[1]), name));
  }
  fail(ErrorKind::UnknownOperation, "no operation named '" + name + "'");
}

// --- evaluation of pasting-shape morphisms ------------------------------------

namespace detail {

// Which segment of a sum presents a carrier cell, and how: 0 = source
// hemisphere, 1 = target hemisphere, 2 = the segment's top cell. Cells shared
// between segments resolve to the leftmost presentation; the backend values
// agree across presentations by the wall equations of the product.
struct CellPresentation {
  int segment = 0;
  int kind = 0;
};

inline CellPresentation present_cell(const GlobularSum& sum, int dim, int cell) {
  const int nseg = static_cast<int>(sum.cocone.size());
  for (int j = 0; j < nseg; ++j) {
    const int seg_dim = sum.table[2 * j];
    if (dim > seg_dim) continue;
    if (dim == seg_dim) {
      if (sum.cocone[j][dim][0] == cell) return {j, 2};
    } else {
      for (int c = 0; c < 2; ++c)
        if (sum.cocone[j][dim][c] == cell) return {j, c};
    }
  }
  fail(ErrorKind::OutOfRange, "cell is not presented by any segment");
}

}  // namespace detail

// Interprets a pasting-shape morphism contravariantly as the induced map of
// products: each domain segment reads off where its top cell lands, and the
// resulting projection-and-chain legs mediate into the domain's product.
template <typename B>
  requires IdentityTypeCategory<B>
typename B::Mor eval_algebra(EndTheoryHandle<B>& handle,
                             const Theta0Morphism& theta) {
  const PathTower<B>& tw = handle.tower();
  const B& b = tw.backend();
  const auto& dom_prod = handle.product(theta.dom_table);
  const auto& cod_prod = handle.product(theta.cod_table);
  const auto dom_sum = glob_sum(theta.dom_table);
  const auto cod_sum = glob_sum(theta.cod_table);

  std::vector<typename B::Mor> legs;
  const int nseg = static_cast<int>(table_segments(theta.dom_table));
  for (int j = 0; j < nseg; ++j) {
    const int d = theta.dom_table[2 * j];
    const int top = dom_sum.cocone[j][d][0];
    const int image = theta.map.map[d][top];
    const auto pres = detail::present_cell(cod_sum, d, image);
    const int seg_dim = theta.cod_table[2 * pres.segment];
    const auto& proj = cod_prod.projections[pres.segment];
    if (pres.kind == 2)
      legs.push_back(proj);
    else if (pres.kind == 0)
      legs.push_back(b.compose(src_chain(tw, seg_dim, d), proj));
    else
      legs.push_back(b.compose(tgt_chain(tw, seg_dim, d), proj));
  }
  return mediate_into(b, dom_prod, legs);
}

// --- contractibility at desk scale ---------------------------------------------

struct ContractibilityReport {
  int max_dim = 0;
  int max_len = 0;
  std::uint64_t budget = 0;
  std::uint64_t tables_examined = 0;
  std::uint64_t candidates = 0;
  std::uint64_t pairs = 0;
  std::uint64_t lifted = 0;
  bool budget_exhausted = false;
  std::vector<std::string> failures;

  bool all_lifted() const { return failures.empty() && pairs == lifted; }
};

// Sweeps every parallel pair under the point that the operation algebra
// generates at small scale: evaluation legs of all pasting-shape morphisms
// into each table, closed once under the stored operation witnesses. Each
// pair is lifted and verified; defects are reported, never thrown, so a
// corrupted handle yields a failing report rather than a crash.
template <typename B>
  requires IdentityTypeCategory<B>
ContractibilityReport certify_contractible(EndTheoryHandle<B>& handle,
                                           int max_dim, int max_len,
                                           std::uint64_t budget = 4096) {
  const PathTower<B>& tw = handle.tower();
  const B& b = tw.backend();
  ContractibilityReport report;
  report.max_dim = max_dim;
  report.max_len = max_len;
  report.budget = budget;
  require(max_dim < static_cast<int>(tw.truncation()), ErrorKind::TruncationExceeded,
          "contractibility sweep at dimension " + std::to_string(max_dim) +
              " needs a taller tower");

  std::vector<std::string> op_names;
  op_names.reserve(8);
  for (const char* name : {"unit", "m", "w", "lunit", "runit", "a", "vcomp"})
    if (handle.has_operation(name)) op_names.push_back(name);

  for (const Table& nbar : all_tables(max_len, max_dim)) {
    ++report.tables_examined;
    const GlobularProduct<B>* prod = nullptr;
    try {
      prod = &handle.product(nbar);
      const auto under_l = certify_L(b, prod->under);
      if (!under_l.holds)
        report.failures.push_back(table_to_string(nbar) +
                                  ": point inclusion is not an L-map");
      const auto final_r = certify_R(b, prod->projections.back());
      if (!final_r.holds)
        report.failures.push_back(table_to_string(nbar) +
                                  ": final projection is not an R-map");
    } catch (const Error& e) {
      report.failures.push_back(table_to_string(nbar) + ": " + e.what());
      continue;
    }

    std::vector<std::vector<typename B::Mor>> pools(max_dim + 1);
    for (int m = 0; m <= max_dim; ++m) {
      // Base pool: evaluation of every pasting-shape morphism (m) -> nbar.
      auto& pool = pools[m];
      for (const auto& theta : theta0_hom(Table{m}, nbar)) {
        if (report.candidates >= budget) {
          report.budget_exhausted = true;
          break;
        }
        try {
          pool.push_back(eval_algebra(handle, theta));
        } catch (const Error& e) {
          report.failures.push_back(table_to_string(nbar) +
                                    ": evaluation leg failed: " + e.what());
        }
        ++report.candidates;
      }
      // One closure round under the stored witnesses landing in dimension m.
      // Arguments are drawn at each witness's own segment dimension.
      auto known = [&](const typename B::Mor& cand) {
        for (const auto& have : pool)
          if (b.mor_equal(have, cand)) return true;
        return false;
      };
      for (const auto& op_name : op_names) {
        const auto& w = handle.operation(op_name);
        if (static_cast<int>(w.target_dim) != m) continue;
        const int arg_dim = w.dom_table[0];
        bool uniform = true;
        const std::size_t args = table_segments(w.dom_table);
        for (std::size_t j = 0; j < args; ++j)
          uniform = uniform && w.dom_table[2 * j] == arg_dim;
        if (!uniform || arg_dim > max_dim) continue;
        const auto& wprod = handle.product(w.dom_table);
        const std::size_t seg_pool = pools[arg_dim].size();
        if (seg_pool == 0 || args == 0) continue;
        std::vector<std::size_t> pick(args, 0);
        bool carry = false;
        while (!carry) {
          if (report.candidates >= budget) {
            report.budget_exhausted = true;
            break;
          }
          std::vector<typename B::Mor> legs;
          legs.reserve(args);
          for (std::size_t j = 0; j < args; ++j)
            legs.push_back(pools[arg_dim][pick[j]]);
          try {
            auto cand = b.compose(w.h, mediate_into(b, wprod, legs));
            ++report.candidates;
            if (!known(cand)) pool.push_back(std::move(cand));
          } catch (const Error&) {
            // wall equations reject this leg tuple
          }
          std::size_t j = 0;
          for (; j < args; ++j) {
            if (++pick[j] < seg_pool) break;
            pick[j] = 0;
          }
          carry = j == args;
        }
      }

      const auto point_m = refl_chain(tw, 0, m);
      auto parallel = [&](const typename B::Mor& f, const typename B::Mor& g) {
        if (m == 0) return true;
        return b.mor_equal(b.compose(tw.src(m), f), b.compose(tw.src(m), g)) &&
               b.mor_equal(b.compose(tw.tgt(m), f), b.compose(tw.tgt(m), g));
      };
      auto under_point = [&](const typename B::Mor& f) {
        return b.mor_equal(b.compose(f, prod->under), point_m);
      };
      for (const auto& f : pool)
        for (const auto& g : pool) {
          bool eligible = false;
          try {
            eligible = under_point(f) && under_point(g) && parallel(f, g);
          } catch (const Error& e) {
            report.failures.push_back(table_to_string(nbar) + " at dimension " +
                                      std::to_string(m) +
                                      ": pair screening failed: " + e.what());
            continue;
          }
          if (!eligible) continue;
          ++report.pairs;
          try {
            handle.lift_parallel(nbar, f, g, "contractibility-probe");
            ++report.lifted;
          } catch (const Error& e) {
            report.failures.push_back(table_to_string(nbar) + " at dimension " +
                                      std::to_string(m) + ": " + e.what());
          }
        }
    }
  }
  return report;
}

}  // namespace globular
