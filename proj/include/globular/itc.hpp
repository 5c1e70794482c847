#pragma once

#include <concepts>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "globular/error.hpp"

namespace globular {

// The identity type category contract: a category with a weak factorization
// system (L, R), a terminal object whose bang maps are R-maps, pullbacks of
// cospans whose designated right leg is an R-map, L-maps stable under such
// pullbacks, and an algorithmic diagonal filler for (L, R) squares.
//
// Backends expose value types Obj/Mor plus nested Factorization {mid, left,
// right} and PullbackSquare {apex, p, q} result structs. All operations are
// pure; backends are shareable read-only.
template <typename B>
concept IdentityTypeCategory = requires(const B& b, const typename B::Obj& x,
                                        const typename B::Mor& f,
                                        const typename B::Mor& g,
                                        const typename B::Factorization& fac,
                                        const typename B::PullbackSquare& pb) {
  { b.terminal() } -> std::convertible_to<typename B::Obj>;
  { b.to_terminal(x) } -> std::convertible_to<typename B::Mor>;
  { b.identity(x) } -> std::convertible_to<typename B::Mor>;
  { b.compose(f, g) } -> std::convertible_to<typename B::Mor>;
  { b.dom(f) } -> std::convertible_to<typename B::Obj>;
  { b.cod(f) } -> std::convertible_to<typename B::Obj>;
  { b.obj_equal(x, x) } -> std::convertible_to<bool>;
  { b.mor_equal(f, g) } -> std::convertible_to<bool>;
  { b.is_L(f) } -> std::convertible_to<bool>;
  { b.is_R(f) } -> std::convertible_to<bool>;
  { b.factorize(f) } -> std::convertible_to<typename B::Factorization>;
  { fac.mid } -> std::convertible_to<typename B::Obj>;
  { fac.left } -> std::convertible_to<typename B::Mor>;
  { fac.right } -> std::convertible_to<typename B::Mor>;
  { b.pullback(f, g) } -> std::convertible_to<typename B::PullbackSquare>;
  { pb.apex } -> std::convertible_to<typename B::Obj>;
  { pb.p } -> std::convertible_to<typename B::Mor>;
  { pb.q } -> std::convertible_to<typename B::Mor>;
  { b.mediate(pb, f, g) } -> std::convertible_to<typename B::Mor>;
  { b.lift(f, g, f, g) } -> std::convertible_to<typename B::Mor>;
  { b.describe(f) } -> std::convertible_to<std::string>;
};

// A commuting square prepared for the lifting law: left leg in L, right leg
// in R, top: dom(l) -> dom(r), bottom: cod(l) -> cod(r).
template <typename B>
struct LiftSample {
  typename B::Mor l, r, top, bottom;
};

// A cospan prepared for the stability law: l in L and r in R sharing a
// codomain; the pullback of l along r must land back in L.
template <typename B>
struct StabilitySample {
  typename B::Mor l, r;
};

template <typename B>
struct SampleSet {
  std::vector<typename B::Obj> objects;
  std::vector<typename B::Mor> morphisms;
  std::vector<LiftSample<B>> squares;
  std::vector<StabilitySample<B>> cospans;
};

struct LawCheck {
  std::string law;
  std::uint64_t cases = 0;
  bool passed = true;
  std::string witness;  // first failing datum, empty when passed
};

// How a class membership claim was established. Backends that cannot afford
// an instance-exhaustive check may answer constructively: the morphism
// carries a verified witness algorithm instead. Exposed through the optional
// l_certificate / r_certificate backend hooks.
struct MembershipCertificate {
  bool holds = false;
  std::string mode;  // "exhaustive" or "constructive"
  std::uint64_t instances = 0;
};

template <typename B>
  requires IdentityTypeCategory<B>
MembershipCertificate certify_L(const B& b, const typename B::Mor& f) {
  if constexpr (requires { b.l_certificate(f); }) {
    return b.l_certificate(f);
  } else {
    return MembershipCertificate{b.is_L(f), "exhaustive", 0};
  }
}

template <typename B>
  requires IdentityTypeCategory<B>
MembershipCertificate certify_R(const B& b, const typename B::Mor& f) {
  if constexpr (requires { b.r_certificate(f); }) {
    return b.r_certificate(f);
  } else {
    return MembershipCertificate{b.is_R(f), "exhaustive", 0};
  }
}

struct LawReport {
  bool passed = true;
  std::vector<LawCheck> checks;
};

// Runs every contract law on the given samples and reports pass/fail per law
// with the first failing datum. Report-valued: sampler or backend defects
// become failures, not exceptions.
template <typename B, typename S = B>
  requires IdentityTypeCategory<B> &&
           std::same_as<typename B::Obj, typename S::Obj> &&
           std::same_as<typename B::Mor, typename S::Mor>
LawReport law_suite(const B& b, const SampleSet<S>& samples) {
  LawReport report;
  auto run = [&](const std::string& law, auto&& body) {
    LawCheck check;
    check.law = law;
    try {
      body(check);
    } catch (const std::exception& e) {
      check.passed = false;
      if (check.witness.empty())
        check.witness = std::string("unexpected error: ") + e.what();
    }
    report.passed = report.passed && check.passed;
    report.checks.push_back(std::move(check));
  };
  auto fail_with = [](LawCheck& check, std::string witness) {
    if (check.passed) {
      check.passed = false;
      check.witness = std::move(witness);
    }
  };

  run("factorization", [&](LawCheck& check) {
    for (const auto& f : samples.morphisms) {
      ++check.cases;
      const auto fac = b.factorize(f);
      if (!b.mor_equal(b.compose(fac.right, fac.left), f))
        return fail_with(check, "right∘left != f for " + b.describe(f));
      if (!b.is_L(fac.left))
        return fail_with(check, "left factor not in L for " + b.describe(f));
      if (!b.is_R(fac.right))
        return fail_with(check, "right factor not in R for " + b.describe(f));
    }
  });

  run("factorization-deterministic", [&](LawCheck& check) {
    for (const auto& f : samples.morphisms) {
      ++check.cases;
      const auto fac1 = b.factorize(f);
      const auto fac2 = b.factorize(f);
      if (!b.mor_equal(fac1.left, fac2.left) ||
          !b.mor_equal(fac1.right, fac2.right))
        return fail_with(check, "factorize not reproducible for " + b.describe(f));
    }
  });

  run("terminal-bang-is-R", [&](LawCheck& check) {
    for (const auto& x : samples.objects) {
      ++check.cases;
      const auto bang = b.to_terminal(x);
      if (!b.obj_equal(b.cod(bang), b.terminal()))
        return fail_with(check, "bang does not land in the terminal object");
      if (!b.is_R(bang))
        return fail_with(check, "bang map not in R for " + b.describe(bang));
    }
  });

  run("identities-in-both-classes", [&](LawCheck& check) {
    for (const auto& x : samples.objects) {
      ++check.cases;
      const auto id = b.identity(x);
      if (!b.is_L(id) || !b.is_R(id))
        return fail_with(check, "identity not in L∩R for " + b.describe(id));
    }
  });

  run("lift-totality", [&](LawCheck& check) {
    for (const auto& sq : samples.squares) {
      ++check.cases;
      if (!b.is_L(sq.l))
        return fail_with(check, "sample left leg not in L: " + b.describe(sq.l));
      if (!b.is_R(sq.r))
        return fail_with(check, "sample right leg not in R: " + b.describe(sq.r));
      if (!b.mor_equal(b.compose(sq.r, sq.top), b.compose(sq.bottom, sq.l)))
        return fail_with(check, "sample square does not commute: " +
                                    b.describe(sq.top));
      const auto d = b.lift(sq.l, sq.r, sq.top, sq.bottom);
      if (!b.mor_equal(b.compose(d, sq.l), sq.top))
        return fail_with(check, "upper lift triangle fails for " + b.describe(d));
      if (!b.mor_equal(b.compose(sq.r, d), sq.bottom))
        return fail_with(check, "lower lift triangle fails for " + b.describe(d));
      const auto d2 = b.lift(sq.l, sq.r, sq.top, sq.bottom);
      if (!b.mor_equal(d, d2))
        return fail_with(check, "lift not reproducible for " + b.describe(d));
    }
  });

  run("R-pullbacks-exist", [&](LawCheck& check) {
    for (const auto& co : samples.cospans) {
      ++check.cases;
      if (!b.obj_equal(b.cod(co.l), b.cod(co.r)))
        return fail_with(check, "sample cospan legs do not share a codomain");
      const auto pb = b.pullback(co.l, co.r);
      if (!b.mor_equal(b.compose(co.l, pb.p), b.compose(co.r, pb.q)))
        return fail_with(check,
                         "pullback square does not commute over " + b.describe(co.l));
    }
  });

  run("L-stable-under-R-pullback", [&](LawCheck& check) {
    for (const auto& co : samples.cospans) {
      ++check.cases;
      if (!b.is_L(co.l))
        return fail_with(check, "sample cospan left leg not in L: " + b.describe(co.l));
      if (!b.is_R(co.r))
        return fail_with(check, "sample cospan right leg not in R: " + b.describe(co.r));
      const auto pb = b.pullback(co.l, co.r);
      if (!b.is_L(pb.q))
        return fail_with(check, "pullback of L-map along R-map is not an L-map: " +
                                    b.describe(pb.q));
    }
  });

  return report;
}

}  // namespace globular
