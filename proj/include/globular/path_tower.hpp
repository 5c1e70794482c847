#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "globular/error.hpp"
#include "globular/itc.hpp"

namespace globular {

// One verified fact about a tower level, with the mode that established it.
// "exhaustive" means every instance of the defining property was checked;
// "constructive" means the fact is carried by a verified witness algorithm
// or an equivalent equation on a smaller domain.
struct TowerCertificate {
  std::uint32_t level = 0;
  std::string subject;
  std::string property;  // "L", "R", "equation", "jointly-monic"
  std::string mode;      // "exhaustive" or "constructive"
  bool holds = false;
};

// The iterated path object tower over a base object. Level 1 factors the
// diagonal into the product (taken as pullback over the terminal object);
// level n+1 factors the cone of two identities into the pullback of the
// level-n pairing against itself. Source and target are the boundary
// projections composed with the pairing, and the factorization's left map
// is the reflexivity section.
//
// Levels are memoized and extend() grows the tower in place. Every invariant
// is certified during construction; a violation throws BackendLawFailure, so
// a tower that exists is a valid reflexive globular object over its backend.
template <typename B>
  requires IdentityTypeCategory<B>
class PathTower {
 public:
  using Obj = typename B::Obj;
  using Mor = typename B::Mor;
  using Square = typename B::PullbackSquare;

  PathTower(B backend, Obj base, std::uint32_t truncation)
      : b_(std::move(backend)), base_(std::move(base)) {
    extend(truncation);
  }

  void extend(std::uint32_t truncation) {
    while (levels_.size() < truncation) push_level();
  }

  std::uint32_t truncation() const {
    return static_cast<std::uint32_t>(levels_.size());
  }
  const B& backend() const { return b_; }

  // X_n; level 0 is the base object.
  const Obj& level(std::uint32_t n) const {
    require(n <= levels_.size(), ErrorKind::OutOfRange,
            "tower level " + std::to_string(n) + " exceeds truncation");
    return n == 0 ? base_ : levels_[n - 1].glob;
  }
  // s_n, t_n: X_n -> X_{n-1}, for 1 <= n <= truncation.
  const Mor& src(std::uint32_t n) const { return at(n).src; }
  const Mor& tgt(std::uint32_t n) const { return at(n).tgt; }
  // i_{n-1,n}: X_{n-1} -> X_n.
  const Mor& refl(std::uint32_t n) const { return at(n).refl; }
  // The pairing X_n -> B_n; boundary(n) is B_n with projections p, q.
  const Mor& pairing(std::uint32_t n) const { return at(n).pairing; }
  const Square& boundary(std::uint32_t n) const { return at(n).boundary; }
  const std::vector<TowerCertificate>& certificates() const { return certs_; }

 private:
  struct Level {
    Square boundary;
    Obj glob;
    Mor refl, pairing, src, tgt;
  };

  const Level& at(std::uint32_t n) const {
    require(n >= 1 && n <= levels_.size(), ErrorKind::OutOfRange,
            "tower level " + std::to_string(n) + " exceeds truncation");
    return levels_[n - 1];
  }

  std::optional<bool> try_equal(const Mor& x, const Mor& y) const {
    try {
      return b_.mor_equal(x, y);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::OutOfRange) return std::nullopt;
      throw;
    }
  }

  void certify(std::uint32_t n, std::string subject, std::string property,
               std::string mode, bool holds) {
    certs_.push_back(
        {n, std::move(subject), std::move(property), std::move(mode), holds});
    const TowerCertificate& c = certs_.back();
    require(c.holds, ErrorKind::BackendLawFailure,
            "tower invariant failed at level " + std::to_string(n) + ": " +
                c.subject);
  }

  // Checks x = y directly when the domain sweep fits the backend's budget,
  // else checks the equivalent reduced equation (both sides factor through
  // it by construction). Refusing both budgets is an error, not a pass.
  void certify_equation(std::uint32_t n, const std::string& subject,
                        const Mor& x, const Mor& y,
                        const std::optional<std::pair<Mor, Mor>>& reduced) {
    if (auto full = try_equal(x, y)) {
      certify(n, subject, "equation", "exhaustive", *full);
      return;
    }
    if (reduced) {
      if (auto red = try_equal(reduced->first, reduced->second)) {
        certify(n, subject, "equation", "constructive", *red);
        return;
      }
    }
    require(false, ErrorKind::OutOfRange,
            "cannot certify " + subject + " at level " + std::to_string(n) +
                " within the verification budget");
  }

  void push_level() {
    const std::uint32_t n = static_cast<std::uint32_t>(levels_.size()) + 1;
    const Obj& prev = level(n - 1);
    const Mor prev_id = b_.identity(prev);

    Level lv;
    lv.boundary =
        n == 1 ? b_.pullback(b_.to_terminal(prev), b_.to_terminal(prev))
               : b_.pullback(levels_[n - 2].pairing, levels_[n - 2].pairing);
    const Mor diag = b_.mediate(lv.boundary, prev_id, prev_id);
    auto fac = b_.factorize(diag);
    lv.glob = fac.mid;
    lv.refl = fac.left;
    lv.pairing = fac.right;
    lv.src = b_.compose(lv.boundary.p, lv.pairing);
    lv.tgt = b_.compose(lv.boundary.q, lv.pairing);

    // Class memberships.
    {
      const auto c = certify_L(b_, lv.refl);
      certify(n, "i", "L", c.mode, c.holds);
    }
    auto r_cert = [&](const Mor& m, const std::string& subject) {
      const auto c = certify_R(b_, m);
      certify(n, subject, "R", c.mode, c.holds);
    };
    r_cert(lv.pairing, "(s,t)");
    r_cert(lv.src, "s");
    r_cert(lv.tgt, "t");

    // Reflexivity: i is a common section of s and t, and recomposes to the
    // factored diagonal.
    certify_equation(n, "s o i = id", b_.compose(lv.src, lv.refl), prev_id,
                     std::nullopt);
    certify_equation(n, "t o i = id", b_.compose(lv.tgt, lv.refl), prev_id,
                     std::nullopt);
    certify_equation(n, "s o i = t o i", b_.compose(lv.src, lv.refl),
                     b_.compose(lv.tgt, lv.refl), std::nullopt);
    certify_equation(n, "(s,t) o i = diagonal",
                     b_.compose(lv.pairing, lv.refl), diag, std::nullopt);

    if constexpr (requires {
      b_.jointly_monic(lv.boundary.p, lv.boundary.q);
    }) {
      certify(n, "boundary projections", "jointly-monic", "exhaustive",
              b_.jointly_monic(lv.boundary.p, lv.boundary.q));
    } else {
      certify(n, "boundary projections", "jointly-monic", "constructive",
              b_.mor_equal(
                  b_.mediate(lv.boundary, lv.boundary.p, lv.boundary.q),
                  b_.identity(lv.boundary.apex)));
    }

    // Globular identities; the reduced form lives on the boundary object,
    // which stays a full level smaller than the cells.
    if (n >= 2) {
      const Level& below = levels_[n - 2];
      auto reduced = [&](const Mor& m) {
        return std::make_optional(
            std::make_pair(b_.compose(m, lv.boundary.p),
                           b_.compose(m, lv.boundary.q)));
      };
      certify_equation(n, "s o s = s o t", b_.compose(below.src, lv.src),
                       b_.compose(below.src, lv.tgt), reduced(below.src));
      certify_equation(n, "t o s = t o t", b_.compose(below.tgt, lv.src),
                       b_.compose(below.tgt, lv.tgt), reduced(below.tgt));
    }

    levels_.push_back(std::move(lv));
  }

  B b_;
  Obj base_;
  std::vector<Level> levels_;
  std::vector<TowerCertificate> certs_;
};

}  // namespace globular
