#pragma once

// Randomized identity suites: dgla and dg-Leibniz laws on realized derivations,
// closed-form bracket tables against the generic commutator, Phi, B_n and E6.

#include <functional>
#include <string>
#include <vector>

#include "brackets.hpp"
#include "random.hpp"

namespace dgcalc {

struct LawResult {
  std::string name;
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::string witness;  // first failure
  bool pass() const { return failures == 0; }
};

namespace detail {

class LawRunner {
 public:
  explicit LawRunner(std::string name) { r_.name = std::move(name); }
  void check(bool ok, const std::function<std::string()>& witness) {
    ++r_.trials;
    if (ok) return;
    if (r_.failures++ == 0) r_.witness = witness();
  }
  /// Runs `f`, counting a thrown InconsistentRoutes as a failure.
  void guarded(const std::function<bool()>& f, const std::function<std::string()>& witness) {
    try {
      check(f(), witness);
    } catch (const InconsistentRoutes& e) {
      check(false, [&] { return std::string(e.what()); });
    }
  }
  LawResult result() const { return r_; }

 private:
  LawResult r_;
};

/// Negative degrees k with Vect^k nonzero, closest to zero first.
inline std::vector<int> negative_degrees(const AlgebraPtr& alg, std::size_t max_count = 3) {
  int top = 0;
  for (const auto& g : alg->generators()) top = std::max(top, g.degree);
  std::vector<int> out;
  for (int k = -1; k >= -top && out.size() < max_count; --k)
    if (!derivation_basis(alg, k).empty()) out.push_back(k);
  return out;
}

inline Derivation random_negative(const AlgebraPtr& alg, const std::vector<int>& degs, Rng& rng) {
  return random_derivation(alg, degs[pick(rng, degs.size())], rng);
}

inline int derived_degree(const Derivation& d) { return d.degree() + 1; }

}  // namespace detail

/// Graded Jacobi for the commutator: [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|}[b,[a,c]].
inline LawResult check_jacobi(const DgBundle& b, Rng& rng, std::size_t trials) {
  detail::LawRunner run("jacobi");
  const auto& alg = b.algebra();
  auto degs = detail::negative_degrees(alg);
  degs.push_back(0);
  for (std::size_t i = 0; i < trials; ++i) {
    Derivation x = detail::random_negative(alg, degs, rng);
    Derivation y = detail::random_negative(alg, degs, rng);
    Derivation z = detail::random_negative(alg, degs, rng);
    Derivation lhs = commutator(x, commutator(y, z));
    Derivation rhs = commutator(commutator(x, y), z) +
                     Rational(koszul(x.degree(), y.degree())) * commutator(y, commutator(x, z));
    run.check(lhs == rhs, [&] { return to_string(x) + " ; " + to_string(y) + " ; " + to_string(z); });
  }
  return run.result();
}

/// delta<a,b> = <delta a, b> + (-1)^{||a||} <a, delta b> with delta = [Q, -].
inline LawResult check_leibniz_differential(const DgBundle& b, Rng& rng, std::size_t trials) {
  detail::LawRunner run("leibniz-differential");
  const auto& alg = b.algebra();
  const Derivation& q = b.Q();
  const auto degs = detail::negative_degrees(alg);
  if (degs.empty()) return run.result();
  for (std::size_t i = 0; i < trials; ++i) {
    Derivation x = detail::random_negative(alg, degs, rng);
    Derivation y = detail::random_negative(alg, degs, rng);
    Derivation lhs = commutator(q, derived_bracket_generic(q, x, y));
    Derivation rhs = derived_bracket_generic(q, commutator(q, x), y) +
                     Rational(koszul(detail::derived_degree(x), 1)) *
                         derived_bracket_generic(q, x, commutator(q, y));
    run.check(lhs == rhs, [&] { return to_string(x) + " ; " + to_string(y); });
  }
  return run.result();
}

/// <a,<b,c>> = <<a,b>,c> + (-1)^{||a|| ||b||} <b,<a,c>>.
inline LawResult check_leibniz_jacobi(const DgBundle& b, Rng& rng, std::size_t trials) {
  detail::LawRunner run("leibniz-jacobi");
  const auto& alg = b.algebra();
  const Derivation& q = b.Q();
  const auto degs = detail::negative_degrees(alg);
  if (degs.empty()) return run.result();
  auto br = [&](const Derivation& u, const Derivation& v) { return derived_bracket_generic(q, u, v); };
  for (std::size_t i = 0; i < trials; ++i) {
    Derivation x = detail::random_negative(alg, degs, rng);
    Derivation y = detail::random_negative(alg, degs, rng);
    Derivation z = detail::random_negative(alg, degs, rng);
    Derivation lhs = br(x, br(y, z));
    Derivation rhs = br(br(x, y), z) +
                     Rational(koszul(detail::derived_degree(x), detail::derived_degree(y))) * br(y, br(x, z));
    run.check(lhs == rhs, [&] { return to_string(x) + " ; " + to_string(y) + " ; " + to_string(z); });
  }
  return run.result();
}

/// sym^0 acts by derivations: [a, <b,c>] = <[a,b],c> + <b,[a,c]>.
inline LawResult check_sym0_action(const DgBundle& b, Rng& rng, std::size_t trials) {
  detail::LawRunner run("sym0-derivation");
  const auto& alg = b.algebra();
  const Derivation& q = b.Q();
  const auto degs = detail::negative_degrees(alg);
  const auto s0 = sym0_basis(b);
  if (degs.empty() || s0.empty()) return run.result();
  auto br = [&](const Derivation& u, const Derivation& v) { return derived_bracket_generic(q, u, v); };
  for (std::size_t i = 0; i < trials; ++i) {
    Derivation a = random_sym0(alg, s0, rng);
    Derivation y = detail::random_negative(alg, degs, rng);
    Derivation z = detail::random_negative(alg, degs, rng);
    Derivation lhs = commutator(a, br(y, z));
    Derivation rhs = br(commutator(a, y), z) + br(y, commutator(a, z));
    run.check(lhs == rhs, [&] { return to_string(a) + " ; " + to_string(y) + " ; " + to_string(z); });
  }
  return run.result();
}

inline std::vector<LawResult> dgla_laws(const DgBundle& b, Rng& rng, std::size_t trials) {
  return {check_jacobi(b, rng, trials), check_leibniz_differential(b, rng, trials),
          check_leibniz_jacobi(b, rng, trials), check_sym0_action(b, rng, trials)};
}

namespace detail {

inline bool same(const SymElement& display, const Derivation& generic) { return display.realize() == generic; }

inline Derivation generic_derived(const DgBundle& b, const SymElement& x, const SymElement& y) {
  return derived_bracket_generic(b.Q(), x.realize(), y.realize());
}

}  // namespace detail

/// R[n] bracket table, differential and derived brackets against the
/// generic commutators (R[1]: also the Lie algebroid form).
inline LawResult check_rn_tables(const DgBundle& b, const Frame& fr, Rng& rng, std::size_t trials) {
  b.require(Shape::Rn, 0, "check_rn_tables");
  using namespace display;
  detail::LawRunner run("rn-tables");
  const Model& base = b.base();
  const auto& ba = base.algebra();
  const int n = b.n();
  const Element& theta = b.form("Theta");
  auto sym = [&](int k, const Derivation& x, const Element& t) {
    return SymElement(b, k, x, Element(ba), t, Element(ba));
  };
  auto zero_vec = [&](int k) { return Derivation(ba, k == 0 ? -1 : k); };
  for (std::size_t i = 0; i < trials; ++i) {
    const RnPair u0{random_vector(fr, rng), random_element(ba, n, rng)};
    const RnPair u1{random_vector(fr, rng), random_element(ba, n, rng)};
    const RnPair v0{random_vector(fr, rng), random_element(ba, n - 1, rng)};
    const RnPair v1{random_vector(fr, rng), random_element(ba, n - 1, rng)};
    const SymElement U0 = sym(0, u0.x, u0.a), U1 = sym(0, u1.x, u1.a);
    const SymElement V0 = sym(-1, v0.x, v0.a), V1 = sym(-1, v1.x, v1.a);
    auto w = [&] { return to_string(U0) + " ; " + to_string(V0); };
    run.guarded(
        [&] {
          auto r = rn_bracket00(base, u0, u1);
          return detail::same(sym(0, r.x, r.a), commutator(U0.realize(), U1.realize()));
        },
        w);
    run.guarded(
        [&] {
          auto r = rn_bracket01(base, u0, v0);
          return detail::same(sym(-1, r.x, r.a), commutator(U0.realize(), V0.realize()));
        },
        w);
    run.guarded(
        [&] {
          return detail::same(sym(-2, zero_vec(-2), rn_bracket11(v0, v1)),
                              commutator(V0.realize(), V1.realize()));
        },
        w);
    run.guarded(
        [&] {
          auto r = rn_differential(base, theta, v0);
          return detail::same(sym(0, r.x, r.a), commutator(b.Q(), V0.realize()));
        },
        w);
    run.guarded(
        [&] {
          auto r = rn_derived(base, theta, v0, v1);
          return detail::same(sym(-1, r.x, r.a), detail::generic_derived(b, V0, V1));
        },
        w);
    if (n == 1) {
      run.guarded(
          [&] {
            auto r = r1_derived(base, theta, v0, v1);
            return detail::same(sym(-1, r.x, r.a), detail::generic_derived(b, V0, V1));
          },
          w);
    }
    if (n >= 2) {
      const int j = 2 + static_cast<int>(pick(rng, static_cast<std::size_t>(n - 1)));
      const Element eta = random_element(ba, n - j, rng), mu = random_element(ba, n - j, rng);
      const SymElement E = sym(-j, zero_vec(-j), eta), M = sym(-j, zero_vec(-j), mu);
      auto we = [&] { return to_string(V0) + " ; eta = " + to_string(eta); };
      run.guarded(
          [&] {
            return detail::same(sym(-j, zero_vec(-j), rn_bracket0f(base, u0, eta)),
                                commutator(U0.realize(), E.realize()));
          },
          we);
      run.guarded(
          [&] {
            return detail::same(sym(-j - 1, zero_vec(-j - 1), rn_bracket1f(v0, eta)),
                                commutator(V0.realize(), E.realize()));
          },
          we);
      run.guarded(
          [&] {
            return detail::same(sym(-j + 1, zero_vec(-j + 1), rn_differential_form(base, eta)),
                                commutator(b.Q(), E.realize()));
          },
          we);
      run.guarded(
          [&] {
            return detail::same(sym(-j, zero_vec(-j), rn_derived_vf(base, v0, eta)),
                                detail::generic_derived(b, V0, E));
          },
          we);
      run.guarded(
          [&] {
            return detail::same(sym(-j, zero_vec(-j), rn_derived_fv(base, eta, v0)),
                                detail::generic_derived(b, E, V0));
          },
          we);
      run.guarded([&] { return detail::generic_derived(b, M, E).is_zero(); }, we);
    }
    // Structured routes (each call cross-checks against the generic one).
    run.guarded(
        [&] {
          derived_bracket(V0, V1);
          sym_bracket(U0, V1);
          sym_differential(V1);
          return true;
        },
        w);
  }
  return run.result();
}

/// Two-stage tables: differential, brackets and the derived bracket formula.
inline LawResult check_r21_tables(const DgBundle& b, const Frame& fr, Rng& rng, std::size_t trials) {
  b.require(Shape::TwoStage, 0, "check_r21_tables");
  using namespace display;
  detail::LawRunner run("r21-tables");
  const Model& base = b.base();
  const auto& ba = base.algebra();
  const int m = b.n();
  const auto data = TwoStageData::of(b);
  auto sym = [&](int k, const TwoStageElem& e) { return SymElement(b, k, e.x, e.q, e.t, e.tq); };
  auto rnd = [&](int k) {
    return TwoStageElem{random_vector(fr, rng), random_element(ba, m + k, rng), random_element(ba, 2 * m + k, rng),
                        random_element(ba, m + k, rng)};
  };
  for (std::size_t i = 0; i < trials; ++i) {
    const TwoStageElem u0 = rnd(0), u1 = rnd(0), v0 = rnd(-1), v1 = rnd(-1);
    const SymElement U0 = sym(0, u0), U1 = sym(0, u1), V0 = sym(-1, v0), V1 = sym(-1, v1);
    const Element h = random_element(ba, 2 * m - 2, rng);
    const SymElement Hh(b, -2, Derivation(ba, -2), Element(ba), h, Element(ba));
    auto w = [&] { return to_string(U0) + " ; " + to_string(V0) + " ; " + to_string(V1); };
    run.guarded([&] { return detail::same(sym(0, r21_differential(base, data, v0)), commutator(b.Q(), V0.realize())); },
                w);
    run.guarded([&] { return detail::same(sym(0, r21_bracket00(base, u0, u1)), commutator(U0.realize(), U1.realize())); },
                w);
    run.guarded([&] { return detail::same(sym(-1, r21_bracket01(base, u0, v0)), commutator(U0.realize(), V0.realize())); },
                w);
    if (m == 1)
      run.guarded(
          [&] {
            SymElement s(b, -2, Derivation(ba, -2), Element(ba), r21_bracket11(v0, v1), Element(ba));
            return detail::same(s, commutator(V0.realize(), V1.realize()));
          },
          w);
    run.guarded(
        [&] {
          SymElement s(b, -2, Derivation(ba, -2), Element(ba), r21_bracket0h(base, u0, h), Element(ba));
          return detail::same(s, commutator(U0.realize(), Hh.realize()));
        },
        w);
    run.guarded([&] { return detail::same(sym(-1, r21_derived(base, data, v0, v1)), detail::generic_derived(b, V0, V1)); },
                w);
    run.guarded(
        [&] {
          SymElement s(b, -2, Derivation(ba, -2), Element(ba), r21_derived_h(base, v0, h), Element(ba));
          return detail::same(s, detail::generic_derived(b, V0, Hh));
        },
        w);
    run.guarded(
        [&] {
          derived_bracket(V0, V1);
          sym_bracket(U0, U1);
          return true;
        },
        w);
  }
  return run.result();
}

/// [Q, a] = 0 iff the three equations hold, over closed and non-closed (A, B, Abar).
inline LawResult check_sym0_membership(const DgBundle& b, const Frame& fr, Rng& rng, std::size_t trials) {
  detail::LawRunner run("sym0-membership");
  const Model& base = b.base();
  const auto& ba = base.algebra();
  SymElement probe(b, 0);
  const int qd = probe.q_degree(), td = probe.t_degree();
  for (std::size_t i = 0; i < trials; ++i) {
    const unsigned mask = static_cast<unsigned>(pick(rng, 8));
    auto part = [&](int deg, unsigned bit) {
      return (mask >> bit) & 1u ? random_closed(base, deg, rng) : random_element(ba, deg, rng);
    };
    Derivation x = pick(rng, 2) ? random_vector(fr, rng) : Derivation(ba, -1);
    Element q = probe.two_stage() ? part(qd, 0) : Element(ba);
    Element t = part(td, 1);
    Element tq = probe.two_stage() ? part(qd, 2) : Element(ba);
    SymElement a(b, 0, std::move(x), std::move(q), std::move(t), std::move(tq));
    run.guarded(
        [&] {
          is_symmetry(a);
          return true;
        },
        [&] { return to_string(a); });
  }
  return run.result();
}

/// Phi intertwines differentials and brackets on spanning sets of degrees 0, -1, -2.
inline LawResult check_phi(const TDualPair& pair, const Frame& fr) {
  detail::LawRunner run("phi");
  const DgBundle& P = pair.P;
  const auto& ba = P.base().algebra();
  std::vector<SymElement> span;
  for (int k : {0, -1, -2}) {
    SymElement probe(P, k);
    for (const auto& v : fr.vectors())
      if (k >= -1) span.emplace_back(P, k, v, Element(ba), Element(ba), Element(ba));
    auto add = [&](int deg, int slot) {
      if (deg < 0) return;
      for (const auto& mono : basis(*ba, deg)) {
        Element e = Element::monomial(ba, mono), z(ba);
        Derivation v(ba, k == 0 ? -1 : k);
        span.emplace_back(P, k, v, slot == 0 ? e : z, slot == 1 ? e : z, slot == 2 ? e : z);
      }
    };
    add(probe.q_degree() + k, 0);
    add(probe.t_degree() + k, 1);
    add(probe.q_degree() + k, 2);
  }
  for (const auto& a : span) {
    auto w = [&] { return to_string(a); };
    run.guarded([&] { return phi_iso(pair, phi_iso(pair, a)) == a; }, w);
    if (a.degree() < 0)
      run.guarded([&] { return phi_iso(pair, sym_differential(a)) == sym_differential(phi_iso(pair, a)); }, w);
    for (const auto& c : span) {
      if (a.degree() + c.degree() < -2) continue;
      run.guarded([&] { return phi_iso(pair, sym_bracket(a, c)) == sym_bracket(phi_iso(pair, a), phi_iso(pair, c)); },
                  [&] { return to_string(a) + " ; " + to_string(c); });
    }
  }
  return run.result();
}

/// Psi respects brackets and Psi-bar^{-1} Phi Psi swaps the two function parts.
inline LawResult check_courant(const TDualPair& pair, const Frame& fr, Rng& rng, std::size_t trials) {
  detail::LawRunner run("courant");
  const auto& ba = pair.P.base().algebra();
  auto rnd = [&] {
    return CourantSection{random_vector(fr, rng), random_element(ba, 0, rng), random_element(ba, 1, rng),
                          random_element(ba, 0, rng)};
  };
  for (std::size_t i = 0; i < trials; ++i) {
    const CourantSection s0 = rnd(), s1 = rnd();
    auto w = [&] { return to_string(courant_translation(pair.P, s0)) + " ; " + to_string(courant_translation(pair.P, s1)); };
    run.guarded(
        [&] {
          return courant_translation(pair.P, courant_dorfman(pair.P, s0, s1)) ==
                 derived_bracket(courant_translation(pair.P, s0), courant_translation(pair.P, s1));
        },
        w);
    run.guarded(
        [&] {
          const CourantSection d = courant_dual(pair, s0);
          return d.x == s0.x && d.f == s0.fbar && d.fbar == s0.f && d.c == s0.c;
        },
        w);
    run.guarded(
        [&] {
          // The dual side: Psi-bar intertwines its own Courant bracket.
          const CourantSection d0 = courant_dual(pair, s0), d1 = courant_dual(pair, s1);
          return courant_translation(pair.Pbar, courant_dorfman(pair.Pbar, d0, d1)) ==
                 phi_iso(pair, courant_translation(pair.P, courant_dorfman(pair.P, s0, s1)));
        },
        w);
  }
  return run.result();
}

/// B_n: closed-form bracket, pairing and actions against the generic
/// commutators; the DPhi-fixed set is closed under the derived bracket.
inline LawResult check_bn(const DgBundle& b, const Frame& fr, Rng& rng, std::size_t trials) {
  using namespace display;
  detail::LawRunner run("bn");
  if (!self_dual(b)) throw ShapeMismatch("bn checks need a self-dual bundle (F = Fbar, q of degree 1)");
  const Model& base = b.base();
  const auto& ba = base.algebra();
  const auto data = TwoStageData::of(b);
  auto rnd = [&] { return BnSection{random_vector(fr, rng), random_element(ba, 0, rng), random_element(ba, 1, rng)}; };
  for (std::size_t i = 0; i < trials; ++i) {
    const BnSection u = rnd(), v = rnd();
    const SymElement U = bn_realize(b, u), V = bn_realize(b, v);
    auto w = [&] { return to_string(U) + " ; " + to_string(V); };
    run.guarded([&] { return detail::same(bn_realize(b, bn_bracket(base, data, u, v)), detail::generic_derived(b, U, V)); },
                w);
    run.guarded(
        [&] {
          SymElement p(b, -2, Derivation(ba, -2), Element(ba), bn_pairing(u, v), Element(ba));
          return detail::same(p, commutator(U.realize(), V.realize()));
        },
        w);
    const Element a1 = random_closed(base, 1, rng), b2 = random_closed(base, 2, rng);
    run.guarded(
        [&] {
          // A d/dq + (-q A) d/dt is a symmetry exactly when F A = 0.
          SymElement act(b, 0, Derivation(ba, -1), a1, Element(ba), -a1);
          return is_symmetry(act) == (data.f * a1).is_zero() &&
                 detail::same(bn_realize(b, bn_action_a(base, a1, u)), commutator(act.realize(), U.realize()));
        },
        w);
    run.guarded(
        [&] {
          SymElement act(b, 0, Derivation(ba, -1), Element(ba), b2, Element(ba));
          return is_symmetry(act) &&
                 detail::same(bn_realize(b, bn_action_b(base, b2, u)), commutator(act.realize(), U.realize()));
        },
        w);
    run.guarded(
        [&] {
          const SymElement d = derived_bracket(U, V);
          return bn_fixed(U) && bn_fixed(d) && in_sub_dgla(d, 1) && bn_fixed(sym_differential(U));
        },
        w);
    run.guarded(
        [&] {
          const SymElement g0 = random_sym(b, -1, fr, rng), g1 = random_sym(b, 0, fr, rng);
          const SymElement p0 = bn_project(g0), p1 = bn_project(g1);
          return bn_fixed(p0) && bn_fixed(p1) && bn_project(p0) == p0 && in_sub_dgla(p0, 1) &&
                 in_sub_dgla(p1, 1);
        },
        w);
  }
  return run.result();
}

/// E6: closed-form bracket, pairing and actions against the generic commutators.
inline LawResult check_e6(const DgBundle& b, const Frame& fr, Rng& rng, std::size_t trials) {
  using namespace display;
  detail::LawRunner run("e6");
  b.require(Shape::TwoStage, 3, "check_e6");
  const Model& base = b.base();
  const auto& ba = base.algebra();
  const Element& f4 = b.form("F");
  const Element& f7 = b.form("H");
  auto rnd = [&] { return E6Section{random_vector(fr, rng), random_element(ba, 2, rng), random_element(ba, 5, rng)}; };
  for (std::size_t i = 0; i < trials; ++i) {
    const E6Section u = rnd(), v = rnd();
    const SymElement U = e6_realize(b, u), V = e6_realize(b, v);
    auto w = [&] { return to_string(U) + " ; " + to_string(V); };
    run.guarded([&] { return detail::same(e6_realize(b, e6_bracket(base, f4, f7, u, v)), detail::generic_derived(b, U, V)); },
                w);
    run.guarded(
        [&] {
          const auto p = e6_pairing(u, v);
          SymElement s(b, -2, Derivation(ba, -2), p.eta1, p.c4, p.eta1 * Rational(-1, 2));
          return detail::same(s, commutator(U.realize(), V.realize()));
        },
        w);
    const Element a3 = random_closed(base, 3, rng), b6 = random_closed(base, 6, rng);
    run.guarded(
        [&] {
          // A3 d/dq - q A3/2 d/dt is a symmetry exactly when F4 A3 = 0.
          SymElement act(b, 0, Derivation(ba, -1), a3, Element(ba), a3 * Rational(-1, 2));
          return is_symmetry(act) == (f4 * a3).is_zero() &&
                 detail::same(e6_realize(b, e6_action_a(base, a3, u)), commutator(act.realize(), U.realize()));
        },
        w);
    run.guarded(
        [&] {
          SymElement act(b, 0, Derivation(ba, -1), Element(ba), b6, Element(ba));
          return is_symmetry(act) &&
                 detail::same(e6_realize(b, e6_action_b(base, b6, u)), commutator(act.realize(), U.realize()));
        },
        w);
    run.guarded([&] { return in_sub_dgla(derived_bracket(U, V), Rational(1, 2)); }, w);
  }
  return run.result();
}

}  // namespace dgcalc
