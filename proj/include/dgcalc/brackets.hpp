#pragma once

// Closed-form bracket tables written directly in terms of vector fields and
// forms on the base. Vector fields are degree -1 base derivations iota_X
// (pairwise graded-commuting), L_X = [d, iota_X] and iota_[X,Y] = [L_X, iota_Y].
// Functions of the base are degree 0 elements.

#include "symmetries.hpp"

namespace dgcalc::display {

inline Derivation lie(const Model& base, const Derivation& x) { return commutator(base.differential(), x); }

/// iota_[X,Y]
inline Derivation vbracket(const Model& base, const Derivation& x, const Derivation& y) {
  return commutator(lie(base, x), y);
}

// R[n]-bundles, Q = d + Theta d/dt.

struct RnPair {
  Derivation x;  // iota_X, or xi with L_X = [d, xi] in degree 0
  Element a;     // coefficient of d/dt
};

/// [Q, iota_X + A d/dt] = L_X + (dA + iota_X Theta) d/dt
inline RnPair rn_differential(const Model& base, const Element& theta, const RnPair& v) {
  return {v.x, base.d(v.a) + v.x(theta)};
}

/// [Q, eta d/dt] = d eta d/dt
inline Element rn_differential_form(const Model& base, const Element& eta) { return base.d(eta); }

/// [L_X0 + B0 d/dt, L_X1 + B1 d/dt] = L_[X0,X1] + (L_X0 B1 - L_X1 B0) d/dt
inline RnPair rn_bracket00(const Model& base, const RnPair& u, const RnPair& v) {
  const Derivation l0 = lie(base, u.x), l1 = lie(base, v.x);
  return {commutator(l0, v.x), l0(v.a) - l1(u.a)};
}

/// [L_X + B d/dt, iota_Y + A d/dt] = iota_[X,Y] + (L_X A - iota_Y B) d/dt
inline RnPair rn_bracket01(const Model& base, const RnPair& u, const RnPair& v) {
  return {vbracket(base, u.x, v.x), lie(base, u.x)(v.a) - v.x(u.a)};
}

/// [L_X + B d/dt, eta d/dt] = L_X eta d/dt
inline Element rn_bracket0f(const Model& base, const RnPair& u, const Element& eta) {
  return lie(base, u.x)(eta);
}

/// [iota_Y0 + A0 d/dt, iota_Y1 + A1 d/dt] = (iota_Y0 A1 + iota_Y1 A0) d/dt
inline Element rn_bracket11(const RnPair& u, const RnPair& v) { return u.x(v.a) + v.x(u.a); }

/// [iota_X + alpha d/dt, eta d/dt] = iota_X eta d/dt
inline Element rn_bracket1f(const RnPair& u, const Element& eta) { return u.x(eta); }

/// Derived bracket of iota_X0 + A0 d/dt and iota_X1 + A1 d/dt:
/// iota_[X0,X1] + (L_X0 A1 - iota_X1 dA0 - iota_X1 iota_X0 Theta) d/dt
inline RnPair rn_derived(const Model& base, const Element& theta, const RnPair& u, const RnPair& v) {
  return {vbracket(base, u.x, v.x),
          lie(base, u.x)(v.a) - v.x(base.d(u.a)) - v.x(u.x(theta))};
}

/// Derived bracket with a form: L_X eta d/dt.
inline Element rn_derived_vf(const Model& base, const RnPair& u, const Element& eta) {
  return lie(base, u.x)(eta);
}

/// Derived bracket of a form with a vector: -(iota_X d eta) d/dt.
inline Element rn_derived_fv(const Model& base, const Element& eta, const RnPair& v) {
  return -v.x(base.d(eta));
}

/// R[1]: [X (+) f, Y (+) g] = [X,Y] (+) (X(g) - Y(f) - iota_Y iota_X F).
inline RnPair r1_derived(const Model& base, const Element& f_curv, const RnPair& u, const RnPair& v) {
  return {vbracket(base, u.x, v.x),
          lie(base, u.x)(v.a) - lie(base, v.x)(u.a) - v.x(u.x(f_curv))};
}

// R[2]-over-R[1] bundles, Q = d + F d/dq + (H + q Fbar) d/dt.

struct TwoStageData {
  Element f, fbar, h;
  static TwoStageData of(const DgBundle& b) { return {b.form("F"), b.form("Fbar"), b.form("H")}; }
};

/// Degree 0: L_X + A d/dq + (B + q Abar) d/dt; degree -1:
/// iota_Y + f d/dq + (C + q fbar) d/dt.
struct TwoStageElem {
  Derivation x;
  Element q;   // A or f
  Element t;   // B or C
  Element tq;  // Abar or fbar
};

/// [Q, iota_Y + f d/dq + (C + q fbar) d/dt] = L_Y + (df + iota_Y F) d/dq
///   + (dC + iota_Y H + F fbar + f Fbar) d/dt - q (dfbar + iota_Y Fbar) d/dt
inline TwoStageElem r21_differential(const Model& base, const TwoStageData& s, const TwoStageElem& v) {
  return {v.x, base.d(v.q) + v.x(s.f), base.d(v.t) + v.x(s.h) + s.f * v.tq + v.q * s.fbar,
          -(base.d(v.tq) + v.x(s.fbar))};
}

/// [L_X0 + A0 d/dq + (B0 + q Abar0) d/dt, L_X1 + ...] = L_[X0,X1] + (L_X0 A1 - L_X1 A0) d/dq
///   + (L_X0 B1 - L_X1 B0 + A0 Abar1 - A1 Abar0) d/dt + q (L_X0 Abar1 - L_X1 Abar0) d/dt
inline TwoStageElem r21_bracket00(const Model& base, const TwoStageElem& u, const TwoStageElem& v) {
  const Derivation l0 = lie(base, u.x), l1 = lie(base, v.x);
  return {commutator(l0, v.x), l0(v.q) - l1(u.q), l0(v.t) - l1(u.t) + u.q * v.tq - v.q * u.tq,
          l0(v.tq) - l1(u.tq)};
}

/// [iota_Y0 + f0 d/dq + (C0 + q fbar0) d/dt, iota_Y1 + ...]
///   = (iota_Y0 C1 + iota_Y1 C0 + f0 fbar1 + f1 fbar0) d/dt
inline Element r21_bracket11(const TwoStageElem& u, const TwoStageElem& v) {
  return u.x(v.t) + v.x(u.t) + u.q * v.tq + v.q * u.tq;
}

/// [L_X + A d/dq + (B + q Abar) d/dt, iota_Y + f d/dq + (C + q fbar) d/dt]
///   = iota_[X,Y] + (L_X f - iota_Y A) d/dq + (L_X C - iota_Y B + A fbar - f Abar) d/dt
///   + q (L_X fbar + iota_Y Abar) d/dt
inline TwoStageElem r21_bracket01(const Model& base, const TwoStageElem& u, const TwoStageElem& v) {
  const Derivation l = lie(base, u.x);
  return {vbracket(base, u.x, v.x), l(v.q) - v.x(u.q), l(v.t) - v.x(u.t) + u.q * v.tq - v.q * u.tq,
          l(v.tq) + v.x(u.tq)};
}

/// [L_X + ..., h d/dt] = L_X h d/dt
inline Element r21_bracket0h(const Model& base, const TwoStageElem& u, const Element& h) {
  return lie(base, u.x)(h);
}

/// Derived bracket on degree -1 elements:
///   iota_[X,Y] + (L_X f1 - iota_Y df0 - iota_Y iota_X F) d/dq
///   + (L_X C1 - iota_Y dC0 - iota_Y iota_X H - iota_Y(F fbar0) - iota_Y(f0 Fbar)
///      + (df0) fbar1 + (iota_X F) fbar1 + f1 dfbar0 + f1 iota_X Fbar) d/dt
///   + q (L_X fbar1 - iota_Y dfbar0 - iota_Y iota_X Fbar) d/dt
inline TwoStageElem r21_derived(const Model& base, const TwoStageData& s, const TwoStageElem& u,
                                const TwoStageElem& v) {
  const Derivation& x = u.x;
  const Derivation& y = v.x;
  const Derivation l = lie(base, x);
  Element q = l(v.q) - y(base.d(u.q)) - y(x(s.f));
  Element t = l(v.t) - y(base.d(u.t)) - y(x(s.h)) - y(s.f * u.tq) - y(u.q * s.fbar) +
              base.d(u.q) * v.tq + x(s.f) * v.tq + v.q * base.d(u.tq) + v.q * x(s.fbar);
  Element tq = l(v.tq) - y(base.d(u.tq)) - y(x(s.fbar));
  return {vbracket(base, x, y), std::move(q), std::move(t), std::move(tq)};
}

/// Derived bracket of a degree -1 element with h d/dt: L_X h d/dt.
inline Element r21_derived_h(const Model& base, const TwoStageElem& u, const Element& h) {
  return lie(base, u.x)(h);
}

// B_n on a self-dual bundle (F = Fbar, dH + F F = 0): sections (X, f, C).

struct BnSection {
  Derivation x;
  Element f;  // degree 0
  Element c;  // degree 1
};

/// ([X,Y], L_X g - L_Y f - iota_Y iota_X F,
///  L_X D - iota_Y dC - iota_Y iota_X H - 2 f iota_Y F + 2 g iota_X F + 2 g df)
inline BnSection bn_bracket(const Model& base, const TwoStageData& s, const BnSection& u,
                            const BnSection& v) {
  const Derivation lx = lie(base, u.x), ly = lie(base, v.x);
  return {vbracket(base, u.x, v.x), lx(v.f) - ly(u.f) - v.x(u.x(s.f)),
          lx(v.c) - v.x(base.d(u.c)) - v.x(u.x(s.h)) - Rational(2) * u.f * v.x(s.f) +
              Rational(2) * v.f * u.x(s.f) + Rational(2) * v.f * base.d(u.f)};
}

/// iota_X D + iota_Y C + 2 f g
inline Element bn_pairing(const BnSection& u, const BnSection& v) {
  return u.x(v.c) + v.x(u.c) + Rational(2) * u.f * v.f;
}

/// Closed 1-form A: (X, f, C) -> (0, -iota_X A, 2 A f)
inline BnSection bn_action_a(const Model& base, const Element& a, const BnSection& v) {
  return {Derivation(base.algebra(), -1), -v.x(a), Rational(2) * a * v.f};
}

/// Closed 2-form B: (X, f, C) -> (0, 0, -iota_X B)
inline BnSection bn_action_b(const Model& base, const Element& b, const BnSection& v) {
  return {Derivation(base.algebra(), -1), base.zero(), -v.x(b)};
}

inline SymElement bn_realize(const DgBundle& b, const BnSection& s) { return bn_element(b, s.x, s.f, s.c); }

// E6 on the R[6]-over-R[3] bundle: sections (X, s2, s5).

struct E6Section {
  Derivation x;
  Element s2;
  Element s5;
};

/// ([X,Y], L_X t2 - iota_Y d s2 - iota_Y iota_X F4,
///  L_X t5 - iota_Y d s5 - iota_Y iota_X F7 - iota_Y(F4 s2) + (iota_X F4) t2 + d s2 t2)
inline E6Section e6_bracket(const Model& base, const Element& f4, const Element& f7, const E6Section& u,
                            const E6Section& v) {
  const Derivation& x = u.x;
  const Derivation& y = v.x;
  const Derivation lx = lie(base, x);
  return {vbracket(base, x, y), lx(v.s2) - y(base.d(u.s2)) - y(x(f4)),
          lx(v.s5) - y(base.d(u.s5)) - y(x(f7)) - y(f4 * u.s2) + x(f4) * v.s2 + base.d(u.s2) * v.s2};
}

/// The degree -2 element eta1 d/dq + (C4 - q eta1/2) d/dt with
/// eta1 = iota_X t2 + iota_Y s2 and C4 = iota_X t5 + iota_Y s5 + s2 t2.
struct E6Pairing {
  Element eta1;
  Element c4;
};

inline E6Pairing e6_pairing(const E6Section& u, const E6Section& v) {
  return {u.x(v.s2) + v.x(u.s2), u.x(v.s5) + v.x(u.s5) + u.s2 * v.s2};
}

/// Closed 3-form A3: (X, s2, s5) -> (0, -iota_X A3, A3 s2)
inline E6Section e6_action_a(const Model& base, const Element& a3, const E6Section& v) {
  return {Derivation(base.algebra(), -1), -v.x(a3), a3 * v.s2};
}

/// Closed 6-form B6: (X, s2, s5) -> (0, 0, -iota_X B6)
inline E6Section e6_action_b(const Model& base, const Element& b6, const E6Section& v) {
  return {Derivation(base.algebra(), -1), base.zero(), -v.x(b6)};
}

inline SymElement e6_realize(const DgBundle& b, const E6Section& s) { return e6_element(b, s.x, s.s2, s.s5); }

}  // namespace dgcalc::display
