#pragma once

// Symmetries of R[n]-bundles and two-stage bundles in structured form, their
// realization as derivations, and the derived bracket.
//
// A structured element of degree k is
//   V + a_q d/dq + (a_t + q a_tq) d/dt
// where V acts on the base: V = [d, xi] for k = 0 (xi of degree -1), and V is
// the stored base derivation itself for k < 0. Every structured operation is
// checked against the commutator of the realized derivations.

#include <string>
#include <vector>

#include "tduality.hpp"

namespace dgcalc {

class SymElement {
 public:
  /// The zero element of degree k.
  SymElement(const DgBundle& b, int k)
      : b_(&b),
        k_(k),
        vec_(b.base().algebra(), k == 0 ? -1 : k),
        q_(b.base().algebra()),
        t_(b.base().algebra()),
        tq_(b.base().algebra()) {
    check_shape();
  }

  SymElement(const DgBundle& b, int k, Derivation vec, Element q, Element t, Element tq)
      : b_(&b), k_(k), vec_(std::move(vec)), q_(std::move(q)), t_(std::move(t)), tq_(std::move(tq)) {
    check_shape();
    if (!same_algebra(vec_.ambient(), b.base().algebra())) throw AmbientMismatch();
    const int vd = (k == 0 || k == 1) ? (k == 0 ? -1 : 1) : k;
    if (vec_.degree() != vd && !vec_.is_zero())
      throw DegreeMismatch("vector part of a degree " + std::to_string(k) +
                           " symmetry must have degree " + std::to_string(vd));
    if (vec_.is_zero()) vec_ = Derivation(b.base().algebra(), vd);
    auto need = [&](const Element& x, int deg, const char* what) {
      if (!same_algebra(x.ambient(), b.base().algebra())) throw AmbientMismatch();
      if (!x.has_degree(deg))
        throw DegreeMismatch(std::string(what) + " part must have degree " + std::to_string(deg) +
                             ", got " + to_string(x));
    };
    need(t_, t_degree() + k, "t");
    if (two_stage()) {
      need(q_, q_degree() + k, "q");
      need(tq_, q_degree() + k, "tq");
    } else if (!q_.is_zero() || !tq_.is_zero()) {
      throw ShapeMismatch("R[n] symmetries have no q parts");
    }
  }

  /// Q itself in structured form (degree 1, V = d).
  static SymElement homological(const DgBundle& b) {
    const auto& base = b.base().algebra();
    if (b.shape() == Shape::Rn)
      return SymElement(b, 1, b.base().differential(), Element(base), b.form("Theta"), Element(base));
    return SymElement(b, 1, b.base().differential(), b.form("F"), b.form("H"), b.form("Fbar"));
  }

  const DgBundle& bundle() const noexcept { return *b_; }
  int degree() const noexcept { return k_; }
  /// xi for degree 0, the base part itself otherwise.
  const Derivation& vec() const noexcept { return vec_; }
  const Element& q() const noexcept { return q_; }
  const Element& t() const noexcept { return t_; }
  const Element& tq() const noexcept { return tq_; }

  bool two_stage() const { return b_->shape() == Shape::TwoStage; }
  int q_degree() const { return two_stage() ? b_->n() : 0; }
  int t_degree() const { return two_stage() ? 2 * b_->n() : b_->n(); }

  /// The derivation induced on the base generators.
  Derivation base_part() const {
    if (k_ == 0) return commutator(b_->base().differential(), vec_);
    return vec_;
  }

  /// The derivation of the total algebra.
  Derivation realize() const {
    const auto& alg = b_->algebra();
    Derivation v = base_part();
    Derivation out(alg, k_);
    const auto& base = b_->base().algebra();
    for (std::size_t i = 0; i < base->size(); ++i)
      out.set((*base)[i].name, transport(v.value(i), alg));
    if (two_stage()) {
      out.set(b_->fiber(0), transport(q_, alg));
      out.set(b_->fiber(1), transport(t_, alg) + b_->gen(b_->fiber(0)) * transport(tq_, alg));
    } else {
      out.set(b_->fiber(0), transport(t_, alg));
    }
    return out;
  }

  bool is_zero() const { return realize().is_zero(); }

  SymElement& operator+=(const SymElement& o) {
    if (o.b_ != b_) throw AmbientMismatch();
    if (o.k_ != k_) throw DegreeMismatch("cannot add symmetries of different degree");
    vec_ += o.vec_;
    q_ += o.q_;
    t_ += o.t_;
    tq_ += o.tq_;
    return *this;
  }
  SymElement& operator*=(const Rational& s) {
    vec_ *= s;
    q_ *= s;
    t_ *= s;
    tq_ *= s;
    return *this;
  }
  friend SymElement operator+(SymElement a, const SymElement& b) { return a += b; }
  friend SymElement operator-(SymElement a, const SymElement& b) {
    SymElement nb = b;
    nb *= Rational(-1);
    return a += nb;
  }
  friend SymElement operator*(const Rational& s, SymElement a) { return a *= s; }

  /// Equal as derivations of the total algebra.
  friend bool operator==(const SymElement& a, const SymElement& b) {
    if (a.b_ != b.b_) return false;
    return a.realize() == b.realize();
  }

 private:
  void check_shape() const {
    if (b_->shape() != Shape::Rn && b_->shape() != Shape::TwoStage)
      throw ShapeMismatch("symmetries are implemented for R[n] and two-stage bundles");
    if (k_ > 1) throw DegreeMismatch("symmetries have degree <= 0");
  }

  const DgBundle* b_;
  int k_;
  Derivation vec_;
  Element q_, t_, tq_;
};

/// An element of the derived algebra: a symmetry of degree <= -1 with shifted degree |a| + 1.
struct DerivedElement {
  SymElement underlying;
  int shifted_degree() const { return underlying.degree() + 1; }
};

inline std::string to_string(const SymElement& a) {
  std::string s = "deg " + std::to_string(a.degree()) + ": ";
  s += (a.degree() == 0 ? "xi=" : "vec=") + to_string(a.vec());
  if (a.two_stage()) s += ", q=" + to_string(a.q());
  s += ", t=" + to_string(a.t());
  if (a.two_stage()) s += ", tq=" + to_string(a.tq());
  return s;
}

namespace detail {

inline void check_routes(const SymElement& structured, const Derivation& generic, const char* what) {
  Derivation r = structured.realize();
  if (r != generic)
    throw InconsistentRoutes(std::string(what) + ": structured " + to_string(r) + " vs generic " +
                             to_string(generic));
}

/// Fiber parts of [a, b] for structured elements with base parts va, vb.
inline void bracket_parts(const SymElement& a, const Derivation& va, const SymElement& b,
                          const Derivation& vb, Element& q, Element& t, Element& tq) {
  const int s = koszul(a.degree(), b.degree());
  const int m = a.q_degree();
  auto sub = [s](Element x, const Element& y) { return s > 0 ? x - y : x + y; };
  t = sub(va(b.t()) + a.q() * b.tq(), vb(a.t()) + b.q() * a.tq());
  if (a.two_stage()) {
    q = sub(va(b.q()), vb(a.q()));
    tq = sub(Rational(koszul(a.degree(), m)) * va(b.tq()),
             Rational(koszul(b.degree(), m)) * vb(a.tq()));
  }
}

}  // namespace detail

/// [Q, a] for a of negative degree, in structured form.
inline SymElement sym_differential(const SymElement& a) {
  if (a.degree() >= 0) throw DegreeMismatch("the differential is only taken on negative degrees");
  const DgBundle& b = a.bundle();
  SymElement qe = SymElement::homological(b);
  const auto& base = b.base().algebra();
  Element q(base), t(base), tq(base);
  detail::bracket_parts(qe, b.base().differential(), a, a.base_part(), q, t, tq);
  Derivation vec = a.degree() == -1 ? a.vec() : commutator(b.base().differential(), a.vec());
  SymElement out(b, a.degree() + 1, std::move(vec), std::move(q), std::move(t), std::move(tq));
  detail::check_routes(out, commutator(b.Q(), a.realize()), "differential");
  return out;
}

/// [a, b] in structured form.
inline SymElement sym_bracket(const SymElement& a, const SymElement& b) {
  if (&a.bundle() != &b.bundle()) throw AmbientMismatch();
  const int k = a.degree() + b.degree();
  if (a.degree() > 0 || b.degree() > 0) throw DegreeMismatch("bracket of symmetries needs degrees <= 0");
  const DgBundle& bun = a.bundle();
  const Derivation va = a.base_part(), vb = b.base_part();
  Derivation vec(bun.base().algebra(), k == 0 ? -1 : k);
  if (a.degree() == 0 && b.degree() == 0) vec = commutator(va, b.vec());
  else if (a.degree() == 0) vec = commutator(va, b.vec());
  else if (b.degree() == 0) vec = -commutator(vb, a.vec());
  else vec = commutator(a.vec(), b.vec());
  const auto& base = bun.base().algebra();
  Element q(base), t(base), tq(base);
  detail::bracket_parts(a, va, b, vb, q, t, tq);
  SymElement out(bun, k, std::move(vec), std::move(q), std::move(t), std::move(tq));
  detail::check_routes(out, commutator(a.realize(), b.realize()), "bracket");
  return out;
}

/// (-1)^{||a||} [[Q, a], b] on realized derivations.
inline Derivation derived_bracket_generic(const Derivation& q, const Derivation& a, const Derivation& b) {
  Derivation r = commutator(commutator(q, a), b);
  if (koszul(a.degree() + 1, 1) < 0) r *= Rational(-1);
  return r;
}

/// Derived bracket, by the structured composition and by the double commutator.
inline SymElement derived_bracket(const SymElement& a, const SymElement& b) {
  if (a.degree() >= 0 || b.degree() >= 0)
    throw DegreeMismatch("derived bracket is defined on negative degrees");
  SymElement out = sym_bracket(sym_differential(a), b);
  if (koszul(a.degree() + 1, 1) < 0) out *= Rational(-1);
  detail::check_routes(out, derived_bracket_generic(a.bundle().Q(), a.realize(), b.realize()),
                       "derived bracket");
  return out;
}

inline DerivedElement derived_bracket(const DerivedElement& a, const DerivedElement& b) {
  return DerivedElement{derived_bracket(a.underlying, b.underlying)};
}

/// Residuals of the three equations characterising degree 0 symmetries:
/// dA - L_X F, dB - L_X H + F Abar - A Fbar, dAbar + L_X Fbar.
struct Sym0Residual {
  Element q, t, tq;
  bool zero() const { return q.is_zero() && t.is_zero() && tq.is_zero(); }
};

inline Sym0Residual sym0_residual(const SymElement& a) {
  if (a.degree() != 0) throw DegreeMismatch("sym0_residual needs a degree 0 element");
  const DgBundle& b = a.bundle();
  const Model& base = b.base();
  Derivation lx = a.base_part();
  if (b.shape() == Shape::Rn) {
    // d B - L_X Theta
    return {base.zero(), base.d(a.t()) - lx(b.form("Theta")), base.zero()};
  }
  return {base.d(a.q()) - lx(b.form("F")),
          base.d(a.t()) - lx(b.form("H")) + b.form("F") * a.tq() - a.q() * b.form("Fbar"),
          base.d(a.tq()) + lx(b.form("Fbar"))};
}

/// Membership in sym^0 decided both ways; they must agree.
inline bool is_symmetry(const SymElement& a) {
  const bool generic = commutator(a.bundle().Q(), a.realize()).is_zero();
  const bool structured = sym0_residual(a).zero();
  if (generic != structured)
    throw InconsistentRoutes("sym0 membership: generic " + std::to_string(generic) + " vs equations " +
                             std::to_string(structured));
  return generic;
}

/// Phi: sym(P) -> sym(Pbar). Degree 0: (A, Abar) -> (-Abar, -A); degree -1:
/// (f, fbar) -> (fbar, f); the vector and t parts are kept.
inline SymElement phi_to(const DgBundle& target, const SymElement& a) {
  const bool even = a.degree() % 2 == 0;
  Element q = even ? -a.tq() : a.tq();
  Element tq = even ? -a.q() : a.q();
  return SymElement(target, a.degree(), a.vec(), std::move(q), a.t(), std::move(tq));
}

inline SymElement phi_iso(const TDualPair& pair, const SymElement& a) {
  if (&a.bundle() != &pair.P && &a.bundle() != &pair.Pbar)
    throw AmbientMismatch();
  return phi_to(&a.bundle() == &pair.P ? pair.Pbar : pair.P, a);
}

inline bool self_dual(const DgBundle& b) {
  return b.shape() == Shape::TwoStage && b.n() == 1 && b.form("F") == b.form("Fbar");
}

/// DPhi on a self-dual bundle, identifying Pbar with P by qbar -> q.
inline SymElement phi_self(const SymElement& a) {
  if (!self_dual(a.bundle())) throw ShapeMismatch("phi_self needs a self-dual bundle (F = Fbar)");
  return phi_to(a.bundle(), a);
}

/// Fixed-point projection (a + DPhi a)/2; DPhi is checked to be an involution.
inline SymElement bn_project(const SymElement& a) {
  SymElement p = phi_self(a);
  if (phi_self(p) != a) throw InconsistentRoutes("DPhi is not an involution on this element");
  SymElement out = a + p;
  out *= Rational(1, 2);
  return out;
}

inline bool bn_fixed(const SymElement& a) { return phi_self(a) == a; }

/// (X, f, C) := iota_X + f d/dq + (C + q f) d/dt on a self-dual bundle.
inline SymElement bn_element(const DgBundle& b, const Derivation& x, const Element& f, const Element& c) {
  return SymElement(b, -1, x, f, c, f);
}

/// (X, s2, s5) := iota_X + s2 d/dq + (s5 + q s2/2) d/dt on an R[6]-over-R[3] bundle.
inline SymElement e6_element(const DgBundle& b, const Derivation& x, const Element& s2, const Element& s5) {
  b.require(Shape::TwoStage, 3, "e6_element");
  return SymElement(b, -1, x, s2, s5, s2 * Rational(1, 2));
}

/// Sub-dgla condition tq = (-1)^{k+1} c q for B_n (c = 1) and E6 (c = 1/2).
inline bool in_sub_dgla(const SymElement& a, const Rational& c) {
  const Rational s = koszul(a.degree() + 1, 1);
  return a.tq() == a.q() * Rational(s * c);
}

inline Rational sub_dgla_ratio(const DgBundle& b) {
  if (b.shape() == Shape::TwoStage && b.n() == 3) return Rational(1, 2);
  if (self_dual(b)) return Rational(1);
  throw ShapeMismatch("bundle has no B_n or E6 sub-dgla");
}

/// Sections X + f d_theta + C + fbar theta of the invariant generalized tangent
/// bundle of the circle bundle, modelled on E = (base ⊗ Λ[q], d + F d/dq).
struct CourantSection {
  Derivation x;  // degree -1 base derivation
  Element f;     // degree 0
  Element c;     // degree 1
  Element fbar;  // degree 0
};

/// Psi: X + f d_theta + C + fbar theta -> iota_X + f d/dq + (C + q fbar) d/dt.
inline SymElement courant_translation(const DgBundle& b, const CourantSection& s) {
  b.require(Shape::TwoStage, 1, "courant_translation");
  return SymElement(b, -1, s.x, s.f, s.c, s.fbar);
}

inline CourantSection courant_untranslate(const SymElement& a) {
  if (a.degree() != -1) throw DegreeMismatch("courant sections correspond to degree -1 symmetries");
  return CourantSection{a.vec(), a.q(), a.t(), a.tq()};
}

/// The eta-twisted Courant-Dorfman bracket on E with eta = H + q Fbar, computed
/// directly on E: vector part [[Q_E, u0], u1], form part
/// L_{u0} w1 - u1(Q_E w0) - u1 u0 eta with u = iota_X + f d/dq, w = C + q fbar.
inline CourantSection courant_dorfman(const DgBundle& b, const CourantSection& s0,
                                      const CourantSection& s1) {
  b.require(Shape::TwoStage, 1, "courant_dorfman");
  Model e = first_stage(b);
  const auto& ea = e.algebra();
  const std::string& qn = b.fiber(0);
  const Element q = Element::generator(ea, qn);
  auto u = [&](const CourantSection& s) {
    Derivation d = extend(s.x, ea);
    d.set(qn, transport(s.f, ea));
    return d;
  };
  auto w = [&](const CourantSection& s) { return transport(s.c, ea) + q * transport(s.fbar, ea); };
  const Element eta = transport(b.form("H"), ea) + q * transport(b.form("Fbar"), ea);
  const Derivation u0 = u(s0), u1 = u(s1);
  const Derivation l0 = commutator(e.differential(), u0);
  const Derivation vec = commutator(l0, u1);
  const Element form = l0(w(s1)) - u1(e.d(w(s0))) - u1(u0(eta));
  const auto& base = b.base().algebra();
  const Derivation dq = partial(ea, qn);
  const Element fbar = dq(form);
  CourantSection out{restrict_to(vec, base), transport(vec.value(qn), base),
                     transport(form - q * fbar, base), transport(fbar, base)};
  return out;
}

/// Psi-bar^{-1} . Phi . Psi on sections: X + f d_theta + C + g theta -> X + g d_thetabar + C + f thetabar.
inline CourantSection courant_dual(const TDualPair& pair, const CourantSection& s) {
  return courant_untranslate(phi_iso(pair, courant_translation(pair.P, s)));
}

/// Dimension of sym^0 computed as the kernel of [Q, -] on all degree 0
/// derivations, next to the part reached by the structured ansatz.
struct Sym0Dimensions {
  std::size_t vect0 = 0;          // dim Vect^0 of the total algebra
  std::size_t full = 0;           // dim ker [Q, -] on Vect^0
  std::size_t ansatz = 0;         // dim of the ansatz span
  std::size_t ansatz_kernel = 0;  // dim (ansatz span ∩ ker [Q, -])
};

namespace detail {

/// Coordinates of a derivation of degree k: concatenated values on generators.
struct DerivationCoords {
  std::vector<DegreeBasis> pieces;
  std::vector<std::size_t> offset;
  std::size_t size = 0;

  DerivationCoords(const AlgebraPtr& alg, int k) {
    for (std::size_t i = 0; i < alg->size(); ++i) {
      pieces.emplace_back(alg, (*alg)[i].degree + k);
      offset.push_back(size);
      size += pieces.back().size();
    }
  }
  std::vector<Rational> coords(const Derivation& d) const {
    std::vector<Rational> v(size);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      auto c = pieces[i].coords(d.value(i));
      for (std::size_t j = 0; j < c.size(); ++j) v[offset[i] + j] = c[j];
    }
    return v;
  }
};

}  // namespace detail

/// Every degree k derivation of the algebra, one per (generator, monomial).
inline std::vector<Derivation> derivation_basis(const AlgebraPtr& alg, int k) {
  std::vector<Derivation> out;
  for (std::size_t i = 0; i < alg->size(); ++i)
    for (const auto& m : basis(*alg, (*alg)[i].degree + k)) {
      Derivation d(alg, k);
      d.set(i, Element::monomial(alg, m));
      out.push_back(std::move(d));
    }
  return out;
}

/// Basis of sym^0 = ker [Q, -] on all degree 0 derivations of the total algebra.
inline std::vector<Derivation> sym0_basis(const DgBundle& b) {
  const auto& alg = b.algebra();
  detail::DerivationCoords c1(alg, 1);
  auto all = derivation_basis(alg, 0);
  std::vector<std::vector<Rational>> img;
  for (const auto& d : all) img.push_back(c1.coords(commutator(b.Q(), d)));
  std::vector<Derivation> out;
  for (const auto& v : kernel(Matrix::from_columns(c1.size, img))) {
    Derivation d(alg, 0);
    for (std::size_t j = 0; j < v.size(); ++j)
      if (v[j] != 0) d += v[j] * all[j];
    out.push_back(std::move(d));
  }
  return out;
}

inline Sym0Dimensions sym0_dimensions(const DgBundle& b) {
  const auto& alg = b.algebra();
  const auto& base = b.base().algebra();
  detail::DerivationCoords c0(alg, 0), c1(alg, 1);
  Sym0Dimensions r;
  auto all = derivation_basis(alg, 0);
  r.vect0 = all.size();
  auto q_of = [&](const std::vector<Derivation>& ds, std::vector<std::vector<Rational>>& img) {
    std::vector<std::vector<Rational>> src;
    for (const auto& d : ds) {
      src.push_back(c0.coords(d));
      img.push_back(c1.coords(commutator(b.Q(), d)));
    }
    return src;
  };
  std::vector<std::vector<Rational>> img_all;
  q_of(all, img_all);
  r.full = all.size() - rank(Matrix::from_columns(c1.size, img_all));

  std::vector<SymElement> gens;
  for (const auto& xi : derivation_basis(base, -1)) {
    const auto z = Element(base);
    gens.emplace_back(b, 0, xi, z, z, z);
  }
  auto add_part = [&](int deg, int slot) {
    if (deg < 0) return;
    for (const auto& m : basis(*base, deg)) {
      Element e = Element::monomial(base, m), z(base);
      Derivation v(base, -1);
      if (slot == 0) gens.emplace_back(b, 0, v, e, z, z);
      if (slot == 1) gens.emplace_back(b, 0, v, z, e, z);
      if (slot == 2) gens.emplace_back(b, 0, v, z, z, e);
    }
  };
  SymElement probe(b, 0);
  add_part(probe.t_degree(), 1);
  if (probe.two_stage()) {
    add_part(probe.q_degree(), 0);
    add_part(probe.q_degree(), 2);
  }
  std::vector<Derivation> realized;
  for (const auto& g : gens) realized.push_back(g.realize());
  std::vector<std::vector<Rational>> img_ansatz;
  auto src = q_of(realized, img_ansatz);
  // Kernel of [Q, -] on the span: dim span - rank of the images of a basis of it.
  Matrix s = Matrix::from_columns(c0.size, src);
  r.ansatz = rank(s);
  auto piv = rref(s);
  std::vector<std::vector<Rational>> chosen;
  for (auto p : piv) chosen.push_back(img_ansatz[p]);
  r.ansatz_kernel = r.ansatz - rank(Matrix::from_columns(c1.size, chosen));
  return r;
}

}  // namespace dgcalc
