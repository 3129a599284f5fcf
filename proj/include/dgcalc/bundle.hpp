#pragma once

// Extensions of a base model by shifted-line generators, with the induced
// homological vector field Q.

#include <map>
#include <string>
#include <vector>

#include "model.hpp"

namespace dgcalc {

enum class Shape {
  Plain,           // no fibers; the base model itself
  Rn,              // one fiber t of degree n: Q = d + Theta d/dt
  TwoStage,        // q of degree m, t of degree 2m: Q = d + F d/dq + (H + q Fbar) d/dt
  Correspondence,  // q, qbar of degree 1, t of degree 2 over a common base
};

inline const char* to_string(Shape s) {
  switch (s) {
    case Shape::Plain: return "plain";
    case Shape::Rn: return "rn";
    case Shape::TwoStage: return "two-stage";
    case Shape::Correspondence: return "correspondence";
  }
  return "?";
}

class DgBundle {
 public:
  DgBundle(Model base, Model total, Shape shape, int n, std::vector<std::string> fibers,
           std::map<std::string, Element> forms)
      : base_(std::move(base)),
        total_(std::move(total)),
        shape_(shape),
        n_(n),
        fibers_(std::move(fibers)),
        forms_(std::move(forms)) {}

  const Model& base() const noexcept { return base_; }
  const Model& total() const noexcept { return total_; }
  const AlgebraPtr& algebra() const noexcept { return total_.algebra(); }
  const Derivation& Q() const noexcept { return total_.differential(); }
  Shape shape() const noexcept { return shape_; }
  /// Fiber degree for Rn; the degree m of q for TwoStage.
  int n() const noexcept { return n_; }
  int formal_dimension() const noexcept { return base_.formal_dimension(); }
  const std::vector<std::string>& fibers() const noexcept { return fibers_; }
  const std::string& fiber(std::size_t i) const { return fibers_.at(i); }

  bool has_form(const std::string& name) const { return forms_.count(name) != 0; }
  /// Structural form in the base algebra.
  const Element& form(const std::string& name) const {
    auto it = forms_.find(name);
    if (it == forms_.end()) throw ShapeMismatch("bundle has no structural form '" + name + "'");
    return it->second;
  }
  const std::map<std::string, Element>& forms() const noexcept { return forms_; }

  /// Base element viewed in the total algebra.
  Element lift(const Element& x) const { return transport(x, algebra()); }
  Element gen(std::string_view name, std::uint32_t p = 1) const {
    return Element::generator(algebra(), name, p);
  }

  void require(Shape s, int n = 0, const char* what = "command") const {
    if (shape_ != s || (n != 0 && n_ != n))
      throw ShapeMismatch(std::string(what) + " needs a " + dgcalc::to_string(s) +
                          (n ? " bundle with n=" + std::to_string(n) : std::string(" bundle")) +
                          ", got " + dgcalc::to_string(shape_) +
                          (shape_ == Shape::Plain ? "" : " n=" + std::to_string(n_)));
  }

 private:
  Model base_;
  Model total_;
  Shape shape_;
  int n_;
  std::vector<std::string> fibers_;
  std::map<std::string, Element> forms_;
};

namespace detail {

inline void require_degree(const Element& x, int k, const std::string& what) {
  if (!x.has_degree(k))
    throw DegreeMismatch(what + " must have degree " + std::to_string(k) + ", got " + to_string(x));
}

inline AlgebraPtr extended_algebra(const Model& base, const std::vector<Generator>& fibers) {
  std::vector<Generator> gens = base.algebra()->generators();
  gens.insert(gens.end(), fibers.begin(), fibers.end());
  return make_algebra(std::move(gens));
}

inline Model checked_total(const Model& base, const Derivation& q) {
  if (auto mc = maurer_cartan_check(q); !mc)
    throw MaurerCartanError(mc.generator, to_string(*mc.residue));
  return Model(base.name(), q.ambient(), q, base.formal_dimension());
}

}  // namespace detail

/// Algebra of an Rn bundle: base generators followed by t.
inline AlgebraPtr rn_algebra(const Model& base, int n, const std::string& t = "t") {
  return detail::extended_algebra(base, {{t, n}});
}

/// d + Theta d/dt on an Rn algebra, not checked for Q^2 = 0.
inline Derivation rn_field(const Model& base, const AlgebraPtr& alg, const Element& theta,
                           const std::string& t = "t") {
  Derivation q = extend(base.differential(), alg);
  q.set(t, transport(theta, alg));
  return q;
}

inline DgBundle plain_bundle(const Model& base) {
  return DgBundle(base, base, Shape::Plain, 0, {}, {});
}

inline DgBundle rn_bundle(const Model& base, int n, const Element& theta,
                          const std::string& t = "t") {
  if (n <= 0) throw DegreeMismatch("fiber degree must be positive");
  detail::require_degree(theta, n + 1, "Theta");
  auto alg = rn_algebra(base, n, t);
  Derivation q = rn_field(base, alg, theta, t);
  return DgBundle(base, detail::checked_total(base, q), Shape::Rn, n, {t}, {{"Theta", theta}});
}

/// Algebra of a two-stage bundle: base generators, then q (degree m), then t (degree 2m).
inline AlgebraPtr two_stage_algebra(const Model& base, int m = 1, const std::string& q = "q",
                                    const std::string& t = "t") {
  return detail::extended_algebra(base, {{q, m}, {t, 2 * m}});
}

/// d + F d/dq + (H + q Fbar) d/dt, not checked for Q^2 = 0.
inline Derivation two_stage_field(const Model& base, const AlgebraPtr& alg, const Element& f,
                                  const Element& fbar, const Element& h,
                                  const std::string& q = "q", const std::string& t = "t") {
  Derivation out = extend(base.differential(), alg);
  out.set(q, transport(f, alg));
  out.set(t, transport(h, alg) + Element::generator(alg, q) * transport(fbar, alg));
  return out;
}

inline DgBundle two_stage(const Model& base, const Element& f, const Element& fbar,
                          const Element& h, int m = 1, const std::string& q = "q",
                          const std::string& t = "t") {
  if (m <= 0 || m % 2 == 0) throw DegreeMismatch("q must have positive odd degree");
  detail::require_degree(f, m + 1, "F");
  detail::require_degree(fbar, m + 1, "Fbar");
  detail::require_degree(h, 2 * m + 1, "H");
  auto alg = two_stage_algebra(base, m, q, t);
  Derivation field = two_stage_field(base, alg, f, fbar, h, q, t);
  return DgBundle(base, detail::checked_total(base, field), Shape::TwoStage, m, {q, t},
                  {{"F", f}, {"Fbar", fbar}, {"H", h}});
}

/// The R[6]-over-R[3] bundle d + F4 d/dq + (F7 + q F4/2) d/dt.
inline DgBundle e6_bundle(const Model& base, const Element& f4, const Element& f7,
                          const std::string& q = "q", const std::string& t = "t") {
  DgBundle b = two_stage(base, f4, f4 * Rational(1, 2), f7, 3, q, t);
  auto forms = b.forms();
  forms.emplace("F4", f4);
  forms.emplace("F7", f7);
  return DgBundle(b.base(), b.total(), Shape::TwoStage, 3, b.fibers(), std::move(forms));
}

/// Fiber product over the base: d + F d/dq + Fbar d/dqbar + (H + q Fbar) d/dt.
inline DgBundle correspondence(const Model& base, const Element& f, const Element& fbar,
                               const Element& h, const std::string& q = "q",
                               const std::string& qbar = "qbar", const std::string& t = "t") {
  detail::require_degree(f, 2, "F");
  detail::require_degree(fbar, 2, "Fbar");
  detail::require_degree(h, 3, "H");
  auto alg = detail::extended_algebra(base, {{q, 1}, {qbar, 1}, {t, 2}});
  Derivation field = extend(base.differential(), alg);
  field.set(q, transport(f, alg));
  field.set(qbar, transport(fbar, alg));
  field.set(t, transport(h, alg) + Element::generator(alg, q) * transport(fbar, alg));
  return DgBundle(base, detail::checked_total(base, field), Shape::Correspondence, 1,
                  {q, qbar, t}, {{"F", f}, {"Fbar", fbar}, {"H", h}});
}

/// Replaces Q (e.g. by a gauge transform) and re-reads the structural forms.
/// For two-stage bundles Q(q) = F and Q(t) = H + q Fbar are decomposed again.
inline DgBundle with_field(const DgBundle& b, const Derivation& q) {
  if (!same_algebra(q.ambient(), b.algebra())) throw AmbientMismatch();
  Model total = detail::checked_total(b.base(), q);
  const Model& base = b.base();
  for (std::size_t i = 0; i < base.algebra()->size(); ++i) {
    const auto& name = (*base.algebra())[i].name;
    if (q.value(name) != b.lift(base.differential().value(i)))
      throw ShapeMismatch("new field changes the base differential on '" + name + "'");
  }
  auto forms = b.forms();
  auto to_base = [&](const Element& x) { return transport(x, base.algebra()); };
  if (b.shape() == Shape::Rn) {
    forms.insert_or_assign("Theta", to_base(q.value(b.fiber(0))));
  } else if (b.shape() == Shape::TwoStage) {
    const auto& qn = b.fiber(0);
    const Element qt = q.value(b.fiber(1));
    const Element fbar = partial(b.algebra(), qn)(qt);
    const Element h = qt - b.gen(qn) * fbar;
    forms.insert_or_assign("F", to_base(q.value(qn)));
    forms.insert_or_assign("Fbar", to_base(fbar));
    forms.insert_or_assign("H", to_base(h));
    if (forms.count("F4")) {
      forms.insert_or_assign("F4", forms.at("F"));
      forms.insert_or_assign("F7", forms.at("H"));
    }
  } else if (b.shape() != Shape::Plain) {
    throw ShapeMismatch("with_field does not re-read correspondence bundles");
  }
  return DgBundle(base, std::move(total), b.shape(), b.n(), b.fibers(), std::move(forms));
}

/// The sub-bundle over the base generated by q alone: (base ⊗ Λ[q], d + F d/dq).
inline Model first_stage(const DgBundle& b) {
  b.require(Shape::TwoStage, 0, "first_stage");
  std::vector<Generator> gens = b.base().algebra()->generators();
  gens.push_back({b.fiber(0), b.n()});
  auto alg = make_algebra(std::move(gens));
  return Model(b.base().name() + "_E", alg, restrict_to(b.Q(), alg), b.formal_dimension());
}

}  // namespace dgcalc
