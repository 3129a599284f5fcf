#pragma once

// Graded derivations stored by their values on generators.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "graded.hpp"

namespace dgcalc {

class Derivation {
 public:
  Derivation(AlgebraPtr alg, int degree) : alg_(std::move(alg)), degree_(degree) {
    values_.assign(alg_->size(), Element(alg_));
  }

  Derivation(AlgebraPtr alg, int degree, std::vector<Element> values)
      : alg_(std::move(alg)), degree_(degree), values_(std::move(values)) {
    if (values_.size() != alg_->size()) throw Error("derivation needs one value per generator");
    for (std::size_t i = 0; i < values_.size(); ++i) validate(i);
  }

  /// Values given by generator name; unnamed generators map to zero.
  static Derivation from_map(const AlgebraPtr& alg, int degree,
                             const std::map<std::string, Element>& values) {
    Derivation d(alg, degree);
    for (const auto& [name, v] : values) d.set(name, v);
    return d;
  }

  const AlgebraPtr& ambient() const noexcept { return alg_; }
  const Algebra& algebra() const noexcept { return *alg_; }
  int degree() const noexcept { return degree_; }
  const std::vector<Element>& values() const noexcept { return values_; }
  const Element& value(std::size_t i) const { return values_.at(i); }
  const Element& value(std::string_view name) const { return values_.at(alg_->index(name)); }

  void set(std::size_t i, Element v) {
    values_.at(i) = std::move(v);
    validate(i);
  }
  void set(std::string_view name, Element v) { set(alg_->index(name), std::move(v)); }

  bool is_zero() const {
    for (const auto& v : values_)
      if (!v.is_zero()) return false;
    return true;
  }

  Element operator()(const Element& x) const {
    if (!same_algebra(alg_, x.ambient())) throw AmbientMismatch();
    return apply_derivation(alg_, degree_, values_, x);
  }

  Derivation& operator+=(const Derivation& o) {
    check(o);
    if (o.is_zero()) return *this;
    adopt_degree(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  Derivation& operator-=(const Derivation& o) {
    check(o);
    if (o.is_zero()) return *this;
    adopt_degree(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  Derivation& operator*=(const Rational& s) {
    for (auto& v : values_) v *= s;
    return *this;
  }
  Derivation operator-() const {
    Derivation r(*this);
    r *= Rational(-1);
    return r;
  }
  friend Derivation operator+(Derivation a, const Derivation& b) { return a += b; }
  friend Derivation operator-(Derivation a, const Derivation& b) { return a -= b; }
  friend Derivation operator*(Derivation a, const Rational& s) { return a *= s; }
  friend Derivation operator*(const Rational& s, Derivation a) { return a *= s; }

  /// Left multiplication by a homogeneous element: (f D)(x) = f D(x).
  friend Derivation operator*(const Element& f, const Derivation& d) {
    if (f.is_zero()) return Derivation(d.alg_, d.degree_);
    auto k = f.degree();
    if (!k) throw DegreeMismatch("coefficient of a derivation must be homogeneous");
    Derivation r(d.alg_, d.degree_ + *k);
    for (std::size_t i = 0; i < d.values_.size(); ++i) r.values_[i] = f * d.values_[i];
    return r;
  }

  /// Equality on generators; derivations of different degree are equal only when both vanish.
  friend bool operator==(const Derivation& a, const Derivation& b) {
    a.check_ambient(b);
    if (a.degree_ != b.degree_) return a.is_zero() && b.is_zero();
    return a.values_ == b.values_;
  }

 private:
  void validate(std::size_t i) const {
    const Element& v = values_[i];
    if (!same_algebra(alg_, v.ambient())) throw AmbientMismatch();
    const int want = (*alg_)[i].degree + degree_;
    if (!v.has_degree(want))
      throw DegreeMismatch("value on '" + (*alg_)[i].name + "' must have degree " +
                           std::to_string(want) + ", got " + to_string(v));
  }
  void check_ambient(const Derivation& o) const {
    if (!same_algebra(alg_, o.alg_)) throw AmbientMismatch();
  }
  void check(const Derivation& o) {
    check_ambient(o);
    if (degree_ != o.degree_ && !o.is_zero() && !is_zero())
      throw DegreeMismatch("cannot add derivations of degree " + std::to_string(degree_) +
                           " and " + std::to_string(o.degree_));
  }
  void adopt_degree(const Derivation& o) {
    if (is_zero() && degree_ != o.degree_) degree_ = o.degree_;
  }

  AlgebraPtr alg_;
  int degree_;
  std::vector<Element> values_;
};

/// Coordinate derivation d/dg of degree -|g|.
inline Derivation partial(const AlgebraPtr& alg, std::string_view name) {
  const std::size_t i = alg->index(name);
  Derivation d(alg, -(*alg)[i].degree);
  d.set(i, Element(alg, 1));
  return d;
}

/// [D1, D2] = D1 D2 - (-1)^{|D1||D2|} D2 D1.
inline Derivation commutator(const Derivation& a, const Derivation& b) {
  if (!same_algebra(a.ambient(), b.ambient())) throw AmbientMismatch();
  const auto& alg = a.ambient();
  const int s = koszul(a.degree(), b.degree());
  std::vector<Element> vals;
  vals.reserve(alg->size());
  for (std::size_t i = 0; i < alg->size(); ++i) {
    Element v = a(b.value(i));
    if (s > 0)
      v -= b(a.value(i));
    else
      v += b(a.value(i));
    vals.push_back(std::move(v));
  }
  return Derivation(alg, a.degree() + b.degree(), std::move(vals));
}

/// Re-expresses a derivation on a larger algebra sharing generator names;
/// generators absent from the source are sent to zero.
inline Derivation extend(const Derivation& d, const AlgebraPtr& target) {
  Derivation out(target, d.degree());
  const Algebra& src = d.algebra();
  for (std::size_t i = 0; i < src.size(); ++i) {
    auto j = target->find(src[i].name);
    if (!j) throw UnknownGenerator(src[i].name);
    out.set(*j, transport(d.value(i), target));
  }
  return out;
}

/// Restriction to a subalgebra closed under d; throws if some value leaves it.
inline Derivation restrict_to(const Derivation& d, const AlgebraPtr& target) {
  Derivation out(target, d.degree());
  for (std::size_t j = 0; j < target->size(); ++j)
    out.set(j, transport(d.value((*target)[j].name), target));
  return out;
}

struct McResult {
  bool pass = true;
  std::string generator;
  std::optional<Element> residue;

  explicit operator bool() const noexcept { return pass; }
};

/// Checks D^2 = [D,D]/2 = 0 on every generator, reporting the first failure.
inline McResult maurer_cartan_check(const Derivation& d) {
  if (d.degree() != 1) throw DegreeMismatch("Maurer-Cartan check needs a degree 1 derivation");
  for (std::size_t i = 0; i < d.algebra().size(); ++i) {
    Element r = d(d.value(i));
    if (!r.is_zero()) return McResult{false, d.algebra()[i].name, std::move(r)};
  }
  return {};
}

inline constexpr int kDefaultNilpotencyCap = 8;

/// e^{ad_V} Q = sum_k ad_V^k(Q) / k!, requiring ad_V^k(Q) = 0 for some k <= cap.
inline Derivation gauge_transform(const Derivation& q, const Derivation& v,
                                  int nilpotency_cap = kDefaultNilpotencyCap) {
  if (v.degree() != 0 && !v.is_zero())
    throw DegreeMismatch("gauge generator must have degree 0");
  Derivation out = q;
  Derivation term = q;
  Rational fact = 1;
  for (int k = 1;; ++k) {
    term = commutator(v, term);
    if (term.is_zero()) return out;
    if (k > nilpotency_cap)
      throw NotNilpotent("ad_V is not nilpotent within " + std::to_string(nilpotency_cap) +
                         " steps");
    fact *= k;
    out += term * Rational(1 / fact);
  }
}

/// Q + [Q, X0].
inline Derivation homologous_shift(const Derivation& q, const Derivation& x0) {
  if (x0.is_zero()) return q;
  if (x0.degree() != 0) throw DegreeMismatch("homologous shift needs a degree 0 derivation");
  return q + commutator(q, x0);
}

inline std::string to_string(const Derivation& d) {
  std::string s;
  for (std::size_t i = 0; i < d.algebra().size(); ++i) {
    if (d.value(i).is_zero()) continue;
    if (!s.empty()) s += ", ";
    s += d.algebra()[i].name + " -> " + to_string(d.value(i));
  }
  return s.empty() ? "0" : "{" + s + "}";
}

}  // namespace dgcalc
