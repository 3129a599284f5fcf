#pragma once

// Free graded-commutative algebras over Q: generators, normalized monomials,
// and elements as sparse rational combinations of monomials.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace dgcalc {

using Rational = mpq_class;

inline std::string to_string(const Rational& r) { return r.get_str(); }

struct Generator {
  std::string name;
  int degree = 1;

  bool odd() const noexcept { return degree % 2 != 0; }
  friend bool operator==(const Generator&, const Generator&) = default;
};

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(s.front())) return false;
  return std::all_of(s.begin(), s.end(), [&](char c) { return alpha(c) || digit(c); });
}

/// Ordered generator list of a free graded-commutative algebra.
class Algebra {
 public:
  explicit Algebra(std::vector<Generator> gens) : gens_(std::move(gens)) {
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      const auto& g = gens_[i];
      if (!is_identifier(g.name)) throw Error("invalid generator name '" + g.name + "'");
      if (g.degree <= 0)
        throw DegreeMismatch("generator '" + g.name + "' must have positive degree, got " +
                             std::to_string(g.degree));
      if (!index_.emplace(g.name, i).second)
        throw Error("duplicate generator '" + g.name + "'");
    }
  }

  std::size_t size() const noexcept { return gens_.size(); }
  const Generator& operator[](std::size_t i) const { return gens_.at(i); }
  const std::vector<Generator>& generators() const noexcept { return gens_; }

  std::optional<std::size_t> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t index(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw UnknownGenerator(std::string(name));
  }

  /// True when every generator is odd, i.e. the algebra is finite-dimensional.
  bool exterior() const {
    return std::all_of(gens_.begin(), gens_.end(), [](const Generator& g) { return g.odd(); });
  }
  int top_exterior_degree() const {
    int s = 0;
    for (const auto& g : gens_) s += g.degree;
    return s;
  }

  friend bool operator==(const Algebra& a, const Algebra& b) { return a.gens_ == b.gens_; }

 private:
  std::vector<Generator> gens_;
  std::unordered_map<std::string, std::size_t> index_;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

inline AlgebraPtr make_algebra(std::vector<Generator> gens) {
  return std::make_shared<const Algebra>(std::move(gens));
}

inline bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b) {
  return a == b || (a && b && *a == *b);
}

/// Exponent vector over the generators of an algebra. Odd exponents are 0 or 1.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::vector<std::uint32_t> exps) : exps_(std::move(exps)) {}

  static Monomial unit(std::size_t n) { return Monomial(std::vector<std::uint32_t>(n, 0)); }
  static Monomial power(std::size_t n, std::size_t gen, std::uint32_t p = 1) {
    Monomial m = unit(n);
    m.exps_.at(gen) = p;
    return m;
  }

  std::size_t size() const noexcept { return exps_.size(); }
  std::uint32_t operator[](std::size_t i) const { return exps_[i]; }
  std::uint32_t& operator[](std::size_t i) { return exps_[i]; }
  const std::vector<std::uint32_t>& exponents() const noexcept { return exps_; }

  bool is_unit() const {
    return std::all_of(exps_.begin(), exps_.end(), [](auto e) { return e == 0; });
  }
  int degree(const Algebra& alg) const {
    int d = 0;
    for (std::size_t i = 0; i < exps_.size(); ++i) d += static_cast<int>(exps_[i]) * alg[i].degree;
    return d;
  }

  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  std::vector<std::uint32_t> exps_;
};

/// Canonical term order: lexicographic on exponent vectors, larger first, so
/// that monomials led by earlier generators are listed first.
struct MonomialOrder {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return a.exponents() > b.exponents();
  }
};

/// Product of two normalized monomials. Returns the Koszul sign (+1/-1), or 0
/// when an odd generator would appear twice.
inline int multiply_monomials(const Algebra& alg, const Monomial& a, const Monomial& b,
                              Monomial& out) {
  const std::size_t n = alg.size();
  std::vector<std::uint32_t> e(n);
  // odd_after[i] = number of odd factors of `a` at positions > i
  int odd_after = 0;
  int swaps = 0;
  for (std::size_t k = n; k-- > 0;) {
    const bool odd = alg[k].odd();
    if (odd && a[k] + b[k] > 1) return 0;
    if (odd && b[k] == 1) swaps += odd_after;
    if (odd && a[k] == 1) ++odd_after;
    e[k] = a[k] + b[k];
  }
  out = Monomial(std::move(e));
  return (swaps % 2 == 0) ? 1 : -1;
}

/// An element of a free graded-commutative algebra.
class Element {
 public:
  using Terms = std::map<Monomial, Rational, MonomialOrder>;

  explicit Element(AlgebraPtr alg) : alg_(std::move(alg)) {}
  Element(AlgebraPtr alg, const Rational& c) : alg_(std::move(alg)) {
    if (c != 0) terms_.emplace(Monomial::unit(alg_->size()), c);
  }

  static Element monomial(AlgebraPtr alg, Monomial m, const Rational& c = 1) {
    Element e(std::move(alg));
    e.add_term(std::move(m), c);
    return e;
  }
  static Element generator(const AlgebraPtr& alg, std::string_view name, std::uint32_t p = 1) {
    return monomial(alg, Monomial::power(alg->size(), alg->index(name), p));
  }
  static Element generator(const AlgebraPtr& alg, std::size_t i, std::uint32_t p = 1) {
    return monomial(alg, Monomial::power(alg->size(), i, p));
  }

  const AlgebraPtr& ambient() const noexcept { return alg_; }
  const Algebra& algebra() const noexcept { return *alg_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  void add_term(Monomial m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(std::move(m), c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Rational coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  /// The unique degree of a nonzero homogeneous element.
  std::optional<int> degree() const {
    std::optional<int> d;
    for (const auto& [m, c] : terms_) {
      int k = m.degree(*alg_);
      if (d && *d != k) return std::nullopt;
      d = k;
    }
    return d;
  }
  bool homogeneous() const { return is_zero() || degree().has_value(); }
  bool has_degree(int k) const {
    for (const auto& [m, c] : terms_)
      if (m.degree(*alg_) != k) return false;
    return true;
  }
  std::map<int, Element> components() const {
    std::map<int, Element> out;
    for (const auto& [m, c] : terms_) {
      auto it = out.try_emplace(m.degree(*alg_), alg_).first;
      it->second.add_term(m, c);
    }
    return out;
  }
  Element component(int k) const {
    Element out(alg_);
    for (const auto& [m, c] : terms_)
      if (m.degree(*alg_) == k) out.add_term(m, c);
    return out;
  }

  Element& operator+=(const Element& o) {
    check(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Element& operator-=(const Element& o) {
    check(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  Element& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
    } else {
      for (auto& [m, c] : terms_) c *= s;
    }
    return *this;
  }
  Element operator-() const {
    Element r(*this);
    r *= Rational(-1);
    return r;
  }

  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(Element a, const Rational& s) { return a *= s; }
  friend Element operator*(const Rational& s, Element a) { return a *= s; }
  friend Element operator*(const Element& a, const Element& b) {
    a.check(b);
    Element r(a.alg_);
    Monomial out;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        int s = multiply_monomials(*a.alg_, ma, mb, out);
        if (s != 0) r.add_term(out, s > 0 ? Rational(ca * cb) : Rational(-ca * cb));
      }
    return r;
  }
  friend bool operator==(const Element& a, const Element& b) {
    a.check(b);
    return a.terms_ == b.terms_;
  }

 private:
  void check(const Element& o) const {
    if (!same_algebra(alg_, o.alg_)) throw AmbientMismatch();
  }

  AlgebraPtr alg_;
  Terms terms_;
};

inline Element mul(const Element& a, const Element& b) { return a * b; }

inline Element constant(const AlgebraPtr& alg, const Rational& c) { return Element(alg, c); }

/// Sign (-1)^{a*b}.
inline int koszul(int a, int b) { return ((a * b) % 2 == 0) ? 1 : -1; }

/// Degree-wise monomial basis, listed in canonical term order.
inline std::vector<Monomial> basis(const Algebra& alg, int degree) {
  std::vector<Monomial> out;
  if (degree < 0) return out;
  std::vector<std::uint32_t> e(alg.size(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int rem) {
    if (i == alg.size()) {
      if (rem == 0) out.emplace_back(e);
      return;
    }
    const int d = alg[i].degree;
    const int cap = alg[i].odd() ? std::min(1, rem / d) : rem / d;
    for (int p = cap; p >= 0; --p) {
      e[i] = static_cast<std::uint32_t>(p);
      rec(i + 1, rem - p * d);
    }
    e[i] = 0;
  };
  rec(0, degree);
  std::sort(out.begin(), out.end(), MonomialOrder{});
  return out;
}

/// Extends generator values to the derivation of the given degree. Acts from
/// the left: D(ab) = D(a) b + (-1)^{|D||a|} a D(b).
inline Element apply_derivation(const AlgebraPtr& alg, int deg, std::span<const Element> values,
                                const Element& x) {
  Element out(alg);
  const std::size_t n = alg->size();
  for (const auto& [m, c] : x.terms()) {
    int prefix_degree = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t e = m[i];
      if (e == 0) continue;
      if (!values[i].is_zero()) {
        Monomial left = Monomial::unit(n);
        for (std::size_t j = 0; j < i; ++j) left[j] = m[j];
        left[i] = e - 1;
        Monomial right = Monomial::unit(n);
        for (std::size_t j = i + 1; j < n; ++j) right[j] = m[j];
        Rational coeff = c * static_cast<long>(e) * koszul(deg, prefix_degree);
        out += Element::monomial(alg, std::move(left), coeff) * values[i] *
               Element::monomial(alg, std::move(right));
      }
      prefix_degree += static_cast<int>(e) * (*alg)[i].degree;
    }
  }
  return out;
}

/// Rewrites an element in another algebra by matching generator names.
inline Element transport(const Element& x, const AlgebraPtr& target,
                         const std::map<std::string, std::string>& rename = {}) {
  if (same_algebra(x.ambient(), target) && rename.empty()) return x;
  const Algebra& src = x.algebra();
  std::vector<std::optional<std::size_t>> where(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    auto it = rename.find(src[i].name);
    where[i] = target->find(it == rename.end() ? src[i].name : it->second);
  }
  Element out(target);
  for (const auto& [m, c] : x.terms()) {
    Element term(target, c);
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (m[i] == 0) continue;
      if (!where[i]) throw UnknownGenerator(src[i].name);
      if ((*target)[*where[i]].degree != src[i].degree)
        throw DegreeMismatch("generator '" + src[i].name + "' changes degree under transport");
      term = term * Element::generator(target, *where[i], m[i]);
    }
    out += term;
  }
  return out;
}

inline std::string to_string(const Monomial& m, const Algebra& alg) {
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!s.empty()) s += ' ';
    s += alg[i].name;
    if (m[i] > 1) s += "^" + std::to_string(m[i]);
  }
  return s.empty() ? "1" : s;
}

/// Parseable rendering: terms in canonical order, wedge by juxtaposition.
inline std::string to_string(const Element& x) {
  if (x.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [m, c] : x.terms()) {
    Rational mag = abs(c);
    if (first) {
      if (c < 0) s += "-";
    } else {
      s += (c < 0) ? " - " : " + ";
    }
    first = false;
    if (m.is_unit()) {
      s += mag.get_str();
    } else {
      if (mag != 1) s += mag.get_str() + " ";
      s += to_string(m, x.algebra());
    }
  }
  return s;
}

inline std::ostream& operator<<(std::ostream& os, const Element& x) { return os << to_string(x); }

}  // namespace dgcalc
