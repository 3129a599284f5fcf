#pragma once

// Seeded generators for randomized checks. Draws use rng() % n directly so a
// seed gives the same sequence on every standard library.

#include <cstdint>
#include <random>
#include <vector>

#include "symmetries.hpp"

namespace dgcalc {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(rng() % n); }

/// Small nonzero rational: integers in [-3, 3] \ {0}, occasionally halved.
inline Rational random_coefficient(Rng& rng) {
  long v = static_cast<long>(pick(rng, 6)) - 3;
  if (v >= 0) ++v;
  Rational r(v);
  if (pick(rng, 4) == 0) r /= 2;
  return r;
}

/// Random homogeneous element with up to `max_terms` terms (possibly zero).
inline Element random_element(const AlgebraPtr& alg, int degree, Rng& rng, std::size_t max_terms = 3) {
  Element x(alg);
  auto b = basis(*alg, degree);
  if (b.empty()) return x;
  const std::size_t n = 1 + pick(rng, max_terms);
  for (std::size_t i = 0; i < n; ++i) x.add_term(b[pick(rng, b.size())], random_coefficient(rng));
  return x;
}

/// Random closed element: a combination of cocycles of the model.
inline Element random_closed(const Model& m, int degree, Rng& rng, std::size_t max_terms = 2) {
  DegreeBasis b(m.algebra(), degree);
  auto z = kernel(differential_matrix(m, degree));
  Element x(m.algebra());
  if (z.empty()) return x;
  const std::size_t n = 1 + pick(rng, max_terms);
  for (std::size_t i = 0; i < n; ++i) x += b.element(z[pick(rng, z.size())]) * random_coefficient(rng);
  return x;
}

/// Random degree k derivation; each generator gets a value with probability 1/2.
inline Derivation random_derivation(const AlgebraPtr& alg, int k, Rng& rng, std::size_t max_terms = 2) {
  Derivation d(alg, k);
  for (std::size_t i = 0; i < alg->size(); ++i)
    if (pick(rng, 2) == 0) d.set(i, random_element(alg, (*alg)[i].degree + k, rng, max_terms));
  return d;
}

/// Degree -1 base derivations used as vector fields. They must pairwise
/// graded-commute, as contractions do.
class Frame {
 public:
  Frame(const Model& base, std::vector<Derivation> vectors) : base_(&base), vecs_(std::move(vectors)) {
    for (const auto& v : vecs_) {
      if (!same_algebra(v.ambient(), base.algebra())) throw AmbientMismatch();
      if (v.degree() != -1 && !v.is_zero()) throw DegreeMismatch("frame vectors have degree -1");
    }
    for (std::size_t i = 0; i < vecs_.size(); ++i)
      for (std::size_t j = i; j < vecs_.size(); ++j)
        if (!commutator(vecs_[i], vecs_[j]).is_zero())
          throw Error("frame vectors " + std::to_string(i) + " and " + std::to_string(j) +
                      " do not commute");
  }

  const Model& base() const noexcept { return *base_; }
  const std::vector<Derivation>& vectors() const noexcept { return vecs_; }
  bool empty() const noexcept { return vecs_.empty(); }

 private:
  const Model* base_;
  std::vector<Derivation> vecs_;
};

/// Contractions dual to the degree 1 generators, followed by `extra`.
inline Frame dual_frame(const Model& base, std::vector<Derivation> extra = {}) {
  const auto& alg = base.algebra();
  std::vector<Derivation> v;
  for (std::size_t i = 0; i < alg->size(); ++i) {
    if ((*alg)[i].degree != 1) continue;
    Derivation d(alg, -1);
    d.set(i, Element(alg, 1));
    v.push_back(std::move(d));
  }
  for (auto& e : extra) v.push_back(std::move(e));
  return Frame(base, std::move(v));
}

/// Constant-coefficient combination of frame vectors.
inline Derivation random_vector(const Frame& f, Rng& rng) {
  Derivation x(f.base().algebra(), -1);
  for (const auto& v : f.vectors())
    if (pick(rng, 2) == 0) x += random_coefficient(rng) * v;
  return x;
}

/// Random structured element of degree k (0 or -1 use the frame for the vector part).
inline SymElement random_sym(const DgBundle& b, int k, const Frame& f, Rng& rng) {
  const auto& base = b.base().algebra();
  SymElement probe(b, k);
  Derivation vec = k >= -1 ? random_vector(f, rng) : random_derivation(base, k, rng, 1);
  Element q(base), tq(base);
  if (probe.two_stage()) {
    q = random_element(base, probe.q_degree() + k, rng);
    tq = random_element(base, probe.q_degree() + k, rng);
  }
  Element t = random_element(base, probe.t_degree() + k, rng);
  return SymElement(b, k, std::move(vec), std::move(q), std::move(t), std::move(tq));
}

/// Random element of sym^0, drawn from a precomputed basis.
inline Derivation random_sym0(const AlgebraPtr& alg, const std::vector<Derivation>& basis, Rng& rng) {
  Derivation d(alg, 0);
  for (const auto& v : basis)
    if (pick(rng, 3) == 0) d += random_coefficient(rng) * v;
  return d;
}

}  // namespace dgcalc
