#pragma once

// Finitely generated CDGA models: generators, differential, formal dimension.

#include <map>
#include <string>
#include <vector>

#include "derivation.hpp"

namespace dgcalc {

class Model {
 public:
  /// Validates degrees of d on generators and d^2 = 0.
  Model(std::string name, AlgebraPtr alg, Derivation d, int formal_dimension)
      : name_(std::move(name)), alg_(std::move(alg)), d_(std::move(d)), dim_(formal_dimension) {
    if (!same_algebra(alg_, d_.ambient())) throw AmbientMismatch();
    if (d_.degree() != 1 && !d_.is_zero()) throw DegreeMismatch("differential must have degree 1");
    if (d_.degree() != 1) d_ = Derivation(alg_, 1);
    for (std::size_t i = 0; i < alg_->size(); ++i) {
      Element r = d_(d_.value(i));
      if (!r.is_zero()) throw NotSquareZero((*alg_)[i].name, to_string(r));
    }
  }

  const std::string& name() const noexcept { return name_; }
  const AlgebraPtr& algebra() const noexcept { return alg_; }
  const Derivation& differential() const noexcept { return d_; }
  int formal_dimension() const noexcept { return dim_; }

  Element d(const Element& x) const { return d_(x); }
  Element gen(std::string_view name, std::uint32_t p = 1) const {
    return Element::generator(alg_, name, p);
  }
  Element one() const { return Element(alg_, 1); }
  Element zero() const { return Element(alg_); }

 private:
  std::string name_;
  AlgebraPtr alg_;
  Derivation d_;
  int dim_;
};

/// Builds a model from (name, degree) pairs and differential values given as
/// functions of the freshly built algebra.
template <class DiffFn>
Model make_model(std::string name, std::vector<Generator> gens, int formal_dimension,
                 DiffFn&& diff) {
  auto alg = make_algebra(std::move(gens));
  std::map<std::string, Element> values = diff(alg);
  return Model(std::move(name), alg, Derivation::from_map(alg, 1, values), formal_dimension);
}

inline Model make_model(std::string name, std::vector<Generator> gens, int formal_dimension) {
  return make_model(std::move(name), std::move(gens), formal_dimension,
                    [](const AlgebraPtr&) { return std::map<std::string, Element>{}; });
}

/// Tensor product A ⊗ B with generators of A first; names must be disjoint.
inline Model tensor(const Model& a, const Model& b, std::string name = {}) {
  std::vector<Generator> gens = a.algebra()->generators();
  for (const auto& g : b.algebra()->generators()) gens.push_back(g);
  auto alg = make_algebra(std::move(gens));
  Derivation d = extend(a.differential(), alg) + extend(b.differential(), alg);
  if (name.empty()) name = a.name() + "x" + b.name();
  return Model(std::move(name), alg, std::move(d), a.formal_dimension() + b.formal_dimension());
}

}  // namespace dgcalc
