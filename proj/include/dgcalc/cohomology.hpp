#pragma once

// Degree-wise cohomology over Q, twisted cohomology, and related comparisons.

#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bundle.hpp"
#include "linalg.hpp"

namespace dgcalc {

/// Default degree cap 2 dim + 6, overridable through DGCALC_DEGREE_CAP.
/// Value of DGCALC_DEGREE_CAP when set to a positive integer.
inline std::optional<int> degree_cap_override() {
  if (const char* env = std::getenv("DGCALC_DEGREE_CAP")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return std::nullopt;
}

inline int default_degree_cap(int formal_dimension) {
  return degree_cap_override().value_or(2 * formal_dimension + 6);
}

/// Basis of one degree with a reverse index.
class DegreeBasis {
 public:
  DegreeBasis(const AlgebraPtr& alg, int degree) : alg_(alg), degree_(degree), basis_(basis(*alg, degree)) {
    for (std::size_t i = 0; i < basis_.size(); ++i) index_.emplace(basis_[i], i);
  }

  int degree() const noexcept { return degree_; }
  std::size_t size() const noexcept { return basis_.size(); }
  const std::vector<Monomial>& monomials() const noexcept { return basis_; }
  const Monomial& operator[](std::size_t i) const { return basis_[i]; }

  std::vector<Rational> coords(const Element& x) const {
    std::vector<Rational> v(basis_.size());
    for (const auto& [m, c] : x.terms()) {
      auto it = index_.find(m);
      if (it == index_.end())
        throw DegreeMismatch("element " + to_string(x) + " is not of degree " + std::to_string(degree_));
      v[it->second] = c;
    }
    return v;
  }
  Element element(const std::vector<Rational>& v) const {
    Element x(alg_);
    for (std::size_t i = 0; i < v.size(); ++i) x.add_term(basis_[i], v[i]);
    return x;
  }
  Element element(std::size_t i) const { return Element::monomial(alg_, basis_[i]); }

 private:
  AlgebraPtr alg_;
  int degree_;
  std::vector<Monomial> basis_;
  std::map<Monomial, std::size_t, MonomialOrder> index_;
};

/// Matrix of a homogeneous linear map given on monomials, from degree `from` of
/// `src` to the appropriate degree of `dst`.
template <class F>
Matrix linear_map_matrix(const DegreeBasis& src, const DegreeBasis& dst, F&& f) {
  Matrix m(dst.size(), src.size());
  for (std::size_t j = 0; j < src.size(); ++j) {
    auto col = dst.coords(f(src.element(j)));
    for (std::size_t i = 0; i < dst.size(); ++i) m(i, j) = col[i];
  }
  return m;
}

/// One degree of the cochain complex of a model (or bundle total space).
struct CochainSpace {
  int degree;
  DegreeBasis basis;
  DegreeBasis next;
  Matrix d_matrix;  // degree -> degree + 1
};

inline CochainSpace cochain_space(const Model& m, int k) {
  DegreeBasis b(m.algebra(), k), n(m.algebra(), k + 1);
  Matrix d = linear_map_matrix(b, n, [&](const Element& x) { return m.d(x); });
  return CochainSpace{k, std::move(b), std::move(n), std::move(d)};
}

inline Matrix differential_matrix(const Model& m, int k) {
  if (k < 0) return Matrix(DegreeBasis(m.algebra(), k + 1).size(), 0);
  return cochain_space(m, k).d_matrix;
}

struct BettiTable {
  int lo = 0;
  int hi = 0;
  std::map<int, std::size_t> dims;

  std::size_t operator[](int k) const { return dims.at(k); }
  friend bool operator==(const BettiTable&, const BettiTable&) = default;
};

/// dim H^k = nullity(d_k) - rank(d_{k-1}) for lo <= k <= hi.
inline BettiTable betti(const Model& m, int lo, int hi) {
  if (lo < 0 || hi < lo) throw Error("betti needs 0 <= lo <= hi");
  BettiTable t{lo, hi, {}};
  std::size_t prev_rank = lo > 0 ? rank(differential_matrix(m, lo - 1)) : 0;
  for (int k = lo; k <= hi; ++k) {
    Matrix d = differential_matrix(m, k);
    const std::size_t r = rank(d);
    t.dims[k] = d.cols() - r - prev_rank;
    prev_rank = r;
  }
  return t;
}

inline BettiTable betti(const DgBundle& b, int lo, int hi) { return betti(b.total(), lo, hi); }

inline std::size_t betti_at(const Model& m, int k) { return betti(m, k, k)[k]; }

/// Cocycle basis Z^k and coboundary columns B^k of a model.
struct CocycleData {
  DegreeBasis basis;
  std::vector<std::vector<Rational>> cocycles;
  Matrix boundaries;  // columns spanning d(C^{k-1}) in coordinates of degree k
};

inline CocycleData cocycle_data(const Model& m, int k) {
  DegreeBasis b(m.algebra(), k);
  auto z = kernel(differential_matrix(m, k));
  Matrix bd = k > 0 ? differential_matrix(m, k - 1) : Matrix(b.size(), 0);
  return CocycleData{std::move(b), std::move(z), std::move(bd)};
}

/// Rank of the map induced on cohomology by a linear map lowering or raising
/// degree: rank([f(Z) | B]) - rank(B) in the target.
template <class F>
std::size_t induced_rank(const Model& src, int k, const Model& dst, int target_degree, F&& f) {
  auto zs = cocycle_data(src, k);
  auto zt = cocycle_data(dst, target_degree);
  std::vector<std::vector<Rational>> cols;
  for (const auto& z : zs.cocycles) cols.push_back(zt.basis.coords(f(zs.basis.element(z))));
  Matrix img = Matrix::from_columns(zt.basis.size(), cols);
  return rank(Matrix::hconcat(img, zt.boundaries)) - rank(zt.boundaries);
}

struct TwistedBetti {
  std::size_t ev = 0;
  std::size_t od = 0;
  int cap = 0;                // degree bound used
  bool finite = true;         // complex was finite, no cap needed
  friend bool operator==(const TwistedBetti& a, const TwistedBetti& b) {
    return a.ev == b.ev && a.od == b.od;
  }
};

namespace detail {

/// Collapsed complex C^{p}_{<=n} -> C^{1-p}_{<=n+3}, with D = d + H∧ and the
/// subspace K = {x : Dx has no component above n}.
inline std::pair<std::size_t, std::size_t> twisted_parity(const Model& m, const Element& h, int n,
                                                          int parity) {
  // Source basis: all monomials of degree <= n with the given parity.
  std::vector<DegreeBasis> src, dst;
  for (int k = parity; k <= n; k += 2) src.emplace_back(m.algebra(), k);
  for (int k = 1 - parity; k <= n + 3; k += 2) dst.emplace_back(m.algebra(), k);
  std::size_t ns = 0, nd = 0;
  std::vector<std::size_t> soff, doff;
  for (auto& b : src) soff.push_back(ns), ns += b.size();
  for (auto& b : dst) doff.push_back(nd), nd += b.size();
  Matrix D(nd, ns);
  std::size_t col = 0;
  for (auto& b : src)
    for (std::size_t j = 0; j < b.size(); ++j, ++col) {
      Element x = b.element(j);
      Element y = m.d(x) + h * x;
      for (const auto& [deg, part] : y.components()) {
        const std::size_t di = static_cast<std::size_t>((deg - (1 - parity)) / 2);
        auto v = dst.at(di).coords(part);
        for (std::size_t i = 0; i < v.size(); ++i) D(doff[di] + i, col) = v[i];
      }
    }
  // Rows above degree n.
  std::size_t high_begin = 0;
  for (auto& b : dst)
    if (b.degree() <= n) high_begin += b.size();
  const std::size_t kernel_dim = ns - rank(D);
  Matrix high(nd - high_begin, ns);
  for (std::size_t i = high_begin; i < nd; ++i)
    for (std::size_t j = 0; j < ns; ++j) high(i - high_begin, j) = D(i, j);
  auto kb = kernel(high);
  Matrix kmat = Matrix::from_columns(ns, kb);
  const std::size_t image_dim = kb.empty() ? 0 : rank(D * kmat);
  return {kernel_dim, image_dim};
}

inline std::pair<std::size_t, std::size_t> twisted_at(const Model& m, const Element& h, int n) {
  auto [zev, bev] = twisted_parity(m, h, n, 0);
  auto [zod, bod] = twisted_parity(m, h, n, 1);
  // Boundaries landing in even come from odd sources and vice versa.
  return {zev - bod, zod - bev};
}

}  // namespace detail

/// Cohomology of the Z/2-graded complex (C, d + H∧). Exterior models use the
/// whole complex; otherwise the computation runs at a degree cap and is
/// accepted once two successive caps (n, n + 2) agree.
inline TwistedBetti twisted_betti(const Model& m, const Element& h, std::optional<int> cap = {}) {
  if (!h.is_zero()) {
    if (!same_algebra(h.ambient(), m.algebra())) throw AmbientMismatch();
    if (!h.degree() || *h.degree() % 2 == 0)
      throw DegreeMismatch("twisting form must be homogeneous of odd degree");
  }
  if (!m.d(h).is_zero()) throw NotClosed("twisting form is not closed: dH = " + to_string(m.d(h)));
  if (m.algebra()->exterior()) {
    const int top = m.algebra()->top_exterior_degree();
    auto [ev, od] = detail::twisted_at(m, h, top);
    return TwistedBetti{ev, od, top, true};
  }
  int n = cap.value_or(default_degree_cap(m.formal_dimension()));
  auto prev = detail::twisted_at(m, h, n);
  for (int tries = 0; tries < 6; ++tries) {
    auto next = detail::twisted_at(m, h, n + 2);
    if (next == prev) return TwistedBetti{prev.first, prev.second, n, false};
    prev = next;
    n += 2;
  }
  throw Error("twisted cohomology did not stabilize up to degree " + std::to_string(n));
}

/// phi(omega t^k) = k! omega, landing in the base algebra.
inline Element rescale_phi(const DgBundle& b, const Element& x) {
  b.require(Shape::Rn, 2, "rescale_phi");
  const auto& base = b.base().algebra();
  const std::size_t ti = b.algebra()->index(b.fiber(0));
  Element out(base);
  for (const auto& [m, c] : x.terms()) {
    Monomial w = m;
    const std::uint32_t k = w[ti];
    w[ti] = 0;
    Rational f = 1;
    for (std::uint32_t i = 2; i <= k; ++i) f *= i;
    out += transport(Element::monomial(b.algebra(), std::move(w), c * f), base);
  }
  return out;
}

struct CheckResult {
  bool pass = true;
  std::string detail;
  explicit operator bool() const noexcept { return pass; }
};

/// H^j = H^{j+2l} for j above the formal dimension.
inline CheckResult periodicity_check(const DgBundle& b, int j, int l) {
  if (j <= b.formal_dimension())
    throw Error("periodicity needs j > formal dimension " + std::to_string(b.formal_dimension()));
  if (l == 0) return {true, "l = 0"};
  const auto x = betti_at(b.total(), j), y = betti_at(b.total(), j + 2 * l);
  return {x == y, "H^" + std::to_string(j) + " = " + std::to_string(x) + ", H^" +
                      std::to_string(j + 2 * l) + " = " + std::to_string(y)};
}

struct QuasiIsoResult {
  bool pass = true;
  BettiTable circle;
  BettiTable total;
  explicit operator bool() const noexcept { return pass; }
};

/// Compares (base ⊗ Λ[q], d + F d/dq) against a model of the total space.
inline QuasiIsoResult circle_quasi_iso_check(const Model& base, const Element& f, const Model& total,
                                             int hi, const std::string& q = "q") {
  DgBundle e = rn_bundle(base, 1, f, q);
  QuasiIsoResult r{true, betti(e, 0, hi), betti(total, 0, hi)};
  r.pass = r.circle == r.total;
  return r;
}

}  // namespace dgcalc
