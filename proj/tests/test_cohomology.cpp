#include <gtest/gtest.h>

#include <dgcalc/dgcalc.hpp>

using namespace dgcalc;

namespace {

Model point() { return make_model("pt", {}, 0); }
Model circle() { return make_model("s1", {{"th", 1}}, 1); }
Model torus() { return make_model("t2", {{"th1", 1}, {"th2", 1}}, 2); }
Model sphere3() { return make_model("s3", {{"c", 3}}, 3); }

Model sphere2() {
  return make_model("s2", {{"a", 2}, {"b", 3}}, 2, [](const AlgebraPtr& alg) {
    return std::map<std::string, Element>{{"b", Element::generator(alg, "a", 2)}};
  });
}

Model heisenberg3() {
  return make_model("h3", {{"e1", 1}, {"e2", 1}, {"e3", 1}}, 3, [](const AlgebraPtr& alg) {
    return std::map<std::string, Element>{{"e3", Element::generator(alg, "e1") * Element::generator(alg, "e2")}};
  });
}

Model h3_t2() {
  return make_model("h3t2", {{"e1", 1}, {"e2", 1}, {"e3", 1}, {"f1", 1}, {"f2", 1}}, 5,
                    [](const AlgebraPtr& alg) {
                      return std::map<std::string, Element>{
                          {"e3", Element::generator(alg, "e1") * Element::generator(alg, "e2")}};
                    });
}

// Product of two matrices, written out so the test does not lean on library code.
Matrix product(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Rational s = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

// Kuenneth oracle for a trivial R[2] factor: dim H^j(M (x) Q[t]) = sum_k b_{j-2k}(M).
std::size_t trivial_rn2_betti(const std::vector<std::size_t>& base_betti, int j) {
  std::size_t s = 0;
  for (int i = j; i >= 0; i -= 2)
    if (i < static_cast<int>(base_betti.size())) s += base_betti[i];
  return s;
}

}  // namespace

TEST(Cohomology, SphereWithVolumeTwist) {
  Model s3 = sphere3();
  DgBundle p = rn_bundle(s3, 2, s3.gen("c"));
  BettiTable t = betti(p, 0, 6);
  EXPECT_EQ(t[0], 1u);
  for (int k = 1; k <= 6; ++k) EXPECT_EQ(t[k], 0u) << k;
  TwistedBetti tw = twisted_betti(s3, s3.gen("c"));
  EXPECT_EQ(tw.ev, 0u);
  EXPECT_EQ(tw.od, 0u);
}

TEST(Cohomology, PointWithPolynomialFiber) {
  Model pt = point();
  DgBundle p = rn_bundle(pt, 2, pt.zero());
  BettiTable t = betti(p, 0, 9);
  for (int k = 0; k <= 9; ++k) EXPECT_EQ(t[k], k % 2 == 0 ? 1u : 0u) << k;
}

TEST(Cohomology, TorusTrivialRn2) {
  Model t2 = torus();
  DgBundle p = rn_bundle(t2, 2, t2.zero());
  const std::vector<std::size_t> b = {1, 2, 1};
  for (int j = 0; j <= 10; ++j) {
    EXPECT_EQ(betti_at(p.total(), j), trivial_rn2_betti(b, j)) << j;
    if (j >= 3) EXPECT_EQ(betti_at(p.total(), j), 2u) << j;
  }
}

TEST(Cohomology, TwistedExamples) {
  Model t2 = torus();
  TwistedBetti t = twisted_betti(t2, t2.zero());
  EXPECT_EQ(t.ev, 2u);
  EXPECT_EQ(t.od, 2u);
  EXPECT_TRUE(t.finite);

  // Untwisted case is the parity split of ordinary Betti numbers.
  for (const Model& m : {sphere2(), heisenberg3(), h3_t2()}) {
    std::size_t ev = 0, od = 0;
    BettiTable b = betti(m, 0, 2 * m.formal_dimension() + 4);
    for (const auto& [k, v] : b.dims) (k % 2 == 0 ? ev : od) += v;
    TwistedBetti u = twisted_betti(m, m.zero());
    EXPECT_EQ(u.ev, ev) << m.name();
    EXPECT_EQ(u.od, od) << m.name();
  }
}

TEST(Cohomology, TwistedRejectsBadForms) {
  Model s2 = sphere2();
  EXPECT_THROW(twisted_betti(s2, s2.gen("b")), NotClosed);
  EXPECT_THROW(twisted_betti(s2, s2.gen("a")), DegreeMismatch);
}

TEST(Cohomology, RescalingExamples) {
  Model t2 = torus();
  DgBundle p = rn_bundle(t2, 2, t2.zero());
  Element w = p.lift(t2.gen("th1"));
  EXPECT_EQ(rescale_phi(p, w * p.gen("t", 2)), Rational(2) * t2.gen("th1"));
  EXPECT_EQ(rescale_phi(p, w), t2.gen("th1"));
  EXPECT_EQ(rescale_phi(p, p.gen("t", 4)), Rational(24) * t2.one());
}

TEST(Cohomology, RescalingIntertwinesDifferentials) {
  Rng rng(31);
  Model h3 = heisenberg3();
  const Element h = h3.gen("e1") * h3.gen("e2") * h3.gen("e3");
  DgBundle p = rn_bundle(h3, 2, h);
  for (int trial = 0; trial < 60; ++trial) {
    const int deg = static_cast<int>(pick(rng, 4));
    const std::uint32_t k = static_cast<std::uint32_t>(1 + pick(rng, 3));
    Element w = random_element(h3.algebra(), deg, rng);
    Element x = p.lift(w) * p.gen("t", k);
    // phi((d + H d/dt) x) = (d + H) phi(x), with phi(x) = k! w.
    Element lhs = rescale_phi(p, p.Q()(x));
    Element phix = rescale_phi(p, x);
    EXPECT_EQ(lhs, h3.d(phix) + h * phix) << to_string(x);
  }
}

TEST(Cohomology, PeriodicityExamples) {
  Model s3 = sphere3();
  DgBundle p = rn_bundle(s3, 2, s3.gen("c"));
  EXPECT_TRUE(periodicity_check(p, 4, 1));
  Model t2 = torus();
  DgBundle q = rn_bundle(t2, 2, t2.zero());
  CheckResult r = periodicity_check(q, 3, 2);
  EXPECT_TRUE(r) << r.detail;
  EXPECT_TRUE(periodicity_check(q, 5, 0));
  EXPECT_THROW(periodicity_check(q, 2, 1), Error);
}

TEST(Cohomology, CircleQuasiIsomorphism) {
  Model s2 = sphere2(), s3 = sphere3();
  QuasiIsoResult hopf = circle_quasi_iso_check(s2, s2.gen("a"), s3, 6);
  EXPECT_TRUE(hopf);
  EXPECT_EQ(hopf.total[3], 1u);
  EXPECT_EQ(hopf.circle[2], 0u);

  // Trivial bundle against an explicitly built product.
  Model prod = make_model("s2xs1", {{"a", 2}, {"b", 3}, {"q", 1}}, 3, [](const AlgebraPtr& alg) {
    return std::map<std::string, Element>{{"b", Element::generator(alg, "a", 2)}};
  });
  EXPECT_TRUE(circle_quasi_iso_check(s2, s2.zero(), prod, 7));

  Model s1 = circle();
  QuasiIsoResult t = circle_quasi_iso_check(s1, s1.zero(), torus(), 4);
  EXPECT_TRUE(t);
  EXPECT_EQ(t.total[1], 2u);

  // A wrong total space is detected.
  EXPECT_FALSE(circle_quasi_iso_check(s2, s2.zero(), s3, 6));
}

TEST(CohomologyProperty, DifferentialMatricesCompose) {
  for (const Model& m : {sphere2(), heisenberg3(), h3_t2()}) {
    DgBundle p = rn_bundle(m, 2, m.zero());
    for (const Model* x : {&m, &p.total()})
      for (int k = 0; k <= 8; ++k) EXPECT_TRUE(product(differential_matrix(*x, k + 1), differential_matrix(*x, k)).is_zero());
  }
}

TEST(CohomologyProperty, BettiIsGaugeInvariant) {
  Rng rng(32);
  Model base = h3_t2();
  auto g = [&](const char* n) { return base.gen(n); };
  DgBundle p = two_stage(base, g("f1") * g("f2"), g("e1") * g("e2"), -(g("e3") * g("f1") * g("f2")));
  const BettiTable ref = betti(p, 0, 7);
  const auto& alg = p.algebra();
  for (int trial = 0; trial < 8; ++trial) {
    Element a = p.lift(random_element(base.algebra(), 1, rng));
    Element abar = p.lift(random_element(base.algebra(), 1, rng));
    Element b = p.lift(random_element(base.algebra(), 2, rng));
    Derivation x0 = a * partial(alg, "q") + (b + p.gen("q") * abar) * partial(alg, "t");
    DgBundle moved = with_field(p, gauge_transform(p.Q(), x0));
    EXPECT_EQ(betti(moved, 0, 7), ref) << to_string(x0);
  }
}

TEST(CohomologyProperty, TwistedIsInvariantUnderExactShift) {
  Rng rng(33);
  Model base = h3_t2();
  const Element h = base.gen("e1") * base.gen("e2") * base.gen("e3");
  const TwistedBetti ref = twisted_betti(base, h);
  for (int trial = 0; trial < 20; ++trial) {
    Element b = random_element(base.algebra(), 2, rng);
    EXPECT_EQ(twisted_betti(base, h + base.d(b)), ref) << to_string(b);
  }
}

TEST(CohomologyProperty, HighDegreesMatchTwisted) {
  Model h3 = heisenberg3();
  Model s3 = sphere3();
  struct Case {
    Model base;
    Element h;
  };
  std::vector<Case> cases;
  cases.push_back({torus(), Element(torus().algebra())});
  cases.push_back({sphere2(), Element(sphere2().algebra())});
  cases.push_back({s3, s3.gen("c")});
  cases.push_back({h3, h3.gen("e1") * h3.gen("e2") * h3.gen("e3")});
  cases.push_back({h3, h3.zero()});
  for (const auto& c : cases) {
    DgBundle p = rn_bundle(c.base, 2, transport(c.h, c.base.algebra()));
    TwistedBetti tw = twisted_betti(c.base, transport(c.h, c.base.algebra()));
    const int n = c.base.formal_dimension();
    for (int j = n + 1; j <= n + 6; ++j) {
      EXPECT_EQ(betti_at(p.total(), j), j % 2 == 0 ? tw.ev : tw.od) << c.base.name() << " degree " << j;
      EXPECT_TRUE(periodicity_check(p, j, 1 + j % 2));
    }
  }
}
