#include <gtest/gtest.h>

#include <dgcalc/dgcalc.hpp>

#include <set>

using namespace dgcalc;

namespace {

Model torus() { return make_model("t2", {{"th1", 1}, {"th2", 1}}, 2); }

Model torus_t() { return make_model("t2t", {{"th1", 1}, {"th2", 1}, {"t", 2}}, 2); }

Model sphere2() {
  return make_model("s2", {{"a", 2}, {"b", 3}}, 2, [](const AlgebraPtr& alg) {
    return std::map<std::string, Element>{{"b", Element::generator(alg, "a", 2)}};
  });
}

// Models used by the property sweeps; the last one mixes odd and even degrees
// with a nontrivial differential.
std::vector<Model> sweep_models() {
  std::vector<Model> out;
  out.push_back(torus_t());
  out.push_back(sphere2());
  out.push_back(make_model("h3", {{"e1", 1}, {"e2", 1}, {"e3", 1}}, 3, [](const AlgebraPtr& alg) {
    return std::map<std::string, Element>{
        {"e3", Element::generator(alg, "e1") * Element::generator(alg, "e2")}};
  }));
  out.push_back(make_model("mix", {{"x", 1}, {"y", 2}, {"z", 3}, {"w", 5}}, 5, [](const AlgebraPtr& alg) {
    auto g = [&](const char* n) { return Element::generator(alg, n); };
    return std::map<std::string, Element>{{"z", g("y") * g("y")}, {"w", g("y") * g("y") * g("y")}};
  }));
  return out;
}

// Coefficients of prod_odd (1 + x^d) prod_even 1/(1 - x^d) up to x^n.
std::vector<long> poincare_series(const Algebra& alg, int n) {
  std::vector<long> p(n + 1, 0);
  p[0] = 1;
  for (const auto& g : alg.generators()) {
    std::vector<long> next(n + 1, 0);
    for (int i = 0; i <= n; ++i) {
      if (p[i] == 0) continue;
      if (g.odd()) {
        next[i] += p[i];
        if (i + g.degree <= n) next[i + g.degree] += p[i];
      } else {
        for (int j = i; j <= n; j += g.degree) next[j] += p[i];
      }
    }
    p = std::move(next);
  }
  return p;
}

// Exhaustive enumeration of exponent vectors of total degree k.
std::set<std::vector<std::uint32_t>> enumerate_exponents(const Algebra& alg, int k) {
  std::set<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> e(alg.size(), 0);
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i == alg.size()) {
      if (left == 0) out.insert(e);
      return;
    }
    const int d = alg[i].degree;
    const std::uint32_t cap = alg[i].odd() ? 1 : static_cast<std::uint32_t>(left / d);
    for (std::uint32_t p = 0; p <= cap && static_cast<int>(p) * d <= left; ++p) {
      e[i] = p;
      self(self, i + 1, left - static_cast<int>(p) * d);
    }
    e[i] = 0;
  };
  rec(rec, 0, k);
  return out;
}

}  // namespace

TEST(GradedCore, OddGeneratorSquaresToZero) {
  auto alg = make_algebra({{"q", 1}, {"t", 2}});
  Element q = Element::generator(alg, "q");
  EXPECT_TRUE((q * q).is_zero());
  Element c = Element::generator(alg, "q") * Element::generator(alg, "t");
  EXPECT_TRUE((c * c).is_zero());
}

TEST(GradedCore, SwappingOddGeneratorsFlipsSign) {
  Model m = torus();
  Element a = m.gen("th1") * m.gen("th2");
  Element b = m.gen("th2") * m.gen("th1");
  EXPECT_EQ(a, -b);
  ASSERT_EQ(a.size(), 1u);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(a.terms().begin()->first.exponents(), b.terms().begin()->first.exponents());
  EXPECT_EQ(a.terms().begin()->second, -b.terms().begin()->second);
}

TEST(GradedCore, SquareOfInhomogeneousSum) {
  Model m = torus_t();
  Element th1 = m.gen("th1"), t = m.gen("t");
  Element lhs = (th1 + t) * (th1 + t);
  // th1^2 = 0, th1 t = t th1 since t is even.
  Element rhs = Rational(2) * (t * th1) + m.gen("t", 2);
  EXPECT_EQ(lhs, rhs);
  EXPECT_EQ(lhs.components().size(), 2u);
  EXPECT_EQ(lhs.component(4), m.gen("t", 2));
  EXPECT_FALSE(lhs.homogeneous());
}

TEST(GradedCore, BasisExamples) {
  Model t2 = torus();
  auto b = basis(*t2.algebra(), 2);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(Element::monomial(t2.algebra(), b[0]), t2.gen("th1") * t2.gen("th2"));

  Model t2t = torus_t();
  auto bt = basis(*t2t.algebra(), 2);
  ASSERT_EQ(bt.size(), 2u);
  std::set<std::string> names;
  for (const auto& m : bt) names.insert(to_string(m, *t2t.algebra()));
  EXPECT_EQ(names, (std::set<std::string>{"th1 th2", "t"}));

  for (const auto& m : sweep_models()) {
    auto b0 = basis(*m.algebra(), 0);
    ASSERT_EQ(b0.size(), 1u);
    EXPECT_TRUE(b0[0].is_unit());
  }
  EXPECT_TRUE(basis(*t2.algebra(), -1).empty());
}

TEST(GradedCore, BasisMatchesEnumeration) {
  for (const auto& m : sweep_models()) {
    for (int k = 0; k <= 10; ++k) {
      std::set<std::vector<std::uint32_t>> got;
      for (const auto& mono : basis(*m.algebra(), k)) got.insert(mono.exponents());
      EXPECT_EQ(got, enumerate_exponents(*m.algebra(), k)) << m.name() << " degree " << k;
    }
  }
}

TEST(GradedCore, BasisCardinalityMatchesPoincareSeries) {
  for (const auto& m : sweep_models()) {
    const int n = 14;
    auto p = poincare_series(*m.algebra(), n);
    for (int k = 0; k <= n; ++k)
      EXPECT_EQ(static_cast<long>(basis(*m.algebra(), k).size()), p[k]) << m.name() << " degree " << k;
  }
}

TEST(GradedCore, BasisIsOrderedAndDeterministic) {
  Model m = sweep_models().back();
  for (int k = 0; k <= 8; ++k) {
    auto b1 = basis(*m.algebra(), k);
    auto b2 = basis(*m.algebra(), k);
    EXPECT_EQ(b1, b2);
    for (std::size_t i = 1; i < b1.size(); ++i) EXPECT_TRUE(MonomialOrder{}(b1[i - 1], b1[i]));
  }
}

TEST(GradedCore, DifferentialExamples) {
  Model t2 = torus();
  EXPECT_TRUE(t2.d(t2.gen("th1")).is_zero());
  EXPECT_TRUE(t2.d(t2.gen("th1") * t2.gen("th2")).is_zero());

  Model s2 = sphere2();
  EXPECT_EQ(s2.d(s2.gen("b")), s2.gen("a", 2));
  EXPECT_TRUE(s2.d(s2.d(s2.gen("b"))).is_zero());
  // Leibniz by hand: d(a b) = a d b = a^3.
  EXPECT_EQ(s2.d(s2.gen("a") * s2.gen("b")), s2.gen("a", 3));
}

TEST(GradedCore, DegreeZeroGeneratorsRejected) {
  EXPECT_THROW(make_algebra({{"f", 0}}), Error);
  EXPECT_THROW(make_algebra({{"x", 1}, {"x", 2}}), Error);
}

TEST(GradedCore, MixingAlgebrasRejected) {
  // Algebras compare by generator list, so identical declarations interoperate.
  Model a = torus(), b = torus(), c = torus_t();
  EXPECT_EQ(a.gen("th1") + b.gen("th1"), Rational(2) * a.gen("th1"));
  EXPECT_THROW(a.gen("th1") + c.gen("th1"), AmbientMismatch);
}

TEST(GradedCore, DifferentialMustRaiseDegreeByOne) {
  EXPECT_THROW(make_model("bad", {{"x", 1}, {"y", 2}}, 1,
                          [](const AlgebraPtr& alg) {
                            return std::map<std::string, Element>{{"y", Element::generator(alg, "y")}};
                          }),
               DegreeMismatch);
}

TEST(GradedCore, NonSquareZeroDifferentialRejected) {
  // d x = y, d y = z with z even of degree 3 would need d^2 x = z.
  EXPECT_THROW(make_model("bad", {{"x", 1}, {"y", 2}, {"z", 3}}, 3,
                          [](const AlgebraPtr& alg) {
                            return std::map<std::string, Element>{
                                {"x", Element::generator(alg, "y")}, {"y", Element::generator(alg, "z")}};
                          }),
               NotSquareZero);
}

TEST(GradedCoreProperty, GradedCommutativity) {
  Rng rng(11);
  for (const auto& m : sweep_models()) {
    for (int trial = 0; trial < 200; ++trial) {
      const int da = static_cast<int>(pick(rng, 6)), db = static_cast<int>(pick(rng, 6));
      Element a = random_element(m.algebra(), da, rng), b = random_element(m.algebra(), db, rng);
      EXPECT_EQ(a * b, Rational(koszul(da, db)) * (b * a)) << to_string(a) << " | " << to_string(b);
    }
  }
}

TEST(GradedCoreProperty, AssociativityAndDistributivity) {
  Rng rng(12);
  for (const auto& m : sweep_models()) {
    for (int trial = 0; trial < 150; ++trial) {
      auto draw = [&] { return random_element(m.algebra(), static_cast<int>(pick(rng, 5)), rng); };
      Element a = draw(), b = draw(), c = draw();
      EXPECT_EQ((a * b) * c, a * (b * c));
      EXPECT_EQ(a * (b + c), a * b + a * c);
      EXPECT_EQ((a + b) * c, a * c + b * c);
    }
  }
}

TEST(GradedCoreProperty, DifferentialSquaresToZeroOnBasis) {
  for (const auto& m : sweep_models())
    for (int k = 0; k <= 9; ++k)
      for (const auto& mono : basis(*m.algebra(), k)) {
        Element x = Element::monomial(m.algebra(), mono);
        EXPECT_TRUE(m.d(m.d(x)).is_zero()) << m.name() << ": " << to_string(x);
      }
}

TEST(GradedCoreProperty, DifferentialIsAGradedDerivation) {
  Rng rng(13);
  for (const auto& m : sweep_models()) {
    for (int trial = 0; trial < 150; ++trial) {
      const int da = static_cast<int>(pick(rng, 5));
      Element a = random_element(m.algebra(), da, rng);
      Element b = random_element(m.algebra(), static_cast<int>(pick(rng, 5)), rng);
      EXPECT_EQ(m.d(a * b), m.d(a) * b + Rational(koszul(1, da)) * (a * m.d(b)));
    }
  }
}
