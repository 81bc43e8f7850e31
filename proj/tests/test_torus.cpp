#include <doctest.h>

#include "qfold/torus.hpp"

using namespace qfold;

namespace {

std::vector<mpz_class> zv(std::initializer_list<long> xs) {
  return std::vector<mpz_class>(xs.begin(), xs.end());
}

}  // namespace

TEST_CASE("continued fraction expansions of standard quadratic irrationals") {
  auto cf2 = continued_fraction(QuadraticIrrational::parse("sqrt(2)"));
  CHECK(cf2.preperiod == zv({1}));
  CHECK(cf2.period == zv({2}));

  auto cf3 = continued_fraction(QuadraticIrrational::parse("sqrt(3)"));
  CHECK(cf3.preperiod == zv({1}));
  CHECK(cf3.period == zv({1, 2}));

  auto golden = continued_fraction(QuadraticIrrational::parse("(1+sqrt(5))/2"));
  CHECK(golden.preperiod.empty());
  CHECK(golden.period == zv({1}));
}

TEST_CASE("convergents of sqrt(2) are the classical ones") {
  auto cf = continued_fraction(QuadraticIrrational::parse("sqrt(2)"));
  mpz_class p, q;
  long expect_p[] = {1, 3, 7, 17};
  long expect_q[] = {1, 2, 5, 12};
  for (int n = 0; n < 4; ++n) {
    cf.convergent(n, p, q);
    CHECK(p == expect_p[n]);
    CHECK(q == expect_q[n]);
  }
}

TEST_CASE("convergent inequality |alpha - p/q| < 1/q^2 exactly up to n = 20") {
  for (const char* text : {"sqrt(2)", "sqrt(3)", "(1+sqrt(5))/2", "(3+sqrt(7))/2"}) {
    QuadraticIrrational alpha = QuadraticIrrational::parse(text);
    auto cf = continued_fraction(alpha);
    Scalar a = alpha.to_scalar();
    for (int n = 0; n <= 20; ++n) {
      mpz_class p, q;
      cf.convergent(n, p, q);
      Scalar diff = a - Scalar::rational(mpq_class(p, q));
      Scalar abs_diff = diff.sign() < 0 ? -diff : diff;
      Scalar bound = Scalar::rational(mpq_class(1, q * q));
      CHECK(abs_diff < bound);
    }
  }
}

TEST_CASE("canonical form keeps the integer recurrence valid") {
  QuadraticIrrational x = QuadraticIrrational::parse("(1+sqrt(5))/2");
  mpz_class rem = x.D() - x.P() * x.P();
  CHECK(rem % x.Q() == 0);
  // round trip through Scalar
  QuadraticIrrational back = QuadraticIrrational::from_scalar(x.to_scalar());
  CHECK(back == x);
  // negative quadratic part: 1 - sqrt(2)
  QuadraticIrrational neg = QuadraticIrrational::from_scalar(Scalar::quadratic(1, -1, 2));
  CHECK(neg.to_scalar() == Scalar::quadratic(1, -1, 2));
}

TEST_CASE("equivalence witnesses act correctly and invert exactly") {
  WitnessMatrix w{1, 1, 0, 1};
  Scalar r2 = Scalar::sqrt_of(2);
  CHECK(w.apply(r2) == Scalar::quadratic(1, 1, 2));
  WitnessMatrix inv = w.inverse();
  CHECK(witness_mul(w, inv).is_identity());
  WitnessMatrix flip{0, 1, 1, 0};
  CHECK(flip.det() == -1);
  CHECK(flip.apply(r2) == r2.inverse());
}

TEST_CASE("torus equivalence: shifted and inverted parameters") {
  QuadraticIrrational r2 = QuadraticIrrational::parse("sqrt(2)");

  SUBCASE("alpha vs alpha + 1") {
    auto r = morita_equivalent(r2, QuadraticIrrational::parse("1+sqrt(2)"));
    CHECK(r.equivalent);
    REQUIRE(r.witness);
    CHECK(r.witness->a == 1);
    CHECK(r.witness->b == 1);
    CHECK(r.witness->c == 0);
    CHECK(r.witness->d == 1);
  }
  SUBCASE("alpha vs 1/alpha has a det -1 witness") {
    auto r = morita_equivalent(r2, QuadraticIrrational::parse("sqrt(2)/2"));
    CHECK(r.equivalent);
    REQUIRE(r.witness);
    CHECK(r.witness->det() == -1);
    CHECK(r.witness->apply(Scalar::sqrt_of(2)) == Scalar::quadratic(0, mpq_class(1, 2), 2));
  }
  SUBCASE("different fields are inequivalent") {
    auto r = morita_equivalent(r2, QuadraticIrrational::parse("sqrt(3)"));
    CHECK(!r.equivalent);
    CHECK(!r.witness);
  }
  SUBCASE("self equivalence") {
    auto r = morita_equivalent(r2, r2);
    CHECK(r.equivalent);
    REQUIRE(r.witness);
    CHECK(r.witness->apply(Scalar::sqrt_of(2)) == Scalar::sqrt_of(2));
  }
}

TEST_CASE("torus equivalence behaves as an equivalence relation on a panel") {
  std::vector<QuadraticIrrational> panel;
  for (const char* t : {"sqrt(2)", "1+sqrt(2)", "sqrt(2)/2", "(3+sqrt(2))/7", "sqrt(3)",
                        "2+sqrt(3)", "(1+sqrt(5))/2", "sqrt(5)", "(2+sqrt(13))/3",
                        "(5+sqrt(2))/4"})
    panel.push_back(QuadraticIrrational::parse(t));
  const int n = static_cast<int>(panel.size());
  std::vector<std::vector<bool>> eq(n, std::vector<bool>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto r = morita_equivalent(panel[i], panel[j]);
      eq[i][j] = r.equivalent;
      if (r.equivalent) {
        REQUIRE(r.witness);
        mpz_class det = r.witness->det();
        CHECK((det == 1 || det == -1));
        CHECK(r.witness->apply(panel[i].to_scalar()) == panel[j].to_scalar());
      }
    }
  for (int i = 0; i < n; ++i) {
    CHECK(eq[i][i]);
    for (int j = 0; j < n; ++j) {
      CHECK(eq[i][j] == eq[j][i]);
      for (int k = 0; k < n; ++k)
        if (eq[i][j] && eq[j][k]) CHECK(eq[i][k]);
    }
  }
}

TEST_CASE("torus lattice and groupoid structure") {
  QuadraticIrrational r2 = QuadraticIrrational::parse("sqrt(2)");
  AffineGroup lat = torus_lattice(r2);
  CHECK(lat.kind() == AffineGroup::Kind::TranslationLattice);
  EtaleGroupoid g = torus_groupoid(r2);
  CHECK(is_effective(g, 3).effective);
}

TEST_CASE("witness lifts to a bibundle matching both lattices exactly") {
  QuadraticIrrational alpha = QuadraticIrrational::parse("sqrt(2)");

  SUBCASE("unipotent witness gives the identity lift") {
    QuadraticIrrational beta = QuadraticIrrational::parse("1+sqrt(2)");
    WitnessMatrix w{1, 1, 0, 1};
    LiftFamily p = lift_witness_to_bibundle(alpha, beta, w);
    REQUIRE(p.lifts().size() == 1);
    CHECK(p.lifts()[0].map.is_identity());
    CHECK(p.claimed_class() == BibundleClass::Invertible);
  }
  SUBCASE("inversion witness gives division by sqrt(2)") {
    QuadraticIrrational beta = QuadraticIrrational::parse("sqrt(2)/2");
    WitnessMatrix w{0, 1, 1, 0};
    LiftFamily p = lift_witness_to_bibundle(alpha, beta, w);
    REQUIRE(p.lifts().size() == 1);
    Vec image = p.lifts()[0].map.apply({Scalar(1L)});
    CHECK(image[0] == Scalar::sqrt_of(2).inverse());
    auto img = p.orbit_image(0, {Scalar(0L)}, 2);
    CHECK(img.verdict == Verdict::Yes);
  }
}
