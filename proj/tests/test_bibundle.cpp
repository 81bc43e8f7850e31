#include <doctest.h>

#include <random>

#include "qfold/bibundle.hpp"

using namespace qfold;

namespace {

AffineGroup z_sqrt2() {
  return AffineGroup(1, {AffineMap::line(Scalar(1L), Scalar(1L)),
                         AffineMap::line(Scalar(1L), Scalar::sqrt_of(2))});
}

EtaleGroupoid torus() { return EtaleGroupoid::action(z_sqrt2(), OpenBoxSet::full(1)); }

LiftFamily torus_translation(const Scalar& c) {
  Lift l{0, 0, OpenBoxSet::full(1), AffineMap::line(Scalar(1L), c)};
  return LiftFamily(torus(), torus(), {l}, BibundleClass::Invertible);
}

}  // namespace

TEST_CASE("identity bibundle acts as identity on orbits and classifies invertible") {
  LiftFamily id = identity_bibundle(torus());
  auto img = id.orbit_image(0, {Scalar::rational(2, 7)}, 2);
  REQUIRE(img.verdict == Verdict::Yes);
  CHECK(torus().orbit_equal(0, img.rep, 0, {Scalar::rational(2, 7)}, 4) == Verdict::Yes);
  CHECK(classify(id, 4, 8, 1) == BibundleClass::Invertible);
}

TEST_CASE("functor by an equivariant base map induces an invertible family") {
  std::vector<Lift> base{{0, 0, OpenBoxSet::full(1),
                          AffineMap::line(Scalar(1L), Scalar::rational(1, 3))}};
  auto r = from_functor(torus(), torus(), base, 4, 10, 0);
  REQUIRE(r.bundle);
  auto img = r.bundle->orbit_image(0, {Scalar(0L)}, 4);
  REQUIRE(img.verdict == Verdict::Yes);
  CHECK(torus().orbit_equal(0, img.rep, 0, {Scalar::rational(1, 3)}, 4) == Verdict::Yes);
}

TEST_CASE("a non-equivariant base map is rejected with a certificate") {
  // x -> x/3 shrinks the lattice: the unit shift lands 1/3 away from the
  // image orbit, so the sampled equivariance check must refuse.
  std::vector<Lift> base{{0, 0, OpenBoxSet::full(1),
                          AffineMap::line(Scalar::rational(1, 3), Scalar(0L))}};
  auto r = from_functor(torus(), torus(), base, 4, 10, 0);
  CHECK(!r.bundle);
  CHECK(!r.error.empty());
}

TEST_CASE("composition of torus translations adds the shifts") {
  LiftFamily p = torus_translation(Scalar::rational(1, 3));
  LiftFamily q = torus_translation(Scalar::quadratic(0, mpq_class(1, 5), 2));
  LiftFamily qp = compose(p, q, 3);
  REQUIRE(!qp.empty());
  auto img = qp.orbit_image(0, {Scalar(0L)}, 3);
  REQUIRE(img.verdict == Verdict::Yes);
  Scalar expect = Scalar::rational(1, 3) + Scalar::quadratic(0, mpq_class(1, 5), 2);
  CHECK(torus().orbit_equal(0, img.rep, 0, {expect}, 5) == Verdict::Yes);
}

TEST_CASE("functoriality of the orbit map under composition, random translations") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<long> num(-4, 4);
  std::uniform_int_distribution<long> den(2, 7);
  for (int trial = 0; trial < 10; ++trial) {
    Scalar c1 = Scalar::rational(num(rng), den(rng));
    Scalar c2 = Scalar::quadratic(mpq_class(num(rng), den(rng)), mpq_class(num(rng), den(rng)), 2);
    LiftFamily p = torus_translation(c1);
    LiftFamily q = torus_translation(c2);
    LiftFamily qp = compose(p, q, 3);
    auto xs = sample_points(OpenBoxSet::interval(Scalar(-2L), Scalar(2L)), 20, trial);
    for (const auto& x : xs) {
      auto direct = qp.orbit_image(0, x, 3);
      auto step1 = p.orbit_image(0, x, 3);
      REQUIRE(step1.verdict == Verdict::Yes);
      auto step2 = q.orbit_image(0, step1.rep, 3);
      REQUIRE(step2.verdict == Verdict::Yes);
      REQUIRE(direct.verdict == Verdict::Yes);
      CHECK(torus().orbit_equal(0, direct.rep, 0, step2.rep, 5) == Verdict::Yes);
    }
  }
}

TEST_CASE("restriction clips the lift to the exact box preimage") {
  LiftFamily p = torus_translation(Scalar::rational(1, 3));
  OpenBoxSet u = OpenBoxSet::interval(Scalar(0L), Scalar::rational(1, 4));
  OpenBoxSet v = OpenBoxSet::interval(Scalar::rational(1, 4), Scalar::rational(7, 12));
  LiftFamily r = restrict(p, u, v);
  REQUIRE(r.lifts().size() == 1);
  CHECK(r.lifts()[0].map == AffineMap::line(Scalar(1L), Scalar::rational(1, 3)));
  CHECK(r.lifts()[0].dom.contains({Scalar::rational(1, 8)}));
  CHECK(!r.lifts()[0].dom.contains({Scalar::rational(3, 10)}));
}

TEST_CASE("restriction to full sets is the identity operation") {
  LiftFamily p = torus_translation(Scalar::rational(1, 3));
  LiftFamily r = restrict(p, OpenBoxSet::full(1), OpenBoxSet::full(1));
  REQUIRE(r.lifts().size() == 1);
  CHECK(r.lifts()[0].map == p.lifts()[0].map);
}

TEST_CASE("coherence holds for lattice translations") {
  LiftFamily p = torus_translation(Scalar::rational(1, 3));
  CHECK(p.coherence_check(10, 4, 0) != Verdict::No);
}

TEST_CASE("isomorphism detects translations differing by a lattice element") {
  LiftFamily p = torus_translation(Scalar::rational(1, 3));
  LiftFamily q = torus_translation(Scalar::rational(1, 3) + Scalar::quadratic(1, 1, 2));
  auto yes = isomorphic(p, q, 6, 5, 0);
  CHECK(yes.verdict == Verdict::Yes);

  LiftFamily r = torus_translation(Scalar::rational(1, 4));
  auto no = isomorphic(p, r, 6, 5, 0);
  CHECK(no.verdict == Verdict::No);
  CHECK(no.witness.has_value());
}

TEST_CASE("classify falls back to Plain on an empty family") {
  LiftFamily empty(torus(), torus(), {}, BibundleClass::Unknown);
  CHECK(classify(empty, 3, 5, 0) == BibundleClass::Plain);
}
