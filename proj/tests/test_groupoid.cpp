#include <doctest.h>

#include <random>

#include "qfold/groupoid.hpp"

using namespace qfold;

namespace {

AffineGroup z_sqrt2() {
  return AffineGroup(1, {AffineMap::line(Scalar(1L), Scalar(1L)),
                         AffineMap::line(Scalar(1L), Scalar::sqrt_of(2))});
}

EtaleGroupoid torus_action() { return EtaleGroupoid::action(z_sqrt2(), OpenBoxSet::full(1)); }

Atlas two_chart_atlas() {
  ModelQuasifold chart(OpenBoxSet::full(1), z_sqrt2());
  std::vector<Transition> cocycle{{0, 1, AffineMap::line(Scalar(1L), Scalar(1L)),
                                   OpenBoxSet::full(1)}};
  return Atlas({chart, chart}, cocycle);
}

}  // namespace

TEST_CASE("germ arrows compose and invert like a groupoid") {
  AffineMap g1 = AffineMap::line(Scalar(1L), Scalar::sqrt_of(2));
  Vec x{Scalar::rational(1, 3)};
  GermArrow g{0, 0, g1, x};
  GermArrow h = arrow_inverse(g);
  CHECK(arrow_compose(h, g) == identity_germ(0, x));
  CHECK(arrow_compose(g, h) == identity_germ(0, g.target()));
  CHECK_THROWS(arrow_compose(g, g));  // base mismatch: g.map(x) != x
}

TEST_CASE("arrow set of the dense lattice at bound 1 has 5 elements") {
  EtaleGroupoid g = torus_action();
  auto arrows = g.arrows_at(0, {Scalar(0L)}, 1);
  CHECK(arrows.size() == 5);
  for (const auto& a : arrows) {
    CHECK(a.src_chart == 0);
    CHECK(vec_eq(a.base, {Scalar(0L)}));
  }
}

TEST_CASE("groupoid axioms hold on sampled composable germ triples") {
  EtaleGroupoid g = germ_groupoid_of_atlas(two_chart_atlas());
  std::mt19937 rng(5);
  std::uniform_int_distribution<long> num(-6, 6);
  int triples = 0;
  while (triples < 200) {
    Vec x{Scalar::rational(num(rng), 7)};
    auto at_x = g.arrows_at(0, x, 2);
    if (at_x.empty()) continue;
    const GermArrow& a = at_x[rng() % at_x.size()];
    auto at_ax = g.arrows_at(a.tgt_chart, a.target(), 2);
    if (at_ax.empty()) continue;
    const GermArrow& b = at_ax[rng() % at_ax.size()];
    auto at_bax = g.arrows_at(b.tgt_chart, b.target(), 2);
    if (at_bax.empty()) continue;
    const GermArrow& c = at_bax[rng() % at_bax.size()];
    ++triples;

    CHECK(arrow_compose(c, arrow_compose(b, a)) == arrow_compose(arrow_compose(c, b), a));
    CHECK(arrow_compose(a, identity_germ(a.src_chart, a.base)) == a);
    CHECK(arrow_compose(identity_germ(a.tgt_chart, a.target()), a) == a);
    CHECK(arrow_compose(arrow_inverse(a), a) == identity_germ(a.src_chart, a.base));
  }
}

TEST_CASE("orbit comparison matches the atlas quotient on sampled points") {
  Atlas atlas = two_chart_atlas();
  EtaleGroupoid g = germ_groupoid_of_atlas(atlas);
  std::vector<Vec> pts{{Scalar(0L)}, {Scalar::rational(1, 3)}, {Scalar::quadratic(0, 1, 2)}};
  for (const auto& x : pts)
    for (const auto& y : pts) {
      Verdict via_groupoid = g.orbit_equal(0, x, 1, y, 5);
      Verdict via_atlas = atlas.pi_equal(atlas.pi(0, x), atlas.pi(1, y), 5);
      if (via_groupoid != Verdict::Unknown && via_atlas != Verdict::Unknown)
        CHECK(via_groupoid == via_atlas);
    }
}

TEST_CASE("restricting the integer shift to (0,1/2) kills every nonidentity arrow") {
  EtaleGroupoid z = EtaleGroupoid::action(
      AffineGroup(1, {AffineMap::line(Scalar(1L), Scalar(1L))}), OpenBoxSet::full(1));
  EtaleGroupoid r = restrict(z, OpenBoxSet::interval(Scalar(0L), Scalar::rational(1, 2)));
  auto arrows = r.arrows_at(0, {Scalar::rational(1, 4)}, 4);
  REQUIRE(arrows.size() == 1);
  CHECK(arrows[0].map.is_identity());
}

TEST_CASE("restricting the dense lattice to (0,1) keeps nonidentity arrows") {
  EtaleGroupoid r = restrict(torus_action(), OpenBoxSet::interval(Scalar(0L), Scalar(1L)));
  // x = 1/10 moves to 1/10 + sqrt(2) - 1, still inside (0,1)
  auto arrows = r.arrows_at(0, {Scalar::rational(1, 10)}, 2);
  bool found = false;
  for (const auto& a : arrows)
    if (!a.map.is_identity()) found = true;
  CHECK(found);
}

TEST_CASE("effect functor sends an action arrow to its affine germ") {
  GroupElement e{AffineMap::line(Scalar(1L), Scalar::sqrt_of(2)), {{1, 1}}};
  ActionArrow a{e, {Scalar::rational(2, 3)}};
  GermArrow g = effect(a);
  CHECK(g.map == e.map);
  CHECK(vec_eq(g.base, a.base));
  CHECK(vec_eq(g.target(), a.target()));
}

TEST_CASE("faithful affine actions are effective with a certificate") {
  auto r = is_effective(torus_action(), 3);
  CHECK(r.effective);
  CHECK(!r.certificate.empty());
  auto rg = is_effective(germ_groupoid_of_atlas(two_chart_atlas()), 3);
  CHECK(rg.effective);
}

TEST_CASE("realizability of germ arrows in the generated pseudogroup") {
  EtaleGroupoid g = torus_action();
  Vec x{Scalar(0L)};
  GermArrow inside{0, 0, AffineMap::line(Scalar(1L), Scalar::quadratic(1, 1, 2)), x};
  CHECK(realizable(g, inside, 3) == Verdict::Yes);
  GermArrow outside{0, 0, AffineMap::line(Scalar(1L), Scalar::rational(1, 2)), x};
  CHECK(realizable(g, outside, 3) != Verdict::Yes);
}

TEST_CASE("translate_into finds a groupoid translate landing in a target set") {
  EtaleGroupoid g = torus_action();
  OpenBoxSet target = OpenBoxSet::interval(Scalar(3L), Scalar(4L));
  auto a = g.translate_into(0, {Scalar::rational(1, 4)}, 0, target, 4);
  REQUIRE(a);
  CHECK(target.contains(a->target()));
}
