#include <doctest.h>

#include "qfold/json_io.hpp"

using namespace qfold;

namespace {

AffineGroup z_sqrt2() {
  return AffineGroup(1, {AffineMap::line(Scalar(1L), Scalar(1L)),
                         AffineMap::line(Scalar(1L), Scalar::sqrt_of(2))});
}

}  // namespace

TEST_CASE("scalar and vector round trips are exact") {
  Scalar x = Scalar::quadratic(mpq_class(-3, 7), mpq_class(5, 2), 2);
  CHECK(scalar_from_json(scalar_to_json(x)) == x);
  Vec v{x, Scalar::rational(1, 3)};
  CHECK(vec_eq(vec_from_json(vec_to_json(v)), v));
}

TEST_CASE("affine map and group round trips") {
  AffineMap f = AffineMap::line(Scalar(2L), Scalar::sqrt_of(2));
  CHECK(affine_from_json(affine_to_json(f)) == f);
  AffineGroup g = z_sqrt2();
  AffineGroup back = group_from_json(group_to_json(g));
  CHECK(back.dim() == g.dim());
  REQUIRE(back.generators().size() == g.generators().size());
  for (size_t i = 0; i < g.generators().size(); ++i)
    CHECK(back.generators()[i] == g.generators()[i]);
}

TEST_CASE("box sets serialize infinite endpoints as null") {
  OpenBoxSet u{1, {Box{{Interval{std::nullopt, Scalar(1L)}}}}};
  json j = boxset_to_json(u);
  CHECK(j["boxes"][0][0][0].is_null());
  OpenBoxSet back = boxset_from_json(j);
  CHECK(back.contains({Scalar(-100L)}));
  CHECK(!back.contains({Scalar(2L)}));
}

TEST_CASE("atlas and groupoid round trips preserve verdicts") {
  ModelQuasifold chart(OpenBoxSet::full(1), z_sqrt2());
  Atlas atlas({chart, chart},
              {{0, 1, AffineMap::line(Scalar(1L), Scalar(1L)), OpenBoxSet::full(1)}},
              {"a", "b"});
  Atlas back = atlas_from_json(atlas_to_json(atlas));
  CHECK(back.charts().size() == 2);
  AtlasHandle p = back.pi(0, {Scalar(0L)});
  AtlasHandle q = back.pi(1, {Scalar::sqrt_of(2)});
  CHECK(back.pi_equal(p, q, 6) == Verdict::Yes);

  EtaleGroupoid g = EtaleGroupoid::action(z_sqrt2(), OpenBoxSet::full(1));
  EtaleGroupoid gb = groupoid_from_json(groupoid_to_json(g));
  CHECK(gb.is_action());
  CHECK(gb.orbit_equal(0, {Scalar(0L)}, 0, {Scalar(1L)}, 3) == Verdict::Yes);

  EtaleGroupoid germ = germ_groupoid_of_atlas(atlas);
  EtaleGroupoid germ_back = groupoid_from_json(groupoid_to_json(germ));
  CHECK(!germ_back.is_action());
}

TEST_CASE("bibundle round trip preserves the orbit map") {
  EtaleGroupoid g = EtaleGroupoid::action(z_sqrt2(), OpenBoxSet::full(1));
  Lift l{0, 0, OpenBoxSet::full(1), AffineMap::line(Scalar(1L), Scalar::rational(1, 3))};
  LiftFamily p(g, g, {l}, BibundleClass::Invertible);
  LiftFamily back = bibundle_from_json(bibundle_to_json(p));
  auto img = back.orbit_image(0, {Scalar(0L)}, 2);
  REQUIRE(img.verdict == Verdict::Yes);
  CHECK(img.rep[0] == Scalar::rational(1, 3));
  CHECK(back.claimed_class() == BibundleClass::Invertible);
}

TEST_CASE("serialization is deterministic") {
  EtaleGroupoid g = EtaleGroupoid::action(z_sqrt2(), OpenBoxSet::full(1));
  CHECK(groupoid_to_json(g).dump() == groupoid_to_json(g).dump());
}
