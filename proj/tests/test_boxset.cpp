#include <doctest.h>

#include "qfold/boxset.hpp"

using namespace qfold;

TEST_CASE("interval and box membership is exact") {
  OpenBoxSet u = OpenBoxSet::interval(Scalar(0L), Scalar(1L));
  CHECK(u.contains({Scalar::rational(1, 2)}));
  CHECK(!u.contains({Scalar(0L)}));  // open
  CHECK(!u.contains({Scalar(1L)}));
  // sqrt(2) - 1 is inside (0,1), decided without floating point
  CHECK(u.contains({Scalar::quadratic(-1, 1, 2)}));

  OpenBoxSet all = OpenBoxSet::full(1);
  CHECK(all.contains({Scalar::quadratic(-100, 3, 2)}));
}

TEST_CASE("intersection and three-valued subset") {
  OpenBoxSet a = OpenBoxSet::interval(Scalar(0L), Scalar(2L));
  OpenBoxSet b = OpenBoxSet::interval(Scalar(1L), Scalar(3L));
  OpenBoxSet c = a.intersect(b);
  CHECK(c.contains({Scalar::rational(3, 2)}));
  CHECK(!c.contains({Scalar::rational(1, 2)}));

  CHECK(c.subset_of(a) == std::optional<bool>(true));
  CHECK(a.subset_of(c) == std::optional<bool>(false));

  // (0,2) vs the union (0,1) u (1,2): the probe at 1 is a definite
  // counterexample (open boxes miss the seam).
  OpenBoxSet split{1, {Box{{Interval::of(Scalar(0L), Scalar(1L))}},
                       Box{{Interval::of(Scalar(1L), Scalar(2L))}}}};
  CHECK(a.subset_of(split) == std::optional<bool>(false));
  // a union that does cover (0,2) but not by a single box stays undecided
  OpenBoxSet overlap{1, {Box{{Interval::of(Scalar(0L), Scalar::rational(5, 4))}},
                         Box{{Interval::of(Scalar(1L), Scalar(2L))}}}};
  CHECK(!a.subset_of(overlap).has_value());
}

TEST_CASE("images and preimages under diagonal affine maps are exact") {
  AffineMap f = AffineMap::line(Scalar(2L), Scalar(1L));  // x -> 2x + 1
  OpenBoxSet u = OpenBoxSet::interval(Scalar(0L), Scalar(1L));
  auto img = boxset_image(f, u);
  REQUIRE(img);
  CHECK(img->contains({Scalar(2L)}));
  CHECK(!img->contains({Scalar(1L)}));
  CHECK(!img->contains({Scalar(3L)}));

  auto pre = boxset_preimage(f, *img);
  REQUIRE(pre);
  CHECK(pre->subset_of(u) == std::optional<bool>(true));
  CHECK(u.subset_of(*pre) == std::optional<bool>(true));

  // Orientation-reversing diagonal map still yields open boxes.
  AffineMap g = AffineMap::line(Scalar(-1L), Scalar(0L));
  auto neg = boxset_image(g, u);
  REQUIRE(neg);
  CHECK(neg->contains({Scalar::rational(-1, 2)}));

  Mat rot(2);
  rot.at(0, 1) = Scalar(1L);
  rot.at(1, 0) = Scalar(-1L);
  AffineMap nondiag(rot, Vec{Scalar(0L), Scalar(0L)});
  CHECK(!boxset_image(nondiag, OpenBoxSet::full(2)));
}

TEST_CASE("sample points are deterministic, exact, and inside the set") {
  OpenBoxSet u = OpenBoxSet::interval(Scalar(-1L), Scalar::quadratic(0, 1, 2));
  auto a = sample_points(u, 50, 17);
  auto b = sample_points(u, 50, 17);
  auto c = sample_points(u, 50, 18);
  REQUIRE(a.size() == 50);
  bool all_equal = true;
  for (size_t i = 0; i < a.size(); ++i) all_equal = all_equal && vec_eq(a[i], b[i]);
  CHECK(all_equal);
  bool differs = false;
  for (size_t i = 0; i < a.size(); ++i) differs = differs || !vec_eq(a[i], c[i]);
  CHECK(differs);
  for (const auto& x : a) {
    CHECK(u.contains(x));
    CHECK(x[0].is_exact());
  }
}

TEST_CASE("probe points land in the set") {
  OpenBoxSet u{2, {Box{{Interval::of(Scalar(0L), Scalar(1L)), Interval::full()}}}};
  for (const auto& p : u.probe_points()) CHECK(u.contains(p));
}
