#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qfold/affine.hpp"
#include "qfold/scalar.hpp"

namespace qfold {

/// Open interval with optional (= infinite) endpoints.
struct Interval {
  std::optional<Scalar> lo;  // nullopt = -infinity
  std::optional<Scalar> hi;  // nullopt = +infinity

  static Interval full() { return {}; }
  static Interval of(Scalar l, Scalar h) { return {std::move(l), std::move(h)}; }

  bool is_empty() const { return lo && hi && !(*lo < *hi); }
  bool contains(const Scalar& x) const;
  bool subset_of(const Interval& o) const;
  std::optional<Interval> intersect(const Interval& o) const;
};

struct Box {
  std::vector<Interval> iv;

  int dim() const { return static_cast<int>(iv.size()); }
  static Box full(int n) { return Box{std::vector<Interval>(n)}; }
  bool is_empty() const;
  bool contains(const Vec& x) const;
  bool subset_of(const Box& o) const;
  std::optional<Box> intersect(const Box& o) const;

  // Corner points using finite endpoints (skipping infinite ones) plus a
  // midpoint-ish interior representative; used for sampling-based checks.
  std::vector<Vec> probe_points() const;
  Vec interior_point() const;
};

/// Finite union of open boxes; membership of exact points is decided exactly
/// via Scalar sign.
struct OpenBoxSet {
  int n = 0;
  std::vector<Box> boxes;

  static OpenBoxSet full(int n) { return {n, {Box::full(n)}}; }
  static OpenBoxSet empty(int n) { return {n, {}}; }
  static OpenBoxSet interval(Scalar lo, Scalar hi);  // 1-D convenience

  bool is_empty() const;
  bool contains(const Vec& x) const;
  OpenBoxSet intersect(const OpenBoxSet& o) const;

  // Exact only when every box is covered by a single box of the other set;
  // union-covering beyond that is reported as unknown (nullopt).
  std::optional<bool> subset_of(const OpenBoxSet& o) const;

  std::vector<Vec> probe_points() const;
  std::string key() const;
};

// Exact image of a box under an affine map with diagonal A (boxes map to
// boxes); nullopt for non-diagonal A.
std::optional<Box> box_image(const AffineMap& f, const Box& b);
std::optional<OpenBoxSet> boxset_image(const AffineMap& f, const OpenBoxSet& s);
// Exact preimage, same caveat.
std::optional<OpenBoxSet> boxset_preimage(const AffineMap& f, const OpenBoxSet& s);

/// Deterministic exact rational sample points (seeded), all strictly inside
/// the boxes. Infinite directions are sampled near the finite data.
std::vector<Vec> sample_points(const OpenBoxSet& s, int count, unsigned seed);

}  // namespace qfold
