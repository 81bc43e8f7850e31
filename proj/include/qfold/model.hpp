#pragma once

#include <string>
#include <vector>

#include "qfold/affine.hpp"
#include "qfold/boxset.hpp"

namespace qfold {

enum class InvarianceVerdict { Invariant, CounterexampleFound, Unknown };

struct InvarianceReport {
  InvarianceVerdict verdict = InvarianceVerdict::Unknown;
  // Set when a counterexample was found: gamma maps x out of V.
  std::optional<GroupElement> gamma;
  std::optional<Vec> point;
};

/// The model quotient V/Gamma: points are representatives in V, two
/// representatives denote the same point iff orbit_equal says Yes.
/// Gamma-invariance of V is never assumed, only reported.
class ModelQuasifold {
 public:
  ModelQuasifold() = default;
  ModelQuasifold(OpenBoxSet v, AffineGroup gamma);

  int dim() const { return V_.n; }
  const OpenBoxSet& V() const { return V_; }
  const AffineGroup& group() const { return gamma_; }
  bool invariance_checked() const { return invariance_checked_; }

  InvarianceReport check_invariance(int bound);

  // Three-valued identification of representatives; both must lie in V.
  OrbitResult same_point(const Vec& x, const Vec& y, int bound) const;

 private:
  OpenBoxSet V_;
  AffineGroup gamma_;
  bool invariance_checked_ = false;
};

/// A chart-change declaration: phi maps dom (inside chart `from`'s V) into
/// chart `to`'s V, compatibly with the orbit maps.
struct Transition {
  int from = 0;
  int to = 0;
  AffineMap map;
  OpenBoxSet dom;
};

/// A point of the glued orbit space: (chart index, representative).
struct AtlasHandle {
  int chart = 0;
  Vec point;
};

/// Finite atlas of model quasifolds with an affine transition cocycle.
/// atlas_Pi realizes the glued quotient map on the disjoint union of charts.
class Atlas {
 public:
  Atlas() = default;
  Atlas(std::vector<ModelQuasifold> charts, std::vector<Transition> cocycle,
        std::vector<std::string> labels = {});

  const std::vector<ModelQuasifold>& charts() const { return charts_; }
  const std::vector<Transition>& cocycle() const { return cocycle_; }
  const std::vector<std::string>& labels() const { return labels_; }
  int dim() const { return charts_.empty() ? 0 : charts_[0].dim(); }

  AtlasHandle pi(int chart, const Vec& x) const;

  // Do two handles name the same glued orbit? Yes via bounded search over
  // chart-group moves and cocycle transitions (both directions); No when the
  // reachable set is finite and exhausted, or decided by exact lattice
  // membership in the single-chart case; Unknown otherwise.
  Verdict pi_equal(const AtlasHandle& a, const AtlasHandle& b, int bound) const;

  // Cocycle closure up to germ: composable transition pairs agree with some
  // reachable transition at sampled points within the word bound.
  Verdict check_cocycle_closure(int bound) const;

 private:
  std::vector<ModelQuasifold> charts_;
  std::vector<Transition> cocycle_;
  std::vector<std::string> labels_;
};

}  // namespace qfold
