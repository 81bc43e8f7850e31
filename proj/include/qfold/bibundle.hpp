#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qfold/groupoid.hpp"

namespace qfold {

enum class BibundleClass { Plain, LocallyInvertible, Invertible, Unknown };
const char* bibundle_class_name(BibundleClass c);

/// One affine local lift: on dom (inside the source base) the would-be
/// bibundle acts as the affine map `map` into the target base.
struct Lift {
  int src_chart = 0;
  int tgt_chart = 0;
  OpenBoxSet dom;
  AffineMap map;
};

struct OrbitMapResult {
  Verdict verdict = Verdict::Unknown;
  int chart = 0;
  Vec rep;  // target representative when verdict == Yes
};

/// Bibundle between affine etale groupoids, presented as a family of affine
/// local lifts of the induced orbit map.
class LiftFamily {
 public:
  LiftFamily() = default;
  LiftFamily(EtaleGroupoid source, EtaleGroupoid target, std::vector<Lift> lifts,
             BibundleClass claimed = BibundleClass::Plain);

  const EtaleGroupoid& source() const { return source_; }
  const EtaleGroupoid& target() const { return target_; }
  const std::vector<Lift>& lifts() const { return lifts_; }
  BibundleClass claimed_class() const { return claimed_; }
  bool empty() const { return lifts_.empty(); }

  // Induced orbit map at a representative: find a groupoid translate of x
  // hit by some lift domain (bounded search) and apply that lift.
  OrbitMapResult orbit_image(int chart, const Vec& x, int bound) const;

  // Invariant checks (sampled): overlapping lifts differ by a target-arrow
  // germ, and lifts send decided-equal orbits to decided-equal orbits.
  Verdict coherence_check(int samples, int bound, unsigned seed) const;

 private:
  EtaleGroupoid source_;
  EtaleGroupoid target_;
  std::vector<Lift> lifts_;
  BibundleClass claimed_ = BibundleClass::Plain;
};

LiftFamily identity_bibundle(const EtaleGroupoid& g);

struct FunctorResult {
  std::optional<LiftFamily> bundle;
  std::string error;  // incompatibility certificate when !bundle
};

// Bibundle induced by a functor given through its base maps. Equivariance is
// checked on sampled arrows up to the word bound.
FunctorResult from_functor(const EtaleGroupoid& g, const EtaleGroupoid& h,
                           const std::vector<Lift>& base_maps, int bound, int samples = 20,
                           unsigned seed = 0);

// Q after P; lifts are composites q o eta o p over bounded-word target
// arrows eta of the middle groupoid, on exact preimage domains.
LiftFamily compose(const LiftFamily& p, const LiftFamily& q, int bound);

LiftFamily restrict(const LiftFamily& p, const OpenBoxSet& u, const OpenBoxSet& v);

BibundleClass classify(const LiftFamily& p, int bound, int samples = 20, unsigned seed = 0);

struct IsoResult {
  Verdict verdict = Verdict::Unknown;
  std::string detail;
  std::optional<Vec> witness;  // orbit representative where images differ
};

// Bibundle isomorphism in the effective affine class: equality of orbit maps
// on decided samples plus germ agreement of lifts up to target arrows.
IsoResult isomorphic(const LiftFamily& p, const LiftFamily& q, int samples, int bound,
                     unsigned seed = 0);

}  // namespace qfold
