#pragma once

#include <optional>
#include <vector>

#include "qfold/bibundle.hpp"
#include "qfold/model.hpp"

namespace qfold {

/// A map sampled on an open box domain, either exactly or numerically.
struct SampledMap {
  OpenBoxSet domain;
  std::vector<std::pair<Vec, Vec>> samples;  // (x, h(x))
  std::optional<std::vector<Mat>> derivative_samples;
  bool exact = true;
  double tol = 1e-9;
};

enum class RecoveryOutcome { Match, NoMatch, Ambiguous };

struct RecoveryResult {
  RecoveryOutcome outcome = RecoveryOutcome::NoMatch;
  std::optional<GroupElement> element;   // Match
  double residual = 0.0;                 // Match: 0 exact / <= tol numeric
  int exhausted_bound = 0;               // NoMatch
  std::vector<GroupElement> candidates;  // Ambiguous (numeric only)
};

// Recover the group element a sampled orbit-preserving map locally equals:
// fit the unique affine map through the samples (exact solve or least
// squares), then match it against the enumerated group. For exact samples
// over a translation lattice the No side is decided exactly.
RecoveryResult recover_affine(const SampledMap& h, const AffineGroup& gamma, int bound,
                              double tol = 1e-9);

struct LocalLift {
  AffineMap map;
  OpenBoxSet dom;
};

// Lift a chart-level local diffeomorphism to a transition with prescribed
// endpoints: take a lift psi0 near r from the family, then post-compose with
// the group element carrying psi0(r) to r_prime.
std::optional<LocalLift> lift_local_diffeo(const LiftFamily& f, const Vec& r, const Vec& r_prime,
                                           int bound);

}  // namespace qfold
