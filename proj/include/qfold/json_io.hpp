#pragma once

#include <nlohmann/json.hpp>

#include "qfold/bibundle.hpp"
#include "qfold/model.hpp"
#include "qfold/nonexample.hpp"
#include "qfold/torus.hpp"

namespace qfold {

using json = nlohmann::json;

// Scalars ride as their exact textual form.
json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const json& j);

json vec_to_json(const Vec& v);
Vec vec_from_json(const json& j);

// {"A": [[...]], "b": [...]}
json affine_to_json(const AffineMap& m);
AffineMap affine_from_json(const json& j);

// {"n": n, "generators": [...]}
json group_to_json(const AffineGroup& g);
AffineGroup group_from_json(const json& j);

// {"boxes": [[["lo","hi"], ...], ...]}; null endpoint = infinite.
json boxset_to_json(const OpenBoxSet& s);
OpenBoxSet boxset_from_json(const json& j);

// {"charts": [{"V": ..., "group": ...}], "cocycle": [{"from", "to", "map", "dom"}]}
json atlas_to_json(const Atlas& a);
Atlas atlas_from_json(const json& j);

// Tagged union: {"type": "action", "group", "V"} or {"type": "germ", ...}.
json groupoid_to_json(const EtaleGroupoid& g);
EtaleGroupoid groupoid_from_json(const json& j);

// {"source", "target", "lifts": [{"dom", "map", ...}], "class"}
json bibundle_to_json(const LiftFamily& p);
LiftFamily bibundle_from_json(const json& j);

json cf_to_json(const ContinuedFraction& cf);
json witness_to_json(const WitnessMatrix& w);

json jet_report_to_json(const nonexample::JetReport& r);
json orbit_coincidence_to_json(const nonexample::OrbitCoincidenceReport& r);
json recovery_failure_to_json(const nonexample::RecoveryFailureReport& r);

}  // namespace qfold
