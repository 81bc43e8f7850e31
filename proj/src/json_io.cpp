#include "qfold/json_io.hpp"

namespace qfold {

json scalar_to_json(const Scalar& s) { return s.str(); }

Scalar scalar_from_json(const json& j) {
  if (j.is_number_integer()) return Scalar(j.get<long>());
  if (j.is_number_float()) return Scalar::approx(j.get<double>());
  return Scalar::parse(j.get<std::string>());
}

json vec_to_json(const Vec& v) {
  json out = json::array();
  for (const auto& s : v) out.push_back(scalar_to_json(s));
  return out;
}

Vec vec_from_json(const json& j) {
  Vec v;
  for (const auto& e : j) v.push_back(scalar_from_json(e));
  return v;
}

json affine_to_json(const AffineMap& m) {
  json rows = json::array();
  for (int r = 0; r < m.dim(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.dim(); ++c) row.push_back(scalar_to_json(m.A.at(r, c)));
    rows.push_back(std::move(row));
  }
  return json{{"A", rows}, {"b", vec_to_json(m.b)}};
}

AffineMap affine_from_json(const json& j) {
  const auto& rows = j.at("A");
  int n = static_cast<int>(rows.size());
  Mat A(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) A.at(r, c) = scalar_from_json(rows[r][c]);
  return AffineMap(std::move(A), vec_from_json(j.at("b")));
}

json group_to_json(const AffineGroup& g) {
  json gens = json::array();
  for (const auto& m : g.generators()) gens.push_back(affine_to_json(m));
  return json{{"n", g.dim()}, {"generators", gens}};
}

AffineGroup group_from_json(const json& j) {
  std::vector<AffineMap> gens;
  for (const auto& e : j.at("generators")) gens.push_back(affine_from_json(e));
  return AffineGroup(j.at("n").get<int>(), std::move(gens));
}

json boxset_to_json(const OpenBoxSet& s) {
  json boxes = json::array();
  for (const auto& b : s.boxes) {
    json box = json::array();
    for (const auto& i : b.iv) {
      json iv = json::array();
      iv.push_back(i.lo ? scalar_to_json(*i.lo) : json(nullptr));
      iv.push_back(i.hi ? scalar_to_json(*i.hi) : json(nullptr));
      box.push_back(std::move(iv));
    }
    boxes.push_back(std::move(box));
  }
  return json{{"n", s.n}, {"boxes", boxes}};
}

OpenBoxSet boxset_from_json(const json& j) {
  OpenBoxSet s;
  s.n = j.at("n").get<int>();
  for (const auto& bj : j.at("boxes")) {
    Box b;
    for (const auto& ij : bj) {
      Interval iv;
      if (!ij[0].is_null()) iv.lo = scalar_from_json(ij[0]);
      if (!ij[1].is_null()) iv.hi = scalar_from_json(ij[1]);
      b.iv.push_back(std::move(iv));
    }
    s.boxes.push_back(std::move(b));
  }
  return s;
}

json atlas_to_json(const Atlas& a) {
  json charts = json::array();
  for (const auto& c : a.charts())
    charts.push_back(json{{"V", boxset_to_json(c.V())}, {"group", group_to_json(c.group())}});
  json cocycle = json::array();
  for (const auto& t : a.cocycle())
    cocycle.push_back(json{{"from", t.from},
                           {"to", t.to},
                           {"map", affine_to_json(t.map)},
                           {"dom", boxset_to_json(t.dom)}});
  return json{{"charts", charts}, {"cocycle", cocycle}, {"labels", a.labels()}};
}

Atlas atlas_from_json(const json& j) {
  std::vector<ModelQuasifold> charts;
  for (const auto& c : j.at("charts"))
    charts.emplace_back(boxset_from_json(c.at("V")), group_from_json(c.at("group")));
  std::vector<Transition> cocycle;
  if (j.contains("cocycle"))
    for (const auto& t : j.at("cocycle"))
      cocycle.push_back(Transition{t.at("from").get<int>(), t.at("to").get<int>(),
                                   affine_from_json(t.at("map")), boxset_from_json(t.at("dom"))});
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  return Atlas(std::move(charts), std::move(cocycle), std::move(labels));
}

json groupoid_to_json(const EtaleGroupoid& g) {
  if (g.is_action())
    return json{{"type", "action"},
                {"group", group_to_json(g.as_action().group)},
                {"V", boxset_to_json(g.as_action().V)}};
  const auto& p = g.as_germ().pseudogroup;
  json charts = json::array();
  for (const auto& c : p.charts) charts.push_back(boxset_to_json(c));
  json gens = json::array();
  for (const auto& t : p.generators)
    gens.push_back(json{{"from", t.from},
                        {"to", t.to},
                        {"map", affine_to_json(t.map)},
                        {"dom", boxset_to_json(t.dom)}});
  return json{{"type", "germ"}, {"charts", charts}, {"generators", gens}};
}

EtaleGroupoid groupoid_from_json(const json& j) {
  std::string type = j.at("type").get<std::string>();
  if (type == "action")
    return EtaleGroupoid::action(group_from_json(j.at("group")), boxset_from_json(j.at("V")));
  if (type != "germ") throw std::invalid_argument("groupoid_from_json: unknown type " + type);
  Pseudogroup p;
  for (const auto& c : j.at("charts")) p.charts.push_back(boxset_from_json(c));
  for (const auto& t : j.at("generators"))
    p.generators.push_back(Transition{t.at("from").get<int>(), t.at("to").get<int>(),
                                      affine_from_json(t.at("map")),
                                      boxset_from_json(t.at("dom"))});
  return EtaleGroupoid::germ(std::move(p));
}

json bibundle_to_json(const LiftFamily& p) {
  json lifts = json::array();
  for (const auto& l : p.lifts())
    lifts.push_back(json{{"src_chart", l.src_chart},
                         {"tgt_chart", l.tgt_chart},
                         {"dom", boxset_to_json(l.dom)},
                         {"map", affine_to_json(l.map)}});
  return json{{"source", groupoid_to_json(p.source())},
              {"target", groupoid_to_json(p.target())},
              {"lifts", lifts},
              {"class", bibundle_class_name(p.claimed_class())}};
}

LiftFamily bibundle_from_json(const json& j) {
  std::vector<Lift> lifts;
  for (const auto& l : j.at("lifts")) {
    Lift lift;
    if (l.contains("src_chart")) lift.src_chart = l.at("src_chart").get<int>();
    if (l.contains("tgt_chart")) lift.tgt_chart = l.at("tgt_chart").get<int>();
    lift.dom = boxset_from_json(l.at("dom"));
    lift.map = affine_from_json(l.at("map"));
    lifts.push_back(std::move(lift));
  }
  BibundleClass cls = BibundleClass::Plain;
  if (j.contains("class")) {
    std::string c = j.at("class").get<std::string>();
    if (c == "invertible") cls = BibundleClass::Invertible;
    else if (c == "locally-invertible") cls = BibundleClass::LocallyInvertible;
    else if (c == "unknown") cls = BibundleClass::Unknown;
  }
  return LiftFamily(groupoid_from_json(j.at("source")), groupoid_from_json(j.at("target")),
                    std::move(lifts), cls);
}

json cf_to_json(const ContinuedFraction& cf) {
  json pre = json::array(), per = json::array();
  for (const auto& a : cf.preperiod) pre.push_back(a.get_str());
  for (const auto& a : cf.period) per.push_back(a.get_str());
  return json{{"preperiod", pre}, {"period", per}};
}

json witness_to_json(const WitnessMatrix& w) {
  return json::array({json::array({w.a.get_str(), w.b.get_str()}),
                      json::array({w.c.get_str(), w.d.get_str()})});
}

json jet_report_to_json(const nonexample::JetReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back(json{{"name", "jet-order-" + std::to_string(c.order)},
                          {"value", c.estimate},
                          {"bound", c.tolerance},
                          {"pass", c.pass}});
  checks.push_back(json{{"name", "flat-envelope"},
                        {"value", r.envelope_worst_ratio},
                        {"bound", 1.0 + 1e-6},
                        {"pass", r.envelope_pass}});
  return json{{"checks", checks}, {"pass", r.pass}};
}

json orbit_coincidence_to_json(const nonexample::OrbitCoincidenceReport& r) {
  return json{{"checks", json::array({json{{"name", "orbit-coincidence"},
                                           {"value", r.max_discrepancy},
                                           {"bound", r.tolerance},
                                           {"pass", r.pass}}})},
              {"pass", r.pass}};
}

json recovery_failure_to_json(const nonexample::RecoveryFailureReport& r) {
  json cands = json::array();
  for (const auto& c : r.candidates)
    cands.push_back(json{{"k", c.k},
                         {"residual", c.residual_total},
                         {"residual_positive", c.residual_positive},
                         {"residual_negative", c.residual_negative}});
  return json{{"candidates", cands},
              {"best_k", r.best_k},
              {"best_residual", r.best_residual},
              {"one_sided_best", r.one_sided_best},
              {"matched", r.matched},
              {"jet_spread", r.jet_spread},
              {"summary", r.summary},
              {"pass", !r.matched}};
}

}  // namespace qfold
