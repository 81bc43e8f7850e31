#include "qfold/bibundle.hpp"

#include <map>

namespace qfold {

namespace {

std::string groupoid_key(const EtaleGroupoid& g) {
  std::string k;
  if (g.is_action()) {
    k = "A|" + g.as_action().V.key() + "|";
    for (const auto& gen : g.as_action().group.generators()) k += gen.key() + ";";
  } else {
    k = "G|";
    for (const auto& c : g.as_germ().pseudogroup.charts) k += c.key() + "|";
    for (const auto& t : g.as_germ().pseudogroup.generators)
      k += std::to_string(t.from) + ">" + std::to_string(t.to) + ":" + t.map.key() + ":" +
           t.dom.key() + ";";
  }
  return k;
}

// All transitions (with exact box domains) realizable by words of length
// <= bound. Elements whose domains are not box-representable are skipped;
// compositions built from them would carry unsound domains.
std::vector<Transition> enumerate_transitions(const EtaleGroupoid& g, int bound) {
  std::vector<Transition> out;
  std::map<std::string, bool> seen;
  auto emit = [&](Transition t) {
    if (t.dom.is_empty()) return;
    std::string k = std::to_string(t.from) + ">" + std::to_string(t.to) + "#" + t.map.key() + "#" +
                    t.dom.key();
    if (!seen.emplace(k, true).second) return;
    out.push_back(std::move(t));
  };

  if (g.is_action()) {
    const auto& d = g.as_action();
    for (const auto& e : d.group.enumerate(bound)) {
      auto pre = boxset_preimage(e.map, d.V);
      if (!pre) continue;
      emit(Transition{0, 0, e.map, d.V.intersect(*pre)});
    }
    return out;
  }

  const auto& P = g.as_germ().pseudogroup;
  for (int c = 0; c < static_cast<int>(P.charts.size()); ++c)
    emit(Transition{c, c, AffineMap::identity(g.dim()), P.charts[c]});
  size_t frontier_begin = 0;
  std::vector<Transition> gens = P.generators;
  for (const auto& t : P.generators) {
    auto img = boxset_image(t.map, t.dom);
    if (img) gens.push_back(Transition{t.to, t.from, invert(t.map), *img});
  }
  for (int len = 1; len <= bound; ++len) {
    size_t frontier_end = out.size();
    bool grew = false;
    for (size_t i = frontier_begin; i < frontier_end; ++i)
      for (const auto& t : gens) {
        if (t.from != out[i].to) continue;
        auto mid = boxset_preimage(out[i].map, t.dom);
        if (!mid) continue;
        OpenBoxSet dom = out[i].dom.intersect(*mid);
        if (dom.is_empty()) continue;
        size_t before = out.size();
        emit(Transition{out[i].from, t.to, compose(t.map, out[i].map), std::move(dom)});
        grew = grew || out.size() > before;
      }
    frontier_begin = frontier_end;
    if (!grew) break;
  }
  return out;
}

}  // namespace

const char* bibundle_class_name(BibundleClass c) {
  switch (c) {
    case BibundleClass::Plain:
      return "plain";
    case BibundleClass::LocallyInvertible:
      return "locally-invertible";
    case BibundleClass::Invertible:
      return "invertible";
    case BibundleClass::Unknown:
      return "unknown";
  }
  return "?";
}

LiftFamily::LiftFamily(EtaleGroupoid source, EtaleGroupoid target, std::vector<Lift> lifts,
                       BibundleClass claimed)
    : source_(std::move(source)), target_(std::move(target)), claimed_(claimed) {
  for (auto& l : lifts) {
    if (l.map.dim() != source_.dim()) throw std::invalid_argument("LiftFamily: lift dim mismatch");
    if (!l.dom.is_empty()) lifts_.push_back(std::move(l));
  }
}

OrbitMapResult LiftFamily::orbit_image(int chart, const Vec& x, int bound) const {
  for (const auto& l : lifts_) {
    auto arrow = source_.translate_into(chart, x, l.src_chart, l.dom, bound);
    if (arrow) return {Verdict::Yes, l.tgt_chart, l.map.apply(arrow->target())};
  }
  return {Verdict::Unknown, 0, {}};
}

Verdict LiftFamily::coherence_check(int samples, int bound, unsigned seed) const {
  bool all_decided = true;
  // Overlapping lifts must differ by a target-arrow germ at sampled points.
  for (size_t i = 0; i < lifts_.size(); ++i)
    for (size_t j = i + 1; j < lifts_.size(); ++j) {
      if (lifts_[i].src_chart != lifts_[j].src_chart) continue;
      OpenBoxSet overlap = lifts_[i].dom.intersect(lifts_[j].dom);
      if (overlap.is_empty()) continue;
      for (const auto& x : sample_points(overlap, std::max(1, samples / 4), seed)) {
        Vec yi = lifts_[i].map.apply(x);
        bool found = false;
        for (const auto& eta : target_.arrows_at(lifts_[i].tgt_chart, yi, bound))
          if (eta.tgt_chart == lifts_[j].tgt_chart &&
              compose(eta.map, lifts_[i].map) == lifts_[j].map) {
            found = true;
            break;
          }
        if (!found) all_decided = false;
      }
    }
  // Orbit compatibility: each lift sends decided-equal points to
  // decided-equal points. Sample x, move by a short source word, compare.
  for (const auto& l : lifts_) {
    for (const auto& x : sample_points(l.dom, std::max(1, samples / 4), seed + 1)) {
      for (const auto& a : source_.arrows_at(l.src_chart, x, std::min(bound, 2))) {
        Vec y = a.target();
        if (a.tgt_chart != l.src_chart || !l.dom.contains(y)) continue;
        Verdict v = target_.orbit_equal(l.tgt_chart, l.map.apply(x), l.tgt_chart, l.map.apply(y),
                                        bound);
        if (v == Verdict::No) return Verdict::No;
        if (v == Verdict::Unknown) all_decided = false;
      }
    }
  }
  return all_decided ? Verdict::Yes : Verdict::Unknown;
}

LiftFamily identity_bibundle(const EtaleGroupoid& g) {
  std::vector<Lift> lifts;
  for (int c = 0; c < g.chart_count(); ++c)
    lifts.push_back(Lift{c, c, g.chart_domain(c), AffineMap::identity(g.dim())});
  return LiftFamily(g, g, std::move(lifts), BibundleClass::Invertible);
}

FunctorResult from_functor(const EtaleGroupoid& g, const EtaleGroupoid& h,
                           const std::vector<Lift>& base_maps, int bound, int samples,
                           unsigned seed) {
  // Functor compatibility on sampled arrows: g-arrows between covered points
  // must map into h-arrows (checked at orbit level, which is exact in the
  // decided cases).
  for (const auto& bm : base_maps) {
    for (const auto& x : sample_points(bm.dom, std::max(1, samples / 2), seed)) {
      for (const auto& a : g.arrows_at(bm.src_chart, x, std::min(bound, 2))) {
        if (a.tgt_chart != bm.src_chart || !bm.dom.contains(a.target())) continue;
        Vec fx = bm.map.apply(x);
        Vec fy = bm.map.apply(a.target());
        Verdict v = h.orbit_equal(bm.tgt_chart, fx, bm.tgt_chart, fy, bound);
        if (v == Verdict::No) {
          return {std::nullopt, "arrow at " + vec_key(x) +
                                    " maps to points in distinct target orbits (" + vec_key(fx) +
                                    " vs " + vec_key(fy) + ")"};
        }
      }
    }
  }
  return {LiftFamily(g, h, base_maps, BibundleClass::LocallyInvertible), ""};
}

LiftFamily compose(const LiftFamily& p, const LiftFamily& q, int bound) {
  if (groupoid_key(p.target()) != groupoid_key(q.source()))
    throw std::invalid_argument("compose: target of P differs from source of Q");
  std::vector<Lift> lifts;
  std::map<std::string, bool> seen;
  auto middle = enumerate_transitions(p.target(), bound);
  for (const auto& pl : p.lifts())
    for (const auto& eta : middle) {
      if (eta.from != pl.tgt_chart) continue;
      auto mid_pre = boxset_preimage(pl.map, eta.dom);
      if (!mid_pre) continue;
      for (const auto& ql : q.lifts()) {
        if (ql.src_chart != eta.to) continue;
        auto q_pre = boxset_preimage(compose(eta.map, pl.map), ql.dom);
        if (!q_pre) continue;
        OpenBoxSet dom = pl.dom.intersect(*mid_pre).intersect(*q_pre);
        if (dom.is_empty()) continue;
        AffineMap m = compose(ql.map, compose(eta.map, pl.map));
        std::string k = std::to_string(pl.src_chart) + ">" + std::to_string(ql.tgt_chart) + "#" +
                        m.key() + "#" + dom.key();
        if (!seen.emplace(k, true).second) continue;
        lifts.push_back(Lift{pl.src_chart, ql.tgt_chart, std::move(dom), std::move(m)});
      }
    }
  BibundleClass cls = BibundleClass::Plain;
  auto li = [](BibundleClass c) {
    return c == BibundleClass::LocallyInvertible || c == BibundleClass::Invertible;
  };
  if (li(p.claimed_class()) && li(q.claimed_class())) cls = BibundleClass::LocallyInvertible;
  return LiftFamily(p.source(), q.target(), std::move(lifts), cls);
}

LiftFamily restrict(const LiftFamily& p, const OpenBoxSet& u, const OpenBoxSet& v) {
  std::vector<Lift> lifts;
  for (const auto& l : p.lifts()) {
    OpenBoxSet dom = l.dom.intersect(u);
    if (auto pre = boxset_preimage(l.map, v)) {
      dom = dom.intersect(*pre);
    } else {
      // Keep only sampled-in-V part unverifiable; drop to stay sound.
      continue;
    }
    if (!dom.is_empty()) lifts.push_back(Lift{l.src_chart, l.tgt_chart, std::move(dom), l.map});
  }
  return LiftFamily(restrict(p.source(), u), restrict(p.target(), v), std::move(lifts),
                    p.claimed_class() == BibundleClass::Plain ? BibundleClass::Plain
                                                              : BibundleClass::LocallyInvertible);
}

BibundleClass classify(const LiftFamily& p, int bound, int samples, unsigned seed) {
  if (p.empty()) return BibundleClass::Plain;
  if (p.coherence_check(samples, bound, seed) == Verdict::No) return BibundleClass::Plain;

  // Lifts are invertible affine by construction; local invertibility of the
  // family reduces to orbit saturation checks for the Invertible upgrade.
  auto saturated = [&](const EtaleGroupoid& g, auto domain_of_lift) -> Verdict {
    bool all = true;
    for (int c = 0; c < g.chart_count(); ++c) {
      for (const auto& x : sample_points(g.chart_domain(c), samples, seed + 7 * c)) {
        bool hit = false;
        for (size_t i = 0; i < p.lifts().size(); ++i) {
          auto [chart, dom] = domain_of_lift(p.lifts()[i]);
          if (g.translate_into(c, x, chart, dom, bound)) {
            hit = true;
            break;
          }
        }
        if (!hit) all = false;
      }
    }
    return all ? Verdict::Yes : Verdict::Unknown;
  };

  Verdict src = saturated(p.source(), [](const Lift& l) { return std::pair(l.src_chart, l.dom); });
  Verdict tgt = saturated(p.target(), [](const Lift& l) {
    auto img = boxset_image(l.map, l.dom);
    return std::pair(l.tgt_chart, img ? *img : OpenBoxSet::empty(l.dom.n));
  });

  if (src == Verdict::Yes && tgt == Verdict::Yes) return BibundleClass::Invertible;
  return BibundleClass::Unknown;
}

IsoResult isomorphic(const LiftFamily& p, const LiftFamily& q, int samples, int bound,
                     unsigned seed) {
  if (groupoid_key(p.source()) != groupoid_key(q.source()) ||
      groupoid_key(p.target()) != groupoid_key(q.target()))
    throw std::invalid_argument("isomorphic: bundles connect different groupoids");
  if (p.claimed_class() == BibundleClass::Plain || q.claimed_class() == BibundleClass::Plain)
    throw std::invalid_argument("isomorphic: requires locally invertible bundles");

  bool undecided = false;
  int decided = 0;
  auto check_at = [&](int chart, const Vec& x) -> std::optional<IsoResult> {
    auto ip = p.orbit_image(chart, x, bound);
    auto iq = q.orbit_image(chart, x, bound);
    if (ip.verdict != Verdict::Yes || iq.verdict != Verdict::Yes) {
      undecided = true;
      return std::nullopt;
    }
    Verdict v = p.target().orbit_equal(ip.chart, ip.rep, iq.chart, iq.rep, bound);
    if (v == Verdict::No)
      return IsoResult{Verdict::No,
                       "orbit images differ at representative " + vec_key(x) + ": " +
                           vec_key(ip.rep) + " vs " + vec_key(iq.rep),
                       x};
    if (v == Verdict::Unknown)
      undecided = true;
    else
      ++decided;
    return std::nullopt;
  };

  for (const auto& l : p.lifts())
    for (const auto& x : sample_points(l.dom, std::max(1, samples / 2), seed))
      if (auto r = check_at(l.src_chart, x)) return *r;
  for (const auto& l : q.lifts())
    for (const auto& x : sample_points(l.dom, std::max(1, samples / 2), seed + 1))
      if (auto r = check_at(l.src_chart, x)) return *r;

  // Germ-level agreement: where both families have a lift at the same point,
  // the lifts must differ by a target arrow germ.
  for (const auto& lp : p.lifts())
    for (const auto& lq : q.lifts()) {
      if (lp.src_chart != lq.src_chart) continue;
      OpenBoxSet overlap = lp.dom.intersect(lq.dom);
      if (overlap.is_empty()) continue;
      for (const auto& x : sample_points(overlap, std::max(1, samples / 4), seed + 2)) {
        Vec y = lp.map.apply(x);
        GermArrow diff{lp.tgt_chart, lq.tgt_chart, compose(lq.map, invert(lp.map)), y};
        Verdict v = realizable(p.target(), diff, bound);
        if (v == Verdict::No)
          return IsoResult{Verdict::No,
                           "lift germs at " + vec_key(x) +
                               " differ by a map outside the target groupoid",
                           x};
        if (v == Verdict::Unknown) undecided = true;
      }
    }

  if (undecided || decided == 0) return {Verdict::Unknown, "bounded search inconclusive", {}};
  return {Verdict::Yes, "orbit maps agree on " + std::to_string(decided) +
                            " decided samples; lift germs agree up to target arrows",
          {}};
}

}  // namespace qfold
