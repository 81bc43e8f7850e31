#include "qfold/model.hpp"

#include <deque>
#include <map>

namespace qfold {

ModelQuasifold::ModelQuasifold(OpenBoxSet v, AffineGroup gamma)
    : V_(std::move(v)), gamma_(std::move(gamma)) {
  if (V_.n != gamma_.dim()) throw std::invalid_argument("ModelQuasifold: dim V != dim Gamma");
}

InvarianceReport ModelQuasifold::check_invariance(int bound) {
  invariance_checked_ = true;
  bool all_exact = true;
  for (const auto& e : gamma_.enumerate(bound)) {
    if (e.word.empty()) continue;
    auto img = boxset_image(e.map, V_);
    if (img) {
      auto sub = img->subset_of(V_);
      if (sub && !*sub) {
        // Locate a concrete interior point that escapes.
        for (const auto& p : V_.probe_points())
          if (!V_.contains(e.map.apply(p))) return {InvarianceVerdict::CounterexampleFound, e, p};
        all_exact = false;  // escape exists but only at sampling resolution
        continue;
      }
      if (!sub) all_exact = false;
      continue;
    }
    // Non-diagonal A: sampling only.
    all_exact = false;
    for (const auto& p : V_.probe_points())
      if (!V_.contains(e.map.apply(p))) return {InvarianceVerdict::CounterexampleFound, e, p};
  }
  return {all_exact ? InvarianceVerdict::Invariant : InvarianceVerdict::Unknown, std::nullopt,
          std::nullopt};
}

OrbitResult ModelQuasifold::same_point(const Vec& x, const Vec& y, int bound) const {
  if (!V_.contains(x) || !V_.contains(y))
    throw std::invalid_argument("same_point: representative outside V");
  return gamma_.orbit_equal(x, y, bound);
}

Atlas::Atlas(std::vector<ModelQuasifold> charts, std::vector<Transition> cocycle,
             std::vector<std::string> labels)
    : charts_(std::move(charts)), cocycle_(std::move(cocycle)), labels_(std::move(labels)) {
  for (const auto& t : cocycle_) {
    if (t.from < 0 || t.from >= static_cast<int>(charts_.size()) || t.to < 0 ||
        t.to >= static_cast<int>(charts_.size()))
      throw std::invalid_argument("Atlas: transition chart index out of range");
    auto sub = t.dom.subset_of(charts_[t.from].V());
    if (sub && !*sub) throw std::invalid_argument("Atlas: transition domain escapes its chart");
    auto img = boxset_image(t.map, t.dom);
    if (img) {
      auto isub = img->subset_of(charts_[t.to].V());
      if (isub && !*isub)
        throw std::invalid_argument("Atlas: transition image escapes target chart");
    } else {
      for (const auto& p : t.dom.probe_points())
        if (!charts_[t.to].V().contains(t.map.apply(p)))
          throw std::invalid_argument("Atlas: transition image escapes target chart (sampled)");
    }
  }
  if (labels_.empty())
    for (size_t i = 0; i < charts_.size(); ++i) labels_.push_back("chart" + std::to_string(i));
}

AtlasHandle Atlas::pi(int chart, const Vec& x) const {
  if (chart < 0 || chart >= static_cast<int>(charts_.size()))
    throw std::invalid_argument("pi: chart index out of range");
  if (!charts_[chart].V().contains(x)) throw std::invalid_argument("pi: point outside chart");
  return AtlasHandle{chart, x};
}

Verdict Atlas::pi_equal(const AtlasHandle& a, const AtlasHandle& b, int bound) const {
  if (a.chart == b.chart && vec_eq(a.point, b.point)) return Verdict::Yes;

  // Single chart, no cocycle: this is exactly the model orbit relation,
  // which has an exact No in the lattice case.
  if (charts_.size() == 1 && cocycle_.empty())
    return charts_[0].same_point(a.point, b.point, bound).verdict;

  // BFS over (chart, point) states under chart-group moves and transitions.
  struct State {
    int chart;
    Vec point;
    int depth;
  };
  auto state_key = [](int chart, const Vec& p) { return std::to_string(chart) + "#" + vec_key(p); };

  std::map<std::string, bool> seen;
  std::deque<State> queue;
  queue.push_back({a.chart, a.point, 0});
  seen[state_key(a.chart, a.point)] = true;
  bool frontier_truncated = false;

  auto try_push = [&](int chart, Vec p, int depth) -> bool {
    if (!charts_[chart].V().contains(p)) return false;
    if (chart == b.chart && vec_eq(p, b.point)) return true;
    std::string k = state_key(chart, p);
    if (!seen.emplace(k, true).second) return false;
    queue.push_back({chart, std::move(p), depth});
    return false;
  };

  while (!queue.empty()) {
    State st = queue.front();
    queue.pop_front();
    if (st.depth >= bound) {
      frontier_truncated = true;
      continue;
    }
    // Within-chart group moves.
    for (const auto& g : charts_[st.chart].group().generators()) {
      if (try_push(st.chart, g.apply(st.point), st.depth + 1)) return Verdict::Yes;
      if (try_push(st.chart, invert(g).apply(st.point), st.depth + 1)) return Verdict::Yes;
    }
    // Cocycle transitions, both directions.
    for (const auto& t : cocycle_) {
      if (t.from == st.chart && t.dom.contains(st.point)) {
        if (try_push(t.to, t.map.apply(st.point), st.depth + 1)) return Verdict::Yes;
      }
      if (t.to == st.chart) {
        Vec pre = invert(t.map).apply(st.point);
        if (t.dom.contains(pre) && try_push(t.from, std::move(pre), st.depth + 1))
          return Verdict::Yes;
      }
    }
  }
  // In the lattice single-group multi-chart case we cannot certify No from a
  // truncated search; only a fully exhausted reachable set certifies it.
  return frontier_truncated ? Verdict::Unknown : Verdict::No;
}

Verdict Atlas::check_cocycle_closure(int bound) const {
  bool all_decided = true;
  for (const auto& s : cocycle_)
    for (const auto& t : cocycle_) {
      if (t.from != s.to) continue;
      // Composite t.map o s.map on the overlap of s.dom with preimage of t.dom.
      auto mid = boxset_preimage(s.map, t.dom);
      OpenBoxSet overlap = mid ? s.dom.intersect(*mid) : OpenBoxSet::empty(dim());
      if (!mid) {
        all_decided = false;
        continue;
      }
      if (overlap.is_empty()) continue;
      AffineMap comp = compose(t.map, s.map);
      for (const auto& p : overlap.probe_points()) {
        // The composite must agree at p with the glued relation: its value in
        // chart t.to must be pi-equal to p in chart s.from.
        Verdict v = pi_equal(AtlasHandle{s.from, p}, AtlasHandle{t.to, comp.apply(p)}, bound);
        if (v == Verdict::No) return Verdict::No;
        if (v == Verdict::Unknown) all_decided = false;
      }
    }
  return all_decided ? Verdict::Yes : Verdict::Unknown;
}

}  // namespace qfold
