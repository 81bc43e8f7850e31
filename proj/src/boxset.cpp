#include "qfold/boxset.hpp"

#include <random>

namespace qfold {

bool Interval::contains(const Scalar& x) const {
  if (lo && !(*lo < x)) return false;
  if (hi && !(x < *hi)) return false;
  return true;
}

bool Interval::subset_of(const Interval& o) const {
  if (is_empty()) return true;
  if (o.lo && (!lo || *lo < *o.lo)) return false;
  if (o.hi && (!hi || *o.hi < *hi)) return false;
  return true;
}

std::optional<Interval> Interval::intersect(const Interval& o) const {
  Interval r;
  if (lo && o.lo)
    r.lo = (*lo < *o.lo) ? o.lo : lo;
  else
    r.lo = lo ? lo : o.lo;
  if (hi && o.hi)
    r.hi = (*hi < *o.hi) ? hi : o.hi;
  else
    r.hi = hi ? hi : o.hi;
  if (r.is_empty()) return std::nullopt;
  return r;
}

bool Box::is_empty() const {
  for (const auto& i : iv)
    if (i.is_empty()) return true;
  return false;
}

bool Box::contains(const Vec& x) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (size_t i = 0; i < x.size(); ++i)
    if (!iv[i].contains(x[i])) return false;
  return true;
}

bool Box::subset_of(const Box& o) const {
  if (dim() != o.dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (!iv[i].subset_of(o.iv[i])) return false;
  return true;
}

std::optional<Box> Box::intersect(const Box& o) const {
  if (dim() != o.dim()) return std::nullopt;
  Box r;
  for (int i = 0; i < dim(); ++i) {
    auto s = iv[i].intersect(o.iv[i]);
    if (!s) return std::nullopt;
    r.iv.push_back(*s);
  }
  return r;
}

Vec Box::interior_point() const {
  Vec p;
  Scalar half = Scalar::rational(1, 2);
  for (const auto& i : iv) {
    if (i.lo && i.hi)
      p.push_back((*i.lo + *i.hi) * half);
    else if (i.lo)
      p.push_back(*i.lo + Scalar(1L));
    else if (i.hi)
      p.push_back(*i.hi - Scalar(1L));
    else
      p.push_back(Scalar(0L));
  }
  return p;
}

std::vector<Vec> Box::probe_points() const {
  // Near-corner points: midpoints shifted toward each finite endpoint.
  std::vector<Vec> pts{interior_point()};
  Scalar quarter = Scalar::rational(1, 4);
  Scalar three_quarter = Scalar::rational(3, 4);
  for (int axis = 0; axis < dim(); ++axis) {
    const auto& i = iv[axis];
    if (!i.lo || !i.hi) continue;
    for (const Scalar& t : {quarter, three_quarter}) {
      Vec p = interior_point();
      p[axis] = *i.lo + (*i.hi - *i.lo) * t;
      pts.push_back(std::move(p));
    }
  }
  return pts;
}

OpenBoxSet OpenBoxSet::interval(Scalar lo, Scalar hi) {
  return {1, {Box{{Interval::of(std::move(lo), std::move(hi))}}}};
}

bool OpenBoxSet::is_empty() const {
  for (const auto& b : boxes)
    if (!b.is_empty()) return false;
  return true;
}

bool OpenBoxSet::contains(const Vec& x) const {
  for (const auto& b : boxes)
    if (b.contains(x)) return true;
  return false;
}

OpenBoxSet OpenBoxSet::intersect(const OpenBoxSet& o) const {
  OpenBoxSet r{n, {}};
  for (const auto& a : boxes)
    for (const auto& b : o.boxes)
      if (auto c = a.intersect(b); c && !c->is_empty()) r.boxes.push_back(*c);
  return r;
}

std::optional<bool> OpenBoxSet::subset_of(const OpenBoxSet& o) const {
  bool all_single = true;
  for (const auto& a : boxes) {
    if (a.is_empty()) continue;
    bool covered = false;
    for (const auto& b : o.boxes)
      if (a.subset_of(b)) {
        covered = true;
        break;
      }
    if (!covered) {
      // Might still be covered by the union; we cannot certify from single
      // boxes alone. Check probes for a definite counterexample.
      for (const auto& p : a.probe_points())
        if (!o.contains(p)) return false;
      all_single = false;
    }
  }
  if (all_single) return true;
  return std::nullopt;
}

std::vector<Vec> OpenBoxSet::probe_points() const {
  std::vector<Vec> pts;
  for (const auto& b : boxes) {
    if (b.is_empty()) continue;
    auto p = b.probe_points();
    pts.insert(pts.end(), p.begin(), p.end());
  }
  return pts;
}

std::string OpenBoxSet::key() const {
  std::string k;
  for (const auto& b : boxes) {
    for (const auto& i : b.iv) {
      k += i.lo ? i.lo->key() : "-inf";
      k += ":";
      k += i.hi ? i.hi->key() : "+inf";
      k += ",";
    }
    k += "|";
  }
  return k;
}

std::optional<Box> box_image(const AffineMap& f, const Box& b) {
  if (!f.A.is_diagonal()) return std::nullopt;
  Box r;
  for (int i = 0; i < b.dim(); ++i) {
    const Scalar& a = f.A.at(i, i);
    const Scalar& t = f.b[i];
    auto map_end = [&](const std::optional<Scalar>& e) -> std::optional<Scalar> {
      if (!e) return std::nullopt;
      return a * *e + t;
    };
    Interval out;
    if (a.sign() > 0) {
      out.lo = map_end(b.iv[i].lo);
      out.hi = map_end(b.iv[i].hi);
    } else {
      out.lo = map_end(b.iv[i].hi);
      out.hi = map_end(b.iv[i].lo);
    }
    r.iv.push_back(std::move(out));
  }
  return r;
}

std::optional<OpenBoxSet> boxset_image(const AffineMap& f, const OpenBoxSet& s) {
  OpenBoxSet r{s.n, {}};
  for (const auto& b : s.boxes) {
    auto img = box_image(f, b);
    if (!img) return std::nullopt;
    if (!img->is_empty()) r.boxes.push_back(*img);
  }
  return r;
}

std::optional<OpenBoxSet> boxset_preimage(const AffineMap& f, const OpenBoxSet& s) {
  return boxset_image(invert(f), s);
}

std::vector<Vec> sample_points(const OpenBoxSet& s, int count, unsigned seed) {
  std::vector<Vec> pts;
  if (s.boxes.empty() || count <= 0) return pts;
  std::mt19937 rng(seed);
  constexpr long kDenom = 4096;
  std::uniform_int_distribution<long> num(1, kDenom - 1);
  std::uniform_int_distribution<long> span(-8, 8);
  std::uniform_int_distribution<size_t> pick(0, s.boxes.size() - 1);

  int guard = 0;
  while (static_cast<int>(pts.size()) < count && guard < count * 20) {
    ++guard;
    const Box& b = s.boxes[pick(rng)];
    if (b.is_empty()) continue;
    Vec p;
    for (const auto& i : b.iv) {
      Scalar frac = Scalar::rational(num(rng), kDenom);
      if (i.lo && i.hi) {
        p.push_back(*i.lo + (*i.hi - *i.lo) * frac);
      } else if (i.lo) {
        p.push_back(*i.lo + frac + Scalar(span(rng) >= 0 ? span(rng) : -span(rng)));
      } else if (i.hi) {
        p.push_back(*i.hi - frac - Scalar(span(rng) >= 0 ? span(rng) : -span(rng)));
      } else {
        p.push_back(Scalar(span(rng)) + frac);
      }
    }
    if (b.contains(p)) pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace qfold
