#pragma once

#include <string>
#include <variant>
#include <vector>

#include "qfold/model.hpp"

namespace qfold {

/// Arrow of a germ groupoid: the germ at `base` of an affine transition from
/// chart `src_chart` to chart `tgt_chart`. Whole affine maps are lossless
/// germ data in the affine class (rigidity).
struct GermArrow {
  int src_chart = 0;
  int tgt_chart = 0;
  AffineMap map;
  Vec base;

  Vec target() const { return map.apply(base); }
  bool operator==(const GermArrow& o) const {
    return src_chart == o.src_chart && tgt_chart == o.tgt_chart && map == o.map &&
           vec_eq(base, o.base);
  }
  std::string key() const;
};

GermArrow identity_germ(int chart, Vec base);
// g after h: requires tgt(h) = src(g) as charts and h.map(h.base) = g.base.
GermArrow arrow_compose(const GermArrow& g, const GermArrow& h);
GermArrow arrow_inverse(const GermArrow& g);

/// Generating set of a pseudogroup of affine transitions over a list of
/// chart domains; closure under composition/inversion/restriction is
/// realized lazily by bounded word search.
struct Pseudogroup {
  std::vector<OpenBoxSet> charts;
  std::vector<Transition> generators;
};

/// Arrow of an action groupoid: (group element, base point).
struct ActionArrow {
  GroupElement element;
  Vec base;

  Vec target() const { return element.map.apply(base); }
};

struct ActionGroupoidData {
  AffineGroup group;
  OpenBoxSet V;
};

struct GermGroupoidData {
  Pseudogroup pseudogroup;
};

/// Etale groupoid over affine data: either an affine action groupoid
/// (Gamma x V)|_V or the germ groupoid of a pseudogroup. Arrow spaces are
/// never materialized; arrows are produced per base point and word bound.
class EtaleGroupoid {
 public:
  EtaleGroupoid() = default;
  static EtaleGroupoid action(AffineGroup gamma, OpenBoxSet v);
  static EtaleGroupoid germ(Pseudogroup p);

  bool is_action() const { return std::holds_alternative<ActionGroupoidData>(data_); }
  const ActionGroupoidData& as_action() const { return std::get<ActionGroupoidData>(data_); }
  const GermGroupoidData& as_germ() const { return std::get<GermGroupoidData>(data_); }

  int dim() const;
  int chart_count() const;
  const OpenBoxSet& chart_domain(int chart) const;

  // Arrows with source (chart, x), realizable with words of length <= bound.
  // Deterministic order: word length, then discovery order within a length.
  std::vector<GermArrow> arrows_at(int chart, const Vec& x, int bound) const;

  // Same orbit? Bounded BFS; No only on exhausted reachable sets or exact
  // lattice decisions (single-chart action case).
  Verdict orbit_equal(int chart_x, const Vec& x, int chart_y, const Vec& y, int bound) const;

  // Find a groupoid translate of (chart,x) lying in `target` (chart
  // `target_chart`), as a germ arrow from x. Bounded search.
  std::optional<GermArrow> translate_into(int chart, const Vec& x, int target_chart,
                                          const OpenBoxSet& target, int bound) const;

 private:
  std::variant<ActionGroupoidData, GermGroupoidData> data_;
};

// Pseudogroup generated by the atlas data: chart-group generators acting
// within each chart plus the cocycle transitions.
EtaleGroupoid germ_groupoid_of_atlas(const Atlas& a);

// Pullback groupoid G|_U: arrows surviving iff base and image lie in U.
EtaleGroupoid restrict(const EtaleGroupoid& g, const OpenBoxSet& u);

// The effect functor on an action-groupoid arrow: the germ at base of the
// canonical bisection y -> (gamma, y). Germ arrows are already germs.
GermArrow effect(const ActionArrow& a);

struct EffectivityReport {
  bool effective = false;
  std::string certificate;
};

// Affine action groupoids with faithful representation and germ groupoids
// are effective; the certificate names the reason (rigidity check on
// enumerated elements, or the germ-variant tag).
EffectivityReport is_effective(const EtaleGroupoid& g, int bound);

// Is the germ arrow realizable as a bounded word in the pseudogroup
// generators? (Action groupoids: membership of the map in the group.)
Verdict realizable(const EtaleGroupoid& g, const GermArrow& arrow, int bound);

}  // namespace qfold
