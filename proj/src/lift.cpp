#include "qfold/lift.hpp"

#include <cmath>

namespace qfold {

namespace {

// Exact affine interpolation through n+1 affinely independent samples,
// checked for consistency against all remaining samples. Nullopt when no
// single affine map fits.
std::optional<AffineMap> exact_affine_fit(const std::vector<std::pair<Vec, Vec>>& samples, int n) {
  if (static_cast<int>(samples.size()) < n + 1) return std::nullopt;
  // Find n+1 samples with affinely independent x's: rows [x^T 1].
  std::vector<int> chosen;
  Mat sys(n + 1);
  for (size_t i = 0; i < samples.size() && static_cast<int>(chosen.size()) < n + 1; ++i) {
    std::vector<int> trial = chosen;
    trial.push_back(static_cast<int>(i));
    Mat m(n + 1);
    for (int r = 0; r < static_cast<int>(trial.size()); ++r) {
      for (int c = 0; c < n; ++c) m.at(r, c) = samples[trial[r]].first[c];
      m.at(r, n) = Scalar(1L);
    }
    // Rank check via elimination on the filled rows: accept the sample when
    // it increases the rank. Cheap because n is tiny.
    int rank = 0;
    Mat e = m;
    int rows = static_cast<int>(trial.size());
    for (int c = 0; c <= n && rank < rows; ++c) {
      int piv = -1;
      for (int r = rank; r < rows; ++r)
        if (!e.at(r, c).is_zero()) {
          piv = r;
          break;
        }
      if (piv < 0) continue;
      for (int cc = 0; cc <= n; ++cc) std::swap(e.e[piv * (n + 1) + cc], e.e[rank * (n + 1) + cc]);
      for (int r = rank + 1; r < rows; ++r) {
        if (e.at(r, c).is_zero()) continue;
        Scalar f = e.at(r, c) / e.at(rank, c);
        for (int cc = 0; cc <= n; ++cc)
          e.e[r * (n + 1) + cc] = e.e[r * (n + 1) + cc] - f * e.e[rank * (n + 1) + cc];
      }
      ++rank;
    }
    if (rank == rows) {
      chosen = trial;
      sys = m;
    }
  }
  if (static_cast<int>(chosen.size()) < n + 1) return std::nullopt;

  auto inv = mat_inverse(sys);
  if (!inv) return std::nullopt;
  Mat A(n);
  Vec b(n, Scalar(0L));
  for (int out = 0; out < n; ++out) {
    Vec rhs(n + 1, Scalar(0L));
    for (int r = 0; r < n + 1; ++r) rhs[r] = samples[chosen[r]].second[out];
    Vec coef = mat_vec(*inv, rhs);
    for (int c = 0; c < n; ++c) A.at(out, c) = coef[c];
    b[out] = coef[n];
  }
  AffineMap fit(std::move(A), std::move(b));
  for (const auto& [x, hx] : samples)
    if (!vec_eq(fit.apply(x), hx)) return std::nullopt;
  return fit;
}

// Numeric least-squares affine fit (normal equations; n is tiny).
std::optional<AffineMap> numeric_affine_fit(const std::vector<std::pair<Vec, Vec>>& samples,
                                            int n) {
  const int m = n + 1;
  if (static_cast<int>(samples.size()) < m) return std::nullopt;
  std::vector<std::vector<double>> ata(m, std::vector<double>(m, 0.0));
  std::vector<std::vector<double>> atb(m, std::vector<double>(n, 0.0));
  for (const auto& [x, hx] : samples) {
    std::vector<double> row(m);
    for (int c = 0; c < n; ++c) row[c] = x[c].to_double();
    row[n] = 1.0;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) ata[i][j] += row[i] * row[j];
      for (int o = 0; o < n; ++o) atb[i][o] += row[i] * hx[o].to_double();
    }
  }
  // Gaussian elimination with partial pivoting.
  for (int c = 0; c < m; ++c) {
    int piv = c;
    for (int r = c + 1; r < m; ++r)
      if (std::abs(ata[r][c]) > std::abs(ata[piv][c])) piv = r;
    if (std::abs(ata[piv][c]) < 1e-14) return std::nullopt;
    std::swap(ata[piv], ata[c]);
    std::swap(atb[piv], atb[c]);
    for (int r = 0; r < m; ++r) {
      if (r == c) continue;
      double f = ata[r][c] / ata[c][c];
      for (int cc = 0; cc < m; ++cc) ata[r][cc] -= f * ata[c][cc];
      for (int o = 0; o < n; ++o) atb[r][o] -= f * atb[c][o];
    }
  }
  Mat A(n);
  Vec b(n, Scalar(0L));
  for (int o = 0; o < n; ++o) {
    for (int c = 0; c < n; ++c) A.at(o, c) = Scalar::approx(atb[c][o] / ata[c][c], 0.0);
    b[o] = Scalar::approx(atb[n][o] / ata[n][n], 0.0);
  }
  return AffineMap(std::move(A), std::move(b));
}

double map_distance(const AffineMap& f, const AffineMap& g) {
  double d = 0.0;
  for (size_t i = 0; i < f.A.e.size(); ++i)
    d = std::max(d, std::abs(f.A.e[i].to_double() - g.A.e[i].to_double()));
  for (size_t i = 0; i < f.b.size(); ++i)
    d = std::max(d, std::abs(f.b[i].to_double() - g.b[i].to_double()));
  return d;
}

double sample_residual(const AffineMap& f, const std::vector<std::pair<Vec, Vec>>& samples) {
  double r = 0.0;
  for (const auto& [x, hx] : samples) {
    Vec fx = f.apply(x);
    for (size_t i = 0; i < fx.size(); ++i)
      r = std::max(r, std::abs(fx[i].to_double() - hx[i].to_double()));
  }
  return r;
}

}  // namespace

RecoveryResult recover_affine(const SampledMap& h, const AffineGroup& gamma, int bound,
                              double tol) {
  const int n = gamma.dim();
  if (h.samples.empty()) throw std::invalid_argument("recover_affine: no samples");
  for (const auto& [x, hx] : h.samples)
    if (!h.domain.contains(x)) throw std::invalid_argument("recover_affine: sample outside domain");

  if (h.exact) {
    auto fit = exact_affine_fit(h.samples, n);
    if (!fit) return {RecoveryOutcome::NoMatch, std::nullopt, 0.0, bound, {}};
    // Translation lattices: exact membership decision, no bound dependence.
    if (gamma.kind() == AffineGroup::Kind::TranslationLattice && fit->is_translation()) {
      Vec zero(n, Scalar(0L));
      auto r = gamma.orbit_equal(zero, fit->b, bound);
      if (r.verdict == Verdict::Yes) return {RecoveryOutcome::Match, r.witness, 0.0, bound, {}};
      return {RecoveryOutcome::NoMatch, std::nullopt, 0.0, bound, {}};
    }
    for (const auto& e : gamma.enumerate(bound))
      if (e.map == *fit) return {RecoveryOutcome::Match, e, 0.0, bound, {}};
    return {RecoveryOutcome::NoMatch, std::nullopt, 0.0, bound, {}};
  }

  auto fit = numeric_affine_fit(h.samples, n);
  if (!fit) return {RecoveryOutcome::NoMatch, std::nullopt, 0.0, bound, {}};
  std::vector<GroupElement> hits;
  double best = 0.0;
  for (const auto& e : gamma.enumerate(bound)) {
    if (map_distance(e.map, *fit) > tol) continue;
    double res = sample_residual(e.map, h.samples);
    if (res <= tol) {
      if (hits.empty()) best = res;
      hits.push_back(e);
    }
  }
  if (hits.empty()) return {RecoveryOutcome::NoMatch, std::nullopt, 0.0, bound, {}};
  if (hits.size() == 1) return {RecoveryOutcome::Match, hits[0], best, bound, {}};
  return {RecoveryOutcome::Ambiguous, std::nullopt, best, bound, hits};
}

std::optional<LocalLift> lift_local_diffeo(const LiftFamily& f, const Vec& r, const Vec& r_prime,
                                           int bound) {
  for (const auto& l : f.lifts()) {
    auto arrow = f.source().translate_into(0, r, l.src_chart, l.dom, bound);
    if (!arrow) continue;
    // psi0 adjusted so it is defined at r itself.
    AffineMap psi0 = compose(l.map, arrow->map);
    Vec image = psi0.apply(r);
    if (!f.target().is_action()) continue;
    auto g = f.target().as_action().group.orbit_equal(image, r_prime, bound);
    if (g.verdict != Verdict::Yes) continue;
    AffineMap psi = compose(g.witness->map, psi0);
    if (!vec_eq(psi.apply(r), r_prime))
      throw std::logic_error("lift_local_diffeo: endpoint verification failed");
    auto dom = boxset_preimage(arrow->map, l.dom);
    return LocalLift{std::move(psi), dom ? *dom : OpenBoxSet::full(static_cast<int>(r.size()))};
  }
  return std::nullopt;
}

}  // namespace qfold
