#include "qfold/affine.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace qfold {

Mat Mat::identity(int dim) {
  Mat m(dim);
  for (int i = 0; i < dim; ++i) m.at(i, i) = Scalar(1L);
  return m;
}

bool Mat::is_identity() const {
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (at(r, c) != Scalar(r == c ? 1L : 0L)) return false;
  return true;
}

bool Mat::is_diagonal() const {
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (r != c && !at(r, c).is_zero()) return false;
  return true;
}

Mat mat_mul(const Mat& x, const Mat& y) {
  if (x.n != y.n) throw std::invalid_argument("mat_mul: dimension mismatch");
  Mat r(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j) {
      Scalar s(0L);
      for (int k = 0; k < x.n; ++k) s += x.at(i, k) * y.at(k, j);
      r.at(i, j) = s;
    }
  return r;
}

Vec mat_vec(const Mat& m, const Vec& v) {
  if (static_cast<int>(v.size()) != m.n) throw std::invalid_argument("mat_vec: dimension mismatch");
  Vec r(m.n, Scalar(0L));
  for (int i = 0; i < m.n; ++i) {
    Scalar s(0L);
    for (int k = 0; k < m.n; ++k) s += m.at(i, k) * v[k];
    r[i] = s;
  }
  return r;
}

Scalar determinant(Mat m) {
  // Fraction-free enough for our sizes: plain Gaussian elimination over the field.
  Scalar det(1L);
  for (int col = 0; col < m.n; ++col) {
    int pivot = -1;
    for (int r = col; r < m.n; ++r)
      if (!m.at(r, col).is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) return Scalar(0L);
    if (pivot != col) {
      for (int c = 0; c < m.n; ++c) std::swap(m.at(pivot, c), m.at(col, c));
      det = -det;
    }
    det *= m.at(col, col);
    Scalar inv = m.at(col, col).inverse();
    for (int r = col + 1; r < m.n; ++r) {
      if (m.at(r, col).is_zero()) continue;
      Scalar f = m.at(r, col) * inv;
      for (int c = col; c < m.n; ++c) m.at(r, c) -= f * m.at(col, c);
    }
  }
  return det;
}

std::optional<Mat> mat_inverse(const Mat& m) {
  Mat a = m;
  Mat inv = Mat::identity(m.n);
  for (int col = 0; col < a.n; ++col) {
    int pivot = -1;
    for (int r = col; r < a.n; ++r)
      if (!a.at(r, col).is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) return std::nullopt;
    if (pivot != col)
      for (int c = 0; c < a.n; ++c) {
        std::swap(a.at(pivot, c), a.at(col, c));
        std::swap(inv.at(pivot, c), inv.at(col, c));
      }
    Scalar f = a.at(col, col).inverse();
    for (int c = 0; c < a.n; ++c) {
      a.at(col, c) *= f;
      inv.at(col, c) *= f;
    }
    for (int r = 0; r < a.n; ++r) {
      if (r == col || a.at(r, col).is_zero()) continue;
      Scalar g = a.at(r, col);
      for (int c = 0; c < a.n; ++c) {
        a.at(r, c) -= g * a.at(col, c);
        inv.at(r, c) -= g * inv.at(col, c);
      }
    }
  }
  return inv;
}

std::optional<Vec> solve_linear(Mat m, Vec rhs) {
  auto inv = mat_inverse(m);
  if (!inv) return std::nullopt;
  return mat_vec(*inv, rhs);
}

Vec vec_add(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("vec_add: dimension mismatch");
  Vec r(x.size(), Scalar(0L));
  for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
  return r;
}

Vec vec_sub(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("vec_sub: dimension mismatch");
  Vec r(x.size(), Scalar(0L));
  for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
  return r;
}

bool vec_eq(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) return false;
  for (size_t i = 0; i < x.size(); ++i)
    if (x[i] != y[i]) return false;
  return true;
}

std::string vec_key(const Vec& v) {
  std::string k;
  for (const auto& s : v) {
    k += s.key();
    k += ';';
  }
  return k;
}

AffineMap::AffineMap(Mat a, Vec t) : A(std::move(a)), b(std::move(t)) {
  if (static_cast<int>(b.size()) != A.n)
    throw std::invalid_argument("AffineMap: dimension mismatch");
  bool exact = true;
  for (const auto& s : A.e) exact = exact && s.is_exact();
  if (exact && determinant(A).is_zero()) throw std::invalid_argument("AffineMap: singular matrix");
}

AffineMap AffineMap::identity(int n) { return AffineMap(Mat::identity(n), Vec(n, Scalar(0L))); }

AffineMap AffineMap::translation(Vec t) {
  Mat a = Mat::identity(static_cast<int>(t.size()));
  return AffineMap(std::move(a), std::move(t));
}

AffineMap AffineMap::line(Scalar scale, Scalar shift) {
  Mat a(1);
  a.at(0, 0) = std::move(scale);
  return AffineMap(std::move(a), Vec{std::move(shift)});
}

std::string AffineMap::key() const {
  std::string k = "A:";
  for (const auto& s : A.e) {
    k += s.key();
    k += ',';
  }
  k += "b:" + vec_key(b);
  return k;
}

std::string AffineMap::str() const {
  std::ostringstream os;
  os << "x -> ";
  if (!A.is_identity()) {
    os << "[";
    for (int r = 0; r < A.n; ++r) {
      if (r) os << "; ";
      for (int c = 0; c < A.n; ++c) {
        if (c) os << " ";
        os << A.at(r, c).str();
      }
    }
    os << "] x + ";
  } else {
    os << "x + ";
  }
  os << "(";
  for (size_t i = 0; i < b.size(); ++i) {
    if (i) os << ", ";
    os << b[i].str();
  }
  os << ")";
  return os.str();
}

AffineMap compose(const AffineMap& f, const AffineMap& g) {
  if (f.dim() != g.dim()) throw std::invalid_argument("compose: dimension mismatch");
  return AffineMap(mat_mul(f.A, g.A), vec_add(mat_vec(f.A, g.b), f.b));
}

AffineMap invert(const AffineMap& f) {
  auto inv = mat_inverse(f.A);
  if (!inv) throw std::invalid_argument("invert: singular matrix");
  Vec nb = mat_vec(*inv, f.b);
  for (auto& s : nb) s = -s;
  return AffineMap(std::move(*inv), std::move(nb));
}

GroupElement GroupElement::inverse(const std::vector<AffineMap>& gens) const {
  GroupElement r;
  r.map = invert(map);
  for (auto it = word.rbegin(); it != word.rend(); ++it) r.word.emplace_back(it->first, -it->second);
  (void)gens;
  return r;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Yes:
      return "yes";
    case Verdict::No:
      return "no";
    case Verdict::Unknown:
      return "unknown";
  }
  return "?";
}

AffineGroup::AffineGroup(int n, std::vector<AffineMap> generators) : n_(n), gens_() {
  // Dedup generators; drop identities. The group is the image subgroup, so
  // a redundant presentation only wastes search time.
  std::map<std::string, bool> seen;
  for (auto& g : generators) {
    if (g.dim() != n) throw std::invalid_argument("AffineGroup: generator dimension mismatch");
    if (g.is_identity()) continue;
    if (seen.emplace(g.key(), true).second) gens_.push_back(std::move(g));
  }
  kind_ = Kind::TranslationLattice;
  for (const auto& g : gens_)
    if (!g.is_translation()) {
      kind_ = Kind::General;
      break;
    }
}

std::vector<GroupElement> AffineGroup::enumerate(int bound) const {
  if (bound < 0) throw std::invalid_argument("enumerate: negative bound");
  std::vector<GroupElement> out;
  std::map<std::string, size_t> seen;
  GroupElement id{AffineMap::identity(n_), {}};
  seen[id.map.key()] = 0;
  out.push_back(id);

  // Letters in canonical order: (g0,+1), (g0,-1), (g1,+1), ...
  std::vector<std::pair<AffineMap, std::pair<int, int>>> letters;
  for (int i = 0; i < static_cast<int>(gens_.size()); ++i) {
    letters.emplace_back(gens_[i], std::make_pair(i, +1));
    letters.emplace_back(invert(gens_[i]), std::make_pair(i, -1));
  }

  size_t frontier_begin = 0;
  for (int len = 1; len <= bound; ++len) {
    size_t frontier_end = out.size();
    for (size_t idx = frontier_begin; idx < frontier_end; ++idx)
      for (const auto& [lm, letter] : letters) {
        AffineMap m = compose(lm, out[idx].map);
        std::string k = m.key();
        if (seen.count(k)) continue;
        GroupElement e;
        e.map = std::move(m);
        e.word = out[idx].word;
        e.word.push_back(letter);
        seen[k] = out.size();
        out.push_back(std::move(e));
      }
    frontier_begin = frontier_end;
    if (frontier_begin == out.size()) break;  // group exhausted (finite)
  }
  return out;
}

std::optional<GroupElement> AffineGroup::lattice_decompose(const Vec& target) const {
  // Coordinates of target and generator translations in the Q-basis {1, sqrt(d)}
  // of the common field, cleared to integers by the lcm of denominators.
  for (const auto& s : target)
    if (!s.is_exact()) return std::nullopt;
  std::vector<Vec> trans;
  for (const auto& g : gens_) trans.push_back(g.b);

  // All quadratic components must live in one field; a genuinely mixed
  // target cannot lie in the lattice (its sqrt coefficient has no match).
  long d = 0;
  auto merge_d = [&](const Vec& v) {
    for (const auto& s : v) {
      long sd = s.field_d();
      if (sd == 0) continue;
      if (d == 0) d = sd;
      if (d != sd) return false;
    }
    return true;
  };
  for (const auto& t : trans)
    if (!merge_d(t)) return std::nullopt;
  if (!merge_d(target)) return std::nullopt;

  auto coords = [&](const Vec& v) {
    std::vector<mpq_class> c;
    for (const auto& s : v) {
      c.push_back(s.rat_part());
      c.push_back(s.kind() == Scalar::Kind::Quadratic ? s.quad_part() : mpq_class(0));
    }
    return c;
  };

  std::vector<std::vector<mpq_class>> cols;
  for (const auto& t : trans) cols.push_back(coords(t));
  std::vector<mpq_class> tgt = coords(target);

  mpz_class lcm = 1;
  auto fold = [&](const std::vector<mpq_class>& v) {
    for (const auto& q : v) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den().get_mpz_t());
  };
  for (const auto& c : cols) fold(c);
  fold(tgt);

  auto scale = [&](const std::vector<mpq_class>& v) {
    std::vector<mpz_class> z;
    for (const auto& q : v) {
      mpq_class s = q * lcm;
      s.canonicalize();
      z.push_back(s.get_num());
    }
    return z;
  };

  std::vector<std::vector<mpz_class>> zcols;
  for (const auto& c : cols) zcols.push_back(scale(c));
  auto sol = integer_lattice_solve(zcols, scale(tgt));
  if (!sol) return std::nullopt;

  GroupElement e;
  e.map = AffineMap::identity(n_);
  for (size_t i = 0; i < sol->size(); ++i) {
    mpz_class c = (*sol)[i];
    int dir = c >= 0 ? +1 : -1;
    mpz_class count = abs(c);
    const AffineMap step = dir > 0 ? gens_[i] : invert(gens_[i]);
    for (mpz_class k = 0; k < count; ++k) {
      e.map = compose(step, e.map);
      e.word.emplace_back(static_cast<int>(i), dir);
    }
  }
  return e;
}

OrbitResult AffineGroup::orbit_equal(const Vec& x, const Vec& y, int bound) const {
  if (static_cast<int>(x.size()) != n_ || static_cast<int>(y.size()) != n_)
    throw std::invalid_argument("orbit_equal: dimension mismatch");
  if (vec_eq(x, y)) return {Verdict::Yes, GroupElement{AffineMap::identity(n_), {}}};

  bool exact = true;
  for (const auto& s : x) exact = exact && s.is_exact();
  for (const auto& s : y) exact = exact && s.is_exact();

  if (kind_ == Kind::TranslationLattice && exact) {
    auto e = lattice_decompose(vec_sub(y, x));
    if (e) {
      if (!vec_eq(e->map.apply(x), y)) throw std::logic_error("lattice witness failed verification");
      return {Verdict::Yes, std::move(e)};
    }
    return {Verdict::No, std::nullopt};
  }

  // Bounded search; the enumeration stops early when the group is finite,
  // in which case exhaustion certifies No.
  auto elems = enumerate(bound);
  for (const auto& e : elems)
    if (vec_eq(e.map.apply(x), y)) return {Verdict::Yes, e};
  bool exhausted = true;
  {
    auto more = enumerate(bound + 1);
    exhausted = more.size() == elems.size();
  }
  return {exhausted ? Verdict::No : Verdict::Unknown, std::nullopt};
}

// ---------------------------------------------------------------------------
// Integer lattice membership: Hermite-style column reduction with a tracked
// unimodular transform, then forward substitution over pivot rows.
// ---------------------------------------------------------------------------

std::optional<std::vector<mpz_class>> integer_lattice_solve(
    const std::vector<std::vector<mpz_class>>& columns, const std::vector<mpz_class>& target) {
  const int k = static_cast<int>(columns.size());
  const int m = static_cast<int>(target.size());
  for (const auto& c : columns)
    if (static_cast<int>(c.size()) != m)
      throw std::invalid_argument("integer_lattice_solve: ragged input");

  // M is m x k, stored column-wise. U is k x k with M_orig * U = M_current.
  std::vector<std::vector<mpz_class>> M = columns;
  std::vector<std::vector<mpz_class>> U(k, std::vector<mpz_class>(k, 0));
  for (int i = 0; i < k; ++i) U[i][i] = 1;

  std::vector<std::pair<int, int>> pivots;  // (row, col)
  int pcol = 0;
  for (int row = 0; row < m && pcol < k; ++row) {
    // Reduce columns pcol..k-1 on this row until at most one nonzero remains.
    for (;;) {
      int best = -1;
      for (int j = pcol; j < k; ++j)
        if (M[j][row] != 0 && (best < 0 || abs(M[j][row]) < abs(M[best][row]))) best = j;
      if (best < 0) break;
      std::swap(M[best], M[pcol]);
      std::swap(U[best], U[pcol]);
      bool others = false;
      for (int j = pcol + 1; j < k; ++j) {
        if (M[j][row] == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), M[j][row].get_mpz_t(), M[pcol][row].get_mpz_t());
        for (int r = 0; r < m; ++r) M[j][r] -= q * M[pcol][r];
        for (int r = 0; r < k; ++r) U[j][r] -= q * U[pcol][r];
        if (M[j][row] != 0) others = true;
      }
      if (!others) break;
    }
    if (M[pcol][row] != 0) {
      if (M[pcol][row] < 0) {
        for (int r = 0; r < m; ++r) M[pcol][r] = -M[pcol][r];
        for (int r = 0; r < k; ++r) U[pcol][r] = -U[pcol][r];
      }
      pivots.emplace_back(row, pcol);
      ++pcol;
    }
  }

  // Forward substitution: rows are consumed top to bottom; rows without a
  // pivot must have zero residual.
  std::vector<mpz_class> y(k, 0);
  std::vector<mpz_class> resid = target;
  size_t next_pivot = 0;
  for (int row = 0; row < m; ++row) {
    if (next_pivot < pivots.size() && pivots[next_pivot].first == row) {
      int col = pivots[next_pivot].second;
      mpz_class q, r;
      mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), resid[row].get_mpz_t(), M[col][row].get_mpz_t());
      if (r != 0) return std::nullopt;
      y[col] = q;
      for (int rr = 0; rr < m; ++rr) resid[rr] -= q * M[col][rr];
      ++next_pivot;
    } else if (resid[row] != 0) {
      return std::nullopt;
    }
  }

  // Coefficients in terms of the original columns.
  std::vector<mpz_class> coeff(k, 0);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) coeff[i] += U[j][i] * y[j];
  return coeff;
}

}  // namespace qfold
