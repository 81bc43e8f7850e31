#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qfold/scalar.hpp"

namespace qfold {

using Vec = std::vector<Scalar>;

// Dense row-major n x n matrix over Scalar. Sizes here are tiny (n <= 4 in
// practice), so no attempt at sparsity or blocking.
struct Mat {
  int n = 0;
  std::vector<Scalar> e;  // row-major, n*n

  Mat() = default;
  explicit Mat(int dim) : n(dim), e(dim * dim, Scalar(0L)) {}
  static Mat identity(int dim);

  Scalar& at(int r, int c) { return e[r * n + c]; }
  const Scalar& at(int r, int c) const { return e[r * n + c]; }

  bool operator==(const Mat& o) const { return n == o.n && e == o.e; }
  bool is_identity() const;
  bool is_diagonal() const;
};

Mat mat_mul(const Mat& x, const Mat& y);
Vec mat_vec(const Mat& m, const Vec& v);
Scalar determinant(Mat m);
// Gauss-Jordan over the field; nullopt when singular.
std::optional<Mat> mat_inverse(const Mat& m);
// Solve m * x = rhs exactly; nullopt when singular.
std::optional<Vec> solve_linear(Mat m, Vec rhs);

Vec vec_add(const Vec& x, const Vec& y);
Vec vec_sub(const Vec& x, const Vec& y);
bool vec_eq(const Vec& x, const Vec& y);
std::string vec_key(const Vec& v);

/// Invertible affine self-map x -> A x + b of R^n. Equality of the (A, b)
/// data coincides with equality of germs at any point (affine rigidity).
struct AffineMap {
  Mat A;
  Vec b;

  AffineMap() = default;
  AffineMap(Mat a, Vec t);
  static AffineMap identity(int n);
  static AffineMap translation(Vec t);
  // 1-D convenience: x -> scale*x + shift
  static AffineMap line(Scalar scale, Scalar shift);

  int dim() const { return A.n; }
  Vec apply(const Vec& x) const { return vec_add(mat_vec(A, x), b); }
  bool is_identity() const { return A.is_identity() && vec_eq(b, Vec(b.size(), Scalar(0L))); }
  bool is_translation() const { return A.is_identity(); }

  bool operator==(const AffineMap& o) const { return A == o.A && vec_eq(b, o.b); }
  bool operator!=(const AffineMap& o) const { return !(*this == o); }

  std::string key() const;
  std::string str() const;
};

// f after g: x -> f(g(x)) = (A_f A_g) x + (A_f b_g + b_f). Exact.
AffineMap compose(const AffineMap& f, const AffineMap& g);
// (A^{-1}, -A^{-1} b); throws on singular A.
AffineMap invert(const AffineMap& f);

/// Group element with the word in the generators that witnesses it.
/// Word letters are (generator index, exponent +1/-1).
struct GroupElement {
  AffineMap map;
  std::vector<std::pair<int, int>> word;

  GroupElement inverse(const std::vector<AffineMap>& gens) const;
};

enum class Verdict { Yes, No, Unknown };
const char* verdict_name(Verdict v);

struct OrbitResult {
  Verdict verdict = Verdict::Unknown;
  std::optional<GroupElement> witness;  // set when verdict == Yes
};

/// Finitely generated countable affine group, represented by its faithful
/// affine image: elements ARE their maps, so equality is matrix comparison
/// and the represented group always acts effectively.
class AffineGroup {
 public:
  enum class Kind { TranslationLattice, General };

  AffineGroup() = default;
  AffineGroup(int n, std::vector<AffineMap> generators);

  int dim() const { return n_; }
  Kind kind() const { return kind_; }
  const std::vector<AffineMap>& generators() const { return gens_; }
  bool trivial() const { return gens_.empty(); }

  // All distinct elements expressible as words of length <= bound, each
  // carrying a shortest found word (ties: lexicographic in the letter order
  // (g0,+1),(g0,-1),(g1,+1),...). Deterministic order: BFS discovery.
  std::vector<GroupElement> enumerate(int bound) const;

  // Three-valued orbit membership with exact witness. No is certified only
  // for translation lattices over one exact field (integer lattice
  // membership via Hermite reduction); otherwise exhausted search reports
  // Unknown.
  OrbitResult orbit_equal(const Vec& x, const Vec& y, int bound) const;

 private:
  std::optional<GroupElement> lattice_decompose(const Vec& target) const;

  int n_ = 0;
  std::vector<AffineMap> gens_;
  Kind kind_ = Kind::TranslationLattice;
};

// Exact integer linear system M c = t (column-lattice membership) via
// Hermite-style column reduction. Returns integer coefficients or nullopt.
std::optional<std::vector<mpz_class>> integer_lattice_solve(
    const std::vector<std::vector<mpz_class>>& columns, const std::vector<mpz_class>& target);

}  // namespace qfold
