#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qfold {

/// Element of the coefficient field: a rational, an element a + b*sqrt(d)
/// of a real quadratic field, or a tolerance-tagged double fallback.
///
/// Exact variants have decidable equality and exact sign. One quadratic
/// field per computation: mixing sqrt(2) and sqrt(3) exactly throws.
class Scalar {
 public:
  enum class Kind { Rational, Quadratic, Approx };

  static constexpr double kDefaultTol = 1e-9;

  Scalar() : kind_(Kind::Rational), a_(0), b_(0), d_(0) {}
  Scalar(long v) : kind_(Kind::Rational), a_(v), b_(0), d_(0) {}
  Scalar(int v) : Scalar(static_cast<long>(v)) {}

  static Scalar rational(mpq_class q);
  static Scalar rational(long num, long den);
  // a + b*sqrt(d); d must be square-free and >= 2. b == 0 collapses to Rational.
  static Scalar quadratic(mpq_class a, mpq_class b, long d);
  static Scalar sqrt_of(long d);  // exact when d is a perfect square
  static Scalar approx(double v, double tol = kDefaultTol);

  Kind kind() const { return kind_; }
  bool is_exact() const { return kind_ != Kind::Approx; }
  bool is_zero() const { return sign() == 0; }
  bool is_one() const;

  // Field index: 0 for Rational/Approx, the square-free d for Quadratic.
  long field_d() const { return kind_ == Kind::Quadratic ? d_ : 0; }

  const mpq_class& rat_part() const { return a_; }
  const mpq_class& quad_part() const { return b_; }
  double approx_value() const { return val_; }
  double approx_tol() const { return tol_; }

  // Exact sign for exact variants (no floating point). Approx reports 0
  // inside its tolerance band.
  int sign() const;

  Scalar operator-() const;
  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;
  Scalar inverse() const;

  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

  // Exact variants: decidable exact equality. Approx: |x-y| <= max(tol_x, tol_y).
  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }
  bool operator<(const Scalar& o) const { return (*this - o).sign() < 0; }
  bool operator<=(const Scalar& o) const { return (*this - o).sign() <= 0; }
  bool operator>(const Scalar& o) const { return (*this - o).sign() > 0; }
  bool operator>=(const Scalar& o) const { return (*this - o).sign() >= 0; }

  double to_double() const;

  // Textual forms: "p/q", "(a+b*sqrt(d))", "~v±t". Exact variants round-trip
  // bit-exactly through str()/parse().
  std::string str() const;
  static Scalar parse(std::string_view text);

  // Stable total-order key for exact values; used for dedup maps.
  std::string key() const;

 private:
  void normalize();

  Kind kind_;
  mpq_class a_;  // Rational value, or the rational part of a + b*sqrt(d)
  mpq_class b_;  // sqrt(d) coefficient (Quadratic only)
  long d_ = 0;   // square-free, >= 2 (Quadratic only)
  double val_ = 0.0;
  double tol_ = 0.0;
};

struct FieldMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Square-free factorization helpers used by Scalar and the torus module.
bool is_square_free(const mpz_class& n);
// n = square_part^2 * squarefree_part, n > 0.
void split_square(const mpz_class& n, mpz_class& square_part, mpz_class& squarefree_part);

}  // namespace qfold
