#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "qfold/bibundle.hpp"
#include "qfold/groupoid.hpp"

namespace qfold {

/// Real quadratic irrational in the canonical form (P + sqrt(D)) / Q with
/// Q | D - P^2, D > 0 non-square. The normalization makes the continued
/// fraction state recurrence integer-only.
class QuadraticIrrational {
 public:
  QuadraticIrrational(mpz_class p, mpz_class q, mpz_class d);

  // From an exact Scalar a + b*sqrt(d), b != 0.
  static QuadraticIrrational from_scalar(const Scalar& s);
  static QuadraticIrrational parse(std::string_view text);  // e.g. "(1+sqrt(5))/2"

  const mpz_class& P() const { return p_; }
  const mpz_class& Q() const { return q_; }
  const mpz_class& D() const { return d_; }
  // Square-free field index d with sqrt(D) = s*sqrt(d).
  long field_d() const;

  Scalar to_scalar() const;
  double to_double() const { return to_scalar().to_double(); }
  std::string str() const;

  bool operator==(const QuadraticIrrational& o) const {
    return p_ == o.p_ && q_ == o.q_ && d_ == o.d_;
  }

 private:
  mpz_class p_, q_, d_;
};

/// Eventually periodic continued fraction [preperiod; period repeating].
struct ContinuedFraction {
  std::vector<mpz_class> preperiod;
  std::vector<mpz_class> period;  // nonempty, primitive

  // Convergent p_n / q_n of the expansion (n = 0 is the first quotient).
  void convergent(int n, mpz_class& num, mpz_class& den) const;
  mpz_class quotient(int i) const;  // i-th partial quotient, periodic extension
  std::string str() const;
};

ContinuedFraction continued_fraction(const QuadraticIrrational& alpha);

/// 2x2 integer matrix with det = +-1; acts on alpha as (a alpha + b)/(c alpha + d).
struct WitnessMatrix {
  mpz_class a = 1, b = 0, c = 0, d = 1;

  mpz_class det() const { return a * d - b * c; }
  Scalar apply(const Scalar& alpha) const;
  WitnessMatrix inverse() const;  // exact, valid since det = +-1
  bool is_identity() const { return a == 1 && b == 0 && c == 0 && d == 1; }
  std::string str() const;
};

WitnessMatrix witness_mul(const WitnessMatrix& x, const WitnessMatrix& y);

struct MoritaResult {
  bool equivalent = false;
  std::optional<WitnessMatrix> witness;
  ContinuedFraction cf_alpha;
  ContinuedFraction cf_beta;
};

// T_alpha and T_beta are Morita equivalent iff alpha and beta lie in one
// field and their continued fraction tails eventually coincide (Serret);
// decidable because the expansions are finite data. The witness is
// assembled from convergent matrices and verified exactly.
MoritaResult morita_equivalent(const QuadraticIrrational& alpha, const QuadraticIrrational& beta);

// The action groupoid (Z + alpha Z) x| R for the irrational torus T_alpha.
EtaleGroupoid torus_groupoid(const QuadraticIrrational& alpha);
AffineGroup torus_lattice(const QuadraticIrrational& alpha);

// Lift a verified witness to an invertible bibundle between the two torus
// groupoids: the single lift is x -> x / (c alpha + d), which carries the
// lattice Z + alpha Z onto Z + beta Z exactly.
LiftFamily lift_witness_to_bibundle(const QuadraticIrrational& alpha,
                                    const QuadraticIrrational& beta, const WitnessMatrix& w);

}  // namespace qfold
