#include "qfold/torus.hpp"

#include <map>
#include <sstream>

namespace qfold {

namespace {

bool is_perfect_square(const mpz_class& n) {
  if (n < 0) return false;
  mpz_class r = sqrt(n);
  return r * r == n;
}

mpz_class floor_div(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

QuadraticIrrational::QuadraticIrrational(mpz_class p, mpz_class q, mpz_class d)
    : p_(std::move(p)), q_(std::move(q)), d_(std::move(d)) {
  if (q_ == 0) throw std::invalid_argument("QuadraticIrrational: Q = 0");
  if (d_ <= 0 || is_perfect_square(d_))
    throw std::invalid_argument("QuadraticIrrational: D must be positive and non-square");
  // Reduce common content: g | P, g | Q, g^2 | D.
  for (;;) {
    mpz_class sq, sf;
    split_square(d_, sq, sf);
    mpz_class g = gcd(gcd(p_, q_), sq);
    if (g <= 1) break;
    p_ /= g;
    q_ /= g;
    d_ /= g * g;
  }
  if ((d_ - p_ * p_) % q_ != 0) {
    mpz_class aq = abs(q_);
    p_ *= aq;
    d_ *= q_ * q_;
    q_ *= aq;
  }
}

QuadraticIrrational QuadraticIrrational::from_scalar(const Scalar& s) {
  if (s.kind() != Scalar::Kind::Quadratic)
    throw std::invalid_argument("QuadraticIrrational: scalar is not irrational quadratic");
  const mpq_class& a = s.rat_part();
  const mpq_class& b = s.quad_part();
  long d = s.field_d();
  mpz_class L;
  mpz_lcm(L.get_mpz_t(), a.get_den().get_mpz_t(), b.get_den().get_mpz_t());
  mpz_class P0 = a.get_num() * (L / a.get_den());
  mpz_class B = b.get_num() * (L / b.get_den());
  if (B > 0) return QuadraticIrrational(P0, L, B * B * d);
  return QuadraticIrrational(-P0, -L, B * B * d);
}

QuadraticIrrational QuadraticIrrational::parse(std::string_view text) {
  return from_scalar(Scalar::parse(text));
}

long QuadraticIrrational::field_d() const {
  mpz_class sq, sf;
  split_square(d_, sq, sf);
  return sf.get_si();
}

Scalar QuadraticIrrational::to_scalar() const {
  mpz_class sq, sf;
  split_square(d_, sq, sf);
  return Scalar::quadratic(mpq_class(p_) / mpq_class(q_), mpq_class(sq) / mpq_class(q_),
                           sf.get_si());
}

std::string QuadraticIrrational::str() const {
  return "(" + p_.get_str() + "+sqrt(" + d_.get_str() + "))/" + q_.get_str();
}

mpz_class ContinuedFraction::quotient(int i) const {
  if (i < static_cast<int>(preperiod.size())) return preperiod[i];
  return period[(i - preperiod.size()) % period.size()];
}

void ContinuedFraction::convergent(int n, mpz_class& num, mpz_class& den) const {
  mpz_class h2 = 0, h1 = 1, k2 = 1, k1 = 0;
  for (int i = 0; i <= n; ++i) {
    mpz_class a = quotient(i);
    mpz_class h = a * h1 + h2;
    mpz_class k = a * k1 + k2;
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
  }
  num = h1;
  den = k1;
}

std::string ContinuedFraction::str() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < preperiod.size(); ++i) os << (i ? "," : "") << preperiod[i].get_str();
  os << ";";
  for (size_t i = 0; i < period.size(); ++i) os << (i ? "," : "") << period[i].get_str();
  os << "]";
  return os.str();
}

namespace {

struct CFData {
  std::vector<mpz_class> quotients;           // a_0 .. a_{L-1}, L = pre + per
  std::vector<std::pair<mpz_class, mpz_class>> states;  // (P_i, Q_i), i = 0..L
  size_t pre = 0;
  size_t per = 0;
};

// Integer-state continued fraction recurrence with cycle detection on the
// (P, Q) state. The first repeated state is the cycle entry, which makes
// both the preperiod and the period minimal.
CFData expand(const QuadraticIrrational& alpha) {
  CFData out;
  const mpz_class D = alpha.D();
  mpz_class s = sqrt(D);
  mpz_class P = alpha.P(), Q = alpha.Q();
  std::map<std::pair<std::string, std::string>, size_t> seen;
  for (;;) {
    auto key = std::make_pair(P.get_str(), Q.get_str());
    auto it = seen.find(key);
    if (it != seen.end()) {
      out.pre = it->second;
      out.per = out.states.size() - it->second;
      return out;
    }
    seen[key] = out.states.size();
    out.states.emplace_back(P, Q);
    mpz_class a = Q > 0 ? floor_div(P + s, Q) : floor_div(P + s + 1, Q);
    out.quotients.push_back(a);
    mpz_class Pn = a * Q - P;
    mpz_class Qn = (D - Pn * Pn) / Q;
    P = Pn;
    Q = Qn;
    if (out.states.size() > 100000)
      throw std::runtime_error("continued_fraction: no cycle found (invariant broken)");
  }
}

}  // namespace

ContinuedFraction continued_fraction(const QuadraticIrrational& alpha) {
  CFData d = expand(alpha);
  ContinuedFraction cf;
  cf.preperiod.assign(d.quotients.begin(), d.quotients.begin() + d.pre);
  cf.period.assign(d.quotients.begin() + d.pre, d.quotients.end());
  return cf;
}

Scalar WitnessMatrix::apply(const Scalar& alpha) const {
  Scalar num = Scalar::rational(mpq_class(a)) * alpha + Scalar::rational(mpq_class(b));
  Scalar den = Scalar::rational(mpq_class(c)) * alpha + Scalar::rational(mpq_class(d));
  return num / den;
}

WitnessMatrix WitnessMatrix::inverse() const {
  mpz_class e = det();
  if (e != 1 && e != -1) throw std::invalid_argument("WitnessMatrix: det != +-1");
  return WitnessMatrix{e * d, -e * b, -e * c, e * a};
}

std::string WitnessMatrix::str() const {
  return "[[" + a.get_str() + "," + b.get_str() + "],[" + c.get_str() + "," + d.get_str() + "]]";
}

WitnessMatrix witness_mul(const WitnessMatrix& x, const WitnessMatrix& y) {
  return WitnessMatrix{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
                       x.c * y.b + x.d * y.d};
}

namespace {

// Convergent matrix M(m) with alpha = M(m) . alpha_m (tail action);
// M(0) = I, M(m) = [[p_{m-1}, p_{m-2}], [q_{m-1}, q_{m-2}]].
WitnessMatrix convergent_matrix(const CFData& cf, int m) {
  WitnessMatrix r;  // identity
  for (int i = 0; i < m; ++i) {
    WitnessMatrix step{cf.quotients[i], 1, 1, 0};
    r = witness_mul(r, step);
  }
  return r;
}

// Exact value of the m-th tail state in Q(sqrt(d)).
Scalar tail_value(const CFData& cf, const mpz_class& D, int m) {
  mpz_class sq, sf;
  split_square(D, sq, sf);
  // The state list covers one preperiod plus one period; later tails wrap
  // around the cycle.
  size_t idx = static_cast<size_t>(m);
  if (idx >= cf.states.size()) idx = cf.pre + (idx - cf.pre) % cf.per;
  const auto& [P, Q] = cf.states[idx];
  return Scalar::quadratic(mpq_class(P) / mpq_class(Q), mpq_class(sq) / mpq_class(Q), sf.get_si());
}

}  // namespace

MoritaResult morita_equivalent(const QuadraticIrrational& alpha, const QuadraticIrrational& beta) {
  MoritaResult out;
  CFData ca = expand(alpha);
  CFData cb = expand(beta);
  out.cf_alpha.preperiod.assign(ca.quotients.begin(), ca.quotients.begin() + ca.pre);
  out.cf_alpha.period.assign(ca.quotients.begin() + ca.pre, ca.quotients.end());
  out.cf_beta.preperiod.assign(cb.quotients.begin(), cb.quotients.begin() + cb.pre);
  out.cf_beta.period.assign(cb.quotients.begin() + cb.pre, cb.quotients.end());

  // Cross-field inputs are never equivalent: tails over distinct square-free
  // d never coincide.
  if (alpha.field_d() != beta.field_d()) return out;

  const int la = static_cast<int>(ca.pre + ca.per);
  const int lb = static_cast<int>(cb.pre + cb.per);
  // Serret tail matching: search (m, n) with equal tail values, smallest
  // m + n first (ties: smaller m). Indices start at 1 so that identical
  // inputs yield the identity witness.
  for (int total = 2; total <= la + lb; ++total)
    for (int m = 1; m <= la && m < total; ++m) {
      int n = total - m;
      if (n < 1 || n > lb) continue;
      if (tail_value(ca, alpha.D(), m) == tail_value(cb, beta.D(), n)) {
        WitnessMatrix w = witness_mul(convergent_matrix(cb, n), convergent_matrix(ca, m).inverse());
        mpz_class e = w.det();
        if (e != 1 && e != -1) throw std::logic_error("morita witness: determinant not +-1");
        if (w.apply(alpha.to_scalar()) != beta.to_scalar())
          throw std::logic_error("morita witness failed exact verification");
        out.equivalent = true;
        out.witness = w;
        return out;
      }
    }
  return out;
}

AffineGroup torus_lattice(const QuadraticIrrational& alpha) {
  return AffineGroup(1, {AffineMap::translation({Scalar(1L)}),
                         AffineMap::translation({alpha.to_scalar()})});
}

EtaleGroupoid torus_groupoid(const QuadraticIrrational& alpha) {
  return EtaleGroupoid::action(torus_lattice(alpha), OpenBoxSet::full(1));
}

LiftFamily lift_witness_to_bibundle(const QuadraticIrrational& alpha,
                                    const QuadraticIrrational& beta, const WitnessMatrix& w) {
  Scalar sa = alpha.to_scalar();
  Scalar sb = beta.to_scalar();
  if (w.apply(sa) != sb)
    throw std::invalid_argument("lift_witness_to_bibundle: witness does not map alpha to beta");
  Scalar u = Scalar::rational(mpq_class(w.c)) * sa + Scalar::rational(mpq_class(w.d));
  if (u.is_zero()) throw std::invalid_argument("lift_witness_to_bibundle: degenerate witness");

  // The real-line lift x -> x / (c alpha + d) must carry Z + alpha Z onto
  // Z + beta Z; verify both inclusions exactly via lattice membership.
  AffineGroup la = torus_lattice(alpha);
  AffineGroup lb = torus_lattice(beta);
  Vec zero{Scalar(0L)};
  Scalar ui = u.inverse();
  for (const Scalar& g : {Scalar(1L) * ui, sa * ui})
    if (lb.orbit_equal(zero, {g}, 0).verdict != Verdict::Yes)
      throw std::invalid_argument("lift_witness_to_bibundle: image lattice not inside Z + beta Z");
  for (const Scalar& g : {u, sb * u})
    if (la.orbit_equal(zero, {g}, 0).verdict != Verdict::Yes)
      throw std::invalid_argument("lift_witness_to_bibundle: inverse image lattice not inside Z + alpha Z");

  Lift lift{0, 0, OpenBoxSet::full(1), AffineMap::line(ui, Scalar(0L))};
  return LiftFamily(torus_groupoid(alpha), torus_groupoid(beta), {lift},
                    BibundleClass::Invertible);
}

}  // namespace qfold
