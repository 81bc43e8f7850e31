#include "qfold/scalar.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace qfold {

namespace {

mpq_class canon(mpq_class q) {
  q.canonicalize();
  return q;
}

double rat_to_double(const mpq_class& q) { return q.get_d(); }

}  // namespace

bool is_square_free(const mpz_class& n) {
  if (n <= 1) return false;
  mpz_class m = n;
  mpz_class p = 2;
  while (p * p <= m) {
    if (m % (p * p) == 0) return false;
    while (m % p == 0) m /= p;
    p += 1;
  }
  return true;
}

void split_square(const mpz_class& n, mpz_class& square_part, mpz_class& squarefree_part) {
  if (n <= 0) throw std::invalid_argument("split_square: n must be positive");
  mpz_class m = n;
  square_part = 1;
  squarefree_part = 1;
  mpz_class p = 2;
  while (p * p <= m) {
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) square_part *= p;
    if (e % 2) squarefree_part *= p;
    p += 1;
  }
  squarefree_part *= m;
}

Scalar Scalar::rational(mpq_class q) {
  Scalar s;
  s.kind_ = Kind::Rational;
  s.a_ = canon(std::move(q));
  return s;
}

Scalar Scalar::rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("Scalar: zero denominator");
  return rational(mpq_class(num, den));
}

Scalar Scalar::quadratic(mpq_class a, mpq_class b, long d) {
  Scalar s;
  s.a_ = canon(std::move(a));
  s.b_ = canon(std::move(b));
  if (s.b_ == 0) {
    s.kind_ = Kind::Rational;
    s.d_ = 0;
    return s;
  }
  if (d < 2 || !is_square_free(mpz_class(d)))
    throw std::invalid_argument("Scalar: d must be square-free and >= 2");
  s.kind_ = Kind::Quadratic;
  s.d_ = d;
  return s;
}

Scalar Scalar::sqrt_of(long d) {
  if (d < 0) throw std::invalid_argument("Scalar: sqrt of negative");
  mpz_class sq, sf;
  if (d == 0) return Scalar(0L);
  split_square(mpz_class(d), sq, sf);
  if (sf == 1) return rational(mpq_class(sq));
  return quadratic(0, mpq_class(sq), sf.get_si());
}

Scalar Scalar::approx(double v, double tol) {
  if (tol < 0) throw std::invalid_argument("Scalar: negative tolerance");
  Scalar s;
  s.kind_ = Kind::Approx;
  s.val_ = v;
  s.tol_ = tol;
  return s;
}

bool Scalar::is_one() const {
  return kind_ != Kind::Approx ? (kind_ == Kind::Rational && a_ == 1)
                               : std::abs(val_ - 1.0) <= tol_;
}

int Scalar::sign() const {
  switch (kind_) {
    case Kind::Rational:
      return sgn(a_);
    case Kind::Quadratic: {
      // a + b*sqrt(d): both terms same sign is immediate; otherwise compare
      // a^2 against b^2*d, which decides |a| vs |b|*sqrt(d) exactly.
      int sa = sgn(a_), sb = sgn(b_);
      if (sa == 0) return sb;
      if (sb == 0) return sa;
      if (sa == sb) return sa;
      mpq_class lhs = a_ * a_;
      mpq_class rhs = b_ * b_ * d_;
      int c = cmp(lhs, rhs);
      if (c == 0) return 0;  // impossible for square-free d, kept for safety
      return c > 0 ? sa : sb;
    }
    case Kind::Approx:
      if (std::abs(val_) <= tol_) return 0;
      return val_ > 0 ? 1 : -1;
  }
  return 0;
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  if (kind_ == Kind::Approx) {
    r.val_ = -val_;
  } else {
    r.a_ = -a_;
    r.b_ = -b_;
  }
  return r;
}

namespace {

// Resolve the common field of two exact operands; throws on a genuine mix.
long common_d(const Scalar& x, const Scalar& y) {
  long dx = x.field_d(), dy = y.field_d();
  if (dx == 0) return dy;
  if (dy == 0) return dx;
  if (dx != dy) throw FieldMismatch("Scalar: mixed quadratic fields sqrt(" + std::to_string(dx) +
                                    ") vs sqrt(" + std::to_string(dy) + ")");
  return dx;
}

}  // namespace

Scalar Scalar::operator+(const Scalar& o) const {
  if (kind_ == Kind::Approx || o.kind_ == Kind::Approx)
    return approx(to_double() + o.to_double(), (kind_ == Kind::Approx ? tol_ : 0.0) +
                                                   (o.kind_ == Kind::Approx ? o.tol_ : 0.0));
  long d = common_d(*this, o);
  return quadratic(a_ + o.a_, b_ + o.b_, d == 0 ? 2 : d);
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
  if (kind_ == Kind::Approx || o.kind_ == Kind::Approx) {
    double x = to_double(), y = o.to_double();
    double tx = kind_ == Kind::Approx ? tol_ : 0.0;
    double ty = o.kind_ == Kind::Approx ? o.tol_ : 0.0;
    return approx(x * y, std::abs(x) * ty + std::abs(y) * tx + tx * ty);
  }
  long d = common_d(*this, o);
  // (a + b sqrt(d)) (a' + b' sqrt(d)) = (aa' + bb'd) + (ab' + a'b) sqrt(d)
  mpq_class ra = a_ * o.a_ + b_ * o.b_ * (d == 0 ? 0 : d);
  mpq_class rb = a_ * o.b_ + o.a_ * b_;
  return quadratic(std::move(ra), std::move(rb), d == 0 ? 2 : d);
}

Scalar Scalar::inverse() const {
  if (sign() == 0) throw std::domain_error("Scalar: division by zero");
  switch (kind_) {
    case Kind::Rational:
      return rational(1 / a_);
    case Kind::Quadratic: {
      // (a + b sqrt(d))^{-1} = (a - b sqrt(d)) / (a^2 - b^2 d)
      mpq_class norm = a_ * a_ - b_ * b_ * d_;
      return quadratic(a_ / norm, -b_ / norm, d_);
    }
    case Kind::Approx: {
      double inv = 1.0 / val_;
      return approx(inv, tol_ * inv * inv);
    }
  }
  throw std::logic_error("unreachable");
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inverse(); }

bool Scalar::operator==(const Scalar& o) const {
  if (kind_ != Kind::Approx && o.kind_ != Kind::Approx) {
    if (kind_ == Kind::Quadratic && o.kind_ == Kind::Quadratic && d_ != o.d_) return false;
    return a_ == o.a_ && b_ == o.b_;
  }
  double tx = kind_ == Kind::Approx ? tol_ : 0.0;
  double ty = o.kind_ == Kind::Approx ? o.tol_ : 0.0;
  return std::abs(to_double() - o.to_double()) <= std::max(tx, ty);
}

double Scalar::to_double() const {
  switch (kind_) {
    case Kind::Rational:
      return rat_to_double(a_);
    case Kind::Quadratic:
      return rat_to_double(a_) + rat_to_double(b_) * std::sqrt(static_cast<double>(d_));
    case Kind::Approx:
      return val_;
  }
  return 0.0;
}

std::string Scalar::str() const {
  switch (kind_) {
    case Kind::Rational:
      return a_.get_str();
    case Kind::Quadratic: {
      std::string bs = b_.get_str();
      std::string out = "(" + a_.get_str();
      if (bs[0] == '-') {
        out += "-" + bs.substr(1);
      } else {
        out += "+" + bs;
      }
      out += "*sqrt(" + std::to_string(d_) + "))";
      return out;
    }
    case Kind::Approx: {
      std::ostringstream os;
      os.precision(17);
      os << "~" << val_ << "±" << tol_;
      return os.str();
    }
  }
  return "";
}

std::string Scalar::key() const {
  if (kind_ == Kind::Approx) {
    std::ostringstream os;
    os.precision(17);
    os << "~" << val_;
    return os.str();
  }
  return a_.get_str() + "|" + b_.get_str() + "|" + std::to_string(d_);
}

// ---------------------------------------------------------------------------
// Parser: expr := term (('+'|'-') term)*
//         term := factor (('*'|'/') factor)*
//         factor := rational | "sqrt" '(' integer ')' | '(' expr ')' | '-' factor
// plus the approx form "~v±t" (also accepts "~v+-t").
// ---------------------------------------------------------------------------

namespace {

struct Parser {
  std::string_view s;
  size_t pos = 0;

  void skip() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool eat_word(std::string_view w) {
    skip();
    if (s.substr(pos, w.size()) == w) {
      pos += w.size();
      return true;
    }
    // UTF-8 sqrt symbol
    if (w == "sqrt" && s.substr(pos, 3) == "√") {
      pos += 3;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("Scalar::parse: " + what + " at position " + std::to_string(pos) +
                                " in '" + std::string(s) + "'");
  }

  mpz_class integer() {
    skip();
    size_t start = pos;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start || (pos == start + 1 && !std::isdigit(static_cast<unsigned char>(s[start]))))
      fail("expected integer");
    return mpz_class(std::string(s.substr(start, pos - start)));
  }

  Scalar factor() {
    skip();
    if (eat('-')) return -factor();
    if (eat('+')) return factor();
    if (eat_word("sqrt")) {
      bool paren = eat('(');
      mpz_class d = integer();
      if (paren && !eat(')')) fail("expected ')'");
      if (!d.fits_slong_p()) fail("sqrt argument too large");
      return Scalar::sqrt_of(d.get_si());
    }
    if (eat('(')) {
      Scalar e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    mpz_class num = integer();
    return Scalar::rational(mpq_class(num));
  }

  Scalar term() {
    Scalar r = factor();
    for (;;) {
      skip();
      if (eat('*')) {
        r = r * factor();
      } else if (eat('/')) {
        r = r / factor();
      } else {
        return r;
      }
    }
  }

  Scalar expr() {
    Scalar r = term();
    for (;;) {
      skip();
      if (pos < s.size() && s[pos] == '+') {
        ++pos;
        r = r + term();
      } else if (pos < s.size() && s[pos] == '-') {
        ++pos;
        r = r - term();
      } else {
        return r;
      }
    }
  }
};

}  // namespace

Scalar Scalar::parse(std::string_view text) {
  Parser p{text};
  p.skip();
  if (p.pos < text.size() && text[p.pos] == '~') {
    ++p.pos;
    size_t split = text.find("±", p.pos);
    size_t splen = 2;
    if (split == std::string_view::npos) {
      split = text.find("+-", p.pos);
      splen = 2;
    }
    std::string vs, ts;
    if (split == std::string_view::npos) {
      vs = std::string(text.substr(p.pos));
      ts = "";
    } else {
      vs = std::string(text.substr(p.pos, split - p.pos));
      ts = std::string(text.substr(split + splen));
    }
    char* end = nullptr;
    double v = std::strtod(vs.c_str(), &end);
    double t = ts.empty() ? kDefaultTol : std::strtod(ts.c_str(), nullptr);
    if (end == vs.c_str()) throw std::invalid_argument("Scalar::parse: bad approx literal");
    return approx(v, t);
  }
  Scalar r = p.expr();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  return r;
}

}  // namespace qfold
