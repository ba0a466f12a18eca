#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qyw {

using Rational = mpq_class;

/// Error raised by every module for precondition and domain failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Laurent polynomial in q with rational coefficients.
/// Terms are kept sorted by exponent with no zero coefficients.
class QPoly {
 public:
  using Term = std::pair<int, Rational>;

  QPoly() = default;
  QPoly(long c);  // NOLINT(google-explicit-constructor)
  QPoly(const Rational& c);  // NOLINT(google-explicit-constructor)

  static QPoly monomial(int exp, const Rational& c = 1);
  static QPoly from_terms(std::vector<Term> terms);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_one() const;
  bool is_monomial() const { return terms_.size() == 1; }
  int min_exp() const;
  int max_exp() const;
  Rational coeff(int exp) const;
  Rational lead() const;
  const std::vector<Term>& terms() const { return terms_; }

  QPoly operator-() const;
  QPoly& operator+=(const QPoly& o);
  QPoly& operator-=(const QPoly& o);
  QPoly& operator*=(const QPoly& o);
  friend QPoly operator+(QPoly a, const QPoly& b) { return a += b; }
  friend QPoly operator-(QPoly a, const QPoly& b) { return a -= b; }
  friend QPoly operator*(const QPoly& a, const QPoly& b);

  QPoly scaled(const Rational& c) const;
  QPoly shifted(int k) const;     // multiply by q^k
  QPoly q_inverted() const;       // substitute q -> q^{-1}
  Rational eval(const Rational& x) const;
  std::size_t size_hint() const;

  bool operator==(const QPoly& o) const { return terms_ == o.terms_; }
  std::strong_ordering operator<=>(const QPoly& o) const;

 private:
  std::vector<Term> terms_;
};

/// Division with remainder for genuine polynomials (no negative exponents).
std::pair<QPoly, QPoly> poly_divmod(const QPoly& a, const QPoly& b);
/// Monic gcd of genuine polynomials; gcd(0,0) = 0.
QPoly poly_gcd(QPoly a, QPoly b);

/// Element of Q(q) in canonical form: den is a monic polynomial with nonzero
/// constant term, coprime to num; q-power units live in num.
class QRat {
 public:
  QRat() : den_(1) {}
  QRat(long c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  QRat(const Rational& c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  QRat(const QPoly& p) : num_(p), den_(1) {}  // NOLINT(google-explicit-constructor)

  static QRat make(const QPoly& num, const QPoly& den);
  static QRat q_pow(int e) { return QRat(QPoly::monomial(e)); }
  static QRat q() { return q_pow(1); }
  static QRat parse(std::string_view text);

  const QPoly& num() const { return num_; }
  const QPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_laurent() const { return den_.is_one(); }
  /// True iff the value is c*q^k for a rational c.
  bool is_monomial() const { return den_.is_one() && num_.is_monomial(); }

  QRat operator-() const;
  QRat& operator+=(const QRat& o);
  QRat& operator-=(const QRat& o);
  QRat& operator*=(const QRat& o);
  QRat& operator/=(const QRat& o);
  friend QRat operator+(QRat a, const QRat& b) { return a += b; }
  friend QRat operator-(QRat a, const QRat& b) { return a -= b; }
  friend QRat operator*(QRat a, const QRat& b) { return a *= b; }
  friend QRat operator/(QRat a, const QRat& b) { return a /= b; }

  QRat inv() const;
  QRat pow(int e) const;
  QRat q_inverted() const;
  Rational eval_at(const Rational& q0) const;
  std::size_t size_hint() const { return num_.size_hint() + den_.size_hint(); }
  std::string str() const;

  bool operator==(const QRat& o) const { return num_ == o.num_ && den_ == o.den_; }
  std::strong_ordering operator<=>(const QRat& o) const;

 private:
  QPoly num_, den_;
};

QRat qrat_normalize(const QPoly& num, const QPoly& den);
Rational qrat_eval_at(const QRat& f, const Rational& q0);
std::string poly_str(const QPoly& p);

// ---------------------------------------------------------------------------
// Truncated series in u^{-1} (neg) or u (pos).

enum class Dir { neg, pos };

struct USeries {
  Dir dir = Dir::neg;
  std::vector<QRat> c;  // c[k] multiplies u^{-k} (neg) or u^{k} (pos); size cap+1

  USeries() = default;
  USeries(Dir d, int cap) : dir(d), c(static_cast<std::size_t>(cap + 1)) {}
  static USeries constant(const QRat& v, Dir d, int cap);
  static USeries from_coeffs(Dir d, std::vector<QRat> coeffs);

  int cap() const { return static_cast<int>(c.size()) - 1; }
  const QRat& operator[](int k) const { return c[static_cast<std::size_t>(k)]; }
  QRat& operator[](int k) { return c[static_cast<std::size_t>(k)]; }
  USeries truncated(int cap) const;
  bool is_zero() const;

  USeries operator-() const;
  friend USeries operator+(const USeries& a, const USeries& b);
  friend USeries operator-(const USeries& a, const USeries& b);
  friend USeries operator*(const USeries& a, const USeries& b);
  USeries scaled(const QRat& s) const;
  std::string str() const;
};

/// Coefficientwise equality up to the smaller cap.
bool series_equal(const USeries& a, const USeries& b);
USeries series_invert(const USeries& s);

// ---------------------------------------------------------------------------
// Polynomials in u with QRat coefficients (index = degree).

using UCoeffs = std::vector<QRat>;

UCoeffs ucoeffs_trim(UCoeffs p);
UCoeffs ucoeffs_mul(const UCoeffs& a, const UCoeffs& b);
UCoeffs ucoeffs_add(const UCoeffs& a, const UCoeffs& b);
std::string ucoeffs_str(const UCoeffs& p);

USeries ratio_expand(const UCoeffs& P, const UCoeffs& R, Dir dir, int cap);

/// f = scale * Q/R with Q(0) = R(0) = 1; scale equals the common constant term of f.
struct PadeResult {
  UCoeffs Q, R;
  QRat scale = QRat(1);
};
std::optional<PadeResult> pade_reconstruct(const USeries& f_neg, const USeries& f_pos, int dmax);

// ---------------------------------------------------------------------------
// Polynomials in (u, v); exponents may be negative (Laurent) for bookkeeping.

class UVPoly {
 public:
  using Key = std::pair<int, int>;
  UVPoly() = default;
  UVPoly(const QRat& c);  // NOLINT(google-explicit-constructor)
  static UVPoly u(const QRat& c = 1) { return mono(1, 0, c); }
  static UVPoly v(const QRat& c = 1) { return mono(0, 1, c); }
  static UVPoly mono(int du, int dv, const QRat& c);

  bool is_zero() const { return m_.empty(); }
  const std::map<Key, QRat>& terms() const { return m_; }
  QRat coeff(int du, int dv) const;

  UVPoly operator-() const;
  UVPoly& operator+=(const UVPoly& o);
  UVPoly& operator-=(const UVPoly& o);
  friend UVPoly operator+(UVPoly a, const UVPoly& b) { return a += b; }
  friend UVPoly operator-(UVPoly a, const UVPoly& b) { return a -= b; }
  friend UVPoly operator*(const UVPoly& a, const UVPoly& b);

  UVPoly swapped() const;      // u <-> v
  UVPoly q_inverted() const;   // q -> q^{-1} in every coefficient
  UVPoly u_inverted() const;   // u -> u^{-1}
  QRat eval(const QRat& u, const QRat& v) const;
  bool operator==(const UVPoly& o) const { return m_ == o.m_; }
  std::string str() const;

 private:
  void add_term(const Key& k, const QRat& c);
  std::map<Key, QRat> m_;
};

struct KernelTerm {
  int u_exp;
  int v_exp;
  QRat coeff;
};
/// Expansion of 1/(q^{-delta}u - q^{delta}v) as a series in u^{-1}, truncated at u^{-cap}.
std::vector<KernelTerm> expand_kernel(int delta, int cap);

}  // namespace qyw
