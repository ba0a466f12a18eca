#include "qyw/exactmath.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace qyw {

// ---------------------------------------------------------------------------
// QPoly

QPoly::QPoly(long c) {
  if (c != 0) terms_.emplace_back(0, Rational(c));
}

QPoly::QPoly(const Rational& c) {
  if (c != 0) terms_.emplace_back(0, c);
}

QPoly QPoly::monomial(int exp, const Rational& c) {
  QPoly p;
  if (c != 0) p.terms_.emplace_back(exp, c);
  return p;
}

QPoly QPoly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.first < b.first; });
  QPoly p;
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().first == t.first) {
      p.terms_.back().second += t.second;
      if (p.terms_.back().second == 0) p.terms_.pop_back();
    } else if (t.second != 0) {
      p.terms_.push_back(std::move(t));
    }
  }
  return p;
}

bool QPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].first == 0);
}

bool QPoly::is_one() const {
  return terms_.size() == 1 && terms_[0].first == 0 && terms_[0].second == 1;
}

int QPoly::min_exp() const { return terms_.empty() ? 0 : terms_.front().first; }
int QPoly::max_exp() const { return terms_.empty() ? 0 : terms_.back().first; }

Rational QPoly::coeff(int exp) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), exp,
                             [](const Term& t, int e) { return t.first < e; });
  if (it != terms_.end() && it->first == exp) return it->second;
  return 0;
}

Rational QPoly::lead() const { return terms_.empty() ? Rational(0) : terms_.back().second; }

QPoly QPoly::operator-() const {
  QPoly r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

namespace {
std::vector<QPoly::Term> merge_terms(const std::vector<QPoly::Term>& a,
                                     const std::vector<QPoly::Term>& b, bool subtract) {
  std::vector<QPoly::Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, subtract ? Rational(-b[j].second) : b[j].second);
      ++j;
    } else {
      Rational s = subtract ? Rational(a[i].second - b[j].second)
                            : Rational(a[i].second + b[j].second);
      if (s != 0) out.emplace_back(a[i].first, std::move(s));
      ++i;
      ++j;
    }
  }
  return out;
}
}  // namespace

QPoly& QPoly::operator+=(const QPoly& o) {
  if (o.terms_.empty()) return *this;
  terms_ = merge_terms(terms_, o.terms_, false);
  return *this;
}

QPoly& QPoly::operator-=(const QPoly& o) {
  if (o.terms_.empty()) return *this;
  terms_ = merge_terms(terms_, o.terms_, true);
  return *this;
}

QPoly operator*(const QPoly& a, const QPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.terms_.size() == 1) {
    QPoly r;
    r.terms_.reserve(b.terms_.size());
    for (const auto& t : b.terms_)
      r.terms_.emplace_back(t.first + a.terms_[0].first, t.second * a.terms_[0].second);
    return r;
  }
  if (b.terms_.size() == 1) return b * a;
  std::vector<QPoly::Term> acc;
  acc.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& x : a.terms_)
    for (const auto& y : b.terms_) acc.emplace_back(x.first + y.first, x.second * y.second);
  return QPoly::from_terms(std::move(acc));
}

QPoly& QPoly::operator*=(const QPoly& o) {
  *this = *this * o;
  return *this;
}

QPoly QPoly::scaled(const Rational& c) const {
  if (c == 0) return {};
  QPoly r = *this;
  for (auto& t : r.terms_) t.second *= c;
  return r;
}

QPoly QPoly::shifted(int k) const {
  QPoly r = *this;
  for (auto& t : r.terms_) t.first += k;
  return r;
}

QPoly QPoly::q_inverted() const {
  QPoly r;
  r.terms_.reserve(terms_.size());
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) r.terms_.emplace_back(-it->first, it->second);
  return r;
}

Rational QPoly::eval(const Rational& x) const {
  Rational acc = 0;
  for (const auto& [e, c] : terms_) {
    Rational p = 1;
    Rational base = e >= 0 ? x : Rational(1 / x);
    for (int k = 0; k < std::abs(e); ++k) p *= base;
    acc += c * p;
  }
  return acc;
}

std::size_t QPoly::size_hint() const {
  std::size_t s = 0;
  for (const auto& t : terms_)
    s += 1 + mpz_sizeinbase(t.second.get_num_mpz_t(), 2) + mpz_sizeinbase(t.second.get_den_mpz_t(), 2);
  return s;
}

std::strong_ordering QPoly::operator<=>(const QPoly& o) const {
  std::size_t n = std::min(terms_.size(), o.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = terms_[i].first <=> o.terms_[i].first; c != 0) return c;
    int cmpv = cmp(terms_[i].second, o.terms_[i].second);
    if (cmpv != 0) return cmpv < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return terms_.size() <=> o.terms_.size();
}

std::pair<QPoly, QPoly> poly_divmod(const QPoly& a, const QPoly& b) {
  if (b.is_zero()) throw Error("division by zero in base field");
  if (a.min_exp() < 0 || b.min_exp() < 0) throw Error("poly_divmod: negative exponent");
  int db = b.max_exp();
  Rational lb = b.lead();
  std::vector<Rational> rem(static_cast<std::size_t>(std::max(a.max_exp(), 0) + 1));
  for (const auto& [e, c] : a.terms()) rem[static_cast<std::size_t>(e)] = c;
  std::vector<QPoly::Term> quot;
  for (int d = static_cast<int>(rem.size()) - 1; d >= db; --d) {
    Rational c = rem[static_cast<std::size_t>(d)];
    if (c == 0) continue;
    Rational f = c / lb;
    quot.emplace_back(d - db, f);
    for (const auto& [e, bc] : b.terms()) rem[static_cast<std::size_t>(d - db + e)] -= f * bc;
  }
  std::vector<QPoly::Term> r;
  for (std::size_t i = 0; i < rem.size(); ++i)
    if (rem[i] != 0) r.emplace_back(static_cast<int>(i), rem[i]);
  return {QPoly::from_terms(std::move(quot)), QPoly::from_terms(std::move(r))};
}

QPoly poly_gcd(QPoly a, QPoly b) {
  while (!b.is_zero()) {
    QPoly r = poly_divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return a.scaled(1 / a.lead());
}

// ---------------------------------------------------------------------------
// QRat

QRat qrat_normalize(const QPoly& num, const QPoly& den) {
  if (den.is_zero()) throw Error("division by zero in base field");
  QRat r;
  if (num.is_zero()) return r;
  return QRat::make(num, den);
}

QRat QRat::make(const QPoly& num, const QPoly& den) {
  if (den.is_zero()) throw Error("division by zero in base field");
  QRat r;
  if (num.is_zero()) return r;
  int a = num.min_exp();
  int b = den.min_exp();
  QPoly N = num.shifted(-a);
  QPoly D = den.shifted(-b);
  int e = a - b;
  if (D.is_constant()) {
    r.num_ = N.scaled(1 / D.lead()).shifted(e);
    r.den_ = QPoly(1);
    return r;
  }
  QPoly g = poly_gcd(N, D);
  if (!g.is_constant()) {
    N = poly_divmod(N, g).first;
    D = poly_divmod(D, g).first;
  }
  Rational lc = D.lead();
  if (lc != 1) {
    N = N.scaled(1 / lc);
    D = D.scaled(1 / lc);
  }
  r.num_ = N.shifted(e);
  r.den_ = D.is_constant() ? QPoly(1) : std::move(D);
  return r;
}

QRat QRat::operator-() const {
  QRat r = *this;
  r.num_ = -r.num_;
  return r;
}

QRat& QRat::operator+=(const QRat& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_.is_one() && o.den_.is_one()) {
    num_ += o.num_;
    return *this;
  }
  if (den_ == o.den_) {
    *this = make(num_ + o.num_, den_);
    return *this;
  }
  *this = make(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  return *this;
}

QRat& QRat::operator-=(const QRat& o) { return *this += -o; }

QRat& QRat::operator*=(const QRat& o) {
  if (is_zero()) return *this;
  if (o.is_zero()) return *this = QRat();
  if (den_.is_one() && o.den_.is_one()) {
    num_ *= o.num_;
    return *this;
  }
  *this = make(num_ * o.num_, den_ * o.den_);
  return *this;
}

QRat QRat::inv() const {
  if (is_zero()) throw Error("division by zero in base field");
  if (num_.is_monomial() && den_.is_one()) {
    QRat r;
    r.num_ = QPoly::monomial(-num_.terms()[0].first, 1 / num_.terms()[0].second);
    return r;
  }
  return make(den_, num_);
}

QRat& QRat::operator/=(const QRat& o) { return *this *= o.inv(); }

QRat QRat::pow(int e) const {
  QRat base = e >= 0 ? *this : inv();
  QRat r(1);
  for (int k = 0; k < std::abs(e); ++k) r *= base;
  return r;
}

QRat QRat::q_inverted() const { return make(num_.q_inverted(), den_.q_inverted()); }

Rational QRat::eval_at(const Rational& q0) const { return qrat_eval_at(*this, q0); }

Rational qrat_eval_at(const QRat& f, const Rational& q0) {
  if (q0 == 0) throw Error("specialization point must be nonzero");
  Rational d = f.den().eval(q0);
  if (d == 0) throw Error("pole at specialization point");
  return f.num().eval(q0) / d;
}

std::strong_ordering QRat::operator<=>(const QRat& o) const {
  if (auto c = num_ <=> o.num_; c != 0) return c;
  return den_ <=> o.den_;
}

// ---------------------------------------------------------------------------
// Printing and parsing

namespace {
std::string term_str(int e, const Rational& c, bool first) {
  std::string out;
  Rational a = abs(c);
  bool neg = c < 0;
  if (neg) out += first ? "-" : "-";
  else if (!first) out += "+";
  std::string qpart;
  if (e == 1) qpart = "q";
  else if (e != 0) qpart = "q^" + std::to_string(e);
  if (e == 0) {
    out += a.get_str();
  } else if (a == 1) {
    out += qpart;
  } else {
    out += a.get_str() + "*" + qpart;
  }
  return out;
}

bool is_atomic(const QPoly& p) {
  if (p.terms().size() != 1) return false;
  const auto& [e, c] = p.terms()[0];
  if (c < 0) return false;
  if (e == 0) return c.get_den() == 1;
  return c == 1;
}
}  // namespace

std::string poly_str(const QPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    out += term_str(it->first, it->second, first);
    first = false;
  }
  return out;
}

std::string QRat::str() const {
  if (is_zero()) return "0";
  int k = std::max(0, -num_.min_exp());
  QPoly N = num_.shifted(k);
  QPoly D = den_.shifted(k);
  if (D.is_one()) return poly_str(N);
  std::string ns = poly_str(N);
  std::string ds = poly_str(D);
  if (!is_atomic(N)) ns = "(" + ns + ")";
  if (!is_atomic(D)) ds = "(" + ds + ")";
  return ns + "/" + ds;
}

namespace {
class ScalarParser {
 public:
  explicit ScalarParser(std::string_view s) : s_(s) {}

  QRat parse_all() {
    QRat v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error("scalar parse error at position " + std::to_string(pos_) + ": " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  QRat expr() {
    QRat v = term();
    for (;;) {
      if (eat('+')) v += term();
      else if (eat('-')) v -= term();
      else return v;
    }
  }
  QRat term() {
    QRat v = unary();
    for (;;) {
      if (eat('*')) v *= unary();
      else if (eat('/')) v /= unary();
      else return v;
    }
  }
  QRat unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  QRat power() {
    QRat base = atom();
    if (eat('^')) {
      bool paren = eat('(');
      bool neg = false;
      if (eat('-')) neg = true;
      else eat('+');
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("integer exponent expected");
      int e = std::stoi(std::string(s_.substr(start, pos_ - start)));
      if (paren && !eat(')')) fail("')' expected");
      return base.pow(neg ? -e : e);
    }
    return base;
  }
  QRat atom() {
    skip();
    if (eat('(')) {
      QRat v = expr();
      if (!eat(')')) fail("')' expected");
      return v;
    }
    if (pos_ < s_.size() && s_[pos_] == 'q') {
      ++pos_;
      return QRat::q();
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("number, 'q' or '(' expected");
    return QRat(Rational(mpz_class(std::string(s_.substr(start, pos_ - start)))));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};
}  // namespace

QRat QRat::parse(std::string_view text) { return ScalarParser(text).parse_all(); }

// ---------------------------------------------------------------------------
// USeries

USeries USeries::constant(const QRat& v, Dir d, int cap) {
  USeries s(d, cap);
  s.c[0] = v;
  return s;
}

USeries USeries::from_coeffs(Dir d, std::vector<QRat> coeffs) {
  if (coeffs.empty()) throw Error("series needs at least one coefficient");
  USeries s;
  s.dir = d;
  s.c = std::move(coeffs);
  return s;
}

USeries USeries::truncated(int cap) const {
  USeries s = *this;
  s.c.resize(static_cast<std::size_t>(std::min(cap, this->cap()) + 1));
  return s;
}

bool USeries::is_zero() const {
  return std::all_of(c.begin(), c.end(), [](const QRat& x) { return x.is_zero(); });
}

USeries USeries::operator-() const {
  USeries s = *this;
  for (auto& x : s.c) x = -x;
  return s;
}

namespace {
void check_dir(const USeries& a, const USeries& b) {
  if (a.dir != b.dir) throw Error("series direction mismatch");
}
}  // namespace

USeries operator+(const USeries& a, const USeries& b) {
  check_dir(a, b);
  USeries s(a.dir, std::min(a.cap(), b.cap()));
  for (int k = 0; k <= s.cap(); ++k) s[k] = a[k] + b[k];
  return s;
}

USeries operator-(const USeries& a, const USeries& b) { return a + (-b); }

USeries operator*(const USeries& a, const USeries& b) {
  check_dir(a, b);
  USeries s(a.dir, std::min(a.cap(), b.cap()));
  for (int i = 0; i <= s.cap(); ++i) {
    if (a[i].is_zero()) continue;
    for (int j = 0; i + j <= s.cap(); ++j)
      if (!b[j].is_zero()) s[i + j] += a[i] * b[j];
  }
  return s;
}

USeries USeries::scaled(const QRat& x) const {
  USeries s = *this;
  for (auto& v : s.c) v *= x;
  return s;
}

std::string USeries::str() const {
  std::string out;
  for (int k = 0; k <= cap(); ++k) {
    if (c[k].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + c[k].str() + ")";
    if (k != 0) out += dir == Dir::neg ? "*u^-" + std::to_string(k) : "*u^" + std::to_string(k);
  }
  return out.empty() ? "0" : out;
}

bool series_equal(const USeries& a, const USeries& b) {
  if (a.dir != b.dir) return false;
  int cap = std::min(a.cap(), b.cap());
  for (int k = 0; k <= cap; ++k)
    if (!(a[k] == b[k])) return false;
  return true;
}

USeries series_invert(const USeries& s) {
  if (s.c.empty() || s[0].is_zero()) throw Error("non-invertible series");
  USeries r(s.dir, s.cap());
  QRat i0 = s[0].inv();
  r[0] = i0;
  for (int k = 1; k <= s.cap(); ++k) {
    QRat acc;
    for (int j = 1; j <= k; ++j)
      if (!s[j].is_zero()) acc += s[j] * r[k - j];
    r[k] = -(acc * i0);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Polynomials in u

UCoeffs ucoeffs_trim(UCoeffs p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
  return p;
}

UCoeffs ucoeffs_mul(const UCoeffs& a, const UCoeffs& b) {
  if (a.empty() || b.empty()) return {};
  UCoeffs r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return ucoeffs_trim(std::move(r));
}

UCoeffs ucoeffs_add(const UCoeffs& a, const UCoeffs& b) {
  UCoeffs r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return ucoeffs_trim(std::move(r));
}

std::string ucoeffs_str(const UCoeffs& p) {
  std::string out;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + p[k].str() + ")";
    if (k == 1) out += "*u";
    else if (k > 1) out += "*u^" + std::to_string(k);
  }
  return out.empty() ? "0" : out;
}

USeries ratio_expand(const UCoeffs& P0, const UCoeffs& R0, Dir dir, int cap) {
  if (cap < 0) throw Error("cap must be nonnegative");
  UCoeffs P = ucoeffs_trim(P0);
  UCoeffs R = ucoeffs_trim(R0);
  if (R.empty()) throw Error("division by zero in base field");
  USeries ps(dir, cap), rs(dir, cap);
  if (dir == Dir::pos) {
    if (R[0].is_zero()) throw Error("non-invertible series");
    for (int k = 0; k <= cap && k < static_cast<int>(P.size()); ++k) ps[k] = P[static_cast<std::size_t>(k)];
    for (int k = 0; k <= cap && k < static_cast<int>(R.size()); ++k) rs[k] = R[static_cast<std::size_t>(k)];
  } else {
    int dR = static_cast<int>(R.size()) - 1;
    int dP = static_cast<int>(P.size()) - 1;
    if (dP > dR) throw Error("ratio not expandable in u^-1: numerator degree exceeds denominator degree");
    for (int k = 0; k <= cap && k <= dR; ++k) {
      rs[k] = R[static_cast<std::size_t>(dR - k)];
      if (dR - k <= dP) ps[k] = P[static_cast<std::size_t>(dR - k)];
    }
  }
  return ps * series_invert(rs);
}

namespace {
// Right kernel of a small dense matrix over QRat.
std::vector<std::vector<QRat>> dense_kernel(std::vector<std::vector<QRat>> A, std::size_t ncols) {
  std::vector<int> pivcol;
  std::size_t row = 0;
  for (std::size_t col = 0; col < ncols && row < A.size(); ++col) {
    // smallest nonzero entry as pivot keeps intermediate rational functions short
    std::size_t p = A.size();
    for (std::size_t r = row; r < A.size(); ++r)
      if (!A[r][col].is_zero() && (p == A.size() || A[r][col].size_hint() < A[p][col].size_hint())) p = r;
    if (p == A.size()) continue;
    std::swap(A[p], A[row]);
    QRat inv = A[row][col].inv();
    for (auto& x : A[row]) x *= inv;
    for (std::size_t r = 0; r < A.size(); ++r) {
      if (r == row || A[r][col].is_zero()) continue;
      QRat f = A[r][col];
      for (std::size_t c = 0; c < ncols; ++c)
        if (!A[row][c].is_zero()) A[r][c] -= f * A[row][c];
    }
    pivcol.push_back(static_cast<int>(col));
    ++row;
  }
  std::vector<bool> is_piv(ncols, false);
  for (int c : pivcol) is_piv[static_cast<std::size_t>(c)] = true;
  std::vector<std::vector<QRat>> basis;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_piv[f]) continue;
    std::vector<QRat> v(ncols);
    v[f] = QRat(1);
    for (std::size_t r = 0; r < pivcol.size(); ++r) v[static_cast<std::size_t>(pivcol[r])] = -A[r][f];
    basis.push_back(std::move(v));
  }
  return basis;
}
}  // namespace

std::optional<PadeResult> pade_reconstruct(const USeries& f_neg, const USeries& f_pos, int dmax) {
  if (f_neg.dir != Dir::neg || f_pos.dir != Dir::pos) throw Error("pade_reconstruct: direction mismatch");
  if (dmax < 0) throw Error("pade_reconstruct: dmax must be nonnegative");
  if (f_neg.cap() < 2 * dmax + 1 || f_pos.cap() < 2 * dmax + 1)
    throw Error("pade_reconstruct: series cap must be at least 2*dmax+1");
  for (int d = 0; d <= dmax; ++d) {
    // unknowns: Q_0..Q_d, R_0..R_d
    std::size_t n = static_cast<std::size_t>(2 * (d + 1));
    auto qi = [](int k) { return static_cast<std::size_t>(k); };
    auto ri = [d](int k) { return static_cast<std::size_t>(d + 1 + k); };
    std::vector<std::vector<QRat>> rows;
    for (int k = 0; k <= f_pos.cap(); ++k) {
      std::vector<QRat> row(n);
      if (k <= d) row[qi(k)] = QRat(1);
      for (int j = 0; j <= std::min(k, d); ++j) row[ri(j)] -= f_pos[k - j];
      rows.push_back(std::move(row));
    }
    for (int e = d; e >= d - f_neg.cap(); --e) {
      std::vector<QRat> row(n);
      if (e >= 0) row[qi(e)] = QRat(1);
      for (int j = std::max(0, e); j <= d; ++j) row[ri(j)] -= f_neg[j - e];
      rows.push_back(std::move(row));
    }
    auto ker = dense_kernel(std::move(rows), n);
    if (ker.empty()) continue;
    if (ker.size() > 1) return std::nullopt;
    const auto& v = ker[0];
    if (v[qi(0)].is_zero() || v[ri(0)].is_zero()) return std::nullopt;
    PadeResult res;
    QRat sq = v[qi(0)].inv(), sr = v[ri(0)].inv();
    for (int k = 0; k <= d; ++k) {
      res.Q.push_back(v[qi(k)] * sq);
      res.R.push_back(v[ri(k)] * sr);
    }
    res.scale = v[qi(0)] / v[ri(0)];
    res.Q = ucoeffs_trim(res.Q);
    res.R = ucoeffs_trim(res.R);
    return res;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// UVPoly

UVPoly::UVPoly(const QRat& c) {
  if (!c.is_zero()) m_.emplace(Key{0, 0}, c);
}

UVPoly UVPoly::mono(int du, int dv, const QRat& c) {
  UVPoly p;
  p.add_term({du, dv}, c);
  return p;
}

void UVPoly::add_term(const Key& k, const QRat& c) {
  if (c.is_zero()) return;
  auto it = m_.find(k);
  if (it == m_.end()) {
    m_.emplace(k, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) m_.erase(it);
}

QRat UVPoly::coeff(int du, int dv) const {
  auto it = m_.find({du, dv});
  return it == m_.end() ? QRat() : it->second;
}

UVPoly UVPoly::operator-() const {
  UVPoly r = *this;
  for (auto& [k, c] : r.m_) c = -c;
  return r;
}

UVPoly& UVPoly::operator+=(const UVPoly& o) {
  for (const auto& [k, c] : o.m_) add_term(k, c);
  return *this;
}

UVPoly& UVPoly::operator-=(const UVPoly& o) {
  for (const auto& [k, c] : o.m_) add_term(k, -c);
  return *this;
}

UVPoly operator*(const UVPoly& a, const UVPoly& b) {
  UVPoly r;
  for (const auto& [ka, ca] : a.m_)
    for (const auto& [kb, cb] : b.m_) r.add_term({ka.first + kb.first, ka.second + kb.second}, ca * cb);
  return r;
}

UVPoly UVPoly::swapped() const {
  UVPoly r;
  for (const auto& [k, c] : m_) r.add_term({k.second, k.first}, c);
  return r;
}

UVPoly UVPoly::q_inverted() const {
  UVPoly r;
  for (const auto& [k, c] : m_) r.add_term(k, c.q_inverted());
  return r;
}

UVPoly UVPoly::u_inverted() const {
  UVPoly r;
  for (const auto& [k, c] : m_) r.add_term({-k.first, k.second}, c);
  return r;
}

QRat UVPoly::eval(const QRat& u, const QRat& v) const {
  QRat acc;
  for (const auto& [k, c] : m_) acc += c * u.pow(k.first) * v.pow(k.second);
  return acc;
}

std::string UVPoly::str() const {
  std::string out;
  for (const auto& [k, c] : m_) {
    if (!out.empty()) out += " + ";
    out += "(" + c.str() + ")";
    if (k.first) out += "*u^" + std::to_string(k.first);
    if (k.second) out += "*v^" + std::to_string(k.second);
  }
  return out.empty() ? "0" : out;
}

std::vector<KernelTerm> expand_kernel(int delta, int cap) {
  if (cap < 1) throw Error("expand_kernel: cap >= 1 required");
  if (delta != 0 && delta != 1) throw Error("expand_kernel: delta must be 0 or 1");
  std::vector<KernelTerm> out;
  for (int k = 1; k <= cap; ++k) out.push_back({-k, k - 1, QRat::q_pow((2 * k - 1) * delta)});
  return out;
}

}  // namespace qyw
