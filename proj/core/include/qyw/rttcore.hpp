#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "qyw/exactmath.hpp"
#include "qyw/qlinalg.hpp"

namespace qyw {

// ---------------------------------------------------------------------------
// R-matrices and the identities they satisfy.

Mat r_const(int N);
Mat r_const_t1(int N);
MatUV r_trig(int N);
MatUV r_trig_t1(int N);
Mat g_matrix(int n);

/// R12 R13 R23 - R23 R13 R12 on (C^N)^{(x)3} for the given R (dim N^2 x N^2).
Mat ybe_residual(const Mat& R, int N);
Mat ybe_check(int N);
/// R(u,v) R_{q^-1}(u,v) - (qu - q^-1 v)(q^-1 u - q v) 1.
MatUV trig_inverse_check(int N);
/// R(u,v) + P R_{q^-1}(v,u) P.
MatUV trig_swap_check(int N);

int varsigma(int i);

/// det[e_r(x_1..^x_k..x_l)]_{r=0..l-1, k=1..l}.
Rational elem_sym_det(const std::vector<Rational>& points);

// ---------------------------------------------------------------------------
// Words and noncommutative polynomials.

enum class Family : std::uint8_t { t, tbar, s, sbar };

struct GenId {
  Family family = Family::t;
  int row = 1, col = 1, level = 0;
  auto operator<=>(const GenId&) const = default;
};
std::string genid_str(const GenId& g);

struct Power {
  GenId gen;
  int exp = 1;
  auto operator<=>(const Power&) const = default;
};

/// Adjacent equal generators merged, zero exponents dropped.
using Word = std::vector<Power>;
Word word_mul(const Word& a, const Word& b);
int word_length(const Word& w);
std::string word_str(const Word& w);

class NCPoly {
 public:
  using Map = std::map<Word, QRat>;
  NCPoly() = default;
  NCPoly(const QRat& c);  // NOLINT(google-explicit-constructor)
  static NCPoly word(Word w, const QRat& c = QRat(1));
  static NCPoly gen(const GenId& g, int exp = 1) { return word({Power{g, exp}}); }

  bool is_zero() const { return m_.empty(); }
  const Map& terms() const { return m_; }
  std::size_t size() const { return m_.size(); }
  QRat coeff(const Word& w) const;
  /// True when the polynomial is a scalar; the scalar is returned in c.
  bool is_scalar(QRat* c = nullptr) const;
  void add_term(const Word& w, const QRat& c);

  NCPoly operator-() const;
  NCPoly& operator+=(const NCPoly& o);
  NCPoly& operator-=(const NCPoly& o);
  friend NCPoly operator+(NCPoly a, const NCPoly& b) { return a += b; }
  friend NCPoly operator-(NCPoly a, const NCPoly& b) { return a -= b; }
  friend NCPoly operator*(const NCPoly& a, const NCPoly& b);
  NCPoly scaled(const QRat& c) const;
  bool operator==(const NCPoly& o) const { return m_ == o.m_; }
  /// Generic rendering; presentations print through Presentation::str.
  std::string str() const;

 private:
  Map m_;
};

// ---------------------------------------------------------------------------
// Relations as data: shared by straightening and module verification.

/// One quadratic term c * g1 * g2 (g1, g2 may be zero or unit generators).
struct CoeffTerm {
  QRat c;
  GenId first, second;
};
using QuadRelation = std::vector<CoeffTerm>;

enum class Var : std::uint8_t { u, v };
struct SeriesFactor {
  Family family;
  int row, col;
  Var var;
};
/// coeff(u,v) * F1 * F2 with F1, F2 generating series.
struct SeriesTerm {
  UVPoly coeff;
  SeriesFactor first, second;
};
struct SeriesRelation {
  std::string label;  // e.g. "tt(2,1,1,2)"
  std::vector<SeriesTerm> terms;  // sum of terms = 0
};

/// Series direction convention: t, s in u^{-1}; tbar, sbar in u.
int series_level_for_exponent(Family f, int exponent);
/// Coefficient of u^alpha v^beta; terms with negative levels are dropped.
QuadRelation extract_coefficient(const SeriesRelation& rel, int alpha, int beta);

// ---------------------------------------------------------------------------
// Presentations.

enum class Algebra : std::uint8_t { uqgl, uqo, uqsp, uqaff, yqo, yqsp };
enum class Strategy : std::uint8_t { leftmost, rightmost };

class Presentation {
 public:
  /// Names: uqgl:N, uqo:N, uqsp:2n, uqaff:N, yqo:N, yqsp:2n, optional :ext for uqgl/uqaff.
  static std::shared_ptr<const Presentation> make(std::string_view name);
  Presentation(Algebra a, int N, bool ext);
  ~Presentation();
  Presentation(const Presentation&) = delete;
  Presentation& operator=(const Presentation&) = delete;

  Algebra algebra() const { return alg_; }
  int N() const { return n_; }
  bool extended() const { return ext_; }
  bool has_levels() const;  // affine and twisted families
  std::string name() const;

  /// Canonical value of g^exp: zero, a scalar, or a single power.  Throws on
  /// generators that do not exist in the presentation or illegal inverses.
  NCPoly gen(const GenId& g, int exp = 1) const;
  /// Like gen, but zero generators evaluate to 0 instead of throwing.
  NCPoly value(const GenId& g, int exp = 1) const;
  bool is_invertible(const GenId& g) const;
  /// Nonzero, non-unit generators with level <= max_level (canonical ones only).
  std::vector<GenId> generators(int max_level = 0) const;

  NCPoly parse(std::string_view text) const;
  std::string str(const NCPoly& p) const;
  std::string word_string(const Word& w) const;

  /// Re-expresses every factor canonically (validating it).
  NCPoly canonical(const NCPoly& x) const;
  NCPoly straighten(const NCPoly& x, Strategy s = Strategy::leftmost) const;
  /// Levels in x must not exceed cap.
  NCPoly straighten(const NCPoly& x, int cap, Strategy s = Strategy::leftmost) const;
  bool is_ordered(const Word& w) const;
  /// Monomial order used for rewriting: weight, then length, then slot lex.
  bool word_less(const Word& a, const Word& b) const;

  /// Defining relations of finite presentations.
  std::vector<QuadRelation> finite_relations() const;
  /// Defining series relations of affine and twisted presentations.
  std::vector<SeriesRelation> series_relations() const;
  /// Converts a relation instance to an element of the algebra.
  NCPoly instance_poly(const QuadRelation& r) const;

  std::array<int, 4> slot(const GenId& g) const;
  std::vector<int> weight(const GenId& g) const;

 private:
  struct Letter {
    GenId g;
    int sign;
  };
  struct Impl;
  const NCPoly& rule(const Letter& a, const Letter& b) const;
  NCPoly normal_form(const Word& w, Strategy s) const;
  void ensure_block(int key) const;
  std::vector<int> word_weight(const Word& w) const;

  Algebra alg_;
  int n_;
  bool ext_;
  std::unique_ptr<Impl> impl_;
};

using PresentationPtr = std::shared_ptr<const Presentation>;

struct ConfluenceReport {
  int trials = 0;
  std::vector<std::string> disagreements;  // offending input words
  std::vector<NCPoly> corpus;             // the random inputs
};
ConfluenceReport confluence_fuzz(const Presentation& p, int maxlen, int trials, std::uint64_t seed,
                                 int max_level = 2);

// ---------------------------------------------------------------------------
// kappa_l : U_q(gl^_N) -> U_q(gl_N)^{(x) l}.

/// Element of the l-fold tensor power; each key holds one word per factor.
using TensorPoly = std::map<std::vector<Word>, QRat>;
TensorPoly kappa_l(const GenId& g, int l, int N);
TensorPoly tensor_mul(const TensorPoly& a, const TensorPoly& b);
/// Straightens every tensor factor to the finite PBW basis.
TensorPoly tensor_straighten(const TensorPoly& x, const Presentation& finite);

struct KappaReport {
  bool independent = false;
  int monomials = 0;
  int rank = 0;
};
KappaReport kappa_independence_check(int N, int m, int word_cap, int max_monomials = 2000);

}  // namespace qyw
