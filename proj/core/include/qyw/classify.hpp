#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "qyw/exactmath.hpp"

namespace qyw {

/// (sign, exponent) when x = sign * q^exponent.
std::optional<std::pair<int, int>> signed_q_power(const QRat& x);

// ---------------------------------------------------------------------------
// q-spirals

/// Exponent interval [lo, hi] of {+-q^lo, ..., +-q^hi}; no interval when empty.
struct QSpiral {
  std::optional<std::pair<int, int>> interval;
  bool empty() const { return !interval.has_value(); }
  bool contains(const QSpiral& o) const;
  bool operator==(const QSpiral&) const = default;
  std::string str() const;
};

/// A tensor factor L(alpha, beta); alpha/beta must be +-q^m with m >= 0.
struct PairParam {
  QRat alpha, beta;
};

/// m with alpha/beta = +-q^m, m >= 0; throws otherwise.
int pair_length(const PairParam& p);
QSpiral qspiral_from_pair(const PairParam& p);
bool general_position(const QSpiral& a, const QSpiral& b);
bool irr_predicate_affine(const std::vector<PairParam>& pairs);
bool irr_predicate_twisted(const std::vector<PairParam>& pairs);

// ---------------------------------------------------------------------------
// Polynomials with constant term 1

/// prod (1 + gamma u), kept as a sorted factor list.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<QRat> gammas);
  static UPoly string(const QRat& base, int step_exp, int count);  // prod_{j<count} (1 + base q^{step*j} u)

  int degree() const { return static_cast<int>(gammas_.size()); }
  const std::vector<QRat>& gammas() const { return gammas_; }
  UCoeffs expanded() const;
  UPoly operator*(const UPoly& o) const;
  bool operator==(const UPoly& o) const { return gammas_ == o.gammas_; }
  /// Factor list such as "(1 + q u)(1 + q^-3 u)"; "1" when empty.
  std::string str() const;
  std::string expanded_str() const;

 private:
  std::vector<QRat> gammas_;
};

/// u^deg P(u^-1) = q^-deg P(u q^2).
bool symmetry_check(const UPoly& p);

// ---------------------------------------------------------------------------
// Rational functions in factored form

/// scale * u^shift * prod (1 + gamma u)^mult, gamma nonzero.
struct FactoredRational {
  QRat scale = QRat(1);
  int shift = 0;
  std::map<QRat, int> factors;

  static FactoredRational constant(const QRat& c);
  /// a0 + a1 u
  static FactoredRational linear(const QRat& a0, const QRat& a1);
  /// a0 + a1 u^-1
  static FactoredRational linear_inv(const QRat& a0, const QRat& a1);
  static FactoredRational from_upoly(const UPoly& p);

  FactoredRational operator*(const FactoredRational& o) const;
  FactoredRational operator/(const FactoredRational& o) const;
  FactoredRational scaled(const QRat& c) const;
  /// f(u^-1)
  FactoredRational reflected() const;
  /// Leading value at u = infinity (requires a finite nonzero limit).
  QRat at_infinity() const;
  /// Expansion in u^-1 (neg) or u (pos) to the cap.
  USeries expand(Dir d, int cap) const;
  bool operator==(const FactoredRational& o) const = default;
  std::string str() const;
};

/// Factors a polynomial (index = degree) over signed q-powers; nullopt when impossible.
std::optional<FactoredRational> factor_polynomial(const UCoeffs& p);
/// Rational reconstruction of a one-sided series, numerator and denominator degree <= dmax,
/// then factorization; nullopt when either step fails.  Needs cap >= 2*dmax + 1.
std::optional<FactoredRational> factor_series(const USeries& s, int dmax);

/// P with q^-deg P * P(u q^2) / P(u) equal to r up to the constant returned alongside.
std::optional<std::pair<UPoly, QRat>> drinfeld_extract(const FactoredRational& r);

// ---------------------------------------------------------------------------
// Drinfeld polynomials

struct DrinfeldResult {
  std::vector<UPoly> polys;
  std::vector<QRat> gauge;  // signs or constants phi_i
};
struct NotFD {
  std::string reason;
};
using ClassifyResult = std::variant<DrinfeldResult, NotFD>;
nlohmann::json drinfeld_to_json(const DrinfeldResult& d);

UPoly drinfeld_from_pairs_gl2(const std::vector<PairParam>& pairs);
/// Evaluation module with mu_i = q^{m_i}, m_1 >= ... >= m_N.
std::vector<UPoly> drinfeld_eval_glN(const std::vector<int>& m);
UPoly drinfeld_sp2_from_pairs(const std::vector<PairParam>& pairs);
/// Evaluation module V(mu; mu') with parameters 0 <= p_1 <= ... <= p_n.
DrinfeldResult drinfeld_sp2n_eval(const std::vector<int>& p, const std::vector<QRat>& mu);

/// Highest weight (nu_i(u); nubar_i(u)) or (mu_i(u); mubar_i(u)) as rational functions.
struct FactoredHW {
  std::vector<FactoredRational> first, second;
};
/// U_q(gl^_N): signs eps_i (eps_1 = +1); extended: constants phi_i (phi_1 = 1).
ClassifyResult classify_glN(const FactoredHW& hw, bool extended = false);
/// Y'_q(sp_2n): phi_1 = (mu_1^(0) q^{deg P_1 / 2})^-1, later phi_i fixed by the ratios.
ClassifyResult classify_sp2n(const FactoredHW& hw);
/// Reconstructs each component from its series (degree <= dmax) and classifies.
ClassifyResult classify_sp2n_series(const std::vector<USeries>& mu, const std::vector<USeries>& mubar, int dmax);
ClassifyResult classify_glN_series(const std::vector<USeries>& nu, const std::vector<USeries>& nubar, int dmax,
                                   bool extended = false);

struct FdcoResult {
  std::vector<std::optional<int>> p;  // p_i with mu'_i + q^{2p_i+1} mu_i = 0
  bool finite = false;                // every p_i exists and they are nondecreasing
};
FdcoResult fdco_check(const std::vector<QRat>& mu, const std::vector<QRat>& mup);

/// nu1/nu2 (in u^-1) and nubar1/nubar2 (in u) as one ratio scale*Q/R with deg Q = deg R and
/// scale^2 lead(Q) = lead(R).
std::optional<PadeResult> ratio_condition_affine(const USeries& nu1, const USeries& nu2, const USeries& nubar1,
                                                 const USeries& nubar2, int dmax);
/// Q of even degree with mubar(u^-1)/mu(u) = u^deg Q Q(u^-1)/Q(u).
std::optional<UCoeffs> ratio_condition_twisted(const USeries& mu, const USeries& mubar, int dmax);

}  // namespace qyw
