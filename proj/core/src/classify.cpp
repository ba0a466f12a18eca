#include "qyw/classify.hpp"

#include <algorithm>
#include <cstdlib>
#include <tuple>

#include "qyw/qlinalg.hpp"

namespace qyw {

std::optional<std::pair<int, int>> signed_q_power(const QRat& x) {
  if (!x.is_monomial()) return std::nullopt;
  const auto& [e, c] = x.num().terms().front();
  if (c == 1) return std::make_pair(1, e);
  if (c == -1) return std::make_pair(-1, e);
  return std::nullopt;
}

namespace {

QRat qp(int e) { return QRat::q_pow(e); }

// Sort key putting signed q-powers first, by exponent then sign.
std::tuple<int, int, int> factor_key(const QRat& g) {
  if (auto sq = signed_q_power(g)) return {0, sq->second, -sq->first};
  return {1, 0, 0};
}

bool factor_less(const QRat& a, const QRat& b) {
  auto ka = factor_key(a), kb = factor_key(b);
  if (ka != kb) return ka < kb;
  return a < b;
}

std::string q_power_str(int e) {
  if (e == 0) return "";
  if (e == 1) return "q ";
  return "q^" + std::to_string(e) + " ";
}

std::string factor_str(const QRat& g) {
  if (auto sq = signed_q_power(g)) return std::string("(1 ") + (sq->first > 0 ? "+ " : "- ") + q_power_str(sq->second) + "u)";
  return "(1 + (" + g.str() + ") u)";
}

QRat horner(const UCoeffs& p, const QRat& x) {
  QRat acc;
  for (std::size_t k = p.size(); k-- > 0;) acc = acc * x + p[k];
  return acc;
}

int exponent_bound(const UCoeffs& p) {
  int b = 0;
  for (const QRat& c : p) {
    if (c.is_zero()) continue;
    for (const QPoly* poly : {&c.num(), &c.den()}) b += std::abs(poly->min_exp()) + std::abs(poly->max_exp());
  }
  return std::min(b + 1, 256);
}

}  // namespace

// ---------------------------------------------------------------------------

bool QSpiral::contains(const QSpiral& o) const {
  if (o.empty()) return true;
  if (empty()) return false;
  return interval->first <= o.interval->first && o.interval->second <= interval->second;
}

std::string QSpiral::str() const {
  if (empty()) return "empty";
  return "[" + std::to_string(interval->first) + "," + std::to_string(interval->second) + "]";
}

int pair_length(const PairParam& p) {
  if (p.alpha.is_zero() || p.beta.is_zero()) throw Error("pair parameters must be nonzero");
  auto sq = signed_q_power(p.alpha / p.beta);
  if (!sq || sq->second < 0)
    throw Error("ratio " + (p.alpha / p.beta).str() + " is not +-q^m with m >= 0");
  return sq->second;
}

QSpiral qspiral_from_pair(const PairParam& p) {
  const int m = pair_length(p);
  if (m == 0) return {};
  auto b = signed_q_power(p.beta);
  if (!b) throw Error("q-spiral base " + p.beta.str() + " is not a signed q-power");
  return QSpiral{std::make_pair(b->second, b->second + m - 1)};
}

bool general_position(const QSpiral& a, const QSpiral& b) {
  if (a.contains(b) || b.contains(a)) return true;
  // both nonempty here; the union is a spiral iff the intervals overlap or touch
  const bool union_is_spiral =
      std::max(a.interval->first, b.interval->first) <= std::min(a.interval->second, b.interval->second) + 1;
  return !union_is_spiral;
}

bool irr_predicate_affine(const std::vector<PairParam>& pairs) {
  std::vector<QSpiral> s;
  for (const PairParam& p : pairs) s.push_back(qspiral_from_pair(p));
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (!general_position(s[i], s[j])) return false;
  return true;
}

bool irr_predicate_twisted(const std::vector<PairParam>& pairs) {
  std::vector<QSpiral> s, inv;
  for (const PairParam& p : pairs) {
    s.push_back(qspiral_from_pair(p));
    inv.push_back(qspiral_from_pair(PairParam{p.beta.inv(), p.alpha.inv()}));
  }
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (!general_position(s[i], s[j]) || !general_position(inv[i], s[j])) return false;
  return true;
}

// ---------------------------------------------------------------------------

UPoly::UPoly(std::vector<QRat> gammas) : gammas_(std::move(gammas)) {
  for (const QRat& g : gammas_)
    if (g.is_zero()) throw Error("UPoly: zero factor parameter");
  std::sort(gammas_.begin(), gammas_.end(), factor_less);
}

UPoly UPoly::string(const QRat& base, int step_exp, int count) {
  std::vector<QRat> g;
  for (int j = 0; j < count; ++j) g.push_back(base * qp(step_exp * j));
  return UPoly(std::move(g));
}

UCoeffs UPoly::expanded() const {
  UCoeffs p{QRat(1)};
  for (const QRat& g : gammas_) p = ucoeffs_mul(p, UCoeffs{QRat(1), g});
  return p;
}

UPoly UPoly::operator*(const UPoly& o) const {
  std::vector<QRat> g = gammas_;
  g.insert(g.end(), o.gammas_.begin(), o.gammas_.end());
  return UPoly(std::move(g));
}

std::string UPoly::str() const {
  if (gammas_.empty()) return "1";
  std::string out;
  for (const QRat& g : gammas_) out += factor_str(g);
  return out;
}

std::string UPoly::expanded_str() const { return ucoeffs_str(expanded()); }

bool symmetry_check(const UPoly& p) {
  const UCoeffs a = p.expanded();
  const int d = p.degree();
  for (int k = 0; k <= d; ++k)
    if (!(a[static_cast<std::size_t>(d - k)] == qp(2 * k - d) * a[static_cast<std::size_t>(k)])) return false;
  return true;
}

// ---------------------------------------------------------------------------

namespace {

void bump(std::map<QRat, int>& f, const QRat& g, int e) {
  auto [it, fresh] = f.emplace(g, e);
  if (!fresh) {
    it->second += e;
    if (it->second == 0) f.erase(it);
  }
}

}  // namespace

FactoredRational FactoredRational::constant(const QRat& c) {
  if (c.is_zero()) throw Error("factored rational function must be nonzero");
  FactoredRational f;
  f.scale = c;
  return f;
}

FactoredRational FactoredRational::linear(const QRat& a0, const QRat& a1) {
  if (a1.is_zero()) return constant(a0);
  FactoredRational f;
  if (a0.is_zero()) {
    f.scale = a1;
    f.shift = 1;
    return f;
  }
  f.scale = a0;
  f.factors.emplace(a1 / a0, 1);
  return f;
}

FactoredRational FactoredRational::linear_inv(const QRat& a0, const QRat& a1) {
  FactoredRational f = linear(a1, a0);
  f.shift -= 1;
  return f;
}

FactoredRational FactoredRational::from_upoly(const UPoly& p) {
  FactoredRational f;
  for (const QRat& g : p.gammas()) bump(f.factors, g, 1);
  return f;
}

FactoredRational FactoredRational::operator*(const FactoredRational& o) const {
  FactoredRational f = *this;
  f.scale *= o.scale;
  f.shift += o.shift;
  for (const auto& [g, e] : o.factors) bump(f.factors, g, e);
  return f;
}

FactoredRational FactoredRational::operator/(const FactoredRational& o) const {
  FactoredRational f = *this;
  f.scale /= o.scale;
  f.shift -= o.shift;
  for (const auto& [g, e] : o.factors) bump(f.factors, g, -e);
  return f;
}

FactoredRational FactoredRational::scaled(const QRat& c) const {
  FactoredRational f = *this;
  f.scale *= c;
  return f;
}

FactoredRational FactoredRational::reflected() const {
  // (1 + g u^-1) = g u^-1 (1 + g^-1 u)
  FactoredRational f;
  f.scale = scale;
  f.shift = -shift;
  for (const auto& [g, e] : factors) {
    f.scale *= g.pow(e);
    f.shift -= e;
    bump(f.factors, g.inv(), e);
  }
  return f;
}

QRat FactoredRational::at_infinity() const {
  int order = shift;
  QRat v = scale;
  for (const auto& [g, e] : factors) {
    order += e;
    v *= g.pow(e);
  }
  if (order != 0) throw Error("rational function has no finite nonzero value at infinity");
  return v;
}

USeries FactoredRational::expand(Dir d, int cap) const {
  if (d == Dir::neg) {
    USeries s = reflected().expand(Dir::pos, cap);
    s.dir = Dir::neg;
    return s;
  }
  if (shift < 0) throw Error("rational function has a pole at u = 0");
  USeries acc = USeries::constant(scale, Dir::pos, cap);
  for (const auto& [g, e] : factors) {
    USeries lin(Dir::pos, cap);
    lin[0] = QRat(1);
    if (cap >= 1) lin[1] = g;
    USeries base = e > 0 ? lin : series_invert(lin);
    for (int k = 0; k < std::abs(e); ++k) acc = acc * base;
  }
  USeries out(Dir::pos, cap);
  for (int k = shift; k <= cap; ++k) out[k] = acc[k - shift];
  return out;
}

std::string FactoredRational::str() const {
  std::string out = scale.str();
  if (shift != 0) out += " * u^" + std::to_string(shift);
  for (const auto& [g, e] : factors) {
    out += (e > 0 ? " * " : " / ") + factor_str(g);
    if (std::abs(e) > 1) out += "^" + std::to_string(std::abs(e));
  }
  return out;
}

std::optional<FactoredRational> factor_polynomial(const UCoeffs& p0) {
  UCoeffs p = ucoeffs_trim(p0);
  if (p.empty()) return std::nullopt;
  FactoredRational f;
  std::size_t low = 0;
  while (p[low].is_zero()) ++low;
  f.shift = static_cast<int>(low);
  f.scale = p[low];
  UCoeffs b;
  for (std::size_t k = low; k < p.size(); ++k) b.push_back(p[k] / f.scale);
  const int bound = exponent_bound(b);
  for (int a = -bound; a <= bound && b.size() > 1; ++a)
    for (int sign : {1, -1}) {
      const QRat g = qp(a) * QRat(sign);
      const QRat root = -g.inv();
      while (b.size() > 1 && horner(b, root).is_zero()) {
        // b = (1 + g u) c
        UCoeffs c(b.size() - 1);
        c[0] = b[0];
        for (std::size_t j = 1; j < c.size(); ++j) c[j] = b[j] - g * c[j - 1];
        b = c;
        bump(f.factors, g, 1);
      }
    }
  if (b.size() > 1) return std::nullopt;
  return f;
}

std::optional<FactoredRational> factor_series(const USeries& s, int dmax) {
  if (dmax < 0) throw Error("factor_series: dmax must be nonnegative");
  if (s.cap() < 2 * dmax + 1) throw Error("factor_series: series cap must be at least 2*dmax+1");
  const int cap = s.cap();
  for (int d = 0; d <= dmax; ++d) {
    // unknowns A_0..A_d, B_0..B_d with B s = A mod w^(cap+1)
    const int n = 2 * (d + 1);
    Mat m(cap + 1, n);
    for (int k = 0; k <= cap; ++k) {
      if (k <= d) m.set(k, k, QRat(-1));
      for (int j = 0; j <= std::min(k, d); ++j)
        if (!s[k - j].is_zero()) m.set(k, d + 1 + j, s[k - j]);
    }
    VecSpace ker = kernel(m);
    if (ker.dim() == 0) continue;
    if (ker.dim() > 1) return std::nullopt;
    const Vec& v = ker.basis()[0];
    if (v[static_cast<std::size_t>(d + 1)].is_zero()) return std::nullopt;
    UCoeffs A(v.begin(), v.begin() + d + 1), B(v.begin() + d + 1, v.end());
    auto fa = factor_polynomial(A);
    auto fb = factor_polynomial(B);
    if (!fa || !fb) return std::nullopt;
    FactoredRational r = *fa / *fb;
    return s.dir == Dir::pos ? r : r.reflected();
  }
  return std::nullopt;
}

std::optional<std::pair<UPoly, QRat>> drinfeld_extract(const FactoredRational& r) {
  if (r.shift != 0) return std::nullopt;
  // chains of factor parameters differing by even powers of q
  struct Chain {
    QRat base;
    std::map<int, int> e;
  };
  std::vector<Chain> chains;
  for (const auto& [g, e] : r.factors) {
    bool placed = false;
    for (Chain& c : chains) {
      auto sq = signed_q_power(g / c.base);
      if (sq && sq->first == 1 && sq->second % 2 == 0) {
        c.e[sq->second / 2] += e;
        placed = true;
        break;
      }
    }
    if (!placed) chains.push_back(Chain{g, {{0, e}}});
  }
  std::vector<QRat> gammas;
  for (const Chain& c : chains) {
    const int lo = c.e.begin()->first, hi = c.e.rbegin()->first;
    int n = 0;
    for (int k = lo; k <= hi; ++k) {
      auto it = c.e.find(k);
      if (it != c.e.end()) n -= it->second;
      if (n < 0) return std::nullopt;
      for (int j = 0; j < n; ++j) gammas.push_back(c.base * qp(2 * k));
    }
    if (n != 0) return std::nullopt;
  }
  return std::make_pair(UPoly(std::move(gammas)), r.scale);
}

// ---------------------------------------------------------------------------

nlohmann::json drinfeld_to_json(const DrinfeldResult& d) {
  nlohmann::json j;
  j["polys"] = nlohmann::json::array();
  j["expanded"] = nlohmann::json::array();
  for (const UPoly& p : d.polys) {
    j["polys"].push_back(p.str());
    j["expanded"].push_back(p.expanded_str());
  }
  j["gauge"] = nlohmann::json::array();
  for (const QRat& g : d.gauge) j["gauge"].push_back(g.str());
  return j;
}

UPoly drinfeld_from_pairs_gl2(const std::vector<PairParam>& pairs) {
  UPoly p;
  for (const PairParam& pr : pairs) p = p * UPoly::string(pr.beta * pr.beta, 2, pair_length(pr));
  return p;
}

std::vector<UPoly> drinfeld_eval_glN(const std::vector<int>& m) {
  if (m.size() < 2) throw Error("drinfeld_eval_glN: at least two parameters expected");
  std::vector<UPoly> out;
  for (std::size_t i = 0; i + 1 < m.size(); ++i) {
    if (m[i] < m[i + 1]) throw Error("drinfeld_eval_glN: parameters must be nonincreasing");
    out.push_back(UPoly::string(qp(2 * m[i + 1]), 2, m[i] - m[i + 1]));
  }
  return out;
}

UPoly drinfeld_sp2_from_pairs(const std::vector<PairParam>& pairs) {
  UPoly p;
  for (const PairParam& pr : pairs) {
    const int m = pair_length(pr);
    p = p * UPoly::string(pr.beta * pr.beta, 2, m) * UPoly::string((pr.alpha * pr.alpha).inv(), 2, m);
  }
  return p;
}

DrinfeldResult drinfeld_sp2n_eval(const std::vector<int>& p, const std::vector<QRat>& mu) {
  if (p.empty() || p.size() != mu.size()) throw Error("drinfeld_sp2n_eval: p and mu must have the same nonzero length");
  if (p[0] < 0) throw Error("drinfeld_sp2n_eval: p_1 must be nonnegative");
  for (std::size_t i = 1; i < p.size(); ++i)
    if (p[i] < p[i - 1]) throw Error("drinfeld_sp2n_eval: p must be nondecreasing");
  DrinfeldResult r;
  r.polys.push_back(UPoly::string(QRat::q(), 2, p[0]) * UPoly::string(qp(-2 * p[0] - 1), 2, p[0]));
  for (std::size_t i = 1; i < p.size(); ++i) r.polys.push_back(UPoly::string(qp(-2 * p[i] - 1), 2, p[i] - p[i - 1]));
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (mu[i].is_zero()) throw Error("drinfeld_sp2n_eval: mu_i must be nonzero");
    r.gauge.push_back(mu[i].inv() * qp(-p[i]));
  }
  return r;
}

// ---------------------------------------------------------------------------

ClassifyResult classify_glN(const FactoredHW& hw, bool extended) {
  const std::size_t N = hw.first.size();
  if (N == 0 || hw.second.size() != N) throw Error("classify_glN: need matching nonempty component lists");
  DrinfeldResult out;
  out.gauge.push_back(QRat(1));
  for (std::size_t i = 0; i + 1 < N; ++i) {
    const FactoredRational r = hw.first[i] / hw.first[i + 1];
    if (!(r == hw.second[i] / hw.second[i + 1]))
      return NotFD{"nu and nubar ratios differ at index " + std::to_string(i + 1)};
    auto ex = drinfeld_extract(r);
    if (!ex) return NotFD{"ratio at index " + std::to_string(i + 1) + " is not of the form P(uq^2)/P(u)"};
    const auto& [P, c] = *ex;
    const QRat next = out.gauge.back() * c * qp(P.degree());
    if (!extended && !(next == QRat(1) || next == QRat(-1)))
      return NotFD{"constant of ratio " + std::to_string(i + 1) + " is not +-q^-deg P"};
    out.polys.push_back(P);
    out.gauge.push_back(next);
  }
  return out;
}

ClassifyResult classify_sp2n(const FactoredHW& hw) {
  const std::size_t n = hw.first.size();
  if (n == 0 || hw.second.size() != n) throw Error("classify_sp2n: need matching nonempty component lists");
  DrinfeldResult out;
  auto ex1 = drinfeld_extract(hw.second[0].reflected() / hw.first[0]);
  if (!ex1) return NotFD{"mubar_1(u^-1)/mu_1(u) is not of the form P(uq^2)/P(u)"};
  const UPoly& P1 = ex1->first;
  if (!(ex1->second == qp(-P1.degree()))) return NotFD{"constant of mubar_1(u^-1)/mu_1(u) is not q^-deg P_1"};
  if (P1.degree() % 2 != 0) return NotFD{"P_1 has odd degree"};
  if (!symmetry_check(P1)) return NotFD{"P_1 fails u^deg P(u^-1) = q^-deg P(uq^2)"};
  out.polys.push_back(P1);
  out.gauge.push_back((hw.first[0].at_infinity() * qp(P1.degree() / 2)).inv());
  for (std::size_t i = 1; i < n; ++i) {
    const FactoredRational r = hw.first[i - 1] / hw.first[i];
    if (!(r == hw.second[i - 1] / hw.second[i]))
      return NotFD{"mu and mubar ratios differ at index " + std::to_string(i + 1)};
    auto ex = drinfeld_extract(r);
    if (!ex) return NotFD{"ratio at index " + std::to_string(i + 1) + " is not of the form P(uq^2)/P(u)"};
    out.polys.push_back(ex->first);
    out.gauge.push_back(out.gauge.back() * ex->second * qp(ex->first.degree()));
  }
  return out;
}

namespace {

FactoredHW factor_all(const std::vector<USeries>& a, const std::vector<USeries>& b, int dmax) {
  FactoredHW hw;
  for (const auto* list : {&a, &b})
    for (const USeries& s : *list) {
      auto f = factor_series(s, dmax);
      if (!f) throw Error("factored form required: series " + s.str() + " is not a ratio of signed q-power factors");
      (list == &a ? hw.first : hw.second).push_back(*f);
    }
  return hw;
}

}  // namespace

ClassifyResult classify_sp2n_series(const std::vector<USeries>& mu, const std::vector<USeries>& mubar, int dmax) {
  return classify_sp2n(factor_all(mu, mubar, dmax));
}

ClassifyResult classify_glN_series(const std::vector<USeries>& nu, const std::vector<USeries>& nubar, int dmax,
                                   bool extended) {
  return classify_glN(factor_all(nu, nubar, dmax), extended);
}

FdcoResult fdco_check(const std::vector<QRat>& mu, const std::vector<QRat>& mup) {
  if (mu.size() != mup.size()) throw Error("fdco_check: length mismatch");
  FdcoResult r;
  r.finite = true;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mup[i].is_zero()) throw Error("fdco_check: mu'_i must be nonzero");
    std::optional<int> p;
    if (!mu[i].is_zero()) {
      auto sq = signed_q_power(-mup[i] / mu[i]);
      if (sq && sq->first == 1 && sq->second >= 1 && sq->second % 2 == 1) p = (sq->second - 1) / 2;
    }
    if (!p || (i > 0 && r.p.back() && *p < *r.p.back())) r.finite = false;
    r.p.push_back(p);
  }
  return r;
}

std::optional<PadeResult> ratio_condition_affine(const USeries& nu1, const USeries& nu2, const USeries& nubar1,
                                                 const USeries& nubar2, int dmax) {
  auto res = pade_reconstruct(nu1 * series_invert(nu2), nubar1 * series_invert(nubar2), dmax);
  if (!res || res->Q.size() != res->R.size()) return std::nullopt;
  if (!(res->scale * res->scale * res->Q.back() == res->R.back())) return std::nullopt;
  return res;
}

std::optional<UCoeffs> ratio_condition_twisted(const USeries& mu, const USeries& mubar, int dmax) {
  USeries mubar_refl = mubar, mu_refl = mu;
  mubar_refl.dir = Dir::neg;
  mu_refl.dir = Dir::pos;
  auto res = pade_reconstruct(mubar_refl * series_invert(mu), mu_refl * series_invert(mubar), dmax);
  if (!res || res->Q.size() != res->R.size()) return std::nullopt;
  const std::size_t d = res->R.size() - 1;
  if (d % 2 != 0) return std::nullopt;
  for (std::size_t k = 0; k <= d; ++k)
    if (!(res->scale * res->Q[k] == res->R[d - k])) return std::nullopt;
  return res->R;
}

}  // namespace qyw
