#include "catch_amalgamated.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "qyw/classify.hpp"
#include "qyw/repforge.hpp"

using namespace qyw;

namespace {

QRat q() { return QRat::q(); }
QRat qp(int e) { return QRat::q_pow(e); }

PairParam pr(const QRat& a, const QRat& b) { return PairParam{a, b}; }

// sign * q^(b+m), q^b
PairParam grid_pair(int b, int m, int sign) { return pr(qp(b + m) * QRat(sign), qp(b)); }

std::vector<PairParam> grid_factors(int bmax) {
  std::vector<PairParam> out;
  for (int b = 0; b <= bmax; ++b)
    for (int m = 0; m <= 2; ++m)
      for (int s : {1, -1}) out.push_back(grid_pair(b, m, s));
  return out;
}

// prod_k (a_k + b_k x) as a series in x (x = u^-1 for neg, u for pos).
USeries linear_series(const std::vector<std::pair<QRat, QRat>>& f, Dir d, int cap) {
  USeries acc = USeries::constant(QRat(1), d, cap);
  for (const auto& [a, b] : f) {
    USeries l(d, cap);
    l[0] = a;
    if (cap >= 1) l[1] = b;
    acc = acc * l;
  }
  return acc;
}

// q^-deg P * P(u q^2) / P(u) expanded in u^-1:
// P(u q^2)/P(u) = q^(2d) prod (1 + gamma^-1 q^-2 u^-1) / (1 + gamma^-1 u^-1).
USeries drinfeld_ratio_neg(const UPoly& P, int cap) {
  USeries num = USeries::constant(qp(2 * P.degree()), Dir::neg, cap);
  USeries den = USeries::constant(QRat(1), Dir::neg, cap);
  for (const QRat& g : P.gammas()) {
    num = num * linear_series({{QRat(1), g.inv() * qp(-2)}}, Dir::neg, cap);
    den = den * linear_series({{QRat(1), g.inv()}}, Dir::neg, cap);
  }
  return num * series_invert(den);
}

// Factored highest weight of a tensor product of evaluation modules L(alpha_i, beta_i).
FactoredHW gl2_tensor_hw(const std::vector<PairParam>& pairs) {
  FactoredHW hw{{FactoredRational::constant(QRat(1)), FactoredRational::constant(QRat(1))},
                {FactoredRational::constant(QRat(1)), FactoredRational::constant(QRat(1))}};
  for (const PairParam& p : pairs) {
    hw.first[0] = hw.first[0] * FactoredRational::linear_inv(p.alpha, p.alpha.inv());
    hw.first[1] = hw.first[1] * FactoredRational::linear_inv(p.beta, p.beta.inv());
    hw.second[0] = hw.second[0] * FactoredRational::linear(p.alpha.inv(), p.alpha);
    hw.second[1] = hw.second[1] * FactoredRational::linear(p.beta.inv(), p.beta);
  }
  return hw;
}

ModuleRep gl2_tensor(const std::vector<PairParam>& pairs, int cap) {
  std::optional<ModuleRep> acc;
  for (const PairParam& p : pairs) {
    ModuleRep e = eval_affine(std::get<ModuleRep>(gl2_finite_module(p.alpha, p.beta)), cap);
    acc = acc ? tensor(*acc, e) : e;
  }
  return *acc;
}

HighestWeightData sp2_eval_hw(const QRat& mu, const QRat& mup, int cap) {
  return highest_weight_of(twisted_eval(std::get<ModuleRep>(uqsp2_module(mu, mup)), cap));
}

// Factored (mu(u); mubar(u)) of the twisted evaluation module V(mu; mu'):
// mu(u) = mu - mu' u^-1, mubar(u) = (1 + q u)(mu u - mu') / (u + q).
FactoredHW sp2_eval_factored(const QRat& mu, const QRat& mup) {
  FactoredHW hw;
  hw.first.push_back(FactoredRational::linear_inv(mu, -mup));
  hw.second.push_back(FactoredRational::linear(QRat(1), q()) * FactoredRational::linear(-mup, mu) /
                      FactoredRational::linear(q(), QRat(1)));
  return hw;
}

DrinfeldResult fd(const ClassifyResult& r) {
  if (const auto* n = std::get_if<NotFD>(&r)) FAIL("NotFD: " << n->reason);
  return std::get<DrinfeldResult>(r);
}

// P(u q^2) / P(u) as a factored rational function.
FactoredRational shift_ratio(const UPoly& P) {
  std::vector<QRat> shifted;
  for (const QRat& g : P.gammas()) shifted.push_back(g * qp(2));
  return FactoredRational::from_upoly(UPoly(shifted)) / FactoredRational::from_upoly(P);
}

}  // namespace

TEST_CASE("q-spirals from pairs", "[classify]") {
  CHECK(qspiral_from_pair(pr(qp(2), QRat(1))).str() == "[0,1]");
  CHECK(qspiral_from_pair(pr(qp(5), qp(5))).empty());
  CHECK(qspiral_from_pair(pr(-qp(3), q())).str() == "[1,2]");
  CHECK(qspiral_from_pair(pr(q(), QRat(1))).str() == "[0,0]");
  CHECK(qspiral_from_pair(pr(QRat(1), qp(-3))).str() == "[-3,-1]");
  CHECK_THROWS_AS(qspiral_from_pair(pr(QRat(1), q())), Error);
  CHECK_THROWS_AS(qspiral_from_pair(pr(QRat(2), QRat(1))), Error);
  CHECK_THROWS_AS(qspiral_from_pair(pr(q() + QRat(1), QRat(1))), Error);
}

TEST_CASE("q-spirals ignore the signs of alpha and beta", "[classify]") {
  for (int b = -2; b <= 2; ++b)
    for (int m = 0; m <= 3; ++m) {
      const QSpiral ref = qspiral_from_pair(pr(qp(b + m), qp(b)));
      for (int e : {1, -1})
        for (int d : {1, -1}) CHECK(qspiral_from_pair(pr(qp(b + m) * QRat(e), qp(b) * QRat(d))) == ref);
    }
}

TEST_CASE("general position is interval logic", "[classify]") {
  auto iv = [](int a, int b) { return QSpiral{std::make_pair(a, b)}; };
  CHECK(general_position(iv(0, 1), iv(0, 1)));
  CHECK_FALSE(general_position(iv(0, 1), iv(1, 2)));
  CHECK_FALSE(general_position(iv(0, 1), iv(2, 3)));  // adjacent: union [0,3]
  CHECK(general_position(iv(0, 1), iv(3, 4)));
  CHECK(general_position(iv(0, 3), iv(1, 2)));
  CHECK(general_position(QSpiral{}, iv(0, 5)));
  CHECK(general_position(iv(0, 5), QSpiral{}));
  CHECK(general_position(QSpiral{}, QSpiral{}));
  // brute force on sets of exponents
  for (int a0 = 0; a0 <= 3; ++a0)
    for (int a1 = a0; a1 <= 3; ++a1)
      for (int b0 = 0; b0 <= 3; ++b0)
        for (int b1 = b0; b1 <= 3; ++b1) {
          std::set<int> A, B, U;
          for (int x = a0; x <= a1; ++x) A.insert(x);
          for (int x = b0; x <= b1; ++x) B.insert(x);
          U = A;
          U.insert(B.begin(), B.end());
          const bool contiguous = *U.rbegin() - *U.begin() + 1 == static_cast<int>(U.size());
          const bool contain = std::includes(A.begin(), A.end(), B.begin(), B.end()) ||
                               std::includes(B.begin(), B.end(), A.begin(), A.end());
          CHECK(general_position(iv(a0, a1), iv(b0, b1)) == (contain || !contiguous));
        }
}

TEST_CASE("irreducibility predicates: examples", "[classify]") {
  CHECK(irr_predicate_affine({pr(q(), QRat(1)), pr(q(), QRat(1))}));
  CHECK_FALSE(irr_predicate_affine({pr(qp(2), QRat(1)), pr(qp(3), q())}));
  CHECK(irr_predicate_affine({pr(qp(2), QRat(1))}));
  CHECK(irr_predicate_affine({}));
  CHECK(irr_predicate_twisted({pr(qp(2), QRat(1))}));
  CHECK(irr_predicate_twisted({}));
  CHECK_FALSE(irr_predicate_twisted({pr(qp(2), QRat(1)), pr(qp(3), q())}));
  // (q,1),(q,1): S = [0,0] twice, inverted spiral S(1, q^-1) = [-1,-1] is adjacent to [0,0]
  CHECK_FALSE(irr_predicate_twisted({pr(q(), QRat(1)), pr(q(), QRat(1))}));
  CHECK(irr_predicate_twisted({pr(qp(2), q()), pr(qp(2), q())}));
}

TEST_CASE("irreducibility predicates are invariant under permutations", "[classify]") {
  const std::vector<PairParam> fs = grid_factors(2);
  std::mt19937 rng(17);
  std::uniform_int_distribution<std::size_t> pick(0, fs.size() - 1);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<PairParam> v{fs[pick(rng)], fs[pick(rng)], fs[pick(rng)]};
    std::vector<std::size_t> idx{0, 1, 2};
    const bool a = irr_predicate_affine(v), t = irr_predicate_twisted(v);
    while (std::next_permutation(idx.begin(), idx.end())) {
      std::vector<PairParam> w{v[idx[0]], v[idx[1]], v[idx[2]]};
      CHECK(irr_predicate_affine(w) == a);
      CHECK(irr_predicate_twisted(w) == t);
    }
  }
}

TEST_CASE("irreducibility predicates agree with the module oracle", "[classify]") {
  const std::vector<PairParam> fs = grid_factors(1);
  int checked = 0;
  for (const PairParam& a : fs)
    for (const PairParam& b : fs) {
      ModuleRep T = gl2_tensor({a, b}, 4);
      INFO(a.alpha.str() << "," << a.beta.str() << " x " << b.alpha.str() << "," << b.beta.str());
      CHECK(is_irreducible(T) == irr_predicate_affine({a, b}));
      CHECK(is_irreducible(twisted_restrict(T)) == irr_predicate_twisted({a, b}));
      ++checked;
    }
  CHECK(checked == 144);
}

TEST_CASE("polynomials with constant term one", "[classify]") {
  UPoly p = UPoly::string(q(), 2, 2);  // (1 + q u)(1 + q^3 u)
  CHECK(p.degree() == 2);
  CHECK(p.str() == "(1 + q u)(1 + q^3 u)");
  UCoeffs e = p.expanded();
  REQUIRE(e.size() == 3);
  CHECK(e[0] == QRat(1));
  CHECK(e[1] == q() + qp(3));
  CHECK(e[2] == qp(4));
  CHECK(UPoly().str() == "1");
  CHECK((UPoly::string(qp(-3), 2, 1) * UPoly::string(q(), 2, 1)).str() == "(1 + q^-3 u)(1 + q u)");
  CHECK(UPoly({-QRat(1)}).str() == "(1 - u)");
  CHECK_THROWS_AS(UPoly({QRat(0)}), Error);
}

TEST_CASE("symmetry check", "[classify]") {
  CHECK(symmetry_check(UPoly()));
  CHECK(symmetry_check(UPoly({q(), qp(-3)})));
  CHECK_FALSE(symmetry_check(UPoly({QRat(1)})));
  CHECK_FALSE(symmetry_check(UPoly({QRat(1), qp(2)})));
  CHECK(symmetry_check(UPoly({QRat(1), qp(-2)})));
  // hand expansion for (1 + q u)(1 + q^-3 u): u^2 + (q + q^-3) u + q^-2 on both sides
  const UCoeffs e = UPoly({q(), qp(-3)}).expanded();
  CHECK(e[1] == q() + qp(-3));
  CHECK(e[2] == qp(-2));
}

TEST_CASE("gl Drinfeld polynomials: closed forms", "[classify]") {
  CHECK(drinfeld_from_pairs_gl2({pr(q(), QRat(1))}).str() == "(1 + u)");
  CHECK(drinfeld_from_pairs_gl2({pr(qp(2), QRat(1))}).str() == "(1 + u)(1 + q^2 u)");
  CHECK(drinfeld_from_pairs_gl2({pr(q(), q())}).str() == "1");
  CHECK(drinfeld_from_pairs_gl2({}).str() == "1");

  auto p2 = drinfeld_eval_glN({1, 0});
  REQUIRE(p2.size() == 1);
  CHECK(p2[0].str() == "(1 + u)");
  auto p3 = drinfeld_eval_glN({2, 1, 0});
  REQUIRE(p3.size() == 2);
  CHECK(p3[0].str() == "(1 + q^2 u)");
  CHECK(p3[1].str() == "(1 + u)");
  CHECK(drinfeld_eval_glN({0, 0})[0].str() == "1");
  CHECK_THROWS_AS(drinfeld_eval_glN({0, 1}), Error);
}

TEST_CASE("gl2 Drinfeld polynomial satisfies the highest weight ratio identity", "[classify]") {
  const int cap = 8;
  std::mt19937 rng(20240611);
  std::uniform_int_distribution<int> b_dist(-2, 2), m_dist(0, 3), k_dist(1, 3), s_dist(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<PairParam> pairs;
    int sign = 1;
    std::vector<std::pair<QRat, QRat>> nu1, nu2;
    for (int k = k_dist(rng); k > 0; --k) {
      const int s = s_dist(rng) ? 1 : -1;
      const int bsign = s_dist(rng) ? 1 : -1;
      const QRat beta = qp(b_dist(rng)) * QRat(bsign);
      const QRat alpha = beta * qp(m_dist(rng)) * QRat(s);
      pairs.push_back(pr(alpha, beta));
      sign *= s;
      nu1.emplace_back(alpha, alpha.inv());
      nu2.emplace_back(beta, beta.inv());
    }
    const UPoly P = drinfeld_from_pairs_gl2(pairs);
    const USeries lhs = linear_series(nu1, Dir::neg, cap) * series_invert(linear_series(nu2, Dir::neg, cap));
    const USeries rhs = drinfeld_ratio_neg(P, cap).scaled(qp(-P.degree()) * QRat(sign));
    INFO("trial " << trial << " P = " << P.str());
    CHECK(series_equal(lhs, rhs));
  }
}

TEST_CASE("symplectic Drinfeld polynomials: closed forms", "[classify]") {
  UPoly p = drinfeld_sp2_from_pairs({pr(q(), QRat(1))});
  CHECK(p.str() == "(1 + q^-2 u)(1 + u)");
  CHECK(symmetry_check(p));
  CHECK(drinfeld_sp2_from_pairs({}).str() == "1");
  for (const PairParam& a : grid_factors(2))
    for (const PairParam& b : grid_factors(2)) CHECK(symmetry_check(drinfeld_sp2_from_pairs({a, b})));

  DrinfeldResult r1 = drinfeld_sp2n_eval({1}, {QRat(1)});
  CHECK(r1.polys[0].str() == "(1 + q^-3 u)(1 + q u)");
  CHECK(r1.gauge[0] == qp(-1));
  CHECK(drinfeld_sp2n_eval({0}, {QRat(1)}).polys[0].str() == "1");

  DrinfeldResult r2 = drinfeld_sp2n_eval({1, 2}, {QRat(1), QRat(1)});
  REQUIRE(r2.polys.size() == 2);
  CHECK(r2.polys[0].str() == "(1 + q^-3 u)(1 + q u)");
  CHECK(r2.polys[1].str() == "(1 + q^-5 u)");
  CHECK(r2.gauge[1] == qp(-2));
  DrinfeldResult r3 = drinfeld_sp2n_eval({0, 2}, {QRat(1), q()});
  CHECK(r3.polys[0].str() == "1");
  CHECK(r3.polys[1].str() == "(1 + q^-5 u)(1 + q^-3 u)");
  CHECK(r3.gauge[1] == qp(-3));
  CHECK_THROWS_AS(drinfeld_sp2n_eval({2, 1}, {QRat(1), QRat(1)}), Error);

  nlohmann::json j = drinfeld_to_json(r2);
  CHECK(j["polys"][1] == "(1 + q^-5 u)");
  CHECK(j["gauge"].size() == 2);
}

TEST_CASE("factored rational functions", "[classify]") {
  FactoredRational f = FactoredRational::linear_inv(q(), qp(-1));  // q + q^-1 u^-1 = q^-1 u^-1 (1 + q^2 u)
  CHECK(f.shift == -1);
  CHECK(f.scale == qp(-1));
  CHECK(f.at_infinity() == q());
  CHECK(f.reflected().reflected() == f);
  CHECK((f / f) == FactoredRational::constant(QRat(1)));
  const int cap = 6;
  CHECK(series_equal(f.expand(Dir::neg, cap), linear_series({{q(), qp(-1)}}, Dir::neg, cap)));
  CHECK(series_equal(f.reflected().expand(Dir::pos, cap), linear_series({{q(), qp(-1)}}, Dir::pos, cap)));

  // (1 + q u)(1 - q^2 u) / (1 + u) from its series
  UCoeffs num = ucoeffs_mul({QRat(1), q()}, {QRat(1), -qp(2)});
  USeries s = ratio_expand(num, {QRat(1), QRat(1)}, Dir::pos, 9);
  auto g = factor_series(s, 2);
  REQUIRE(g);
  CHECK(g->factors.at(q()) == 1);
  CHECK(g->factors.at(-qp(2)) == 1);
  CHECK(g->factors.at(QRat(1)) == -1);

  auto h = factor_polynomial({QRat(2), QRat(2) * (q() + qp(-1)), QRat(2)});  // 2 (1 + q u)(1 + q^-1 u)
  REQUIRE(h);
  CHECK(h->scale == QRat(2));
  CHECK(!factor_polynomial({QRat(1), QRat(1), QRat(1)}));  // 1 + u + u^2 has no signed q-power roots
}

TEST_CASE("Drinfeld extraction", "[classify]") {
  const UPoly P = UPoly({q(), qp(-3), QRat(1)});
  auto ex = drinfeld_extract(shift_ratio(P).scaled(qp(5)));
  REQUIRE(ex);
  CHECK(ex->first == P);
  CHECK(ex->second == qp(5));
  // (1 + u)/(1 + q^2 u) would need a negative multiplicity
  CHECK_FALSE(drinfeld_extract(FactoredRational::linear(QRat(1), QRat(1)) / FactoredRational::linear(QRat(1), qp(2))));
  CHECK_FALSE(drinfeld_extract(FactoredRational::linear(QRat(1), q()) / FactoredRational::linear(QRat(1), QRat(1))));
  CHECK_FALSE(drinfeld_extract(FactoredRational::linear_inv(QRat(1), QRat(1))));
}

TEST_CASE("gl classification of tensor products", "[classify]") {
  const std::vector<std::vector<PairParam>> lists{
      {pr(q(), QRat(1))}, {pr(qp(2), QRat(1)), pr(-qp(3), q())}, {pr(QRat(1), QRat(1))}, {pr(-qp(2), qp(-1))}};
  for (const auto& pairs : lists) {
    const DrinfeldResult r = fd(classify_glN(gl2_tensor_hw(pairs)));
    CHECK(r.polys[0] == drinfeld_from_pairs_gl2(pairs));
    int sign = 1;
    for (const PairParam& p : pairs) sign *= signed_q_power(p.alpha / p.beta)->first;
    CHECK(r.gauge[0] == QRat(1));
    CHECK(r.gauge[1] == QRat(sign));
  }
  // same answer from the series of the module itself
  const std::vector<PairParam> pairs{pr(qp(2), QRat(1)), pr(-qp(3), q())};
  HighestWeightData hw = highest_weight_of(gl2_tensor(pairs, 9));
  const DrinfeldResult r = fd(classify_glN_series(hw.first, hw.second, 2));
  CHECK(r.polys[0] == drinfeld_from_pairs_gl2(pairs));

  // nubar ratio with the wrong sign
  FactoredHW bad = gl2_tensor_hw({pr(q(), QRat(1))});
  bad.second[0] = bad.second[0].scaled(QRat(-1));
  CHECK(std::holds_alternative<NotFD>(classify_glN(bad)));
  // U_q(gl^_N) needs the constant to be a sign; the extended algebra does not
  FactoredHW scaled = gl2_tensor_hw({pr(q(), QRat(1))});
  scaled.first[0] = scaled.first[0].scaled(QRat(2));
  scaled.second[0] = scaled.second[0].scaled(QRat(2));
  CHECK(std::holds_alternative<NotFD>(classify_glN(scaled)));
  const DrinfeldResult ext = fd(classify_glN(scaled, true));
  CHECK(ext.gauge[1] == QRat(2));
}

TEST_CASE("glN classification of evaluation modules", "[classify]") {
  // eval L(q^m1, ..., q^mN): nu_i(u) = q^mi + q^-mi u^-1, nubar_i(u) = q^-mi + q^mi u
  const std::vector<int> m{3, 1, 1, 0};
  FactoredHW hw;
  for (int mi : m) {
    hw.first.push_back(FactoredRational::linear_inv(qp(mi), qp(-mi)));
    hw.second.push_back(FactoredRational::linear(qp(-mi), qp(mi)));
  }
  const DrinfeldResult r = fd(classify_glN(hw));
  const std::vector<UPoly> expect = drinfeld_eval_glN(m);
  REQUIRE(r.polys.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(r.polys[i] == expect[i]);
}

TEST_CASE("sp2 classification of twisted evaluation modules", "[classify]") {
  for (const QRat& mu : {QRat(1), -q(), qp(2)})
    for (int p = 0; p <= 3; ++p) {
      INFO("mu=" << mu.str() << " p=" << p);
      const QRat mup = -qp(2 * p + 1) * mu;
      const DrinfeldResult expect = drinfeld_sp2n_eval({p}, {mu});
      const DrinfeldResult a = fd(classify_sp2n(sp2_eval_factored(mu, mup)));
      CHECK(a.polys[0] == expect.polys[0]);
      CHECK(a.gauge[0] == expect.gauge[0]);
      if (p > 2) continue;
      HighestWeightData hw = sp2_eval_hw(mu, mup, 8);
      const DrinfeldResult b = fd(classify_sp2n_series(hw.first, hw.second, 3));
      CHECK(b.polys[0] == expect.polys[0]);
      CHECK(b.gauge[0] == expect.gauge[0]);
    }
  // the trivial highest weight
  FactoredHW triv{{FactoredRational::constant(QRat(1))}, {FactoredRational::constant(QRat(1))}};
  const DrinfeldResult t = fd(classify_sp2n(triv));
  CHECK(t.polys[0].degree() == 0);
  CHECK(t.gauge[0] == QRat(1));
}

TEST_CASE("sp4 classification recovers forward-generated data", "[classify]") {
  const QRat phi1 = qp(-1), phi2 = qp(-2) * QRat(3);
  const UPoly P2 = UPoly::string(qp(-5), 2, 2);
  FactoredHW hw = sp2_eval_factored(QRat(1), -qp(3));
  // phi1 mu1 / (phi2 mu2) = q^-deg P2 P2(uq^2)/P2(u), same for mubar
  const FactoredRational r = shift_ratio(P2).scaled(qp(-P2.degree()) * phi2 / phi1);
  hw.first.push_back(hw.first[0] / r);
  hw.second.push_back(hw.second[0] / r);
  const DrinfeldResult d = fd(classify_sp2n(hw));
  REQUIRE(d.polys.size() == 2);
  CHECK(d.polys[0].str() == "(1 + q^-3 u)(1 + q u)");
  CHECK(d.polys[1] == P2);
  CHECK(d.gauge[0] == phi1);
  CHECK(d.gauge[1] == phi2);

  FactoredHW mismatch = hw;
  mismatch.second[1] = mismatch.second[1] * FactoredRational::linear(QRat(1), q()) / FactoredRational::linear(QRat(1), qp(3));
  CHECK(std::holds_alternative<NotFD>(classify_sp2n(mismatch)));
}

TEST_CASE("gauge covariance of the symplectic classification", "[classify]") {
  const FactoredHW base = sp2_eval_factored(QRat(1), -qp(5));
  const DrinfeldResult r0 = fd(classify_sp2n(base));
  // mu(u) -> g(u) mu(u), mubar(u) -> g(u^-1) mubar(u)
  for (const FactoredRational& g : {FactoredRational::linear_inv(QRat(1), qp(2)),
                                    FactoredRational::linear_inv(qp(3), -QRat(1)) * FactoredRational::linear_inv(QRat(1), q())}) {
    FactoredHW hw = base;
    hw.first[0] = g * hw.first[0];
    hw.second[0] = g.reflected() * hw.second[0];
    const DrinfeldResult r = fd(classify_sp2n(hw));
    CHECK(r.polys[0] == r0.polys[0]);
    CHECK(r.gauge[0] == r0.gauge[0] / g.at_infinity());
  }
  // constants only move phi
  FactoredHW c = base;
  c.first[0] = c.first[0].scaled(qp(4));
  c.second[0] = c.second[0].scaled(qp(4));
  const DrinfeldResult rc = fd(classify_sp2n(c));
  CHECK(rc.polys[0] == r0.polys[0]);
  CHECK(rc.gauge[0] == r0.gauge[0] * qp(-4));

  // the same through the module: twisting S(u) by 1 + q^2 u^-1
  ModuleRep W = twisted_eval(std::get<ModuleRep>(uqsp2_module(QRat(1), -qp(3))), 10);
  ModuleRep Wt = W;
  for (auto& [gen, a] : Wt.action) {
    if (gen.level == 0) continue;
    GenId prev = gen;
    --prev.level;
    a += W.op(prev).scaled(qp(2));
  }
  HighestWeightData hw = highest_weight_of(Wt);
  const DrinfeldResult rm = fd(classify_sp2n_series(hw.first, hw.second, 4));
  CHECK(rm.polys[0].str() == "(1 + q^-3 u)(1 + q u)");
}

TEST_CASE("finite-dimensionality criterion for V(mu; mu')", "[classify]") {
  FdcoResult a = fdco_check({QRat(1)}, {-qp(3)});
  CHECK(a.finite);
  REQUIRE(a.p[0]);
  CHECK(*a.p[0] == 1);
  CHECK_FALSE(fdco_check({QRat(1)}, {q()}).finite);
  CHECK_FALSE(fdco_check({QRat(1)}, {qp(3)}).finite);
  CHECK_FALSE(fdco_check({QRat(1)}, {-qp(2)}).finite);
  CHECK_FALSE(fdco_check({QRat(1)}, {-qp(-1)}).finite);
  FdcoResult nm = fdco_check({QRat(1), QRat(1)}, {-qp(3), -q()});
  CHECK_FALSE(nm.finite);
  CHECK(*nm.p[0] == 1);
  CHECK(*nm.p[1] == 0);
  FdcoResult ok = fdco_check({q(), -QRat(1)}, {-qp(2), qp(5)});
  CHECK(ok.finite);
  CHECK(*ok.p[0] == 0);
  CHECK(*ok.p[1] == 2);
  CHECK_THROWS_AS(fdco_check({QRat(1)}, {QRat(0)}), Error);
  // agrees with the module builder
  for (int e = -2; e <= 6; ++e)
    for (int s : {1, -1}) {
      const QRat mup = qp(e) * QRat(s);
      const bool finite = std::holds_alternative<ModuleRep>(uqsp2_module(QRat(1), mup, 12));
      CHECK(fdco_check({QRat(1)}, {mup}).finite == finite);
    }
}

TEST_CASE("symplectic negatives are rejected", "[classify]") {
  // mubar(u^-1)/mu(u) = q^-1 (1 + q^2 u)/(1 + u): P = 1 + u has odd degree
  FactoredHW odd{{FactoredRational::constant(QRat(1))},
                 {(shift_ratio(UPoly({QRat(1)})).scaled(qp(-1))).reflected()}};
  CHECK(std::holds_alternative<NotFD>(classify_sp2n(odd)));
  // even degree but not symmetric
  const UPoly asym({QRat(1), qp(2)});
  REQUIRE_FALSE(symmetry_check(asym));
  FactoredHW bad{{FactoredRational::constant(QRat(1))},
                 {(shift_ratio(asym).scaled(qp(-2))).reflected()}};
  CHECK(std::holds_alternative<NotFD>(classify_sp2n(bad)));
  // wrong constant
  const UPoly sym({q(), qp(-3)});
  FactoredHW off{{FactoredRational::constant(QRat(1))}, {(shift_ratio(sym).scaled(qp(-1))).reflected()}};
  CHECK(std::holds_alternative<NotFD>(classify_sp2n(off)));
  FactoredHW good{{FactoredRational::constant(QRat(1))}, {(shift_ratio(sym).scaled(qp(-2))).reflected()}};
  CHECK(fd(classify_sp2n(good)).polys[0] == sym);
  // unfactorable series input
  USeries s = USeries::from_coeffs(Dir::neg, {QRat(1), QRat(1), QRat(3), QRat(7), QRat(1), QRat(2), QRat(5)});
  CHECK_THROWS_WITH(classify_sp2n_series({s}, {s}, 2), Catch::Matchers::ContainsSubstring("factored form required"));
}

TEST_CASE("ratio conditions", "[classify]") {
  const int cap = 6;
  // eval L(q, 1): nu1/nu2 = (q + q^-1 u^-1)/(1 + u^-1) = q^-1 (1 + q^2 u)/(1 + u)
  HighestWeightData hw = highest_weight_of(gl2_tensor({pr(q(), QRat(1))}, cap));
  auto r = ratio_condition_affine(hw.first[0], hw.first[1], hw.second[0], hw.second[1], 1);
  REQUIRE(r);
  CHECK(r->scale == qp(-1));
  CHECK(r->Q == UCoeffs{QRat(1), qp(2)});
  CHECK(r->R == UCoeffs{QRat(1), QRat(1)});
  CHECK_FALSE(ratio_condition_affine(hw.first[0], hw.first[1], -hw.second[0], hw.second[1], 1));
  CHECK_FALSE(ratio_condition_affine(hw.first[0], hw.first[1], hw.second[1], hw.second[0], 1));

  // twisted: mubar(u^-1) u^-d Q(u) = mu(u) Q(u^-1), checked as series in u^-1
  for (int p = 0; p <= 2; ++p) {
    INFO("p=" << p);
    HighestWeightData h = sp2_eval_hw(QRat(1), -qp(2 * p + 1), 9);
    auto Q = ratio_condition_twisted(h.first[0], h.second[0], 3);
    REQUIRE(Q);
    const int d = static_cast<int>(Q->size()) - 1;
    CHECK(d % 2 == 0);
    if (p == 1) CHECK(d == 2);
    UCoeffs rev(Q->rbegin(), Q->rend());
    USeries mubar_refl = h.second[0];
    mubar_refl.dir = Dir::neg;
    const USeries lhs = mubar_refl * USeries::from_coeffs(Dir::neg, rev).truncated(9);
    const USeries rhs = h.first[0] * USeries::from_coeffs(Dir::neg, *Q).truncated(9);
    CHECK(series_equal(lhs, rhs));
  }
  // odd-degree ratio is rejected
  USeries mu = FactoredRational::constant(QRat(1)).expand(Dir::neg, 7);
  USeries mubar = (shift_ratio(UPoly({QRat(1)})).scaled(qp(-1))).reflected().expand(Dir::pos, 7);
  CHECK_FALSE(ratio_condition_twisted(mu, mubar, 3));
}
