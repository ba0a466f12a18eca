#include "qyw/rttcore.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace qyw {

namespace {

QRat qdiff() { return QRat::q() - QRat::q_pow(-1); }  // q - q^{-1}

int slot_index(int i, int j, int N) { return (i - 1) * N + (j - 1); }

// Adds c * E_ij (x) E_kl (1-based) to an N^2 x N^2 matrix.
void add_tensor_unit(Mat& m, int N, int i, int j, int k, int l, const QRat& c) {
  m.add(slot_index(i, k, N), slot_index(j, l, N), c);
}
void add_tensor_unit(MatUV& m, int N, int i, int j, int k, int l, const UVPoly& c) {
  m.add(slot_index(i, k, N), slot_index(j, l, N), c);
}

void require_n(int N, int lo, const char* what) {
  if (N < lo) throw Error(std::string(what) + ": dimension too small");
}

}  // namespace

Mat r_const(int N) {
  require_n(N, 2, "r_const");
  Mat R(N * N, N * N);
  for (int i = 1; i <= N; ++i)
    for (int j = 1; j <= N; ++j) {
      if (i == j) add_tensor_unit(R, N, i, i, i, i, QRat::q());
      else add_tensor_unit(R, N, i, i, j, j, QRat(1));
      if (i < j) add_tensor_unit(R, N, i, j, j, i, qdiff());
    }
  return R;
}

Mat r_const_t1(int N) {
  require_n(N, 2, "r_const_t1");
  Mat R(N * N, N * N);
  for (int i = 1; i <= N; ++i)
    for (int j = 1; j <= N; ++j) {
      if (i == j) add_tensor_unit(R, N, i, i, i, i, QRat::q());
      else add_tensor_unit(R, N, i, i, j, j, QRat(1));
      if (i < j) add_tensor_unit(R, N, j, i, j, i, qdiff());
    }
  return R;
}

namespace {

MatUV trig(int N, bool t1) {
  const QRat qi = QRat::q_pow(-1), q = QRat::q();
  MatUV R(N * N, N * N);
  for (int i = 1; i <= N; ++i)
    for (int j = 1; j <= N; ++j) {
      if (i == j) {
        add_tensor_unit(R, N, i, i, i, i, UVPoly::u(qi) - UVPoly::v(q));
        continue;
      }
      add_tensor_unit(R, N, i, i, j, j, UVPoly::u() - UVPoly::v());
      UVPoly c = i > j ? UVPoly::u(qi - q) : UVPoly::v(qi - q);
      if (t1) add_tensor_unit(R, N, j, i, j, i, c);
      else add_tensor_unit(R, N, i, j, j, i, c);
    }
  return R;
}

}  // namespace

MatUV r_trig(int N) {
  require_n(N, 2, "r_trig");
  return trig(N, false);
}

MatUV r_trig_t1(int N) {
  require_n(N, 2, "r_trig_t1");
  return trig(N, true);
}

Mat g_matrix(int n) {
  if (n < 1) throw Error("g_matrix: n >= 1 required");
  Mat G(2 * n, 2 * n);
  for (int k = 1; k <= n; ++k) {
    G.set(2 * k - 2, 2 * k - 1, QRat::q());
    G.set(2 * k - 1, 2 * k - 2, QRat(-1));
  }
  return G;
}

Mat ybe_residual(const Mat& R, int N) {
  Mat R12 = place_on_legs(R, 1, 2, 3, N);
  Mat R13 = place_on_legs(R, 1, 3, 3, N);
  Mat R23 = place_on_legs(R, 2, 3, 3, N);
  return R12 * R13 * R23 - R23 * R13 * R12;
}

Mat ybe_check(int N) {
  if (N < 2 || N > 4) throw Error("ybe_check: N must be 2, 3 or 4");
  return ybe_residual(r_const(N), N);
}

MatUV trig_inverse_check(int N) {
  if (N < 2 || N > 3) throw Error("trig_inverse_check: N must be 2 or 3");
  MatUV R = r_trig(N);
  const QRat q = QRat::q(), qi = QRat::q_pow(-1);
  UVPoly scalar = (UVPoly::u(q) - UVPoly::v(qi)) * (UVPoly::u(qi) - UVPoly::v(q));
  return R * R.q_inverted() - MatUV::from(Mat::identity(N * N)).scaled(scalar);
}

MatUV trig_swap_check(int N) {
  if (N < 2 || N > 3) throw Error("trig_swap_check: N must be 2 or 3");
  MatUV P = MatUV::from(Mat::swap(N));
  MatUV rhs = P * r_trig(N).q_inverted().swapped_uv() * P;
  return r_trig(N) - rhs.scaled(UVPoly(QRat(-1)));
}

int varsigma(int i) {
  if (i < 1) throw Error("varsigma: index must be positive");
  return i % 2 == 1 ? i : -i + 1;
}

Rational elem_sym_det(const std::vector<Rational>& points) {
  const int l = static_cast<int>(points.size());
  if (l == 0) return Rational(1);
  // e_r of the points with x_k skipped, by the usual product recurrence.
  std::vector<std::vector<Rational>> M(static_cast<std::size_t>(l), std::vector<Rational>(static_cast<std::size_t>(l)));
  for (int k = 0; k < l; ++k) {
    std::vector<Rational> e(static_cast<std::size_t>(l), Rational(0));
    e[0] = 1;
    int used = 0;
    for (int i = 0; i < l; ++i) {
      if (i == k) continue;
      ++used;
      for (int r = used; r >= 1; --r) e[static_cast<std::size_t>(r)] += points[static_cast<std::size_t>(i)] * e[static_cast<std::size_t>(r - 1)];
    }
    for (int r = 0; r < l; ++r) M[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] = e[static_cast<std::size_t>(r)];
  }
  Rational det = 1;
  for (int c = 0; c < l; ++c) {
    int p = -1;
    for (int r = c; r < l; ++r)
      if (M[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] != 0) {
        p = r;
        break;
      }
    if (p < 0) return Rational(0);
    if (p != c) {
      std::swap(M[static_cast<std::size_t>(p)], M[static_cast<std::size_t>(c)]);
      det = -det;
    }
    const Rational piv = M[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
    det *= piv;
    for (int r = c + 1; r < l; ++r) {
      Rational f = M[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] / piv;
      if (f == 0) continue;
      for (int j = c; j < l; ++j)
        M[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] -= f * M[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)];
    }
  }
  return det;
}

// ---------------------------------------------------------------------------

std::string genid_str(const GenId& g) {
  static const char* names[] = {"t", "tb", "s", "sb"};
  std::ostringstream os;
  os << names[static_cast<int>(g.family)] << '[' << g.row << ',' << g.col << ';' << g.level << ']';
  return os.str();
}

Word word_mul(const Word& a, const Word& b) {
  Word w = a;
  w.reserve(a.size() + b.size());
  for (const Power& p : b) {
    if (!w.empty() && w.back().gen == p.gen) {
      w.back().exp += p.exp;
      if (w.back().exp == 0) w.pop_back();
    } else if (p.exp != 0) {
      w.push_back(p);
    }
  }
  return w;
}

int word_length(const Word& w) {
  int n = 0;
  for (const Power& p : w) n += p.exp < 0 ? -p.exp : p.exp;
  return n;
}

std::string word_str(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += '*';
    s += genid_str(w[i].gen);
    if (w[i].exp != 1) s += '^' + std::to_string(w[i].exp);
  }
  return s;
}

NCPoly::NCPoly(const QRat& c) {
  if (!c.is_zero()) m_.emplace(Word{}, c);
}

NCPoly NCPoly::word(Word w, const QRat& c) {
  NCPoly p;
  if (!c.is_zero()) p.m_.emplace(std::move(w), c);
  return p;
}

QRat NCPoly::coeff(const Word& w) const {
  auto it = m_.find(w);
  return it == m_.end() ? QRat(0) : it->second;
}

bool NCPoly::is_scalar(QRat* c) const {
  if (m_.empty()) {
    if (c) *c = QRat(0);
    return true;
  }
  if (m_.size() == 1 && m_.begin()->first.empty()) {
    if (c) *c = m_.begin()->second;
    return true;
  }
  return false;
}

void NCPoly::add_term(const Word& w, const QRat& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = m_.emplace(w, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) m_.erase(it);
  }
}

NCPoly NCPoly::operator-() const {
  NCPoly r = *this;
  for (auto& [w, c] : r.m_) c = -c;
  return r;
}

NCPoly& NCPoly::operator+=(const NCPoly& o) {
  for (const auto& [w, c] : o.m_) add_term(w, c);
  return *this;
}

NCPoly& NCPoly::operator-=(const NCPoly& o) {
  for (const auto& [w, c] : o.m_) add_term(w, -c);
  return *this;
}

NCPoly operator*(const NCPoly& a, const NCPoly& b) {
  NCPoly r;
  for (const auto& [wa, ca] : a.m_)
    for (const auto& [wb, cb] : b.m_) r.add_term(word_mul(wa, wb), ca * cb);
  return r;
}

NCPoly NCPoly::scaled(const QRat& c) const {
  if (c.is_zero()) return {};
  NCPoly r = *this;
  for (auto& [w, x] : r.m_) x *= c;
  return r;
}

namespace {

std::string coeff_prefix(const QRat& c) {
  if (c.is_one()) return "";
  if (c == QRat(-1)) return "-";
  std::string s = c.str();
  bool plain_integer = c.is_laurent() && c.num().is_constant() && c.num().coeff(0).get_den() == 1;
  if (plain_integer) return s + "*";
  return "(" + s + ")*";
}

}  // namespace

std::string ncpoly_render(const NCPoly& p, const std::function<std::string(const Word&)>& ws,
                          const std::function<bool(const Word&, const Word&)>& less) {
  if (p.is_zero()) return "0";
  std::vector<const NCPoly::Map::value_type*> items;
  for (const auto& kv : p.terms()) items.push_back(&kv);
  std::stable_sort(items.begin(), items.end(), [&](auto* x, auto* y) { return less(y->first, x->first); });
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& [w, c] = *items[i];
    if (i) out += " + ";
    if (w.empty()) out += c.str();
    else out += coeff_prefix(c) + ws(w);
  }
  return out;
}

std::string NCPoly::str() const {
  return ncpoly_render(*this, word_str, [](const Word& a, const Word& b) { return a < b; });
}

// ---------------------------------------------------------------------------

int series_level_for_exponent(Family f, int exponent) {
  return (f == Family::t || f == Family::s) ? -exponent : exponent;
}

QuadRelation extract_coefficient(const SeriesRelation& rel, int alpha, int beta) {
  QuadRelation out;
  for (const SeriesTerm& term : rel.terms) {
    for (const auto& [key, c] : term.coeff.terms()) {
      auto level_of = [&](const SeriesFactor& f) {
        int e = f.var == Var::u ? alpha - key.first : beta - key.second;
        return series_level_for_exponent(f.family, e);
      };
      int r1 = level_of(term.first), r2 = level_of(term.second);
      if (r1 < 0 || r2 < 0) continue;
      out.push_back(CoeffTerm{c, GenId{term.first.family, term.first.row, term.first.col, r1},
                              GenId{term.second.family, term.second.row, term.second.col, r2}});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// kappa_l

TensorPoly tensor_mul(const TensorPoly& a, const TensorPoly& b) {
  TensorPoly r;
  for (const auto& [wa, ca] : a)
    for (const auto& [wb, cb] : b) {
      std::vector<Word> w(wa.size());
      for (std::size_t k = 0; k < wa.size(); ++k) w[k] = word_mul(wa[k], wb[k]);
      QRat c = ca * cb;
      auto [it, fresh] = r.emplace(std::move(w), c);
      if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) r.erase(it);
      }
    }
  return r;
}

TensorPoly kappa_l(const GenId& g, int l, int N) {
  if (l < 1) throw Error("kappa_l: l >= 1 required");
  if (g.family != Family::t && g.family != Family::tbar) throw Error("kappa_l: affine generator expected");
  if (g.row < 1 || g.row > N || g.col < 1 || g.col > N || g.level < 0) throw Error("kappa_l: index out of range");
  const int r = g.level;
  TensorPoly out;
  if (r > l) return out;
  const bool main_bar = g.family == Family::tbar;
  // Finite U_q(gl_N) generators: t_ab (a >= b), tbar_ab (a <= b), tbar_aa = t_aa^{-1}.
  auto factor = [&](bool bar, int a, int b) -> std::optional<Word> {
    if (!bar && a < b) return std::nullopt;
    if (bar && a > b) return std::nullopt;
    if (bar && a == b) return Word{Power{GenId{Family::t, a, a, 0}, -1}};
    return Word{Power{GenId{bar ? Family::tbar : Family::t, a, b, 0}, 1}};
  };
  std::vector<int> chain(static_cast<std::size_t>(l + 1));
  std::vector<bool> flipped(static_cast<std::size_t>(l), false);
  std::function<void(int, int)> choose_positions = [&](int start, int left) {
    if (left == 0) {
      chain[0] = g.row;
      chain[static_cast<std::size_t>(l)] = g.col;
      std::function<void(int)> walk = [&](int k) {
        if (k == l) {
          std::vector<Word> w(static_cast<std::size_t>(l));
          for (int p = 0; p < l; ++p) {
            bool bar = main_bar != flipped[static_cast<std::size_t>(p)];
            auto f = factor(bar, chain[static_cast<std::size_t>(p)], chain[static_cast<std::size_t>(p + 1)]);
            if (!f) return;
            w[static_cast<std::size_t>(p)] = *f;
          }
          out[w] += QRat(1);
          return;
        }
        if (k == l - 1) {
          walk(l);
          return;
        }
        for (int i = 1; i <= N; ++i) {
          chain[static_cast<std::size_t>(k + 1)] = i;
          walk(k + 1);
        }
      };
      walk(0);
      return;
    }
    for (int p = start; p <= l - left; ++p) {
      flipped[static_cast<std::size_t>(p)] = true;
      choose_positions(p + 1, left - 1);
      flipped[static_cast<std::size_t>(p)] = false;
    }
  };
  choose_positions(0, r);
  for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

TensorPoly tensor_straighten(const TensorPoly& x, const Presentation& finite) {
  TensorPoly out;
  for (const auto& [tw, c] : x) {
    std::vector<std::pair<std::vector<Word>, QRat>> partial{{{}, c}};
    for (const Word& w : tw) {
      NCPoly nf = finite.straighten(NCPoly::word(w));
      std::vector<std::pair<std::vector<Word>, QRat>> next;
      for (const auto& [pw, pc] : partial)
        for (const auto& [fw, fc] : nf.terms()) {
          auto v = pw;
          v.push_back(fw);
          next.emplace_back(std::move(v), pc * fc);
        }
      partial = std::move(next);
    }
    for (auto& [w, cc] : partial) {
      auto [it, fresh] = out.emplace(w, cc);
      if (!fresh) {
        it->second += cc;
        if (it->second.is_zero()) out.erase(it);
      }
    }
  }
  return out;
}

KappaReport kappa_independence_check(int N, int m, int word_cap, int max_monomials) {
  if (N < 2 || m < 0 || word_cap < 0) throw Error("kappa_independence_check: invalid arguments");
  auto aff = Presentation::make("uqaff:" + std::to_string(N));
  auto fin = Presentation::make("uqgl:" + std::to_string(N));
  const int l = 2 * m + 1;

  // Letters in slot order; a toral generator contributes both signs.
  std::vector<Power> letters;
  for (const GenId& g : aff->generators(m)) {
    letters.push_back(Power{g, 1});
    if (aff->is_invertible(g)) letters.push_back(Power{g, -1});
  }
  std::stable_sort(letters.begin(), letters.end(),
                   [&](const Power& a, const Power& b) { return aff->slot(a.gen) < aff->slot(b.gen); });

  std::vector<Word> monomials;
  std::function<void(std::size_t, Word, int)> grow = [&](std::size_t from, Word w, int len) {
    monomials.push_back(w);
    if (static_cast<int>(monomials.size()) > max_monomials)
      throw Error("kappa_independence_check: monomial count exceeds the configured bound");
    if (len == word_cap) return;
    for (std::size_t i = from; i < letters.size(); ++i) {
      const Power& p = letters[i];
      if (!w.empty() && w.back().gen == p.gen && (w.back().exp > 0) != (p.exp > 0)) continue;
      grow(i, word_mul(w, Word{p}), len + 1);
    }
  };
  grow(0, Word{}, 0);

  auto image_of = [&](const Power& p) {
    // The inverse of t_ii^{(0)} is tbar_ii^{(0)} in the non-extended algebra.
    GenId g = p.gen;
    if (p.exp < 0) g.family = Family::tbar;
    return kappa_l(g, l, N);
  };
  TensorPoly unit;
  unit[std::vector<Word>(static_cast<std::size_t>(l))] = QRat(1);

  std::map<std::vector<Word>, int> column;
  std::vector<TensorPoly> images;
  for (const Word& w : monomials) {
    TensorPoly img = unit;
    for (const Power& p : w) {
      TensorPoly f = image_of(p);
      for (int k = 0; k < std::abs(p.exp); ++k) img = tensor_mul(img, f);
    }
    img = tensor_straighten(img, *fin);
    for (const auto& [tw, c] : img) column.emplace(tw, static_cast<int>(column.size()));
    images.push_back(std::move(img));
  }
  Mat A(static_cast<int>(images.size()), static_cast<int>(std::max<std::size_t>(column.size(), 1)));
  for (std::size_t r = 0; r < images.size(); ++r)
    for (const auto& [tw, c] : images[r]) A.set(static_cast<int>(r), column.at(tw), c);
  KappaReport rep;
  rep.monomials = static_cast<int>(monomials.size());
  rep.rank = rank(A);
  rep.independent = rep.rank == rep.monomials;
  return rep;
}

}  // namespace qyw
