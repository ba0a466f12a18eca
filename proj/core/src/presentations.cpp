// Presentations and the straightening engine.
//
// Rewrite rules are not tabulated by hand.  For each block of quadratic words
// (all words for finite algebras, a fixed level sum for the affine and twisted
// ones) every coefficient instance of the defining relations is split into its
// top-weight part and a lower tail, and the top parts are brought to reduced
// echelon form with columns ordered by the monomial order.  Each pivot row then
// reads "leading word = smaller words".  Construction fails loudly unless the
// leading words are exactly the out-of-order pairs of the PBW order, so every
// rule provably moves toward the ordered monomials.  Letters of invertible
// toral generators (t_ii, s_{i,i+1}) get their inverse rules by conjugation.

#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "qyw/rttcore.hpp"

namespace qyw {

std::string ncpoly_render(const NCPoly& p, const std::function<std::string(const Word&)>& ws,
                          const std::function<bool(const Word&, const Word&)>& less);

namespace {

QRat qp(int e) { return QRat::q_pow(e); }
int d(bool b) { return b ? 1 : 0; }
int kd(int a, int b) { return a == b ? 1 : 0; }

enum class Role { zero, one, gen };

struct Resolved {
  Role role = Role::zero;
  GenId g;
  int sign = 1;  // -1 when the request denotes the inverse of g
};

using LetterKey = std::pair<Power, Power>;

}  // namespace

struct Presentation::Impl {
  std::mutex block_mu;
  std::set<int> blocks_done;

  mutable std::mutex mu;  // guards rules and memo
  std::map<LetterKey, NCPoly> rules;
  std::map<Word, NCPoly> memo[2];

  std::vector<QuadRelation> finite_rel;
  std::vector<SeriesRelation> series_rel;
};

std::shared_ptr<const Presentation> Presentation::make(std::string_view name) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : name) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.size() < 2 || parts.size() > 3) throw Error("unknown algebra '" + std::string(name) + "'");
  static const std::map<std::string, Algebra> ids{{"uqgl", Algebra::uqgl}, {"uqo", Algebra::uqo},
                                                  {"uqsp", Algebra::uqsp}, {"uqaff", Algebra::uqaff},
                                                  {"yqo", Algebra::yqo},   {"yqsp", Algebra::yqsp}};
  auto it = ids.find(parts[0]);
  if (it == ids.end()) throw Error("unknown algebra '" + parts[0] + "'");
  int N = 0;
  try {
    std::size_t used = 0;
    N = std::stoi(parts[1], &used);
    if (used != parts[1].size()) throw Error("bad size");
  } catch (const std::exception&) {
    throw Error("bad algebra size in '" + std::string(name) + "'");
  }
  bool ext = false;
  if (parts.size() == 3) {
    if (parts[2] != "ext") throw Error("unknown algebra option '" + parts[2] + "'");
    if (it->second != Algebra::uqgl && it->second != Algebra::uqaff)
      throw Error("extension is only defined for uqgl and uqaff");
    ext = true;
  }
  return std::make_shared<Presentation>(it->second, N, ext);
}

Presentation::Presentation(Algebra a, int N, bool ext) : alg_(a), n_(N), ext_(ext), impl_(std::make_unique<Impl>()) {
  const bool symplectic = a == Algebra::uqsp || a == Algebra::yqsp;
  if (N < 2) throw Error("presentation size must be at least 2");
  if (symplectic && N % 2 != 0) throw Error("symplectic presentations need an even size");
  if (N > 6) throw Error("presentation size above 6 is not supported");
  if (has_levels()) impl_->series_rel = series_relations();
  else impl_->finite_rel = finite_relations();
}

Presentation::~Presentation() = default;

bool Presentation::has_levels() const {
  return alg_ == Algebra::uqaff || alg_ == Algebra::yqo || alg_ == Algebra::yqsp;
}

std::string Presentation::name() const {
  static const char* names[] = {"uqgl", "uqo", "uqsp", "uqaff", "yqo", "yqsp"};
  return std::string(names[static_cast<int>(alg_)]) + ":" + std::to_string(n_) + (ext_ ? ":ext" : "");
}

namespace {

Resolved resolve(Algebra alg, int N, bool ext, const GenId& g) {
  auto bad = [&](const std::string& why) { return Error("invalid generator " + genid_str(g) + ": " + why); };
  if (g.row < 1 || g.row > N || g.col < 1 || g.col > N) throw bad("index out of range");
  if (g.level < 0) throw bad("negative level");
  const bool levels = alg == Algebra::uqaff || alg == Algebra::yqo || alg == Algebra::yqsp;
  if (!levels && g.level != 0) throw bad("finite algebras have level 0 only");
  const int i = g.row, j = g.col;
  Resolved r{Role::gen, g, 1};
  switch (alg) {
    case Algebra::uqgl:
    case Algebra::uqaff:
      if (g.family == Family::t) {
        if (g.level == 0 && i < j) r.role = Role::zero;
      } else if (g.family == Family::tbar) {
        if (g.level == 0 && i > j) r.role = Role::zero;
        else if (g.level == 0 && i == j && !ext) r = Resolved{Role::gen, GenId{Family::t, i, i, 0}, -1};
      } else {
        throw bad("family not in this algebra");
      }
      return r;
    case Algebra::uqo:
    case Algebra::yqo:
      if (g.family != Family::s) throw bad("family not in this algebra");
      if (g.level == 0 && i < j) r.role = Role::zero;
      else if (g.level == 0 && i == j) r.role = Role::one;
      return r;
    case Algebra::uqsp:
    case Algebra::yqsp:
      if (g.family != Family::s) throw bad("family not in this algebra");
      if (g.level == 0 && i < j && !(j == i + 1 && i % 2 == 1)) r.role = Role::zero;
      return r;
  }
  throw bad("unknown algebra");
}

bool toral(Algebra alg, bool ext, const GenId& g) {
  switch (alg) {
    case Algebra::uqgl:
    case Algebra::uqaff:
      if (g.level != 0 || g.row != g.col) return false;
      return g.family == Family::t || (ext && g.family == Family::tbar);
    case Algebra::uqsp:
    case Algebra::yqsp:
      return g.family == Family::s && g.level == 0 && g.col == g.row + 1 && g.row % 2 == 1;
    default:
      return false;
  }
}

}  // namespace

bool Presentation::is_invertible(const GenId& g) const {
  Resolved r = resolve(alg_, n_, ext_, g);
  return r.role == Role::one || (r.role == Role::gen && toral(alg_, ext_, r.g));
}

NCPoly Presentation::gen(const GenId& g, int exp) const {
  if (resolve(alg_, n_, ext_, g).role == Role::zero)
    throw Error("invalid generator " + genid_str(g) + ": zero in this algebra");
  return value(g, exp);
}

NCPoly Presentation::value(const GenId& g, int exp) const {
  Resolved r = resolve(alg_, n_, ext_, g);
  if (r.role == Role::zero) return NCPoly();
  if (r.role == Role::one || exp == 0) return NCPoly(QRat(1));
  if (exp * r.sign < 0 && !toral(alg_, ext_, r.g)) throw Error("generator " + genid_str(g) + " is not invertible");
  return NCPoly::gen(r.g, exp * r.sign);
}

std::vector<GenId> Presentation::generators(int max_level) const {
  std::vector<GenId> out;
  const int top = has_levels() ? max_level : 0;
  std::vector<Family> fams;
  if (alg_ == Algebra::uqgl || alg_ == Algebra::uqaff) fams = {Family::t, Family::tbar};
  else fams = {Family::s};
  for (int r = 0; r <= top; ++r)
    for (Family f : fams)
      for (int i = 1; i <= n_; ++i)
        for (int j = 1; j <= n_; ++j) {
          GenId g{f, i, j, r};
          Resolved res = resolve(alg_, n_, ext_, g);
          if (res.role == Role::gen && res.sign == 1) out.push_back(g);
        }
  std::sort(out.begin(), out.end(), [&](const GenId& a, const GenId& b) { return slot(a) < slot(b); });
  return out;
}

std::array<int, 4> Presentation::slot(const GenId& g) const {
  const int i = g.row, j = g.col;
  switch (alg_) {
    case Algebra::uqgl:
      if (g.family == Family::t) return i > j ? std::array<int, 4>{0, -j, -i, 0} : std::array<int, 4>{1, i, 0, 0};
      return i == j ? std::array<int, 4>{2, i, 0, 0} : std::array<int, 4>{3, i, j, 0};
    case Algebra::uqo:
      return {i, j, 0, 0};
    case Algebra::uqsp:
    case Algebra::yqsp:
      return {varsigma(i) + varsigma(j), varsigma(i), g.level, 0};
    case Algebra::uqaff:
      return {i, j, g.level, g.family == Family::t ? 0 : 1};
    case Algebra::yqo:
      return {i, j, g.level, 0};
  }
  return {0, 0, 0, 0};
}

std::vector<int> Presentation::weight(const GenId& g) const {
  switch (alg_) {
    case Algebra::uqgl:
      return {1, 0};
    case Algebra::uqo:
    case Algebra::uqsp:
      return {g.row, 0};
    case Algebra::uqaff:
      return {g.level + 1, 0};
    case Algebra::yqo:
    case Algebra::yqsp:
      return {g.level + 1, g.row};
  }
  return {1, 0};
}

std::vector<int> Presentation::word_weight(const Word& w) const {
  std::vector<int> acc{0, 0};
  for (const Power& p : w) {
    auto wt = weight(p.gen);
    int k = p.exp < 0 ? -p.exp : p.exp;
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += k * wt[i];
  }
  return acc;
}

bool Presentation::word_less(const Word& a, const Word& b) const {
  auto wa = word_weight(a), wb = word_weight(b);
  if (wa != wb) return wa < wb;
  int la = word_length(a), lb = word_length(b);
  if (la != lb) return la < lb;
  // Lexicographic on the letter sequence: slot first, positive before inverse.
  std::size_t ia = 0, ib = 0;
  int ra = a.empty() ? 0 : std::abs(a[0].exp), rb = b.empty() ? 0 : std::abs(b[0].exp);
  while (ia < a.size() && ib < b.size()) {
    auto sa = slot(a[ia].gen), sb = slot(b[ib].gen);
    if (sa != sb) return sa < sb;
    int siga = a[ia].exp > 0 ? 0 : 1, sigb = b[ib].exp > 0 ? 0 : 1;
    if (siga != sigb) return siga < sigb;
    if (--ra == 0 && ++ia < a.size()) ra = std::abs(a[ia].exp);
    if (--rb == 0 && ++ib < b.size()) rb = std::abs(b[ib].exp);
  }
  return false;
}

bool Presentation::is_ordered(const Word& w) const {
  for (std::size_t k = 0; k + 1 < w.size(); ++k)
    if (slot(w[k].gen) >= slot(w[k + 1].gen)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Relations.

std::vector<QuadRelation> Presentation::finite_relations() const {
  std::vector<QuadRelation> out;
  const int N = n_;
  const QRat qd = QRat::q() - qp(-1);
  auto T = [](Family f, int i, int j) { return GenId{f, i, j, 0}; };
  if (alg_ == Algebra::uqgl) {
    for (int i = 1; i <= N; ++i)
      for (int a = 1; a <= N; ++a)
        for (int j = 1; j <= N; ++j)
          for (int b = 1; b <= N; ++b) {
            for (Family f : {Family::t, Family::tbar}) {
              QuadRelation r;
              r.push_back({qp(kd(i, j)), T(f, i, a), T(f, j, b)});
              r.push_back({-qp(kd(a, b)), T(f, j, b), T(f, i, a)});
              r.push_back({-qd * QRat(d(b < a) - d(i < j)), T(f, j, a), T(f, i, b)});
              out.push_back(std::move(r));
            }
            QuadRelation m;
            m.push_back({qp(kd(i, j)), T(Family::tbar, i, a), T(Family::t, j, b)});
            m.push_back({-qp(kd(a, b)), T(Family::t, j, b), T(Family::tbar, i, a)});
            m.push_back({-qd * QRat(d(b < a)), T(Family::t, j, a), T(Family::tbar, i, b)});
            m.push_back({qd * QRat(d(i < j)), T(Family::tbar, j, a), T(Family::t, i, b)});
            out.push_back(std::move(m));
          }
  } else if (alg_ == Algebra::uqo || alg_ == Algebra::uqsp) {
    for (int i = 1; i <= N; ++i)
      for (int a = 1; a <= N; ++a)
        for (int j = 1; j <= N; ++j)
          for (int b = 1; b <= N; ++b) {
            auto S = [&](int x, int y) { return T(Family::s, x, y); };
            QuadRelation r;
            r.push_back({qp(kd(a, j) + kd(i, j)), S(i, a), S(j, b)});
            r.push_back({-qp(kd(a, b) + kd(i, b)), S(j, b), S(i, a)});
            r.push_back({-qd * qp(kd(a, i)) * QRat(d(b < a) - d(i < j)), S(j, a), S(i, b)});
            r.push_back({-qd * qp(kd(a, b)) * QRat(d(b < i)), S(j, i), S(b, a)});
            r.push_back({qd * qp(kd(i, j)) * QRat(d(a < j)), S(i, j), S(a, b)});
            r.push_back({-qd * qd * QRat(d(b < a && a < i) - d(a < i && i < j)), S(j, i), S(a, b)});
            out.push_back(std::move(r));
          }
  } else {
    throw Error("finite_relations: " + name() + " is presented by series relations");
  }
  return out;
}

namespace {

SeriesFactor sf(Family f, int i, int j, Var v) { return SeriesFactor{f, i, j, v}; }

// (q^{-delta} x - q^{delta} y) for the ordered variable pair (x, y) = (u, v).
UVPoly lin(int delta) { return UVPoly::u(qp(-delta)) - UVPoly::v(qp(delta)); }

void push(std::vector<SeriesTerm>& out, const UVPoly& c, SeriesFactor a, SeriesFactor b) {
  if (!c.is_zero()) out.push_back(SeriesTerm{c, a, b});
}

// alpha_{IJAB}(x, y) with x the variable of the first factors.
std::vector<SeriesTerm> alpha(int I, int J, int A, int B, Var x, Var y) {
  const QRat qd = qp(-1) - QRat::q();
  std::vector<SeriesTerm> out;
  UVPoly uv = UVPoly::mono(1, 1, QRat(1));
  push(out, UVPoly(qp(-kd(A, J))) - uv * UVPoly(qp(kd(A, J))), sf(Family::s, I, A, x), sf(Family::s, J, B, y));
  push(out, (UVPoly(QRat(d(J < A))) + uv * UVPoly(QRat(d(A < J)))) * UVPoly(qd), sf(Family::s, I, J, x),
       sf(Family::s, A, B, y));
  return out;
}

void push_scaled(std::vector<SeriesTerm>& out, const UVPoly& pre, const std::vector<SeriesTerm>& terms) {
  if (pre.is_zero()) return;
  for (const auto& t : terms) push(out, pre * t.coeff, t.first, t.second);
}

}  // namespace

std::vector<SeriesRelation> Presentation::series_relations() const {
  std::vector<SeriesRelation> out;
  const int N = n_;
  const QRat qd = qp(-1) - QRat::q();
  auto idx = [](int i, int a, int j, int b) {
    return "(" + std::to_string(i) + "," + std::to_string(a) + "," + std::to_string(j) + "," + std::to_string(b) + ")";
  };
  if (alg_ == Algebra::uqaff) {
    struct Fam {
      const char* tag;
      Family F, G;
    };
    const Fam fams[] = {{"tt", Family::t, Family::t},
                        {"bb", Family::tbar, Family::tbar},
                        {"bt", Family::tbar, Family::t},
                        {"tb", Family::t, Family::tbar}};
    for (const Fam& fm : fams)
      for (int i = 1; i <= N; ++i)
        for (int a = 1; a <= N; ++a)
          for (int j = 1; j <= N; ++j)
            for (int b = 1; b <= N; ++b) {
              SeriesRelation rel;
              rel.label = std::string(fm.tag) + idx(i, a, j, b);
              auto& ts = rel.terms;
              push(ts, lin(kd(i, j)), sf(fm.F, i, a, Var::u), sf(fm.G, j, b, Var::v));
              push(ts, (UVPoly::u(QRat(d(i > j))) + UVPoly::v(QRat(d(i < j)))) * UVPoly(qd), sf(fm.F, j, a, Var::u),
                   sf(fm.G, i, b, Var::v));
              push(ts, -lin(kd(a, b)), sf(fm.G, j, b, Var::v), sf(fm.F, i, a, Var::u));
              push(ts, -(UVPoly::u(QRat(d(a < b))) + UVPoly::v(QRat(d(a > b)))) * UVPoly(qd), sf(fm.G, j, a, Var::v),
                   sf(fm.F, i, b, Var::u));
              out.push_back(std::move(rel));
            }
    return out;
  }
  if (alg_ == Algebra::yqo || alg_ == Algebra::yqsp) {
    for (int i = 1; i <= N; ++i)
      for (int j = 1; j <= N; ++j)
        for (int a = 1; a <= N; ++a)
          for (int b = 1; b <= N; ++b) {
            SeriesRelation rel;
            rel.label = "ss" + idx(i, j, a, b);
            auto& ts = rel.terms;
            push_scaled(ts, lin(kd(i, j)), alpha(i, j, a, b, Var::u, Var::v));
            push_scaled(ts, (UVPoly::u(QRat(d(j < i))) + UVPoly::v(QRat(d(i < j)))) * UVPoly(qd),
                        alpha(j, i, a, b, Var::u, Var::v));
            push_scaled(ts, -lin(kd(a, b)), alpha(j, i, b, a, Var::v, Var::u));
            push_scaled(ts, -(UVPoly::u(QRat(d(a < b))) + UVPoly::v(QRat(d(b < a)))) * UVPoly(qd),
                        alpha(j, i, a, b, Var::v, Var::u));
            out.push_back(std::move(rel));
          }
    return out;
  }
  throw Error("series_relations: " + name() + " is a finite presentation");
}

NCPoly Presentation::instance_poly(const QuadRelation& r) const {
  NCPoly out;
  for (const CoeffTerm& t : r) {
    Resolved a = resolve(alg_, n_, ext_, t.first), b = resolve(alg_, n_, ext_, t.second);
    if (a.role == Role::zero || b.role == Role::zero || t.c.is_zero()) continue;
    Word w;
    if (a.role == Role::gen) w = word_mul(w, Word{Power{a.g, a.sign}});
    if (b.role == Role::gen) w = word_mul(w, Word{Power{b.g, b.sign}});
    out.add_term(w, t.c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rule derivation.

namespace {

// Instances of the series relations with at least one quadratic term of level sum L.
std::vector<QuadRelation> level_instances(const std::vector<SeriesRelation>& rels, int L) {
  std::vector<QuadRelation> out;
  auto expo = [](Family f, int r) { return (f == Family::t || f == Family::s) ? -r : r; };
  for (const SeriesRelation& rel : rels) {
    std::set<std::pair<int, int>> points;
    for (const SeriesTerm& t : rel.terms)
      for (const auto& [key, c] : t.coeff.terms())
        for (int r1 = 0; r1 <= L; ++r1) {
          int e1 = expo(t.first.family, r1), e2 = expo(t.second.family, L - r1);
          int eu = t.first.var == Var::u ? e1 : e2, ev = t.first.var == Var::u ? e2 : e1;
          points.emplace(key.first + eu, key.second + ev);
        }
    for (const auto& [al, be] : points) out.push_back(extract_coefficient(rel, al, be));
  }
  return out;
}

}  // namespace

void Presentation::ensure_block(int key) const {
  std::lock_guard<std::mutex> block_lock(impl_->block_mu);
  if (impl_->blocks_done.count(key)) return;

  std::vector<QuadRelation> raw = has_levels() ? level_instances(impl_->series_rel, key) : impl_->finite_rel;

  auto desc = [this](const Word& a, const Word& b) { return word_less(b, a); };
  using Row = std::map<Word, QRat, decltype(desc)>;
  struct Entry {
    Row top;
    NCPoly tail;
  };
  std::map<std::vector<int>, std::vector<Entry>> groups;
  for (const QuadRelation& r : raw) {
    NCPoly p = instance_poly(r);
    if (p.is_zero()) continue;
    std::vector<int> top_w;
    for (const auto& [w, c] : p.terms()) top_w = std::max(top_w, word_weight(w));
    if (has_levels() && top_w[0] != key + 2) continue;
    Entry e{Row(desc), NCPoly()};
    for (const auto& [w, c] : p.terms()) {
      if (word_weight(w) == top_w) e.top.emplace(w, c);
      else e.tail.add_term(w, c);
    }
    groups[top_w].push_back(std::move(e));
  }

  std::map<LetterKey, NCPoly> fresh;
  for (auto& [wt, rows] : groups) {
    std::vector<Entry> piv;
    auto axpy = [](Entry& dst, const Entry& src, const QRat& f) {
      for (const auto& [w, c] : src.top) {
        auto [it, ins] = dst.top.emplace(w, -(c * f));
        if (!ins) {
          it->second -= c * f;
          if (it->second.is_zero()) dst.top.erase(it);
        }
      }
      dst.tail -= src.tail.scaled(f);
    };
    for (Entry& row : rows) {
      for (const Entry& p : piv) {
        auto it = row.top.find(p.top.begin()->first);
        if (it != row.top.end()) {
          QRat f = it->second;
          axpy(row, p, f);
        }
      }
      if (row.top.empty()) continue;
      QRat lead_inv = row.top.begin()->second.inv();
      for (auto& [w, c] : row.top) c *= lead_inv;
      row.tail = row.tail.scaled(lead_inv);
      const Word& lw = row.top.begin()->first;
      for (Entry& p : piv) {
        auto it = p.top.find(lw);
        if (it != p.top.end()) {
          QRat f = it->second;
          axpy(p, row, f);
        }
      }
      piv.push_back(std::move(row));
    }
    for (const Entry& p : piv) {
      const Word& lw = p.top.begin()->first;
      if (word_length(lw) != 2 || lw.size() != 2 || slot(lw[0].gen) <= slot(lw[1].gen))
        throw Error("internal: relation of " + name() + " has leading word " + word_str(lw) +
                    " that is not an out-of-order pair");
      NCPoly rhs = -p.tail;
      for (auto it = std::next(p.top.begin()); it != p.top.end(); ++it) rhs.add_term(it->first, -it->second);
      LetterKey k{Power{lw[0].gen, lw[0].exp}, Power{lw[1].gen, lw[1].exp}};
      fresh.emplace(k, std::move(rhs));
    }
  }

  // Every out-of-order pair of positive letters in this block needs a rule.
  std::vector<GenId> gens = generators(has_levels() ? key : 0);
  for (const GenId& a : gens)
    for (const GenId& b : gens) {
      if (has_levels() && a.level + b.level != key) continue;
      if (slot(a) <= slot(b)) continue;
      if (!fresh.count(LetterKey{Power{a, 1}, Power{b, 1}}))
        throw Error("internal: no straightening rule for " + genid_str(a) + "*" + genid_str(b) + " in " + name());
    }

  {
    std::lock_guard<std::mutex> lock(impl_->mu);
    for (auto& [k, v] : fresh) impl_->rules.emplace(k, std::move(v));
  }
  impl_->blocks_done.insert(key);
}

const NCPoly& Presentation::rule(const Letter& a, const Letter& b) const {
  LetterKey k{Power{a.g, a.sign}, Power{b.g, b.sign}};
  {
    std::lock_guard<std::mutex> lock(impl_->mu);
    auto it = impl_->rules.find(k);
    if (it != impl_->rules.end()) return it->second;
  }
  ensure_block(has_levels() ? a.g.level + b.g.level : 0);
  {
    std::lock_guard<std::mutex> lock(impl_->mu);
    auto it = impl_->rules.find(k);
    if (it != impl_->rules.end()) return it->second;
  }
  // Conjugation rule: from y x = c x y for a toral letter, y^e x^f = c^{ef} x^f y^e.
  if ((a.sign == 1 && b.sign == 1) || (!toral(alg_, ext_, a.g) && !toral(alg_, ext_, b.g)))
    throw Error("internal: no straightening rule for " + genid_str(a.g) + "*" + genid_str(b.g));
  NCPoly base = rule(Letter{a.g, 1}, Letter{b.g, 1});
  Word swapped{Power{b.g, 1}, Power{a.g, 1}};
  if (base.size() != 1 || base.terms().begin()->first != swapped)
    throw Error("internal: toral generator in " + genid_str(a.g) + "*" + genid_str(b.g) + " does not q-commute");
  QRat c = base.terms().begin()->second.pow(a.sign * b.sign);
  NCPoly r = NCPoly::word(Word{Power{b.g, b.sign}, Power{a.g, a.sign}}, c);
  std::lock_guard<std::mutex> lock(impl_->mu);
  return impl_->rules.emplace(k, std::move(r)).first->second;
}

NCPoly Presentation::normal_form(const Word& w, Strategy s) const {
  const int si = s == Strategy::leftmost ? 0 : 1;
  {
    std::lock_guard<std::mutex> lock(impl_->mu);
    auto it = impl_->memo[si].find(w);
    if (it != impl_->memo[si].end()) return it->second;
  }
  int at = -1;
  for (std::size_t k = 0; k + 1 < w.size(); ++k)
    if (slot(w[k].gen) > slot(w[k + 1].gen)) {
      at = static_cast<int>(k);
      if (s == Strategy::leftmost) break;
    }
  NCPoly out;
  if (at < 0) {
    out = NCPoly::word(w);
  } else {
    const auto k = static_cast<std::size_t>(at);
    const int sa = w[k].exp > 0 ? 1 : -1, sb = w[k + 1].exp > 0 ? 1 : -1;
    Word prefix(w.begin(), w.begin() + at);
    prefix = word_mul(prefix, Word{Power{w[k].gen, w[k].exp - sa}});
    Word suffix{Power{w[k + 1].gen, w[k + 1].exp - sb}};
    suffix = word_mul(suffix, Word(w.begin() + at + 2, w.end()));
    NCPoly r = rule(Letter{w[k].gen, sa}, Letter{w[k + 1].gen, sb});
    for (const auto& [rw, c] : r.terms()) out += normal_form(word_mul(word_mul(prefix, rw), suffix), s).scaled(c);
  }
  std::lock_guard<std::mutex> lock(impl_->mu);
  impl_->memo[si].emplace(w, out);
  return out;
}

NCPoly Presentation::canonical(const NCPoly& x) const {
  NCPoly out;
  for (const auto& [w, c] : x.terms()) {
    NCPoly acc(c);
    for (const Power& p : w) acc = acc * gen(p.gen, p.exp);
    out += acc;
  }
  return out;
}

NCPoly Presentation::straighten(const NCPoly& x, Strategy s) const {
  NCPoly out;
  const NCPoly cx = canonical(x);
  for (const auto& [w, c] : cx.terms()) out += normal_form(w, s).scaled(c);
  return out;
}

NCPoly Presentation::straighten(const NCPoly& x, int cap, Strategy s) const {
  for (const auto& [w, c] : x.terms())
    for (const Power& p : w)
      if (p.gen.level > cap) throw Error("straighten: generator " + genid_str(p.gen) + " exceeds the level cap");
  return straighten(x, s);
}

// ---------------------------------------------------------------------------
// Text form.

std::string Presentation::word_string(const Word& w) const {
  if (w.empty()) return "1";
  const bool bar_inverse = (alg_ == Algebra::uqgl || alg_ == Algebra::uqaff) && !ext_;
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += '*';
    GenId g = w[i].gen;
    int e = w[i].exp;
    if (bar_inverse && e < 0 && g.family == Family::t && g.row == g.col && g.level == 0) {
      g.family = Family::tbar;
      e = -e;
    }
    s += genid_str(g);
    if (e != 1) s += '^' + std::to_string(e);
  }
  return s;
}

std::string Presentation::str(const NCPoly& p) const {
  return ncpoly_render(
      p, [this](const Word& w) { return word_string(w); },
      [this](const Word& a, const Word& b) { return word_less(a, b); });
}

namespace {

class ElementParser {
 public:
  ElementParser(const Presentation& p, std::string_view s) : p_(p), s_(s) {}

  NCPoly run() {
    NCPoly v = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected character");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error("parse error at position " + std::to_string(i_) + ": " + why);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  long integer() {
    skip();
    std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (start == i_) fail("integer expected");
    if (i_ - start > 9) fail("integer too large");
    return std::stol(std::string(s_.substr(start, i_ - start)));
  }
  int signed_integer() {
    bool paren = eat('(');
    bool neg = eat('-');
    if (!neg) eat('+');
    long v = integer();
    if (paren && !eat(')')) fail("')' expected");
    return static_cast<int>(neg ? -v : v);
  }

  NCPoly expr() {
    NCPoly v = term();
    for (;;) {
      if (eat('+')) v += term();
      else if (eat('-')) v -= term();
      else return v;
    }
  }
  NCPoly term() {
    NCPoly v = unary();
    for (;;) {
      if (eat('*')) {
        v = v * unary();
      } else if (eat('/')) {
        QRat c;
        if (!unary().is_scalar(&c)) fail("division by a non-scalar");
        if (c.is_zero()) throw Error("division by zero in base field");
        v = v.scaled(c.inv());
      } else {
        return v;
      }
    }
  }
  NCPoly unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  NCPoly power() {
    NCPoly base = atom();
    if (!eat('^')) return base;
    int e = signed_integer();
    QRat c;
    if (base.is_scalar(&c)) {
      if (c.is_zero() && e < 0) throw Error("division by zero in base field");
      return NCPoly(c.pow(e));
    }
    if (e >= 0) {
      NCPoly r(QRat(1));
      for (int k = 0; k < e; ++k) r = r * base;
      return r;
    }
    if (base.size() == 1 && base.terms().begin()->first.size() == 1) {
      const auto& [w, bc] = *base.terms().begin();
      return p_.gen(w[0].gen, w[0].exp * e).scaled(bc.pow(e));
    }
    fail("negative power of a non-invertible element");
  }
  NCPoly atom() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end of input");
    char c = s_[i_];
    if (c == '(') {
      ++i_;
      NCPoly v = expr();
      if (!eat(')')) fail("')' expected");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return NCPoly(QRat(integer()));
    std::size_t start = i_;
    while (i_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[i_]))) ++i_;
    std::string id(s_.substr(start, i_ - start));
    if (id == "q") return NCPoly(QRat::q());
    static const std::map<std::string, Family> fams{
        {"t", Family::t}, {"tb", Family::tbar}, {"s", Family::s}, {"sb", Family::sbar}};
    auto it = fams.find(id);
    if (it == fams.end()) fail("unknown symbol '" + id + "'");
    if (!eat('[')) fail("'[' expected");
    GenId g{it->second, static_cast<int>(integer()), 0, 0};
    if (!eat(',')) fail("',' expected");
    g.col = static_cast<int>(integer());
    if (eat(';')) g.level = static_cast<int>(integer());
    if (!eat(']')) fail("']' expected");
    return p_.gen(g);
  }

  const Presentation& p_;
  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace

NCPoly Presentation::parse(std::string_view text) const { return ElementParser(*this, text).run(); }

// ---------------------------------------------------------------------------

ConfluenceReport confluence_fuzz(const Presentation& p, int maxlen, int trials, std::uint64_t seed, int max_level) {
  ConfluenceReport rep;
  rep.trials = std::max(trials, 0);
  if (rep.trials == 0 || maxlen < 1) return rep;
  std::vector<Power> letters;
  for (const GenId& g : p.generators(max_level)) {
    letters.push_back(Power{g, 1});
    if (p.is_invertible(g)) letters.push_back(Power{g, -1});
  }
  std::mt19937_64 rng(seed);
  for (int t = 0; t < rep.trials; ++t) {
    int len = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(maxlen));
    Word w;
    for (int k = 0; k < len; ++k) w = word_mul(w, Word{letters[rng() % letters.size()]});
    NCPoly x = NCPoly::word(w);
    rep.corpus.push_back(x);
    if (!(p.straighten(x, Strategy::leftmost) == p.straighten(x, Strategy::rightmost)))
      rep.disagreements.push_back(p.word_string(w));
  }
  return rep;
}

}  // namespace qyw
