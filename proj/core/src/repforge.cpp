#include "qyw/repforge.hpp"

#include <deque>
#include <mutex>
#include <regex>
#include <set>

namespace qyw {

namespace {

PresentationPtr shared_presentation(const std::string& name) {
  static std::mutex mu;
  static std::map<std::string, PresentationPtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(name);
  if (it != cache.end()) return it->second;
  return cache.emplace(name, Presentation::make(name)).first->second;
}

std::string pres_name(const char* kind, int N, bool ext) {
  return std::string(kind) + ":" + std::to_string(N) + (ext ? ":ext" : "");
}

QRat qp(int e) { return QRat::q_pow(e); }
int kd(int a, int b) { return a == b ? 1 : 0; }

std::vector<Family> families(const Presentation& p) {
  if (p.algebra() == Algebra::uqgl || p.algebra() == Algebra::uqaff) return {Family::t, Family::tbar};
  return {Family::s};
}

// Generators as written (not canonicalized) that act by a non-scalar.
std::vector<GenId> raw_generators(const Presentation& p, int cap) {
  std::vector<GenId> out;
  const int top = p.has_levels() ? cap : 0;
  for (int r = 0; r <= top; ++r)
    for (Family f : families(p))
      for (int i = 1; i <= p.N(); ++i)
        for (int j = 1; j <= p.N(); ++j) {
          GenId g{f, i, j, r};
          NCPoly v = p.value(g);
          if (!v.is_zero() && !v.is_scalar()) out.push_back(g);
        }
  return out;
}

Mat mat_pow(const Mat& a, int e) {
  Mat r = Mat::identity(a.nrows());
  for (int k = 0; k < e; ++k) r = r * a;
  return r;
}

bool is_diagonal(const Mat& m) {
  for (int i = 0; i < m.nrows(); ++i)
    for (const auto& [j, x] : m.row(i))
      if (j != i) return false;
  return true;
}

void compute_weights(ModuleRep& m) {
  m.weights.clear();
  std::vector<Mat> torals;
  for (const GenId& g : m.pres->generators(0))
    if (g.level == 0 && m.pres->is_invertible(g)) torals.push_back(m.op(g));
  if (torals.empty()) return;
  for (const Mat& t : torals)
    if (!is_diagonal(t)) return;
  m.weights.assign(static_cast<std::size_t>(m.dim), {});
  for (int v = 0; v < m.dim; ++v)
    for (const Mat& t : torals) m.weights[static_cast<std::size_t>(v)].push_back(t.get(v, v));
}

// --- Verma quotients -------------------------------------------------------

struct VermaSpec {
  PresentationPtr p;
  GenId lowering;
  std::map<GenId, QRat> eigen;
  std::set<GenId> raising;
};

// Straightened element applied to the highest vector: basis index -> coefficient.
std::map<int, QRat> on_highest(const VermaSpec& s, const NCPoly& x) {
  std::map<int, QRat> out;
  for (const auto& [w, c] : x.terms()) {
    QRat coef = c;
    int idx = 0;
    bool zero = false;
    for (std::size_t k = w.size(); k-- > 0;) {
      const Power& pw = w[k];
      auto it = s.eigen.find(pw.gen);
      if (it != s.eigen.end()) {
        coef *= it->second.pow(pw.exp);
      } else if (pw.gen == s.lowering && k == 0 && pw.exp > 0) {
        idx = pw.exp;
      } else if (k + 1 == w.size() && s.raising.count(pw.gen)) {
        zero = true;
        break;
      } else {
        throw Error("internal: word " + word_str(w) + " is not of the form lowering * diagonal * raising");
      }
    }
    if (zero) continue;
    auto [jt, fresh] = out.emplace(idx, coef);
    if (!fresh) {
      jt->second += coef;
      if (jt->second.is_zero()) out.erase(jt);
    }
  }
  return out;
}

BuildResult verma_quotient(const VermaSpec& s, int depth) {
  if (depth < 1) throw Error("depth must be at least 1");
  const Presentation& p = *s.p;
  auto act = [&](const GenId& g, int k) {
    return on_highest(s, p.straighten(p.value(g) * p.gen(s.lowering, k)));
  };
  int dim = 0;
  for (int k = 1; k <= depth && dim == 0; ++k) {
    bool singular = true;
    for (const GenId& r : s.raising)
      if (!act(r, k).empty()) singular = false;
    if (singular) dim = k;
  }
  if (dim == 0) return NotFinite{depth};
  ModuleRep m;
  m.pres = s.p;
  m.dim = dim;
  m.cap = 0;
  m.highest = 0;
  for (const GenId& g : raw_generators(p, 0)) {
    Mat a(dim, dim);
    for (int k = 0; k < dim; ++k)
      for (const auto& [idx, c] : act(g, k))
        if (idx < dim) a.set(idx, k, c);
    m.action.emplace(g, std::move(a));
  }
  compute_weights(m);
  return m;
}

// --- series relation instances ---------------------------------------------

int series_exponent(Family f, int r) { return (f == Family::t || f == Family::s) ? -r : r; }

// Instances of the series relations whose factors all have level <= cap.
std::vector<std::pair<std::string, QuadRelation>> capped_instances(const Presentation& p, int cap) {
  std::vector<std::pair<std::string, QuadRelation>> out;
  for (const SeriesRelation& rel : p.series_relations()) {
    std::set<std::pair<int, int>> pts;
    for (const SeriesTerm& t : rel.terms)
      for (const auto& [key, c] : t.coeff.terms())
        for (int r1 = 0; r1 <= cap; ++r1)
          for (int r2 = 0; r2 <= cap; ++r2) {
            int e1 = series_exponent(t.first.family, r1), e2 = series_exponent(t.second.family, r2);
            if (t.first.var == Var::u) pts.emplace(key.first + e1, key.second + e2);
            else pts.emplace(key.first + e2, key.second + e1);
          }
    for (const auto& [a, b] : pts) {
      QuadRelation r = extract_coefficient(rel, a, b);
      bool within = !r.empty();
      for (const CoeffTerm& ct : r)
        if (ct.first.level > cap || ct.second.level > cap) within = false;
      if (within)
        out.emplace_back(rel.label + "@u^" + std::to_string(a) + "v^" + std::to_string(b), std::move(r));
    }
  }
  return out;
}

class OpCache {
 public:
  explicit OpCache(const ModuleRep& m) : m_(m) {}
  const Mat& operator()(const GenId& g) {
    auto it = cache_.find(g);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(g, m_.op(g)).first->second;
  }

 private:
  const ModuleRep& m_;
  std::map<GenId, Mat> cache_;
};

void record(ResidualReport& rep, const std::string& label, const Mat& residual) {
  ++rep.checked;
  if (residual.is_zero()) return;
  ++rep.failures;
  if (residual.nnz() > rep.worst_nnz || rep.worst_label.empty()) {
    rep.worst_nnz = residual.nnz();
    rep.worst_label = label;
  }
}

Mat quad_residual(OpCache& op, const QuadRelation& r, int dim) {
  Mat acc(dim, dim);
  for (const CoeffTerm& t : r) {
    const Mat& a = op(t.first);
    if (a.is_zero()) continue;
    const Mat& b = op(t.second);
    if (b.is_zero()) continue;
    acc += (a * b).scaled(t.c);
  }
  return acc;
}

GenId S(int i, int j, int r) { return GenId{Family::s, i, j, r}; }
GenId SB(int i, int j, int r) { return GenId{Family::sbar, i, j, r}; }

// sb_ij^(r) from the s/sb relation:
// q sb^(k+1) = q^-1 sb^(k-1) + q^d s_ji^(k-1) - q^-d s_ji^(k+1) + (q-q^-1)(d_{i<j} s_ij^(k+1) + d_{j<i} s_ij^(k-1)).
void derive_sbar(ModuleRep& m) {
  const int N = m.pres->N();
  const QRat qd = QRat::q() - qp(-1);
  auto s = [&](int i, int j, int r) { return r < 0 ? Mat(m.dim, m.dim) : m.op(S(i, j, r)); };
  for (int i = 1; i <= N; ++i)
    for (int j = 1; j <= N; ++j) {
      const int d = kd(i, j);
      std::vector<Mat> sb;
      for (int r = 0; r <= m.cap; ++r) {
        const int k = r - 1;
        Mat rhs = s(j, i, k - 1).scaled(qp(d)) - s(j, i, k + 1).scaled(qp(-d));
        if (i < j) rhs += s(i, j, k + 1).scaled(qd);
        if (j < i) rhs += s(i, j, k - 1).scaled(qd);
        if (k - 1 >= 0) rhs += sb[static_cast<std::size_t>(k - 1)].scaled(qp(-1));
        sb.push_back(rhs.scaled(qp(-1)));
      }
      for (int r = 0; r <= m.cap; ++r) m.action[SB(i, j, r)] = sb[static_cast<std::size_t>(r)];
    }
}

bool acts_by(const Mat& a, const Vec& v, const QRat& lam) {
  Vec w = a.apply(v);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!(w[i] == v[i] * lam)) return false;
  return true;
}

bool has_sbar(const ModuleRep& m) { return m.action.count(SB(1, 1, 0)) > 0; }

QRat eigenvalue(const Mat& a, const Vec& v) {
  Vec w = a.apply(v);
  std::size_t lead = v.size();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) {
      lead = i;
      break;
    }
  if (lead == v.size()) throw Error("not a highest vector: zero vector");
  QRat lam = w[lead] / v[lead];
  if (!acts_by(a, v, lam)) throw Error("not an eigenvector of a diagonal generator");
  return lam;
}

}  // namespace

// ---------------------------------------------------------------------------

QRat parse_param(std::string_view text, bool allow_general) {
  static const std::regex re(R"(^\s*([+-]?)\s*(?:(1)|q(?:\^\(?(-?\d+)\)?)?)\s*$)");
  std::string s(text);
  std::smatch mt;
  if (std::regex_match(s, mt, re)) {
    QRat v = mt[2].matched ? QRat(1) : QRat::q_pow(mt[3].matched ? std::stoi(mt[3].str()) : 1);
    return mt[1].str() == "-" ? -v : v;
  }
  if (!allow_general) throw Error("parameter '" + s + "' is not a signed q-power");
  QRat v = QRat::parse(text);
  if (v.is_zero()) throw Error("parameter must be nonzero");
  return v;
}

Mat ModuleRep::op(const GenId& g) const {
  auto it = action.find(g);
  if (it != action.end()) return it->second;
  if (g.family == Family::sbar) throw Error("module carries no sb actions");
  if (pres->has_levels() && g.level > cap)
    throw Error("generator " + genid_str(g) + " is above the module cap " + std::to_string(cap));
  NCPoly v = pres->value(g);
  if (v.is_zero()) return Mat(dim, dim);
  QRat c;
  if (v.is_scalar(&c)) return Mat::identity(dim).scaled(c);
  const auto& [w, coef] = *v.terms().begin();
  auto jt = action.find(w[0].gen);
  if (jt == action.end()) throw Error("no action stored for " + genid_str(w[0].gen));
  Mat base = jt->second;
  if (w[0].exp < 0) {
    auto inv = inverse(base);
    if (!inv) throw Error("action of " + genid_str(w[0].gen) + " is not invertible");
    base = *inv;
  }
  return mat_pow(base, std::abs(w[0].exp)).scaled(coef);
}

std::vector<Mat> ModuleRep::generator_matrices() const {
  std::vector<Mat> out;
  for (const auto& [g, a] : action)
    if (g.family != Family::sbar && !a.is_zero()) out.push_back(a);
  return out;
}

BuildResult gl2_finite_module(const QRat& alpha, const QRat& beta, int depth) {
  if (alpha.is_zero() || beta.is_zero()) throw Error("gl2_finite_module: parameters must be nonzero");
  VermaSpec s;
  s.p = shared_presentation("uqgl:2");
  s.lowering = GenId{Family::t, 2, 1, 0};
  s.eigen = {{GenId{Family::t, 1, 1, 0}, alpha}, {GenId{Family::t, 2, 2, 0}, beta}};
  s.raising = {GenId{Family::tbar, 1, 2, 0}};
  return verma_quotient(s, depth);
}

BuildResult uqsp2_module(const QRat& mu1, const QRat& mu1p, int depth) {
  if (mu1p.is_zero()) throw Error("uqsp2_module: mu1' must be nonzero");
  VermaSpec s;
  s.p = shared_presentation("uqsp:2");
  s.lowering = S(2, 2, 0);
  s.eigen = {{S(2, 1, 0), mu1}, {S(1, 2, 0), mu1p}};
  s.raising = {S(1, 1, 0)};
  return verma_quotient(s, depth);
}

ModuleRep eval_affine(const ModuleRep& m, int cap) {
  if (m.pres->algebra() != Algebra::uqgl) throw Error("eval_affine: module over uqgl expected");
  if (cap < 1) throw Error("eval_affine: cap must be at least 1");
  ModuleRep out;
  out.pres = shared_presentation(pres_name("uqaff", m.pres->N(), m.pres->extended()));
  out.dim = m.dim;
  out.cap = cap;
  out.highest = m.highest;
  for (const GenId& g : raw_generators(*out.pres, cap)) {
    if (g.level >= 2) {
      out.action.emplace(g, Mat(m.dim, m.dim));
      continue;
    }
    Family f = g.family;
    if (g.level == 1) f = f == Family::t ? Family::tbar : Family::t;
    out.action.emplace(g, m.op(GenId{f, g.row, g.col, 0}));
  }
  compute_weights(out);
  return out;
}

ModuleRep tensor(const ModuleRep& a, const ModuleRep& b) {
  if (a.pres->algebra() != Algebra::uqaff || b.pres->algebra() != Algebra::uqaff)
    throw Error("tensor: affine modules expected");
  if (a.pres->name() != b.pres->name()) throw Error("tensor: presentation mismatch");
  if (a.cap != b.cap) throw Error("tensor: cap mismatch");
  ModuleRep out;
  out.pres = a.pres;
  out.dim = a.dim * b.dim;
  out.cap = a.cap;
  if (a.highest && b.highest) out.highest = *a.highest * b.dim + *b.highest;
  const int N = a.pres->N();
  OpCache oa(a), ob(b);
  for (const GenId& g : raw_generators(*out.pres, out.cap)) {
    Mat acc(out.dim, out.dim);
    for (int k = 1; k <= N; ++k)
      for (int r1 = 0; r1 <= g.level; ++r1) {
        const Mat& x = oa(GenId{g.family, g.row, k, r1});
        if (x.is_zero()) continue;
        const Mat& y = ob(GenId{g.family, k, g.col, g.level - r1});
        if (y.is_zero()) continue;
        acc += kron(x, y);
      }
    out.action.emplace(g, std::move(acc));
  }
  compute_weights(out);
  return out;
}

ModuleRep twisted_restrict(const ModuleRep& m) {
  if (m.pres->algebra() != Algebra::uqaff || m.pres->N() % 2 != 0)
    throw Error("twisted_restrict: module over uqaff:2n expected");
  const int N = m.pres->N(), n = N / 2;
  ModuleRep out;
  out.pres = shared_presentation(pres_name("yqsp", N, false));
  out.dim = m.dim;
  out.cap = m.cap;
  out.highest = m.highest;
  OpCache op(m);
  const QRat q = QRat::q();
  // S(u) = T(u) G Tbar(u^-1)^t and Sbar(u) = Tbar(u) G T(u^-1)^t, coefficientwise.
  auto product = [&](Family f1, Family f2, int i, int j, int r) {
    Mat acc(m.dim, m.dim);
    for (int a = 1; a <= n; ++a)
      for (int r1 = 0; r1 <= r; ++r1) {
        const int r2 = r - r1;
        acc += (op(GenId{f1, i, 2 * a - 1, r1}) * op(GenId{f2, j, 2 * a, r2})).scaled(q);
        acc -= op(GenId{f1, i, 2 * a, r1}) * op(GenId{f2, j, 2 * a - 1, r2});
      }
    return acc;
  };
  for (int r = 0; r <= m.cap; ++r)
    for (int i = 1; i <= N; ++i)
      for (int j = 1; j <= N; ++j) {
        GenId g = S(i, j, r);
        Mat s = product(Family::t, Family::tbar, i, j, r);
        if (!out.pres->value(g).is_zero()) out.action.emplace(g, std::move(s));
        else if (!s.is_zero()) throw Error("internal: zero generator " + genid_str(g) + " acts nontrivially");
        out.action.emplace(SB(i, j, r), product(Family::tbar, Family::t, i, j, r));
      }
  compute_weights(out);
  return out;
}

ModuleRep twisted_eval(const ModuleRep& v, int cap) {
  if (v.pres->algebra() != Algebra::uqsp) throw Error("twisted_eval: module over uqsp expected");
  if (cap < 1) throw Error("twisted_eval: cap must be at least 1");
  const int N = v.pres->N();
  const QRat qd = QRat::q() - qp(-1);
  ModuleRep out;
  out.pres = shared_presentation(pres_name("yqsp", N, false));
  out.dim = v.dim;
  out.cap = cap;
  out.highest = v.highest;
  for (const GenId& g : raw_generators(*out.pres, cap)) {
    const int i = g.row, j = g.col;
    if (g.level == 0) {
      out.action.emplace(g, v.op(S(i, j, 0)));
    } else if (g.level == 1) {
      // s^(1) = q sbar with q sbar_ij = -q^{-d_ij} s_ji + (q - q^-1) d_{i<j} s_ij
      Mat a = -v.op(S(j, i, 0)).scaled(qp(-kd(i, j)));
      if (i < j) a += v.op(S(i, j, 0)).scaled(qd);
      out.action.emplace(g, std::move(a));
    } else {
      out.action.emplace(g, Mat(v.dim, v.dim));
    }
  }
  derive_sbar(out);
  compute_weights(out);
  return out;
}

ModuleRep twisted_dual(const ModuleRep& m) {
  if (m.pres->algebra() != Algebra::yqsp) throw Error("twisted_dual: module over yqsp expected");
  const int N = m.pres->N();
  ModuleRep out;
  out.pres = m.pres;
  out.dim = m.dim;
  out.cap = m.cap;
  for (const GenId& g : raw_generators(*m.pres, m.cap))
    out.action.emplace(g, m.op(S(N - g.col + 1, N - g.row + 1, g.level)).transpose());
  compute_weights(out);
  return out;
}

// ---------------------------------------------------------------------------

std::vector<GenId> raising_generators(const ModuleRep& m) {
  const Presentation& p = *m.pres;
  std::vector<GenId> out;
  switch (p.algebra()) {
    case Algebra::uqgl:
    case Algebra::uqaff:
      for (const GenId& g : raw_generators(p, m.cap))
        if (g.row < g.col) out.push_back(g);
      return out;
    case Algebra::uqsp:
    case Algebra::yqsp:
      for (const GenId& g : raw_generators(p, m.cap))
        if (varsigma(g.row) + varsigma(g.col) > 0) out.push_back(g);
      return out;
    default:
      throw Error("highest weight theory is not implemented for " + p.name());
  }
}

HighestWeightData highest_weight_of(const ModuleRep& m, const Vec& v) {
  if (static_cast<int>(v.size()) != m.dim) throw Error("highest_weight_of: vector size mismatch");
  for (const GenId& g : raising_generators(m))
    if (!vec_is_zero(m.op(g).apply(v))) throw Error("not a highest vector");
  const Presentation& p = *m.pres;
  HighestWeightData hw;
  auto series = [&](Family f, int i, int j, Dir d, int cap) {
    USeries s(d, cap);
    for (int r = 0; r <= cap; ++r) s[r] = eigenvalue(m.op(GenId{f, i, j, r}), v);
    return s;
  };
  switch (p.algebra()) {
    case Algebra::uqgl:
      for (int i = 1; i <= p.N(); ++i) {
        hw.first.push_back(series(Family::t, i, i, Dir::neg, 0));
        hw.second.push_back(series(Family::tbar, i, i, Dir::pos, 0));
      }
      break;
    case Algebra::uqaff:
      for (int i = 1; i <= p.N(); ++i) {
        hw.first.push_back(series(Family::t, i, i, Dir::neg, m.cap));
        hw.second.push_back(series(Family::tbar, i, i, Dir::pos, m.cap));
      }
      break;
    case Algebra::uqsp:
      for (int i = 1; i <= p.N() / 2; ++i) {
        hw.first.push_back(series(Family::s, 2 * i, 2 * i - 1, Dir::neg, 0));
        hw.second.push_back(series(Family::s, 2 * i - 1, 2 * i, Dir::neg, 0));
      }
      break;
    case Algebra::yqsp:
      if (!has_sbar(m)) throw Error("highest_weight_of: module carries no sb actions");
      for (int i = 1; i <= p.N() / 2; ++i) {
        hw.first.push_back(series(Family::s, 2 * i, 2 * i - 1, Dir::neg, m.cap));
        hw.second.push_back(series(Family::sbar, 2 * i, 2 * i - 1, Dir::pos, m.cap));
      }
      break;
    default:
      throw Error("highest weight theory is not implemented for " + p.name());
  }
  return hw;
}

HighestWeightData highest_weight_of(const ModuleRep& m) {
  if (!m.highest) throw Error("module has no distinguished highest vector");
  return highest_weight_of(m, vec_from_unit(m.dim, *m.highest));
}

VecSpace singular_vectors(const ModuleRep& m) {
  std::vector<GenId> raising = raising_generators(m);
  Mat stacked(static_cast<int>(raising.size()) * m.dim, m.dim);
  int row = 0;
  for (const GenId& g : raising) {
    Mat a = m.op(g);
    for (int i = 0; i < m.dim; ++i, ++row)
      for (const auto& [j, x] : a.row(i)) stacked.set(row, j, x);
  }
  return kernel(stacked);
}

VecSpace cyclic_span(const ModuleRep& m, const Vec& v) {
  VecSpace span(m.dim);
  if (vec_is_zero(v)) return span;
  std::vector<Mat> mats = m.generator_matrices();
  std::deque<Vec> queue{v};
  span.insert(v);
  while (!queue.empty() && span.dim() < m.dim) {
    Vec x = std::move(queue.front());
    queue.pop_front();
    for (const Mat& a : mats) {
      Vec y = a.apply(x);
      if (span.insert(y)) queue.push_back(std::move(y));
    }
  }
  return span;
}

namespace {

// Envelope dimension of the matrices specialized at q = q0.  Any spanning set that
// is independent at q0 is independent over Q(q), so this bounds the generic value from
// below.  Returns -1 when some entry has a pole at q0.
int envelope_dimension_at(const std::vector<Mat>& mats, int n, const Rational& q0) {
  using Dense = std::vector<Rational>;
  const std::size_t nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  std::vector<Dense> gens;
  try {
    for (const Mat& m : mats) {
      Dense d(nn);
      for (int i = 0; i < n; ++i)
        for (const auto& [j, x] : m.row(i)) d[static_cast<std::size_t>(i * n + j)] = x.eval_at(q0);
      gens.push_back(std::move(d));
    }
  } catch (const Error&) {
    return -1;
  }
  auto mul = [n](const Dense& a, const Dense& b) {
    Dense c(a.size());
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const Rational& x = a[static_cast<std::size_t>(i * n + k)];
        if (x == 0) continue;
        for (int j = 0; j < n; ++j) c[static_cast<std::size_t>(i * n + j)] += x * b[static_cast<std::size_t>(k * n + j)];
      }
    return c;
  };
  std::vector<Dense> basis;  // pivot-normalized echelon rows
  std::vector<std::size_t> piv;
  auto insert = [&](Dense v) {
    for (std::size_t r = 0; r < basis.size(); ++r) {
      const Rational c = v[piv[r]];
      if (c == 0) continue;
      for (std::size_t k = 0; k < nn; ++k)
        if (basis[r][k] != 0) v[k] -= c * basis[r][k];
    }
    std::size_t p = 0;
    while (p < nn && v[p] == 0) ++p;
    if (p == nn) return false;
    const Rational inv = 1 / v[p];
    for (auto& x : v) x *= inv;
    for (std::size_t r = 0; r < basis.size(); ++r) {
      const Rational c = basis[r][p];
      if (c == 0) continue;
      for (std::size_t k = 0; k < nn; ++k)
        if (v[k] != 0) basis[r][k] -= c * v[k];
    }
    basis.push_back(v);
    piv.push_back(p);
    return true;
  };
  Dense id(nn);
  for (int i = 0; i < n; ++i) id[static_cast<std::size_t>(i * n + i)] = 1;
  std::deque<Dense> queue{id};
  insert(id);
  while (!queue.empty() && basis.size() < nn) {
    Dense x = std::move(queue.front());
    queue.pop_front();
    for (const Dense& g : gens) {
      Dense y = mul(x, g);
      if (insert(y)) queue.push_back(std::move(y));
      if (basis.size() == nn) break;
    }
  }
  return static_cast<int>(basis.size());
}

std::optional<VecSpace> find_invariant_subspace(const ModuleRep& m) {
  std::vector<Vec> seeds;
  if (m.highest) seeds.push_back(vec_from_unit(m.dim, *m.highest));
  try {
    const VecSpace sing = singular_vectors(m);
    for (const Vec& s : sing.basis()) seeds.push_back(s);
  } catch (const Error&) {
    // no raising set for this algebra; rely on the highest vector only
  }
  for (int i = 0; i < m.dim; ++i) seeds.push_back(vec_from_unit(m.dim, i));
  for (const Vec& s : seeds) {
    VecSpace span = cyclic_span(m, s);
    if (span.dim() > 0 && span.dim() < m.dim) return span;
  }
  return std::nullopt;
}

}  // namespace

IrreducibilityReport irreducibility(const ModuleRep& m) {
  if (m.dim < 1) throw Error("irreducibility: empty module");
  IrreducibilityReport rep;
  rep.invariant = VecSpace(m.dim);
  std::vector<Mat> mats = m.generator_matrices();
  mats.push_back(Mat::identity(m.dim));
  // Fast path: a full envelope at a sample point settles irreducibility exactly.
  if (envelope_dimension_at(mats, m.dim, Rational(3)) == m.dim * m.dim) {
    rep.envelope_dim = m.dim * m.dim;
    rep.irreducible = true;
    return rep;
  }
  rep.envelope_dim = envelope_dimension(mats, m.dim);
  rep.irreducible = rep.envelope_dim == m.dim * m.dim;
  if (rep.irreducible) return rep;
  if (auto inv = find_invariant_subspace(m)) rep.invariant = std::move(*inv);
  return rep;
}

bool is_irreducible(const ModuleRep& m) {
  if (m.dim < 1) throw Error("irreducibility: empty module");
  std::vector<Mat> mats = m.generator_matrices();
  mats.push_back(Mat::identity(m.dim));
  if (envelope_dimension_at(mats, m.dim, Rational(3)) == m.dim * m.dim) return true;
  if (find_invariant_subspace(m)) return false;
  return envelope_dimension(mats, m.dim) == m.dim * m.dim;
}

// ---------------------------------------------------------------------------

bool eigen_identity_check(const ModuleRep& m) {
  if (m.pres->algebra() != Algebra::yqsp || m.pres->N() != 2)
    throw Error("eigen_identity_check: module over yqsp:2 expected");
  HighestWeightData hw = highest_weight_of(m);
  const USeries& mu = hw.first[0];
  const USeries& mub = hw.second[0];
  const int cap = m.cap;
  const QRat q2 = QRat::q_pow(2), qinv = qp(-1);
  auto at = [](const USeries& s, int k) { return k < 0 ? QRat(0) : s[k]; };
  Vec xi = vec_from_unit(m.dim, *m.highest);
  for (int n = 0; n <= cap; ++n) {
    // mu'(u): u^-2 numerator divided by q (1 - u^-2), in u^-1
    QRat mup;
    for (int k = n; k >= 0; k -= 2) mup += (q2 - QRat(1)) * at(mu, k - 2) + at(mub, k - 2) - q2 * at(mub, k);
    mup *= qinv;
    // mubar'(u): numerator divided by q (u^2 - 1), in u
    QRat mubp;
    for (int k = n; k >= 0; k -= 2) mubp += (q2 - QRat(1)) * at(mub, k) + at(mu, k) - q2 * at(mu, k - 2);
    mubp *= -qinv;
    if (!acts_by(m.op(S(1, 2, n)), xi, mup) || !acts_by(m.op(SB(1, 2, n)), xi, mubp)) return false;
  }
  return true;
}

ResidualReport verify_relations(const ModuleRep& m) {
  ResidualReport rep;
  const Presentation& p = *m.pres;
  OpCache op(m);
  const int d = m.dim;
  if (!p.has_levels()) {
    int idx = 0;
    for (const QuadRelation& r : p.finite_relations()) record(rep, "rel#" + std::to_string(idx++), quad_residual(op, r, d));
  } else {
    for (const auto& [label, r] : capped_instances(p, m.cap)) record(rep, label, quad_residual(op, r, d));
  }
  // Diagonal pairs and invertible generators.
  for (const GenId& g : p.generators(0)) {
    if (g.level != 0 || !p.is_invertible(g)) continue;
    const Mat& a = op(g);
    bool invertible = inverse(a).has_value();
    ++rep.checked;
    if (!invertible) {
      ++rep.failures;
      if (rep.worst_label.empty()) rep.worst_label = "invertible " + genid_str(g);
    }
    if ((p.algebra() == Algebra::uqgl || p.algebra() == Algebra::uqaff) && !p.extended()) {
      GenId gb{Family::tbar, g.row, g.col, 0};
      if (m.action.count(gb)) record(rep, "pair " + genid_str(g), a * op(gb) - Mat::identity(d));
    }
  }
  if (p.algebra() == Algebra::yqsp && has_sbar(m)) {
    const int N = p.N();
    const QRat qd = QRat::q() - qp(-1);
    auto s = [&](Family f, int i, int j, int r) { return r < 0 ? Mat(d, d) : op(GenId{f, i, j, r}); };
    for (int i = 1; i <= N; ++i)
      for (int j = 1; j <= N; ++j)
        for (int k = -1; k + 1 <= m.cap; ++k) {
          const int dl = kd(i, j);
          Mat res = s(Family::sbar, i, j, k + 1).scaled(QRat::q()) - s(Family::sbar, i, j, k - 1).scaled(qp(-1));
          res -= s(Family::s, j, i, k - 1).scaled(qp(dl)) - s(Family::s, j, i, k + 1).scaled(qp(-dl));
          if (i < j) res -= s(Family::s, i, j, k + 1).scaled(qd);
          if (j < i) res -= s(Family::s, i, j, k - 1).scaled(qd);
          record(rep, "s-sbar(" + std::to_string(i) + "," + std::to_string(j) + ")@u^" + std::to_string(k), res);
        }
    if (N == 2 && m.highest) {
      ++rep.checked;
      if (!eigen_identity_check(m)) {
        ++rep.failures;
        if (rep.worst_label.empty()) rep.worst_label = "eigen";
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

GenId genid_parse(const std::string& s) {
  static const std::regex re(R"(^(tb|t|sb|s)\[(\d+),(\d+);(\d+)\]$)");
  std::smatch mt;
  if (!std::regex_match(s, mt, re)) throw Error("bad generator '" + s + "'");
  static const std::map<std::string, Family> fams{
      {"t", Family::t}, {"tb", Family::tbar}, {"s", Family::s}, {"sb", Family::sbar}};
  return GenId{fams.at(mt[1].str()), std::stoi(mt[2].str()), std::stoi(mt[3].str()), std::stoi(mt[4].str())};
}

}  // namespace

nlohmann::json module_to_json(const ModuleRep& m) {
  nlohmann::json j;
  j["presentation"] = m.pres->name();
  j["dim"] = m.dim;
  j["cap"] = m.cap;
  nlohmann::json actions = nlohmann::json::object();
  for (const auto& [g, a] : m.action) actions[genid_str(g)] = mat_to_json(a);
  j["actions"] = actions;
  nlohmann::json w = nlohmann::json::array();
  for (const auto& row : m.weights) {
    nlohmann::json r = nlohmann::json::array();
    for (const QRat& x : row) r.push_back(x.str());
    w.push_back(r);
  }
  j["weights"] = w;
  j["highest_index"] = m.highest ? nlohmann::json(*m.highest) : nlohmann::json(nullptr);
  return j;
}

ModuleRep module_from_json(const nlohmann::json& j) {
  ModuleRep m;
  try {
    m.pres = shared_presentation(j.at("presentation").get<std::string>());
    m.dim = j.at("dim").get<int>();
    m.cap = j.at("cap").get<int>();
    for (const auto& [k, v] : j.at("actions").items()) m.action.emplace(genid_parse(k), mat_from_json(v));
    for (const auto& row : j.at("weights")) {
      std::vector<QRat> r;
      for (const auto& x : row) r.push_back(QRat::parse(x.get<std::string>()));
      m.weights.push_back(std::move(r));
    }
    if (!j.at("highest_index").is_null()) m.highest = j.at("highest_index").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed module json: ") + e.what());
  }
  for (const auto& [g, a] : m.action)
    if (a.nrows() != m.dim || a.ncols() != m.dim) throw Error("malformed module json: matrix size mismatch");
  return m;
}

}  // namespace qyw
