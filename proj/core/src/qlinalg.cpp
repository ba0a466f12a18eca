#include "qyw/qlinalg.hpp"

#include <algorithm>
#include <deque>

namespace qyw {

Mat::Mat(int nrows, int ncols) : nr_(nrows), nc_(ncols), rows_(static_cast<std::size_t>(nrows)) {
  if (nrows < 0 || ncols < 0) throw Error("matrix dimensions must be nonnegative");
}

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, QRat(1));
  return m;
}

Mat Mat::unit(int n, int i, int j) {
  Mat m(n, n);
  m.set(i, j, QRat(1));
  return m;
}

Mat Mat::swap(int dim) {
  Mat m(dim * dim, dim * dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m.set(j * dim + i, i * dim + j, QRat(1));
  return m;
}

void Mat::check(int i, int j) const {
  if (i < 0 || j < 0 || i >= nr_ || j >= nc_) throw Error("matrix index out of range");
}

QRat Mat::get(int i, int j) const {
  check(i, j);
  const auto& r = rows_[static_cast<std::size_t>(i)];
  auto it = r.find(j);
  return it == r.end() ? QRat() : it->second;
}

void Mat::set(int i, int j, const QRat& v) {
  check(i, j);
  auto& r = rows_[static_cast<std::size_t>(i)];
  if (v.is_zero()) r.erase(j);
  else r[j] = v;
}

void Mat::add(int i, int j, const QRat& v) {
  check(i, j);
  if (v.is_zero()) return;
  auto& r = rows_[static_cast<std::size_t>(i)];
  auto [it, fresh] = r.try_emplace(j, v);
  if (!fresh) {
    it->second += v;
    if (it->second.is_zero()) r.erase(it);
  }
}

bool Mat::is_zero() const {
  return std::all_of(rows_.begin(), rows_.end(), [](const Row& r) { return r.empty(); });
}

std::size_t Mat::nnz() const {
  std::size_t s = 0;
  for (const auto& r : rows_) s += r.size();
  return s;
}

Mat Mat::operator-() const {
  Mat m = *this;
  for (auto& r : m.rows_)
    for (auto& [c, v] : r) v = -v;
  return m;
}

Mat& Mat::operator+=(const Mat& o) {
  if (nr_ != o.nr_ || nc_ != o.nc_) throw Error("matrix dimension mismatch");
  for (int i = 0; i < nr_; ++i)
    for (const auto& [c, v] : o.rows_[static_cast<std::size_t>(i)]) add(i, c, v);
  return *this;
}

Mat& Mat::operator-=(const Mat& o) {
  if (nr_ != o.nr_ || nc_ != o.nc_) throw Error("matrix dimension mismatch");
  for (int i = 0; i < nr_; ++i)
    for (const auto& [c, v] : o.rows_[static_cast<std::size_t>(i)]) add(i, c, -v);
  return *this;
}

Mat operator*(const Mat& a, const Mat& b) {
  if (a.nc_ != b.nr_) throw Error("matrix dimension mismatch");
  Mat m(a.nr_, b.nc_);
  for (int i = 0; i < a.nr_; ++i) {
    auto& out = m.rows_[static_cast<std::size_t>(i)];
    for (const auto& [k, x] : a.rows_[static_cast<std::size_t>(i)])
      for (const auto& [j, y] : b.rows_[static_cast<std::size_t>(k)]) {
        auto [it, fresh] = out.try_emplace(j, x * y);
        if (!fresh) it->second += x * y;
      }
    for (auto it = out.begin(); it != out.end();) {
      if (it->second.is_zero()) it = out.erase(it);
      else ++it;
    }
  }
  return m;
}

Mat Mat::scaled(const QRat& s) const {
  if (s.is_zero()) return Mat(nr_, nc_);
  Mat m = *this;
  for (auto& r : m.rows_)
    for (auto& [c, v] : r) v *= s;
  return m;
}

Mat Mat::transpose() const {
  Mat m(nc_, nr_);
  for (int i = 0; i < nr_; ++i)
    for (const auto& [c, v] : rows_[static_cast<std::size_t>(i)]) m.set(c, i, v);
  return m;
}

Mat Mat::q_inverted() const {
  Mat m = *this;
  for (auto& r : m.rows_)
    for (auto& [c, v] : r) v = v.q_inverted();
  return m;
}

Vec Mat::apply(const Vec& v) const {
  if (static_cast<int>(v.size()) != nc_) throw Error("vector dimension mismatch");
  Vec out(static_cast<std::size_t>(nr_));
  for (int i = 0; i < nr_; ++i)
    for (const auto& [c, x] : rows_[static_cast<std::size_t>(i)])
      if (!v[static_cast<std::size_t>(c)].is_zero()) out[static_cast<std::size_t>(i)] += x * v[static_cast<std::size_t>(c)];
  return out;
}

bool Mat::operator==(const Mat& o) const { return nr_ == o.nr_ && nc_ == o.nc_ && rows_ == o.rows_; }

std::string Mat::str() const {
  std::string out = "[";
  for (int i = 0; i < nr_; ++i) {
    out += i ? ";\n [" : "[";
    for (int j = 0; j < nc_; ++j) {
      if (j) out += ", ";
      out += get(i, j).str();
    }
    out += "]";
  }
  return out + "]";
}

Mat kron(const Mat& A, const Mat& B) {
  Mat m(A.nrows() * B.nrows(), A.ncols() * B.ncols());
  for (int i = 0; i < A.nrows(); ++i)
    for (const auto& [j, x] : A.row(i))
      for (int k = 0; k < B.nrows(); ++k)
        for (const auto& [l, y] : B.row(k)) m.set(i * B.nrows() + k, j * B.ncols() + l, x * y);
  return m;
}

Mat place_on_legs(const Mat& A, int a, int b, int nlegs, int dim) {
  if (!(1 <= a && a < b && b <= nlegs)) throw Error("place_on_legs: legs must satisfy 1 <= a < b <= nlegs");
  if (A.nrows() != dim * dim || A.ncols() != dim * dim) throw Error("place_on_legs: matrix must be dim^2 x dim^2");
  int total = 1;
  for (int k = 0; k < nlegs; ++k) total *= dim;
  Mat m(total, total);
  std::vector<int> digits(static_cast<std::size_t>(nlegs));
  auto stride = [&](int leg) {  // 1-based leg, most significant first
    int s = 1;
    for (int k = leg; k < nlegs; ++k) s *= dim;
    return s;
  };
  int sa = stride(a), sb = stride(b);
  for (int col = 0; col < total; ++col) {
    int da = (col / sa) % dim, db = (col / sb) % dim;
    int base = col - da * sa - db * sb;
    int acol = da * dim + db;
    for (int arow = 0; arow < dim * dim; ++arow) {
      QRat v = A.get(arow, acol);
      if (v.is_zero()) continue;
      int ra = arow / dim, rb = arow % dim;
      m.set(base + ra * sa + rb * sb, col, v);
    }
  }
  return m;
}

Mat partial_transpose_first(const Mat& A, int dim) {
  Mat m(A.nrows(), A.ncols());
  for (int r = 0; r < A.nrows(); ++r)
    for (const auto& [c, v] : A.row(r)) {
      int i = r / dim, k = r % dim, j = c / dim, l = c % dim;
      m.set(j * dim + k, i * dim + l, v);
    }
  return m;
}

// ---------------------------------------------------------------------------
// MatUV

MatUV::MatUV(int nrows, int ncols) : nr_(nrows), nc_(ncols), rows_(static_cast<std::size_t>(nrows)) {}

MatUV MatUV::from(const Mat& m) {
  MatUV r(m.nrows(), m.ncols());
  for (int i = 0; i < m.nrows(); ++i)
    for (const auto& [j, v] : m.row(i)) r.add(i, j, UVPoly(v));
  return r;
}

UVPoly MatUV::get(int i, int j) const {
  const auto& r = rows_[static_cast<std::size_t>(i)];
  auto it = r.find(j);
  return it == r.end() ? UVPoly() : it->second;
}

void MatUV::add(int i, int j, const UVPoly& v) {
  if (i < 0 || j < 0 || i >= nr_ || j >= nc_) throw Error("matrix index out of range");
  auto& r = rows_[static_cast<std::size_t>(i)];
  auto& slot = r[j];
  slot += v;
  if (slot.is_zero()) r.erase(j);
}

bool MatUV::is_zero() const {
  return std::all_of(rows_.begin(), rows_.end(), [](const auto& r) { return r.empty(); });
}

MatUV operator*(const MatUV& a, const MatUV& b) {
  if (a.nc_ != b.nr_) throw Error("matrix dimension mismatch");
  MatUV m(a.nr_, b.nc_);
  for (int i = 0; i < a.nr_; ++i)
    for (const auto& [k, x] : a.rows_[static_cast<std::size_t>(i)])
      for (const auto& [j, y] : b.rows_[static_cast<std::size_t>(k)]) m.add(i, j, x * y);
  return m;
}

MatUV& MatUV::operator-=(const MatUV& o) {
  for (int i = 0; i < o.nr_; ++i)
    for (const auto& [j, v] : o.rows_[static_cast<std::size_t>(i)]) add(i, j, -v);
  return *this;
}

MatUV MatUV::swapped_uv() const {
  MatUV m(nr_, nc_);
  for (int i = 0; i < nr_; ++i)
    for (const auto& [j, v] : rows_[static_cast<std::size_t>(i)]) m.add(i, j, v.swapped());
  return m;
}

MatUV MatUV::q_inverted() const {
  MatUV m(nr_, nc_);
  for (int i = 0; i < nr_; ++i)
    for (const auto& [j, v] : rows_[static_cast<std::size_t>(i)]) m.add(i, j, v.q_inverted());
  return m;
}

MatUV MatUV::scaled(const UVPoly& s) const {
  MatUV m(nr_, nc_);
  for (int i = 0; i < nr_; ++i)
    for (const auto& [j, v] : rows_[static_cast<std::size_t>(i)]) m.add(i, j, v * s);
  return m;
}

std::string MatUV::str() const {
  std::string out;
  for (int i = 0; i < nr_; ++i)
    for (const auto& [j, v] : rows_[static_cast<std::size_t>(i)])
      out += "(" + std::to_string(i) + "," + std::to_string(j) + "): " + v.str() + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// VecSpace and elimination

bool vec_is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const QRat& x) { return x.is_zero(); });
}

Vec vec_from_unit(int n, int i) {
  Vec v(static_cast<std::size_t>(n));
  v[static_cast<std::size_t>(i)] = QRat(1);
  return v;
}

Vec VecSpace::reduce(Vec v) const {
  if (static_cast<int>(v.size()) != n_) throw Error("vector dimension mismatch");
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    const QRat f = v[static_cast<std::size_t>(piv_[k])];
    if (f.is_zero()) continue;
    const Vec& b = basis_[k];
    for (std::size_t i = 0; i < b.size(); ++i)
      if (!b[i].is_zero()) v[i] -= f * b[i];
  }
  return v;
}

bool VecSpace::contains(const Vec& v) const { return vec_is_zero(reduce(v)); }

bool VecSpace::insert(const Vec& v) {
  Vec r = reduce(v);
  std::size_t p = 0;
  while (p < r.size() && r[p].is_zero()) ++p;
  if (p == r.size()) return false;
  QRat inv = r[p].inv();
  for (auto& x : r)
    if (!x.is_zero()) x *= inv;
  for (auto& b : basis_) {
    QRat f = b[p];
    if (f.is_zero()) continue;
    for (std::size_t i = 0; i < r.size(); ++i)
      if (!r[i].is_zero()) b[i] -= f * r[i];
  }
  auto pos = std::lower_bound(piv_.begin(), piv_.end(), static_cast<int>(p));
  auto idx = pos - piv_.begin();
  piv_.insert(pos, static_cast<int>(p));
  basis_.insert(basis_.begin() + idx, std::move(r));
  return true;
}

namespace {
struct Echelon {
  std::vector<Mat::Row> rows;  // reduced rows, one per pivot
  std::vector<int> pivcols;
};

std::size_t entry_size(const QRat& x) { return x.size_hint(); }

Echelon eliminate(const Mat& A) {
  std::vector<Mat::Row> pending;
  for (int i = 0; i < A.nrows(); ++i)
    if (!A.row(i).empty()) pending.push_back(A.row(i));
  Echelon e;
  for (int col = 0; col < A.ncols() && !pending.empty(); ++col) {
    // pivot: smallest representation among rows with a nonzero entry in col
    std::size_t best = pending.size(), best_size = 0;
    for (std::size_t r = 0; r < pending.size(); ++r) {
      auto it = pending[r].find(col);
      if (it == pending[r].end()) continue;
      std::size_t s = entry_size(it->second);
      if (best == pending.size() || s < best_size) {
        best = r;
        best_size = s;
      }
    }
    if (best == pending.size()) continue;
    Mat::Row prow = std::move(pending[best]);
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best));
    QRat inv = prow.at(col).inv();
    for (auto& [c, v] : prow) v *= inv;
    auto elim = [&](Mat::Row& row) {
      auto it = row.find(col);
      if (it == row.end()) return;
      QRat f = it->second;
      for (const auto& [c, v] : prow) {
        auto [jt, fresh] = row.try_emplace(c, -(f * v));
        if (!fresh) {
          jt->second -= f * v;
          if (jt->second.is_zero()) row.erase(jt);
        }
      }
    };
    for (auto& row : pending) elim(row);
    for (auto& row : e.rows) elim(row);
    pending.erase(std::remove_if(pending.begin(), pending.end(), [](const Mat::Row& r) { return r.empty(); }),
                  pending.end());
    e.rows.push_back(std::move(prow));
    e.pivcols.push_back(col);
  }
  return e;
}
}  // namespace

VecSpace kernel(const Mat& A) {
  Echelon e = eliminate(A);
  std::vector<bool> is_piv(static_cast<std::size_t>(A.ncols()), false);
  for (int c : e.pivcols) is_piv[static_cast<std::size_t>(c)] = true;
  VecSpace ks(A.ncols());
  for (int f = 0; f < A.ncols(); ++f) {
    if (is_piv[static_cast<std::size_t>(f)]) continue;
    Vec v(static_cast<std::size_t>(A.ncols()));
    v[static_cast<std::size_t>(f)] = QRat(1);
    for (std::size_t r = 0; r < e.rows.size(); ++r) {
      auto it = e.rows[r].find(f);
      if (it != e.rows[r].end()) v[static_cast<std::size_t>(e.pivcols[r])] = -it->second;
    }
    ks.insert(v);
  }
  return ks;
}

int rank(const Mat& A) { return static_cast<int>(eliminate(A).rows.size()); }

std::optional<Mat> inverse(const Mat& A) {
  if (A.nrows() != A.ncols()) throw Error("inverse: square matrix expected");
  const int n = A.nrows();
  Mat aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (const auto& [j, x] : A.row(i)) aug.set(i, j, x);
    aug.set(i, n + i, QRat(1));
  }
  Echelon e = eliminate(aug);
  if (static_cast<int>(e.rows.size()) < n || e.pivcols[static_cast<std::size_t>(n - 1)] != n - 1) return std::nullopt;
  Mat inv(n, n);
  for (int r = 0; r < n; ++r)
    for (const auto& [c, x] : e.rows[static_cast<std::size_t>(r)])
      if (c >= n) inv.set(e.pivcols[static_cast<std::size_t>(r)], c - n, x);
  return inv;
}

int envelope_dimension(const std::vector<Mat>& mats, int n) {
  if (mats.empty()) throw Error("envelope_dimension: empty generator list");
  for (const auto& m : mats)
    if (m.nrows() != n || m.ncols() != n) throw Error("envelope_dimension: matrices must be n x n");
  auto flat = [n](const Mat& m) {
    Vec v(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n; ++i)
      for (const auto& [j, x] : m.row(i)) v[static_cast<std::size_t>(i * n + j)] = x;
    return v;
  };
  VecSpace span(n * n);
  std::deque<Mat> queue;
  Mat id = Mat::identity(n);
  span.insert(flat(id));
  queue.push_back(id);
  const int full = n * n;
  while (!queue.empty() && span.dim() < full) {
    Mat x = std::move(queue.front());
    queue.pop_front();
    for (const auto& g : mats) {
      Mat y = x * g;
      if (y.is_zero()) continue;
      if (span.insert(flat(y))) {
        queue.push_back(std::move(y));
        if (span.dim() == full) break;
      }
    }
  }
  return span.dim();
}

nlohmann::json mat_to_json(const Mat& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (int i = 0; i < m.nrows(); ++i)
    for (const auto& [j, v] : m.row(i)) entries.push_back({i, j, v.str()});
  return {{"nrows", m.nrows()}, {"ncols", m.ncols()}, {"entries", entries}};
}

Mat mat_from_json(const nlohmann::json& j) {
  Mat m(j.at("nrows").get<int>(), j.at("ncols").get<int>());
  for (const auto& e : j.at("entries")) m.set(e.at(0).get<int>(), e.at(1).get<int>(), QRat::parse(e.at(2).get<std::string>()));
  return m;
}

}  // namespace qyw
