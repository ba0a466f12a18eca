#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qyw/exactmath.hpp"

namespace qyw {

using Vec = std::vector<QRat>;

/// Sparse matrix over Q(q). Indices are 0-based; no zero entries are stored.
class Mat {
 public:
  using Row = std::map<int, QRat>;

  Mat() = default;
  Mat(int nrows, int ncols);
  static Mat identity(int n);
  static Mat unit(int n, int i, int j);  // E_ij, 0-based
  static Mat swap(int dim);              // P on C^dim (x) C^dim

  int nrows() const { return nr_; }
  int ncols() const { return nc_; }
  QRat get(int i, int j) const;
  void set(int i, int j, const QRat& v);
  void add(int i, int j, const QRat& v);
  const Row& row(int i) const { return rows_[static_cast<std::size_t>(i)]; }
  bool is_zero() const;
  std::size_t nnz() const;

  Mat operator-() const;
  Mat& operator+=(const Mat& o);
  Mat& operator-=(const Mat& o);
  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator*(const Mat& a, const Mat& b);
  Mat scaled(const QRat& s) const;
  Mat transpose() const;
  Mat q_inverted() const;
  Vec apply(const Vec& v) const;
  bool operator==(const Mat& o) const;
  std::string str() const;

 private:
  void check(int i, int j) const;
  int nr_ = 0, nc_ = 0;
  std::vector<Row> rows_;
};

Mat kron(const Mat& A, const Mat& B);
/// Embed A (acting on legs a<b, 1-based) into (C^dim)^{(x) nlegs}.
Mat place_on_legs(const Mat& A, int a, int b, int nlegs, int dim);
/// Transpose on the first tensor leg of a dim^2 x dim^2 matrix.
Mat partial_transpose_first(const Mat& A, int dim);

/// Matrix with entries in Q(q)[u, v].
class MatUV {
 public:
  MatUV() = default;
  MatUV(int nrows, int ncols);
  static MatUV from(const Mat& m);

  int nrows() const { return nr_; }
  int ncols() const { return nc_; }
  UVPoly get(int i, int j) const;
  void add(int i, int j, const UVPoly& v);
  bool is_zero() const;

  friend MatUV operator*(const MatUV& a, const MatUV& b);
  MatUV& operator-=(const MatUV& o);
  friend MatUV operator-(MatUV a, const MatUV& b) { return a -= b; }
  MatUV swapped_uv() const;
  MatUV q_inverted() const;
  MatUV scaled(const UVPoly& s) const;
  std::string str() const;

 private:
  int nr_ = 0, nc_ = 0;
  std::vector<std::map<int, UVPoly>> rows_;
};

/// Subspace of Q(q)^n kept in reduced row-echelon form.
class VecSpace {
 public:
  VecSpace() = default;
  explicit VecSpace(int ambient) : n_(ambient) {}

  int ambient() const { return n_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Vec>& basis() const { return basis_; }
  const std::vector<int>& pivots() const { return piv_; }

  /// Residue of v modulo the space.
  Vec reduce(Vec v) const;
  bool contains(const Vec& v) const;
  /// Adds v; returns false if it was already in the span.
  bool insert(const Vec& v);

 private:
  int n_ = 0;
  std::vector<Vec> basis_;
  std::vector<int> piv_;
};

VecSpace kernel(const Mat& A);
int rank(const Mat& A);
/// Exact inverse, or nullopt when A is singular.
std::optional<Mat> inverse(const Mat& A);
/// Dimension of the unital algebra generated by mats inside n x n matrices.
int envelope_dimension(const std::vector<Mat>& mats, int n);

bool vec_is_zero(const Vec& v);
Vec vec_from_unit(int n, int i);

nlohmann::json mat_to_json(const Mat& m);
Mat mat_from_json(const nlohmann::json& j);

}  // namespace qyw
