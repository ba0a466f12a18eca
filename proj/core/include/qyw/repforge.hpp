#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "qyw/exactmath.hpp"
#include "qyw/qlinalg.hpp"
#include "qyw/rttcore.hpp"

namespace qyw {

/// Signed q-power such as "+q^3", "-q^-2", "q", "-1"; any QRat when allow_general is set.
QRat parse_param(std::string_view text, bool allow_general = false);

/// A finite-dimensional module given by exact action matrices.
///
/// `action` is keyed by the generator as written (so tb[i,i;0] of a
/// non-extended algebra may be stored next to t[i,i;0]); twisted modules also
/// carry the sb family.  Levels above `cap` are not represented.
struct ModuleRep {
  PresentationPtr pres;
  int dim = 0;
  int cap = 0;
  std::map<GenId, Mat> action;
  std::vector<std::vector<QRat>> weights;  // toral eigenvalues per basis vector, when diagonal
  std::optional<int> highest;

  /// Action of any generator of the presentation: zero and unit generators
  /// resolve to 0 and 1, inverse generators to the inverse matrix.
  Mat op(const GenId& g) const;
  /// Matrices of the presentation's own generators (no sb entries).
  std::vector<Mat> generator_matrices() const;
};

struct NotFinite {
  int depth = 0;
};
using BuildResult = std::variant<ModuleRep, NotFinite>;

/// Irreducible quotient of the U_q(gl_2) Verma module with t11 = alpha, t22 = beta.
BuildResult gl2_finite_module(const QRat& alpha, const QRat& beta, int depth = 12);
/// Irreducible quotient of the U'_q(sp_2) Verma module with s21 = mu1, s12 = mu1p.
BuildResult uqsp2_module(const QRat& mu1, const QRat& mu1p, int depth = 12);

/// Evaluation module: T(u) -> T + Tbar u^-1, Tbar(u) -> Tbar + T u.
ModuleRep eval_affine(const ModuleRep& m, int cap = 4);
/// Tensor product through the coproduct; both factors over the same affine algebra and cap.
ModuleRep tensor(const ModuleRep& a, const ModuleRep& b);
/// Restriction of a U_q(gl^_2n) module to the twisted q-Yangian (s and sb actions).
ModuleRep twisted_restrict(const ModuleRep& m);
/// Evaluation module S(u) -> S + q u^-1 Sbar of a U'_q(sp_2n) module.
ModuleRep twisted_eval(const ModuleRep& v, int cap = 4);
/// Dual module through the anti-automorphism s_ij(u) -> s_{2n-j+1,2n-i+1}(u) (s family only).
ModuleRep twisted_dual(const ModuleRep& m);

/// Diagonal data of a highest vector.
///   uqgl:  first = t_ii, second = tb_ii (constants)
///   uqaff: first = nu_i(u) in u^-1, second = nubar_i(u) in u
///   uqsp:  first = mu_i, second = mu'_i (constants)
///   yqsp:  first = mu_i(u) in u^-1, second = mubar_i(u) in u
struct HighestWeightData {
  std::vector<USeries> first, second;
};
HighestWeightData highest_weight_of(const ModuleRep& m, const Vec& v);
HighestWeightData highest_weight_of(const ModuleRep& m);

/// Raising generators (levels <= cap) whose joint kernel defines singular vectors.
std::vector<GenId> raising_generators(const ModuleRep& m);
VecSpace singular_vectors(const ModuleRep& m);
VecSpace cyclic_span(const ModuleRep& m, const Vec& v);

struct IrreducibilityReport {
  bool irreducible = false;
  int envelope_dim = 0;
  VecSpace invariant;  // a proper nonzero invariant subspace when reducible and one was found
};
IrreducibilityReport irreducibility(const ModuleRep& m);
bool is_irreducible(const ModuleRep& m);

struct ResidualReport {
  int checked = 0;
  int failures = 0;
  std::string worst_label;
  std::size_t worst_nnz = 0;
  bool ok() const { return failures == 0; }
};
/// Every defining relation as a matrix identity, coefficientwise up to the cap.
/// Twisted modules with sb actions also check the s/sb relation and, when the
/// highest vector is known, the eigenvalue formula for s_12(u).
ResidualReport verify_relations(const ModuleRep& m);
/// s_12(u) xi = mu'(u) xi with mu'(u) computed from mu(u) and mubar(u^-1) (Y'_q(sp_2)).
bool eigen_identity_check(const ModuleRep& m);

nlohmann::json module_to_json(const ModuleRep& m);
ModuleRep module_from_json(const nlohmann::json& j);

}  // namespace qyw
