#pragma once

#include <optional>
#include <string>
#include <vector>

#include "devissage/resolution.hpp"

namespace devissage {

/// Membership certificate: Ext^i(M, A) for every i < d, all zero.
struct AObject {
  ModulePresentation module;
  Resolution resolution;
  std::vector<std::pair<int, CokernelInvariants>> ext_vanishing;
};

/// Rejection carries the offending Ext degree in *reason.
std::optional<AObject> in_A(const ModulePresentation& m, std::string* reason = nullptr);

/// M^v = H_0(D zeta(M)) where D = T_u^d o #: coker of the transposed top
/// differential of the minimal resolution (d = 1), the dual of P_0 (d = 0).
ModulePresentation dual_module(const ModulePresentation& m);
/// f^v : N^v -> M^v, read off the lift of f to the minimal resolutions.
ModuleMorphism dual_morphism(const ModuleMorphism& f);

/// M -> M^vv through the comparison zeta(M^v) -> D zeta(M).  unit is set when
/// M is cyclic: the scalar by which the map acts in minimal coordinates.
struct DoubleDual {
  ModuleMorphism iso;
  std::optional<Scalar> unit;
};
DoubleDual double_dual_iso(const ModulePresentation& m);

/// D(E) = T_u^d(E^#) and D(f).  D(D(E)) == E and the evaluation map is the identity.
Complex complex_dual(const Complex& e);
ChainMap complex_dual_map(const ChainMap& f);

/// eta : H_{-r}(E^#) -> H_{r-d}(E)^v, with H_{-r}(E^#) taken as H_{d-r}(D E).
struct HomologyDuality {
  int r = 0;
  ModuleMorphism eta;
};
HomologyDuality homology_duality(const Complex& e, int r);
/// Throws HomologyNotInA naming the first offending degree.
void require_homology_in_A(const Complex& e);

struct ExtBoundaryRecord {
  int r = 0, i = 0;
  CokernelInvariants lhs;  // Ext^i(E_r / B_r)
  CokernelInvariants rhs;  // Ext^d(H_{r+i-d}) for i <= d, zero beyond
  bool agree = false;
};
ExtBoundaryRecord ext_boundary_check(const Complex& e, int r, int i);

// ---------------------------------------------------------------- module forms

struct ModuleForm {
  ModulePresentation module;
  ModuleMorphism phi;  // module -> dual_module(module)
  int epsilon = 1;
  bool standard = false;
};

/// phi^v o double_dual = epsilon phi.
bool is_symmetric(const ModuleForm& f);
bool is_nondegenerate(const ModuleForm& f);
bool is_valid_form(const ModuleForm& f);

/// Values of the form on module generators, as a matrix over the fraction
/// field (PIDs, entries meaningful modulo the ring) or over the field itself.
Matrix gram_matrix(const ModuleForm& f);
/// Inverse of gram_matrix: the form whose values on generators are g.
ModuleForm form_from_gram(const ModulePresentation& m, const Matrix& g, int epsilon);
/// Evaluates b(x, y) for coordinate vectors on the module generators.
Scalar form_value(const ModuleForm& f, const Matrix& gram, const std::vector<Scalar>& x, const std::vector<Scalar>& y);

ModuleForm orthogonal_sum(const ModuleForm& a, const ModuleForm& b);
/// Pull back along an isomorphism g : N -> M.
ModuleForm transport(const ModuleForm& f, const ModuleMorphism& g);

/// 0 -> G -> M -> G^v -> 0 with the second map inclusion^v o phi.
struct ModuleLagrangian {
  ModulePresentation sub;
  ModuleMorphism inclusion;
};
bool validate_lagrangian(const ModuleForm& f, const ModuleLagrangian& w);
/// Bounded search over submodules generated by isotropic elements.
std::optional<ModuleLagrangian> find_lagrangian(const ModuleForm& f, std::size_t max_elements = 4096);

struct HyperbolicForm {
  ModuleForm form;
  ModuleLagrangian lagrangian;
};
HyperbolicForm hyperbolic(const ModulePresentation& m, int epsilon);

/// Composition length; -1 when not finite length.
long module_length(const ModulePresentation& m);

// ------------------------------------------------------------- invariants

/// Square class representative: +-1 times a squarefree integer over Q, 1 or the
/// least nonsquare over F_p.
Scalar square_class(const Ring& field, const Scalar& x);

/// Witt invariants over a field: rank parity and the signed discriminant
/// (-1)^{n(n-1)/2} det.  Plain det does not separate classes over F_p with p = 3 mod 4.
struct WittD0 {
  int rank_parity = 0;
  Scalar discriminant = 1;
  bool operator==(const WittD0&) const = default;
};
WittD0 witt_invariants_d0(const Matrix& symmetric_gram);
WittD0 witt_invariants_d0(const ModuleForm& f);

/// Isometry over a field: dimension and plain determinant class.
struct FieldIsometry {
  std::size_t dim = 0;
  Scalar det_class = 1;
  bool operator==(const FieldIsometry&) const = default;
};
FieldIsometry field_isometry_invariants(const Matrix& symmetric_gram);

/// One Jordan constituent of a torsion form: scale p^k, rank, unit determinant class.
struct JordanBlock {
  long prime = 0;
  int scale = 0;
  std::size_t rank = 0;
  int unit_class = 1;  // Legendre symbol of the product of units
  bool operator==(const JordanBlock&) const = default;
  bool operator<(const JordanBlock& o) const;
};
/// Diagonalization of the p-part of a torsion Gram matrix over Z_(p).
std::vector<JordanBlock> jordan_decomposition(const Matrix& gram_q, long p);
std::vector<JordanBlock> jordan_invariants(const ModuleForm& f);

/// Complete isometry invariants over F_p, Z_(p) (odd p) and Z[1/2].
struct IsometryInvariants {
  CokernelInvariants module;
  std::vector<JordanBlock> jordan;
  FieldIsometry field;
  bool operator==(const IsometryInvariants&) const = default;
};
IsometryInvariants isometry_invariants(const ModuleForm& f);
bool isometric(const ModuleForm& a, const ModuleForm& b);

/// Witt class: per prime the residue forms of the odd-scale constituents
/// (d = 1), or the form itself (d = 0), summarized by WittD0.
struct WittClass {
  std::vector<std::pair<long, WittD0>> parts;  // prime 0 for fields
  bool is_zero() const;
  bool operator==(const WittClass&) const = default;
};
WittClass witt_class(const ModuleForm& f);

// ------------------------------------------------------------ decomposition

struct LocalPart {
  long prime = 0;
  ModuleForm local;              // over Z_(p)
  ModuleMorphism inclusion;      // global p-part -> M
  ModuleForm global;             // restriction of f to the p-part, over Z[1/2]
  ModuleMorphism dual_comparison;  // change_ring(global dual) -> dual over Z_(p)
};
std::vector<LocalPart> decompose_form(const ModuleForm& f);

struct DecompositionCheck {
  bool orthogonal = false;
  bool spans = false;
  bool duality_commutes = false;
  bool invariants_match = false;
  bool ok() const { return orthogonal && spans && duality_commutes && invariants_match; }
};
DecompositionCheck check_decomposition(const ModuleForm& f, const std::vector<LocalPart>& parts);

/// Brute-force classification over F_p: the anisotropic kernel found by
/// isotropic-vector search, compared up to isometry by exhaustive search.
/// Returns true when the two diagonal forms are Witt equivalent.
bool brute_witt_equivalent(long p, const std::vector<long>& a, const std::vector<long>& b);

}  // namespace devissage
