#pragma once

#include <optional>
#include <vector>

#include "devissage/error.hpp"
#include "devissage/forms.hpp"

namespace devissage {

/// Symmetric space in the derived category: phi : E -> D(E), a
/// quasi-isomorphism with D(phi) homotopic to epsilon phi.  D is T_u^d o #
/// unless `standard`, where the signed translation T_s^d o # is used.
struct ComplexForm {
  Complex object;
  ChainMap phi;
  int epsilon = 1;
  bool standard = false;
  std::optional<Homotopy> symmetry;  // D(phi) - epsilon phi = dH + Hd
};

/// Duality of the active convention.
Complex form_dual(const Complex& e, bool standard);
ChainMap form_dual_map(const ChainMap& f, bool standard);

std::optional<Homotopy> find_symmetry(const ComplexForm& f);
bool is_symmetric(const ComplexForm& f);
/// Homology in A, phi a quasi-isomorphism into the dual, symmetry homotopy exists.
bool is_valid_form(const ComplexForm& f);

ComplexForm zero_complex_form(const Ring& ring, int epsilon = 1);
/// Lift of a module form to its minimal resolution; the target is D(zeta M)
/// read as a resolution of M^v.
ComplexForm zeta_form(const ModuleForm& f);
/// Pullback D(g) phi g along a quasi-isomorphism g : E' -> E.
ComplexForm transport(const ComplexForm& f, const ChainMap& g);
ComplexForm orthogonal_sum(const ComplexForm& a, const ComplexForm& b);
/// [[0, 1], [epsilon, 0]] on X + D(X).
ComplexForm hyperbolic_complex_form(const Complex& x, int epsilon);

/// Triangle L -alpha-> E -> V -> T L with s : V -> D(L) a quasi-isomorphism
/// and w : D(L) -> T_s L satisfying D(w) ~ sign * T_s^{-1} w.
struct ComplexLagrangian {
  Complex sub;
  ChainMap alpha;
  Homotopy null_homotopy;  // D(alpha) phi alpha = dh + hd
  Cone cone;
  ChainMap s;
  ChainMap w;
  int sign = 0;
  Homotopy w_symmetry;
};
/// Throws NotALagrangian when D(alpha) phi alpha is not null-homotopic or s is
/// not a quasi-isomorphism.
ComplexLagrangian complex_lagrangian(const ComplexForm& f, const ChainMap& alpha);
bool validate_complex_lagrangian(const ComplexForm& f, const ComplexLagrangian& w);
/// complex_lagrangian of zeta_form(f) along the lift of the module lagrangian.
ComplexLagrangian build_lagrangian_lift(const ModuleForm& f, const ModuleLagrangian& w);

/// Neutral complex form with its witness.
struct NeutralComplexForm {
  ComplexForm form;
  ComplexLagrangian lagrangian;
};

/// n = max |k| over the degrees with H_k != 0.
struct HomologyWindow {
  bool exact = true;
  int n = 0;
};
HomologyWindow homology_window(const Complex& e);

/// after.phi == D(isometry) before.phi isometry, isometry a quasi-isomorphism.
struct IsometryRecord {
  ComplexForm before, after;
  ChainMap isometry;  // after.object -> before.object
};
/// Support cut down to [-n, n + d]; unchanged (identity isometry) when already inside.
IsometryRecord truncate_form(const ComplexForm& f);
/// Split off contractible summands.
IsometryRecord minimize_form(const ComplexForm& f);
bool validate_isometry(const IsometryRecord& r);

/// nu : L -> E with L = T^n zeta(H_n) on [n, n + d] and D(nu) phi nu ~ 0.
struct SublagrangianCandidate {
  int n = 0;
  ModulePresentation homology;
  Complex sub;
  ChainMap nu;
  Homotopy null_homotopy;
};
/// Throws WindowAlreadyMinimal when n = 0 (or the complex is exact).
SublagrangianCandidate sublagrangian_candidate(const ComplexForm& f);
/// Candidate in a prescribed degree; the zero map when H_n = 0.
SublagrangianCandidate sublagrangian_candidate(const ComplexForm& f, int n);

/// P = T_s^{-1} cone(D(nu) phi), R = cone(mu0 : L -> P) and the solved form
/// psi on R with D(q) psi q ~ D(pi) phi pi.
struct ReductionStep {
  SublagrangianCandidate candidate;
  Complex fiber;
  ChainMap pi;   // fiber -> E
  ChainMap mu0;  // L -> fiber
  Cone quotient;
  ComplexForm result;
  Homotopy isometry_homotopy;  // D(q) psi q - D(pi) phi pi = dH + Hd
  int attempts = 0;
};

/// Raised when the linear system for psi has no solution or psi is not a
/// quasi-isomorphism.
class ReductionStepFailed : public Error {
 public:
  ReductionStepFailed(int n, int attempts, std::size_t unknowns, std::size_t equations, const std::string& what)
      : Error(ErrorKind::ReductionStepFailed, what),
        n(n),
        attempts(attempts),
        unknowns(unknowns),
        equations(equations) {}
  int n;
  int attempts;
  std::size_t unknowns, equations;
};

ReductionStep reduce_once(const ComplexForm& f, int max_attempts = 4);
bool validate_step(const ComplexForm& input, const ReductionStep& s);

struct LedgerEntry {
  enum class Kind { Minimize, Truncate, Sublagrangian } kind;
  std::optional<IsometryRecord> isometry;
  std::optional<ReductionStep> step;
};

struct Reduction {
  ComplexForm input;
  ComplexForm reduced;
  ModuleForm extracted;
  std::vector<LedgerEntry> ledger;
};
Reduction reduce_support(const ComplexForm& f);
/// Re-checks every entry, the chaining of the entries and the final extraction.
bool validate_reduction(const Reduction& r);

/// Form on H_0 of a form whose homology is concentrated in degree 0 and
/// whose support lies in [0, d].
ModuleForm extract_module_form(const ComplexForm& f);

// ------------------------------------------------------------- conventions

enum class Direction { ToStandard, ToUnsigned };

/// (-1)^{d(d-1)/2}: the factor on the double dual identification for module forms.
int standard_sign(int d);
/// Module forms: epsilon scaled by standard_sign(d); the identity for d <= 1.
ModuleForm signed_standardize(const ModuleForm& f, Direction dir);
int standardized_epsilon(int epsilon, int d);
/// Complex forms: phi twisted by chi_r = (-1)^{d r} : T_u^d -> T_s^d, epsilon by (-1)^d.
ComplexForm signed_standardize(const ComplexForm& f, Direction dir);

}  // namespace devissage
