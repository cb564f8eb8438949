#pragma once

#include <optional>
#include <string>
#include <vector>

#include "devissage/normal_forms.hpp"

namespace devissage {

/// coker(relations): relations is generators x q.
struct ModulePresentation {
  Ring ring;
  std::size_t generators = 0;
  Matrix relations;

  static ModulePresentation make(const Ring& ring, std::size_t g, const Matrix& relations);
  static ModulePresentation free(const Ring& ring, std::size_t n);
  static ModulePresentation zero(const Ring& ring) { return free(ring, 0); }
  /// R/(f_1) + ... + R/(f_k)
  static ModulePresentation cyclic_sum(const Ring& ring, const std::vector<Scalar>& factors);

  std::size_t g() const { return generators; }
  CokernelInvariants invariants() const { return cokernel_invariants(relations); }
  bool is_zero() const { return invariants().is_zero(); }
  bool same_presentation(const ModulePresentation& o) const {
    return ring == o.ring && generators == o.generators && relations == o.relations;
  }
};

ModulePresentation direct_sum(const ModulePresentation& a, const ModulePresentation& b);
bool isomorphic(const ModulePresentation& a, const ModulePresentation& b);
/// Same matrices read over another ring (entries must lie in it).
ModulePresentation change_ring(const ModulePresentation& m, const Ring& ring);
Matrix change_ring(const Matrix& m, const Ring& ring);

/// matrix: target.g x source.g.
struct ModuleMorphism {
  ModulePresentation source, target;
  Matrix matrix;

  /// Validates well-definedness; throws IllFormedMorphism.
  static ModuleMorphism make(const ModulePresentation& source, const ModulePresentation& target, const Matrix& m);
  static ModuleMorphism identity(const ModulePresentation& m);
  static ModuleMorphism zero(const ModulePresentation& s, const ModulePresentation& t);
};

bool is_well_defined(const ModulePresentation& s, const ModulePresentation& t, const Matrix& m);
/// Equality modulo the target relations.
bool morphism_equal(const ModuleMorphism& f, const ModuleMorphism& g);
bool is_zero_morphism(const ModuleMorphism& f);
ModuleMorphism compose(const ModuleMorphism& g, const ModuleMorphism& f);  // g o f
ModuleMorphism add(const ModuleMorphism& f, const ModuleMorphism& g);
ModuleMorphism scale(const ModuleMorphism& f, const Scalar& s);
/// Two-sided inverse of an isomorphism; throws NotAnIsomorphism.
ModuleMorphism inverse_iso(const ModuleMorphism& f);
bool is_iso(const ModuleMorphism& f);
bool is_mono(const ModuleMorphism& f);
bool is_epi(const ModuleMorphism& f);
/// Generators of Hom(s, t) as matrices.
std::vector<Matrix> hom_basis(const ModulePresentation& s, const ModulePresentation& t);

enum class SubquotientKind { Kernel, Image, Cokernel };

/// kernel: map is the inclusion into source.  image: map is the inclusion
/// into target (epi from source has the identity matrix).  cokernel: map is
/// the projection from target.
struct SubquotientWitness {
  SubquotientKind kind;
  ModulePresentation object;
  ModuleMorphism map;
};

SubquotientWitness subquotient(const ModuleMorphism& f, SubquotientKind kind);

struct Pullback {
  ModulePresentation object;
  ModuleMorphism proj1, proj2;
};

/// Pullback of f: M -> P and g: N -> P.
Pullback pullback(const ModuleMorphism& f, const ModuleMorphism& g);

struct DirectSum {
  ModulePresentation object;
  ModuleMorphism in1, in2, pr1, pr2;
};
DirectSum direct_sum_data(const ModulePresentation& a, const ModulePresentation& b);

/// Hom(M, A), free; basis columns of ker(R^T) are the functionals.
struct HomDual {
  ModulePresentation module;
  Matrix functionals;  // M.g x rank
};
HomDual hom_to_omega(const ModulePresentation& m);
/// Hom(f, A): Hom(N, A) -> Hom(M, A).
ModuleMorphism hom_to_omega_map(const ModuleMorphism& f);

/// Ext^i(M, A) from the resolution 0 -> A^q' -> A^g -> M with the injective
/// image basis of the relations.
ModulePresentation ext(const ModulePresentation& m, int i);
/// Ext^i(f, A): Ext^i(N, A) -> Ext^i(M, A).
ModuleMorphism ext_map(const ModuleMorphism& f, int i);

/// Minimal presentation coker(diag of nonunit factors), plus mutually inverse
/// isomorphisms in both directions.
struct Simplified {
  ModulePresentation module;
  ModuleMorphism to_min;    // original -> module
  ModuleMorphism from_min;  // module -> original
};
Simplified simplify(const ModulePresentation& m);

struct PrimaryPart {
  long prime;
  ModulePresentation local;   // over Z_(p)
  ModulePresentation global;  // same factors over the original ring
  ModuleMorphism inclusion;   // global -> M
  ModuleMorphism projection;  // M -> global
};

/// Over Z[1/2], finite length only; CRT idempotents give the projections.
std::vector<PrimaryPart> primary_decompose(const ModulePresentation& m);

/// Number of elements of a finite-length module over Z[1/2]/Z_(p) (product of factors).
mpz_class module_order(const ModulePresentation& m);

}  // namespace devissage
