#pragma once

#include "devissage/forms.hpp"
#include "devissage/generators.hpp"
#include "devissage/witt.hpp"

namespace devissage {

/// Nondegenerate epsilon-symmetric form on a random module in A.  The Gram
/// matrix is drawn on the minimal presentation and pulled back to a
/// deliberately redundant one.
ModuleForm random_module_form(const Ring& ring, Rng& rng, const SizeCaps& caps, int epsilon = 1);

/// Random nondegenerate symmetric form on the given module (minimal or not).
ModuleForm random_form_on(const ModulePresentation& m, Rng& rng, int epsilon = 1);

/// Hyperbolic form on a random module with its lagrangian.
HyperbolicForm random_hyperbolic_form(const Ring& ring, Rng& rng, const SizeCaps& caps, int epsilon = 1);

/// Complex form with known ground truth: zeta_form(seed), plus hyperbolic
/// summands on T^n zeta(N) (n = 1, 2), plus contractible tails, conjugated
/// degreewise by unimodular matrices.  Support width at most 2d + 4.
struct GeneratedComplexForm {
  ModuleForm seed;
  ComplexForm form;
  std::vector<int> hyperbolic_shifts;
  std::size_t padding = 0;
};
GeneratedComplexForm random_complex_form(const Ring& ring, Rng& rng, const SizeCaps& caps, int epsilon = 1);

/// Hyperbolic form on a random complex with homology in A, conjugated, with
/// the lagrangian witness transported along.
NeutralComplexForm random_neutral_complex_form(const Ring& ring, Rng& rng, const SizeCaps& caps, int epsilon = 1);

/// Random chain isomorphism onto e: degreewise unimodular conjugation.
struct Conjugation {
  ChainMap to;    // conjugated -> e
  ChainMap from;  // e -> conjugated
};
Conjugation random_conjugation(const Complex& e, Rng& rng);

}  // namespace devissage
