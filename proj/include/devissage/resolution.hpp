#pragma once

#include <optional>

#include "devissage/complex.hpp"

namespace devissage {

/// Free resolution supported on [0, len] with augmentation P_0 -> module.
/// section: module generators -> P_0 with augmentation o section = id on the module.
struct Resolution {
  ModulePresentation module;
  Complex complex;
  ModuleMorphism augmentation;
  Matrix section;
};

/// Minimal resolution: P_0 on the nonunit invariant-factor generators, P_1 on
/// the nonzero nonunit factors.  Length 0 over fields, at most 1 over the PIDs.
Resolution resolve_module(const ModulePresentation& m);
/// The resolution read off the presentation itself: P_0 = A^g, P_1 = image of
/// the relations (not minimal; used as an independent second resolution).
Resolution resolve_presentation(const ModulePresentation& m);
/// Checks exactness, augmentation surjectivity and H_0 = module; computes the section.
Resolution make_resolution(const ModulePresentation& m, const Complex& c, const Matrix& augmentation);
bool is_resolution(const Resolution& r);

/// Memoized resolve_module: one resolution per presentation, safe to call concurrently.
Resolution zeta_object(const ModulePresentation& m);
ChainMap zeta_morphism(const ModuleMorphism& g);

/// Chain map P -> Q over g with f_0 = section_Q g aug_P.
ChainMap lift_morphism(const ModuleMorphism& g, const Resolution& p, const Resolution& q);
/// aug_Q f_0 = g aug_P as maps into target(g).
bool lifts(const ChainMap& f, const ModuleMorphism& g, const Resolution& p, const Resolution& q);

/// L -> G with L bounded free, degreewise epi and a quasi-isomorphism.
/// L_n = F_n + K_{n-1} where F_n are the generators of G_n and K_n the image of its relations.
struct QuasiResolution {
  Complex complex;
  ModuleChainMap map;
};
QuasiResolution resolve_quasi(const ModuleComplex& g);

/// Degreewise pullback of F -> module(F) -g-> module(G) <- G.
struct ComplexPullback {
  Complex object;
  ChainMap t;  // object -> F, quasi-isomorphism
  ChainMap G;  // object -> G
  Matrix augmentation;  // object_0 -> module(F)
};
ComplexPullback pullback_complexes(const Resolution& f, const Resolution& g, const ModuleMorphism& map);

/// o : E -> Q with o tau ~ gamma, tau : L -> E a quasi-isomorphism.
struct RoofNormalization {
  ChainMap map;
  Homotopy witness;  // o tau - gamma = dH + Hd
};
RoofNormalization normalize_roof(const ChainMap& tau, const ChainMap& gamma);
/// Homotopy inverse of a quasi-isomorphism of bounded free complexes.
ChainMap homotopy_inverse(const ChainMap& s);

}  // namespace devissage
