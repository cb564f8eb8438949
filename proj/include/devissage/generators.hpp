#pragma once

#include <cstdint>
#include <random>

#include "devissage/complex.hpp"
#include "devissage/module.hpp"

namespace devissage {

/// Deterministic source for every generator: seed -> identical instances on
/// every platform (draws avoid std distributions).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t next() { return eng_(); }
  /// Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) { return n ? eng_() % n : 0; }
  long range(long lo, long hi) { return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1))); }
  bool chance(unsigned num, unsigned den) { return below(den) < num; }
  std::uint64_t fork() { return eng_() ^ 0x9e3779b97f4a7c15ULL; }

 private:
  std::mt19937_64 eng_;
};

struct SizeCaps {
  std::size_t max_rank = 6;
  std::size_t max_width = 8;
  long max_entry = 50;
};

/// Small nonzero element, unit with probability ~1/2.
Scalar random_scalar(const Ring& ring, Rng& rng, long bound);
Scalar random_unit(const Ring& ring, Rng& rng);
/// Nonzero nonunit (for PIDs), e.g. 3, 9, 5, 15 ... bounded by caps.max_entry.
Scalar random_torsion_factor(const Ring& ring, Rng& rng, long bound);
Matrix random_matrix(const Ring& ring, std::size_t rows, std::size_t cols, Rng& rng, long bound, unsigned zero_pct = 40);
/// Product of elementary matrices and unit scalings.
Matrix random_unimodular(const Ring& ring, std::size_t n, Rng& rng, long bound = 2);
Matrix inverse_unimodular(const Matrix& u);

/// Random presentation; finite length (pure torsion) when finite_length and d = 1.
ModulePresentation random_module(const Ring& ring, Rng& rng, const SizeCaps& caps, bool finite_length);
/// Random element of Hom(s, t) (combination of a Hom basis).
ModuleMorphism random_morphism(const ModulePresentation& s, const ModulePresentation& t, Rng& rng);

/// Complex on [lo, lo + width - 1] assembled from elementary pieces
/// [R -f-> R] (f a nonunit), contractible [R -u-> R] and, unless
/// finite_homology, isolated free summands; then every degree is conjugated by
/// a random unimodular matrix.  Over fields every piece has finite length.
Complex random_complex(const Ring& ring, Rng& rng, const SizeCaps& caps, int lo, std::size_t width,
                       bool finite_homology);
/// Random combination of a basis of chain maps s -> t.
ChainMap random_chain_map(const Complex& s, const Complex& t, Rng& rng);
/// Basis of the module of chain maps s -> t.
std::vector<ChainMap> chain_map_basis(const Complex& s, const Complex& t);

/// Bounded complex of random modules on [lo, lo + width - 1]; each map is a
/// random morphism into the kernel of the next one.
ModuleComplex random_module_complex(const Ring& ring, Rng& rng, const SizeCaps& caps, int lo, std::size_t width,
                                    bool finite_length);

}  // namespace devissage
