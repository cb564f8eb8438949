#pragma once

#include <map>
#include <optional>
#include <vector>

#include "devissage/module.hpp"

namespace devissage {

/// Bounded complex of free modules, stored densely on [lo, hi].
/// d(r) : E_r -> E_{r-1}.
class Complex {
 public:
  Complex() = default;
  explicit Complex(Ring ring) : ring_(std::move(ring)) {}

  /// Validates shapes (ShapeMismatch) and dd = 0 (NotAComplex); trims zero ends.
  static Complex make(const Ring& ring, int lo, const std::vector<std::size_t>& ranks,
                      const std::map<int, Matrix>& diffs);
  /// Single free module of rank n in degree r.
  static Complex concentrated(const Ring& ring, int r, std::size_t n);

  const Ring& ring() const { return ring_; }
  bool is_zero() const { return ranks_.empty(); }
  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(ranks_.size()) - 1; }
  std::size_t rank(int r) const;
  std::size_t total_rank() const;
  Matrix d(int r) const;
  std::map<int, Matrix> differentials() const;
  std::vector<std::size_t> ranks() const { return ranks_; }

  bool operator==(const Complex& o) const;
  bool operator!=(const Complex& o) const { return !(*this == o); }

 private:
  Ring ring_;
  int lo_ = 0;
  std::vector<std::size_t> ranks_;
  std::vector<Matrix> diffs_;  // diffs_[i] = d(lo_ + i)
};

struct ChainMap {
  Complex source, target;
  std::map<int, Matrix> comps;

  /// Validates shapes and the chain condition (IllFormedMorphism).
  static ChainMap make(const Complex& s, const Complex& t, const std::map<int, Matrix>& comps);
  static ChainMap identity(const Complex& c);
  static ChainMap zero(const Complex& s, const Complex& t);
  Matrix at(int r) const;
};

/// h_r : E_r -> F_{r+1}.
struct Homotopy {
  std::map<int, Matrix> maps;
  Matrix at(const Complex& s, const Complex& t, int r) const;
};

bool is_chain_map(const ChainMap& f);
ChainMap compose(const ChainMap& g, const ChainMap& f);  // g o f
ChainMap add(const ChainMap& f, const ChainMap& g);
ChainMap sub(const ChainMap& f, const ChainMap& g);
ChainMap scale(const ChainMap& f, const Scalar& s);
bool chain_maps_equal(const ChainMap& f, const ChainMap& g);

/// f - g = dh + hd exactly.
bool check_homotopy(const ChainMap& f, const ChainMap& g, const Homotopy& h);
/// One linear system in all h_r; none when f and g are not homotopic.
std::optional<Homotopy> find_homotopy(const ChainMap& f, const ChainMap& g);
bool homotopic(const ChainMap& f, const ChainMap& g);

/// Degree shift (T^n E)_r = E_{r-n}; signed multiplies differentials by (-1)^n.
Complex translate(const Complex& c, int n, bool is_signed);
/// Same components, reindexed; source/target translated with the same convention.
ChainMap translate_map(const ChainMap& f, int n, bool is_signed);

/// (E^#)_{-r} = E_r^*, d^#_s = d_{1-s}^T.
Complex dual_complex(const Complex& c);
/// f^# : F^# -> E^#, component at s is f_{-s}^T.
ChainMap dual_map(const ChainMap& f);
/// D_n(E) = T_u^n(E^#).
Complex shifted_dual(const Complex& c, int n);
ChainMap shifted_dual_map(const ChainMap& f, int n);
/// E -> E^## with identity components.
ChainMap evaluation_map(const Complex& c);

struct SumData {
  Complex object;
  ChainMap in1, in2, pr1, pr2;
};
SumData direct_sum(const Complex& a, const Complex& b);
ChainMap direct_sum_map(const ChainMap& f, const ChainMap& g);

/// cone_r = F_r + E_{r-1}, d = [[dF, f], [0, -dE]].  projection lands in T_s E.
struct Cone {
  Complex object;
  ChainMap inclusion;
  ChainMap projection;
};
Cone cone(const ChainMap& f);

struct HomologyData {
  int degree = 0;
  Matrix cycles;      // basis of Z_r, columns in E_r coordinates
  Matrix boundaries;  // basis of B_r, columns in E_r coordinates
  ModulePresentation module;  // Z-coordinates mod boundaries
  CokernelInvariants invariants;
};
HomologyData homology(const Complex& c, int r);
/// H_r(f) between the presentations of homology(source, r) and homology(target, r).
ModuleMorphism homology_map(const ChainMap& f, int r);
bool is_exact(const Complex& c);
/// cone(f) exact.
bool is_quasi_iso(const ChainMap& f);
/// every H_r(f) an isomorphism.
bool is_quasi_iso_by_homology(const ChainMap& f);

/// Split off contractible summands [A -u-> A] (u a unit): incl/proj are
/// mutually inverse homotopy equivalences with proj o incl = id.
struct MinimalModel {
  Complex object;
  ChainMap incl;  // object -> original
  ChainMap proj;  // original -> object
};
MinimalModel minimize(const Complex& c);

/// Bounded complex of finitely presented modules; maps[r] : modules(r) -> modules(r-1).
struct ModuleComplex {
  Ring ring;
  int lo = 0;
  std::vector<ModulePresentation> modules;
  std::map<int, ModuleMorphism> maps;

  /// Validates consecutive composites vanish (NotAComplex).
  static ModuleComplex make(const Ring& ring, int lo, const std::vector<ModulePresentation>& modules,
                            const std::map<int, ModuleMorphism>& maps);
  static ModuleComplex from_free(const Complex& c);
  int hi() const { return lo + static_cast<int>(modules.size()) - 1; }
  ModulePresentation at(int r) const;
  ModuleMorphism map(int r) const;
  bool is_free() const;
};

struct ModuleChainMap {
  ModuleComplex source, target;
  std::map<int, ModuleMorphism> comps;
  ModuleMorphism at(int r) const;
};

struct ModuleHomology {
  ModulePresentation cycles;   // ker of maps(r)
  Matrix cycle_inclusion;      // cycles generators -> generators of modules(r)
  ModulePresentation module;   // cycles / image; same generators as cycles
};
ModuleHomology module_homology(const ModuleComplex& c, int r);
ModuleMorphism module_homology_map(const ModuleChainMap& f, int r);

}  // namespace devissage
