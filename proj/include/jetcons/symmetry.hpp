#pragma once

#include <map>
#include <string>
#include <vector>

#include "jetcons/conservation.hpp"
#include "jetcons/jet.hpp"

namespace jetcons {

struct AlgebraFixture {
  std::string name;
  std::vector<VectorField> generators;
  std::string note;
};

/// Q^(n) Delta_l restricted to solutions, one report per equation.
std::vector<CheckReport> invariance_check(const PDESystem& sys, const VectorField& q,
                                          const ZeroOptions& opt = ZeroOptions());

/// Q^(n) I for each generator (an identity on the jet space).
std::vector<CheckReport> invariant_check(const Expr& invariant, const std::vector<VectorField>& gens,
                                         const FramePtr& frame, const ZeroOptions& opt = ZeroOptions());

/// Gamma^k_l Delta_k - tilde_l for each l; gamma[l][k] multiplies Delta_k.
std::vector<CheckReport> invariant_representation_check(const PDESystem& sys,
                                                        const std::vector<std::vector<Expr>>& gamma,
                                                        const std::vector<Expr>& tilde,
                                                        const ZeroOptions& opt = ZeroOptions());

/// Replaces underived occurrences of the named unknowns by fresh parameters so
/// that generators and maps can act on them as coordinates.
struct OpaqueFrame {
  FramePtr frame;
  Bindings to_symbols;
  std::map<std::string, Coord> symbol;

  [[nodiscard]] Expr apply(const Expr& e) const;
};
OpaqueFrame make_opaque(const Frame& frame, const std::vector<std::string>& unknowns);

/// Invariance of a class of systems under an equivalence generator whose
/// components along the arbitrary elements are given by name.
std::vector<CheckReport> equivalence_invariance_check(const PDESystem& sys, const VectorField& q,
                                                      const std::map<std::string, Expr>& unknown_components,
                                                      const ZeroOptions& opt = ZeroOptions());

/// Point map x~^i = a_i x^i, u~^a = b_a u^a + s_a, F~ = k F.
struct PointMap {
  std::vector<Rational> indep_scale;
  std::vector<Rational> dep_scale;
  std::vector<Expr> dep_shift;
  std::map<std::string, Rational> unknown_scale;
};

struct MapReport {
  std::vector<CheckReport> equations;
  std::vector<int> signs;  // +1 or -1 per equation; 0 when neither matches
  [[nodiscard]] bool pass() const;
};

/// Writes each target equation in the new variables, substitutes the map and
/// checks the result equals +-source equation of the same index.
MapReport point_map_check(const std::vector<Expr>& target, const std::vector<Expr>& source, const Frame& frame,
                          const PointMap& m, const ZeroOptions& opt = ZeroOptions());

}  // namespace jetcons
