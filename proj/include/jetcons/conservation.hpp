#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "jetcons/eval.hpp"
#include "jetcons/jet.hpp"

namespace jetcons {

struct MultiplierSet {
  std::vector<Expr> lambdas;
  /// Coordinates the multipliers may depend on; empty means unrestricted.
  std::vector<Coord> declared_args;
};

/// Conserved vector Phi, one component per independent variable (for 1+1
/// dimensions: density rho = Phi^t and flux X = Phi^x).
struct ConservedVector {
  std::vector<Expr> components;
};

struct CheckReport {
  std::string task;
  std::string system_id;
  ZeroVerdict verdict;
  Expr residual;

  [[nodiscard]] bool pass() const { return verdict.zero(); }
  [[nodiscard]] nlohmann::json to_json(const Frame& frame) const;
};

/// Lambda^l Delta_l - D_j Phi^j, normalized.
Expr characteristic_residual(const PDESystem& sys, const MultiplierSet& lam, const ConservedVector& phi);

CheckReport verify_conserved_vector(const PDESystem& sys, const MultiplierSet& lam, const ConservedVector& phi,
                                    const ZeroOptions& opt = ZeroOptions());

/// One report per dependent variable: E_alpha(Lambda^l Delta_l) = 0.
std::vector<CheckReport> verify_multipliers(const PDESystem& sys, const MultiplierSet& lam,
                                            const ZeroOptions& opt = ZeroOptions());

struct DeterminingSystem {
  std::vector<Expr> equations;
  std::vector<Coord> split_coords;
  /// Coordinates that could not be split (non-polynomial occurrence).
  std::vector<Coord> retained;
  std::vector<std::string> unknowns;

  [[nodiscard]] nlohmann::json to_json(const Frame& frame) const;
};

struct SplitOptions {
  /// Parameters to split over in addition to parametric jet coordinates.
  std::vector<Coord> parameters;
  /// Split over independent variables that no unknown depends on.
  bool split_independents = false;
  /// Eliminate leading unknown derivatives whose coefficient is constant.
  bool autoreduce = true;
};

/// Coefficients of e as a polynomial in `coords`. Coordinates that occur
/// non-polynomially are moved to `retained` and kept inside the coefficients.
struct PolynomialSplit {
  std::vector<Expr> coefficients;
  std::vector<Coord> split;
  std::vector<Coord> retained;
};
PolynomialSplit split_polynomial(const std::vector<Expr>& exprs, std::vector<Coord> coords);

/// Determining equations for multipliers whose components are unknown
/// functions of the declared arguments.
DeterminingSystem generate_determining_system(const PDESystem& sys, const MultiplierSet& ansatz,
                                              const SplitOptions& opt = SplitOptions());

/// Determining equations for closure unknowns in a closed system with fixed
/// multipliers. `unknowns` names the closure functions to solve for.
DeterminingSystem inverse_determining_system(const PDESystem& closed, const MultiplierSet& lam,
                                             const std::vector<std::string>& unknowns,
                                             const SplitOptions& opt = SplitOptions());

/// Builds determining equations from precomputed Euler expressions.
DeterminingSystem split_determining(const std::vector<Expr>& euler_images, const std::vector<std::string>& unknowns,
                                    const SplitOptions& opt);

/// Linear elimination over the unknown-derivative atoms of `unknowns` using
/// pivots with constant coefficients; drops zero and duplicate equations.
std::vector<Expr> autoreduce(std::vector<Expr> equations, const std::vector<std::string>& unknowns);

struct ClosureReport {
  std::vector<CheckReport> multipliers;
  std::optional<Expr> flux;
  [[nodiscard]] bool pass() const;
};

/// verify_multipliers on the closed system; when it passes and a density is
/// given, also reconstructs the flux.
ClosureReport verify_closure_against_multipliers(const PDESystem& closed, const MultiplierSet& lam,
                                                 const std::optional<Expr>& rho = std::nullopt,
                                                 const ZeroOptions& opt = ZeroOptions());

/// X with Lambda Delta - D_t rho = D_x X, when it exists.
std::optional<Expr> reconstruct_flux(const PDESystem& sys, const MultiplierSet& lam, const Expr& rho,
                                     const ZeroOptions& opt = ZeroOptions());

struct TrivialityReport {
  ZeroVerdict null_divergence;
  ZeroVerdict vanishes_on_solutions;
  [[nodiscard]] bool trivial() const { return null_divergence.zero() || vanishes_on_solutions.zero(); }
};

TrivialityReport triviality_candidate(const PDESystem& sys, const ConservedVector& phi,
                                      const ZeroOptions& opt = ZeroOptions());

/// Numeric comparison of two linear systems in the derivatives of `unknowns`:
/// at each sample point the coefficient rows of both systems are compared by
/// projecting every row onto the other system's row space.
struct SpanReport {
  bool equivalent = false;
  double max_residual = 0.0;
  int samples = 0;
  int rank_a = 0;
  int rank_b = 0;
};
SpanReport span_equivalence(const std::vector<Expr>& a, const std::vector<Expr>& b,
                            const std::vector<std::string>& unknowns, const ZeroOptions& opt = ZeroOptions(),
                            double tol = 1e-9);

/// Distinct unknown-derivative nodes of the named unknowns occurring in exprs.
std::vector<Expr> unknown_atoms(const std::vector<Expr>& exprs, const std::vector<std::string>& unknowns);

}  // namespace jetcons
