#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "jetcons/coord.hpp"
#include "jetcons/eval.hpp"
#include "jetcons/expr.hpp"
#include "jetcons/ops.hpp"

namespace jetcons {

/// System of L equations Delta_l = 0 with an optional evolutionary solved form.
struct PDESystem {
  FramePtr frame;
  std::vector<Expr> equations;
  /// Leading coordinate (e.g. u_t) -> right-hand side.
  std::map<Coord, Expr> solve_form;

  [[nodiscard]] bool has_solve_form() const { return !solve_form.empty(); }
  [[nodiscard]] std::size_t p() const { return frame->num_independents(); }
  [[nodiscard]] std::size_t q() const { return frame->num_dependents(); }
};

/// Builds a system, normalizing the equations. Throws std::invalid_argument
/// when the solved form is inconsistent with the equations.
PDESystem make_system(FramePtr frame, std::vector<Expr> equations, std::map<Coord, Expr> solve_form = {});

/// Point vector field xi^i d/dx^i + phi^a d/du^a. `extra` holds components
/// along parameter coordinates (used for arbitrary elements of a class).
struct VectorField {
  std::vector<Expr> xi;
  std::vector<Expr> phi;
  std::map<Coord, Expr> extra;
};

/// Evolutionary characteristic eta^a = phi^a - xi^i u^a_i.
std::vector<Expr> characteristic(const VectorField& q, const Frame& frame);

/// Prolongation coefficients of one vector field, computed on demand by the
/// recursion phi^{a,J+i} = D_i phi^{a,J} - (D_i xi^k) u^a_{J+k} and memoized.
class Prolongation {
 public:
  Prolongation(VectorField q, FramePtr frame);

  /// Coefficient of d/du^a_J.
  Expr coefficient(std::size_t alpha, const MultiIndex& J);
  /// All coefficients with |J| <= n.
  std::map<Coord, Expr> up_to(int n);
  /// Q^(n) applied to e, n taken from e itself.
  Expr apply(const Expr& e);

  [[nodiscard]] const VectorField& field() const { return q_; }

 private:
  VectorField q_;
  FramePtr frame_;
  std::vector<Expr> dxi_;  // D_i xi^k stored at i * p + k
  std::map<std::pair<std::size_t, MultiIndex>, Expr> cache_;
  std::mutex mu_;
};

/// Coefficients up to order n; a convenience wrapper over Prolongation.
std::map<Coord, Expr> prolong(const VectorField& q, const FramePtr& frame, int n);

/// Euler operator E_alpha e = sum_J (-D)_J d e / d u^alpha_J.
Expr euler_operator(const Expr& e, std::size_t alpha, std::size_t p);

/// Restriction to the solution manifold through the solved form and its
/// differential consequences.
Expr on_solution(const Expr& e, const PDESystem& sys);

/// Antiderivative X with D_i X = e when e is a total derivative in x^i alone
/// (t treated as a parameter); empty otherwise. The result is certified by a
/// round trip D_i X - e = 0.
std::optional<Expr> inverse_total_derivative(const Expr& e, std::size_t i, const ZeroOptions& opt = ZeroOptions());

/// inverse_total_derivative along the last independent variable.
std::optional<Expr> inverse_total_derivative_x(const Expr& e, const Frame& frame,
                                               const ZeroOptions& opt = ZeroOptions());

/// Antiderivative of e with respect to one coordinate for the term shapes that
/// occur in the catalog (powers, logarithms, unknown derivatives).
std::optional<Expr> integrate(const Expr& e, const Coord& w);

}  // namespace jetcons
