#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "jetcons/expr.hpp"

namespace jetcons {

/// Partial derivative with respect to one coordinate, all other jet
/// coordinates held fixed.
Expr diff_partial(const Expr& e, const Coord& c);

/// Total derivative D_i along independent variable i.
Expr total_derivative(const Expr& e, std::size_t i);

/// Total derivative of order J (applied slot by slot).
Expr total_derivative(const Expr& e, const MultiIndex& J);

/// Partial derivative of an unknown function node with respect to one slot.
Expr unknown_slot_derivative(const Expr& node, std::size_t slot);

/// Replacement rule for derivatives of an unknown: any derivative of `unknown`
/// that dominates `derivs` is rewritten by differentiating `replacement` by the
/// excess orders. The replacement is written in the unknown's slot coordinates.
struct DerivRelation {
  std::string unknown;
  std::vector<std::uint8_t> derivs;
  Expr replacement;
};

struct Bindings {
  std::map<Coord, Expr> coords;
  /// Unknown name -> body in the unknown's slot coordinates.
  std::map<std::string, Expr> unknowns;
  std::vector<DerivRelation> relations;

  [[nodiscard]] bool empty() const { return coords.empty() && unknowns.empty() && relations.empty(); }
};

/// Simultaneous substitution followed by normalization.
Expr substitute(const Expr& e, const Bindings& b);
Expr substitute(const Expr& e, const std::map<Coord, Expr>& coords);

/// Highest jet order among the coordinates of e (0 when e has none).
int max_jet_order(const Expr& e);

/// Highest derivative order of dependent alpha along each independent.
MultiIndex max_orders(const Expr& e, std::size_t alpha, std::size_t p);

/// Unknown names occurring in e.
std::vector<std::string> unknown_names(const Expr& e);

/// True when e is a polynomial in its coordinates: no functions, unknowns or
/// non-natural exponents.
bool is_polynomial(const Expr& e);

/// Calls fn for every distinct unknown node in e.
void for_each_unknown(const Expr& e, const std::function<void(const Expr&)>& fn);

}  // namespace jetcons
