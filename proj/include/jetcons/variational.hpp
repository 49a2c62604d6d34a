#pragma once

#include <map>
#include <optional>
#include <vector>

#include <json.hpp>

#include "jetcons/conservation.hpp"
#include "jetcons/jet.hpp"

namespace jetcons {

/// Matrix differential operator: entry (mu, nu) is sum_J coeff_J D_J.
struct LinOpMatrix {
  using Entry = std::map<MultiIndex, Expr>;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Entry> entries;  // row-major

  LinOpMatrix() = default;
  LinOpMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c) {}

  Entry& at(std::size_t mu, std::size_t nu) { return entries[mu * cols + nu]; }
  [[nodiscard]] const Entry& at(std::size_t mu, std::size_t nu) const { return entries[mu * cols + nu]; }

  /// Drops zero coefficients.
  void prune();
  /// Applies the operator to a tuple of expressions.
  [[nodiscard]] std::vector<Expr> apply(const std::vector<Expr>& v) const;
  [[nodiscard]] nlohmann::json to_json(const Frame& frame) const;
};

bool operator==(const LinOpMatrix& a, const LinOpMatrix& b);
LinOpMatrix operator-(const LinOpMatrix& a, const LinOpMatrix& b);

struct Lagrangian {
  Expr density;
};

/// Linearizing operator of the equations: entry (mu, nu) has coefficients
/// d Delta_mu / d u^nu_J.
LinOpMatrix frechet(const std::vector<Expr>& equations, const Frame& frame);
LinOpMatrix frechet(const PDESystem& sys);

/// Formal adjoint, expanded by the Leibniz rule.
LinOpMatrix adjoint(const LinOpMatrix& op, std::size_t p);

struct SelfAdjointReport {
  ZeroVerdict verdict;
  LinOpMatrix deficit;  // D - D*
  [[nodiscard]] bool pass() const { return verdict.zero(); }
};

SelfAdjointReport is_self_adjoint(const PDESystem& sys, const ZeroOptions& opt = ZeroOptions());
SelfAdjointReport is_self_adjoint(const std::vector<Expr>& equations, const Frame& frame,
                                  const ZeroOptions& opt = ZeroOptions());

/// Coefficients of D_g - D*_g as determining equations for the unknowns in g.
DeterminingSystem selfadjointness_conditions(const std::vector<Expr>& rhs, const Frame& frame);

struct VariationalSymmetryReport {
  std::vector<CheckReport> euler_images;
  Expr r;  // Q^(n) L + L D_i xi^i
  std::optional<Expr> flux;  // B^x when recoverable (one space variable, xi^t = 0 part)
  [[nodiscard]] bool pass() const;
};

VariationalSymmetryReport variational_symmetry_check(const Lagrangian& lag, const VectorField& q, const FramePtr& frame,
                                                     const ZeroOptions& opt = ZeroOptions());

/// Evolutionary characteristic of q as a multiplier set.
MultiplierSet noether_multipliers(const VectorField& q, const Frame& frame);

/// Euler-Lagrange equations E_alpha(L), one per dependent variable.
std::vector<Expr> euler_lagrange(const Lagrangian& lag, const Frame& frame);

}  // namespace jetcons
