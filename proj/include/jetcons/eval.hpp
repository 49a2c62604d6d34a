#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "jetcons/expr.hpp"

namespace jetcons {

struct CoordHash {
  std::size_t operator()(const Coord& c) const { return hash_value(c); }
};

/// Numeric assignment of coordinates; jet coordinates are independent numbers.
using Point = std::unordered_map<Coord, double, CoordHash>;

/// Raised on poles, logarithms of non-positive values and similar.
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when no valid sample could be drawn for a zero test.
class UnsamplableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Seeded polynomial stand-ins for unknown functions. Each unknown F of k
/// slots becomes a polynomial of total degree `degree` whose coefficients are
/// a pure function of (seed, name, monomial), so derivatives of any order are
/// exact and evaluation is thread-safe.
class StandIns {
 public:
  explicit StandIns(std::uint64_t seed = 0, int degree = 5) : seed_(seed), degree_(degree) {}

  /// Value of d^derivs F / d slots evaluated at args.
  [[nodiscard]] double value(const std::string& name, const std::vector<std::uint8_t>& derivs,
                             const std::vector<double>& args) const;

  /// Optional hook consulted before the polynomial; returning a value
  /// overrides the stand-in for that node.
  std::function<std::optional<double>(const UnknownNode&, const std::vector<double>&)> override_fn;

  [[nodiscard]] std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  int degree_;
};

double eval(const Expr& e, const Point& p, const StandIns& s = StandIns());

double bessel_j_value(int n, double z);
double bessel_y_value(int n, double z);

struct ZeroVerdict {
  enum class Status { ProvenZero, ProbablyZero, NonZero };
  Status status = Status::ProvenZero;
  int samples = 0;
  double max_residual = 0.0;  // scaled residual over all samples
  Point witness;
  double value = 0.0;

  [[nodiscard]] bool zero() const { return status != Status::NonZero; }
  [[nodiscard]] std::string status_name() const;
};

struct ZeroOptions {
  std::uint64_t seed = 20240601;
  int samples = 20;
  double lo = 0.5;
  double hi = 2.0;
  double rel_tol = 1e-9;
  int redraws = 5;
  /// Fixed values for some coordinates (not sampled).
  Point fixed;
  /// Stand-in polynomial degree for unknown functions.
  int standin_degree = 5;
  std::function<std::optional<double>(const UnknownNode&, const std::vector<double>&)> override_fn;
};

ZeroVerdict is_zero(const Expr& e, const ZeroOptions& opt = ZeroOptions());

/// Draws the i-th sample point of a zero test: a deterministic function of
/// (seed, i, attempt).
Point sample_point(const std::vector<Coord>& coords, const ZeroOptions& opt, int i, int attempt);

/// Sum of absolute values of the top-level terms of e at p.
double magnitude_scale(const Expr& e, const Point& p, const StandIns& s);

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace jetcons
