#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jetcons/coord.hpp"
#include "jetcons/rational.hpp"

namespace jetcons {

enum class Kind : std::uint8_t { Number = 0, Symbol = 1, Unknown = 2, Func = 3, Mul = 4, Add = 5 };
enum class Fn : std::uint8_t { Ln = 0, Exp = 1, Sin = 2, Cos = 3, BesselJ = 4, BesselY = 5 };

struct Node;
struct NumberNode;
struct SymbolNode;
struct AddNode;
struct MulNode;
struct FuncNode;
struct UnknownNode;

/// Immutable expression over jet-space coordinates.
///
/// Expressions built through the free functions below (operators, pow, ln,
/// ...) are always in canonical form: sums and products are flattened, like
/// terms and like bases are merged, products are fully expanded over sums and
/// children are sorted by a total order. Nodes built through the `raw`
/// namespace keep the structure they were given until normalize() is applied.
class Expr {
 public:
  Expr();  // zero
  Expr(Rational r);  // NOLINT(google-explicit-constructor)
  Expr(int v) : Expr(Rational(v)) {}  // NOLINT(google-explicit-constructor)
  explicit Expr(std::shared_ptr<const Node> n) : p_(std::move(n)) {}

  static Expr symbol(const Coord& c);

  [[nodiscard]] Kind kind() const;
  [[nodiscard]] bool canonical() const;
  [[nodiscard]] std::size_t hash() const;
  /// Sorted, duplicate-free list of coordinates the expression depends on
  /// (including those inside unknown-function arguments).
  [[nodiscard]] const std::vector<Coord>& coords() const;
  [[nodiscard]] bool depends_on(const Coord& c) const;

  [[nodiscard]] bool is_number() const { return kind() == Kind::Number; }
  [[nodiscard]] bool is_zero() const;
  [[nodiscard]] bool is_one() const;
  [[nodiscard]] const Rational& number() const;

  [[nodiscard]] const NumberNode& as_number() const;
  [[nodiscard]] const SymbolNode& as_symbol() const;
  [[nodiscard]] const AddNode& as_add() const;
  [[nodiscard]] const MulNode& as_mul() const;
  [[nodiscard]] const FuncNode& as_func() const;
  [[nodiscard]] const UnknownNode& as_unknown() const;

  [[nodiscard]] const Node* get() const { return p_.get(); }

 private:
  std::shared_ptr<const Node> p_;
};

/// Total structural order on expressions; 0 means structurally equal.
int compare(const Expr& a, const Expr& b);
inline bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

struct Node {
  Kind kind;
  bool canonical = true;
  std::size_t hash = 0;
  std::vector<Coord> coords;
  explicit Node(Kind k) : kind(k) {}
  Node(const Node&) = delete;
  Node& operator=(const Node&) = delete;
  virtual ~Node() = default;
};

struct NumberNode final : Node {
  Rational value;
  explicit NumberNode(Rational v);
};

struct SymbolNode final : Node {
  Coord coord;
  explicit SymbolNode(const Coord& c);
};

/// constant + sum(coeff_i * term_i)
struct AddNode final : Node {
  Rational constant;
  std::vector<std::pair<Expr, Rational>> terms;
  AddNode(Rational c, std::vector<std::pair<Expr, Rational>> t, bool is_canonical);
};

/// coeff * prod(base_i ^ exponent_i)
struct MulNode final : Node {
  Rational coeff;
  std::vector<std::pair<Expr, Expr>> factors;
  MulNode(Rational c, std::vector<std::pair<Expr, Expr>> f, bool is_canonical);
};

struct FuncNode final : Node {
  Fn fn;
  int order;  // Bessel order; 0 otherwise
  Expr arg;
  FuncNode(Fn f, int n, Expr a, bool is_canonical);
};

/// Undetermined function, possibly differentiated with respect to its slots.
struct UnknownNode final : Node {
  std::shared_ptr<const UnknownDecl> decl;
  std::vector<Expr> args;
  std::vector<std::uint8_t> derivs;  // derivative count per slot
  UnknownNode(std::shared_ptr<const UnknownDecl> d, std::vector<Expr> a, std::vector<std::uint8_t> dv,
              bool is_canonical);
};

// ---- canonical construction -------------------------------------------------

Expr add(std::span<const Expr> terms);
Expr mul(std::span<const Expr> factors);
Expr pow(const Expr& base, const Expr& exponent);
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
inline Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
inline Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
inline Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

Expr ln(const Expr& a);
Expr exp(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr sqrt(const Expr& a);
Expr bessel_j(int n, const Expr& a);
Expr bessel_y(int n, const Expr& a);
Expr func(Fn fn, int order, const Expr& a);

/// Unknown function applied to its declared slot coordinates.
Expr unknown(const std::shared_ptr<const UnknownDecl>& decl);
Expr unknown(const std::shared_ptr<const UnknownDecl>& decl, std::vector<Expr> args,
             std::vector<std::uint8_t> derivs = {});

/// Canonical form of any expression (identity on canonical input).
Expr normalize(const Expr& e);

/// Product with the numeric coefficient stripped: e = coeff * rest.
std::pair<Rational, Expr> split_coefficient(const Expr& e);

/// Terms of a canonical sum as (coefficient, monomial) pairs, constant first.
std::vector<std::pair<Rational, Expr>> terms_of(const Expr& e);

// ---- raw construction (structure preserved, used by the parser) -------------

namespace raw {
Expr add(std::vector<Expr> terms);
Expr mul(std::vector<Expr> factors);
Expr pow(const Expr& base, const Expr& exponent);
Expr neg(const Expr& a);
Expr func(Fn fn, int order, const Expr& a);
Expr unknown(const std::shared_ptr<const UnknownDecl>& decl, std::vector<Expr> args,
             std::vector<std::uint8_t> derivs = {});
}  // namespace raw

}  // namespace jetcons
