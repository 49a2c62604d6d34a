#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace jetcons {

inline constexpr std::size_t kMaxIndependents = 4;

/// Derivative orders (j_1, ..., j_p), one slot per independent variable.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t p) : size_(static_cast<std::uint8_t>(p)) {}
  MultiIndex(std::initializer_list<int> orders);

  [[nodiscard]] std::size_t size() const { return size_; }
  [[nodiscard]] int operator[](std::size_t i) const { return orders_[i]; }
  [[nodiscard]] int order() const;

  [[nodiscard]] MultiIndex raised(std::size_t i, int by = 1) const;
  /// Requires (*this)[i] > 0.
  [[nodiscard]] MultiIndex lowered(std::size_t i) const;
  /// Componentwise >=.
  [[nodiscard]] bool dominates(const MultiIndex& other) const;
  [[nodiscard]] MultiIndex minus(const MultiIndex& other) const;
  [[nodiscard]] MultiIndex plus(const MultiIndex& other) const;

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::array<std::uint8_t, kMaxIndependents> orders_{};
  std::uint8_t size_ = 0;
};

enum class CoordKind : std::uint8_t { Independent = 0, Jet = 1, Parameter = 2 };

/// A jet-space coordinate: x^i, u^alpha_J, or a named constant parameter.
struct Coord {
  CoordKind kind = CoordKind::Independent;
  std::uint16_t index = 0;  // independent index, dependent index alpha, or parameter index
  MultiIndex multi;         // only meaningful for Jet

  static Coord independent(std::size_t i) { return {CoordKind::Independent, static_cast<std::uint16_t>(i), {}}; }
  static Coord jet(std::size_t alpha, MultiIndex J) { return {CoordKind::Jet, static_cast<std::uint16_t>(alpha), J}; }
  static Coord parameter(std::size_t i) { return {CoordKind::Parameter, static_cast<std::uint16_t>(i), {}}; }

  [[nodiscard]] bool is_jet() const { return kind == CoordKind::Jet; }
  [[nodiscard]] bool is_independent() const { return kind == CoordKind::Independent; }
  [[nodiscard]] bool is_parameter() const { return kind == CoordKind::Parameter; }
  [[nodiscard]] int jet_order() const { return is_jet() ? multi.order() : 0; }

  friend auto operator<=>(const Coord&, const Coord&) = default;
  friend bool operator==(const Coord&, const Coord&) = default;
};

std::size_t hash_value(const Coord& c);

/// Declaration of an undetermined function symbol F(slot_1, ..., slot_k).
struct UnknownDecl {
  std::string name;
  std::vector<Coord> slots;
};

/// Coordinate declaration shared by every expression of a model.
class Frame {
 public:
  Frame() = default;
  Frame(std::vector<std::string> independents, std::vector<std::string> dependents,
        std::vector<std::string> parameters = {});

  [[nodiscard]] std::size_t num_independents() const { return independents_.size(); }
  [[nodiscard]] std::size_t num_dependents() const { return dependents_.size(); }
  [[nodiscard]] const std::vector<std::string>& independents() const { return independents_; }
  [[nodiscard]] const std::vector<std::string>& dependents() const { return dependents_; }
  [[nodiscard]] const std::vector<std::string>& parameters() const { return parameters_; }
  [[nodiscard]] const std::vector<std::shared_ptr<const UnknownDecl>>& unknowns() const { return unknowns_; }

  std::size_t add_parameter(const std::string& name);
  std::shared_ptr<const UnknownDecl> add_unknown(const std::string& name, std::vector<Coord> slots);

  [[nodiscard]] std::shared_ptr<const UnknownDecl> find_unknown(const std::string& name) const;
  [[nodiscard]] bool has_parameter(const std::string& name) const;
  [[nodiscard]] Coord parameter(const std::string& name) const;
  [[nodiscard]] Coord independent(const std::string& name) const;
  /// Dependent variable coordinate at order zero.
  [[nodiscard]] Coord dependent(const std::string& name) const;
  /// Parses names like "u_tx" into a jet coordinate; throws on failure.
  [[nodiscard]] Coord jet(const std::string& spelled) const;
  /// Parses any coordinate spelling (independent, parameter, or jet).
  [[nodiscard]] Coord coord(const std::string& spelled) const;

  [[nodiscard]] MultiIndex zero_index() const { return MultiIndex(num_independents()); }
  [[nodiscard]] std::string name(const Coord& c) const;

  [[nodiscard]] int independent_index(const std::string& name) const;
  [[nodiscard]] int dependent_index(const std::string& name) const;
  [[nodiscard]] int parameter_index(const std::string& name) const;

 private:
  std::vector<std::string> independents_;
  std::vector<std::string> dependents_;
  std::vector<std::string> parameters_;
  std::vector<std::shared_ptr<const UnknownDecl>> unknowns_;
};

using FramePtr = std::shared_ptr<const Frame>;

}  // namespace jetcons
