#include "jetcons/coord.hpp"

#include <algorithm>
#include <stdexcept>

namespace jetcons {

MultiIndex::MultiIndex(std::initializer_list<int> orders) {
  if (orders.size() > kMaxIndependents) throw std::invalid_argument("too many independent variables");
  size_ = static_cast<std::uint8_t>(orders.size());
  std::size_t i = 0;
  for (int o : orders) {
    if (o < 0) throw std::invalid_argument("negative derivative order");
    orders_[i++] = static_cast<std::uint8_t>(o);
  }
}

int MultiIndex::order() const {
  int s = 0;
  for (std::size_t i = 0; i < size_; ++i) s += orders_[i];
  return s;
}

MultiIndex MultiIndex::raised(std::size_t i, int by) const {
  MultiIndex r = *this;
  r.orders_[i] = static_cast<std::uint8_t>(r.orders_[i] + by);
  return r;
}

MultiIndex MultiIndex::lowered(std::size_t i) const {
  if (orders_[i] == 0) throw std::logic_error("lowering a zero multi-index slot");
  MultiIndex r = *this;
  --r.orders_[i];
  return r;
}

bool MultiIndex::dominates(const MultiIndex& other) const {
  for (std::size_t i = 0; i < size_; ++i) {
    if (orders_[i] < other.orders_[i]) return false;
  }
  return true;
}

MultiIndex MultiIndex::minus(const MultiIndex& other) const {
  MultiIndex r = *this;
  for (std::size_t i = 0; i < size_; ++i) r.orders_[i] = static_cast<std::uint8_t>(orders_[i] - other.orders_[i]);
  return r;
}

MultiIndex MultiIndex::plus(const MultiIndex& other) const {
  MultiIndex r = *this;
  for (std::size_t i = 0; i < size_; ++i) r.orders_[i] = static_cast<std::uint8_t>(orders_[i] + other.orders_[i]);
  return r;
}

std::size_t hash_value(const Coord& c) {
  std::size_t h = static_cast<std::size_t>(c.kind) * 1000003u + c.index * 7919u;
  for (std::size_t i = 0; i < c.multi.size(); ++i) h = h * 31u + static_cast<std::size_t>(c.multi[i]);
  return h;
}

Frame::Frame(std::vector<std::string> independents, std::vector<std::string> dependents,
             std::vector<std::string> parameters)
    : independents_(std::move(independents)),
      dependents_(std::move(dependents)),
      parameters_(std::move(parameters)) {
  if (independents_.size() > kMaxIndependents) throw std::invalid_argument("too many independent variables");
  for (const auto& n : independents_) {
    if (n.size() != 1 || n[0] < 'a' || n[0] > 'z') {
      throw std::invalid_argument("independent variable names must be single lowercase letters: " + n);
    }
  }
}

std::size_t Frame::add_parameter(const std::string& name) {
  int existing = parameter_index(name);
  if (existing >= 0) return static_cast<std::size_t>(existing);
  parameters_.push_back(name);
  return parameters_.size() - 1;
}

std::shared_ptr<const UnknownDecl> Frame::add_unknown(const std::string& name, std::vector<Coord> slots) {
  if (find_unknown(name)) throw std::invalid_argument("unknown function declared twice: " + name);
  auto decl = std::make_shared<UnknownDecl>(UnknownDecl{name, std::move(slots)});
  unknowns_.push_back(decl);
  return decl;
}

std::shared_ptr<const UnknownDecl> Frame::find_unknown(const std::string& name) const {
  for (const auto& u : unknowns_) {
    if (u->name == name) return u;
  }
  return nullptr;
}

bool Frame::has_parameter(const std::string& name) const { return parameter_index(name) >= 0; }

int Frame::independent_index(const std::string& name) const {
  auto it = std::find(independents_.begin(), independents_.end(), name);
  return it == independents_.end() ? -1 : static_cast<int>(it - independents_.begin());
}

int Frame::dependent_index(const std::string& name) const {
  auto it = std::find(dependents_.begin(), dependents_.end(), name);
  return it == dependents_.end() ? -1 : static_cast<int>(it - dependents_.begin());
}

int Frame::parameter_index(const std::string& name) const {
  auto it = std::find(parameters_.begin(), parameters_.end(), name);
  return it == parameters_.end() ? -1 : static_cast<int>(it - parameters_.begin());
}

Coord Frame::parameter(const std::string& name) const {
  int i = parameter_index(name);
  if (i < 0) throw std::invalid_argument("unknown parameter: " + name);
  return Coord::parameter(static_cast<std::size_t>(i));
}

Coord Frame::independent(const std::string& name) const {
  int i = independent_index(name);
  if (i < 0) throw std::invalid_argument("unknown independent variable: " + name);
  return Coord::independent(static_cast<std::size_t>(i));
}

Coord Frame::dependent(const std::string& name) const {
  int i = dependent_index(name);
  if (i < 0) throw std::invalid_argument("unknown dependent variable: " + name);
  return Coord::jet(static_cast<std::size_t>(i), zero_index());
}

Coord Frame::jet(const std::string& spelled) const {
  auto us = spelled.find('_');
  std::string base = spelled.substr(0, us);
  Coord c = dependent(base);
  if (us == std::string::npos) return c;
  for (char ch : spelled.substr(us + 1)) {
    int i = independent_index(std::string(1, ch));
    if (i < 0) throw std::invalid_argument("unknown derivative letter in " + spelled);
    c.multi = c.multi.raised(static_cast<std::size_t>(i));
  }
  return c;
}

Coord Frame::coord(const std::string& spelled) const {
  if (independent_index(spelled) >= 0) return independent(spelled);
  if (parameter_index(spelled) >= 0) return parameter(spelled);
  return jet(spelled);
}

std::string Frame::name(const Coord& c) const {
  switch (c.kind) {
    case CoordKind::Independent:
      return c.index < independents_.size() ? independents_[c.index] : "x" + std::to_string(c.index);
    case CoordKind::Parameter:
      return c.index < parameters_.size() ? parameters_[c.index] : "p" + std::to_string(c.index);
    case CoordKind::Jet: {
      std::string s = c.index < dependents_.size() ? dependents_[c.index] : "u" + std::to_string(c.index);
      if (c.multi.order() == 0) return s;
      s += '_';
      for (std::size_t i = 0; i < c.multi.size(); ++i) {
        for (int k = 0; k < c.multi[i]; ++k) s += independents_[i];
      }
      return s;
    }
  }
  return "?";
}

}  // namespace jetcons
