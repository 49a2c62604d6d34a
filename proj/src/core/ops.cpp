#include "jetcons/ops.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace jetcons {

namespace {

using Memo = std::unordered_map<const Node*, Expr>;

Expr diff_rec(const Expr& e, const Coord& c, Memo& memo);

Expr diff_power(const Expr& b, const Expr& x, const Coord& c, Memo& memo) {
  const bool base_dep = b.depends_on(c);
  const bool exp_dep = x.depends_on(c);
  if (!base_dep && !exp_dep) return Expr(0);
  if (!exp_dep) {
    Expr db = diff_rec(b, c, memo);
    if (x.is_number()) return Expr(x.number()) * pow(b, Expr(x.number() - Rational(1))) * db;
    return x * pow(b, x - Expr(1)) * db;
  }
  // b^x = exp(x ln b)
  Expr dx = diff_rec(x, c, memo);
  Expr out = pow(b, x) * dx * ln(b);
  if (base_dep) out += x * pow(b, x - Expr(1)) * diff_rec(b, c, memo);
  return out;
}

Expr diff_func(const FuncNode& f, const Expr& self, const Coord& c, Memo& memo) {
  Expr da = diff_rec(f.arg, c, memo);
  if (da.is_zero()) return Expr(0);
  switch (f.fn) {
    case Fn::Ln:
      return da / f.arg;
    case Fn::Exp:
      return self * da;
    case Fn::Sin:
      return cos(f.arg) * da;
    case Fn::Cos:
      return -sin(f.arg) * da;
    case Fn::BesselJ:
    case Fn::BesselY: {
      auto mk = [&](int n) { return f.fn == Fn::BesselJ ? bessel_j(n, f.arg) : bessel_y(n, f.arg); };
      if (f.order == 0) return -mk(1) * da;
      return (mk(f.order - 1) - Expr(f.order) / f.arg * mk(f.order)) * da;
    }
  }
  throw std::logic_error("unhandled function in differentiation");
}

Expr diff_rec(const Expr& e, const Coord& c, Memo& memo) {
  if (!e.depends_on(c)) return Expr(0);
  if (auto it = memo.find(e.get()); it != memo.end()) return it->second;
  Expr out;
  switch (e.kind()) {
    case Kind::Number:
      out = Expr(0);
      break;
    case Kind::Symbol:
      out = Expr(e.as_symbol().coord == c ? 1 : 0);
      break;
    case Kind::Add: {
      std::vector<Expr> parts;
      for (const auto& [t, k] : e.as_add().terms) {
        if (!t.depends_on(c)) continue;
        parts.push_back(Expr(k) * diff_rec(t, c, memo));
      }
      out = add(parts);
      break;
    }
    case Kind::Mul: {
      const auto& m = e.as_mul();
      std::vector<Expr> parts;
      for (std::size_t i = 0; i < m.factors.size(); ++i) {
        const auto& [b, x] = m.factors[i];
        if (!b.depends_on(c) && !x.depends_on(c)) continue;
        std::vector<Expr> prod;
        prod.reserve(m.factors.size() + 1);
        prod.push_back(Expr(m.coeff));
        for (std::size_t j = 0; j < m.factors.size(); ++j) {
          if (j != i) prod.push_back(pow(m.factors[j].first, m.factors[j].second));
        }
        prod.push_back(diff_power(b, x, c, memo));
        parts.push_back(mul(prod));
      }
      out = add(parts);
      break;
    }
    case Kind::Func:
      out = diff_func(e.as_func(), e, c, memo);
      break;
    case Kind::Unknown: {
      const auto& u = e.as_unknown();
      std::vector<Expr> parts;
      for (std::size_t k = 0; k < u.args.size(); ++k) {
        if (!u.args[k].depends_on(c)) continue;
        parts.push_back(unknown_slot_derivative(e, k) * diff_rec(u.args[k], c, memo));
      }
      out = add(parts);
      break;
    }
  }
  memo.emplace(e.get(), out);
  return out;
}

struct Substituter {
  const Bindings& b;
  std::unordered_map<const Node*, Expr> memo;

  Expr unknown_body(const UnknownNode& u, const std::vector<Expr>& args, bool& hit) {
    hit = false;
    if (auto it = b.unknowns.find(u.decl->name); it != b.unknowns.end()) {
      Expr body = it->second;
      for (std::size_t k = 0; k < u.derivs.size(); ++k) {
        for (int r = 0; r < u.derivs[k]; ++r) body = diff_partial(body, u.decl->slots[k]);
      }
      hit = true;
      return place(body, u.decl->slots, args);
    }
    for (const auto& rel : b.relations) {
      if (rel.unknown != u.decl->name || rel.derivs.size() != u.derivs.size()) continue;
      bool dom = true;
      for (std::size_t k = 0; k < u.derivs.size(); ++k) dom = dom && u.derivs[k] >= rel.derivs[k];
      if (!dom) continue;
      Expr body = rel.replacement;
      for (std::size_t k = 0; k < u.derivs.size(); ++k) {
        for (int r = rel.derivs[k]; r < u.derivs[k]; ++r) body = diff_partial(body, u.decl->slots[k]);
      }
      hit = true;
      return place(body, u.decl->slots, args);
    }
    return Expr();
  }

  // Replace slot coordinates by the actual arguments, skipping identity maps.
  static Expr place(const Expr& body, const std::vector<Coord>& slots, const std::vector<Expr>& args) {
    std::map<Coord, Expr> m;
    for (std::size_t k = 0; k < slots.size(); ++k) {
      if (args[k].kind() == Kind::Symbol && args[k].as_symbol().coord == slots[k]) continue;
      m.emplace(slots[k], args[k]);
    }
    if (m.empty()) return body;
    Bindings inner;
    inner.coords = std::move(m);
    Substituter s{inner, {}};
    return s.run(body);
  }

  Expr run(const Expr& e) {
    if (auto it = memo.find(e.get()); it != memo.end()) return it->second;
    Expr out;
    switch (e.kind()) {
      case Kind::Number:
        out = e;
        break;
      case Kind::Symbol: {
        auto it = b.coords.find(e.as_symbol().coord);
        out = it == b.coords.end() ? e : it->second;
        break;
      }
      case Kind::Add: {
        const auto& a = e.as_add();
        std::vector<Expr> parts;
        parts.reserve(a.terms.size() + 1);
        parts.push_back(Expr(a.constant));
        for (const auto& [t, k] : a.terms) parts.push_back(run(t) * Expr(k));
        out = add(parts);
        break;
      }
      case Kind::Mul: {
        const auto& m = e.as_mul();
        std::vector<Expr> parts;
        parts.reserve(m.factors.size() + 1);
        parts.push_back(Expr(m.coeff));
        for (const auto& [base, x] : m.factors) parts.push_back(pow(run(base), run(x)));
        out = mul(parts);
        break;
      }
      case Kind::Func: {
        const auto& f = e.as_func();
        out = func(f.fn, f.order, run(f.arg));
        break;
      }
      case Kind::Unknown: {
        const auto& u = e.as_unknown();
        std::vector<Expr> args;
        args.reserve(u.args.size());
        for (const auto& a : u.args) args.push_back(run(a));
        bool hit = false;
        Expr body = unknown_body(u, args, hit);
        if (hit) {
          // relation targets may themselves be rewritable
          out = b.relations.empty() ? body : run_fixpoint(body);
        } else {
          out = unknown(u.decl, std::move(args), u.derivs);
        }
        break;
      }
    }
    memo.emplace(e.get(), out);
    return out;
  }

  Expr run_fixpoint(const Expr& e) {
    Bindings rel_only;
    rel_only.relations = b.relations;
    Expr cur = e;
    for (int iter = 0; iter < 16; ++iter) {
      Substituter s{rel_only, {}};
      Expr next = s.run_relations_only(cur);
      if (next == cur) return cur;
      cur = next;
    }
    throw std::runtime_error("derivative relations did not reach a fixed point");
  }

  // One pass applying relations without further recursion into replacements.
  Expr run_relations_only(const Expr& e) {
    if (auto it = memo.find(e.get()); it != memo.end()) return it->second;
    Expr out;
    switch (e.kind()) {
      case Kind::Number:
      case Kind::Symbol:
        out = e;
        break;
      case Kind::Add: {
        const auto& a = e.as_add();
        std::vector<Expr> parts{Expr(a.constant)};
        for (const auto& [t, k] : a.terms) parts.push_back(run_relations_only(t) * Expr(k));
        out = add(parts);
        break;
      }
      case Kind::Mul: {
        const auto& m = e.as_mul();
        std::vector<Expr> parts{Expr(m.coeff)};
        for (const auto& [base, x] : m.factors) parts.push_back(pow(run_relations_only(base), run_relations_only(x)));
        out = mul(parts);
        break;
      }
      case Kind::Func: {
        const auto& f = e.as_func();
        out = func(f.fn, f.order, run_relations_only(f.arg));
        break;
      }
      case Kind::Unknown: {
        const auto& u = e.as_unknown();
        std::vector<Expr> args;
        for (const auto& a : u.args) args.push_back(run_relations_only(a));
        bool hit = false;
        Expr body = unknown_body(u, args, hit);
        out = hit ? body : unknown(u.decl, std::move(args), u.derivs);
        break;
      }
    }
    memo.emplace(e.get(), out);
    return out;
  }
};

void collect_unknowns(const Expr& e, std::set<const Node*>& seen, const std::function<void(const Expr&)>& fn) {
  if (!seen.insert(e.get()).second) return;
  switch (e.kind()) {
    case Kind::Number:
    case Kind::Symbol:
      return;
    case Kind::Add:
      for (const auto& [t, k] : e.as_add().terms) collect_unknowns(t, seen, fn);
      return;
    case Kind::Mul:
      for (const auto& [b, x] : e.as_mul().factors) {
        collect_unknowns(b, seen, fn);
        collect_unknowns(x, seen, fn);
      }
      return;
    case Kind::Func:
      collect_unknowns(e.as_func().arg, seen, fn);
      return;
    case Kind::Unknown:
      fn(e);
      for (const auto& a : e.as_unknown().args) collect_unknowns(a, seen, fn);
      return;
  }
}

}  // namespace

Expr diff_partial(const Expr& e, const Coord& c) {
  Memo memo;
  return diff_rec(normalize(e), c, memo);
}

Expr unknown_slot_derivative(const Expr& node, std::size_t slot) {
  const auto& u = node.as_unknown();
  std::vector<std::uint8_t> d = u.derivs;
  ++d.at(slot);
  return unknown(u.decl, u.args, std::move(d));
}

Expr total_derivative(const Expr& in, std::size_t i) {
  Expr e = normalize(in);
  std::vector<Expr> parts;
  Memo memo;
  for (const Coord& c : e.coords()) {
    if (c.is_independent() && c.index == i) {
      memo.clear();
      parts.push_back(diff_rec(e, c, memo));
    } else if (c.is_jet()) {
      if (i >= c.multi.size()) throw std::invalid_argument("independent index out of range");
      memo.clear();
      Expr d = diff_rec(e, c, memo);
      if (d.is_zero()) continue;
      parts.push_back(Expr::symbol(Coord::jet(c.index, c.multi.raised(i))) * d);
    }
  }
  return add(parts);
}

Expr total_derivative(const Expr& e, const MultiIndex& J) {
  Expr out = e;
  for (std::size_t i = 0; i < J.size(); ++i) {
    for (int k = 0; k < J[i]; ++k) out = total_derivative(out, i);
  }
  return out;
}

Expr substitute(const Expr& e, const Bindings& b) {
  Expr n = normalize(e);
  if (b.empty()) return n;
  Substituter s{b, {}};
  Expr out = s.run(n);
  if (!b.relations.empty()) out = s.run_fixpoint(out);
  return out;
}

Expr substitute(const Expr& e, const std::map<Coord, Expr>& coords) {
  Bindings b;
  b.coords = coords;
  return substitute(e, b);
}

int max_jet_order(const Expr& e) {
  int m = 0;
  for (const auto& c : e.coords()) m = std::max(m, c.jet_order());
  return m;
}

MultiIndex max_orders(const Expr& e, std::size_t alpha, std::size_t p) {
  MultiIndex out(p);
  for (const auto& c : e.coords()) {
    if (!c.is_jet() || c.index != alpha) continue;
    for (std::size_t i = 0; i < p; ++i) {
      if (c.multi[i] > out[i]) out = out.raised(i, c.multi[i] - out[i]);
    }
  }
  return out;
}

bool is_polynomial(const Expr& e) {
  switch (e.kind()) {
    case Kind::Number:
    case Kind::Symbol:
      return true;
    case Kind::Add:
      for (const auto& [t, k] : e.as_add().terms)
        if (!is_polynomial(t)) return false;
      return true;
    case Kind::Mul:
      for (const auto& [b, x] : e.as_mul().factors) {
        if (!x.is_number() || !x.number().is_integer() || x.number() < Rational(0)) return false;
        if (!is_polynomial(b)) return false;
      }
      return true;
    default:
      return false;
  }
}

void for_each_unknown(const Expr& e, const std::function<void(const Expr&)>& fn) {
  std::set<const Node*> seen;
  collect_unknowns(e, seen, fn);
}

std::vector<std::string> unknown_names(const Expr& e) {
  std::set<std::string> names;
  for_each_unknown(e, [&](const Expr& u) { names.insert(u.as_unknown().decl->name); });
  return {names.begin(), names.end()};
}

}  // namespace jetcons
