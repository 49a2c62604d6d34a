#include "jetcons/expr.hpp"

#include <algorithm>
#include <stdexcept>

namespace jetcons {

namespace {

constexpr int kMaxExpandPower = 16;

std::size_t mix(std::size_t h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::size_t hash_rational(const Rational& r) {
  return mix(static_cast<std::size_t>(r.num()), static_cast<std::size_t>(r.den()));
}

std::size_t hash_string(const std::string& s) {
  std::size_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void merge_coords(std::vector<Coord>& into, const std::vector<Coord>& from) {
  if (from.empty()) return;
  if (into.empty()) {
    into = from;
    return;
  }
  std::vector<Coord> out;
  out.reserve(into.size() + from.size());
  std::set_union(into.begin(), into.end(), from.begin(), from.end(), std::back_inserter(out));
  into.swap(out);
}

const Expr& zero_expr() {
  static const Expr z{Rational(0)};
  return z;
}

Expr make_number(const Rational& r) { return Expr(std::make_shared<NumberNode>(r)); }

Expr canon(const Expr& e) { return e.canonical() ? e : normalize(e); }

// Builds a canonical MulNode from already-merged, sorted factors without any
// further simplification.
Expr build_mul(const Rational& coeff, std::vector<std::pair<Expr, Expr>> factors) {
  if (coeff.is_zero()) return zero_expr();
  if (factors.empty()) return make_number(coeff);
  if (coeff.is_one() && factors.size() == 1 && factors[0].second.is_one()) return factors[0].first;
  return Expr(std::make_shared<MulNode>(coeff, std::move(factors), true));
}

Expr build_add(const Rational& constant, std::vector<std::pair<Expr, Rational>> terms) {
  if (terms.empty()) return make_number(constant);
  if (constant.is_zero() && terms.size() == 1) {
    const auto& [t, c] = terms[0];
    if (c.is_one()) return t;
    if (t.kind() == Kind::Mul) {
      const auto& m = t.as_mul();
      return build_mul(c * m.coeff, m.factors);
    }
    return build_mul(c, {{t, Expr(1)}});
  }
  return Expr(std::make_shared<AddNode>(constant, std::move(terms), true));
}

// Largest rational k with sum = k * primitive; sign follows the first term
// when allow_sign is set.
Rational content_of(const AddNode& a, bool allow_sign) {
  std::int64_t g = 0;
  std::int64_t l = 1;
  auto absorb = [&](const Rational& r) {
    if (r.is_zero()) return;
    g = gcd64(g, r.num() < 0 ? -r.num() : r.num());
    std::int64_t d = r.den();
    l = l / gcd64(l, d) * d;
  };
  absorb(a.constant);
  for (const auto& [t, c] : a.terms) absorb(c);
  if (g == 0) return Rational(1);
  Rational k(g, l);
  if (allow_sign && !a.terms.empty() && a.terms.front().second.is_negative()) k = -k;
  return k;
}

Expr scale_add(const AddNode& a, const Rational& k) {
  std::vector<std::pair<Expr, Rational>> terms;
  terms.reserve(a.terms.size());
  for (const auto& [t, c] : a.terms) terms.emplace_back(t, c / k);
  return build_add(a.constant / k, std::move(terms));
}

// Rational base raised to a rational exponent.
Expr pow_number(const Rational& b, const Rational& r) {
  if (r.is_integer()) return make_number(b.pow(r.num()));
  if (b.is_zero()) {
    if (r.is_negative()) throw std::domain_error("zero to a negative power");
    return zero_expr();
  }
  if (b.is_one()) return Expr(1);
  // r = n + f with 0 < f < 1
  std::int64_t n = r.num() / r.den();
  if (r.num() < 0 && r.num() % r.den() != 0) --n;
  Rational f = r - Rational(n);
  Rational root;
  if (b.exact_root(f.den(), root)) return make_number(b.pow(n) * root.pow(f.num()));
  Rational whole = b.pow(n);
  return build_mul(whole, {{make_number(b), make_number(f)}});
}

}  // namespace

// ---- nodes -----------------------------------------------------------------

NumberNode::NumberNode(Rational v) : Node(Kind::Number), value(v) { hash = mix(11, hash_rational(v)); }

SymbolNode::SymbolNode(const Coord& c) : Node(Kind::Symbol), coord(c) {
  hash = mix(13, hash_value(c));
  coords.push_back(c);
}

AddNode::AddNode(Rational c, std::vector<std::pair<Expr, Rational>> t, bool is_canonical)
    : Node(Kind::Add), constant(c), terms(std::move(t)) {
  canonical = is_canonical;
  hash = mix(17, hash_rational(constant));
  for (const auto& [e, k] : terms) {
    hash = mix(hash, mix(e.hash(), hash_rational(k)));
    merge_coords(coords, e.coords());
    if (!e.canonical()) canonical = false;
  }
}

MulNode::MulNode(Rational c, std::vector<std::pair<Expr, Expr>> f, bool is_canonical)
    : Node(Kind::Mul), coeff(c), factors(std::move(f)) {
  canonical = is_canonical;
  hash = mix(19, hash_rational(coeff));
  for (const auto& [b, e] : factors) {
    hash = mix(hash, mix(b.hash(), e.hash()));
    merge_coords(coords, b.coords());
    merge_coords(coords, e.coords());
    if (!b.canonical() || !e.canonical()) canonical = false;
  }
}

FuncNode::FuncNode(Fn f, int n, Expr a, bool is_canonical) : Node(Kind::Func), fn(f), order(n), arg(std::move(a)) {
  canonical = is_canonical && arg.canonical();
  hash = mix(mix(23, static_cast<std::size_t>(fn) * 131 + static_cast<std::size_t>(order)), arg.hash());
  coords = arg.coords();
}

UnknownNode::UnknownNode(std::shared_ptr<const UnknownDecl> d, std::vector<Expr> a, std::vector<std::uint8_t> dv,
                         bool is_canonical)
    : Node(Kind::Unknown), decl(std::move(d)), args(std::move(a)), derivs(std::move(dv)) {
  canonical = is_canonical;
  if (args.size() != decl->slots.size()) throw std::invalid_argument("wrong argument count for " + decl->name);
  if (derivs.empty()) derivs.assign(args.size(), 0);
  if (derivs.size() != args.size()) throw std::invalid_argument("derivative vector size mismatch");
  hash = mix(29, hash_string(decl->name));
  for (std::size_t i = 0; i < args.size(); ++i) {
    hash = mix(hash, mix(args[i].hash(), derivs[i]));
    merge_coords(coords, args[i].coords());
    if (!args[i].canonical()) canonical = false;
  }
}

// ---- Expr ------------------------------------------------------------------

Expr::Expr() : p_(zero_expr().p_) {}

Expr::Expr(Rational r) : p_(std::make_shared<NumberNode>(r)) {}

Expr Expr::symbol(const Coord& c) { return Expr(std::make_shared<SymbolNode>(c)); }

Kind Expr::kind() const { return p_->kind; }
bool Expr::canonical() const { return p_->canonical; }
std::size_t Expr::hash() const { return p_->hash; }
const std::vector<Coord>& Expr::coords() const { return p_->coords; }

bool Expr::depends_on(const Coord& c) const {
  const auto& cs = p_->coords;
  return std::binary_search(cs.begin(), cs.end(), c);
}

bool Expr::is_zero() const { return kind() == Kind::Number && as_number().value.is_zero(); }
bool Expr::is_one() const { return kind() == Kind::Number && as_number().value.is_one(); }
const Rational& Expr::number() const { return as_number().value; }

const NumberNode& Expr::as_number() const { return static_cast<const NumberNode&>(*p_); }
const SymbolNode& Expr::as_symbol() const { return static_cast<const SymbolNode&>(*p_); }
const AddNode& Expr::as_add() const { return static_cast<const AddNode&>(*p_); }
const MulNode& Expr::as_mul() const { return static_cast<const MulNode&>(*p_); }
const FuncNode& Expr::as_func() const { return static_cast<const FuncNode&>(*p_); }
const UnknownNode& Expr::as_unknown() const { return static_cast<const UnknownNode&>(*p_); }

// ---- ordering ----------------------------------------------------------------

namespace {

template <class T>
int cmp3(const T& a, const T& b) {
  if (a < b) return -1;
  if (b < a) return 1;
  return 0;
}

}  // namespace

int compare(const Expr& a, const Expr& b) {
  if (a.get() == b.get()) return 0;
  if (a.kind() != b.kind()) return cmp3(static_cast<int>(a.kind()), static_cast<int>(b.kind()));
  switch (a.kind()) {
    case Kind::Number:
      return cmp3(a.number(), b.number());
    case Kind::Symbol:
      return cmp3(a.as_symbol().coord, b.as_symbol().coord);
    case Kind::Unknown: {
      const auto& x = a.as_unknown();
      const auto& y = b.as_unknown();
      if (int c = x.decl->name.compare(y.decl->name); c != 0) return c < 0 ? -1 : 1;
      if (int c = cmp3(x.derivs, y.derivs); c != 0) return c;
      for (std::size_t i = 0; i < x.args.size() && i < y.args.size(); ++i) {
        if (int c = compare(x.args[i], y.args[i]); c != 0) return c;
      }
      return cmp3(x.args.size(), y.args.size());
    }
    case Kind::Func: {
      const auto& x = a.as_func();
      const auto& y = b.as_func();
      if (x.fn != y.fn) return cmp3(static_cast<int>(x.fn), static_cast<int>(y.fn));
      if (x.order != y.order) return cmp3(x.order, y.order);
      return compare(x.arg, y.arg);
    }
    case Kind::Mul: {
      const auto& x = a.as_mul();
      const auto& y = b.as_mul();
      std::size_t n = std::min(x.factors.size(), y.factors.size());
      // compare from the last factor: highest-ranked bases dominate the order
      for (std::size_t i = 0; i < n; ++i) {
        const auto& fx = x.factors[x.factors.size() - 1 - i];
        const auto& fy = y.factors[y.factors.size() - 1 - i];
        if (int c = compare(fx.first, fy.first); c != 0) return c;
        if (int c = compare(fx.second, fy.second); c != 0) return c;
      }
      if (x.factors.size() != y.factors.size()) return cmp3(x.factors.size(), y.factors.size());
      return cmp3(x.coeff, y.coeff);
    }
    case Kind::Add: {
      const auto& x = a.as_add();
      const auto& y = b.as_add();
      std::size_t n = std::min(x.terms.size(), y.terms.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (int c = compare(x.terms[i].first, y.terms[i].first); c != 0) return c;
        if (int c = cmp3(x.terms[i].second, y.terms[i].second); c != 0) return c;
      }
      if (x.terms.size() != y.terms.size()) return cmp3(x.terms.size(), y.terms.size());
      return cmp3(x.constant, y.constant);
    }
  }
  return 0;
}

// ---- canonical builders ------------------------------------------------------

std::pair<Rational, Expr> split_coefficient(const Expr& e) {
  if (e.kind() == Kind::Number) return {e.number(), Expr(1)};
  if (e.kind() == Kind::Mul) {
    const auto& m = e.as_mul();
    if (m.coeff.is_one()) return {Rational(1), e};
    return {m.coeff, build_mul(Rational(1), m.factors)};
  }
  return {Rational(1), e};
}

std::vector<std::pair<Rational, Expr>> terms_of(const Expr& e) {
  std::vector<std::pair<Rational, Expr>> out;
  if (e.kind() == Kind::Add && e.canonical()) {
    const auto& a = e.as_add();
    if (!a.constant.is_zero()) out.emplace_back(a.constant, Expr(1));
    for (const auto& [t, c] : a.terms) out.emplace_back(c, t);
    return out;
  }
  Expr c = canon(e);
  if (c.kind() == Kind::Add) return terms_of(c);
  if (c.is_zero()) return out;
  out.push_back(split_coefficient(c));
  return out;
}

Expr add(std::span<const Expr> items) {
  Rational constant(0);
  std::map<Expr, Rational, ExprLess> acc;
  auto put = [&](const Expr& t, const Rational& c) {
    auto [it, inserted] = acc.try_emplace(t, c);
    if (!inserted) it->second += c;
  };
  for (const Expr& raw_item : items) {
    Expr x = canon(raw_item);
    switch (x.kind()) {
      case Kind::Number:
        constant += x.number();
        break;
      case Kind::Add: {
        const auto& a = x.as_add();
        constant += a.constant;
        for (const auto& [t, c] : a.terms) put(t, c);
        break;
      }
      case Kind::Mul: {
        auto [c, rest] = split_coefficient(x);
        put(rest, c);
        break;
      }
      default:
        put(x, Rational(1));
    }
  }
  std::vector<std::pair<Expr, Rational>> terms;
  terms.reserve(acc.size());
  for (auto& [t, c] : acc) {
    if (!c.is_zero()) terms.emplace_back(t, c);
  }
  return build_add(constant, std::move(terms));
}

Expr mul(std::span<const Expr> items) {
  Rational coeff(1);
  std::map<Expr, Expr, ExprLess> acc;
  std::vector<Expr> exp_args;
  auto put = [&](const Expr& b, const Expr& e) {
    if (b.kind() == Kind::Func && b.as_func().fn == Fn::Exp && e.is_one()) {
      exp_args.push_back(b.as_func().arg);
      return;
    }
    auto [it, inserted] = acc.try_emplace(b, e);
    if (!inserted) it->second = it->second + e;
  };
  for (const Expr& raw_item : items) {
    Expr x = canon(raw_item);
    switch (x.kind()) {
      case Kind::Number:
        coeff *= x.number();
        if (coeff.is_zero()) return zero_expr();
        break;
      case Kind::Mul: {
        const auto& m = x.as_mul();
        coeff *= m.coeff;
        for (const auto& [b, e] : m.factors) put(b, e);
        break;
      }
      case Kind::Add: {
        const auto& a = x.as_add();
        Rational k = content_of(a, true);
        if (k.is_one()) {
          put(x, Expr(1));
        } else {
          coeff *= k;
          put(scale_add(a, k), Expr(1));
        }
        break;
      }
      default:
        put(x, Expr(1));
    }
  }
  if (coeff.is_zero()) return zero_expr();

  if (exp_args.size() > 1) {
    Expr combined = jetcons::exp(add(exp_args));
    std::vector<Expr> again;
    again.push_back(make_number(coeff));
    for (auto& [b, e] : acc) again.push_back(pow(b, e));
    again.push_back(combined);
    return mul(again);
  }

  std::vector<std::pair<Expr, Expr>> plain;
  std::vector<std::pair<Expr, int>> expandable;
  for (auto& [b, e] : acc) {
    if (e.is_zero()) continue;
    if (b.kind() == Kind::Number) {
      if (e.is_number()) {
        Expr v = pow_number(b.number(), e.number());
        if (v.is_number()) {
          coeff *= v.number();
        } else {
          const auto& m = v.as_mul();
          coeff *= m.coeff;
          for (const auto& f : m.factors) plain.push_back(f);
        }
      } else if (!b.number().is_one()) {
        plain.emplace_back(b, e);
      }
      continue;
    }
    if (b.kind() == Kind::Add && e.is_number() && e.number().is_integer() && e.number().num() > 0 &&
        e.number().num() <= kMaxExpandPower) {
      expandable.emplace_back(b, static_cast<int>(e.number().num()));
      continue;
    }
    if (!e.is_one() && (b.kind() == Kind::Mul || (b.kind() == Kind::Func && b.as_func().fn == Fn::Exp))) {
      // merged exponents on a reducible base: re-run through pow
      std::vector<Expr> again;
      again.push_back(make_number(coeff));
      for (auto& [b2, e2] : acc) again.push_back(compare(b2, b) == 0 ? pow(b2, e2) : build_mul(Rational(1), {{b2, e2}}));
      for (auto& a : exp_args) again.push_back(jetcons::exp(a));
      return mul(again);
    }
    plain.emplace_back(b, e);
  }
  if (exp_args.size() == 1) {
    Expr ex = jetcons::exp(exp_args[0]);
    if (ex.kind() == Kind::Func) {
      plain.emplace_back(ex, Expr(1));
      std::sort(plain.begin(), plain.end(), [](const auto& l, const auto& r) { return compare(l.first, r.first) < 0; });
    } else {
      std::vector<Expr> again{build_mul(coeff, std::move(plain)), ex};
      for (auto& [b, n] : expandable) again.push_back(build_mul(Rational(1), {{b, Expr(n)}}));
      return mul(again);
    }
  }
  Expr base_product = build_mul(coeff, std::move(plain));
  if (expandable.empty()) return base_product;

  // Distribute over every sum raised to a positive integer power.
  std::vector<Expr> partial{base_product};
  for (const auto& [sum, n] : expandable) {
    const auto& a = sum.as_add();
    for (int k = 0; k < n; ++k) {
      std::vector<Expr> next;
      next.reserve(partial.size() * (a.terms.size() + 1));
      for (const Expr& p : partial) {
        if (!a.constant.is_zero()) {
          Expr pc[] = {p, make_number(a.constant)};
          next.push_back(mul(pc));
        }
        for (const auto& [t, c] : a.terms) {
          Expr pt[] = {p, t, make_number(c)};
          next.push_back(mul(pt));
        }
      }
      partial.swap(next);
    }
  }
  return add(partial);
}

Expr pow(const Expr& base_in, const Expr& exp_in) {
  Expr b = canon(base_in);
  Expr e = canon(exp_in);
  if (e.is_zero()) return Expr(1);
  if (e.is_one()) return b;
  if (b.is_number()) {
    if (e.is_number()) return pow_number(b.number(), e.number());
    if (b.number().is_one()) return Expr(1);
    if (b.number().is_zero()) return zero_expr();
    return build_mul(Rational(1), {{b, e}});
  }
  if (b.kind() == Kind::Mul) {
    const auto& m = b.as_mul();
    std::vector<Expr> parts;
    parts.reserve(m.factors.size() + 1);
    if (!m.coeff.is_one()) parts.push_back(pow(make_number(m.coeff), e));
    for (const auto& [fb, fe] : m.factors) parts.push_back(pow(fb, fe * e));
    return mul(parts);
  }
  if (b.kind() == Kind::Func && b.as_func().fn == Fn::Exp) {
    return jetcons::exp(b.as_func().arg * e);
  }
  if (b.kind() == Kind::Add) {
    const bool integer_exp = e.is_number() && e.number().is_integer();
    if (integer_exp && e.number().num() > 0 && e.number().num() <= kMaxExpandPower) {
      std::vector<Expr> copies(static_cast<std::size_t>(e.number().num()), b);
      return mul(copies);
    }
    const auto& a = b.as_add();
    Rational k = content_of(a, integer_exp);
    if (!k.is_one()) {
      Expr prim = scale_add(a, k);
      Expr parts[] = {pow(make_number(k), e), build_mul(Rational(1), {{prim, e}})};
      return mul(parts);
    }
  }
  return build_mul(Rational(1), {{b, e}});
}

Expr operator+(const Expr& a, const Expr& b) {
  Expr v[] = {a, b};
  return add(v);
}

Expr operator-(const Expr& a, const Expr& b) {
  Expr v[] = {a, -b};
  return add(v);
}

Expr operator-(const Expr& a) {
  Expr v[] = {Expr(-1), a};
  return mul(v);
}

Expr operator*(const Expr& a, const Expr& b) {
  Expr v[] = {a, b};
  return mul(v);
}

Expr operator/(const Expr& a, const Expr& b) {
  Expr cb = canon(b);
  if (cb.is_zero()) throw std::domain_error("division by zero expression");
  Expr v[] = {a, pow(cb, Expr(-1))};
  return mul(v);
}

Expr ln(const Expr& in) {
  Expr a = canon(in);
  if (a.is_number()) {
    if (a.number().is_one()) return zero_expr();
    if (!a.number().is_negative() && !a.number().is_zero()) {
      // ln(p/q) = ln p - ln q keeps rational arguments integral
      if (!a.number().is_integer()) {
        return ln(Expr(Rational(a.number().num()))) - ln(Expr(Rational(a.number().den())));
      }
    }
    return Expr(std::make_shared<FuncNode>(Fn::Ln, 0, a, true));
  }
  if (a.kind() == Kind::Func && a.as_func().fn == Fn::Exp) return a.as_func().arg;
  if (a.kind() == Kind::Mul) {
    const auto& m = a.as_mul();
    if (!m.coeff.is_negative()) {
      std::vector<Expr> parts;
      if (!m.coeff.is_one()) parts.push_back(ln(make_number(m.coeff)));
      for (const auto& [b, e] : m.factors) parts.push_back(e * ln(b));
      return add(parts);
    }
  }
  return Expr(std::make_shared<FuncNode>(Fn::Ln, 0, a, true));
}

Expr exp(const Expr& in) {
  Expr a = canon(in);
  if (a.is_zero()) return Expr(1);
  if (a.kind() == Kind::Func && a.as_func().fn == Fn::Ln) return a.as_func().arg;
  return Expr(std::make_shared<FuncNode>(Fn::Exp, 0, a, true));
}

Expr sin(const Expr& in) {
  Expr a = canon(in);
  if (a.is_zero()) return zero_expr();
  return Expr(std::make_shared<FuncNode>(Fn::Sin, 0, a, true));
}

Expr cos(const Expr& in) {
  Expr a = canon(in);
  if (a.is_zero()) return Expr(1);
  return Expr(std::make_shared<FuncNode>(Fn::Cos, 0, a, true));
}

Expr sqrt(const Expr& a) { return pow(a, Expr(Rational(1, 2))); }

Expr bessel_j(int n, const Expr& in) {
  if (n < 0) throw std::invalid_argument("negative Bessel order");
  Expr a = canon(in);
  if (a.is_zero()) return Expr(n == 0 ? 1 : 0);
  return Expr(std::make_shared<FuncNode>(Fn::BesselJ, n, a, true));
}

Expr bessel_y(int n, const Expr& in) {
  if (n < 0) throw std::invalid_argument("negative Bessel order");
  Expr a = canon(in);
  return Expr(std::make_shared<FuncNode>(Fn::BesselY, n, a, true));
}

Expr func(Fn fn, int order, const Expr& a) {
  switch (fn) {
    case Fn::Ln:
      return ln(a);
    case Fn::Exp:
      return exp(a);
    case Fn::Sin:
      return sin(a);
    case Fn::Cos:
      return cos(a);
    case Fn::BesselJ:
      return bessel_j(order, a);
    case Fn::BesselY:
      return bessel_y(order, a);
  }
  throw std::logic_error("unhandled function kind");
}

Expr unknown(const std::shared_ptr<const UnknownDecl>& decl) {
  std::vector<Expr> args;
  args.reserve(decl->slots.size());
  for (const auto& s : decl->slots) args.push_back(Expr::symbol(s));
  return unknown(decl, std::move(args));
}

Expr unknown(const std::shared_ptr<const UnknownDecl>& decl, std::vector<Expr> args,
             std::vector<std::uint8_t> derivs) {
  for (auto& a : args) a = canon(a);
  return Expr(std::make_shared<UnknownNode>(decl, std::move(args), std::move(derivs), true));
}

Expr normalize(const Expr& e) {
  if (e.canonical()) return e;
  switch (e.kind()) {
    case Kind::Number:
    case Kind::Symbol:
      return e;
    case Kind::Add: {
      const auto& a = e.as_add();
      std::vector<Expr> parts;
      parts.reserve(a.terms.size() + 1);
      parts.push_back(make_number(a.constant));
      for (const auto& [t, c] : a.terms) {
        Expr tc[] = {normalize(t), make_number(c)};
        parts.push_back(mul(tc));
      }
      return add(parts);
    }
    case Kind::Mul: {
      const auto& m = e.as_mul();
      std::vector<Expr> parts;
      parts.reserve(m.factors.size() + 1);
      parts.push_back(make_number(m.coeff));
      for (const auto& [b, x] : m.factors) parts.push_back(pow(normalize(b), normalize(x)));
      return mul(parts);
    }
    case Kind::Func: {
      const auto& f = e.as_func();
      return func(f.fn, f.order, normalize(f.arg));
    }
    case Kind::Unknown: {
      const auto& u = e.as_unknown();
      return unknown(u.decl, u.args, u.derivs);
    }
  }
  return e;
}

namespace raw {

Expr add(std::vector<Expr> terms) {
  if (terms.size() == 1) return terms[0];
  std::vector<std::pair<Expr, Rational>> t;
  t.reserve(terms.size());
  for (auto& x : terms) t.emplace_back(std::move(x), Rational(1));
  return Expr(std::make_shared<AddNode>(Rational(0), std::move(t), false));
}

Expr mul(std::vector<Expr> factors) {
  if (factors.size() == 1) return factors[0];
  std::vector<std::pair<Expr, Expr>> f;
  f.reserve(factors.size());
  for (auto& x : factors) f.emplace_back(std::move(x), Expr(1));
  return Expr(std::make_shared<MulNode>(Rational(1), std::move(f), false));
}

Expr pow(const Expr& base, const Expr& exponent) {
  return Expr(std::make_shared<MulNode>(Rational(1), std::vector<std::pair<Expr, Expr>>{{base, exponent}}, false));
}

Expr neg(const Expr& a) {
  return Expr(std::make_shared<MulNode>(Rational(-1), std::vector<std::pair<Expr, Expr>>{{a, Expr(1)}}, false));
}

Expr func(Fn fn, int order, const Expr& a) { return Expr(std::make_shared<FuncNode>(fn, order, a, false)); }

Expr unknown(const std::shared_ptr<const UnknownDecl>& decl, std::vector<Expr> args,
             std::vector<std::uint8_t> derivs) {
  return Expr(std::make_shared<UnknownNode>(decl, std::move(args), std::move(derivs), false));
}

}  // namespace raw

}  // namespace jetcons
