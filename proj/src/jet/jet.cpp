#include "jetcons/jet.hpp"

#include <algorithm>
#include <stdexcept>

namespace jetcons {

PDESystem make_system(FramePtr frame, std::vector<Expr> equations, std::map<Coord, Expr> solve_form) {
  PDESystem sys;
  sys.frame = std::move(frame);
  for (auto& e : equations) sys.equations.push_back(normalize(e));
  for (auto& [c, rhs] : solve_form) {
    if (!c.is_jet()) throw std::invalid_argument("solved form must lead with a jet coordinate");
    sys.solve_form.emplace(c, normalize(rhs));
  }
  for (const auto& [lead, rhs] : sys.solve_form) {
    for (const auto& [other, unused] : sys.solve_form) {
      (void)unused;
      for (const auto& c : rhs.coords()) {
        if (c.is_jet() && c.index == other.index && c.multi.dominates(other.multi)) {
          throw std::invalid_argument("solved form right-hand side contains a leading coordinate");
        }
      }
    }
    (void)lead;
  }
  return sys;
}

std::vector<Expr> characteristic(const VectorField& q, const Frame& frame) {
  const std::size_t p = frame.num_independents();
  std::vector<Expr> eta;
  for (std::size_t a = 0; a < q.phi.size(); ++a) {
    Expr v = q.phi[a];
    for (std::size_t i = 0; i < p && i < q.xi.size(); ++i) {
      v -= q.xi[i] * Expr::symbol(Coord::jet(a, frame.zero_index().raised(i)));
    }
    eta.push_back(v);
  }
  return eta;
}

Prolongation::Prolongation(VectorField q, FramePtr frame) : q_(std::move(q)), frame_(std::move(frame)) {
  const std::size_t p = frame_->num_independents();
  q_.xi.resize(p);
  q_.phi.resize(frame_->num_dependents());
  for (auto& x : q_.xi) x = normalize(x);
  for (auto& f : q_.phi) f = normalize(f);
  dxi_.resize(p * p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t k = 0; k < p; ++k) dxi_[i * p + k] = total_derivative(q_.xi[k], i);
  }
}

Expr Prolongation::coefficient(std::size_t alpha, const MultiIndex& J) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = cache_.find({alpha, J}); it != cache_.end()) return it->second;
  }
  const std::size_t p = frame_->num_independents();
  Expr out;
  if (J.order() == 0) {
    out = q_.phi[alpha];
  } else {
    std::size_t i = 0;
    while (J[i] == 0) ++i;
    MultiIndex K = J.lowered(i);
    Expr prev = coefficient(alpha, K);
    std::vector<Expr> parts{total_derivative(prev, i)};
    for (std::size_t k = 0; k < p; ++k) {
      const Expr& d = dxi_[i * p + k];
      if (d.is_zero()) continue;
      parts.push_back(-d * Expr::symbol(Coord::jet(alpha, K.raised(k))));
    }
    out = add(parts);
  }
  std::lock_guard<std::mutex> lock(mu_);
  cache_.emplace(std::make_pair(alpha, J), out);
  return out;
}

std::map<Coord, Expr> Prolongation::up_to(int n) {
  std::map<Coord, Expr> out;
  const std::size_t p = frame_->num_independents();
  std::vector<MultiIndex> level{frame_->zero_index()};
  std::vector<MultiIndex> all = level;
  for (int k = 1; k <= n; ++k) {
    std::vector<MultiIndex> next;
    for (const auto& J : level) {
      for (std::size_t i = 0; i < p; ++i) {
        MultiIndex K = J.raised(i);
        if (std::find(next.begin(), next.end(), K) == next.end()) next.push_back(K);
      }
    }
    all.insert(all.end(), next.begin(), next.end());
    level = std::move(next);
  }
  for (std::size_t a = 0; a < frame_->num_dependents(); ++a) {
    for (const auto& J : all) out.emplace(Coord::jet(a, J), coefficient(a, J));
  }
  return out;
}

Expr Prolongation::apply(const Expr& in) {
  Expr e = normalize(in);
  std::vector<Expr> parts;
  for (const Coord& c : e.coords()) {
    Expr coef;
    if (c.is_independent()) {
      coef = q_.xi[c.index];
    } else if (c.is_jet()) {
      coef = coefficient(c.index, c.multi);
    } else if (auto it = q_.extra.find(c); it != q_.extra.end()) {
      coef = it->second;
    }
    if (coef.is_zero()) continue;
    parts.push_back(coef * diff_partial(e, c));
  }
  return add(parts);
}

std::map<Coord, Expr> prolong(const VectorField& q, const FramePtr& frame, int n) {
  Prolongation pr(q, frame);
  return pr.up_to(n);
}

Expr euler_operator(const Expr& in, std::size_t alpha, std::size_t p) {
  Expr e = normalize(in);
  std::vector<Expr> parts;
  for (const Coord& c : e.coords()) {
    if (!c.is_jet() || c.index != alpha) continue;
    Expr d = diff_partial(e, c);
    if (d.is_zero()) continue;
    if (c.multi.size() != p) throw std::invalid_argument("multi-index length does not match the frame");
    Expr t = total_derivative(d, c.multi);
    parts.push_back(c.multi.order() % 2 == 0 ? t : -t);
  }
  return add(parts);
}

Expr on_solution(const Expr& in, const PDESystem& sys) {
  if (!sys.has_solve_form()) throw std::invalid_argument("system is not in evolutionary form");
  std::map<Coord, Expr> consequence;
  auto rewrite = [&](const Coord& c) -> const Expr* {
    if (!c.is_jet()) return nullptr;
    if (auto it = consequence.find(c); it != consequence.end()) return &it->second;
    for (const auto& [lead, rhs] : sys.solve_form) {
      if (lead.index == c.index && c.multi.dominates(lead.multi)) {
        Expr v = total_derivative(rhs, c.multi.minus(lead.multi));
        return &consequence.emplace(c, v).first->second;
      }
    }
    return nullptr;
  };
  Expr e = normalize(in);
  for (int iter = 0; iter < 64; ++iter) {
    std::map<Coord, Expr> b;
    for (const Coord& c : e.coords()) {
      if (const Expr* v = rewrite(c)) b.emplace(c, *v);
    }
    if (b.empty()) return e;
    e = substitute(e, b);
  }
  throw std::runtime_error("on-solution restriction did not terminate");
}

namespace {

int order_along(const Coord& c, std::size_t i) { return c.is_jet() ? c.multi[i] : 0; }

// Antiderivative of one monomial factor group in w.
std::optional<Expr> integrate_monomial(const Expr& mono, const Coord& w) {
  Expr wsym = Expr::symbol(w);
  if (!mono.depends_on(w)) return mono * wsym;
  std::vector<std::pair<Expr, Expr>> factors;
  if (mono.kind() == Kind::Mul) {
    factors = mono.as_mul().factors;
  } else {
    factors.emplace_back(mono, Expr(1));
  }
  std::vector<Expr> rest;
  Rational power(0);
  bool has_power = false;
  Expr log_factor;
  int log_count = 0;
  Expr unknown_factor;
  for (const auto& [b, x] : factors) {
    if (!b.depends_on(w) && !x.depends_on(w)) {
      rest.push_back(pow(b, x));
      continue;
    }
    if (x.depends_on(w)) return std::nullopt;
    if (b.kind() == Kind::Symbol && b.as_symbol().coord == w && x.is_number()) {
      power = x.number();
      has_power = true;
      continue;
    }
    if (b.kind() == Kind::Func && b.as_func().fn == Fn::Ln && b.as_func().arg == wsym && x.is_one()) {
      log_factor = b;
      ++log_count;
      continue;
    }
    if (b.kind() == Kind::Unknown && x.is_one() && unknown_factor.is_zero()) {
      unknown_factor = b;
      continue;
    }
    return std::nullopt;
  }
  Expr r = mul(rest);
  if (!unknown_factor.is_zero()) {
    if (has_power || log_count > 0) return std::nullopt;
    const auto& u = unknown_factor.as_unknown();
    for (std::size_t k = 0; k < u.args.size(); ++k) {
      bool is_w = u.args[k] == wsym;
      if (!is_w && u.args[k].depends_on(w)) return std::nullopt;
      if (is_w) {
        if (u.derivs[k] == 0) return std::nullopt;
        for (std::size_t j = 0; j < u.args.size(); ++j) {
          if (j != k && u.args[j].depends_on(w)) return std::nullopt;
        }
        std::vector<std::uint8_t> d = u.derivs;
        --d[k];
        return r * unknown(u.decl, u.args, d);
      }
    }
    return std::nullopt;
  }
  if (log_count > 1) return std::nullopt;
  if (log_count == 1) {
    if (power == Rational(-1)) return r * pow(log_factor, Expr(2)) * Expr(Rational(1, 2));
    Rational n1 = power + Rational(1);
    Expr wp = pow(wsym, Expr(n1));
    return r * (wp * log_factor / Expr(n1) - wp / Expr(n1 * n1));
  }
  if (power == Rational(-1)) return r * ln(wsym);
  Rational n1 = power + Rational(1);
  return r * pow(wsym, Expr(n1)) / Expr(n1);
}

// Euler test in x^i alone: each (dependent, other-orders) family is a
// separate dependent variable of a one-dimensional problem.
bool x_only_euler_vanishes(const Expr& e, std::size_t i, const ZeroOptions& opt) {
  std::map<std::pair<std::size_t, MultiIndex>, std::vector<Coord>> families;
  for (const Coord& c : e.coords()) {
    if (!c.is_jet()) continue;
    MultiIndex base = c.multi;
    while (base[i] > 0) base = base.lowered(i);
    families[{c.index, base}].push_back(c);
  }
  for (const auto& [key, coords] : families) {
    std::vector<Expr> parts;
    for (const Coord& c : coords) {
      Expr d = diff_partial(e, c);
      if (d.is_zero()) continue;
      int k = c.multi[i];
      for (int r = 0; r < k; ++r) d = total_derivative(d, i);
      parts.push_back(k % 2 == 0 ? d : -d);
    }
    if (!is_zero(add(parts), opt).zero()) return false;
  }
  return true;
}

}  // namespace

std::optional<Expr> integrate(const Expr& in, const Coord& w) {
  Expr e = normalize(in);
  std::vector<Expr> parts;
  for (const auto& [c, mono] : terms_of(e)) {
    auto r = integrate_monomial(mono, w);
    if (!r) return std::nullopt;
    parts.push_back(Expr(c) * *r);
  }
  return add(parts);
}

std::optional<Expr> inverse_total_derivative(const Expr& in, std::size_t i, const ZeroOptions& opt) {
  const Expr target = normalize(in);
  if (target.is_zero()) return Expr(0);
  for (const Coord& c : target.coords()) {
    if (c.is_jet() && c.multi.size() <= i) throw std::invalid_argument("independent index out of range");
  }
  if (!x_only_euler_vanishes(target, i, opt)) return std::nullopt;

  Expr rest = target;
  Expr X(0);
  for (int guard = 0; guard < 256; ++guard) {
    if (rest.is_zero()) break;
    // highest x^i-order jet coordinate
    const Coord* top = nullptr;
    for (const Coord& c : rest.coords()) {
      if (order_along(c, i) == 0) continue;
      if (top == nullptr || order_along(c, i) > order_along(*top, i) ||
          (order_along(c, i) == order_along(*top, i) && *top < c)) {
        top = &c;
      }
    }
    Expr P;
    if (top == nullptr) {
      bool has_jet = false;
      for (const Coord& c : rest.coords()) has_jet = has_jet || c.is_jet();
      auto r = has_jet ? std::nullopt : integrate(rest, Coord::independent(i));
      if (!r) {
        // remainders that cancel only numerically (special-function identities)
        if (is_zero(rest, opt).zero()) break;
        return std::nullopt;
      }
      P = *r;
    } else {
      Coord v = *top;
      Expr A = diff_partial(rest, v);
      if (A.depends_on(v)) return std::nullopt;
      Coord wc = Coord::jet(v.index, v.multi.lowered(i));
      auto r = integrate(A, wc);
      if (!r) return std::nullopt;
      P = *r;
    }
    X += P;
    Expr next = rest - total_derivative(P, i);
    if (next == rest) return std::nullopt;
    rest = next;
  }
  if (!is_zero(rest, opt).zero()) return std::nullopt;
  if (!is_zero(total_derivative(X, i) - target, opt).zero()) return std::nullopt;
  return X;
}

std::optional<Expr> inverse_total_derivative_x(const Expr& e, const Frame& frame, const ZeroOptions& opt) {
  if (frame.num_independents() == 0) return std::nullopt;
  return inverse_total_derivative(e, frame.num_independents() - 1, opt);
}

}  // namespace jetcons
