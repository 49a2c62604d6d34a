#include "jetcons/eval.hpp"

#include <cmath>
#include <limits>

namespace jetcons {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::uint64_t hash_name(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

double unit_from(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw EvalError(std::string("non-finite value in ") + what);
  return v;
}

double ipow(double b, std::int64_t n) {
  if (n < 0) {
    if (std::abs(b) < 1e-300) throw EvalError("pole");
    return 1.0 / ipow(b, -n);
  }
  double r = 1.0;
  while (n > 0) {
    if (n & 1) r *= b;
    b *= b;
    n >>= 1;
  }
  return r;
}

double power(double b, const Expr& x, double xv) {
  if (x.is_number() && x.number().is_integer()) return ipow(b, x.number().num());
  if (b < 0.0) throw EvalError("fractional power of a negative value");
  if (b == 0.0) {
    if (xv <= 0.0) throw EvalError("pole");
    return 0.0;
  }
  return std::pow(b, xv);
}

struct Evaluator {
  const Point& p;
  const StandIns& s;

  double run(const Expr& e) const {
    switch (e.kind()) {
      case Kind::Number:
        return e.number().to_double();
      case Kind::Symbol: {
        auto it = p.find(e.as_symbol().coord);
        if (it == p.end()) throw std::invalid_argument("point does not cover every coordinate");
        return it->second;
      }
      case Kind::Add: {
        const auto& a = e.as_add();
        double v = a.constant.to_double();
        for (const auto& [t, k] : a.terms) v += k.to_double() * run(t);
        return checked(v, "sum");
      }
      case Kind::Mul: {
        const auto& m = e.as_mul();
        double v = m.coeff.to_double();
        for (const auto& [b, x] : m.factors) {
          double xv = x.is_number() ? x.number().to_double() : run(x);
          v *= power(run(b), x, xv);
        }
        return checked(v, "product");
      }
      case Kind::Func: {
        const auto& f = e.as_func();
        double a = run(f.arg);
        switch (f.fn) {
          case Fn::Ln:
            if (a <= 0.0) throw EvalError("logarithm of a non-positive value");
            return std::log(a);
          case Fn::Exp:
            return checked(std::exp(a), "exp");
          case Fn::Sin:
            return std::sin(a);
          case Fn::Cos:
            return std::cos(a);
          case Fn::BesselJ:
            return bessel_j_value(f.order, a);
          case Fn::BesselY:
            return bessel_y_value(f.order, a);
        }
        break;
      }
      case Kind::Unknown: {
        const auto& u = e.as_unknown();
        std::vector<double> args;
        args.reserve(u.args.size());
        for (const auto& a : u.args) args.push_back(run(a));
        if (s.override_fn) {
          if (auto v = s.override_fn(u, args)) return *v;
        }
        return s.value(u.decl->name, u.derivs, args);
      }
    }
    throw std::logic_error("unhandled node in evaluation");
  }
};

// Visits every monomial exponent vector of total degree <= deg.
template <class F>
void for_monomials(std::vector<int>& m, std::size_t slot, int budget, F&& fn) {
  if (slot == m.size()) {
    fn(m);
    return;
  }
  for (int k = 0; k <= budget; ++k) {
    m[slot] = k;
    for_monomials(m, slot + 1, budget - k, fn);
  }
  m[slot] = 0;
}

}  // namespace

double StandIns::value(const std::string& name, const std::vector<std::uint8_t>& derivs,
                       const std::vector<double>& args) const {
  const std::uint64_t base = splitmix64(seed_ ^ hash_name(name));
  std::vector<int> m(args.size(), 0);
  double total = 0.0;
  for_monomials(m, 0, degree_, [&](const std::vector<int>& mono) {
    for (std::size_t i = 0; i < mono.size(); ++i) {
      if (mono[i] < derivs[i]) return;
    }
    std::uint64_t h = base;
    for (int k : mono) h = splitmix64(h + static_cast<std::uint64_t>(k) + 0x51ULL);
    double c = 2.0 * unit_from(h) - 1.0;
    double term = c;
    for (std::size_t i = 0; i < mono.size(); ++i) {
      int k = mono[i];
      for (int r = 0; r < derivs[i]; ++r) term *= static_cast<double>(k - r);
      term *= ipow(args[i], k - derivs[i]);
    }
    total += term;
  });
  return total;
}

double eval(const Expr& e, const Point& p, const StandIns& s) { return Evaluator{p, s}.run(e); }

double bessel_j_value(int n, double z) {
  if (z < 0.0) return (n % 2 == 0 ? 1.0 : -1.0) * bessel_j_value(n, -z);
  return checked(std::cyl_bessel_j(static_cast<double>(n), z), "besselJ");
}

double bessel_y_value(int n, double z) {
  if (z <= 0.0) throw EvalError("besselY at a non-positive argument");
  return checked(std::cyl_neumann(static_cast<double>(n), z), "besselY");
}

double magnitude_scale(const Expr& e, const Point& p, const StandIns& s) {
  Evaluator ev{p, s};
  if (e.kind() != Kind::Add) return std::abs(ev.run(e));
  const auto& a = e.as_add();
  double m = std::abs(a.constant.to_double());
  for (const auto& [t, k] : a.terms) m += std::abs(k.to_double() * ev.run(t));
  return m;
}

Point sample_point(const std::vector<Coord>& coords, const ZeroOptions& opt, int i, int attempt) {
  Point p;
  const std::uint64_t base =
      splitmix64(opt.seed ^ splitmix64(static_cast<std::uint64_t>(i) * 0x1000193ULL + static_cast<std::uint64_t>(attempt)));
  for (const auto& c : coords) {
    if (auto it = opt.fixed.find(c); it != opt.fixed.end()) {
      p.emplace(c, it->second);
      continue;
    }
    double u = unit_from(splitmix64(base ^ hash_value(c) * 0x9e3779b97f4a7c15ULL));
    p.emplace(c, opt.lo + (opt.hi - opt.lo) * u);
  }
  return p;
}

std::string ZeroVerdict::status_name() const {
  switch (status) {
    case Status::ProvenZero:
      return "proven_zero";
    case Status::ProbablyZero:
      return "probably_zero";
    case Status::NonZero:
      return "nonzero";
  }
  return "?";
}

ZeroVerdict is_zero(const Expr& e, const ZeroOptions& opt) {
  ZeroVerdict v;
  Expr n = normalize(e);
  if (n.is_zero()) return v;
  if (n.is_number()) {
    v.status = ZeroVerdict::Status::NonZero;
    v.value = n.number().to_double();
    v.samples = 1;
    v.max_residual = std::abs(v.value);
    return v;
  }
  StandIns s(splitmix64(opt.seed + 0xabcdefULL), opt.standin_degree);
  s.override_fn = opt.override_fn;
  v.status = ZeroVerdict::Status::ProbablyZero;
  for (int i = 0; i < opt.samples; ++i) {
    bool ok = false;
    for (int attempt = 0; attempt <= opt.redraws && !ok; ++attempt) {
      Point p = sample_point(n.coords(), opt, i, attempt);
      double value = 0.0;
      double scale = 0.0;
      try {
        value = eval(n, p, s);
        scale = magnitude_scale(n, p, s);
      } catch (const EvalError&) {
        continue;
      }
      ok = true;
      ++v.samples;
      double r = std::abs(value) / (1.0 + scale);
      v.max_residual = std::max(v.max_residual, r);
      if (r >= opt.rel_tol && v.status != ZeroVerdict::Status::NonZero) {
        v.status = ZeroVerdict::Status::NonZero;
        v.witness = std::move(p);
        v.value = value;
      }
    }
    if (!ok) throw UnsamplableError("no valid sample after re-draws");
  }
  return v;
}

}  // namespace jetcons
