#include <cmath>
#include <stdexcept>

#include "jetcons/eval.hpp"
#include "jetcons/numerics.hpp"

namespace jetcons::num {

namespace {

constexpr std::size_t kMaxStack = 256;

double powi(double b, long n) {
  const bool inv = n < 0;
  unsigned long k = inv ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  double r = 1.0;
  while (k) {
    if (k & 1u) r *= b;
    b *= b;
    k >>= 1u;
  }
  return inv ? 1.0 / r : r;
}

int var_index(const std::string& name) {
  static const char* names[] = {"t", "x", "u", "h", "u_x", "h_x", "u_xx", "h_xx"};
  for (int i = 0; i < Program::kVars; ++i)
    if (name == names[i]) return i;
  return -1;
}

}  // namespace

Program Program::compile(const Expr& e, const Frame& frame, const std::map<std::string, double>& params) {
  Program p;
  p.emit(e, frame, params);
  std::size_t d = 0;
  for (const auto& ins : p.code_) {
    switch (ins.op) {
      case Op::Const:
      case Op::Load:
        ++d;
        break;
      case Op::Add:
      case Op::Mul:
      case Op::Pow:
        --d;
        break;
      default:
        break;
    }
    p.depth_ = std::max(p.depth_, d);
  }
  if (p.depth_ > kMaxStack) throw std::invalid_argument("expression too deep to compile");
  return p;
}

void Program::emit(const Expr& e, const Frame& frame, const std::map<std::string, double>& params) {
  switch (e.kind()) {
    case Kind::Number:
      code_.push_back({Op::Const, 0, e.number().to_double()});
      return;
    case Kind::Symbol: {
      const Coord& c = e.as_symbol().coord;
      const std::string name = frame.name(c);
      if (c.is_parameter()) {
        auto it = params.find(name);
        if (it == params.end()) throw std::invalid_argument("no value for parameter " + name);
        code_.push_back({Op::Const, 0, it->second});
        return;
      }
      const int v = var_index(name);
      if (v < 0) throw std::invalid_argument("coordinate " + name + " is not available to the solver");
      used_ |= 1u << v;
      code_.push_back({Op::Load, v, 0.0});
      return;
    }
    case Kind::Add: {
      const auto& a = e.as_add();
      code_.push_back({Op::Const, 0, a.constant.to_double()});
      for (const auto& [t, k] : a.terms) {
        emit(t, frame, params);
        if (!(k == Rational(1))) {
          code_.push_back({Op::Const, 0, k.to_double()});
          code_.push_back({Op::Mul});
        }
        code_.push_back({Op::Add});
      }
      return;
    }
    case Kind::Mul: {
      const auto& m = e.as_mul();
      code_.push_back({Op::Const, 0, m.coeff.to_double()});
      for (const auto& [b, x] : m.factors) {
        emit(b, frame, params);
        if (x.is_number() && x.number().is_integer()) {
          code_.push_back({Op::PowI, static_cast<int>(x.number().num()), 0.0});
        } else {
          emit(x, frame, params);
          code_.push_back({Op::Pow});
        }
        code_.push_back({Op::Mul});
      }
      return;
    }
    case Kind::Func: {
      const auto& f = e.as_func();
      emit(f.arg, frame, params);
      static const Op ops[] = {Op::Ln, Op::Exp, Op::Sin, Op::Cos, Op::BesselJ, Op::BesselY};
      code_.push_back({ops[static_cast<int>(f.fn)], f.order, 0.0});
      return;
    }
    case Kind::Unknown:
      throw std::invalid_argument("closure contains the undetermined function " + e.as_unknown().decl->name);
  }
}

double Program::run(const double* vars) const {
  double st[kMaxStack];
  std::size_t sp = 0;
  for (const auto& ins : code_) {
    switch (ins.op) {
      case Op::Const:
        st[sp++] = ins.value;
        break;
      case Op::Load:
        st[sp++] = vars[ins.arg];
        break;
      case Op::Add:
        --sp;
        st[sp - 1] += st[sp];
        break;
      case Op::Mul:
        --sp;
        st[sp - 1] *= st[sp];
        break;
      case Op::Pow:
        --sp;
        st[sp - 1] = std::pow(st[sp - 1], st[sp]);
        break;
      case Op::PowI:
        st[sp - 1] = powi(st[sp - 1], ins.arg);
        break;
      case Op::Ln:
        st[sp - 1] = std::log(st[sp - 1]);
        break;
      case Op::Exp:
        st[sp - 1] = std::exp(st[sp - 1]);
        break;
      case Op::Sin:
        st[sp - 1] = std::sin(st[sp - 1]);
        break;
      case Op::Cos:
        st[sp - 1] = std::cos(st[sp - 1]);
        break;
      case Op::BesselJ:
        st[sp - 1] = bessel_j_value(ins.arg, st[sp - 1]);
        break;
      case Op::BesselY:
        st[sp - 1] = bessel_y_value(ins.arg, st[sp - 1]);
        break;
    }
  }
  return st[0];
}

}  // namespace jetcons::num
