#include "jetcons/dsl.hpp"

#include <cctype>
#include <sstream>

#include "jetcons/ops.hpp"

namespace jetcons {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

class Parser {
 public:
  Parser(std::string_view text, const Frame& frame, const Macros* macros)
      : s_(text), frame_(frame), macros_(macros) {}

  Expr parse_all() {
    Expr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  std::string_view s_;
  const Frame& frame_;
  const Macros* macros_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])) != 0) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  std::string ident() {
    skip();
    std::size_t start = pos_;
    if (pos_ >= s_.size() || !is_ident_start(s_[pos_])) fail("expected identifier");
    while (pos_ < s_.size() && is_ident_char(s_[pos_])) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '_') {
      std::size_t save = pos_;
      ++pos_;
      std::size_t letters = pos_;
      while (pos_ < s_.size() && std::islower(static_cast<unsigned char>(s_[pos_])) != 0) ++pos_;
      if (pos_ == letters) pos_ = save;
    }
    return std::string(s_.substr(start, pos_ - start));
  }

  Expr expr() {
    std::vector<Expr> terms;
    terms.push_back(term());
    for (;;) {
      if (accept('+')) {
        terms.push_back(term());
      } else if (accept('-')) {
        terms.push_back(raw::neg(term()));
      } else {
        break;
      }
    }
    return terms.size() == 1 ? terms[0] : raw::add(std::move(terms));
  }

  Expr term() {
    std::vector<Expr> factors;
    factors.push_back(unary());
    for (;;) {
      if (accept('*')) {
        factors.push_back(unary());
      } else if (peek('/')) {
        ++pos_;
        factors.push_back(raw::pow(unary(), Expr(-1)));
      } else {
        break;
      }
    }
    return factors.size() == 1 ? factors[0] : raw::mul(std::move(factors));
  }

  Expr unary() {
    if (accept('-')) return raw::neg(unary());
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr b = base();
    if (accept('^')) return raw::pow(b, unary());
    return b;
  }

  Expr number() {
    std::size_t start = pos_;
    std::int64_t whole = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])) != 0) {
      whole = whole * 10 + (s_[pos_] - '0');
      if (whole > 1000000000000000LL) fail("numeric literal too large");
      ++pos_;
    }
    Rational v(whole);
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      std::int64_t frac = 0;
      std::int64_t scale = 1;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])) != 0) {
        frac = frac * 10 + (s_[pos_] - '0');
        scale *= 10;
        if (scale > 1000000000000LL) fail("numeric literal too long");
        ++pos_;
      }
      v += Rational(frac, scale);
    }
    if (pos_ == start) fail("expected number");
    return Expr(v);
  }

  std::vector<Expr> call_args() {
    std::vector<Expr> args;
    expect('(');
    if (accept(')')) return args;
    args.push_back(expr());
    while (accept(',')) args.push_back(expr());
    expect(')');
    return args;
  }

  Expr unknown_call(const std::shared_ptr<const UnknownDecl>& decl) {
    std::size_t at = pos_;
    if (!peek('(')) return unknown(decl);
    std::vector<Expr> args = call_args();
    if (args.size() != decl->slots.size()) {
      pos_ = at;
      fail("wrong number of arguments for " + decl->name);
    }
    bool all_slots = true;
    for (std::size_t k = 0; k < args.size(); ++k) {
      if (args[k].kind() == Kind::Symbol) {
        if (!(args[k].as_symbol().coord == decl->slots[k])) {
          bool is_slot = false;
          for (const auto& sl : decl->slots) is_slot = is_slot || sl == args[k].as_symbol().coord;
          if (!is_slot) {
            pos_ = at;
            fail("argument " + frame_.name(args[k].as_symbol().coord) + " is not permitted for " + decl->name);
          }
          all_slots = false;
        }
      } else {
        all_slots = false;
      }
    }
    if (all_slots) return unknown(decl);
    return raw::unknown(decl, std::move(args));
  }

  Expr diff_call() {
    expect('(');
    std::size_t at = pos_;
    std::string name = ident();
    auto decl = frame_.find_unknown(name);
    if (!decl) {
      pos_ = at;
      fail("diff expects an unknown function, got " + name);
    }
    Expr node = unknown_call(decl);
    std::vector<std::uint8_t> derivs(decl->slots.size(), 0);
    while (accept(',')) {
      std::size_t sat = pos_;
      std::string slot = ident();
      Coord c;
      try {
        c = frame_.coord(slot);
      } catch (const std::invalid_argument&) {
        pos_ = sat;
        fail("unknown coordinate " + slot);
      }
      bool found = false;
      for (std::size_t k = 0; k < decl->slots.size(); ++k) {
        if (decl->slots[k] == c) {
          ++derivs[k];
          found = true;
        }
      }
      if (!found) {
        pos_ = sat;
        fail(slot + " is not an argument of " + name);
      }
    }
    expect(')');
    node = normalize(node);
    const auto& u = node.as_unknown();
    return unknown(u.decl, u.args, derivs);
  }

  Expr base() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) != 0 || c == '.') return number();
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (!is_ident_start(c)) fail(std::string("unexpected character '") + c + "'");
    std::size_t at = pos_;
    std::string id = ident();

    static const std::map<std::string, Fn> kFuncs = {
        {"ln", Fn::Ln}, {"exp", Fn::Exp}, {"sin", Fn::Sin}, {"cos", Fn::Cos}};
    if (auto it = kFuncs.find(id); it != kFuncs.end() && peek('(')) {
      auto args = call_args();
      if (args.size() != 1) fail(id + " takes one argument");
      return raw::func(it->second, 0, args[0]);
    }
    if (id == "sqrt" && peek('(')) {
      auto args = call_args();
      if (args.size() != 1) fail("sqrt takes one argument");
      return raw::pow(args[0], Expr(Rational(1, 2)));
    }
    if ((id == "besselJ" || id == "besselY") && peek('(')) {
      expect('(');
      skip();
      Expr order = number();
      if (!order.number().is_integer() || order.number().is_negative()) fail("Bessel order must be a non-negative integer");
      expect(',');
      Expr arg = expr();
      expect(')');
      return raw::func(id == "besselJ" ? Fn::BesselJ : Fn::BesselY, static_cast<int>(order.number().num()), arg);
    }
    if (id == "diff" && peek('(')) return diff_call();
    if (id == "pd" && peek('(')) {
      expect('(');
      Expr e = expr();
      expect(',');
      std::size_t cat = pos_;
      std::string cname = ident();
      expect(')');
      try {
        return diff_partial(e, frame_.coord(cname));
      } catch (const std::invalid_argument&) {
        pos_ = cat;
        fail("unknown coordinate " + cname);
      }
    }
    if (id == "D" && peek('(')) {
      expect('(');
      std::size_t iat = pos_;
      std::string var = ident();
      int i = frame_.independent_index(var);
      if (i < 0) {
        pos_ = iat;
        fail("D expects an independent variable, got " + var);
      }
      expect(',');
      Expr e = expr();
      expect(')');
      return total_derivative(e, static_cast<std::size_t>(i));
    }
    if (macros_ != nullptr) {
      if (auto it = macros_->find(id); it != macros_->end()) return it->second;
    }
    if (auto decl = frame_.find_unknown(id)) return unknown_call(decl);
    if (frame_.independent_index(id) >= 0) return Expr::symbol(frame_.independent(id));
    if (frame_.parameter_index(id) >= 0) return Expr::symbol(frame_.parameter(id));

    auto us = id.find('_');
    std::string stem = id.substr(0, us);
    if (us != std::string::npos) {
      if (frame_.independent_index(stem) >= 0) {
        pos_ = at;
        fail("derivative of an independent variable: " + id);
      }
      if (auto decl = frame_.find_unknown(stem)) {
        Expr e = unknown(decl);
        for (char l : id.substr(us + 1)) {
          int i = frame_.independent_index(std::string(1, l));
          if (i < 0) {
            pos_ = at;
            fail("unknown derivative letter in " + id);
          }
          e = total_derivative(e, static_cast<std::size_t>(i));
        }
        return e;
      }
    }
    if (frame_.dependent_index(stem) >= 0) {
      try {
        return Expr::symbol(frame_.jet(id));
      } catch (const std::invalid_argument&) {
        pos_ = at;
        fail("unknown derivative letter in " + id);
      }
    }
    pos_ = at;
    fail("unknown identifier " + id);
  }
};

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b])) != 0) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])) != 0) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

void extend_frame(Frame& frame, std::string_view text) {
  std::vector<std::pair<std::size_t, std::string>> stmts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ';' || text[i] == '\n') {
      std::string st = trim(text.substr(start, i - start));
      if (!st.empty()) stmts.emplace_back(start, st);
      start = i + 1;
    }
  }
  std::vector<std::string> indep = frame.independents();
  std::vector<std::string> dep = frame.dependents();
  std::vector<std::string> params = frame.parameters();
  std::vector<std::pair<std::size_t, std::string>> unknown_stmts;
  for (const auto& [at, st] : stmts) {
    auto words = split_words(st);
    const std::string& kw = words[0];
    std::vector<std::string> rest(words.begin() + 1, words.end());
    if (kw == "indep") {
      indep.insert(indep.end(), rest.begin(), rest.end());
    } else if (kw == "dep") {
      dep.insert(dep.end(), rest.begin(), rest.end());
    } else if (kw == "param") {
      params.insert(params.end(), rest.begin(), rest.end());
    } else if (kw == "unknown") {
      unknown_stmts.emplace_back(at, st.substr(7));
    } else {
      throw ParseError("unknown declaration keyword " + kw, at);
    }
  }
  Frame next;
  try {
    next = Frame(indep, dep, params);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 0);
  }
  for (const auto& u : frame.unknowns()) next.add_unknown(u->name, u->slots);
  for (const auto& [at, body] : unknown_stmts) {
    std::string b = trim(body);
    auto open = b.find('(');
    auto close = b.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open) {
      throw ParseError("malformed unknown declaration", at);
    }
    std::string name = trim(b.substr(0, open));
    std::vector<Coord> slots;
    std::string inner = b.substr(open + 1, close - open - 1);
    std::size_t s0 = 0;
    while (s0 <= inner.size()) {
      auto comma = inner.find(',', s0);
      std::string tok = trim(inner.substr(s0, comma == std::string::npos ? std::string::npos : comma - s0));
      if (!tok.empty()) {
        try {
          slots.push_back(next.coord(tok));
        } catch (const std::invalid_argument& e) {
          throw ParseError(e.what(), at);
        }
      }
      if (comma == std::string::npos) break;
      s0 = comma + 1;
    }
    try {
      next.add_unknown(name, slots);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), at);
    }
  }
  frame = std::move(next);
}

Frame parse_frame(std::string_view text) {
  Frame f;
  extend_frame(f, text);
  return f;
}

Expr parse(std::string_view text, const Frame& frame, const Macros* macros) {
  Parser p(text, frame, macros);
  return p.parse_all();
}

Expr parse_canonical(std::string_view text, const Frame& frame, const Macros* macros) {
  return normalize(parse(text, frame, macros));
}

// ---- printing ----------------------------------------------------------------

namespace {

struct Printer {
  const Frame& f;

  std::string number(const Rational& r) const { return r.str(); }

  std::string atom(const Expr& e) const {
    // operand of '^' or of a product
    switch (e.kind()) {
      case Kind::Number:
        if (e.number().is_integer() && !e.number().is_negative()) return number(e.number());
        return "(" + number(e.number()) + ")";
      case Kind::Symbol:
      case Kind::Func:
      case Kind::Unknown:
        return run(e);
      default:
        return "(" + run(e) + ")";
    }
  }

  std::string factor(const Expr& b, const Expr& x) const {
    if (x.is_one()) return atom(b);
    std::string xs;
    if (x.is_number() && x.number().is_integer() && !x.number().is_negative()) {
      xs = number(x.number());
    } else {
      xs = "(" + run(x) + ")";
    }
    return atom(b) + "^" + xs;
  }

  std::string product(const MulNode& m, bool drop_sign, bool& negative) const {
    Rational c = m.coeff;
    negative = c.is_negative();
    if (drop_sign && negative) c = -c;
    std::string out;
    if (!c.is_one() || m.factors.empty()) {
      if (!drop_sign && negative) out = "(" + number(c) + ")";
      else out = number(c);
    }
    for (const auto& [b, x] : m.factors) {
      if (!out.empty()) out += "*";
      out += factor(b, x);
    }
    return out;
  }

  std::string unknown_text(const UnknownNode& u) const {
    bool plain = true;
    for (std::size_t k = 0; k < u.args.size(); ++k) {
      plain = plain && u.args[k].kind() == Kind::Symbol && u.args[k].as_symbol().coord == u.decl->slots[k];
    }
    std::string head = u.decl->name;
    if (!plain) {
      head += "(";
      for (std::size_t k = 0; k < u.args.size(); ++k) {
        if (k > 0) head += ", ";
        head += run(u.args[k]);
      }
      head += ")";
    }
    bool any = false;
    std::string slots;
    for (std::size_t k = 0; k < u.derivs.size(); ++k) {
      for (int r = 0; r < u.derivs[k]; ++r) {
        slots += ", " + f.name(u.decl->slots[k]);
        any = true;
      }
    }
    if (!any) return head;
    return "diff(" + head + slots + ")";
  }

  std::string run(const Expr& e) const {
    switch (e.kind()) {
      case Kind::Number:
        return number(e.number());
      case Kind::Symbol:
        return f.name(e.as_symbol().coord);
      case Kind::Unknown:
        return unknown_text(e.as_unknown());
      case Kind::Func: {
        const auto& fn = e.as_func();
        switch (fn.fn) {
          case Fn::Ln:
            return "ln(" + run(fn.arg) + ")";
          case Fn::Exp:
            return "exp(" + run(fn.arg) + ")";
          case Fn::Sin:
            return "sin(" + run(fn.arg) + ")";
          case Fn::Cos:
            return "cos(" + run(fn.arg) + ")";
          case Fn::BesselJ:
            return "besselJ(" + std::to_string(fn.order) + ", " + run(fn.arg) + ")";
          case Fn::BesselY:
            return "besselY(" + std::to_string(fn.order) + ", " + run(fn.arg) + ")";
        }
        return "?";
      }
      case Kind::Mul: {
        bool neg = false;
        std::string body = product(e.as_mul(), true, neg);
        return neg ? "-" + body : body;
      }
      case Kind::Add: {
        const auto& a = e.as_add();
        std::string out;
        for (const auto& [t, c] : a.terms) {
          Expr term = t * Expr(c);
          bool neg = false;
          std::string body;
          if (term.kind() == Kind::Mul) {
            body = product(term.as_mul(), true, neg);
          } else {
            body = run(term);
          }
          if (out.empty()) out = neg ? "-" + body : body;
          else out += (neg ? " - " : " + ") + body;
        }
        if (!a.constant.is_zero()) {
          Rational k = a.constant;
          if (out.empty()) out = number(k);
          else out += (k.is_negative() ? " - " : " + ") + number(k.abs());
        }
        return out;
      }
    }
    return "?";
  }
};

}  // namespace

std::string to_string(const Expr& e, const Frame& frame) {
  Expr n = normalize(e);
  return Printer{frame}.run(n);
}

}  // namespace jetcons
