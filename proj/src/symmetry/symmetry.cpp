#include "jetcons/symmetry.hpp"

#include <algorithm>
#include <stdexcept>

namespace jetcons {

namespace {

CheckReport report(std::string task, Expr residual, const ZeroOptions& opt) {
  CheckReport r;
  r.task = std::move(task);
  r.residual = std::move(residual);
  r.verdict = is_zero(r.residual, opt);
  return r;
}

}  // namespace

std::vector<CheckReport> invariance_check(const PDESystem& sys, const VectorField& q, const ZeroOptions& opt) {
  if (!sys.has_solve_form()) throw std::invalid_argument("invariance check needs a solved form");
  Prolongation pr(q, sys.frame);
  std::vector<CheckReport> out;
  for (std::size_t l = 0; l < sys.equations.size(); ++l)
    out.push_back(report("invariance[" + std::to_string(l) + "]", on_solution(pr.apply(sys.equations[l]), sys), opt));
  return out;
}

std::vector<CheckReport> invariant_check(const Expr& invariant, const std::vector<VectorField>& gens,
                                         const FramePtr& frame, const ZeroOptions& opt) {
  std::vector<CheckReport> out;
  for (std::size_t k = 0; k < gens.size(); ++k) {
    Prolongation pr(gens[k], frame);
    out.push_back(report("invariant[" + std::to_string(k) + "]", pr.apply(invariant), opt));
  }
  return out;
}

std::vector<CheckReport> invariant_representation_check(const PDESystem& sys,
                                                        const std::vector<std::vector<Expr>>& gamma,
                                                        const std::vector<Expr>& tilde, const ZeroOptions& opt) {
  const std::size_t L = sys.equations.size();
  if (gamma.size() != L || tilde.size() != L) throw std::invalid_argument("representation has wrong shape");
  std::vector<CheckReport> out;
  for (std::size_t l = 0; l < L; ++l) {
    if (gamma[l].size() != L) throw std::invalid_argument("representation has wrong shape");
    std::vector<Expr> terms{-tilde[l]};
    for (std::size_t k = 0; k < L; ++k) terms.push_back(gamma[l][k] * sys.equations[k]);
    out.push_back(report("representation[" + std::to_string(l) + "]", add(terms), opt));
  }
  return out;
}

Expr OpaqueFrame::apply(const Expr& e) const {
  for_each_unknown(e, [&](const Expr& u) {
    const UnknownNode& n = u.as_unknown();
    if (!symbol.count(n.decl->name)) return;
    if (std::any_of(n.derivs.begin(), n.derivs.end(), [](std::uint8_t d) { return d != 0; }))
      throw std::invalid_argument("derivatives of " + n.decl->name + " cannot be treated as a coordinate");
  });
  return substitute(e, to_symbols);
}

OpaqueFrame make_opaque(const Frame& frame, const std::vector<std::string>& unknowns) {
  auto f = std::make_shared<Frame>(frame);
  OpaqueFrame o;
  for (const auto& name : unknowns) {
    if (!frame.find_unknown(name)) throw std::invalid_argument("unknown function " + name + " is not declared");
    Coord c = Coord::parameter(f->add_parameter(name));
    o.symbol[name] = c;
    o.to_symbols.unknowns[name] = Expr::symbol(c);
  }
  o.frame = f;
  return o;
}

std::vector<CheckReport> equivalence_invariance_check(const PDESystem& sys, const VectorField& q,
                                                      const std::map<std::string, Expr>& unknown_components,
                                                      const ZeroOptions& opt) {
  std::vector<std::string> names;
  for (const auto& [n, e] : unknown_components) names.push_back(n);
  OpaqueFrame o = make_opaque(*sys.frame, names);
  std::vector<Expr> eqs;
  for (const Expr& e : sys.equations) eqs.push_back(o.apply(e));
  std::map<Coord, Expr> solve;
  for (const auto& [c, e] : sys.solve_form) solve[c] = o.apply(e);
  PDESystem ext = make_system(o.frame, eqs, solve);
  VectorField qq;
  for (const Expr& e : q.xi) qq.xi.push_back(o.apply(e));
  for (const Expr& e : q.phi) qq.phi.push_back(o.apply(e));
  for (const auto& [c, e] : q.extra) qq.extra[c] = o.apply(e);
  for (const auto& [n, e] : unknown_components) qq.extra[o.symbol.at(n)] = o.apply(e);
  return invariance_check(ext, qq, opt);
}

bool MapReport::pass() const {
  return std::all_of(equations.begin(), equations.end(), [](const CheckReport& r) { return r.pass(); });
}

MapReport point_map_check(const std::vector<Expr>& target, const std::vector<Expr>& source, const Frame& frame,
                          const PointMap& m, const ZeroOptions& opt) {
  if (target.size() != source.size()) throw std::invalid_argument("map check needs matching equation lists");
  const std::size_t p = frame.num_independents();
  const std::size_t q = frame.num_dependents();
  if (m.indep_scale.size() != p || m.dep_scale.size() != q) throw std::invalid_argument("map has wrong arity");
  std::vector<std::string> names;
  for (const auto& [n, k] : m.unknown_scale) names.push_back(n);
  OpaqueFrame o = make_opaque(frame, names);

  std::vector<Expr> tgt;
  std::vector<Expr> src;
  std::set<Coord> coords;
  for (const Expr& e : target) {
    tgt.push_back(o.apply(e));
    coords.insert(tgt.back().coords().begin(), tgt.back().coords().end());
  }
  for (const Expr& e : source) src.push_back(o.apply(e));

  std::map<Coord, Expr> sub;
  for (const Coord& c : coords) {
    if (c.is_independent()) {
      sub[c] = Expr(m.indep_scale[c.index]) * Expr::symbol(c);
    } else if (c.is_jet()) {
      if (c.multi.order() == 0) {
        Expr shift = m.dep_shift.size() > c.index ? m.dep_shift[c.index] : Expr(0);
        sub[c] = Expr(m.dep_scale[c.index]) * Expr::symbol(c) + shift;
      } else {
        Rational w = m.dep_scale[c.index];
        for (std::size_t i = 0; i < p; ++i) w /= m.indep_scale[i].pow(c.multi[i]);
        sub[c] = Expr(w) * Expr::symbol(c);
      }
    }
  }
  for (const auto& [n, k] : m.unknown_scale) sub[o.symbol.at(n)] = Expr(k) * Expr::symbol(o.symbol.at(n));

  MapReport rep;
  for (std::size_t l = 0; l < tgt.size(); ++l) {
    Expr mapped = substitute(tgt[l], sub);
    CheckReport plus = report("map[" + std::to_string(l) + "]", mapped - src[l], opt);
    if (plus.pass()) {
      rep.equations.push_back(plus);
      rep.signs.push_back(1);
      continue;
    }
    CheckReport minus = report("map[" + std::to_string(l) + "]", mapped + src[l], opt);
    rep.signs.push_back(minus.pass() ? -1 : 0);
    rep.equations.push_back(minus.pass() ? minus : plus);
  }
  return rep;
}

}  // namespace jetcons
