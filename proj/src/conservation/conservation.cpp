#include "jetcons/conservation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>

#include "jetcons/dsl.hpp"

namespace jetcons {

namespace {

Expr lambda_dot_delta(const PDESystem& sys, const MultiplierSet& lam) {
  if (lam.lambdas.size() != sys.equations.size())
    throw std::invalid_argument("multiplier count does not match the number of equations");
  std::vector<Expr> terms;
  for (std::size_t l = 0; l < lam.lambdas.size(); ++l) terms.push_back(lam.lambdas[l] * sys.equations[l]);
  return add(terms);
}

void check_declared(const MultiplierSet& lam, const Frame& frame) {
  if (lam.declared_args.empty()) return;
  std::set<Coord> allowed(lam.declared_args.begin(), lam.declared_args.end());
  for (const Expr& e : lam.lambdas)
    for (const Coord& c : e.coords())
      if (!c.is_parameter() && !allowed.count(c))
        throw std::invalid_argument("multiplier depends on undeclared coordinate " + frame.name(c));
}

CheckReport make_report(std::string task, const Expr& residual, const ZeroOptions& opt) {
  CheckReport r;
  r.task = std::move(task);
  r.residual = residual;
  r.verdict = is_zero(residual, opt);
  return r;
}

bool contains_target(const Expr& e, const std::set<std::string>& names) {
  bool hit = false;
  for_each_unknown(e, [&](const Expr& u) { hit = hit || names.count(u.as_unknown().decl->name) > 0; });
  return hit;
}

bool is_target_atom(const Expr& e, const std::set<std::string>& names) {
  return e.kind() == Kind::Unknown && names.count(e.as_unknown().decl->name) > 0;
}

// e = sum_k coeff_k * atom_k + rest, linear in the atoms of the named unknowns.
struct LinearForm {
  std::map<Expr, Expr, ExprLess> coeff;
  Expr rest;
  bool linear = true;
};

LinearForm linear_form(const Expr& e, const std::set<std::string>& names) {
  LinearForm out;
  std::map<Expr, std::vector<Expr>, ExprLess> parts;
  std::vector<Expr> rest;
  for (const auto& [c, m] : terms_of(e)) {
    std::vector<std::pair<Expr, Expr>> factors;
    if (m.kind() == Kind::Mul) {
      factors = m.as_mul().factors;
    } else if (!m.is_number()) {
      factors.emplace_back(m, Expr(1));
    }
    std::optional<Expr> atom;
    std::vector<Expr> others{Expr(c)};
    for (const auto& [b, x] : factors) {
      if (is_target_atom(b, names) && x.is_one() && !atom) {
        atom = b;
      } else {
        if (contains_target(b, names) || contains_target(x, names)) out.linear = false;
        others.push_back(pow(b, x));
      }
    }
    if (atom) {
      parts[*atom].push_back(mul(others));
    } else {
      rest.push_back(mul(others));
    }
  }
  for (auto& [a, v] : parts) out.coeff.emplace(a, add(v));
  out.rest = add(rest);
  return out;
}

int deriv_order(const Expr& atom) {
  int n = 0;
  for (auto d : atom.as_unknown().derivs) n += d;
  return n;
}

// Pivot preference: higher derivative order first, then structural order.
bool atom_before(const Expr& a, const Expr& b) {
  int oa = deriv_order(a);
  int ob = deriv_order(b);
  if (oa != ob) return oa > ob;
  return compare(a, b) > 0;
}

Expr scale_to_monic(const Expr& e) {
  auto t = terms_of(e);
  if (t.empty()) return e;
  Rational first = t.front().first;
  if (first.is_zero()) return e;
  return e * Expr(Rational(1) / first);
}

}  // namespace

nlohmann::json CheckReport::to_json(const Frame& frame) const {
  nlohmann::json j;
  j["task"] = task;
  j["system_id"] = system_id;
  j["verdict"] = verdict.status_name();
  j["residual_text"] = to_string(residual, frame);
  j["samples"] = verdict.samples;
  j["max_residual"] = verdict.max_residual;
  j["polynomial"] = is_polynomial(residual);
  if (!verdict.zero()) {
    nlohmann::json w = nlohmann::json::object();
    for (const auto& [c, v] : verdict.witness) w[frame.name(c)] = v;
    j["witness"] = w;
    j["value"] = verdict.value;
  }
  return j;
}

nlohmann::json DeterminingSystem::to_json(const Frame& frame) const {
  nlohmann::json j;
  j["unknowns"] = unknowns;
  nlohmann::json eqs = nlohmann::json::array();
  for (const Expr& e : equations) eqs.push_back(to_string(e, frame));
  j["equations"] = eqs;
  nlohmann::json sc = nlohmann::json::array();
  for (const Coord& c : split_coords) sc.push_back(frame.name(c));
  j["split_coords"] = sc;
  nlohmann::json rc = nlohmann::json::array();
  for (const Coord& c : retained) rc.push_back(frame.name(c));
  j["retained"] = rc;
  return j;
}

Expr characteristic_residual(const PDESystem& sys, const MultiplierSet& lam, const ConservedVector& phi) {
  if (phi.components.size() != sys.p()) throw std::invalid_argument("conserved vector has wrong number of components");
  std::vector<Expr> terms{lambda_dot_delta(sys, lam)};
  for (std::size_t j = 0; j < sys.p(); ++j) terms.push_back(-total_derivative(phi.components[j], j));
  return add(terms);
}

CheckReport verify_conserved_vector(const PDESystem& sys, const MultiplierSet& lam, const ConservedVector& phi,
                                    const ZeroOptions& opt) {
  check_declared(lam, *sys.frame);
  return make_report("verify_conserved_vector", characteristic_residual(sys, lam, phi), opt);
}

std::vector<CheckReport> verify_multipliers(const PDESystem& sys, const MultiplierSet& lam, const ZeroOptions& opt) {
  check_declared(lam, *sys.frame);
  Expr ld = lambda_dot_delta(sys, lam);
  std::vector<CheckReport> out;
  for (std::size_t a = 0; a < sys.q(); ++a)
    out.push_back(make_report("verify_multipliers[" + sys.frame->dependents()[a] + "]",
                              euler_operator(ld, a, sys.p()), opt));
  return out;
}

PolynomialSplit split_polynomial(const std::vector<Expr>& exprs, std::vector<Coord> coords) {
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  PolynomialSplit out;
  while (true) {
    std::set<Coord> split(coords.begin(), coords.end());
    std::set<Coord> bad;
    using Key = std::vector<std::pair<Coord, int>>;
    std::vector<std::map<Key, std::vector<Expr>>> buckets(exprs.size());
    for (std::size_t k = 0; k < exprs.size(); ++k) {
      for (const auto& [c, m] : terms_of(exprs[k])) {
        std::vector<std::pair<Expr, Expr>> factors;
        if (m.kind() == Kind::Mul) {
          factors = m.as_mul().factors;
        } else if (!m.is_number()) {
          factors.emplace_back(m, Expr(1));
        }
        Key key;
        std::vector<Expr> rest{Expr(c)};
        for (const auto& [b, x] : factors) {
          if (b.kind() == Kind::Symbol && split.count(b.as_symbol().coord) && x.is_number() &&
              x.number().is_integer() && x.number() > Rational(0)) {
            key.emplace_back(b.as_symbol().coord, static_cast<int>(x.number().num()));
            continue;
          }
          for (const Coord& d : b.coords())
            if (split.count(d)) bad.insert(d);
          for (const Coord& d : x.coords())
            if (split.count(d)) bad.insert(d);
          rest.push_back(pow(b, x));
        }
        std::sort(key.begin(), key.end());
        buckets[k][key].push_back(mul(rest));
      }
    }
    if (bad.empty()) {
      for (auto& b : buckets)
        for (auto& [key, v] : b) {
          Expr e = add(v);
          if (!e.is_zero()) out.coefficients.push_back(e);
        }
      out.split = coords;
      return out;
    }
    for (const Coord& c : bad) out.retained.push_back(c);
    std::erase_if(coords, [&](const Coord& c) { return bad.count(c) > 0; });
  }
}

std::vector<Expr> unknown_atoms(const std::vector<Expr>& exprs, const std::vector<std::string>& unknowns) {
  std::set<std::string> names(unknowns.begin(), unknowns.end());
  std::set<Expr, ExprLess> atoms;
  for (const Expr& e : exprs)
    for_each_unknown(e, [&](const Expr& u) {
      if (names.count(u.as_unknown().decl->name)) atoms.insert(u);
    });
  return {atoms.begin(), atoms.end()};
}

std::vector<Expr> autoreduce(std::vector<Expr> equations, const std::vector<std::string>& unknowns) {
  std::set<std::string> names(unknowns.begin(), unknowns.end());
  std::erase_if(equations, [](const Expr& e) { return e.is_zero(); });
  std::vector<bool> used(equations.size(), false);
  while (true) {
    // choose the equation whose best constant-coefficient atom ranks highest
    int best = -1;
    Expr best_atom;
    for (std::size_t i = 0; i < equations.size(); ++i) {
      if (used[i] || equations[i].is_zero()) continue;
      LinearForm lf = linear_form(equations[i], names);
      if (!lf.linear) continue;
      for (const auto& [a, c] : lf.coeff) {
        if (!c.is_number() || c.is_zero()) continue;
        if (best < 0 || atom_before(a, best_atom)) {
          best = static_cast<int>(i);
          best_atom = a;
        }
      }
    }
    if (best < 0) break;
    used[best] = true;
    LinearForm pf = linear_form(equations[best], names);
    Expr pivot = equations[best] * Expr(Rational(1) / pf.coeff.at(best_atom).number());
    equations[best] = pivot;
    for (std::size_t j = 0; j < equations.size(); ++j) {
      if (static_cast<int>(j) == best || equations[j].is_zero()) continue;
      LinearForm lf = linear_form(equations[j], names);
      if (!lf.linear) continue;
      auto it = lf.coeff.find(best_atom);
      if (it == lf.coeff.end()) continue;
      equations[j] = equations[j] - it->second * pivot;
    }
  }
  std::set<Expr, ExprLess> seen;
  std::vector<Expr> out;
  for (const Expr& e : equations) {
    if (e.is_zero()) continue;
    Expr m = scale_to_monic(e);
    if (seen.insert(m).second) out.push_back(m);
  }
  return out;
}

DeterminingSystem split_determining(const std::vector<Expr>& euler_images, const std::vector<std::string>& unknowns,
                                    const SplitOptions& opt) {
  std::set<Coord> excluded;
  std::set<Coord> present;
  for (const Expr& e : euler_images) {
    for_each_unknown(e, [&](const Expr& u) {
      for (const Expr& a : u.as_unknown().args)
        for (const Coord& c : a.coords()) excluded.insert(c);
    });
    present.insert(e.coords().begin(), e.coords().end());
  }
  std::set<Coord> params(opt.parameters.begin(), opt.parameters.end());
  std::vector<Coord> candidates;
  for (const Coord& c : present) {
    if (excluded.count(c)) continue;
    if (c.is_jet() || (c.is_independent() && opt.split_independents) || (c.is_parameter() && params.count(c)))
      candidates.push_back(c);
  }
  PolynomialSplit ps = split_polynomial(euler_images, candidates);
  DeterminingSystem ds;
  ds.unknowns = unknowns;
  ds.split_coords = ps.split;
  ds.retained = ps.retained;
  ds.equations = opt.autoreduce ? autoreduce(ps.coefficients, unknowns) : ps.coefficients;
  if (!opt.autoreduce)
    for (Expr& e : ds.equations) e = scale_to_monic(e);
  std::stable_sort(ds.equations.begin(), ds.equations.end(), ExprLess());
  return ds;
}

DeterminingSystem generate_determining_system(const PDESystem& sys, const MultiplierSet& ansatz,
                                              const SplitOptions& opt) {
  check_declared(ansatz, *sys.frame);
  std::vector<std::string> names;
  for (const Expr& l : ansatz.lambdas)
    for (const auto& n : unknown_names(l))
      if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
  Expr ld = lambda_dot_delta(sys, ansatz);
  std::vector<Expr> images;
  for (std::size_t a = 0; a < sys.q(); ++a) images.push_back(euler_operator(ld, a, sys.p()));
  return split_determining(images, names, opt);
}

DeterminingSystem inverse_determining_system(const PDESystem& closed, const MultiplierSet& lam,
                                             const std::vector<std::string>& unknowns, const SplitOptions& opt) {
  Expr ld = lambda_dot_delta(closed, lam);
  std::vector<Expr> images;
  for (std::size_t a = 0; a < closed.q(); ++a) images.push_back(euler_operator(ld, a, closed.p()));
  return split_determining(images, unknowns, opt);
}

bool ClosureReport::pass() const {
  return std::all_of(multipliers.begin(), multipliers.end(), [](const CheckReport& r) { return r.pass(); });
}

ClosureReport verify_closure_against_multipliers(const PDESystem& closed, const MultiplierSet& lam,
                                                 const std::optional<Expr>& rho, const ZeroOptions& opt) {
  ClosureReport r;
  r.multipliers = verify_multipliers(closed, lam, opt);
  if (r.pass() && rho) r.flux = reconstruct_flux(closed, lam, *rho, opt);
  return r;
}

std::optional<Expr> reconstruct_flux(const PDESystem& sys, const MultiplierSet& lam, const Expr& rho,
                                     const ZeroOptions& opt) {
  if (sys.p() != 2) throw std::invalid_argument("flux reconstruction needs one time and one space variable");
  Expr resid = lambda_dot_delta(sys, lam) - total_derivative(rho, 0);
  return inverse_total_derivative_x(resid, *sys.frame, opt);
}

TrivialityReport triviality_candidate(const PDESystem& sys, const ConservedVector& phi, const ZeroOptions& opt) {
  TrivialityReport r;
  std::vector<Expr> div;
  for (std::size_t j = 0; j < phi.components.size(); ++j) div.push_back(total_derivative(phi.components[j], j));
  r.null_divergence = is_zero(add(div), opt);
  r.vanishes_on_solutions.status = ZeroVerdict::Status::ProvenZero;
  for (const Expr& c : phi.components) {
    ZeroVerdict v = is_zero(on_solution(c, sys), opt);
    r.vanishes_on_solutions.samples = std::max(r.vanishes_on_solutions.samples, v.samples);
    r.vanishes_on_solutions.max_residual = std::max(r.vanishes_on_solutions.max_residual, v.max_residual);
    if (!v.zero()) {
      r.vanishes_on_solutions = v;
      break;
    }
    if (v.status == ZeroVerdict::Status::ProbablyZero) r.vanishes_on_solutions.status = v.status;
  }
  return r;
}

namespace {

bool same_atom(const UnknownNode& n, const Expr& atom) {
  const UnknownNode& a = atom.as_unknown();
  if (n.decl->name != a.decl->name || n.derivs != a.derivs || n.args.size() != a.args.size()) return false;
  for (std::size_t i = 0; i < n.args.size(); ++i)
    if (compare(n.args[i], a.args[i]) != 0) return false;
  return true;
}

// Coefficient rows (atoms..., inhomogeneous part) of each equation at p.
Eigen::MatrixXd coefficient_rows(const std::vector<Expr>& eqs, const std::vector<Expr>& atoms, const Point& p,
                                 const ZeroOptions& opt, const std::set<std::string>& names) {
  const std::size_t n = atoms.size();
  Eigen::MatrixXd m(eqs.size(), n + 1);
  for (std::size_t col = 0; col <= n; ++col) {
    StandIns st(opt.seed, opt.standin_degree);
    st.override_fn = [&, col](const UnknownNode& node, const std::vector<double>& args) -> std::optional<double> {
      if (!names.count(node.decl->name)) return opt.override_fn ? opt.override_fn(node, args) : std::nullopt;
      return (col < n && same_atom(node, atoms[col])) ? 1.0 : 0.0;
    };
    for (std::size_t r = 0; r < eqs.size(); ++r) m(r, col) = eval(eqs[r], p, st);
  }
  for (std::size_t col = 0; col < n; ++col) m.col(col) -= m.col(n);
  return m;
}

// Largest relative distance of a row of b from the row space of a.
double projection_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, int& rank) {
  if (b.rows() == 0) {
    rank = 0;
    return 0.0;
  }
  if (a.rows() == 0) {
    rank = 0;
    return b.norm() > 0 ? 1.0 : 0.0;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  double smax = s.size() ? s(0) : 0.0;
  rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > 1e-10 * std::max(smax, 1.0)) ++rank;
  Eigen::MatrixXd v = svd.matrixV().leftCols(rank);
  double worst = 0.0;
  for (Eigen::Index r = 0; r < b.rows(); ++r) {
    Eigen::VectorXd row = b.row(r).transpose();
    double norm = row.norm();
    if (norm == 0.0) continue;
    Eigen::VectorXd res = row - v * (v.transpose() * row);
    worst = std::max(worst, res.norm() / norm);
  }
  return worst;
}

}  // namespace

SpanReport span_equivalence(const std::vector<Expr>& a, const std::vector<Expr>& b,
                            const std::vector<std::string>& unknowns, const ZeroOptions& opt, double tol) {
  std::set<std::string> names(unknowns.begin(), unknowns.end());
  std::vector<Expr> all(a);
  all.insert(all.end(), b.begin(), b.end());
  std::vector<Expr> atoms = unknown_atoms(all, unknowns);
  std::set<Coord> cs;
  for (const Expr& e : all) cs.insert(e.coords().begin(), e.coords().end());
  std::vector<Coord> coords(cs.begin(), cs.end());

  SpanReport rep;
  for (int i = 0; i < opt.samples; ++i) {
    bool done = false;
    for (int attempt = 0; attempt <= opt.redraws && !done; ++attempt) {
      Point p = sample_point(coords, opt, i, attempt);
      try {
        Eigen::MatrixXd ma = coefficient_rows(a, atoms, p, opt, names);
        Eigen::MatrixXd mb = coefficient_rows(b, atoms, p, opt, names);
        int ra = 0;
        int rb = 0;
        double r1 = projection_residual(ma, mb, ra);
        double r2 = projection_residual(mb, ma, rb);
        rep.max_residual = std::max({rep.max_residual, r1, r2});
        rep.rank_a = ra;
        rep.rank_b = rb;
        done = true;
      } catch (const EvalError&) {
      }
    }
    if (!done) throw UnsamplableError("no valid sample point for span comparison");
    ++rep.samples;
  }
  rep.equivalent = rep.max_residual < tol;
  return rep;
}

}  // namespace jetcons
