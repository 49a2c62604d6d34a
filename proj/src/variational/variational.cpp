#include "jetcons/variational.hpp"

#include <algorithm>
#include <functional>

#include "jetcons/dsl.hpp"

namespace jetcons {

namespace {

std::int64_t binom(int n, int k) {
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Calls fn for every K with K <= J componentwise.
void for_each_below(const MultiIndex& J, const std::function<void(const MultiIndex&)>& fn) {
  MultiIndex K(J.size());
  std::function<void(std::size_t, MultiIndex)> rec = [&](std::size_t i, MultiIndex cur) {
    if (i == J.size()) {
      fn(cur);
      return;
    }
    for (int k = 0; k <= J[i]; ++k) rec(i + 1, cur.raised(i, k));
  };
  rec(0, K);
}

ZeroVerdict combine(std::vector<ZeroVerdict> vs) {
  ZeroVerdict out;
  out.status = ZeroVerdict::Status::ProvenZero;
  for (auto& v : vs) {
    if (!v.zero()) return v;
    out.samples = std::max(out.samples, v.samples);
    out.max_residual = std::max(out.max_residual, v.max_residual);
    if (v.status == ZeroVerdict::Status::ProbablyZero) out.status = v.status;
  }
  return out;
}

}  // namespace

void LinOpMatrix::prune() {
  for (auto& e : entries) std::erase_if(e, [](const auto& kv) { return kv.second.is_zero(); });
}

std::vector<Expr> LinOpMatrix::apply(const std::vector<Expr>& v) const {
  std::vector<Expr> out(rows);
  for (std::size_t mu = 0; mu < rows; ++mu) {
    std::vector<Expr> terms;
    for (std::size_t nu = 0; nu < cols; ++nu)
      for (const auto& [J, c] : at(mu, nu)) terms.push_back(c * total_derivative(v[nu], J));
    out[mu] = add(terms);
  }
  return out;
}

nlohmann::json LinOpMatrix::to_json(const Frame& frame) const {
  nlohmann::json j;
  j["rows"] = rows;
  j["cols"] = cols;
  nlohmann::json es = nlohmann::json::array();
  for (std::size_t mu = 0; mu < rows; ++mu)
    for (std::size_t nu = 0; nu < cols; ++nu) {
      nlohmann::json ms = nlohmann::json::array();
      for (const auto& [J, c] : at(mu, nu)) {
        std::vector<int> mi;
        for (std::size_t i = 0; i < J.size(); ++i) mi.push_back(J[i]);
        ms.push_back({{"multiindex", mi}, {"coeff", to_string(c, frame)}});
      }
      es.push_back({{"mu", mu}, {"nu", nu}, {"monomials", ms}});
    }
  j["entries"] = es;
  return j;
}

bool operator==(const LinOpMatrix& a, const LinOpMatrix& b) {
  LinOpMatrix x = a;
  LinOpMatrix y = b;
  x.prune();
  y.prune();
  return x.rows == y.rows && x.cols == y.cols && x.entries == y.entries;
}

LinOpMatrix operator-(const LinOpMatrix& a, const LinOpMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw std::invalid_argument("operator shapes differ");
  LinOpMatrix out = a;
  for (std::size_t k = 0; k < b.entries.size(); ++k)
    for (const auto& [J, c] : b.entries[k]) {
      auto it = out.entries[k].find(J);
      if (it == out.entries[k].end()) {
        out.entries[k].emplace(J, -c);
      } else {
        it->second = it->second - c;
      }
    }
  out.prune();
  return out;
}

LinOpMatrix frechet(const std::vector<Expr>& equations, const Frame& frame) {
  const std::size_t q = frame.num_dependents();
  LinOpMatrix op(equations.size(), q);
  for (std::size_t mu = 0; mu < equations.size(); ++mu)
    for (const Coord& c : equations[mu].coords()) {
      if (!c.is_jet()) continue;
      Expr d = diff_partial(equations[mu], c);
      if (!d.is_zero()) op.at(mu, c.index)[c.multi] = d;
    }
  return op;
}

LinOpMatrix frechet(const PDESystem& sys) { return frechet(sys.equations, *sys.frame); }

LinOpMatrix adjoint(const LinOpMatrix& op, std::size_t p) {
  LinOpMatrix out(op.cols, op.rows);
  for (std::size_t mu = 0; mu < op.rows; ++mu)
    for (std::size_t nu = 0; nu < op.cols; ++nu)
      for (const auto& [J, a] : op.at(mu, nu)) {
        // (-D)_J (a V) = (-1)^|J| sum_{K<=J} binom(J,K) D_{J-K}(a) D_K V
        const bool odd = J.order() % 2 != 0;
        for_each_below(J, [&](const MultiIndex& K) {
          std::int64_t w = 1;
          for (std::size_t i = 0; i < p; ++i) w *= binom(J[i], K[i]);
          Expr c = Expr(Rational(odd ? -w : w)) * total_derivative(a, J.minus(K));
          auto& slot = out.at(nu, mu)[K];
          slot = slot + c;
        });
      }
  out.prune();
  return out;
}

SelfAdjointReport is_self_adjoint(const std::vector<Expr>& equations, const Frame& frame, const ZeroOptions& opt) {
  if (equations.size() != frame.num_dependents())
    throw std::invalid_argument("self-adjointness needs as many equations as dependent variables");
  LinOpMatrix d = frechet(equations, frame);
  SelfAdjointReport r;
  r.deficit = d - adjoint(d, frame.num_independents());
  std::vector<ZeroVerdict> vs;
  for (const auto& e : r.deficit.entries)
    for (const auto& [J, c] : e) vs.push_back(is_zero(c, opt));
  r.verdict = combine(std::move(vs));
  return r;
}

SelfAdjointReport is_self_adjoint(const PDESystem& sys, const ZeroOptions& opt) {
  return is_self_adjoint(sys.equations, *sys.frame, opt);
}

DeterminingSystem selfadjointness_conditions(const std::vector<Expr>& rhs, const Frame& frame) {
  LinOpMatrix d = frechet(rhs, frame);
  LinOpMatrix deficit = d - adjoint(d, frame.num_independents());
  DeterminingSystem ds;
  std::set<std::string> names;
  for (const Expr& g : rhs)
    for (const auto& n : unknown_names(g)) names.insert(n);
  ds.unknowns.assign(names.begin(), names.end());
  std::set<Expr, ExprLess> seen;
  for (const auto& e : deficit.entries)
    for (const auto& [J, c] : e) {
      auto t = terms_of(c);
      Expr m = t.empty() ? c : c * Expr(Rational(1) / t.front().first);
      if (!m.is_zero() && seen.insert(m).second) ds.equations.push_back(m);
    }
  return ds;
}

bool VariationalSymmetryReport::pass() const {
  return std::all_of(euler_images.begin(), euler_images.end(), [](const CheckReport& r) { return r.pass(); });
}

VariationalSymmetryReport variational_symmetry_check(const Lagrangian& lag, const VectorField& q, const FramePtr& frame,
                                                     const ZeroOptions& opt) {
  const std::size_t p = frame->num_independents();
  Prolongation pr(q, frame);
  std::vector<Expr> terms{pr.apply(lag.density)};
  for (std::size_t i = 0; i < p; ++i) terms.push_back(lag.density * total_derivative(q.xi[i], i));
  VariationalSymmetryReport rep;
  rep.r = add(terms);
  for (std::size_t a = 0; a < frame->num_dependents(); ++a) {
    CheckReport c;
    c.task = "variational_symmetry[" + frame->dependents()[a] + "]";
    c.residual = euler_operator(rep.r, a, p);
    c.verdict = is_zero(c.residual, opt);
    rep.euler_images.push_back(std::move(c));
  }
  if (rep.pass() && p >= 1) rep.flux = inverse_total_derivative_x(rep.r, *frame, opt);
  return rep;
}

MultiplierSet noether_multipliers(const VectorField& q, const Frame& frame) {
  return {characteristic(q, frame), {}};
}

std::vector<Expr> euler_lagrange(const Lagrangian& lag, const Frame& frame) {
  std::vector<Expr> out;
  for (std::size_t a = 0; a < frame.num_dependents(); ++a)
    out.push_back(euler_operator(lag.density, a, frame.num_independents()));
  return out;
}

}  // namespace jetcons
