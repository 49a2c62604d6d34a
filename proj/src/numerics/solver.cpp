#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "jetcons/dsl.hpp"
#include "jetcons/jet.hpp"
#include "jetcons/numerics.hpp"

namespace jetcons::num {

namespace {

std::map<std::string, double> with_builtins(const GridConfig& cfg) {
  std::map<std::string, double> p = cfg.closure.parameters;
  p.emplace("pi", std::numbers::pi);
  p.emplace("L", cfg.length);
  return p;
}

Frame solver_frame(const std::map<std::string, double>& params) {
  Frame f = parse_frame("indep t x; dep u h;");
  for (const auto& [name, v] : params) f.add_parameter(name);
  return f;
}

Program compile_text(const std::string& text, const Frame& frame, const std::map<std::string, double>& params) {
  return Program::compile(parse_canonical(text, frame), frame, params);
}

// Negative power of an expression involving u_x anywhere in e.
bool singular_in(const Expr& e, const Coord& c) {
  switch (e.kind()) {
    case Kind::Add:
      for (const auto& [t, k] : e.as_add().terms)
        if (singular_in(t, c)) return true;
      return false;
    case Kind::Mul:
      for (const auto& [b, x] : e.as_mul().factors) {
        if (x.is_number() && x.number().to_double() < 0 && b.depends_on(c)) return true;
        if (singular_in(b, c) || singular_in(x, c)) return true;
      }
      return false;
    case Kind::Func:
      return (e.as_func().fn == Fn::Ln && e.as_func().arg.depends_on(c)) || singular_in(e.as_func().arg, c);
    default:
      return false;
  }
}

}  // namespace

void GridConfig::validate() const {
  if (cells < 16) throw std::invalid_argument("grid needs at least 16 cells");
  if (!(length > 0)) throw std::invalid_argument("domain length must be positive");
  if (dt < 0) throw std::invalid_argument("dt must be non-negative");
  if (dt == 0 && !(cfl > 0 && cfl <= 0.5)) throw std::invalid_argument("CFL number must lie in (0, 0.5]");
  if (!(t_end > 0)) throw std::invalid_argument("t_end must be positive");
}

std::vector<std::pair<std::string, std::string>> canonical_densities() {
  return {{"u", "u"}, {"h", "h"}, {"uh", "u*h"}, {"energy", "(u^2*h + h^2)/2"}};
}

GridConfig parse_grid_config(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw std::invalid_argument(std::string("run file: ") + e.what());
  }
  GridConfig c;
  try {
    c.cells = tree.get("grid.cells", c.cells);
    c.length = tree.get("grid.length", c.length);
    c.dt = tree.get("grid.dt", c.dt);
    c.cfl = tree.get("grid.cfl", c.cfl);
    c.t_end = tree.get("grid.t_end", c.t_end);
    c.seed = tree.get("grid.seed", c.seed);
    c.noise = tree.get("grid.noise", c.noise);
    c.parallel = tree.get("grid.parallel", c.parallel);
    c.threads = tree.get("grid.threads", c.threads);
    c.ux_guard = tree.get("grid.ux_guard", c.ux_guard);
    c.u0 = tree.get("init.u0", c.u0);
    c.h0 = tree.get("init.h0", c.h0);
    c.closure.f_expr = tree.get("closure.f", c.closure.f_expr);
    c.closure.g_expr = tree.get("closure.g", c.closure.g_expr);
    if (auto p = tree.get_child_optional("params"))
      for (const auto& [k, v] : *p) c.closure.parameters[k] = v.get_value<double>();
    if (auto d = tree.get_child_optional("densities"))
      for (const auto& [k, v] : *d) c.densities.emplace_back(k, v.get_value<std::string>());
  } catch (const pt::ptree_error& e) {
    throw std::invalid_argument(std::string("run file: ") + e.what());
  }
  c.validate();
  return c;
}

GridConfig load_grid_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_grid_config(ss.str());
}

void cell_vars(const State& s, double dx, double t, int k, double* v) {
  const int m = static_cast<int>(s.u.size());
  const int kp = k + 1 == m ? 0 : k + 1;
  const int km = k == 0 ? m - 1 : k - 1;
  v[Program::T] = t;
  v[Program::X] = (k + 0.5) * dx;
  v[Program::U] = s.u[k];
  v[Program::H] = s.h[k];
  v[Program::UX] = (s.u[kp] - s.u[km]) / (2 * dx);
  v[Program::HX] = (s.h[kp] - s.h[km]) / (2 * dx);
  v[Program::UXX] = (s.u[kp] - 2 * s.u[k] + s.u[km]) / (dx * dx);
  v[Program::HXX] = (s.h[kp] - 2 * s.h[k] + s.h[km]) / (dx * dx);
}

Rhs::Rhs(const GridConfig& cfg) : m_(cfg.cells), dx_(cfg.length / cfg.cells) {
  const auto params = with_builtins(cfg);
  const Frame frame = solver_frame(params);
  const Expr fe = parse_canonical(cfg.closure.f_expr, frame);
  const Expr ge = parse_canonical(cfg.closure.g_expr, frame);
  f_ = Program::compile(fe, frame, params);
  g_ = Program::compile(ge, frame, params);
  // prefer a certified flux so the telescoping sum stays exact
  if (!fe.is_zero())
    if (auto F = inverse_total_derivative_x(fe, frame)) f_flux_ = Program::compile(*F, frame, params);
  if (!ge.is_zero())
    if (auto G = inverse_total_derivative_x(ge, frame)) g_flux_ = Program::compile(*G, frame, params);
  const Coord ux = frame.jet("u_x");
  singular_ = singular_in(fe, ux) || singular_in(ge, ux);
}

void Rhs::pass1(const State& s, double t, int k, Scratch& w) const {
  double v[Program::kVars];
  cell_vars(s, dx_, t, k, v);
  w.ff[k] = f_flux_ ? f_flux_->run(v) : 0.0;
  w.fg[k] = g_flux_ ? g_flux_->run(v) : 0.0;
  w.pf[k] = f_flux_ ? 0.0 : f_.run(v);
  w.pg[k] = g_flux_ ? 0.0 : g_.run(v);
}

void Rhs::pass2(const State& s, int k, const Scratch& w, State& out) const {
  const int kp = k + 1 == m_ ? 0 : k + 1;
  const int km = k == 0 ? m_ - 1 : k - 1;
  const double Fp = 0.5 * s.u[kp] * s.u[kp] + s.h[kp] - w.ff[kp];
  const double Fm = 0.5 * s.u[km] * s.u[km] + s.h[km] - w.ff[km];
  const double Gp = s.u[kp] * s.h[kp] - w.fg[kp];
  const double Gm = s.u[km] * s.h[km] - w.fg[km];
  out.u[k] = -(Fp - Fm) / (2 * dx_) + w.pf[k];
  out.h[k] = -(Gp - Gm) / (2 * dx_) + w.pg[k];
}

void Rhs::serial(const State& s, double t, State& out) const {
  Scratch w{std::vector<double>(m_), std::vector<double>(m_), std::vector<double>(m_), std::vector<double>(m_)};
  out.u.resize(m_);
  out.h.resize(m_);
  for (int k = 0; k < m_; ++k) pass1(s, t, k, w);
  for (int k = 0; k < m_; ++k) pass2(s, k, w, out);
}

void Rhs::parallel(const State& s, double t, State& out, int threads) const {
  Scratch w{std::vector<double>(m_), std::vector<double>(m_), std::vector<double>(m_), std::vector<double>(m_)};
  out.u.resize(m_);
  out.h.resize(m_);
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(nt)
  {
#pragma omp for schedule(static)
    for (int k = 0; k < m_; ++k) pass1(s, t, k, w);
#pragma omp for schedule(static)
    for (int k = 0; k < m_; ++k) pass2(s, k, w, out);
  }
}

std::vector<double> Rhs::closure_f(const State& s, double t) const {
  std::vector<double> out(m_);
  double v[Program::kVars];
  for (int k = 0; k < m_; ++k) {
    cell_vars(s, dx_, t, k, v);
    out[k] = f_.run(v);
  }
  return out;
}

std::vector<double> discrete_invariants(const State& s, double length, const std::vector<Program>& densities,
                                        double t) {
  const int m = static_cast<int>(s.u.size());
  const double dx = length / m;
  std::vector<double> out(densities.size(), 0.0);
  double v[Program::kVars];
  for (int k = 0; k < m; ++k) {
    cell_vars(s, dx, t, k, v);
    for (std::size_t d = 0; d < densities.size(); ++d) out[d] += densities[d].run(v);
  }
  for (double& x : out) x *= dx;
  return out;
}

std::vector<double> discrete_invariants(const State& s, double length,
                                        const std::vector<std::pair<std::string, std::string>>& densities, double t) {
  GridConfig cfg;
  cfg.length = length;
  const auto params = with_builtins(cfg);
  const Frame frame = solver_frame(params);
  std::vector<Program> ps;
  for (const auto& [n, e] : densities) ps.push_back(compile_text(e, frame, params));
  return discrete_invariants(s, length, ps, t);
}

double DiagnosticsSeries::absolute_drift(std::size_t d) const {
  double m = 0.0;
  for (double v : values[d]) m = std::max(m, std::abs(v - values[d].front()));
  return m;
}

double DiagnosticsSeries::relative_drift(std::size_t d) const {
  const double a = absolute_drift(d);
  const double ref = std::max(std::abs(values[d].front()), d < scales.size() ? scales[d] : 0.0);
  return ref > 0 ? a / ref : a;
}

std::string DiagnosticsSeries::csv() const {
  std::ostringstream o;
  o.precision(17);
  o << "time,density,value,drift\n";
  for (std::size_t n = 0; n < times.size(); ++n)
    for (std::size_t d = 0; d < names.size(); ++d)
      o << times[n] << ',' << names[d] << ',' << values[d][n] << ',' << values[d][n] - values[d][0] << '\n';
  return o.str();
}

State initial_state(const GridConfig& cfg) {
  cfg.validate();
  const auto params = with_builtins(cfg);
  const Frame frame = solver_frame(params);
  Program pu = compile_text(cfg.u0, frame, params);
  Program ph = compile_text(cfg.h0, frame, params);
  State s{std::vector<double>(cfg.cells), std::vector<double>(cfg.cells)};
  const double dx = cfg.length / cfg.cells;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> noise(-1.0, 1.0);
  for (int k = 0; k < cfg.cells; ++k) {
    double v[Program::kVars] = {0.0, (k + 0.5) * dx, 0, 0, 0, 0, 0, 0};
    s.u[k] = pu.run(v);
    s.h[k] = ph.run(v) + (cfg.noise > 0 ? cfg.noise * noise(rng) : 0.0);
    if (!(s.h[k] >= 0.5)) throw std::invalid_argument("initial height must stay above 0.5");
    if (!std::isfinite(s.u[k])) throw std::invalid_argument("initial velocity is not finite");
  }
  return s;
}

SimulationResult simulate(const GridConfig& cfg) {
  cfg.validate();
  const auto params = with_builtins(cfg);
  const Frame frame = solver_frame(params);
  Rhs rhs(cfg);
  State s = initial_state(cfg);
  const int m = cfg.cells;
  const double dx = rhs.dx();

  SimulationResult res;
  res.flux_form_f = rhs.f_conservative();
  res.flux_form_g = rhs.g_conservative();
  auto dens = cfg.densities.empty() ? canonical_densities() : cfg.densities;
  std::vector<Program> dp;
  for (const auto& [n, e] : dens) {
    res.series.names.push_back(n);
    dp.push_back(compile_text(e, frame, params));
  }
  res.series.values.assign(dens.size(), {});
  auto record = [&](double t) {
    res.series.times.push_back(t);
    auto v = discrete_invariants(s, cfg.length, dp, t);
    for (std::size_t d = 0; d < v.size(); ++d) res.series.values[d].push_back(v[d]);
  };

  // step: advective CFL, plus a diffusive bound from the sensitivity to u_xx
  double dt = cfg.dt;
  if (dt == 0) {
    double speed = 0.0;
    double nu = 0.0;
    Program f = compile_text(cfg.closure.f_expr, frame, params);
    for (int k = 0; k < m; ++k) {
      speed = std::max(speed, std::abs(s.u[k]) + std::sqrt(std::max(s.h[k], 0.0)));
      double v[Program::kVars];
      cell_vars(s, dx, 0.0, k, v);
      const double base = f.run(v);
      const double du = 1e-6 * std::max(1.0, std::abs(v[Program::UXX]));
      v[Program::UXX] += du;
      nu = std::max(nu, std::abs((f.run(v) - base) / du));
    }
    dt = cfg.cfl * dx / std::max(speed, 1e-12);
    if (nu > 0) dt = std::min(dt, cfg.cfl * dx * dx / nu);
  }
  const int steps = static_cast<int>(std::ceil(cfg.t_end / dt - 1e-12));
  dt = cfg.t_end / steps;
  res.dt = dt;
  res.steps = steps;

  auto eval = [&](const State& x, double t, State& out) {
    if (cfg.parallel) {
      rhs.parallel(x, t, out, cfg.threads);
    } else {
      rhs.serial(x, t, out);
    }
  };
  auto axpy = [m](const State& a, double w, const State& b, State& out) {
    out.u.resize(m);
    out.h.resize(m);
    for (int k = 0; k < m; ++k) {
      out.u[k] = a.u[k] + w * b.u[k];
      out.h[k] = a.h[k] + w * b.h[k];
    }
  };
  auto check = [&](double t) {
    for (int k = 0; k < m; ++k) {
      if (!std::isfinite(s.u[k]) || !std::isfinite(s.h[k])) throw SimulationError("non-finite state", t);
      if (std::abs(s.u[k]) > 1e6 || s.h[k] > 1e6 || s.h[k] <= 0) throw SimulationError("state blew up", t);
      if (rhs.singular_in_ux()) {
        const int kp = k + 1 == m ? 0 : k + 1;
        const int km = k == 0 ? m - 1 : k - 1;
        if (std::abs(s.u[kp] - s.u[km]) / (2 * dx) < cfg.ux_guard) throw SimulationError("|u_x| fell below guard", t);
      }
    }
  };

  check(0.0);
  record(0.0);
  {
    std::vector<double> sc(dp.size(), 0.0);
    double v[Program::kVars];
    for (int k = 0; k < m; ++k) {
      cell_vars(s, dx, 0.0, k, v);
      for (std::size_t d = 0; d < dp.size(); ++d) sc[d] += std::abs(dp[d].run(v)) * dx;
    }
    res.series.scales = std::move(sc);
  }
  State k1, k2, k3, k4, tmp;
  for (int n = 0; n < steps; ++n) {
    const double t = n * dt;
    eval(s, t, k1);
    axpy(s, 0.5 * dt, k1, tmp);
    eval(tmp, t + 0.5 * dt, k2);
    axpy(s, 0.5 * dt, k2, tmp);
    eval(tmp, t + 0.5 * dt, k3);
    axpy(s, dt, k3, tmp);
    eval(tmp, t + dt, k4);
    for (int k = 0; k < m; ++k) {
      s.u[k] += dt / 6 * (k1.u[k] + 2 * k2.u[k] + 2 * k3.u[k] + k4.u[k]);
      s.h[k] += dt / 6 * (k1.h[k] + 2 * k2.h[k] + 2 * k3.h[k] + k4.h[k]);
    }
    check(t + dt);
    record((n + 1) * dt);
  }
  res.final_state = std::move(s);
  return res;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceReport convergence_study(GridConfig cfg, const std::vector<int>& levels) {
  if (levels.size() < 3) throw std::invalid_argument("convergence study needs at least three levels");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (levels[i] != 2 * levels[i - 1]) throw std::invalid_argument("levels must double");
  const auto t0 = std::chrono::steady_clock::now();
  ConvergenceReport rep;
  rep.levels = levels;
  std::vector<std::vector<double>> rel;
  for (int M : levels) {
    cfg.cells = M;
    SimulationResult r = simulate(cfg);
    if (rep.densities.empty()) {
      for (const auto& n : r.series.names) rep.densities.push_back({n, {}, false, std::nullopt});
      rel.resize(r.series.names.size());
    }
    for (std::size_t d = 0; d < rep.densities.size(); ++d) {
      rep.densities[d].drifts.push_back(r.series.absolute_drift(d));
      rel[d].push_back(r.series.relative_drift(d));
    }
  }
  for (std::size_t d = 0; d < rep.densities.size(); ++d) {
    auto& dc = rep.densities[d];
    dc.exact = std::all_of(rel[d].begin(), rel[d].end(), [](double v) { return v < 1e-13; });
    if (dc.exact) continue;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      lx.push_back(std::log(cfg.length / levels[i]));
      ly.push_back(std::log(std::max(dc.drifts[i], 1e-300)));
    }
    dc.order = least_squares_slope(lx, ly);
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::string ConvergenceReport::csv() const {
  std::ostringstream o;
  o.precision(17);
  o << "density,cells,drift,order\n";
  for (const auto& d : densities)
    for (std::size_t i = 0; i < levels.size(); ++i) {
      o << d.name << ',' << levels[i] << ',' << d.drifts[i] << ',';
      if (d.exact) {
        o << "exact";
      } else if (d.order) {
        o << *d.order;
      }
      o << '\n';
    }
  return o.str();
}

}  // namespace jetcons::num
