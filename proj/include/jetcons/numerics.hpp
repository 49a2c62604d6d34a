#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jetcons/expr.hpp"

namespace jetcons::num {

/// Stack bytecode for a concrete jet expression over the solver variables.
class Program {
 public:
  enum Var : std::uint8_t { T = 0, X, U, H, UX, HX, UXX, HXX, kVars };

  /// Parameters are folded to constants; unknown functions and coordinates
  /// outside (t,x,u,h,u_x,h_x,u_xx,h_xx) are rejected.
  static Program compile(const Expr& e, const Frame& frame, const std::map<std::string, double>& params);

  [[nodiscard]] double run(const double* vars) const;
  [[nodiscard]] bool uses(Var v) const { return (used_ >> v) & 1u; }
  [[nodiscard]] std::size_t size() const { return code_.size(); }

 private:
  enum class Op : std::uint8_t { Const, Load, Add, Mul, Pow, PowI, Ln, Exp, Sin, Cos, BesselJ, BesselY };
  struct Ins {
    Op op;
    int arg = 0;
    double value = 0.0;
  };
  void emit(const Expr& e, const Frame& frame, const std::map<std::string, double>& params);

  std::vector<Ins> code_;
  std::size_t depth_ = 0;
  std::uint32_t used_ = 0;
};

struct ClosureSpec {
  std::string f_expr = "0";
  std::string g_expr = "0";
  std::map<std::string, double> parameters;
};

struct GridConfig {
  int cells = 128;
  double length = 1.0;
  double dt = 0.0;   // > 0: fixed step
  double cfl = 0.4;  // used when dt == 0
  double t_end = 0.2;
  std::uint64_t seed = 0;
  double noise = 0.0;  // amplitude of a seeded perturbation added to h0
  std::string u0 = "0.1*sin(2*pi*x/L)";
  std::string h0 = "1 + 0.1*cos(2*pi*x/L)";
  ClosureSpec closure;
  /// Monitored densities (name, expression); empty means the canonical four.
  std::vector<std::pair<std::string, std::string>> densities;
  bool parallel = false;
  int threads = 0;  // 0: OpenMP default
  double ux_guard = 1e-3;

  void validate() const;
};

/// Reads an INI-style run file with sections [grid], [init], [closure],
/// [params] and [densities].
GridConfig parse_grid_config(const std::string& text);
GridConfig load_grid_config(const std::string& path);

std::vector<std::pair<std::string, std::string>> canonical_densities();

struct State {
  std::vector<double> u;
  std::vector<double> h;
};

class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& what, double t)
      : std::runtime_error(what + " at t = " + std::to_string(t)), time_(t) {}
  [[nodiscard]] double time() const { return time_; }

 private:
  double time_;
};

/// Semi-discrete right-hand side of the closed shallow-water system on a
/// periodic grid. Terms with a certified flux are differenced in flux form.
class Rhs {
 public:
  explicit Rhs(const GridConfig& cfg);

  void serial(const State& s, double t, State& out) const;
  void parallel(const State& s, double t, State& out, int threads = 0) const;

  [[nodiscard]] bool f_conservative() const { return f_flux_.has_value(); }
  [[nodiscard]] bool g_conservative() const { return g_flux_.has_value(); }
  [[nodiscard]] bool singular_in_ux() const { return singular_; }
  [[nodiscard]] int cells() const { return m_; }
  [[nodiscard]] double dx() const { return dx_; }
  [[nodiscard]] double x(int k) const { return (k + 0.5) * dx_; }
  /// Pointwise closure source f at every cell (pointwise, not flux-differenced).
  [[nodiscard]] std::vector<double> closure_f(const State& s, double t) const;

 private:
  struct Scratch {
    std::vector<double> ff;
    std::vector<double> fg;
    std::vector<double> pf;
    std::vector<double> pg;
  };
  void pass1(const State& s, double t, int k, Scratch& w) const;
  void pass2(const State& s, int k, const Scratch& w, State& out) const;

  int m_;
  double dx_;
  Program f_;
  Program g_;
  std::optional<Program> f_flux_;
  std::optional<Program> g_flux_;
  bool singular_ = false;
};

/// Per-cell variable vector (t,x,u,h,u_x,h_x,u_xx,h_xx) with central stencils.
void cell_vars(const State& s, double dx, double t, int k, double* v);

std::vector<double> discrete_invariants(const State& s, double length, const std::vector<Program>& densities,
                                        double t = 0.0);
std::vector<double> discrete_invariants(const State& s, double length,
                                        const std::vector<std::pair<std::string, std::string>>& densities,
                                        double t = 0.0);

struct DiagnosticsSeries {
  std::vector<std::string> names;
  std::vector<double> times;
  std::vector<std::vector<double>> values;  // values[d][n]
  std::vector<double> scales;               // sum |rho_k| dx at t = 0

  /// max_n |I_n - I_0| / max(|I_0|, scale).
  [[nodiscard]] double relative_drift(std::size_t d) const;
  [[nodiscard]] double absolute_drift(std::size_t d) const;
  [[nodiscard]] std::string csv() const;
};

struct SimulationResult {
  DiagnosticsSeries series;
  State final_state;
  double dt = 0.0;
  int steps = 0;
  bool flux_form_f = false;
  bool flux_form_g = false;
};

State initial_state(const GridConfig& cfg);
SimulationResult simulate(const GridConfig& cfg);

struct DensityConvergence {
  std::string name;
  std::vector<double> drifts;
  bool exact = false;
  std::optional<double> order;
};

struct ConvergenceReport {
  std::vector<int> levels;
  std::vector<DensityConvergence> densities;
  double seconds = 0.0;
  [[nodiscard]] std::string csv() const;
};

/// Runs cfg at each level (cells doubling) and fits log(drift) against
/// log(dx) by least squares.
ConvergenceReport convergence_study(GridConfig cfg, const std::vector<int>& levels);

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace jetcons::num
