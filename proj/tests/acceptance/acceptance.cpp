// Acceptance run: one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "jetcons/catalog.hpp"
#include "jetcons/numerics.hpp"

using namespace jetcons;
using nlohmann::json;

namespace {

struct Criterion {
  bool ok = true;
  std::vector<std::string> notes;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back("failed: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

FixtureResult run(const ModelFixture& m, const std::string& name) { return verify_fixture(m, m.fixture(name)); }

bool all_verdicts(const json& checks, const std::function<bool(const json&)>& pred) {
  for (const auto& c : checks)
    if (!pred(c)) return false;
  return true;
}

bool proven(const json& c) { return c["verdict"] == "proven_zero"; }

// An empty witness point means the residual is a nonzero constant.
bool has_witness(const FixtureResult& r) {
  for (const auto& c : r.report["checks"])
    if (c["verdict"] == "nonzero" && c.contains("witness") &&
        std::abs(c["value"].get<double>()) > 0.0)
      return true;
  return false;
}

Fixture with_entry(Fixture fx, const std::string& key, const std::string& arg, const std::string& value) {
  auto& es = fx.section.entries;
  std::erase_if(es, [&](const Section::Entry& e) { return e.key == key && e.arg == arg; });
  es.push_back({key, arg, value, 0});
  return fx;
}

std::string fmt(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", v);
  return b;
}

// ---------------------------------------------------------------------------

Criterion ac1() {
  Criterion c;
  const auto t0 = std::chrono::steady_clock::now();
  auto m = load_model("sw_free");
  for (const char* n : {"mass_specific_momentum", "mass", "momentum", "energy"}) {
    auto r = run(m, n);
    c.require(r.ok() && r.observed_pass, std::string(n) + " verifies");
    c.require(all_verdicts(r.report["checks"], proven), std::string(n) + " multipliers and vector ProvenZero");
  }
  const double s = seconds_since(t0);
  c.require(s < 5.0, "runtime < 5 s");
  c.note("runtime " + fmt(s) + " s");
  return c;
}

Criterion ac2() {
  Criterion c;
  auto m = load_model("sw_free");
  auto r = run(m, "multipliers_txuh");
  c.require(r.error.empty(), "determining system generated");
  const json& sp = r.report["span"];
  c.require(sp["equivalent"].get<bool>(), "span equivalent to the four reference equations");
  c.require(sp["samples"].get<int>() == 20, "20 seeded points");
  c.require(sp["max_residual"].get<double>() < 1e-9, "span residual < 1e-9");
  c.require(sp["rank_reference"].get<int>() == 4, "reference rank 4");
  c.require(r.report["checks"].size() == r.report["determining"]["equations"].size() && !r.report["checks"].empty(),
            "family substituted into every emitted equation");
  c.require(all_verdicts(r.report["checks"], proven), "general family satisfies every equation symbolically");
  c.note("span residual " + fmt(sp["max_residual"].get<double>()) + ", emitted " +
         std::to_string(r.report["determining"]["equations"].size()) + " equations");
  return c;
}

Criterion ac3() {
  Criterion c;
  int verified = 0;
  for (int row = 1; row <= 5; ++row) {
    auto m = load_model("sw_table1_row" + std::to_string(row));
    for (const auto& fx : m.fixtures) {
      if (fx.kind != "cl" || !fx.flagged.empty()) continue;
      auto r = verify_fixture(m, fx);
      c.require(r.observed_pass, r.id + " verifies");
      verified += r.observed_pass;
    }
  }
  auto generic = load_model("sw_table1_row1");
  int passing = 0;
  for (const auto& fx : generic.fixtures) {
    auto r = verify_fixture(generic, fx);
    if (r.observed_pass) {
      ++passing;
      c.require(fx.name == "mass", "generic class admits only mass, but " + fx.name + " verifies");
    }
  }
  c.require(passing == 1, "exactly one CL for generic F");
  auto e = run(generic, "energy_generic");
  c.require(!e.observed_pass && has_witness(e), "generic-F energy multiplier NonZero with witness");
  c.note(std::to_string(verified) + " listed CLs verified");
  return c;
}

Criterion ac4() {
  Criterion c;
  auto m = load_model("sw_cons_emm");
  auto b = run(m, "bessel");
  c.require(b.ok() && b.observed_pass, "Bessel family satisfies the inverse system");
  double worst = 0.0;
  for (const auto& k : b.report["checks"]) {
    const bool probably = k["verdict"] == "probably_zero" && k["samples"].get<int>() >= 20 &&
                          k["max_residual"].get<double>() < 1e-9;
    c.require(proven(k) || probably, "Bessel " + k["task"].get<std::string>() + " zero within 1e-9");
    worst = std::max(worst, k["max_residual"].get<double>());
  }
  c.require(!b.report["checks"].empty(), "Bessel equations present");
  auto l = run(m, "ln_subclass");
  c.require(l.observed_pass && all_verdicts(l.report["checks"], proven), "ln subclass ProvenZero");
  auto sw = run(m, "ln_subclass_swapped");
  c.require(!sw.observed_pass && has_witness(sw), "swapped closure rejected with witness");
  for (const char* n : {"bessel_closure", "ln_closure"}) c.require(run(m, n).observed_pass, std::string(n) + " closes");
  c.note("Bessel max residual " + fmt(worst) + ", " + std::to_string(b.report["checks"].size()) + " equations");
  return c;
}

Criterion ac5() {
  Criterion c;
  auto m = load_model("sw_cons_dissipation");
  for (const char* n : {"quasilinear_family", "linear_viscosity", "invariant_dissipation_instance"})
    c.require(run(m, n).observed_pass, std::string(n) + " satisfies the determining system");
  for (const char* n : {"generic_uxx_counterexample", "square_counterexample"}) {
    auto r = run(m, n);
    c.require(!r.observed_pass && r.error.empty() && has_witness(r), std::string(n) + " fails with witness");
  }
  return c;
}

Criterion ac6() {
  Criterion c;
  auto m = load_model("pkdv_free");
  int rows = 0;
  for (const auto& fx : m.fixtures)
    if (fx.kind == "cl" && fx.flagged.empty()) {
      c.require(verify_fixture(m, fx).observed_pass, fx.name + " verifies");
      ++rows;
    }
  c.require(rows == 4, "four CL rows");
  c.require(run(m, "free").observed_pass, "free pKdV self-adjoint");
  auto closed = load_model("pkdv_closed");
  c.require(run(closed, "admissible_closure").observed_pass, "admissible closure self-adjoint");
  auto q = run(closed, "quadratic_closure");
  c.require(!q.observed_pass && has_witness(q), "u_x^2 closure not self-adjoint");
  c.require(run(closed, "closure_conditions").observed_pass, "self-adjointness conditions reproduced");
  auto inv = run(m, "point_symmetries");
  c.require(inv.observed_pass, "five point symmetries leave pKdV invariant");
  c.require(m.generators("points").size() == 5, "five point symmetries listed");
  c.require(m.generators("variational").size() == 4, "four variational candidates");
  auto var = run(m, "noether_symmetries");
  c.require(var.observed_pass, "first four are variational");
  auto sc = run(m, "scaling");
  c.require(!sc.observed_pass && has_witness(sc), "scaling is not variational");
  int noether = 0;
  for (const auto& fx : m.fixtures)
    if (fx.kind == "noether") {
      c.require(verify_fixture(m, fx).observed_pass, fx.name + " matches the table multiplier");
      ++noether;
    }
  c.require(noether == 4, "four Noether multipliers");
  return c;
}

Criterion ac7() {
  Criterion c;
  auto m = load_model("sw_cons_dissipation");
  c.require(m.generators("g1").size() == 4, "four g1 generators");
  for (const char* n : {"I1", "I2", "I3", "I4", "I5"}) {
    auto r = run(m, n);
    c.require(r.observed_pass, std::string(n) + " annihilated by g1");
  }
  c.require(run(m, "invariant_dissipation_g1").observed_pass, "invariant closure for symbolic d");
  const Fixture& half = m.fixture("linear_dissipation_half");
  std::vector<std::string> passing;
  for (const char* d : {"-2", "-1", "-1/2", "0", "1/2", "1", "2", "-3/2"}) {
    auto r = verify_fixture(m, with_entry(half, "set", "d", d));
    c.require(r.error.empty(), std::string("d = ") + d + " evaluated");
    if (r.observed_pass) passing.emplace_back(d);
  }
  c.require(passing == std::vector<std::string>{"-1/2"}, "linear dissipation invariant only at d = -1/2");
  c.note("d sweep passing: " + (passing.empty() ? std::string("none") : passing.front()));
  return c;
}

num::GridConfig smooth() {
  num::GridConfig c;
  c.t_end = 0.2;
  c.u0 = "0.1*sin(2*pi*x/L) + 0.05*cos(4*pi*x/L)";
  c.h0 = "1 + 0.1*cos(2*pi*x/L) + 0.05*sin(6*pi*x/L)";
  return c;
}

const num::DensityConvergence& density(const num::ConvergenceReport& r, const std::string& n) {
  for (const auto& d : r.densities)
    if (d.name == n) return d;
  throw std::out_of_range(n);
}

Criterion ac8() {
  Criterion c;
  const std::vector<int> levels{64, 128, 256};

  num::GridConfig ln = smooth();
  ln.closure.f_expr = "(beta1*ln(h) + beta2)*u_x + (beta1*u + beta3)/h*h_x";
  ln.closure.g_expr = "(beta1*u + beta3)*u_x + (beta1*ln(h) + beta2)*h_x";
  ln.closure.parameters = {{"beta1", 0.1}, {"beta2", 0.05}, {"beta3", 0.02}};

  num::GridConfig visc = smooth();
  visc.closure.f_expr = "nu*u_xx";
  visc.closure.parameters = {{"nu", 0.01}};

  num::GridConfig free = smooth();

  double worst_mass = 0.0;
  std::vector<num::ConvergenceReport> reports;
  for (const auto* cfg : {&ln, &visc, &free}) {
    reports.push_back(num::convergence_study(*cfg, levels));
    for (double d : density(reports.back(), "h").drifts) worst_mass = std::max(worst_mass, d);
  }
  // relative drift: mass is 1 for these initial data
  c.require(worst_mass <= 1e-13, "mass drift <= 1e-13 on every run");
  const auto& lr = reports[0];
  for (const char* n : {"uh", "energy"}) {
    const auto& d = density(lr, n);
    c.require(d.exact || (d.order && *d.order >= 1.7), std::string("ln closure ") + n + " order >= 1.7");
    if (d.order) c.note(std::string(n) + " order " + fmt(*d.order));
  }
  c.require(lr.seconds < 30.0, "ln study < 30 s");

  auto sim = num::simulate(visc);
  const auto& e = sim.series.values[3];
  bool monotone = true;
  for (std::size_t n = 1; n < e.size(); ++n) monotone = monotone && e[n] < e[n - 1];
  c.require(monotone, "viscous energy decreases monotonically");
  const auto& vd = density(reports[1], "energy");
  c.require(!vd.exact && vd.order && std::abs(*vd.order) < 0.5 && vd.drifts.back() > 0.5 * vd.drifts.front(),
            "viscous energy drift does not converge");
  c.note("mass drift " + fmt(worst_mass) + ", viscous energy drifts " + fmt(vd.drifts.front()) + " -> " +
         fmt(vd.drifts.back()) + ", ln study " + fmt(lr.seconds) + " s");
  return c;
}

// One-term mutations of catalog fluxes, densities and multipliers.
struct Mutation {
  const char* model;
  const char* fixture;
  const char* key;
  int component;  // list entry for lambda
  int term;       // index into the canonical terms
  enum { Drop, Negate, Double, AddTerm } op;
};

Expr mutate(const Expr& e, int term, int op, const Expr& extra) {
  auto ts = terms_of(e);
  if (term >= static_cast<int>(ts.size())) throw std::out_of_range("term index");
  std::vector<Expr> out;
  for (int i = 0; i < static_cast<int>(ts.size()); ++i) {
    Rational k = ts[i].first;
    if (i == term) {
      if (op == Mutation::Drop) continue;
      if (op == Mutation::Negate) k = -k;
      if (op == Mutation::Double) k = k * Rational(2);
    }
    out.push_back(Expr(k) * ts[i].second);
  }
  Expr r = add(std::span<const Expr>(out));
  return op == Mutation::AddTerm ? r + extra : r;
}

Criterion ac9() {
  Criterion c;
  const std::vector<Mutation> ms = {
      {"sw_free", "mass", "flux", 0, 0, Mutation::Drop},
      {"sw_free", "momentum", "flux", 0, 0, Mutation::Negate},
      {"sw_free", "energy", "rho", 0, 0, Mutation::Double},
      {"sw_free", "energy", "lambda", 1, 0, Mutation::Drop},
      {"sw_free", "galilean_mass_centre", "rho", 0, 1, Mutation::Drop},
      {"pkdv_free", "space_translation", "flux", 0, 2, Mutation::Negate},
      {"pkdv_free", "galilean", "lambda", 0, 1, Mutation::Drop},
      {"pkdv_free", "time_translation", "flux", 0, 1, Mutation::Double},
      {"sw_table1_row3", "energy", "rho", 0, 0, Mutation::Drop},
      {"sw_table1_row5", "momentum", "lambda", 0, 0, Mutation::AddTerm},
  };
  int caught = 0;
  for (const auto& mu : ms) {
    auto m = load_model(mu.model);
    const Fixture& fx = m.fixture(mu.fixture);
    std::vector<std::string> parts;
    {
      std::stringstream ss(*fx.section.get(mu.key));
      for (std::string p; std::getline(ss, p, ';');) parts.push_back(p);
    }
    Expr orig = m.parse(parts.at(mu.component));
    Expr mutated = mutate(orig, mu.term, mu.op, m.parse("u_x"));
    const std::string tag = std::string(mu.model) + ":" + mu.fixture + "." + mu.key;
    c.require(!(mutated == orig), tag + " mutation changes the expression");
    const std::string text = to_string(mutated, *m.frame);
    c.require(m.parse(text) == mutated, tag + " mutation round-trips through the DSL");
    parts[mu.component] = text;
    std::string joined;
    for (std::size_t i = 0; i < parts.size(); ++i) joined += (i ? " ; " : "") + parts[i];
    auto r = verify_fixture(m, with_entry(fx, mu.key, "", joined));
    const bool ok = r.error.empty() && !r.observed_pass && has_witness(r);
    c.require(ok, tag + " mutation detected");
    caught += ok;
  }
  c.note(std::to_string(caught) + "/" + std::to_string(ms.size()) + " mutations NonZero with witness");
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Criterion()>>> acs = {
      {"AC1 free shallow-water conservation laws", ac1},
      {"AC2 determining system and multiplier family", ac2},
      {"AC3 classification table rows", ac3},
      {"AC4 inverse classification (Bessel, ln)", ac4},
      {"AC5 quasi-linear dissipation", ac5},
      {"AC6 potential KdV suite", ac6},
      {"AC7 invariants and invariant closures", ac7},
      {"AC8 numerics", ac8},
      {"AC9 mutation robustness", ac9},
  };
  int failed = 0;
  for (const auto& [name, fn] : acs) {
    Criterion c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c = fn();
    } catch (const std::exception& e) {
      c.ok = false;
      c.note(std::string("exception: ") + e.what());
    }
    const double s = seconds_since(t0);
    std::cout << (c.ok ? "PASS " : "FAIL ") << name << " (" << fmt(s) << " s)";
    for (const auto& n : c.notes) std::cout << "; " << n;
    std::cout << "\n";
    failed += !c.ok;
  }
  return failed == 0 ? 0 : 1;
}
