#include <gtest/gtest.h>

#include "jetcons/dsl.hpp"
#include "jetcons/symmetry.hpp"

using namespace jetcons;

namespace {

Expr P(const std::string& s, const FramePtr& f, const Macros* m = nullptr) { return parse_canonical(s, *f, m); }

FramePtr sw() {
  return std::make_shared<Frame>(parse_frame("indep t x; dep u h; param c d nu; unknown F(h,u_x,h_x);"));
}

VectorField field(const FramePtr& f, std::vector<std::string> xi, std::vector<std::string> phi) {
  VectorField q;
  for (auto& s : xi) q.xi.push_back(P(s, f));
  for (auto& s : phi) q.phi.push_back(P(s, f));
  return q;
}

PDESystem closed_sw(const FramePtr& f, const std::string& fexpr, const std::string& gexpr = "0") {
  Expr fe = P(fexpr, f);
  Expr ge = P(gexpr, f);
  return make_system(f, {P("u_t + u*u_x + h_x", f) - fe, P("h_t + u*h_x + h*u_x", f) - ge},
                     {{f->jet("u_t"), P("-u*u_x - h_x", f) + fe}, {f->jet("h_t"), P("-u*h_x - h*u_x", f) + ge}});
}

bool all_pass(const std::vector<CheckReport>& rs) {
  return std::all_of(rs.begin(), rs.end(), [](const CheckReport& r) { return r.pass(); });
}

std::vector<VectorField> g1(const FramePtr& f) {
  return {field(f, {"1", "0"}, {"0", "0"}), field(f, {"0", "1"}, {"0", "0"}), field(f, {"0", "t"}, {"1", "0"}),
          field(f, {"t", "(1+d)*x"}, {"d*u", "2*d*h"})};
}

}  // namespace

TEST(Invariance, FreeShallowWaterAlgebra) {
  auto f = sw();
  auto sys = closed_sw(f, "0");
  std::vector<VectorField> gens = {
      field(f, {"t", "x"}, {"0", "0"}), field(f, {"0", "x"}, {"u", "2*h"}), field(f, {"0", "t"}, {"1", "0"}),
      field(f, {"2*x - 6*t*u", "(6*h - 3*u^2)*t"}, {"u^2 + 4*h", "4*h*u"})};
  // hodograph family: tau, zeta solving zeta_h - u tau_h + tau_u = 0, zeta_u - u tau_u + h tau_h = 0
  const std::pair<const char*, const char*> hodo[] = {
      {"u", "u^2/2 - h"}, {"h + u^2", "2*u^3/3 - u*h"}, {"u*h + u^3/3", "u^4/4 - h^2/2"}};
  for (const auto& [tau, zeta] : hodo) {
    Expr T = P(tau, f);
    Expr Z = P(zeta, f);
    Expr u = P("u", f);
    Expr h = P("h", f);
    EXPECT_TRUE(is_zero(diff_partial(Z, f->jet("h")) - u * diff_partial(T, f->jet("h")) + diff_partial(T, f->jet("u"))).zero());
    EXPECT_TRUE(is_zero(diff_partial(Z, f->jet("u")) - u * diff_partial(T, f->jet("u")) + h * diff_partial(T, f->jet("h"))).zero());
    gens.push_back(field(f, {tau, zeta}, {"0", "0"}));
  }
  for (std::size_t k = 0; k < gens.size(); ++k) EXPECT_TRUE(all_pass(invariance_check(sys, gens[k]))) << k;
  // zeta = u^2/2 + h violates the defining system and is not a symmetry
  EXPECT_FALSE(all_pass(invariance_check(sys, field(f, {"u", "u^2/2 + h"}, {"0", "0"}))));
  EXPECT_FALSE(all_pass(invariance_check(sys, field(f, {"0", "0"}, {"u", "0"}))));
  PDESystem no_solve = make_system(f, sys.equations);
  EXPECT_THROW(invariance_check(no_solve, gens[0]), std::invalid_argument);
}

TEST(Invariance, DissipationClosureAndLinearDissipation) {
  auto f = sw();
  auto sys = closed_sw(f, "D(x, c*h^2*u_x^(2*d))");
  for (const auto& q : g1(f)) EXPECT_TRUE(all_pass(invariance_check(sys, q)));
  auto lin = closed_sw(f, "nu*u_xx");
  auto at = [&](const std::string& dv) {
    std::map<Coord, Expr> s{{f->parameter("d"), P(dv, f)}};
    bool ok = true;
    for (auto q : g1(f)) {
      for (auto& e : q.xi) e = substitute(e, s);
      for (auto& e : q.phi) e = substitute(e, s);
      ok = ok && all_pass(invariance_check(lin, q));
    }
    return ok;
  };
  EXPECT_TRUE(at("-1/2"));
  EXPECT_FALSE(at("1"));
  EXPECT_FALSE(at("0"));
}

TEST(Invariants, ElementaryInvariantsOfSubalgebra) {
  auto f = sw();
  for (const char* s : {"h*u_x^(2*d)", "h_x*u_x^(d-1)", "u_xx*u_x^(-(2+d))", "u_x^(d-1)*(u_t + u*u_x)",
                        "u_x^(2*d-1)*(h_t + u*h_x)"})
    EXPECT_TRUE(all_pass(invariant_check(P(s, f), g1(f), f))) << s;
  auto r = invariant_check(P("u", f), {field(f, {"0", "0"}, {"1", "0"})}, f);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_FALSE(r[0].pass());
  EXPECT_DOUBLE_EQ(r[0].verdict.value, 1.0);
  EXPECT_FALSE(all_pass(invariant_check(P("h*u_x", f), g1(f), f)));
}

TEST(Invariants, Representation) {
  auto f = sw();
  Macros m;
  m["I1"] = P("h*u_x^(2*d)", f);
  m["I2"] = P("h_x*u_x^(d-1)", f);
  m["I3"] = P("u_xx*u_x^(-(2+d))", f);
  m["I4"] = P("u_x^(d-1)*(u_t + u*u_x)", f);
  m["I5"] = P("u_x^(2*d-1)*(h_t + u*h_x)", f);
  std::vector<std::vector<Expr>> gamma = {{P("u_x^(d-1)", f), Expr(0)}, {Expr(0), P("u_x^(2*d-1)", f)}};
  auto free = closed_sw(f, "0");
  EXPECT_TRUE(all_pass(invariant_representation_check(free, gamma, {P("I4 + I2", f, &m), P("I5 + I1", f, &m)})));
  auto id = invariant_representation_check(free, {{Expr(1), Expr(0)}, {Expr(0), Expr(1)}}, free.equations);
  EXPECT_TRUE(all_pass(id));
  auto diss = closed_sw(f, "D(x, c*h^2*u_x^(2*d))");
  Expr tilde = P("I4 + I2 - (2*c*d*I1^2*I3 + 2*c*I1*I2)", f, &m);
  EXPECT_TRUE(all_pass(invariant_representation_check(diss, gamma, {tilde, P("I5 + I1", f, &m)})));
  Expr wrong = P("I4 + I2 - (2*c*d*I1^2*I3 + c*I1*I2)", f, &m);
  EXPECT_FALSE(all_pass(invariant_representation_check(diss, gamma, {wrong, P("I5 + I1", f, &m)})));
}

TEST(Equivalence, DissipativeClassGenerators) {
  auto f = sw();
  auto cls = closed_sw(f, "F*u_xx");
  struct Gen {
    std::vector<std::string> xi, phi;
    const char* fcomp;
    bool ok;
  } gens[] = {
      {{"1", "0"}, {"0", "0"}, "0", true},
      {{"0", "1"}, {"0", "0"}, "0", true},
      {{"0", "t"}, {"1", "0"}, "0", true},
      {{"t", "0"}, {"-u", "-2*h"}, "-F", true},
      {{"0", "x"}, {"u", "2*h"}, "2*F", true},
      {{"t", "0"}, {"-u", "-2*h"}, "F", false},
      {{"0", "x"}, {"u", "2*h"}, "0", false},
  };
  for (const auto& g : gens) {
    auto r = equivalence_invariance_check(cls, field(f, g.xi, g.phi), {{"F", P(g.fcomp, f)}});
    EXPECT_EQ(all_pass(r), g.ok) << g.fcomp;
  }
}

TEST(Equivalence, DiscreteMaps) {
  auto f = sw();
  auto cls = closed_sw(f, "F*u_xx");
  PointMap a{{-1, -1}, {1, 1}, {}, {{"F", Rational(-1)}}};
  PointMap b{{-1, 1}, {-1, 1}, {}, {{"F", Rational(-1)}}};
  PointMap bad{{-1, -1}, {1, 1}, {}, {{"F", Rational(1)}}};
  auto ra = point_map_check(cls.equations, cls.equations, *f, a);
  EXPECT_TRUE(ra.pass());
  EXPECT_EQ(ra.signs, (std::vector<int>{-1, -1}));
  auto rb = point_map_check(cls.equations, cls.equations, *f, b);
  EXPECT_TRUE(rb.pass());
  EXPECT_EQ(rb.signs, (std::vector<int>{1, -1}));
  EXPECT_FALSE(point_map_check(cls.equations, cls.equations, *f, bad).pass());
}

TEST(Equivalence, ConstantShiftTrivializesClosure) {
  auto f = std::make_shared<Frame>(parse_frame("indep t x; dep u h; param a5;"));
  auto src = std::vector<Expr>{P("u_t + u*u_x + h_x - a5*u_x", f), P("h_t + u*h_x + h*u_x - a5*h_x", f)};
  auto tgt = std::vector<Expr>{P("u_t + u*u_x + h_x", f), P("h_t + u*h_x + h*u_x", f)};
  PointMap shift{{1, 1}, {1, 1}, {P("-a5", f), Expr(0)}, {}};
  EXPECT_TRUE(point_map_check(tgt, src, *f, shift).pass());
  PointMap none{{1, 1}, {1, 1}, {}, {}};
  EXPECT_FALSE(point_map_check(tgt, src, *f, none).pass());
}

TEST(Invariance, KernelOnBesselClosure) {
  auto f = std::make_shared<Frame>(parse_frame("indep t x; dep u h; param a1 a2 a3 a4 a5 b;"));
  Macros m;
  m["f1"] = P("(a1*sin(sqrt(b)*u) + a2*cos(sqrt(b)*u))*(a3*besselJ(0, 2*sqrt(b*h)) + a4*besselY(0, 2*sqrt(b*h))) + a5", f);
  m["f2"] = P("h^(-1/2)*(a1*cos(sqrt(b)*u) - a2*sin(sqrt(b)*u))*(a3*besselJ(1, 2*sqrt(b*h)) + a4*besselY(1, 2*sqrt(b*h)))", f);
  Expr fe = P("f1*u_x + f2*h_x", f, &m);
  Expr ge = P("f2*h*u_x + f1*h_x", f, &m);
  auto sys = make_system(f, {P("u_t + u*u_x + h_x", f) - fe, P("h_t + u*h_x + h*u_x", f) - ge},
                         {{f->jet("u_t"), P("-u*u_x - h_x", f) + fe}, {f->jet("h_t"), P("-u*h_x - h*u_x", f) + ge}});
  for (auto q : {field(f, {"t", "x"}, {"0", "0"}), field(f, {"1", "0"}, {"0", "0"}), field(f, {"0", "1"}, {"0", "0"})})
    EXPECT_TRUE(all_pass(invariance_check(sys, q)));
  EXPECT_FALSE(all_pass(invariance_check(sys, field(f, {"0", "t"}, {"1", "0"}))));
}
