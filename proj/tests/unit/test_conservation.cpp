#include <gtest/gtest.h>

#include <algorithm>

#include "jetcons/conservation.hpp"
#include "jetcons/dsl.hpp"

using namespace jetcons;

namespace {

FramePtr sw() {
  return std::make_shared<Frame>(
      parse_frame("indep t x; dep u h; param c; unknown L1(t,x,u,h); unknown L2(t,x,u,h); unknown q(t,x,u,h);"));
}

Expr P(const std::string& s, const FramePtr& f) { return parse_canonical(s, *f); }

PDESystem free_sw(const FramePtr& f) {
  return make_system(f, {P("u_t + u*u_x + h_x", f), P("h_t + u*h_x + h*u_x", f)},
                     {{f->jet("u_t"), P("-u*u_x - h_x", f)}, {f->jet("h_t"), P("-u*h_x - h*u_x", f)}});
}

MultiplierSet M(const FramePtr& f, const std::string& a, const std::string& b) { return {{P(a, f), P(b, f)}, {}}; }
ConservedVector V(const FramePtr& f, const std::string& a, const std::string& b) { return {{P(a, f), P(b, f)}}; }

}  // namespace

TEST(ConservedVector, FreeShallowWaterLaws) {
  auto f = sw();
  auto sys = free_sw(f);
  struct Row {
    const char *l1, *l2, *rho, *flux;
  } rows[] = {
      {"0", "1", "h", "u*h"},
      {"h", "u", "u*h", "u^2*h + h^2/2"},
      {"u*h", "u^2/2 + h", "(u^2*h + h^2)/2", "u^3*h/2 + u*h^2"},
      {"1", "0", "u", "u^2/2 + h"},
      {"t*h", "t*u - x", "t*u*h - x*h", "t*(u^2*h + h^2/2) - x*u*h"},
  };
  for (const auto& r : rows) {
    auto rep = verify_conserved_vector(sys, M(f, r.l1, r.l2), V(f, r.rho, r.flux));
    EXPECT_TRUE(rep.pass()) << r.rho;
    // independent route: the divergence vanishes on solutions
    Expr div = total_derivative(P(r.rho, f), 0) + total_derivative(P(r.flux, f), 1);
    EXPECT_TRUE(is_zero(on_solution(div, sys)).zero()) << r.rho;
    for (const auto& m : verify_multipliers(sys, M(f, r.l1, r.l2))) EXPECT_TRUE(m.pass()) << r.rho;
    auto x = reconstruct_flux(sys, M(f, r.l1, r.l2), P(r.rho, f));
    ASSERT_TRUE(x) << r.rho;
    EXPECT_TRUE(is_zero(*x - P(r.flux, f)).zero()) << r.rho;
  }
}

TEST(ConservedVector, WrongMultiplierGivesWitness) {
  auto f = sw();
  auto sys = free_sw(f);
  auto reps = verify_multipliers(sys, M(f, "u", "0"));
  bool any_fail = false;
  for (const auto& r : reps) {
    if (r.pass()) continue;
    any_fail = true;
    EXPECT_GT(std::abs(r.verdict.value), 1e-6);
    EXPECT_FALSE(r.verdict.witness.empty());
    auto j = r.to_json(*f);
    EXPECT_EQ(j["verdict"], "nonzero");
    EXPECT_TRUE(j.contains("witness"));
  }
  EXPECT_TRUE(any_fail);
  auto bad = verify_conserved_vector(sys, M(f, "0", "1"), V(f, "h", "u*h + 1/1000*u"));
  EXPECT_FALSE(bad.pass());
}

TEST(ConservedVector, UndeclaredDependencyRejected) {
  auto f = sw();
  auto sys = free_sw(f);
  MultiplierSet m = M(f, "u_x", "0");
  m.declared_args = {f->coord("t"), f->coord("x"), f->jet("u"), f->jet("h")};
  EXPECT_THROW(verify_multipliers(sys, m), std::invalid_argument);
}

TEST(Determining, FreeShallowWaterMatchesReferenceSpan) {
  auto f = sw();
  auto sys = free_sw(f);
  MultiplierSet ansatz = M(f, "L1", "L2");
  auto ds = generate_determining_system(sys, ansatz);
  std::vector<Expr> ref = {P("diff(L1,h) - diff(L2,u)", f), P("diff(L1,u) - h*diff(L2,h)", f),
                           P("diff(L2,t) + u*diff(L2,x) + diff(L1,x)", f),
                           P("diff(L1,t) + u*diff(L1,x) + h*diff(L2,x)", f)};
  auto span = span_equivalence(ds.equations, ref, {"L1", "L2"});
  EXPECT_TRUE(span.equivalent) << span.max_residual;
  EXPECT_EQ(span.rank_a, 4);
  EXPECT_EQ(span.samples, 20);
  EXPECT_EQ(ds.equations.size(), 4u);
  // dropping one reference equation breaks equivalence
  std::vector<Expr> fewer(ref.begin(), ref.end() - 1);
  EXPECT_FALSE(span_equivalence(ds.equations, fewer, {"L1", "L2"}).equivalent);
  // a known solution satisfies every emitted equation
  Bindings b;
  b.unknowns["L1"] = P("t*h", f);
  b.unknowns["L2"] = P("t*u - x", f);
  for (const Expr& e : ds.equations) EXPECT_TRUE(is_zero(substitute(e, b)).zero());
  auto j = ds.to_json(*f);
  EXPECT_EQ(j["equations"].size(), 4u);
}

TEST(Determining, SingleEquation) {
  auto g = std::make_shared<Frame>(parse_frame("indep t x; dep u; unknown L(t,x,u);"));
  auto sys = make_system(g, {parse_canonical("u_t", *g)});
  MultiplierSet m{{parse_canonical("L", *g)}, {}};
  auto ds = generate_determining_system(sys, m);
  ASSERT_EQ(ds.equations.size(), 1u);
  EXPECT_EQ(ds.equations[0], parse_canonical("diff(L, t)", *g));
}

TEST(Determining, NonPolynomialCoordinateRetained) {
  auto f = sw();
  Expr e = P("L1*u_xx + L2*sin(u_xx)*h_xx + L1*h_xx^2", f);
  auto ps = split_polynomial({e}, {f->jet("u_xx"), f->jet("h_xx")});
  ASSERT_EQ(ps.retained.size(), 1u);
  EXPECT_EQ(ps.retained[0], f->jet("u_xx"));
  EXPECT_EQ(ps.split, std::vector<Coord>{f->jet("h_xx")});
  EXPECT_EQ(ps.coefficients.size(), 3u);
}

TEST(Determining, AutoreduceUsesConstantPivots) {
  auto f = sw();
  std::vector<Expr> eqs = {P("diff(L1,h) - diff(L2,u)", f), P("diff(L1,u) + u*(diff(L1,h) - diff(L2,u))", f),
                           P("2*diff(L1,h) - 2*diff(L2,u)", f)};
  auto r = autoreduce(eqs, {"L1", "L2"});
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NE(std::find(r.begin(), r.end(), P("diff(L1,u)", f)), r.end());
  EXPECT_TRUE(span_equivalence(r, {P("diff(L1,h) - diff(L2,u)", f), P("diff(L1,u)", f)}, {"L1", "L2"}).equivalent);
}

TEST(Triviality, Candidates) {
  auto f = sw();
  auto sys = free_sw(f);
  auto nd = triviality_candidate(sys, V(f, "D(x, q)", "-D(t, q)"));
  EXPECT_TRUE(nd.null_divergence.zero());
  EXPECT_TRUE(nd.trivial());
  auto vs = triviality_candidate(sys, V(f, "u_t + u*u_x + h_x", "0"));
  EXPECT_FALSE(vs.null_divergence.zero());
  EXPECT_TRUE(vs.vanishes_on_solutions.zero());
  EXPECT_FALSE(triviality_candidate(sys, V(f, "h", "u*h")).trivial());
}
