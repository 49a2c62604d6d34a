#include "jetcons/catalog.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <sstream>

namespace jetcons {

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& embedded_models();
}

namespace {

const std::set<std::string> kRawKinds = {"frame", "equations", "solve"};
const std::set<std::string> kFixtureKinds = {
    "cl",        "multiplier", "determining", "inverse",   "closure", "selfadjoint", "selfadjoint_conditions",
    "lagrangian", "invariance", "variational", "noether", "invariant", "representation", "equivalence", "map"};
// kinds whose `bind` entries are candidate solutions of generated equations
const std::set<std::string> kGenerating = {"determining", "inverse", "selfadjoint_conditions"};
const std::set<std::string> kKnownKeys = {
    "locus", "expect", "flagged", "lambda", "rho", "flux", "rhs", "target_rhs", "ansatz", "ref", "bind",
    "relation", "unknowns", "split", "split_independents", "density", "lagrangian", "field", "algebra", "extra",
    "factor", "modulo", "expr", "gamma", "tilde", "indep", "dep", "shift", "scale", "set"};
const std::set<std::string> kExprKeys = {"lambda", "rho", "flux", "rhs", "target_rhs", "ansatz", "ref", "density",
                                         "expr", "gamma", "tilde", "indep", "dep", "shift"};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

[[noreturn]] void fail(const std::string& what, int line) {
  throw ModelError(what + (line > 0 ? " (line " + std::to_string(line) + ")" : ""));
}

DerivRelation parse_relation(const std::string& lhs, const std::string& rhs, const ModelFixture& m, int line) {
  Expr l = m.parse(lhs);
  if (l.kind() != Kind::Unknown) fail("relation needs a derivative of an unknown on the left", line);
  const UnknownNode& n = l.as_unknown();
  return {n.decl->name, n.derivs, m.parse(rhs)};
}

Rational rational(const Expr& e, int line) {
  if (!e.is_number()) fail("expected a rational number", line);
  return e.number();
}

bool yes(const std::optional<std::string>& v) { return v && (*v == "yes" || *v == "true"); }

bool all_pass(const std::vector<CheckReport>& rs) {
  return std::all_of(rs.begin(), rs.end(), [](const CheckReport& r) { return r.pass(); });
}

CheckReport check(std::string task, Expr residual, const ZeroOptions& opt) {
  CheckReport r;
  r.task = std::move(task);
  r.residual = std::move(residual);
  r.verdict = is_zero(r.residual, opt);
  return r;
}

// Everything a fixture needs resolved against its model.
class Context {
 public:
  Context(const ModelFixture& m, const Fixture& fx, const ZeroOptions& opt) : m_(m), fx_(fx), opt_(opt) {
    const Section& s = fx.section;
    for (const auto* e : s.all("set")) set_[m.frame->parameter(e->arg)] = m.parse(e->value);
    rel_.relations = m.relations;
    for (const auto* e : s.all("relation")) rel_.relations.push_back(parse_relation(e->arg, e->value, m, e->line));
    for (const auto* e : s.all("bind")) {
      if (!m.frame->find_unknown(e->arg)) fail("bind of undeclared unknown " + e->arg, e->line);
      bind_.unknowns[e->arg] = expr_raw(e->value);
    }
    specialize_ = !kGenerating.count(fx.kind);
  }

  // parsed, parameters set, but no unknowns bound
  Expr expr_raw(const std::string& text) const {
    Expr e = m_.parse(text);
    return set_.empty() ? e : substitute(e, set_);
  }
  Expr expr(const std::string& text) const { return specialize_ ? spec(expr_raw(text)) : expr_raw(text); }
  Expr spec(const Expr& e) const { return relate(bind_.unknowns.empty() ? e : substitute(e, bind_)); }
  Expr relate(const Expr& e) const { return rel_.relations.empty() ? e : substitute(e, rel_); }
  Expr solve(const Expr& e) const { return relate(substitute(e, bind_)); }

  std::string need(const std::string& key) const {
    auto v = fx_.section.get(key);
    if (!v) fail(fx_.kind + " " + fx_.name + " needs `" + key + "`", fx_.section.line);
    return *v;
  }
  std::vector<Expr> list(const std::string& key) const {
    std::vector<Expr> out;
    for (const auto& s : split(need(key), ';')) out.push_back(expr(s));
    return out;
  }
  std::vector<Expr> list_or(const std::string& key, std::size_t n) const {
    if (fx_.section.get(key)) return list(key);
    return std::vector<Expr>(n, Expr(0));
  }

  PDESystem system(const std::string& key = "rhs") const {
    PDESystem sys = m_.closed(list_or(key, m_.system.equations.size()));
    if (set_.empty() && (!specialize_ || bind_.unknowns.empty())) return sys;
    std::vector<Expr> eqs;
    for (const Expr& e : sys.equations) eqs.push_back(specialize_ ? spec(substitute(e, set_)) : substitute(e, set_));
    std::map<Coord, Expr> sol;
    for (const auto& [c, e] : sys.solve_form) sol[c] = specialize_ ? spec(substitute(e, set_)) : substitute(e, set_);
    return make_system(m_.frame, eqs, sol);
  }

  VectorField field(const std::string& name) const {
    auto it = m_.fields.find(name);
    if (it == m_.fields.end()) fail("unknown field " + name, fx_.section.line);
    VectorField q = it->second;
    for (auto& e : q.xi) e = substitute(e, set_);
    for (auto& e : q.phi) e = substitute(e, set_);
    for (auto& [c, e] : q.extra) e = substitute(e, set_);
    return q;
  }
  std::vector<std::string> field_names() const {
    if (auto a = fx_.section.get("algebra")) {
      auto it = m_.algebras.find(*a);
      if (it == m_.algebras.end()) fail("unknown algebra " + *a, fx_.section.line);
      return it->second;
    }
    return words(need("field"));
  }

  bool has_bind() const { return !bind_.unknowns.empty(); }

  const ModelFixture& m_;
  const Fixture& fx_;
  const ZeroOptions& opt_;
  std::map<Coord, Expr> set_;
  Bindings bind_;
  Bindings rel_;
  bool specialize_ = true;
};

nlohmann::json reports_json(const std::vector<CheckReport>& rs, const Frame& frame) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& r : rs) a.push_back(r.to_json(frame));
  return a;
}

void solution_checks(const Context& cx, const DeterminingSystem& ds, std::vector<CheckReport>& out) {
  if (!cx.has_bind()) return;
  for (std::size_t k = 0; k < ds.equations.size(); ++k)
    out.push_back(check("solution[" + std::to_string(k) + "]", cx.solve(ds.equations[k]), cx.opt_));
}

// Span comparison with the `ref` entries, if any. Returns false on mismatch.
bool span_check(const Context& cx, const std::vector<Expr>& eqs, const std::vector<std::string>& unknowns,
                nlohmann::json& rep) {
  auto refs = cx.fx_.section.all("ref");
  if (refs.empty()) return true;
  std::vector<Expr> ref;
  for (const auto* e : refs) ref.push_back(cx.expr(e->value));
  SpanReport s = span_equivalence(eqs, ref, unknowns, cx.opt_);
  rep["span"] = {{"equivalent", s.equivalent}, {"max_residual", s.max_residual}, {"samples", s.samples},
                 {"rank_generated", s.rank_a}, {"rank_reference", s.rank_b}};
  return s.equivalent;
}

bool run(const Context& cx, nlohmann::json& rep) {
  const ModelFixture& m = cx.m_;
  const Fixture& fx = cx.fx_;
  const Frame& frame = *m.frame;
  const ZeroOptions& opt = cx.opt_;
  const std::string& k = fx.kind;
  std::vector<CheckReport> checks;
  bool extra_ok = true;
  const Frame* report_frame = &frame;
  std::optional<OpaqueFrame> opaque;

  if (k == "cl" || k == "multiplier") {
    PDESystem sys = cx.system();
    MultiplierSet lam{cx.list("lambda"), {}};
    checks = verify_multipliers(sys, lam, opt);
    if (k == "cl") {
      ConservedVector cv{{cx.expr(cx.need("rho")), cx.expr(cx.need("flux"))}};
      checks.push_back(check("conserved_vector", cx.relate(characteristic_residual(sys, lam, cv)), opt));
    }
  } else if (k == "determining" || k == "inverse") {
    DeterminingSystem ds;
    std::vector<std::string> unknowns;
    if (k == "determining") {
      MultiplierSet ansatz{cx.list("ansatz"), {}};
      ds = generate_determining_system(cx.system(), ansatz);
    } else {
      SplitOptions so;
      for (const auto& p : words(fx.section.get("split").value_or(""))) so.parameters.push_back(frame.parameter(p));
      so.split_independents = yes(fx.section.get("split_independents"));
      ds = inverse_determining_system(cx.system(), {cx.list("lambda"), {}}, words(cx.need("unknowns")), so);
    }
    rep["determining"] = ds.to_json(frame);
    extra_ok = span_check(cx, ds.equations, ds.unknowns, rep);
    solution_checks(cx, ds, checks);
  } else if (k == "closure") {
    std::optional<Expr> rho;
    if (auto r = fx.section.get("rho")) rho = cx.expr(*r);
    ClosureReport cr = verify_closure_against_multipliers(cx.system(), {cx.list("lambda"), {}}, rho, opt);
    checks = cr.multipliers;
    if (rho) {
      rep["flux"] = cr.flux ? nlohmann::json(to_string(*cr.flux, frame)) : nlohmann::json(nullptr);
      extra_ok = cr.flux.has_value();
    }
  } else if (k == "selfadjoint") {
    SelfAdjointReport sa = is_self_adjoint(cx.system(), opt);
    CheckReport r;
    r.task = "self_adjoint";
    r.verdict = sa.verdict;
    r.residual = Expr(0);
    for (const auto& e : sa.deficit.entries)
      for (const auto& [J, c] : e)
        if (r.residual.is_zero()) r.residual = c;
    checks.push_back(r);
    rep["deficit"] = sa.deficit.to_json(frame);
  } else if (k == "selfadjoint_conditions") {
    DeterminingSystem ds = selfadjointness_conditions(cx.list("rhs"), frame);
    rep["determining"] = ds.to_json(frame);
    extra_ok = span_check(cx, ds.equations, ds.unknowns, rep);
    solution_checks(cx, ds, checks);
  } else if (k == "lagrangian") {
    PDESystem sys = cx.system();
    auto el = euler_lagrange(Lagrangian{cx.expr(cx.need("density"))}, frame);
    for (std::size_t a = 0; a < el.size(); ++a)
      checks.push_back(check("euler_lagrange[" + frame.dependents()[a] + "]", cx.relate(el[a]) - sys.equations[a], opt));
  } else if (k == "invariance") {
    PDESystem sys = cx.system();
    for (const auto& n : cx.field_names())
      for (auto r : invariance_check(sys, cx.field(n), opt)) {
        r.task = n + ":" + r.task;
        checks.push_back(std::move(r));
      }
  } else if (k == "variational") {
    Expr density;
    if (auto l = fx.section.get("lagrangian")) {
      const Fixture& lf = m.fixture(*l);
      density = Context(m, lf, opt).expr(lf.section.get("density").value_or("0"));
    } else {
      density = cx.expr(cx.need("density"));
    }
    for (const auto& n : cx.field_names()) {
      auto vr = variational_symmetry_check(Lagrangian{density}, cx.field(n), m.frame, opt);
      for (auto r : vr.euler_images) {
        r.task = n + ":" + r.task;
        checks.push_back(std::move(r));
      }
    }
  } else if (k == "noether") {
    PDESystem sys = cx.system();
    Expr eta = characteristic(cx.field(cx.need("field")), frame)[0];
    Expr lam = cx.list("lambda")[0];
    Expr factor = cx.expr(fx.section.get("factor").value_or("1"));
    Expr gap = lam - factor * eta;
    if (yes(fx.section.get("modulo"))) {
      checks.push_back(check("noether_gap_modulo_equation", on_solution(total_derivative(gap, 1), sys), opt));
    } else {
      checks.push_back(check("noether_gap", gap, opt));
    }
    rep["characteristic"] = to_string(eta, frame);
  } else if (k == "invariant") {
    std::vector<VectorField> gens;
    for (const auto& n : cx.field_names()) gens.push_back(cx.field(n));
    checks = invariant_check(cx.expr(cx.need("expr")), gens, m.frame, opt);
  } else if (k == "representation") {
    PDESystem sys = cx.system();
    const std::size_t L = sys.equations.size();
    auto flat = cx.list("gamma");
    if (flat.size() != L * L) fail("gamma needs " + std::to_string(L * L) + " entries", fx.section.line);
    std::vector<std::vector<Expr>> gamma(L);
    for (std::size_t l = 0; l < L; ++l) gamma[l].assign(flat.begin() + l * L, flat.begin() + (l + 1) * L);
    checks = invariant_representation_check(sys, gamma, cx.list("tilde"), opt);
  } else if (k == "equivalence") {
    PDESystem sys = cx.system();
    for (const auto& n : cx.field_names()) {
      auto comps = m.field_unknown_components.count(n) ? m.field_unknown_components.at(n)
                                                        : std::map<std::string, Expr>{};
      for (const auto* e : fx.section.all("extra")) comps[e->arg] = cx.expr(e->value);
      std::vector<std::string> names;
      for (const auto& [u, e] : comps) names.push_back(u);
      if (!opaque) opaque = make_opaque(frame, names);
      for (auto r : equivalence_invariance_check(sys, cx.field(n), comps, opt)) {
        r.task = n + ":" + r.task;
        checks.push_back(std::move(r));
      }
    }
    if (opaque) report_frame = opaque->frame.get();
  } else if (k == "map") {
    PointMap pm;
    for (const Expr& e : cx.list("indep")) pm.indep_scale.push_back(rational(e, fx.section.line));
    for (const Expr& e : cx.list("dep")) pm.dep_scale.push_back(rational(e, fx.section.line));
    if (fx.section.get("shift")) pm.dep_shift = cx.list("shift");
    std::vector<std::string> names;
    for (const auto* e : fx.section.all("scale")) {
      pm.unknown_scale[e->arg] = rational(cx.expr(e->value), e->line);
      names.push_back(e->arg);
    }
    PDESystem src = cx.system("rhs");
    PDESystem tgt = cx.system("target_rhs");
    MapReport mr = point_map_check(tgt.equations, src.equations, frame, pm, opt);
    checks = mr.equations;
    rep["signs"] = mr.signs;
    opaque = make_opaque(frame, names);
    report_frame = opaque->frame.get();
  } else {
    fail("unknown fixture kind " + k, fx.section.line);
  }

  rep["checks"] = reports_json(checks, *report_frame);
  return extra_ok && all_pass(checks);
}

}  // namespace

std::optional<std::string> Section::get(const std::string& key) const {
  for (const auto& e : entries)
    if (e.key == key && e.arg.empty()) return e.value;
  return std::nullopt;
}

std::vector<const Section::Entry*> Section::all(const std::string& key) const {
  std::vector<const Entry*> out;
  for (const auto& e : entries)
    if (e.key == key) out.push_back(&e);
  return out;
}

std::vector<Section> parse_sections(const std::string& text) {
  std::vector<Section> out;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    std::string s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail("unterminated section header", line);
      auto w = words(s.substr(1, s.size() - 2));
      if (w.empty()) fail("empty section header", line);
      Section sec;
      sec.kind = w[0];
      for (std::size_t i = 1; i < w.size(); ++i) sec.name += (i > 1 ? " " : "") + w[i];
      sec.line = line;
      out.push_back(std::move(sec));
      continue;
    }
    if (out.empty()) fail("text before the first section", line);
    Section& sec = out.back();
    if (kRawKinds.count(sec.kind)) {
      sec.lines.push_back(s);
      continue;
    }
    if ((raw.front() == ' ' || raw.front() == '\t') && !sec.entries.empty()) {
      sec.entries.back().value += " " + s;
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail("expected `key = value`", line);
    std::string lhs = trim(s.substr(0, eq));
    Section::Entry e;
    const auto sp = lhs.find_first_of(" \t");
    e.key = lhs.substr(0, sp);
    if (sp != std::string::npos) e.arg = trim(lhs.substr(sp));
    e.value = trim(s.substr(eq + 1));
    e.line = line;
    sec.entries.push_back(std::move(e));
  }
  return out;
}

Expr ModelFixture::parse(const std::string& text) const { return parse_canonical(text, *frame, &macros); }

PDESystem ModelFixture::closed(const std::vector<Expr>& rhs) const {
  if (rhs.size() != system.equations.size()) throw ModelError("closure needs one right-hand side per equation");
  std::vector<Expr> eqs;
  std::map<Coord, Expr> sol;
  for (std::size_t l = 0; l < rhs.size(); ++l) {
    eqs.push_back(system.equations[l] - rhs[l]);
    if (!leading.empty()) sol[leading[l]] = system.solve_form.at(leading[l]) + rhs[l];
  }
  return make_system(frame, eqs, sol);
}

const Fixture& ModelFixture::fixture(const std::string& name) const {
  for (const auto& f : fixtures)
    if (f.name == name) return f;
  throw ModelError("model " + id + " has no fixture " + name);
}

std::vector<VectorField> ModelFixture::generators(const std::string& algebra) const {
  auto it = algebras.find(algebra);
  if (it == algebras.end()) throw ModelError("model " + id + " has no algebra " + algebra);
  std::vector<VectorField> out;
  for (const auto& n : it->second) out.push_back(fields.at(n));
  return out;
}

ModelFixture load_model_text(const std::string& text) {
  auto sections = parse_sections(text);
  ModelFixture m;
  auto find = [&](const std::string& kind) -> const Section& {
    for (const auto& s : sections)
      if (s.kind == kind) return s;
    fail("missing [" + kind + "] section", 0);
  };

  const Section& head = find("model");
  m.id = head.get("id").value_or("");
  m.locus = head.get("locus").value_or("");
  if (m.id.empty() || m.locus.empty()) fail("[model] needs id and locus", head.line);

  // declarations first, then macros and relations in file order
  const Section& fr = find("frame");
  std::string decl;
  std::vector<std::string> later;
  for (const auto& l : fr.lines) {
    auto w = words(l);
    if (w[0] == "let" || w[0] == "relation") {
      later.push_back(l);
    } else {
      decl += l + ";";
    }
  }
  m.frame = std::make_shared<Frame>(parse_frame(decl));
  for (const auto& l : later) {
    const auto eq = l.find('=');
    if (eq == std::string::npos) fail("expected `=` in " + l, fr.line);
    std::string lhs = trim(l.substr(l.find_first_of(" \t"), eq - l.find_first_of(" \t")));
    std::string rhs = trim(l.substr(eq + 1));
    if (l.rfind("let", 0) == 0) {
      m.macros[lhs] = m.parse(rhs);
    } else {
      m.relations.push_back(parse_relation(lhs, rhs, m, fr.line));
    }
  }

  std::vector<Expr> eqs;
  for (const auto& l : find("equations").lines) eqs.push_back(m.parse(l));
  std::map<Coord, Expr> sol;
  for (const auto& s : sections) {
    if (s.kind != "solve") continue;
    for (const auto& l : s.lines) {
      const auto eq = l.find('=');
      if (eq == std::string::npos) fail("expected `coord = expr` in [solve]", s.line);
      Coord c = m.frame->jet(trim(l.substr(0, eq)));
      m.leading.push_back(c);
      sol[c] = m.parse(trim(l.substr(eq + 1)));
    }
    if (m.leading.size() != eqs.size()) fail("[solve] needs one line per equation", s.line);
  }
  m.system = make_system(m.frame, eqs, sol);

  for (const auto& s : sections) {
    if (s.kind == "field") {
      VectorField q;
      for (const auto& t : split(s.get("xi").value_or(""), ';')) q.xi.push_back(m.parse(t));
      for (const auto& t : split(s.get("phi").value_or(""), ';')) q.phi.push_back(m.parse(t));
      if (q.xi.size() != m.frame->num_independents() || q.phi.size() != m.frame->num_dependents())
        fail("field " + s.name + " has wrong arity", s.line);
      for (const auto* e : s.all("extra")) {
        if (m.frame->find_unknown(e->arg)) {
          m.field_unknown_components[s.name][e->arg] = m.parse(e->value);
        } else {
          q.extra[m.frame->coord(e->arg)] = m.parse(e->value);
        }
      }
      m.fields[s.name] = std::move(q);
    } else if (s.kind == "algebra") {
      m.algebras[s.name] = words(s.get("fields").value_or(""));
      for (const auto& n : m.algebras[s.name])
        if (!m.fields.count(n)) fail("algebra " + s.name + " names unknown field " + n, s.line);
    }
  }

  std::set<std::string> names;
  for (const auto& s : sections) {
    if (s.kind == "model" || s.kind == "field" || s.kind == "algebra" || kRawKinds.count(s.kind)) continue;
    if (!kFixtureKinds.count(s.kind)) fail("unknown section kind " + s.kind, s.line);
    if (s.name.empty() || !names.insert(s.name).second) fail("fixture names must be unique and non-empty", s.line);
    Fixture fx;
    fx.kind = s.kind;
    fx.name = s.name;
    fx.locus = s.get("locus").value_or("");
    if (fx.locus.empty()) fail("fixture " + s.name + " needs a locus", s.line);
    const std::string ex = s.get("expect").value_or("pass");
    if (ex != "pass" && ex != "fail") fail("expect must be pass or fail", s.line);
    fx.expect_pass = ex == "pass";
    fx.flagged = s.get("flagged").value_or("");
    for (const auto& e : s.entries) {
      if (!kKnownKeys.count(e.key)) fail("unknown key " + e.key, e.line);
      if (kExprKeys.count(e.key))
        for (const auto& t : split(e.value, ';')) (void)m.parse(t);
      if (e.key == "bind" || e.key == "set" || e.key == "extra" || e.key == "scale") (void)m.parse(e.value);
    }
    fx.section = s;
    m.fixtures.push_back(std::move(fx));
  }
  return m;
}

std::vector<std::string> model_ids() {
  std::vector<std::string> out;
  for (const auto& [name, text] : detail::embedded_models()) out.emplace_back(name);
  return out;
}

ModelFixture load_model(const std::string& id) {
  for (const auto& [name, text] : detail::embedded_models())
    if (name == id) return load_model_text(std::string(text));
  throw ModelError("unknown model id " + id);
}

std::vector<ManifestEntry> list_fixtures() {
  std::vector<ManifestEntry> out;
  for (const auto& id : model_ids()) {
    ModelFixture m = load_model(id);
    ManifestEntry e{m.id, m.locus, {}, {}};
    for (const auto& f : m.fixtures) {
      e.fixtures.emplace_back(f.kind, f.name);
      e.loci.push_back(f.locus);
    }
    out.push_back(std::move(e));
  }
  return out;
}

nlohmann::json FixtureResult::to_json() const {
  nlohmann::json j = report;
  j["id"] = id;
  j["kind"] = kind;
  j["locus"] = locus;
  j["expected"] = expected_pass ? "pass" : "fail";
  j["observed"] = observed_pass ? "pass" : "fail";
  j["ok"] = ok();
  j["seconds"] = seconds;
  if (!flagged.empty()) j["flagged"] = flagged;
  if (!error.empty()) j["error"] = error;
  return j;
}

FixtureResult verify_fixture(const ModelFixture& model, const Fixture& fx, const ZeroOptions& opt) {
  FixtureResult r;
  r.id = model.id + ":" + fx.name;
  r.kind = fx.kind;
  r.locus = fx.locus;
  r.flagged = fx.flagged;
  r.expected_pass = fx.expect_pass;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Context cx(model, fx, opt);
    r.observed_pass = run(cx, r.report);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<FixtureResult> verify_catalog(const std::vector<std::string>& ids, int jobs, const ZeroOptions& opt) {
  std::vector<ModelFixture> models;
  for (const auto& id : ids) models.push_back(load_model(id));
  std::vector<std::pair<std::size_t, std::size_t>> work;
  for (std::size_t i = 0; i < models.size(); ++i)
    for (std::size_t j = 0; j < models[i].fixtures.size(); ++j) work.emplace_back(i, j);
  std::vector<FixtureResult> out(work.size());
  const long n = static_cast<long>(work.size());
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, jobs))
  for (long w = 0; w < n; ++w) {
    const auto [i, j] = work[static_cast<std::size_t>(w)];
    out[static_cast<std::size_t>(w)] = verify_fixture(models[i], models[i].fixtures[j], opt);
  }
  std::sort(out.begin(), out.end(), [](const FixtureResult& a, const FixtureResult& b) { return a.id < b.id; });
  return out;
}

}  // namespace jetcons
