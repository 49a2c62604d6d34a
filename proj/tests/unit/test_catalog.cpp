#include <gtest/gtest.h>

#include <algorithm>

#include "jetcons/catalog.hpp"

using namespace jetcons;

namespace {

bool has(const std::vector<std::string>& v, const std::string& s) { return std::find(v.begin(), v.end(), s) != v.end(); }

}  // namespace

TEST(Catalog, ManifestListsEveryModel) {
  auto ids = model_ids();
  for (const char* id : {"sw_free", "sw_dissipative_class", "sw_table1_row1", "sw_table1_row2", "sw_table1_row3",
                         "sw_table1_row4", "sw_table1_row5", "sw_cons_emm", "sw_cons_dissipation", "pkdv_free",
                         "pkdv_closed"})
    EXPECT_TRUE(has(ids, id)) << id;
  auto manifest = list_fixtures();
  ASSERT_EQ(manifest.size(), ids.size());
  for (const auto& e : manifest) {
    EXPECT_FALSE(e.locus.empty());
    for (const auto& l : e.loci) EXPECT_FALSE(l.empty()) << e.id;
  }
  EXPECT_THROW(load_model("no_such_model"), ModelError);
}

TEST(Catalog, LoadedModelsCarryTheirContent) {
  auto sw = load_model("sw_free");
  EXPECT_EQ(sw.system.equations.size(), 2u);
  int cls = 0;
  for (const auto& f : sw.fixtures) cls += f.kind == "cl";
  EXPECT_EQ(cls, 5);
  EXPECT_EQ(sw.generators("g").size(), 7u);

  auto kdv = load_model("pkdv_free");
  int rows = 0;
  for (const auto& f : kdv.fixtures) rows += f.kind == "cl" && f.flagged.empty();
  EXPECT_EQ(rows, 4);

  auto r5 = load_model("sw_table1_row5");
  const Fixture& e = r5.fixture("energy");
  EXPECT_EQ(r5.parse(*e.section.get("rho")), r5.parse("h*u^2/2 + h^2/2 - t"));
  int r5cls = 0;
  for (const auto& f : r5.fixtures) r5cls += f.kind == "cl";
  EXPECT_EQ(r5cls, 4);
}

TEST(Catalog, CompletenessOfNamedObjects) {
  auto dis = load_model("sw_cons_dissipation");
  for (const char* n : {"I1", "I2", "I3", "I4", "I5"}) EXPECT_EQ(dis.fixture(n).kind, "invariant");
  EXPECT_EQ(dis.generators("g1").size(), 4u);
  auto emm = load_model("sw_cons_emm");
  EXPECT_EQ(emm.generators("kernel").size(), 3u);
  EXPECT_EQ(emm.fixture("bessel_closure").kind, "closure");
  EXPECT_EQ(emm.fixture("ln_closure").kind, "closure");
  auto cls = load_model("sw_dissipative_class");
  EXPECT_EQ(cls.generators("equivalence").size(), 5u);
  EXPECT_EQ(cls.field_unknown_components.at("e_space_scaling").size(), 1u);
}

TEST(Catalog, ParserRejectsMalformedFiles) {
  const std::string base = "[model]\nid = m\nlocus = l\n[frame]\nindep t x\ndep u\n[equations]\nu_t - u_xx\n";
  EXPECT_NO_THROW(load_model_text(base));
  EXPECT_THROW(load_model_text("id = m\n"), ModelError);
  EXPECT_THROW(load_model_text(base + "[cl a]\nlambda = 1\n"), ModelError);  // no locus
  EXPECT_THROW(load_model_text(base + "[bogus a]\nlocus = x\n"), ModelError);
  EXPECT_THROW(load_model_text(base + "[cl a]\nlocus = x\nwhat = 1\n"), ModelError);
  EXPECT_THROW(load_model_text(base + "[cl a]\nlocus = x\nlambda = u +\n"), ParseError);
  EXPECT_THROW(load_model_text(base + "[cl a]\nlocus = x\n[cl a]\nlocus = y\n"), ModelError);
  auto m = load_model_text(base + "[cl heat]\nlocus = heat\nlambda = 1\nrho = u\n  # comment\nflux = -u_x\n");
  auto r = verify_fixture(m, m.fixture("heat"));
  EXPECT_TRUE(r.ok()) << r.to_json().dump();
  // continuation lines extend the previous value
  auto c = load_model_text(base + "[cl heat]\nlocus = heat\nlambda = 1\nrho = u\nflux = -u_x\n   + 0\n");
  EXPECT_EQ(*c.fixture("heat").section.get("flux"), "-u_x + 0");
}

TEST(Catalog, FullCatalogVerifiesAndIsDeterministic) {
  auto serial = verify_catalog(model_ids(), 1);
  EXPECT_GE(serial.size(), 40u);
  for (const auto& r : serial) EXPECT_TRUE(r.ok()) << r.to_json().dump(2);
  EXPECT_TRUE(std::is_sorted(serial.begin(), serial.end(),
                             [](const FixtureResult& a, const FixtureResult& b) { return a.id < b.id; }));
  auto parallel = verify_catalog(model_ids(), 4);
  ASSERT_EQ(parallel.size(), serial.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(parallel[i].id, serial[i].id);
    auto a = serial[i].to_json();
    auto b = parallel[i].to_json();
    a.erase("seconds");
    b.erase("seconds");
    EXPECT_EQ(a, b) << serial[i].id;
  }
}

TEST(Catalog, ExpectedFailuresCarryWitnesses) {
  auto m = load_model("sw_table1_row1");
  auto r = verify_fixture(m, m.fixture("energy_generic"));
  EXPECT_TRUE(r.ok());
  EXPECT_FALSE(r.observed_pass);
  bool witness = false;
  for (const auto& c : r.report["checks"]) witness = witness || c.contains("witness");
  EXPECT_TRUE(witness);
}
