#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "jetcons/conservation.hpp"
#include "jetcons/dsl.hpp"
#include "jetcons/symmetry.hpp"
#include "jetcons/variational.hpp"

namespace jetcons {

/// One bracketed block of a model file: `[kind name]` followed by either raw
/// lines (frame, equations, solve) or `key [arg] = value` entries.
struct Section {
  struct Entry {
    std::string key;
    std::string arg;
    std::string value;
    int line = 0;
  };
  std::string kind;
  std::string name;
  int line = 0;
  std::vector<std::string> lines;
  std::vector<Entry> entries;

  [[nodiscard]] std::optional<std::string> get(const std::string& key) const;
  [[nodiscard]] std::vector<const Entry*> all(const std::string& key) const;
};

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<Section> parse_sections(const std::string& text);

struct Fixture {
  std::string kind;
  std::string name;
  std::string locus;
  bool expect_pass = true;
  std::string flagged;  // non-empty: kept verbatim for reconciliation
  Section section;
};

struct ModelFixture {
  std::string id;
  std::string locus;
  FramePtr frame;
  Macros macros;
  std::vector<DerivRelation> relations;
  PDESystem system;
  std::vector<Coord> leading;  // solved coordinate of each equation
  std::map<std::string, VectorField> fields;
  std::map<std::string, std::map<std::string, Expr>> field_unknown_components;
  std::map<std::string, std::vector<std::string>> algebras;
  std::vector<Fixture> fixtures;

  [[nodiscard]] Expr parse(const std::string& text) const;
  /// Base equations minus `rhs` (one per equation), solved form shifted to match.
  [[nodiscard]] PDESystem closed(const std::vector<Expr>& rhs) const;
  [[nodiscard]] const Fixture& fixture(const std::string& name) const;
  [[nodiscard]] std::vector<VectorField> generators(const std::string& algebra) const;
};

/// Parses a model file; throws ModelError or ParseError.
ModelFixture load_model_text(const std::string& text);
/// Loads one of the built-in models; throws ModelError for an unknown id.
ModelFixture load_model(const std::string& id);
std::vector<std::string> model_ids();

struct ManifestEntry {
  std::string id;
  std::string locus;
  std::vector<std::pair<std::string, std::string>> fixtures;  // (kind, name)
  std::vector<std::string> loci;
};
std::vector<ManifestEntry> list_fixtures();

struct FixtureResult {
  std::string id;  // model:name
  std::string kind;
  std::string locus;
  std::string flagged;
  bool expected_pass = true;
  bool observed_pass = false;
  std::string error;
  double seconds = 0.0;
  nlohmann::json report;

  [[nodiscard]] bool ok() const { return error.empty() && expected_pass == observed_pass; }
  [[nodiscard]] nlohmann::json to_json() const;
};

FixtureResult verify_fixture(const ModelFixture& model, const Fixture& fx, const ZeroOptions& opt = ZeroOptions());

/// Verifies every fixture of the given models, `jobs` at a time. Results are
/// sorted by id whatever the scheduling.
std::vector<FixtureResult> verify_catalog(const std::vector<std::string>& ids, int jobs = 1,
                                          const ZeroOptions& opt = ZeroOptions());

}  // namespace jetcons
