#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bforge/expansion.hpp"

namespace bforge {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "bialgebra-forge/1";

/// Command-line overrides of the document settings.
struct SettingsOverride {
  std::optional<int> order;
  std::optional<int> cap;
  std::optional<int> slack;
};

struct Composition {
  std::string name;
  bool is_cobracket = false;
  BracketTensor bracket;
  CobracketTensor cobracket;
};

/// Parsed input document.
struct Document {
  std::string name;
  std::vector<std::string> notes;
  ParamSpace params;
  Basis basis;
  Truncation tr;
  std::vector<Composition> compositions;
  std::optional<HopfPresentation> presentation;

  const Composition& composition(const std::string& name) const;
  const Composition* find(const std::string& name) const;
};

/// Text of "@name" (embedded dataset) or of a file.
std::string read_source(const std::string& ref);
std::vector<std::string> embedded_datasets();

Json load_json(const std::string& text);
Truncation resolve_settings(const Json& doc, const SettingsOverride& o);
/// Structural checks (identifiers, duplicates) run before any expression is parsed.
Document parse_document(const Json& doc, const SettingsOverride& o = {});
Document load_document(const std::string& ref, const SettingsOverride& o = {});

Json emit_document(const Document& d);
Json emit_composition(const Composition& c, const Basis& basis, const ParamSpace& params);
std::string dump(const Json& j);

/// A relation right-hand side or coproduct printed in re-parsable form.
std::string expr_text(const NCPoly& p, const Basis& basis, const ParamSpace& params);
std::string expr_text(const Tensor2& p, const Basis& basis, const ParamSpace& params);

/// Expected tangent-field entries plus the field they refer to.
struct ExpectationFile {
  std::string name;
  std::string direction;
  std::vector<std::string> at;
  CompareMode mode = CompareMode::Leading;
  FieldExpectation expectation;
};

ExpectationFile parse_expectation(const Json& j, const Basis& basis);

// ------------------------------------------------------------------ reports

struct Section {
  std::string title;
  std::vector<std::string> lines;
};

struct Report {
  std::string command;                 // echo, e.g. "hopf @paper-corrected"
  std::optional<Truncation> settings;
  std::vector<std::string> notes;
  std::vector<Section> sections;
  std::vector<DefectReport> checks;
  bool passed() const;
};

std::string render_text(const Report& r);
Json render_json(const Report& r);

/// Algebra-core defect tensors as located defect reports.
DefectReport antisymmetry_report(const std::string& check, const SparseTensor<3>& d, bool cobracket,
                                 const Basis& basis, const ParamSpace& params);
DefectReport jacobi_report(const std::string& check, const SparseTensor<4>& d, const Basis& basis,
                           const ParamSpace& params);
DefectReport cojacobi_report(const std::string& check, const SparseTensor<4>& d, const Basis& basis,
                             const ParamSpace& params);
DefectReport cocycle_report(const std::string& check, const SparseTensor<4>& d, const Basis& basis,
                            const ParamSpace& params);

}  // namespace bforge
