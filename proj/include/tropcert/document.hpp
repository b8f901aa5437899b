#pragma once

#include "tropcert/certifier.hpp"

#include <json.hpp>

#include <map>
#include <stdexcept>
#include <string>

namespace tropcert {

/// Failure to read a document. `path` names the offending field, e.g.
/// "cycles.L.cells[0].weight"; line and column are set for syntax errors.
class DocumentError : public std::runtime_error {
public:
  enum class Kind { Syntax, Schema, Reference, Invariant };
  DocumentError(Kind kind, std::string path, const std::string &message, size_t line = 0, size_t column = 0);

  Kind kind() const { return kind_; }
  const std::string &path() const { return path_; }
  size_t line() const { return line_; }
  size_t column() const { return column_; }

private:
  Kind kind_;
  std::string path_;
  size_t line_, column_;
};

using Parameters = std::map<std::string, Rational>;

/// A validated interchange document held in canonical form: sorted keys,
/// rationals as reduced strings, linear expressions in parameters
/// normalized. Tables: lattices, complexes, cycles, functions, regions,
/// maps, forms, charts; plus version, parameters and metadata.
class Document {
public:
  static constexpr const char *version = "1";

  const nlohmann::json &tree() const { return tree_; }
  /// Default parameter values.
  Parameters parameters() const;
  bool operator==(const Document &) const = default;

  /// Names in a table, sorted.
  std::vector<std::string> names(const std::string &table) const;
  /// Which table holds `name`, or "" when none does.
  std::string kind_of(const std::string &name) const;

  /// Builders; `params` overrides the defaults. Throw DocumentError.
  TropicalCycle cycle(const std::string &name, const Parameters &params = {}) const;
  PLFunction function(const std::string &name, const Parameters &params = {}) const;
  OpenRegion region(const std::string &name, const Parameters &params = {}) const;
  AffineMap map(const std::string &name, const Parameters &params = {}) const;
  SuperformPoint form(const std::string &name, const Parameters &params = {}) const;
  TropicalChart chart(const std::string &name, const Parameters &params = {}) const;
  PolyComplex complex(const std::string &name, const Parameters &params = {}) const;
  Sublattice lattice(const std::string &name) const;

private:
  friend Document parse_document(const std::string &text);
  nlohmann::json tree_;
};

/// Parses, canonicalizes and validates every object under the default
/// parameters. Throws DocumentError.
Document parse_document(const std::string &text);
/// Canonical text: two-space indented JSON with sorted keys and a final
/// newline.
std::string serialize_document(const Document &doc);

/// Canonical text of a linear expression "c0 + Σ c_i name_i"; throws
/// std::invalid_argument on a malformed expression or zero denominator.
std::string canonical_expression(const std::string &text);
Rational evaluate_expression(const std::string &text, const Parameters &params);

} // namespace tropcert
