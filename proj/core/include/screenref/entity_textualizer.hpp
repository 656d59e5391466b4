#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "screenref/screen_model.hpp"

namespace screenref {

/// One emitted property. Labelled fields render as "label: value", bare
/// fields as the value alone.
struct FieldSpec {
  std::string key;
  std::optional<std::string> label;
};

/// How one entity type is rendered:
///   "Type: <tag>" SEP group1 SEP group2 ...
/// where SEP is `field_separator` and the fields inside a group are joined
/// with `sub_separator`. Fields whose property is missing are skipped, as are
/// groups left empty.
struct TextualizationRule {
  std::string type_name;           // registry key, stored lowercase
  std::optional<std::string> tag;  // emitted type tag; unset: CamelCase of type_name
  std::vector<std::vector<FieldSpec>> field_groups;
  std::string field_separator = " | ";
  std::string sub_separator = "; ";
};

/// "email address" -> "EmailAddress".
std::string camel_case_type(std::string_view name);

class TextualizerRegistry {
 public:
  TextualizerRegistry() = default;

  /// Rules for the built-in entity domains (alarm, phone number, ...).
  static TextualizerRegistry with_defaults();

  /// JSON rule list, see data/rules/default_rules.json for the format.
  /// Throws ParseError.
  static TextualizerRegistry from_json(std::string_view json_text);
  static TextualizerRegistry from_file(const std::string& path);

  /// Throws ConflictError if the type is already registered and `overwrite`
  /// is false.
  const TextualizationRule& register_rule(TextualizationRule rule, bool overwrite = false);

  /// Registers every rule of `other`, replacing rules for the same type.
  void merge(const TextualizerRegistry& other);

  const TextualizationRule* find(std::string_view type_name) const;
  std::size_t size() const noexcept { return rules_.size(); }

  /// Single-line rendering. Types without a rule emit every property as a
  /// bare field in stored order. Tabs and newlines in values become spaces.
  std::string textualize(const Entity& entity) const;

 private:
  std::map<std::string, TextualizationRule, std::less<>> rules_;
};

}  // namespace screenref
