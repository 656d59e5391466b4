#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "screenref/screen_model.hpp"

namespace screenref {

/// Query patterns with "[slot]" placeholders.
struct LanguageTemplate {
  std::string id;
  std::vector<std::string> variations;
};

/// Values for each placeholder, plus the entity types the mentions resolve to.
struct SlotList {
  std::map<std::string, std::vector<std::string>> values;
  std::vector<std::string> ground_truth_types;
};

struct TemplateSpec {
  LanguageTemplate language;
  SlotList slots;
};

/// Distinct placeholder names of a variation, in first-appearance order.
std::vector<std::string> placeholders(std::string_view variation);

/// Number of queries expand_template would return.
std::size_t expansion_count(const LanguageTemplate& language, const SlotList& slots);

/// Full Cartesian product of slot values for every variation. A placeholder
/// used twice in one variation takes the same value in both places. Throws
/// ValidationError when a placeholder has no values.
std::vector<std::string> expand_template(const LanguageTemplate& language, const SlotList& slots);

/// Example entities per type, used for synthetic positives and negatives.
class ValueBank {
 public:
  ValueBank() = default;

  /// A small bundled bank covering the common assistant domains.
  static ValueBank builtin();

  void add(std::string type, std::vector<Property> properties);

  /// Random example of `type`; types without examples get a placeholder
  /// entity with a single "name" property.
  Entity sample(const std::string& type, std::mt19937_64& rng) const;

  /// Every banked example whose type is not in `excluded_types`.
  std::vector<Entity> pool_excluding(std::span<const std::string> excluded_types) const;

  std::vector<std::string> types() const;

 private:
  std::map<std::string, std::vector<std::vector<Property>>> examples_;
};

struct GenerateOptions {
  std::size_t per_query_negatives = 3;
  std::uint64_t seed = 0;
  /// Uniform seeded subsample of the expanded queries, order preserved.
  std::optional<std::size_t> max_samples;
};

/// One synthetic datapoint per expanded query: one positive per ground-truth
/// type, `per_query_negatives` entities drawn without replacement from
/// `negative_pool`, all in seeded random order. Throws PreconditionError if
/// the pool is too small or contains a ground-truth type.
std::vector<DataPoint> generate_datapoints(const LanguageTemplate& language, const SlotList& slots,
                                           std::span<const Entity> negative_pool, const GenerateOptions& options,
                                           const ValueBank& bank = ValueBank::builtin());

/// Parses the template file format:
///
///   # comment
///   template: share_address
///   variations:
///     share [mention] with [name]
///   slots:
///     mention: this address | that address
///     name: Mom
///   ground_truth_types:
///     email address
///     physical address
///
/// Several `template:` blocks may follow each other. Throws ParseError with
/// the offending line.
std::vector<TemplateSpec> parse_templates(std::istream& in);
std::vector<TemplateSpec> parse_template_file(const std::string& path);

}  // namespace screenref
