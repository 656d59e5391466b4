#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "screenref/cluster_encoder.hpp"
#include "screenref/entity_textualizer.hpp"
#include "screenref/layout_encoder.hpp"
#include "screenref/screen_model.hpp"

namespace screenref {

inline constexpr std::string_view kInstruction =
    "Select which among the following entities, if any, are required to understand the user request below. "
    "Output 0 if none of the entities are relevant.";
inline constexpr std::string_view kTrailer = "Relevant entity:";

enum class PromptVariant { conversational, onscreen };

std::string_view to_string(PromptVariant variant) noexcept;

struct Prompt {
  std::string text;
  /// index_map[p - 1] is the original 1-based entity index shown at prompt
  /// position p. Always a permutation of 1..n.
  std::vector<std::size_t> index_map;
  PromptVariant variant = PromptVariant::conversational;
  /// Position of the source datapoint in its dataset. Set by the evaluation
  /// harness; never part of the prompt text.
  std::size_t source = 0;

  /// Prompt positions -> original indices. 0 ("none") maps to itself.
  /// Throws PreconditionError for positions outside 0..n.
  std::set<std::size_t> to_original(const std::set<std::size_t>& prompt_positions) const;
  /// Original indices -> prompt positions. 0 maps to itself.
  std::set<std::size_t> to_prompt(const std::set<std::size_t>& original_indices) const;
};

struct ShuffledEntities {
  std::vector<Entity> entities;
  std::vector<std::size_t> index_map;  // same convention as Prompt::index_map
};

/// Seeded permutation. Throws PreconditionError on an empty list.
ShuffledEntities shuffle_entities(std::span<const Entity> entities, std::uint64_t seed);

/// Multiple-choice prompt with a "0. None" option. With no seed the entities
/// keep their given order.
Prompt build_conversational_prompt(std::string_view request, std::span<const Entity> entities,
                                   std::optional<std::uint64_t> seed, const TextualizerRegistry& registry);

/// Screen prompt over an injected parse. Marker numbers are the entity
/// indices, so the index map is the identity. Throws PreconditionError when
/// the parse has no markers.
Prompt build_onscreen_prompt(std::string_view request, const OnscreenParse& parse);

/// Screen rendered without markers followed by the entity list.
Prompt build_grab_prompt(std::string_view request, const OnscreenParse& parse, std::span<const Entity> entities,
                         const TextualizerRegistry& registry);

/// Entity list where each entity carries its cluster context and position.
Prompt build_cluster_prompt(std::string_view request, std::span<const ClusterEncoding> encodings,
                            std::span<const Entity> entities, const TextualizerRegistry& registry);

}  // namespace screenref
