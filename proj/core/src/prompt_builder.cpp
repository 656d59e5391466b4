#include "screenref/prompt_builder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "screenref/error.hpp"

namespace screenref {
namespace {

std::vector<std::size_t> identity_map(std::size_t n) {
  std::vector<std::size_t> m(n);
  std::iota(m.begin(), m.end(), std::size_t{1});
  return m;
}

std::string header(std::string_view request) {
  std::string out(kInstruction);
  out += "\n\nUser request: ";
  out += request;
  out += '\n';
  return out;
}

void append_entity_list(std::string& out, std::span<const Entity> entities, const TextualizerRegistry& registry,
                        const std::vector<std::string>& suffixes = {}) {
  out += "User Entities:\n0. None\n";
  for (std::size_t i = 0; i < entities.size(); ++i) {
    out += std::to_string(i + 1);
    out += ". ";
    out += registry.textualize(entities[i]);
    if (i < suffixes.size()) out += suffixes[i];
    out += '\n';
  }
}

std::string format_units(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) return std::to_string(static_cast<long long>(v));
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

}  // namespace

std::string_view to_string(PromptVariant variant) noexcept {
  return variant == PromptVariant::onscreen ? "onscreen" : "conversational";
}

std::set<std::size_t> Prompt::to_original(const std::set<std::size_t>& prompt_positions) const {
  std::set<std::size_t> out;
  for (std::size_t p : prompt_positions) {
    if (p == 0) {
      out.insert(0);
    } else if (p <= index_map.size()) {
      out.insert(index_map[p - 1]);
    } else {
      throw PreconditionError("prompt position " + std::to_string(p) + " out of range");
    }
  }
  return out;
}

std::set<std::size_t> Prompt::to_prompt(const std::set<std::size_t>& original_indices) const {
  std::set<std::size_t> out;
  for (std::size_t o : original_indices) {
    if (o == 0) {
      out.insert(0);
      continue;
    }
    auto it = std::find(index_map.begin(), index_map.end(), o);
    if (it == index_map.end()) throw PreconditionError("entity index " + std::to_string(o) + " out of range");
    out.insert(static_cast<std::size_t>(it - index_map.begin()) + 1);
  }
  return out;
}

ShuffledEntities shuffle_entities(std::span<const Entity> entities, std::uint64_t seed) {
  if (entities.empty()) throw PreconditionError("cannot shuffle an empty entity list");
  ShuffledEntities out;
  out.index_map = identity_map(entities.size());
  std::mt19937_64 rng(seed);
  std::shuffle(out.index_map.begin(), out.index_map.end(), rng);
  out.entities.reserve(entities.size());
  for (std::size_t orig : out.index_map) out.entities.push_back(entities[orig - 1]);
  return out;
}

Prompt build_conversational_prompt(std::string_view request, std::span<const Entity> entities,
                                   std::optional<std::uint64_t> seed, const TextualizerRegistry& registry) {
  if (entities.empty()) throw PreconditionError("a prompt needs at least one candidate entity");
  Prompt p;
  p.variant = PromptVariant::conversational;
  p.text = header(request);
  if (seed) {
    auto shuffled = shuffle_entities(entities, *seed);
    append_entity_list(p.text, shuffled.entities, registry);
    p.index_map = std::move(shuffled.index_map);
  } else {
    append_entity_list(p.text, entities, registry);
    p.index_map = identity_map(entities.size());
  }
  p.text += kTrailer;
  return p;
}

Prompt build_onscreen_prompt(std::string_view request, const OnscreenParse& parse) {
  if (parse.marker_spans.empty()) throw PreconditionError("onscreen parse has no entity markers");
  Prompt p;
  p.variant = PromptVariant::onscreen;
  p.text = header(request);
  p.text += "Screen:\n";
  p.text += parse.text;
  p.text += '\n';
  p.text += kTrailer;
  p.index_map = identity_map(parse.marker_spans.size());
  return p;
}

Prompt build_grab_prompt(std::string_view request, const OnscreenParse& parse, std::span<const Entity> entities,
                         const TextualizerRegistry& registry) {
  if (entities.empty()) throw PreconditionError("a prompt needs at least one candidate entity");
  Prompt p;
  p.variant = PromptVariant::onscreen;
  p.text = header(request);
  p.text += "Screen:\n";
  p.text += parse.text;
  p.text += '\n';
  append_entity_list(p.text, entities, registry);
  p.text += kTrailer;
  p.index_map = identity_map(entities.size());
  return p;
}

Prompt build_cluster_prompt(std::string_view request, std::span<const ClusterEncoding> encodings,
                            std::span<const Entity> entities, const TextualizerRegistry& registry) {
  if (entities.empty()) throw PreconditionError("a prompt needs at least one candidate entity");
  if (encodings.size() != entities.size()) {
    throw PreconditionError("cluster encodings and entities differ in length");
  }
  std::vector<std::string> suffixes;
  suffixes.reserve(encodings.size());
  for (const auto& enc : encodings) {
    std::string s;
    if (!enc.surrounding_prompt.empty()) {
      s += " | surr_objects: ";
      for (std::size_t i = 0; i < enc.surrounding_prompt.size(); ++i) {
        if (i > 0) s += ", ";
        s += enc.surrounding_prompt[i];
      }
    }
    s += " | distance_from_top: " + format_units(enc.distance_from_top);
    s += " | distance_from_left: " + format_units(enc.distance_from_left);
    suffixes.push_back(std::move(s));
  }
  Prompt p;
  p.variant = PromptVariant::onscreen;
  p.text = header(request);
  append_entity_list(p.text, entities, registry, suffixes);
  p.text += kTrailer;
  p.index_map = identity_map(entities.size());
  return p;
}

}  // namespace screenref
