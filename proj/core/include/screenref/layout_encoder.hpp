#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "screenref/screen_model.hpp"

namespace screenref {

/// Controls how a screen is flattened to text.
struct EncoderConfig {
  /// Same-line tolerance on box center-y. Unset means half the median
  /// object height of the screen being encoded.
  std::optional<double> margin;
  std::string same_line_separator = "\t";
  std::string line_separator = "\n";
  std::string marker_open = "{{";
  std::string marker_close = "}}";
  /// Off renders entities as their raw display text ("onscreen grab").
  bool inject_markers = true;

  /// Throws ValidationError.
  void validate() const;
};

struct MarkerSpan {
  std::size_t entity_index;  // 1-based
  std::size_t begin;         // byte offsets into OnscreenParse::text
  std::size_t end;

  friend bool operator==(const MarkerSpan&, const MarkerSpan&) = default;
};

/// Rendered screen. Marker spans are only recorded when markers are injected.
struct OnscreenParse {
  std::string text;
  std::vector<MarkerSpan> marker_spans;
};

/// One output line: objects whose center-y lies within margin of the anchor.
struct Level {
  double anchor_center_y = 0.0;
  std::vector<PlacedObject> members;
};

/// "{{i. text}}" with the configured brackets.
std::string marker_text(std::size_t index, std::string_view display_text, const EncoderConfig& config);

/// Union of screen and surrounding objects, deduplicated on (text, box), with
/// each entity present once as a marker (or raw text). Any plain object sharing
/// an entity's box is replaced by that entity. Throws PreconditionError if an
/// entity has no placement.
std::vector<PlacedObject> collect_objects(std::span<const ScreenObject> screen, std::span<const Entity> entities,
                                          const EncoderConfig& config);

/// Top-to-bottom by center-y; exact y ties broken left-to-right by center-x;
/// full ties keep input order.
std::vector<PlacedObject> sort_objects(std::vector<PlacedObject> objects);

/// Greedy anchor sweep over `sort_objects` output. Anchors do not chain: an
/// object joins the open level only if it is within margin of that level's
/// first object.
std::vector<Level> group_levels(std::span<const PlacedObject> sorted_objects, double margin);

OnscreenParse render_parse(std::span<const Level> levels, const EncoderConfig& config);

/// Half the median box height; 0 for an empty list.
double default_margin(std::span<const PlacedObject> objects);

/// collect_objects -> sort_objects -> group_levels -> render_parse.
OnscreenParse encode_screen(std::span<const ScreenObject> screen, std::span<const Entity> entities,
                            const EncoderConfig& config = {});

/// Convenience overload for an on-screen datapoint.
OnscreenParse encode_screen(const DataPoint& point, const EncoderConfig& config = {});

}  // namespace screenref
