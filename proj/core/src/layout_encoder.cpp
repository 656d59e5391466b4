#include "screenref/layout_encoder.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "screenref/error.hpp"

namespace screenref {

void EncoderConfig::validate() const {
  if (margin && (!std::isfinite(*margin) || *margin < 0.0)) {
    throw ValidationError("margin must be a finite non-negative number");
  }
  if (same_line_separator.empty() || line_separator.empty()) {
    throw ValidationError("layout separators must be non-empty");
  }
  if (marker_open == marker_close) {
    throw ValidationError("marker_open and marker_close must differ");
  }
}

std::string marker_text(std::size_t index, std::string_view display_text, const EncoderConfig& config) {
  std::string out = config.marker_open;
  out += std::to_string(index);
  out += ". ";
  out += display_text;
  out += config.marker_close;
  return out;
}

std::vector<PlacedObject> collect_objects(std::span<const ScreenObject> screen, std::span<const Entity> entities,
                                          const EncoderConfig& config) {
  for (std::size_t i = 0; i < entities.size(); ++i) {
    if (!entities[i].placement()) {
      throw PreconditionError("entity " + std::to_string(i + 1) + " has no screen placement");
    }
  }

  using BoxKey = std::tuple<double, double, double, double>;
  auto key = [](const BBox& b) { return BoxKey{b.left(), b.top(), b.width(), b.height()}; };

  std::set<BoxKey> entity_boxes;
  for (const auto& e : entities) entity_boxes.insert(key(e.placement()->box));

  std::vector<PlacedObject> out;
  std::set<std::pair<std::string_view, BoxKey>> seen;
  auto add_plain = [&](const ScreenObject& o) {
    if (entity_boxes.count(key(o.box()))) return;
    // Views into the inputs stay valid for the whole call.
    if (seen.emplace(o.text(), key(o.box())).second) out.push_back({o.text(), o.box(), std::nullopt});
  };

  for (const auto& o : screen) add_plain(o);
  for (const auto& e : entities) {
    for (const auto& o : e.placement()->surrounding) add_plain(o);
  }
  for (std::size_t i = 0; i < entities.size(); ++i) {
    const auto& e = entities[i];
    std::string text = config.inject_markers ? marker_text(i + 1, *e.display_text(), config) : *e.display_text();
    out.push_back({std::move(text), e.placement()->box, i + 1});
  }
  return out;
}

std::vector<PlacedObject> sort_objects(std::vector<PlacedObject> objects) {
  std::stable_sort(objects.begin(), objects.end(), [](const PlacedObject& a, const PlacedObject& b) {
    return bbox_center(a.box).x < bbox_center(b.box).x;
  });
  std::stable_sort(objects.begin(), objects.end(), [](const PlacedObject& a, const PlacedObject& b) {
    return bbox_center(a.box).y < bbox_center(b.box).y;
  });
  return objects;
}

std::vector<Level> group_levels(std::span<const PlacedObject> sorted_objects, double margin) {
  std::vector<Level> levels;
  for (const auto& obj : sorted_objects) {
    double cy = bbox_center(obj.box).y;
    if (levels.empty() || std::abs(cy - levels.back().anchor_center_y) > margin) {
      levels.push_back({cy, {}});
    }
    levels.back().members.push_back(obj);
  }
  return levels;
}

OnscreenParse render_parse(std::span<const Level> levels, const EncoderConfig& config) {
  OnscreenParse parse;
  for (std::size_t li = 0; li < levels.size(); ++li) {
    if (li > 0) parse.text += config.line_separator;
    const auto& members = levels[li].members;
    for (std::size_t mi = 0; mi < members.size(); ++mi) {
      if (mi > 0) parse.text += config.same_line_separator;
      const auto& m = members[mi];
      std::size_t begin = parse.text.size();
      parse.text += m.text;
      if (config.inject_markers && m.entity_index) {
        parse.marker_spans.push_back({*m.entity_index, begin, parse.text.size()});
      }
    }
  }
  return parse;
}

double default_margin(std::span<const PlacedObject> objects) {
  if (objects.empty()) return 0.0;
  std::vector<double> heights;
  heights.reserve(objects.size());
  for (const auto& o : objects) heights.push_back(o.box.height());
  std::sort(heights.begin(), heights.end());
  std::size_t n = heights.size();
  double median = n % 2 == 1 ? heights[n / 2] : (heights[n / 2 - 1] + heights[n / 2]) / 2.0;
  return 0.5 * median;
}

OnscreenParse encode_screen(std::span<const ScreenObject> screen, std::span<const Entity> entities,
                            const EncoderConfig& config) {
  config.validate();
  auto sorted = sort_objects(collect_objects(screen, entities, config));
  double margin = config.margin.value_or(default_margin(sorted));
  auto levels = group_levels(sorted, margin);
  return render_parse(levels, config);
}

OnscreenParse encode_screen(const DataPoint& point, const EncoderConfig& config) {
  static const std::vector<ScreenObject> kNoScreen;
  const auto& screen = point.screen() ? *point.screen() : kNoScreen;
  return encode_screen(screen, point.entities(), config);
}

}  // namespace screenref
