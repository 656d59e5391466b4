#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace screenref {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Axis-aligned box in screen units. Origin is the top-left corner of the
/// screen; y grows downward.
class BBox {
 public:
  BBox() = default;
  /// Throws ValidationError on negative extent or non-finite coordinates.
  BBox(double left, double top, double width, double height);

  double left() const noexcept { return left_; }
  double top() const noexcept { return top_; }
  double width() const noexcept { return width_; }
  double height() const noexcept { return height_; }
  double right() const noexcept { return left_ + width_; }
  double bottom() const noexcept { return top_ + height_; }

  BBox translated(double dx, double dy) const { return BBox(left_ + dx, top_ + dy, width_, height_); }

  friend bool operator==(const BBox&, const BBox&) = default;

 private:
  double left_ = 0.0;
  double top_ = 0.0;
  double width_ = 0.0;
  double height_ = 0.0;
};

Point bbox_center(const BBox& box) noexcept;

/// A text element on screen. Tabs and newlines are rejected since the
/// rendered parse uses them as layout separators.
class ScreenObject {
 public:
  ScreenObject(std::string text, BBox box);

  const std::string& text() const noexcept { return text_; }
  const BBox& box() const noexcept { return box_; }

  friend bool operator==(const ScreenObject&, const ScreenObject&) = default;

 private:
  std::string text_;
  BBox box_;
};

/// Entity type name. Unknown names are allowed.
class EntityType {
 public:
  explicit EntityType(std::string name);

  const std::string& name() const noexcept { return name_; }

  friend bool operator==(const EntityType&, const EntityType&) = default;

 private:
  std::string name_;
};

struct Property {
  std::string key;
  std::string value;

  friend bool operator==(const Property&, const Property&) = default;
};

struct Placement {
  BBox box;
  std::vector<ScreenObject> surrounding;

  friend bool operator==(const Placement&, const Placement&) = default;
};

class Entity {
 public:
  /// Throws ValidationError if property keys repeat, or if a placement is
  /// given without display text.
  Entity(EntityType type, std::vector<Property> properties,
         std::optional<std::string> display_text = std::nullopt,
         std::optional<Placement> placement = std::nullopt);

  const EntityType& type() const noexcept { return type_; }
  const std::vector<Property>& properties() const noexcept { return properties_; }
  const std::optional<std::string>& display_text() const noexcept { return display_text_; }
  const std::optional<Placement>& placement() const noexcept { return placement_; }

  /// nullptr when the key is absent.
  const std::string* property(std::string_view key) const noexcept;

  friend bool operator==(const Entity&, const Entity&) = default;

 private:
  EntityType type_;
  std::vector<Property> properties_;
  std::optional<std::string> display_text_;
  std::optional<Placement> placement_;
};

enum class DataKind { conversational, synthetic, onscreen };

std::string_view to_string(DataKind kind) noexcept;
/// Throws ValidationError on an unknown name.
DataKind parse_data_kind(std::string_view name);

/// One labelled example. Ground-truth indices are 1-based positions into
/// `entities()`; an empty set means "none of these".
class DataPoint {
 public:
  DataPoint(std::string request, std::vector<Entity> entities, std::set<std::size_t> ground_truth,
            DataKind kind, std::optional<std::vector<ScreenObject>> screen = std::nullopt);

  const std::string& request() const noexcept { return request_; }
  const std::vector<Entity>& entities() const noexcept { return entities_; }
  const std::set<std::size_t>& ground_truth() const noexcept { return ground_truth_; }
  DataKind kind() const noexcept { return kind_; }
  const std::optional<std::vector<ScreenObject>>& screen() const noexcept { return screen_; }

  friend bool operator==(const DataPoint&, const DataPoint&) = default;

 private:
  std::string request_;
  std::vector<Entity> entities_;
  std::set<std::size_t> ground_truth_;
  DataKind kind_;
  std::optional<std::vector<ScreenObject>> screen_;
};

/// An object positioned for layout: either plain screen text or an entity.
struct PlacedObject {
  std::string text;
  BBox box;
  std::optional<std::size_t> entity_index;  // 1-based when set

  friend bool operator==(const PlacedObject&, const PlacedObject&) = default;
};

}  // namespace screenref
