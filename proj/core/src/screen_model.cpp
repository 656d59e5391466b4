#include "screenref/screen_model.hpp"

#include <cmath>
#include <unordered_set>

#include "screenref/error.hpp"

namespace screenref {

BBox::BBox(double left, double top, double width, double height)
    : left_(left), top_(top), width_(width), height_(height) {
  if (!std::isfinite(left) || !std::isfinite(top) || !std::isfinite(width) || !std::isfinite(height)) {
    throw ValidationError("bounding box coordinates must be finite");
  }
  if (width < 0.0 || height < 0.0) {
    throw ValidationError("bounding box width and height must be non-negative");
  }
}

Point bbox_center(const BBox& box) noexcept {
  return {box.left() + box.width() / 2.0, box.top() + box.height() / 2.0};
}

ScreenObject::ScreenObject(std::string text, BBox box) : text_(std::move(text)), box_(box) {
  if (text_.empty()) {
    throw ValidationError("screen object text must be non-empty");
  }
  if (text_.find_first_of("\t\n\r") != std::string::npos) {
    throw ValidationError("screen object text must not contain tab or newline: \"" + text_ + "\"");
  }
}

EntityType::EntityType(std::string name) : name_(std::move(name)) {
  if (name_.empty()) {
    throw ValidationError("entity type name must be non-empty");
  }
}

Entity::Entity(EntityType type, std::vector<Property> properties, std::optional<std::string> display_text,
               std::optional<Placement> placement)
    : type_(std::move(type)),
      properties_(std::move(properties)),
      display_text_(std::move(display_text)),
      placement_(std::move(placement)) {
  std::unordered_set<std::string_view> keys;
  for (const auto& p : properties_) {
    if (!keys.insert(p.key).second) {
      throw ValidationError("duplicate property key \"" + p.key + "\" on " + type_.name() + " entity");
    }
  }
  if (placement_ && !display_text_) {
    throw ValidationError("on-screen entity of type " + type_.name() + " has no display text");
  }
  if (display_text_ && display_text_->find_first_of("\t\n\r") != std::string::npos) {
    throw ValidationError("entity display text must not contain tab or newline");
  }
}

const std::string* Entity::property(std::string_view key) const noexcept {
  for (const auto& p : properties_) {
    if (p.key == key) return &p.value;
  }
  return nullptr;
}

std::string_view to_string(DataKind kind) noexcept {
  switch (kind) {
    case DataKind::conversational:
      return "conversational";
    case DataKind::synthetic:
      return "synthetic";
    case DataKind::onscreen:
      return "onscreen";
  }
  return "unknown";
}

DataKind parse_data_kind(std::string_view name) {
  if (name == "conversational") return DataKind::conversational;
  if (name == "synthetic") return DataKind::synthetic;
  if (name == "onscreen") return DataKind::onscreen;
  throw ValidationError("unknown datapoint kind \"" + std::string(name) + "\"");
}

DataPoint::DataPoint(std::string request, std::vector<Entity> entities, std::set<std::size_t> ground_truth,
                     DataKind kind, std::optional<std::vector<ScreenObject>> screen)
    : request_(std::move(request)),
      entities_(std::move(entities)),
      ground_truth_(std::move(ground_truth)),
      kind_(kind),
      screen_(std::move(screen)) {
  for (std::size_t idx : ground_truth_) {
    if (idx < 1 || idx > entities_.size()) {
      throw ValidationError("ground truth index " + std::to_string(idx) + " outside [1, " +
                            std::to_string(entities_.size()) + "]");
    }
  }
  if (kind_ == DataKind::onscreen) {
    for (std::size_t i = 0; i < entities_.size(); ++i) {
      if (!entities_[i].placement()) {
        throw ValidationError("onscreen datapoint entity " + std::to_string(i + 1) + " has no placement");
      }
    }
  }
}

}  // namespace screenref
