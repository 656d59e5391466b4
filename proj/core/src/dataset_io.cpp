#include "screenref/dataset_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "screenref/error.hpp"

namespace screenref {
namespace {

using nlohmann::json;

json box_to_json(const BBox& b) { return json::array({b.left(), b.top(), b.width(), b.height()}); }

json object_to_json(const ScreenObject& o) { return json{{"text", o.text()}, {"box", box_to_json(o.box())}}; }

json objects_to_json(const std::vector<ScreenObject>& objects) {
  json arr = json::array();
  for (const auto& o : objects) arr.push_back(object_to_json(o));
  return arr;
}

json entity_to_json(const Entity& e) {
  json props = json::array();
  for (const auto& p : e.properties()) props.push_back(json::array({p.key, p.value}));
  json j{{"type", e.type().name()}, {"properties", std::move(props)}};
  if (e.display_text()) j["display_text"] = *e.display_text();
  if (e.placement()) {
    j["box"] = box_to_json(e.placement()->box);
    j["surrounding"] = objects_to_json(e.placement()->surrounding);
  }
  return j;
}

// Structural problems surface as ParseError; invariant violations raised by
// the domain constructors stay ValidationError.
struct Reader {
  std::size_t line;

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(line, message); }

  const json& field(const json& obj, const char* name) const {
    auto it = obj.find(name);
    if (it == obj.end()) fail(std::string("missing field \"") + name + "\"");
    return *it;
  }

  std::string string_of(const json& j, const char* what) const {
    if (!j.is_string()) fail(std::string(what) + " must be a string");
    return j.get<std::string>();
  }

  BBox box(const json& j) const {
    if (!j.is_array() || j.size() != 4) fail("box must be an array [left, top, width, height]");
    double v[4];
    for (std::size_t i = 0; i < 4; ++i) {
      if (!j[i].is_number()) fail("box coordinates must be numbers");
      v[i] = j[i].get<double>();
    }
    return BBox(v[0], v[1], v[2], v[3]);
  }

  std::vector<ScreenObject> objects(const json& j) const {
    if (!j.is_array()) fail("screen object list must be an array");
    std::vector<ScreenObject> out;
    out.reserve(j.size());
    for (const auto& o : j) {
      if (!o.is_object()) fail("screen object must be an object");
      out.emplace_back(string_of(field(o, "text"), "text"), box(field(o, "box")));
    }
    return out;
  }

  Entity entity(const json& j) const {
    if (!j.is_object()) fail("entity must be an object");
    EntityType type(string_of(field(j, "type"), "type"));
    std::vector<Property> props;
    if (auto it = j.find("properties"); it != j.end()) {
      if (!it->is_array()) fail("properties must be an array of [key, value] pairs");
      for (const auto& p : *it) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string()) {
          fail("each property must be a [key, value] pair of strings");
        }
        props.push_back({p[0].get<std::string>(), p[1].get<std::string>()});
      }
    }
    std::optional<std::string> display;
    if (auto it = j.find("display_text"); it != j.end()) display = string_of(*it, "display_text");
    std::optional<Placement> placement;
    if (auto it = j.find("box"); it != j.end()) {
      Placement p{box(*it), {}};
      if (auto s = j.find("surrounding"); s != j.end()) p.surrounding = objects(*s);
      placement = std::move(p);
    } else if (j.contains("surrounding")) {
      fail("surrounding objects given without an entity box");
    }
    return Entity(std::move(type), std::move(props), std::move(display), std::move(placement));
  }

  DataPoint datapoint(const json& j) const {
    if (!j.is_object()) fail("record must be a JSON object");
    std::string request = string_of(field(j, "request"), "request");
    DataKind kind = parse_data_kind(string_of(field(j, "kind"), "kind"));
    const json& ents = field(j, "entities");
    if (!ents.is_array()) fail("entities must be an array");
    std::vector<Entity> entities;
    entities.reserve(ents.size());
    for (const auto& e : ents) entities.push_back(entity(e));
    const json& gt = field(j, "ground_truth");
    if (!gt.is_array()) fail("ground_truth must be an array");
    std::set<std::size_t> truth;
    for (const auto& g : gt) {
      if (!g.is_number_integer()) fail("ground_truth entries must be integers");
      auto v = g.get<long long>();
      if (v < 1) throw ValidationError("ground truth index " + std::to_string(v) + " must be >= 1");
      truth.insert(static_cast<std::size_t>(v));
    }
    std::optional<std::vector<ScreenObject>> screen;
    if (auto it = j.find("screen"); it != j.end()) screen = objects(*it);
    return DataPoint(std::move(request), std::move(entities), std::move(truth), kind, std::move(screen));
  }
};

}  // namespace

std::string to_json_line(const DataPoint& point) {
  json ents = json::array();
  for (const auto& e : point.entities()) ents.push_back(entity_to_json(e));
  json j{{"request", point.request()},
         {"kind", std::string(to_string(point.kind()))},
         {"entities", std::move(ents)},
         {"ground_truth", json(std::vector<std::size_t>(point.ground_truth().begin(), point.ground_truth().end()))}};
  if (point.screen()) j["screen"] = objects_to_json(*point.screen());
  return j.dump();
}

DataPoint parse_json_line(std::string_view text, std::size_t line) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(line, std::string("malformed JSON: ") + e.what());
  }
  Reader reader{line};
  try {
    return reader.datapoint(j);
  } catch (const ValidationError& e) {
    if (line == 0) throw;
    throw ValidationError("line " + std::to_string(line) + ": " + e.what());
  }
}

std::vector<DataPoint> load_dataset(std::istream& in) {
  std::vector<DataPoint> out;
  std::string buf;
  std::size_t line = 0;
  while (std::getline(in, buf)) {
    ++line;
    if (!buf.empty() && buf.back() == '\r') buf.pop_back();
    if (buf.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(parse_json_line(buf, line));
  }
  return out;
}

std::vector<DataPoint> load_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset file " + path);
  return load_dataset(in);
}

void save_dataset(std::ostream& out, std::span<const DataPoint> points) {
  for (const auto& p : points) out << to_json_line(p) << '\n';
}

}  // namespace screenref
