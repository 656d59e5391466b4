#include "screenref/entity_textualizer.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "screenref/error.hpp"

namespace screenref {
namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string single_line(std::string_view s) {
  std::string out(s);
  std::replace_if(out.begin(), out.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
  return out;
}

FieldSpec bare(std::string key) { return {std::move(key), std::nullopt}; }
FieldSpec labelled(std::string key, std::string label) { return {std::move(key), std::move(label)}; }

TextualizationRule rule(std::string type, std::optional<std::string> tag,
                        std::vector<std::vector<FieldSpec>> groups) {
  TextualizationRule r;
  r.type_name = std::move(type);
  r.tag = std::move(tag);
  r.field_groups = std::move(groups);
  return r;
}

}  // namespace

std::string camel_case_type(std::string_view name) {
  std::string out;
  bool upper_next = true;
  for (char ch : name) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c) || ch == '_' || ch == '-') {
      upper_next = true;
      continue;
    }
    out.push_back(upper_next ? static_cast<char>(std::toupper(c)) : ch);
    upper_next = false;
  }
  return out;
}

TextualizerRegistry TextualizerRegistry::with_defaults() {
  TextualizerRegistry reg;
  const auto value = std::vector<std::vector<FieldSpec>>{{bare("value")}};
  const auto name = std::vector<std::vector<FieldSpec>>{{bare("name")}};

  reg.register_rule(rule("alarm", std::nullopt,
                         {{labelled("time", "time"), labelled("label", "label"), labelled("status", "status")}}));
  reg.register_rule(rule("app", std::nullopt, name));
  reg.register_rule(rule("book", std::nullopt, name));
  reg.register_rule(rule("date time", std::nullopt, {{bare("month")}, {bare("day")}, {bare("year")}}));
  reg.register_rule(rule("email address", std::nullopt, value));
  reg.register_rule(rule("flight number", std::nullopt, value));
  reg.register_rule(rule("general text", std::nullopt, value));
  reg.register_rule(rule("home device", "UserEntity", name));
  reg.register_rule(rule("home room", "UserEntity", name));
  reg.register_rule(rule("local business", std::nullopt,
                         {{labelled("address", "PostalAddress")}, {bare("name")},
                          {labelled("list_position", "list_position")}}));
  reg.register_rule(
      rule("media album", "MediaItem", {{labelled("media_item_type", "MediaItemType")}, {bare("name")}}));
  reg.register_rule(rule("package", std::nullopt, value));
  reg.register_rule(rule("painting", std::nullopt, name));
  reg.register_rule(rule("person", std::nullopt, name));
  reg.register_rule(rule("phone number", std::nullopt, value));
  reg.register_rule(rule("photo", std::nullopt, value));
  reg.register_rule(rule("physical address", "PostalAddress", {{labelled("address", "GeographicArea")}}));
  reg.register_rule(rule("plant animal", std::nullopt, name));
  reg.register_rule(rule("setting", std::nullopt, value));
  reg.register_rule(rule("tracking number", std::nullopt, value));
  reg.register_rule(rule("url", "Uri", value));
  return reg;
}

TextualizerRegistry TextualizerRegistry::from_json(std::string_view json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(0, std::string("malformed rule file: ") + e.what());
  }
  const json* rules = &doc;
  if (doc.is_object()) {
    auto it = doc.find("rules");
    if (it == doc.end()) throw ParseError(0, "rule file has no \"rules\" array");
    rules = &*it;
  }
  if (!rules->is_array()) throw ParseError(0, "\"rules\" must be an array");

  TextualizerRegistry reg;
  std::size_t idx = 0;
  for (const auto& r : *rules) {
    ++idx;
    auto fail = [&](const std::string& msg) -> void {
      throw ParseError(0, "rule " + std::to_string(idx) + ": " + msg);
    };
    if (!r.is_object() || !r.contains("type") || !r["type"].is_string()) fail("missing string \"type\"");
    TextualizationRule out;
    out.type_name = r["type"].get<std::string>();
    if (auto it = r.find("tag"); it != r.end()) {
      if (!it->is_string()) fail("\"tag\" must be a string");
      out.tag = it->get<std::string>();
    }
    if (auto it = r.find("field_separator"); it != r.end()) {
      if (!it->is_string()) fail("\"field_separator\" must be a string");
      out.field_separator = it->get<std::string>();
    }
    if (auto it = r.find("sub_separator"); it != r.end()) {
      if (!it->is_string()) fail("\"sub_separator\" must be a string");
      out.sub_separator = it->get<std::string>();
    }
    if (auto it = r.find("fields"); it != r.end()) {
      if (!it->is_array()) fail("\"fields\" must be an array of field groups");
      for (const auto& group : *it) {
        // A lone field is shorthand for a one-field group.
        const json arr = group.is_array() ? group : json::array({group});
        std::vector<FieldSpec> specs;
        for (const auto& f : arr) {
          if (f.is_string()) {
            specs.push_back(bare(f.get<std::string>()));
          } else if (f.is_object() && f.contains("key") && f["key"].is_string()) {
            FieldSpec spec{f["key"].get<std::string>(), std::nullopt};
            if (auto l = f.find("label"); l != f.end()) {
              if (!l->is_string()) fail("field label must be a string");
              spec.label = l->get<std::string>();
            }
            specs.push_back(std::move(spec));
          } else {
            fail("field must be a key string or {\"key\", \"label\"} object");
          }
        }
        out.field_groups.push_back(std::move(specs));
      }
    }
    try {
      reg.register_rule(std::move(out));
    } catch (const Error& e) {
      fail(e.what());
    }
  }
  return reg;
}

TextualizerRegistry TextualizerRegistry::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open rule file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

const TextualizationRule& TextualizerRegistry::register_rule(TextualizationRule rule, bool overwrite) {
  rule.type_name = lowercase(rule.type_name);
  if (rule.type_name.empty()) throw ValidationError("rule type name must be non-empty");
  auto it = rules_.find(rule.type_name);
  if (it != rules_.end()) {
    if (!overwrite) throw ConflictError("a rule for \"" + rule.type_name + "\" is already registered");
    it->second = std::move(rule);
    return it->second;
  }
  auto key = rule.type_name;
  return rules_.emplace(std::move(key), std::move(rule)).first->second;
}

void TextualizerRegistry::merge(const TextualizerRegistry& other) {
  for (const auto& [_, rule] : other.rules_) register_rule(rule, true);
}

const TextualizationRule* TextualizerRegistry::find(std::string_view type_name) const {
  auto it = rules_.find(lowercase(type_name));
  return it == rules_.end() ? nullptr : &it->second;
}

std::string TextualizerRegistry::textualize(const Entity& entity) const {
  const TextualizationRule* r = find(entity.type().name());
  std::string out = "Type: ";
  if (!r) {
    out += single_line(camel_case_type(entity.type().name()));
    for (const auto& p : entity.properties()) {
      out += " | ";
      out += single_line(p.value);
    }
    return out;
  }

  out += single_line(r->tag ? *r->tag : camel_case_type(r->type_name));
  for (const auto& group : r->field_groups) {
    std::string rendered;
    bool any = false;
    for (const auto& f : group) {
      const std::string* v = entity.property(f.key);
      if (!v) continue;
      if (any) rendered += r->sub_separator;
      if (f.label) {
        rendered += *f.label;
        rendered += ": ";
      }
      rendered += *v;
      any = true;
    }
    if (!any) continue;
    out += r->field_separator;
    out += rendered;
  }
  return single_line(out);
}

}  // namespace screenref
