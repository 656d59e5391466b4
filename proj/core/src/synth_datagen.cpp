#include "screenref/synth_datagen.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <numeric>
#include <set>

#include "screenref/error.hpp"

namespace screenref {
namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

const std::vector<std::string>& slot_values(const SlotList& slots, const std::string& name) {
  auto it = slots.values.find(name);
  if (it == slots.values.end() || it->second.empty()) {
    throw ValidationError("placeholder [" + name + "] has no slot values");
  }
  return it->second;
}

std::string substitute(std::string_view variation, const std::map<std::string, std::string>& bound) {
  std::string out;
  std::size_t i = 0;
  while (i < variation.size()) {
    if (variation[i] == '[') {
      auto close = variation.find(']', i + 1);
      if (close != std::string_view::npos) {
        auto it = bound.find(std::string(variation.substr(i + 1, close - i - 1)));
        if (it != bound.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(variation[i++]);
  }
  return out;
}

bool is_slot_name(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

}  // namespace

std::vector<std::string> placeholders(std::string_view variation) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while ((pos = variation.find('[', pos)) != std::string_view::npos) {
    auto close = variation.find(']', pos + 1);
    if (close == std::string_view::npos) break;
    auto name = variation.substr(pos + 1, close - pos - 1);
    if (is_slot_name(name) && std::find(out.begin(), out.end(), name) == out.end()) {
      out.emplace_back(name);
    }
    pos = close + 1;
  }
  return out;
}

std::size_t expansion_count(const LanguageTemplate& language, const SlotList& slots) {
  std::size_t total = 0;
  for (const auto& v : language.variations) {
    std::size_t product = 1;
    for (const auto& name : placeholders(v)) product *= slot_values(slots, name).size();
    total += product;
  }
  return total;
}

std::vector<std::string> expand_template(const LanguageTemplate& language, const SlotList& slots) {
  std::vector<std::string> out;
  for (const auto& variation : language.variations) {
    auto names = placeholders(variation);
    std::vector<const std::vector<std::string>*> domains;
    for (const auto& n : names) domains.push_back(&slot_values(slots, n));

    // Odometer over the slot domains, last placeholder fastest.
    std::vector<std::size_t> digit(names.size(), 0);
    while (true) {
      std::map<std::string, std::string> bound;
      for (std::size_t k = 0; k < names.size(); ++k) bound[names[k]] = (*domains[k])[digit[k]];
      out.push_back(substitute(variation, bound));

      std::size_t k = names.size();
      while (k > 0 && ++digit[k - 1] == domains[k - 1]->size()) {
        digit[k - 1] = 0;
        --k;
      }
      if (k == 0) break;
    }
  }
  return out;
}

ValueBank ValueBank::builtin() {
  ValueBank b;
  b.add("alarm", {{"time", "07:30 AM"}, {"label", "wake up"}, {"status", "On"}});
  b.add("alarm", {{"time", "08:06 PM"}, {"label", "brush hair"}, {"status", "Off"}});
  b.add("app", {{"name", "clock"}});
  b.add("app", {{"name", "maps"}});
  b.add("book", {{"name", "The Left Hand of Darkness"}});
  b.add("date time", {{"month", "1"}, {"day", "1"}, {"year", "2021"}});
  b.add("email address", {{"value", "membership@ipsa.org"}});
  b.add("email address", {{"value", "contactus@cvs.com"}});
  b.add("flight number", {{"value", "UA 1549"}});
  b.add("home device", {{"name", "heater"}});
  b.add("home device", {{"name", "living room lamp"}});
  b.add("local business", {{"address", "15 Broad St, Albany 31701"}, {"name", "Ameris Bank"}});
  b.add("local business", {{"address", "225 Rainbow St, San Jose CA 94088"}, {"name", "Walgreens"}});
  b.add("media album", {{"media_item_type", "MediaItemType_Album"}, {"name", "Mellon Collie"}});
  b.add("music", {{"name", "Here Comes the Sun"}});
  b.add("music", {{"name", "Clair de Lune"}});
  b.add("person", {{"name", "Sebastian"}});
  b.add("person", {{"name", "Priya"}});
  b.add("phone number", {{"value", "955 545 060"}});
  b.add("phone number", {{"value", "(206) 198 1999"}});
  b.add("package", {{"value", "Order #114-2209"}});
  b.add("photo", {{"value", "IMG_2041"}});
  b.add("physical address", {{"address", "814 Elmwood Ave, NY, 14222"}});
  b.add("physical address", {{"address", "5520 Roy St, Seattle 98109"}});
  b.add("setting", {{"value", "dark mode"}});
  b.add("setting", {{"value", "brightness"}});
  b.add("tracking number", {{"value", "1Z999AA10123456784"}});
  b.add("url", {{"value", "NY.gov"}});
  b.add("video", {{"name", "Cooking pasta at home"}});
  b.add("video", {{"name", "Lecture 4: Graphs"}});
  return b;
}

void ValueBank::add(std::string type, std::vector<Property> properties) {
  examples_[std::move(type)].push_back(std::move(properties));
}

Entity ValueBank::sample(const std::string& type, std::mt19937_64& rng) const {
  auto it = examples_.find(type);
  if (it == examples_.end() || it->second.empty()) {
    return Entity(EntityType(type), {{"name", type + " example"}});
  }
  std::uniform_int_distribution<std::size_t> pick(0, it->second.size() - 1);
  return Entity(EntityType(type), it->second[pick(rng)]);
}

std::vector<Entity> ValueBank::pool_excluding(std::span<const std::string> excluded_types) const {
  std::vector<Entity> out;
  for (const auto& [type, examples] : examples_) {
    if (std::find(excluded_types.begin(), excluded_types.end(), type) != excluded_types.end()) continue;
    for (const auto& props : examples) out.emplace_back(EntityType(type), props);
  }
  return out;
}

std::vector<std::string> ValueBank::types() const {
  std::vector<std::string> out;
  for (const auto& [type, _] : examples_) out.push_back(type);
  return out;
}

std::vector<DataPoint> generate_datapoints(const LanguageTemplate& language, const SlotList& slots,
                                           std::span<const Entity> negative_pool, const GenerateOptions& options,
                                           const ValueBank& bank) {
  if (slots.ground_truth_types.empty()) throw ValidationError("slot list has no ground truth types");
  std::set<std::string> gt_types(slots.ground_truth_types.begin(), slots.ground_truth_types.end());
  for (const auto& e : negative_pool) {
    if (gt_types.count(e.type().name())) {
      throw PreconditionError("negative pool contains ground-truth type \"" + e.type().name() + "\"");
    }
  }
  if (negative_pool.size() < options.per_query_negatives) {
    throw PreconditionError("negative pool has " + std::to_string(negative_pool.size()) + " entities, need " +
                            std::to_string(options.per_query_negatives));
  }

  std::mt19937_64 rng(options.seed);
  auto queries = expand_template(language, slots);
  if (options.max_samples && *options.max_samples < queries.size()) {
    std::vector<std::string> kept;
    kept.reserve(*options.max_samples);
    std::sample(queries.begin(), queries.end(), std::back_inserter(kept), *options.max_samples, rng);
    queries = std::move(kept);
  }

  std::vector<std::size_t> pool_idx(negative_pool.size());
  std::iota(pool_idx.begin(), pool_idx.end(), std::size_t{0});

  std::vector<DataPoint> out;
  out.reserve(queries.size());
  for (auto& query : queries) {
    // (entity, is_positive)
    std::vector<std::pair<Entity, bool>> items;
    for (const auto& type : slots.ground_truth_types) items.emplace_back(bank.sample(type, rng), true);
    std::vector<std::size_t> chosen;
    std::sample(pool_idx.begin(), pool_idx.end(), std::back_inserter(chosen), options.per_query_negatives, rng);
    for (std::size_t i : chosen) items.emplace_back(negative_pool[i], false);
    std::shuffle(items.begin(), items.end(), rng);

    std::vector<Entity> entities;
    std::set<std::size_t> truth;
    for (std::size_t i = 0; i < items.size(); ++i) {
      entities.push_back(std::move(items[i].first));
      if (items[i].second) truth.insert(i + 1);
    }
    out.emplace_back(std::move(query), std::move(entities), std::move(truth), DataKind::synthetic);
  }
  return out;
}

std::vector<TemplateSpec> parse_templates(std::istream& in) {
  enum class Section { none, variations, slots, ground_truth_types };

  std::vector<TemplateSpec> out;
  std::vector<std::size_t> start_lines;
  Section section = Section::none;
  std::string raw;
  std::size_t line = 0;

  auto finish = [&] {
    if (out.empty()) return;
    const auto& spec = out.back();
    std::size_t where = start_lines.back();
    if (spec.language.variations.empty()) throw ParseError(where, "template \"" + spec.language.id + "\" has no variations");
    if (spec.slots.ground_truth_types.empty()) {
      throw ParseError(where, "template \"" + spec.language.id + "\" has no ground_truth_types");
    }
    try {
      expansion_count(spec.language, spec.slots);
    } catch (const ValidationError& e) {
      throw ParseError(where, "template \"" + spec.language.id + "\": " + e.what());
    }
  };

  while (std::getline(in, raw)) {
    ++line;
    std::string text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    bool indented = raw.front() == ' ' || raw.front() == '\t';

    if (!indented) {
      auto colon = text.find(':');
      if (colon == std::string::npos) throw ParseError(line, "expected a section header, got \"" + text + "\"");
      std::string key = trim(std::string_view(text).substr(0, colon));
      std::string rest = trim(std::string_view(text).substr(colon + 1));
      if (key == "template") {
        finish();
        if (rest.empty()) throw ParseError(line, "template needs an id");
        out.push_back({{rest, {}}, {}});
        start_lines.push_back(line);
        section = Section::none;
        continue;
      }
      if (out.empty()) throw ParseError(line, "section \"" + key + "\" before any template: line");
      if (!rest.empty()) throw ParseError(line, "section header \"" + key + ":\" takes no inline value");
      if (key == "variations") {
        section = Section::variations;
      } else if (key == "slots") {
        section = Section::slots;
      } else if (key == "ground_truth_types") {
        section = Section::ground_truth_types;
      } else {
        throw ParseError(line, "unknown section \"" + key + "\"");
      }
      continue;
    }

    if (section == Section::none) throw ParseError(line, "item outside of a section");
    if (text.rfind("- ", 0) == 0) text = trim(std::string_view(text).substr(2));
    auto& spec = out.back();
    switch (section) {
      case Section::variations:
        spec.language.variations.push_back(text);
        break;
      case Section::ground_truth_types:
        spec.slots.ground_truth_types.push_back(text);
        break;
      case Section::slots: {
        auto colon = text.find(':');
        if (colon == std::string::npos) throw ParseError(line, "slot line must look like \"name: v1 | v2\"");
        std::string name = trim(std::string_view(text).substr(0, colon));
        if (!is_slot_name(name)) throw ParseError(line, "invalid slot name \"" + name + "\"");
        auto& values = spec.slots.values[name];
        std::string_view rest = std::string_view(text).substr(colon + 1);
        std::size_t pos = 0;
        while (pos <= rest.size()) {
          auto bar = rest.find('|', pos);
          auto piece = trim(rest.substr(pos, bar == std::string_view::npos ? std::string_view::npos : bar - pos));
          if (!piece.empty()) values.push_back(piece);
          if (bar == std::string_view::npos) break;
          pos = bar + 1;
        }
        if (values.empty()) throw ParseError(line, "slot \"" + name + "\" has no values");
        break;
      }
      case Section::none:
        break;
    }
  }
  finish();
  return out;
}

std::vector<TemplateSpec> parse_template_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open template file " + path);
  return parse_templates(in);
}

}  // namespace screenref
