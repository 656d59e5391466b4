#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "screenref/cluster_encoder.hpp"
#include "screenref/error.hpp"
#include "screenref/layout_encoder.hpp"
#include "screenref/prompt_builder.hpp"
#include "test_support.hpp"

using namespace screenref;

namespace {

std::vector<Entity> people(std::size_t n) {
  std::vector<Entity> out;
  for (std::size_t i = 1; i <= n; ++i) out.emplace_back(EntityType("person"), std::vector<Property>{{"name", "p" + std::to_string(i)}});
  return out;
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_SUITE("prompt_builder") {
  TEST_CASE("shuffle: single entity is the identity") {
    auto ents = people(1);
    for (std::uint64_t seed : {0ull, 1ull, 99ull}) CHECK(shuffle_entities(ents, seed).index_map == std::vector<std::size_t>{1});
  }

  TEST_CASE("shuffle: deterministic for a fixed seed and always a permutation") {
    auto ents = people(5);
    auto a = shuffle_entities(ents, 42), b = shuffle_entities(ents, 42);
    CHECK(a.index_map == b.index_map);
    CHECK(a.entities == b.entities);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      auto m = shuffle_entities(ents, seed).index_map;
      std::sort(m.begin(), m.end());
      CHECK(m == std::vector<std::size_t>{1, 2, 3, 4, 5});
    }
    CHECK_THROWS_AS(shuffle_entities(std::vector<Entity>{}, 1), PreconditionError);
  }

  TEST_CASE("shuffle: shuffled entity at position p is the original at index_map[p-1]") {
    auto ents = people(7);
    auto s = shuffle_entities(ents, 5);
    for (std::size_t p = 1; p <= 7; ++p) CHECK(s.entities[p - 1] == ents[s.index_map[p - 1] - 1]);
  }

  TEST_CASE("ground truth remaps through the index map both ways") {
    auto ents = people(5);
    Prompt p;
    p.index_map = {3, 1, 5, 2, 4};  // prompt position 4 shows original entity 2
    CHECK(p.to_prompt({2}) == std::set<std::size_t>{4});
    CHECK(p.to_original({4}) == std::set<std::size_t>{2});
    CHECK(p.to_original({0}) == std::set<std::size_t>{0});
    CHECK_THROWS_AS(p.to_original({6}), PreconditionError);

    std::mt19937_64 rng(8);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      auto prompt = build_conversational_prompt("x", ents, seed, TextualizerRegistry::with_defaults());
      std::set<std::size_t> gt;
      for (std::size_t i = 1; i <= 5; ++i)
        if (rng() % 2) gt.insert(i);
      CHECK(prompt.to_original(prompt.to_prompt(gt)) == gt);
      CHECK(prompt.to_prompt(prompt.to_original(gt)) == gt);
    }
  }

  TEST_CASE("conversational listing prompt is byte-exact") {
    auto points = load_dataset_file(test::fixture_path("conversational.jsonl"));
    auto reg = TextualizerRegistry::with_defaults();
    reg.merge(TextualizerRegistry::from_file(test::data_path("rules/listing_rules.json")));
    auto p = build_conversational_prompt(points[0].request(), points[0].entities(), std::nullopt, reg);
    CHECK(p.text == test::read_file(test::fixture_path("listing_prompt.golden.txt")));
    CHECK(p.index_map == std::vector<std::size_t>{1, 2, 3});
    CHECK(p.variant == PromptVariant::conversational);
  }

  TEST_CASE("conversational prompt with one entity has exactly two options") {
    auto p = build_conversational_prompt("call her", people(1), 3, TextualizerRegistry::with_defaults());
    CHECK(p.text.find("User Entities:\n0. None\n1. Type: Person | p1\nRelevant entity:") != std::string::npos);
    CHECK(count(p.text, "\n2. ") == 0);
    CHECK_THROWS_AS(build_conversational_prompt("x", std::vector<Entity>{}, 1, TextualizerRegistry::with_defaults()),
                    PreconditionError);
  }

  TEST_CASE("alarm prompt lists four alarm options") {
    auto points = load_dataset_file(test::fixture_path("conversational.jsonl"));
    const auto& alarms = points[1];
    auto p = build_conversational_prompt(alarms.request(), alarms.entities(), 7, TextualizerRegistry::with_defaults());
    CHECK(count(p.text, "Type: Alarm | ") == 4);
    CHECK(p.text.find("Type: Alarm | label: pick up didi") != std::string::npos);
    CHECK(p.text.find("User request: Switch off the one reminding me to pick up didi.\n") != std::string::npos);
  }

  TEST_CASE("on-screen prompt is byte-exact") {
    auto point = test::load_one("phone_screen.jsonl");
    auto p = build_onscreen_prompt(point.request(), encode_screen(point));
    CHECK(p.text == test::read_file(test::fixture_path("phone_screen_prompt.golden.txt")));
    CHECK(p.index_map == std::vector<std::size_t>{1, 2});
    CHECK(p.variant == PromptVariant::onscreen);
    CHECK(p.text.find("0. None") == std::string::npos);
  }

  TEST_CASE("on-screen prompt needs markers") {
    std::vector<Entity> ents{Entity(EntityType("phone number"), {{"value", "1"}}, "555", Placement{BBox(0, 0, 5, 5), {}})};
    auto one = build_onscreen_prompt("call", encode_screen({}, ents));
    CHECK(count(one.text, "{{1. ") == 1);
    CHECK(count(one.text, "{{") == 1);
    EncoderConfig raw;
    raw.inject_markers = false;
    CHECK_THROWS_AS(build_onscreen_prompt("call", encode_screen({}, ents, raw)), PreconditionError);
  }

  TEST_CASE("grab prompt: raw screen followed by the entity list") {
    auto point = test::load_one("phone_screen.jsonl");
    EncoderConfig raw;
    raw.inject_markers = false;
    auto p = build_grab_prompt(point.request(), encode_screen(point, raw), point.entities(),
                               TextualizerRegistry::with_defaults());
    CHECK(p.text.find("Screen:\nYour New home!\n") != std::string::npos);
    CHECK(p.text.find("(206) 198 1999\t(206) 198 1699\nUser Entities:\n0. None\n"
                      "1. Type: PhoneNumber | (206) 198 1999\n2. Type: PhoneNumber | (206) 198 1699\n"
                      "Relevant entity:") != std::string::npos);
  }

  TEST_CASE("cluster prompt lines carry context and position") {
    auto point = test::load_one("branch_listing.jsonl");
    auto enc = encode_clusters(point.entities());
    auto p = build_cluster_prompt(point.request(), enc, point.entities(), TextualizerRegistry::with_defaults());
    CHECK(p.text.find("1. Type: PostalAddress | GeographicArea: 5520 Roy St, Seattle 98109 | surr_objects: "
                      "Queen Anne, (206) 380 4699 | distance_from_top: 35 | distance_from_left: 125\n") !=
          std::string::npos);
    CHECK(p.text.find("3. Type: PhoneNumber | (206) 380 4898 | surr_objects: Belltown, 2209 1st Ave S, Seattle "
                      "98121 | distance_from_top: 60 | distance_from_left: 475\n") != std::string::npos);
    CHECK_THROWS_AS(build_cluster_prompt("x", std::span(enc).first(1), point.entities(),
                                         TextualizerRegistry::with_defaults()),
                    PreconditionError);
  }

  TEST_CASE("every variant carries the instruction sentence") {
    auto point = test::load_one("phone_screen.jsonl");
    auto reg = TextualizerRegistry::with_defaults();
    EncoderConfig raw;
    raw.inject_markers = false;
    std::vector<Prompt> prompts{
        build_conversational_prompt("x", point.entities(), 1, reg), build_onscreen_prompt("x", encode_screen(point)),
        build_grab_prompt("x", encode_screen(point, raw), point.entities(), reg),
        build_cluster_prompt("x", encode_clusters(point.entities()), point.entities(), reg)};
    for (const auto& p : prompts) {
      CHECK(p.text.rfind(std::string(kInstruction) + "\n\nUser request: x\n", 0) == 0);
      CHECK(p.text.size() >= kTrailer.size());
      CHECK(p.text.substr(p.text.size() - kTrailer.size()) == kTrailer);
    }
  }

  TEST_CASE("injected prompt length grows linearly with screen objects") {
    std::vector<double> sizes, lengths;
    for (std::size_t k : {8, 16, 32, 64, 128}) {
      auto ents = test::dense_scene(k);
      sizes.push_back(static_cast<double>(k));
      lengths.push_back(static_cast<double>(build_onscreen_prompt("call it", encode_screen({}, ents)).text.size()) -
                      test::fixed_prompt_bytes("call it"));
    }
    double slope = test::loglog_slope(sizes, lengths);
    CHECK(slope > 0.8);
    CHECK(slope < 1.2);
  }
}
