#include <doctest.h>

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "screenref/dataset_io.hpp"
#include "screenref_cli/cli.hpp"
#include "test_support.hpp"

using namespace screenref;

namespace {

struct Result {
  int status;
  std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "screenref");
  std::ostringstream out, err;
  int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

std::vector<nlohmann::json> json_lines(const std::string& text) {
  std::vector<nlohmann::json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  return out;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("encode: phone-number screen gives the golden parse") {
    auto r = run_cli({"encode", "--input", test::fixture_path("phone_screen.jsonl")});
    REQUIRE(r.status == 0);
    auto recs = json_lines(r.out);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0]["id"] == 0);
    CHECK(recs[0]["parse_text"] == test::read_file(test::fixture_path("phone_screen_parse.golden.txt")));
  }

  TEST_CASE("encode: empty input gives empty output") {
    test::TempFile in(".jsonl");
    in.write("");
    auto r = run_cli({"encode", "-i", in.path()});
    CHECK(r.status == 0);
    CHECK(r.out.empty());
  }

  TEST_CASE("encode: non-onscreen records are skipped with a warning") {
    auto r = run_cli({"encode", "-i", test::fixture_path("conversational.jsonl")});
    CHECK(r.status == 0);
    CHECK(r.out.empty());
    CHECK(r.err.find("skipped 3") != std::string::npos);
  }

  TEST_CASE("encode: cluster strategy reports surrounding objects") {
    test::TempFile out(".jsonl");
    auto r = run_cli({"encode", "-i", test::fixture_path("branch_listing.jsonl"), "--strategy", "cluster", "-o",
                      out.path()});
    REQUIRE(r.status == 0);
    CHECK(r.out.find("encoded 1") != std::string::npos);
    auto recs = json_lines(out.read());
    REQUIRE(recs.size() == 1);
    const auto& ents = recs[0]["entities"];
    REQUIRE(ents.size() == 4);
    CHECK(ents[0]["surrounding_objects"] == nlohmann::json::array({"Queen Anne", "(206) 380 4699"}));
    CHECK(ents[1]["surrounding_objects"] == nlohmann::json::array({"Queen Anne", "5520 Roy St, Seattle 98109"}));
    CHECK(ents[2]["surrounding_objects"] ==
          nlohmann::json::array({"Belltown", "2209 1st Ave S, Seattle 98121"}));
    CHECK(ents[3]["surrounding_objects"] == nlohmann::json::array({"Belltown", "(206) 380 4898"}));
    CHECK(recs[0]["parse_text"].get<std::string>().rfind("User Entities:\n0. None\n1. ", 0) == 0);
  }

  TEST_CASE("generate: share-address template and count") {
    test::TempFile tmpl(".tmpl"), out(".jsonl");
    tmpl.write(
        "template: share\nvariations:\n  share [mention] with [name]\nslots:\n  mention: this address | that "
        "address\n  name: Mom\nground_truth_types:\n  email address\n  physical address\n");
    auto r = run_cli({"generate", "-i", tmpl.path(), "-o", out.path(), "--seed", "3"});
    REQUIRE(r.status == 0);
    CHECK(r.out.find("expanded 2 queries") != std::string::npos);
    auto points = load_dataset_file(out.path());
    REQUIRE(points.size() == 2);
    CHECK(points[0].request() == "share this address with Mom");
    CHECK(points[1].request() == "share that address with Mom");
  }

  TEST_CASE("generate: zero-placeholder template") {
    test::TempFile tmpl(".tmpl");
    tmpl.write("template: off\nvariations:\n  turn it off\nground_truth_types:\n  setting\n");
    auto r = run_cli({"generate", "-i", tmpl.path(), "--negatives", "0"});
    REQUIRE(r.status == 0);
    auto recs = json_lines(r.out);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0]["request"] == "turn it off");
    CHECK(recs[0]["entities"].size() == 1);
  }

  TEST_CASE("generate: bundled templates match the count formula and rerun identically") {
    auto a = run_cli({"generate", "-i", test::data_path("templates/bundled.tmpl"), "--seed", "11"});
    auto b = run_cli({"generate", "-i", test::data_path("templates/bundled.tmpl"), "--seed", "11"});
    REQUIRE(a.status == 0);
    CHECK(a.out == b.out);
    CHECK(json_lines(a.out).size() >= 500);
    CHECK(a.err.find("expanded " + std::to_string(json_lines(a.out).size())) != std::string::npos);
  }

  TEST_CASE("generate: malformed template reports its line") {
    test::TempFile tmpl(".tmpl");
    tmpl.write("template: a\nvariations:\n  x\nslots:\n  broken line\n");
    auto r = run_cli({"generate", "-i", tmpl.path()});
    CHECK(r.status == 1);
    CHECK(r.err.find("line 5") != std::string::npos);
  }

  TEST_CASE("prompt: listing prompt matches the golden text with the listing rules") {
    auto r = run_cli({"prompt", "-i", test::fixture_path("conversational.jsonl"), "--rules",
                      test::data_path("rules/listing_rules.json")});
    REQUIRE(r.status == 0);
    auto recs = json_lines(r.out);
    REQUIRE(recs.size() == 3);
    // The prompt command shuffles; undo the permutation to compare against the golden order.
    auto golden = test::read_file(test::fixture_path("listing_prompt.golden.txt"));
    auto text = recs[0]["prompt"].get<std::string>();
    auto map = recs[0]["index_map"].get<std::vector<std::size_t>>();
    CHECK(text.size() == golden.size());
    auto head = golden.substr(0, golden.find("1. "));
    CHECK(text.rfind(head, 0) == 0);
    for (std::size_t p = 1; p <= map.size(); ++p) {
      auto line_start = golden.find(std::to_string(map[p - 1]) + ". Type");
      auto line = golden.substr(line_start + 3, golden.find('\n', line_start) - line_start - 3);
      CHECK(text.find(std::to_string(p) + ". " + line + "\n") != std::string::npos);
    }
  }

  TEST_CASE("prompt: on-screen prompt and deterministic output") {
    auto a = run_cli({"prompt", "-i", test::fixture_path("phone_screen.jsonl")});
    REQUIRE(a.status == 0);
    auto recs = json_lines(a.out);
    CHECK(recs[0]["prompt"] == test::read_file(test::fixture_path("phone_screen_prompt.golden.txt")));
    CHECK(recs[0]["index_map"] == nlohmann::json::array({1, 2}));
    auto b = run_cli({"prompt", "-i", test::fixture_path("conversational.jsonl"), "--seed", "4"});
    auto c = run_cli({"prompt", "-i", test::fixture_path("conversational.jsonl"), "--seed", "4"});
    CHECK(b.out == c.out);
  }

  TEST_CASE("evaluate: oracle and zero stub") {
    test::TempFile data(".jsonl"), report(".json");
    auto g = run_cli({"generate", "-i", test::data_path("templates/bundled.tmpl"), "-o", data.path(),
                      "--max-samples", "15"});
    REQUIRE(g.status == 0);

    auto r = run_cli({"evaluate", "-i", data.path(), "--oracle", "-o", report.path(), "--dataset-name", "synth"});
    REQUIRE(r.status == 0);
    auto j = nlohmann::json::parse(report.read());
    CHECK(j["accuracy"] == 1.0);
    CHECK(j["dataset"] == "synth");
    CHECK(r.out.find("Model") != std::string::npos);
    CHECK(r.out.find("100.0") != std::string::npos);

    auto z = run_cli({"evaluate", "-i", data.path(), "--constant", "0"});
    REQUIRE(z.status == 0);
    CHECK(nlohmann::json::parse(z.out)["accuracy"] == 0.0);
  }

  TEST_CASE("evaluate: report is independent of record order") {
    auto points = load_dataset_file(test::fixture_path("conversational.jsonl"));
    auto more = load_dataset_file(test::fixture_path("phone_screen.jsonl"));
    points.insert(points.end(), more.begin(), more.end());
    test::TempFile fwd(".jsonl"), rev(".jsonl");
    std::ostringstream a, b;
    save_dataset(a, points);
    std::reverse(points.begin(), points.end());
    save_dataset(b, points);
    fwd.write(a.str());
    rev.write(b.str());
    auto r1 = run_cli({"evaluate", "-i", fwd.path(), "--oracle", "--dataset-name", "d"});
    auto r2 = run_cli({"evaluate", "-i", rev.path(), "--oracle", "--dataset-name", "d"});
    REQUIRE(r1.status == 0);
    CHECK(r1.out == r2.out);
  }

  TEST_CASE("usage and operational errors") {
    CHECK(run_cli({}).status == 2);
    CHECK(run_cli({"encode"}).status == 2);
    CHECK(run_cli({"encode", "-i", "/nonexistent/file.jsonl"}).status == 2);
    CHECK(run_cli({"encode", "-i", test::fixture_path("phone_screen.jsonl"), "--strategy", "grid"}).status == 2);
    CHECK(run_cli({"evaluate", "-i", test::fixture_path("conversational.jsonl")}).status == 2);
    CHECK(run_cli({"evaluate", "-i", test::fixture_path("conversational.jsonl"), "--oracle", "--constant", "0"})
              .status == 2);

    test::TempFile bad(".jsonl");
    bad.write("{\"request\": 1}\n");
    auto r = run_cli({"prompt", "-i", bad.path()});
    CHECK(r.status == 1);
    CHECK(r.err.find("line 1") != std::string::npos);

    auto down = run_cli({"evaluate", "-i", test::fixture_path("conversational.jsonl"), "--endpoint",
                         "http://127.0.0.1:1/v1/resolve"});
    CHECK(down.status == 1);
  }
}
