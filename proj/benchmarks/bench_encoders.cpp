#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "screenref/cluster_encoder.hpp"
#include "screenref/entity_textualizer.hpp"
#include "screenref/layout_encoder.hpp"
#include "screenref/prompt_builder.hpp"

using namespace screenref;

namespace {

// A screen of `rows` label/number pairs with every label in each entity's surroundings.
std::vector<Entity> list_screen(std::size_t rows) {
  std::vector<ScreenObject> labels;
  for (std::size_t i = 0; i < rows; ++i) labels.emplace_back("branch " + std::to_string(i), BBox(0, 12.0 * i, 60, 10));
  std::vector<Entity> out;
  for (std::size_t i = 0; i < rows; ++i) {
    std::string text = "555-" + std::to_string(1000 + i);
    out.emplace_back(EntityType("phone number"), std::vector<Property>{{"value", text}}, text,
                     Placement{BBox(70, 12.0 * i, 60, 10), labels});
  }
  return out;
}

std::vector<PlacedObject> scattered(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> pos(0, 1000), size(5, 60);
  std::vector<PlacedObject> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({"t" + std::to_string(i), BBox(pos(rng), pos(rng), size(rng), size(rng)), std::nullopt});
  return out;
}

void BM_EncodeScreen(benchmark::State& state) {
  auto ents = list_screen(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(encode_screen({}, ents));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EncodeScreen)->RangeMultiplier(2)->Range(8, 256)->Complexity();

void BM_SortAndGroup(benchmark::State& state) {
  auto objs = scattered(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto sorted = sort_objects(objs);
    benchmark::DoNotOptimize(group_levels(sorted, 8.0));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SortAndGroup)->RangeMultiplier(4)->Range(16, 4096)->Complexity(benchmark::oNLogN);

void BM_Dbscan(benchmark::State& state) {
  auto objs = scattered(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dbscan_cluster(objs, 20.0, 2));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Dbscan)->RangeMultiplier(2)->Range(16, 512)->Complexity(benchmark::oNSquared);

void BM_ClusterPrompt(benchmark::State& state) {
  auto ents = list_screen(static_cast<std::size_t>(state.range(0)));
  auto reg = TextualizerRegistry::with_defaults();
  std::size_t bytes = 0;
  for (auto _ : state) {
    auto p = build_cluster_prompt("call it", encode_clusters(ents), ents, reg);
    bytes = p.text.size();
    benchmark::DoNotOptimize(p);
  }
  state.counters["prompt_bytes"] = static_cast<double>(bytes);
}
BENCHMARK(BM_ClusterPrompt)->RangeMultiplier(2)->Range(8, 64);

void BM_InjectedPrompt(benchmark::State& state) {
  auto ents = list_screen(static_cast<std::size_t>(state.range(0)));
  std::size_t bytes = 0;
  for (auto _ : state) {
    auto p = build_onscreen_prompt("call it", encode_screen({}, ents));
    bytes = p.text.size();
    benchmark::DoNotOptimize(p);
  }
  state.counters["prompt_bytes"] = static_cast<double>(bytes);
}
BENCHMARK(BM_InjectedPrompt)->RangeMultiplier(2)->Range(8, 64);

void BM_Textualize(benchmark::State& state) {
  auto reg = TextualizerRegistry::with_defaults();
  Entity alarm(EntityType("alarm"), {{"time", "08:06 PM"}, {"label", "brush hair"}, {"status", "Off"}});
  for (auto _ : state) benchmark::DoNotOptimize(reg.textualize(alarm));
}
BENCHMARK(BM_Textualize);

}  // namespace
