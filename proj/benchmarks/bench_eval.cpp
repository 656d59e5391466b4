#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "screenref/eval_harness.hpp"
#include "screenref/synth_datagen.hpp"

using namespace screenref;

namespace {

void BM_ParsePrediction(benchmark::State& state) {
  const std::string raw = "8, 7, 4, 4, 2";
  for (auto _ : state) benchmark::DoNotOptimize(parse_prediction(raw, 10));
}
BENCHMARK(BM_ParsePrediction);

void BM_OracleEvaluation(benchmark::State& state) {
  LanguageTemplate t{"call", {"call [who] [when]", "ring [who]"}};
  SlotList s;
  for (int i = 0; i < 20; ++i) s.values["who"].push_back("contact " + std::to_string(i));
  s.values["when"] = {"now", "later", "at noon"};
  s.ground_truth_types = {"phone number"};
  auto bank = ValueBank::builtin();
  auto data = generate_datapoints(t, s, bank.pool_excluding(s.ground_truth_types), {}, bank);
  OracleResolver oracle(data);
  EvalOptions opt;
  opt.max_in_flight = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_dataset(data, oracle, opt));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * data.size()));
}
BENCHMARK(BM_OracleEvaluation)->Arg(1)->Arg(4);

}  // namespace
