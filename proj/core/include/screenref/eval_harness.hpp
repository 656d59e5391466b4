#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "screenref/cluster_encoder.hpp"
#include "screenref/entity_textualizer.hpp"
#include "screenref/layout_encoder.hpp"
#include "screenref/prompt_builder.hpp"
#include "screenref/screen_model.hpp"

namespace screenref {

/// Parsed resolver output. Invalid predictions are kept (and scored wrong).
struct Prediction {
  std::set<std::size_t> indices;
  std::string raw;
  bool valid = false;

  /// "4, 7, 8"; parses back to the same index set.
  std::string canonical() const;
};

/// Pulls integer tokens out of `raw` (separated by commas and/or whitespace)
/// and collapses repeats into a set. Invalid when nothing parses, a token is
/// negative or above `n`, or 0 appears with other indices.
Prediction parse_prediction(std::string_view raw, std::size_t n);

/// Exact set match. An empty ground truth is compared as {0}.
bool score(const Prediction& prediction, const std::set<std::size_t>& ground_truth);

/// Answers one prompt with raw model text. Implementations must tolerate
/// concurrent calls.
class Resolver {
 public:
  virtual ~Resolver() = default;
  virtual std::string resolve(const Prompt& prompt) = 0;
  virtual std::string name() const { return "resolver"; }
};

/// Test double that answers from the ground truth of the dataset it was
/// built from, addressed through Prompt::source.
class OracleResolver final : public Resolver {
 public:
  explicit OracleResolver(std::span<const DataPoint> dataset);
  std::string resolve(const Prompt& prompt) override;
  std::string name() const override { return "oracle"; }

 private:
  std::vector<std::set<std::size_t>> truths_;
};

/// Oracle rendering of prompt positions: descending order, and when there
/// are two or more the smallest is repeated ({1, 2} -> "2, 1, 1").
std::string oracle_answer(const std::set<std::size_t>& prompt_positions);

/// Always returns the same text ("0" for the trivial baseline).
class ConstantResolver final : public Resolver {
 public:
  explicit ConstantResolver(std::string answer) : answer_(std::move(answer)) {}
  std::string resolve(const Prompt&) override { return answer_; }
  std::string name() const override { return "constant(" + answer_ + ")"; }

 private:
  std::string answer_;
};

enum class EncoderStrategy { injected, grab, cluster };

std::string_view to_string(EncoderStrategy strategy) noexcept;
/// Throws ValidationError.
EncoderStrategy parse_encoder_strategy(std::string_view name);

struct EvalOptions {
  std::string dataset_name = "dataset";
  std::string model_name;  // empty: Resolver::name()
  EncoderStrategy strategy = EncoderStrategy::injected;
  EncoderConfig encoder;
  ClusterConfig cluster;
  std::uint64_t seed = 0;
  std::size_t max_in_flight = 1;
  double max_transport_failure_rate = 0.10;
  const TextualizerRegistry* registry = nullptr;  // null: built-in rules
};

/// The prompt evaluate_dataset would send for `point`. Conversational and
/// synthetic points are shuffled with a seed derived from `options.seed` and
/// the point's content, so the prompt does not depend on dataset order.
Prompt build_prompt(const DataPoint& point, const EvalOptions& options, std::size_t source = 0);

struct KindStats {
  std::size_t total = 0;
  std::size_t correct = 0;

  double accuracy() const noexcept { return total == 0 ? 0.0 : static_cast<double>(correct) / total; }
  friend bool operator==(const KindStats&, const KindStats&) = default;
};

struct AccuracyReport {
  std::string dataset;
  std::string model;
  std::size_t total = 0;
  std::size_t correct = 0;
  std::size_t invalid = 0;           // unparseable or constraint-violating outputs
  std::size_t transport_errors = 0;  // counted incorrect
  double accuracy = 0.0;
  std::map<DataKind, KindStats> per_kind;
  std::vector<std::string> errors;  // sorted

  double invalid_rate() const noexcept { return total == 0 ? 0.0 : static_cast<double>(invalid) / total; }
  friend bool operator==(const AccuracyReport&, const AccuracyReport&) = default;
};

/// Prompt -> resolve -> parse -> map back to entity order -> score, with up
/// to `max_in_flight` concurrent resolver calls. Resolver failures count as
/// incorrect; more than `max_transport_failure_rate` of them throws RunError.
AccuracyReport evaluate_dataset(std::span<const DataPoint> points, Resolver& resolver, const EvalOptions& options);

std::string report_to_json(const AccuracyReport& report);

/// Model | Conv | Synth | Screen | All, accuracies in percent with one
/// decimal, "-" for kinds absent from a report.
std::string format_accuracy_table(std::span<const AccuracyReport> reports);

}  // namespace screenref
