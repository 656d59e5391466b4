#include "screenref/eval_harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <exception>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "screenref/error.hpp"

namespace screenref {
namespace {

// FNV-1a, stable across platforms (unlike std::hash).
std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t content_seed(const DataPoint& p, std::uint64_t seed) {
  std::uint64_t h = fnv1a(p.request(), 1469598103934665603ULL ^ seed);
  for (const auto& e : p.entities()) {
    h = fnv1a(e.type().name(), h);
    for (const auto& prop : e.properties()) h = fnv1a(prop.value, fnv1a(prop.key, h));
  }
  return h;
}

bool is_separator(char c) { return c == ',' || std::isspace(static_cast<unsigned char>(c)); }

std::string percent(const KindStats& s) {
  if (s.total == 0) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", 100.0 * s.accuracy());
  return buf;
}

}  // namespace

std::string Prediction::canonical() const {
  std::string out;
  for (std::size_t i : indices) {
    if (!out.empty()) out += ", ";
    out += std::to_string(i);
  }
  return out;
}

Prediction parse_prediction(std::string_view raw, std::size_t n) {
  Prediction p;
  p.raw = std::string(raw);
  bool ok = true;
  bool any = false;
  std::size_t i = 0;
  while (i < raw.size()) {
    while (i < raw.size() && is_separator(raw[i])) ++i;
    if (i == raw.size()) break;
    std::size_t j = i;
    while (j < raw.size() && !is_separator(raw[j])) ++j;
    std::string_view tok = raw.substr(i, j - i);
    i = j;

    bool negative = false;
    if (tok.front() == '-' || tok.front() == '+') {
      negative = tok.front() == '-';
      tok.remove_prefix(1);
    }
    std::size_t value = 0;
    auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (tok.empty() || ec != std::errc() || end != tok.data() + tok.size()) {
      ok = false;  // non-integer token, or overflow
      continue;
    }
    any = true;
    if (negative && value != 0) {
      ok = false;
      continue;
    }
    if (value > n) ok = false;
    p.indices.insert(value);
  }
  if (!any) ok = false;
  if (p.indices.count(0) && p.indices.size() > 1) ok = false;
  p.valid = ok;
  return p;
}

bool score(const Prediction& prediction, const std::set<std::size_t>& ground_truth) {
  if (!prediction.valid) return false;
  if (ground_truth.empty()) return prediction.indices == std::set<std::size_t>{0};
  return prediction.indices == ground_truth;
}

OracleResolver::OracleResolver(std::span<const DataPoint> dataset) {
  truths_.reserve(dataset.size());
  for (const auto& p : dataset) truths_.push_back(p.ground_truth());
}

std::string OracleResolver::resolve(const Prompt& prompt) {
  if (prompt.source >= truths_.size()) {
    throw PreconditionError("oracle has no datapoint " + std::to_string(prompt.source));
  }
  const auto& truth = truths_[prompt.source];
  return oracle_answer(truth.empty() ? std::set<std::size_t>{0} : prompt.to_prompt(truth));
}

std::string oracle_answer(const std::set<std::size_t>& prompt_positions) {
  if (prompt_positions.empty()) return "0";
  std::string out;
  for (auto it = prompt_positions.rbegin(); it != prompt_positions.rend(); ++it) {
    if (!out.empty()) out += ", ";
    out += std::to_string(*it);
  }
  if (prompt_positions.size() >= 2) out += ", " + std::to_string(*prompt_positions.begin());
  return out;
}

std::string_view to_string(EncoderStrategy strategy) noexcept {
  switch (strategy) {
    case EncoderStrategy::injected:
      return "injected";
    case EncoderStrategy::grab:
      return "grab";
    case EncoderStrategy::cluster:
      return "cluster";
  }
  return "unknown";
}

EncoderStrategy parse_encoder_strategy(std::string_view name) {
  if (name == "injected") return EncoderStrategy::injected;
  if (name == "grab") return EncoderStrategy::grab;
  if (name == "cluster") return EncoderStrategy::cluster;
  throw ValidationError("unknown encoder strategy \"" + std::string(name) + "\" (injected, grab, cluster)");
}

Prompt build_prompt(const DataPoint& point, const EvalOptions& options, std::size_t source) {
  static const TextualizerRegistry kDefaults = TextualizerRegistry::with_defaults();
  const TextualizerRegistry& registry = options.registry ? *options.registry : kDefaults;

  Prompt prompt;
  if (point.kind() != DataKind::onscreen) {
    prompt = build_conversational_prompt(point.request(), point.entities(), content_seed(point, options.seed),
                                         registry);
  } else {
    switch (options.strategy) {
      case EncoderStrategy::injected: {
        EncoderConfig cfg = options.encoder;
        cfg.inject_markers = true;
        prompt = build_onscreen_prompt(point.request(), encode_screen(point, cfg));
        break;
      }
      case EncoderStrategy::grab: {
        EncoderConfig cfg = options.encoder;
        cfg.inject_markers = false;
        prompt = build_grab_prompt(point.request(), encode_screen(point, cfg), point.entities(), registry);
        break;
      }
      case EncoderStrategy::cluster: {
        auto encodings = encode_clusters(point.entities(), options.cluster);
        prompt = build_cluster_prompt(point.request(), encodings, point.entities(), registry);
        break;
      }
    }
  }
  prompt.source = source;
  return prompt;
}

AccuracyReport evaluate_dataset(std::span<const DataPoint> points, Resolver& resolver, const EvalOptions& options) {
  // Build every prompt up front so malformed data fails before any resolver call.
  std::vector<Prompt> prompts;
  prompts.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) prompts.push_back(build_prompt(points[i], options, i));

  struct Outcome {
    bool correct = false;
    bool valid = false;
    std::optional<std::string> error;
  };
  std::vector<Outcome> outcomes(points.size());

  auto run_one = [&](std::size_t i) {
    Outcome& out = outcomes[i];
    std::string raw;
    try {
      raw = resolver.resolve(prompts[i]);
    } catch (const std::exception& e) {
      out.error = "item " + std::to_string(i) + ": " + e.what();
      return;
    }
    Prediction pred = parse_prediction(raw, prompts[i].index_map.size());
    out.valid = pred.valid;
    if (!pred.valid) return;
    pred.indices = prompts[i].to_original(pred.indices);
    out.correct = score(pred, points[i].ground_truth());
  };

  std::size_t workers = std::clamp<std::size_t>(options.max_in_flight, 1, std::max<std::size_t>(points.size(), 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < points.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < points.size(); i = next++) run_one(i);
      });
    }
  }  // jthreads join here

  AccuracyReport report;
  report.dataset = options.dataset_name;
  report.model = options.model_name.empty() ? resolver.name() : options.model_name;
  report.total = points.size();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& o = outcomes[i];
    auto& kind = report.per_kind[points[i].kind()];
    ++kind.total;
    if (o.error) {
      ++report.transport_errors;
      report.errors.push_back(*o.error);
    } else if (!o.valid) {
      ++report.invalid;
    }
    if (o.correct) {
      ++report.correct;
      ++kind.correct;
    }
  }
  report.accuracy = report.total == 0 ? 0.0 : static_cast<double>(report.correct) / report.total;
  std::sort(report.errors.begin(), report.errors.end());

  if (report.total > 0 &&
      static_cast<double>(report.transport_errors) > options.max_transport_failure_rate * report.total) {
    throw RunError(std::to_string(report.transport_errors) + " of " + std::to_string(report.total) +
                   " resolver calls failed" + (report.errors.empty() ? "" : "; first: " + report.errors.front()));
  }
  return report;
}

std::string report_to_json(const AccuracyReport& r) {
  nlohmann::ordered_json j;
  j["dataset"] = r.dataset;
  j["model"] = r.model;
  j["total"] = r.total;
  j["correct"] = r.correct;
  j["accuracy"] = r.accuracy;
  j["invalid"] = r.invalid;
  j["invalid_rate"] = r.invalid_rate();
  j["transport_errors"] = r.transport_errors;
  nlohmann::ordered_json kinds = nlohmann::ordered_json::object();
  for (const auto& [kind, s] : r.per_kind) {
    kinds[std::string(to_string(kind))] = {{"total", s.total}, {"correct", s.correct}, {"accuracy", s.accuracy()}};
  }
  j["per_kind"] = std::move(kinds);
  j["errors"] = r.errors;
  return j.dump(2);
}

std::string format_accuracy_table(std::span<const AccuracyReport> reports) {
  const std::vector<std::string> header = {"Model", "Conv", "Synth", "Screen", "All"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : reports) {
    auto kind = [&](DataKind k) {
      auto it = r.per_kind.find(k);
      return it == r.per_kind.end() ? KindStats{} : it->second;
    };
    rows.push_back({r.model, percent(kind(DataKind::conversational)), percent(kind(DataKind::synthetic)),
                    percent(kind(DataKind::onscreen)), percent(KindStats{r.total, r.correct})});
  }

  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c == 0) {
        out << cells[c] << std::string(width[c] - cells[c].size(), ' ');
      } else {
        out << "  " << std::string(width[c] - cells[c].size(), ' ') << cells[c];
      }
    }
    out << '\n';
  };
  emit(header);
  std::size_t total_width = width[0];
  for (std::size_t c = 1; c < width.size(); ++c) total_width += width[c] + 2;
  out << std::string(total_width, '-') << '\n';
  for (const auto& row : rows) emit(row);
  return out.str();
}

}  // namespace screenref
