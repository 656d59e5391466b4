#include "screenref_cli/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "screenref/cluster_encoder.hpp"
#include "screenref/dataset_io.hpp"
#include "screenref/entity_textualizer.hpp"
#include "screenref/error.hpp"
#include "screenref/eval_harness.hpp"
#include "screenref/http_resolver.hpp"
#include "screenref/layout_encoder.hpp"
#include "screenref/prompt_builder.hpp"
#include "screenref/synth_datagen.hpp"

namespace screenref::cli {
namespace {

struct RunConfig {
  std::string input;
  std::string output = "-";
  std::string strategy = "injected";
  std::optional<double> margin;
  std::optional<double> eps;
  std::size_t min_pts = 1;
  std::uint64_t seed = 0;
  std::size_t negatives = 3;
  std::optional<std::size_t> max_samples;
  std::string endpoint;
  bool oracle = false;
  std::optional<std::string> constant;
  std::string rules;
  std::string model_name;
  std::string dataset_name;
  int max_tokens = 16;
  std::size_t jobs = 4;
};

// Writes to a file, or to `out` for "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path == "-") {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error("cannot open output file " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }
  bool is_stdout() const { return file_ == nullptr; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

TextualizerRegistry load_registry(const RunConfig& cfg) {
  auto reg = TextualizerRegistry::with_defaults();
  // A rule file refines the built-in rules rather than replacing them.
  if (!cfg.rules.empty()) reg.merge(TextualizerRegistry::from_file(cfg.rules));
  return reg;
}

EncoderConfig encoder_config(const RunConfig& cfg) {
  EncoderConfig enc;
  enc.margin = cfg.margin;
  enc.validate();
  return enc;
}

ClusterConfig cluster_config(const RunConfig& cfg) {
  ClusterConfig c;
  c.eps = cfg.eps;
  c.min_pts = cfg.min_pts;
  return c;
}

int cmd_encode(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  auto strategy = parse_encoder_strategy(cfg.strategy);
  auto points = load_dataset_file(cfg.input);
  auto registry = load_registry(cfg);
  EncoderConfig enc = encoder_config(cfg);
  enc.inject_markers = strategy != EncoderStrategy::grab;

  Sink sink(cfg.output, out);
  std::size_t written = 0;
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (p.kind() != DataKind::onscreen) {
      ++skipped;
      continue;
    }
    nlohmann::ordered_json rec;
    rec["id"] = i;
    if (strategy == EncoderStrategy::cluster) {
      auto encodings = encode_clusters(p.entities(), cluster_config(cfg));
      nlohmann::ordered_json ents = nlohmann::ordered_json::array();
      for (const auto& e : encodings) {
        ents.push_back({{"index", e.entity_index},
                        {"surrounding_objects", e.surrounding_prompt},
                        {"distance_from_top", e.distance_from_top},
                        {"distance_from_left", e.distance_from_left}});
      }
      // The entity block of the cluster prompt, without instruction or trailer.
      Prompt prompt = build_cluster_prompt(p.request(), encodings, p.entities(), registry);
      auto begin = prompt.text.find("User Entities:\n");
      auto end = prompt.text.rfind(kTrailer);
      rec["parse_text"] = prompt.text.substr(begin, end - begin);
      rec["entities"] = std::move(ents);
    } else {
      rec["parse_text"] = encode_screen(p, enc).text;
    }
    sink.stream() << rec.dump() << '\n';
    ++written;
  }
  if (skipped > 0) err << "warning: skipped " << skipped << " non-onscreen datapoint(s)\n";
  if (!sink.is_stdout()) out << "encoded " << written << " datapoint(s)\n";
  return 0;
}

int cmd_generate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  auto specs = parse_template_file(cfg.input);
  auto bank = ValueBank::builtin();

  std::vector<DataPoint> all;
  std::size_t expanded = 0;
  for (std::size_t t = 0; t < specs.size(); ++t) {
    const auto& spec = specs[t];
    expanded += expansion_count(spec.language, spec.slots);
    auto pool = bank.pool_excluding(spec.slots.ground_truth_types);
    GenerateOptions opts;
    opts.per_query_negatives = cfg.negatives;
    opts.seed = cfg.seed + t;
    opts.max_samples = cfg.max_samples;
    auto points = generate_datapoints(spec.language, spec.slots, pool, opts, bank);
    all.insert(all.end(), std::make_move_iterator(points.begin()), std::make_move_iterator(points.end()));
  }

  Sink sink(cfg.output, out);
  save_dataset(sink.stream(), all);
  std::ostream& summary = sink.is_stdout() ? err : out;
  summary << "expanded " << expanded << " queries from " << specs.size() << " template(s); wrote " << all.size()
          << " datapoint(s)\n";
  return 0;
}

EvalOptions eval_options(const RunConfig& cfg, const TextualizerRegistry& registry) {
  EvalOptions opts;
  opts.strategy = parse_encoder_strategy(cfg.strategy);
  opts.encoder = encoder_config(cfg);
  opts.cluster = cluster_config(cfg);
  opts.seed = cfg.seed;
  opts.registry = &registry;
  opts.max_in_flight = cfg.jobs;
  opts.model_name = cfg.model_name;
  opts.dataset_name = cfg.dataset_name.empty() ? cfg.input : cfg.dataset_name;
  return opts;
}

int cmd_prompt(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  auto points = load_dataset_file(cfg.input);
  auto registry = load_registry(cfg);
  auto opts = eval_options(cfg, registry);
  Sink sink(cfg.output, out);
  for (std::size_t i = 0; i < points.size(); ++i) {
    Prompt p = build_prompt(points[i], opts, i);
    nlohmann::ordered_json rec;
    rec["id"] = i;
    rec["prompt"] = p.text;
    rec["index_map"] = p.index_map;
    sink.stream() << rec.dump() << '\n';
  }
  return 0;
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  auto points = load_dataset_file(cfg.input);
  auto registry = load_registry(cfg);
  auto opts = eval_options(cfg, registry);

  std::unique_ptr<Resolver> resolver;
  if (cfg.oracle) {
    resolver = std::make_unique<OracleResolver>(points);
  } else if (cfg.constant) {
    resolver = std::make_unique<ConstantResolver>(*cfg.constant);
  } else {
    HttpResolverConfig http;
    http.url = cfg.endpoint;
    http.max_tokens = cfg.max_tokens;
    if (const char* token = std::getenv(kAuthTokenEnv); token && *token) http.auth_token = token;
    resolver = std::make_unique<HttpResolver>(std::move(http));
  }

  AccuracyReport report = evaluate_dataset(points, *resolver, opts);
  Sink sink(cfg.output, out);
  sink.stream() << report_to_json(report) << '\n';
  std::ostream& table = sink.is_stdout() ? err : out;
  table << format_accuracy_table(std::span<const AccuracyReport>(&report, 1));
  if (report.invalid > 0) table << "invalid outputs: " << report.invalid << " of " << report.total << '\n';
  return 0;
}

void add_io(CLI::App* cmd, RunConfig& cfg, const std::string& input_help) {
  cmd->add_option("--input,-i", cfg.input, input_help)->required()->check(CLI::ExistingFile);
  cmd->add_option("--output,-o", cfg.output, "Output path, '-' for stdout")->capture_default_str();
}

void add_encoding(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--strategy", cfg.strategy, "Screen encoding: injected, grab or cluster")
      ->check(CLI::IsMember({"injected", "grab", "cluster"}))
      ->capture_default_str();
  cmd->add_option("--margin", cfg.margin, "Same-line tolerance in screen units (default: half median height)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--eps", cfg.eps, "Cluster radius for --strategy cluster (default: median height)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--min-pts", cfg.min_pts, "Cluster density for --strategy cluster")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--rules", cfg.rules, "JSON entity rule file overriding the built-in rules")
      ->check(CLI::ExistingFile);
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Screen and entity encoding toolkit for LLM reference resolution"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* encode = app.add_subcommand("encode", "Render on-screen datapoints to text");
  add_io(encode, cfg, "Dataset (JSON lines)");
  add_encoding(encode, cfg);

  auto* generate = app.add_subcommand("generate", "Expand language templates into a synthetic dataset");
  add_io(generate, cfg, "Template file");
  generate->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  generate->add_option("--negatives", cfg.negatives, "Negative entities per query")->capture_default_str();
  generate->add_option("--max-samples", cfg.max_samples, "Cap on queries per template (seeded subsample)");

  auto* prompt = app.add_subcommand("prompt", "Build resolver prompts for a dataset");
  add_io(prompt, cfg, "Dataset (JSON lines)");
  add_encoding(prompt, cfg);
  prompt->add_option("--seed", cfg.seed, "Entity shuffle seed")->capture_default_str();

  auto* evaluate = app.add_subcommand("evaluate", "Score a resolver on a dataset");
  add_io(evaluate, cfg, "Dataset (JSON lines)");
  add_encoding(evaluate, cfg);
  evaluate->add_option("--seed", cfg.seed, "Entity shuffle seed")->capture_default_str();
  auto* endpoint = evaluate->add_option("--endpoint", cfg.endpoint,
                                        std::string("Resolver URL; bearer token read from ") + kAuthTokenEnv);
  auto* oracle = evaluate->add_flag("--oracle", cfg.oracle, "Answer from the ground truth (pipeline check)");
  auto* constant = evaluate->add_option("--constant", cfg.constant, "Always answer with this text, e.g. 0");
  endpoint->excludes(oracle)->excludes(constant);
  oracle->excludes(constant);
  evaluate->add_option("--name", cfg.model_name, "Model name for the report row");
  evaluate->add_option("--dataset-name", cfg.dataset_name, "Dataset name for the report");
  evaluate->add_option("--max-tokens", cfg.max_tokens, "max_tokens sent to the endpoint")->capture_default_str();
  evaluate->add_option("--jobs,-j", cfg.jobs, "Concurrent resolver calls")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*encode) return cmd_encode(cfg, out, err);
    if (*generate) return cmd_generate(cfg, out, err);
    if (*prompt) return cmd_prompt(cfg, out, err);
    if (*evaluate) {
      if (cfg.endpoint.empty() && !cfg.oracle && !cfg.constant) {
        err << "evaluate: one of --endpoint, --oracle or --constant is required\n";
        return 2;
      }
      return cmd_evaluate(cfg, out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace screenref::cli
