#include "loopsim/cli.hpp"

#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "loopsim/complexity.hpp"
#include "loopsim/errors.hpp"
#include "loopsim/lattice.hpp"
#include "loopsim/parallel.hpp"
#include "loopsim/progressive.hpp"
#include "loopsim/rng.hpp"

namespace loopsim::cli {

namespace {

using nlohmann::json;

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + output_path);
  out << text;
}

std::string joined(const std::vector<int>& values) {
  std::string text;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) text += ' ';
    text += std::to_string(values[i]);
  }
  return text;
}

json stats_json(const complexity::ComplexityStats& stats) {
  json doc;
  doc["mean"] = fixed_point_decimal(stats.mean.get_num(), stats.mean.get_den(), 6);
  doc["p25"] = stats.p25.get_str();
  doc["p50"] = stats.p50.get_str();
  doc["p75"] = stats.p75.get_str();
  doc["p95"] = stats.p95.get_str();
  return doc;
}

std::vector<BigInt> heuristic_peaks(const circuit::LoopArchitecture& arch,
                                    std::size_t samples, std::uint64_t seed,
                                    int workers) {
  std::vector<BigInt> peaks(samples);
  parallel_indices(samples, workers, [&](std::size_t i) {
    auto gen = rng::derive_stream(seed, i, rng::kTagHeuristic);
    peaks[i] = complexity::heuristic_sample(arch, gen).trace.peak;
  });
  return peaks;
}

std::vector<BigInt> true_peaks(const circuit::LoopArchitecture& arch,
                               std::size_t samples, std::uint64_t seed, int workers) {
  const auto gate_count = static_cast<std::size_t>(circuit::total_gate_count(arch));
  std::vector<BigInt> peaks(samples);
  parallel_indices(samples, workers, [&](std::size_t i) {
    // Each run gets freshly drawn angles so the statistics average over the
    // angle ensemble, then one strong-simulation sample at those angles.
    circuit::LoopArchitecture drawn = arch;
    drawn.theta_seed.reset();
    auto angle_gen = rng::derive_stream(seed, i, rng::kTagValidateAngles);
    std::vector<double> thetas(gate_count);
    for (auto& theta : thetas) theta = 2.0 * std::numbers::pi * angle_gen.uniform01();
    drawn.thetas = std::move(thetas);
    auto sample_gen = rng::derive_stream(seed, i, rng::kTagSample);
    const auto record = progressive::sample_once(drawn, sample_gen);
    peaks[i] = complexity::memory_of_outcome(arch, record.outcome).peak;
  });
  return peaks;
}

std::string scalar_csv(const json& value) {
  return value.is_string() ? value.get<std::string>() : value.dump();
}

std::string keyed_csv(const json& doc, const std::vector<std::string>& keys) {
  std::string text = "stat,value\n";
  for (const auto& key : keys) text += key + "," + scalar_csv(doc.at(key)) + "\n";
  return text;
}

}  // namespace

json estimate_memory_document(const circuit::LoopArchitecture& arch,
                              std::size_t samples, std::uint64_t seed, int workers,
                              std::vector<BigInt>* raw_peaks) {
  if (samples < 1) throw ConfigError("estimate-memory: need at least one sample");
  {
    // Validate the architecture (first loop length, loss, input) up front
    // rather than from inside a worker thread.
    const lattice::Tracker probe(arch);
  }
  auto peaks = heuristic_peaks(arch, samples, seed, workers);
  const auto stats = complexity::batch_stats(peaks);
  if (raw_peaks) *raw_peaks = std::move(peaks);
  json doc = stats_json(stats);
  doc["N"] = samples;
  doc["R"] = circuit::relevant_modes(arch.loop_lengths);
  return doc;
}

json count_space_document(const circuit::LoopArchitecture& arch,
                          const std::optional<std::vector<int>>& outcome) {
  if (outcome) {
    const auto trace = complexity::memory_of_outcome(arch, *outcome);
    json doc;
    json steps = json::array();
    for (const auto& count : trace.per_step_counts) steps.push_back(count.get_str());
    doc["per_step_counts"] = std::move(steps);
    doc["peak"] = trace.peak.get_str();
    return doc;
  }
  lattice::Tracker tracker(arch);
  tracker.evolve_all_gates();
  long long photons = 0;
  for (int occ : arch.input) photons += occ;
  json doc;
  doc["count"] = tracker.count().get_str();
  doc["mu"] = tracker.pcs().mu;
  doc["sigma"] = tracker.pcs().sigma;
  doc["max_vector"] = tracker.pcs().physical_max_vector();
  doc["m"] = arch.mode_count;
  doc["photons"] = photons;
  return doc;
}

json bounds_document(const circuit::LoopArchitecture& arch) {
  const auto bounds = complexity::theoretical_bounds(arch.loop_lengths, arch.mode_count);
  json doc;
  doc["R"] = bounds.relevant_modes;
  if (bounds.runtime) {
    json runtime;
    runtime["expression"] = bounds.runtime->expression;
    runtime["base"] = bounds.runtime->base;
    runtime["ell"] = bounds.runtime->ell;
    runtime["Lambda"] = bounds.runtime->levels;
    runtime["exponent"] = bounds.runtime->exponent.get_str();
    runtime["polynomial_factor"] = bounds.runtime->polynomial_factor.get_str();
    doc["runtime_class"] = std::move(runtime);
  } else {
    doc["runtime_class"] = nullptr;
  }
  return doc;
}

json validate_document(const circuit::LoopArchitecture& arch, std::size_t samples,
                       std::uint64_t seed, int workers, const BigInt& cap) {
  if (samples < 1) throw ConfigError("validate: need at least one sample");
  if (arch.loss > 0.0)
    throw UnsupportedArchitectureError("validate: loss is not modeled by the tracker");
  if (static_cast<int>(arch.input.size()) != arch.mode_count)
    throw ConfigError("validate: input must list one occupation per mode");
  const long long r = circuit::relevant_modes(arch.loop_lengths);
  long long photons = 0;
  for (int occ : arch.input) photons += occ;
  // A progressive window never holds more than R unmeasured modes, so the
  // dense dimension binom(R-1+n, n) bounds the strong-simulation support.
  const BigInt dimension = binomial(r - 1 + photons, photons);
  if (dimension > cap)
    throw ConfigError("validate: true sampling would track up to " + dimension.get_str() +
                      " basis states (window bound " + std::to_string(r) + " modes, " +
                      std::to_string(photons) + " photons), above the cap " +
                      cap.get_str() + "; raise --cap to proceed anyway");

  const auto true_stats = complexity::batch_stats(true_peaks(arch, samples, seed, workers));
  const auto heuristic_stats =
      complexity::batch_stats(heuristic_peaks(arch, samples, seed, workers));

  const auto ratio = [](const BigInt& heuristic, const BigInt& truth) {
    BigRat r_(heuristic, truth);
    r_.canonicalize();
    return r_.get_d();
  };
  json ratios;
  ratios["mean"] = static_cast<BigRat>(heuristic_stats.mean / true_stats.mean).get_d();
  ratios["p25"] = ratio(heuristic_stats.p25, true_stats.p25);
  ratios["p50"] = ratio(heuristic_stats.p50, true_stats.p50);
  ratios["p75"] = ratio(heuristic_stats.p75, true_stats.p75);
  ratios["p95"] = ratio(heuristic_stats.p95, true_stats.p95);

  json doc;
  doc["true"] = stats_json(true_stats);
  doc["heuristic"] = stats_json(heuristic_stats);
  doc["ratios"] = std::move(ratios);
  doc["N"] = samples;
  doc["R"] = r;
  doc["cap"] = cap.get_str();
  return doc;
}

namespace {

struct CommandOptions {
  std::string config;
  std::string format = "json";
  std::string output;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  int workers = 1;
};

void add_common(CLI::App* sub, CommandOptions& opts, bool stochastic,
                std::size_t default_samples) {
  sub->add_option("-c,--config", opts.config, "architecture JSON file")->required();
  sub->add_option("--format", opts.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--output", opts.output, "write results to a file instead of stdout");
  if (stochastic) {
    opts.samples = default_samples;
    sub->add_option("-n,--samples", opts.samples, "number of samples")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", opts.seed, "master RNG seed (required)")->required();
    sub->add_option("--workers", opts.workers, "worker thread count")
        ->check(CLI::PositiveNumber);
  }
}

int fail(int code, const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << "\n";
  return code;
}

void run_sample(const CommandOptions& opts, std::size_t max_support) {
  const auto arch = circuit::parse_architecture_file(opts.config);
  if (static_cast<int>(arch.input.size()) != arch.mode_count)
    throw ConfigError("sample: input must list one occupation per mode");
  circuit::resolve_thetas(arch);  // sampling is meaningless without angles
  const auto records =
      progressive::run_batch(arch, opts.samples, opts.seed, opts.workers, max_support);
  std::string text;
  if (opts.format == "json") {
    for (const auto& record : records) {
      json line;
      line["outcome"] = record.outcome;
      line["peak_support"] = record.peak_support;
      line["chained_probability"] = record.chained_probability;
      line["lost"] = record.photons_lost;
      text += line.dump();
      text += '\n';
    }
  } else {
    text = "outcome,peak_support,chained_probability,lost\n";
    for (const auto& record : records) {
      text += '"' + joined(record.outcome) + "\"," + std::to_string(record.peak_support) +
              ',' + json(record.chained_probability).dump() + ',' +
              std::to_string(record.photons_lost) + '\n';
    }
  }
  emit(text, opts.output);
}

void run_estimate_memory(const CommandOptions& opts, const std::string& raw_path) {
  const auto arch = circuit::parse_architecture_file(opts.config);
  std::vector<BigInt> peaks;
  const json doc = estimate_memory_document(arch, opts.samples, opts.seed, opts.workers,
                                            raw_path.empty() ? nullptr : &peaks);
  if (!raw_path.empty()) {
    std::ofstream raw(raw_path, std::ios::binary);
    if (!raw) throw ConfigError("cannot open raw-samples file: " + raw_path);
    for (const auto& peak : peaks) raw << peak.get_str() << "\n";
  }
  if (opts.format == "json")
    emit(doc.dump() + "\n", opts.output);
  else
    emit(keyed_csv(doc, {"mean", "p25", "p50", "p75", "p95", "N", "R"}), opts.output);
}

void run_validate(const CommandOptions& opts, const std::string& cap_text) {
  const auto arch = circuit::parse_architecture_file(opts.config);
  BigInt cap;
  try {
    cap = BigInt(cap_text);
  } catch (const std::invalid_argument&) {
    throw ConfigError("--cap must be a decimal integer");
  }
  if (cap < 1) throw ConfigError("--cap must be >= 1");
  const json doc = validate_document(arch, opts.samples, opts.seed, opts.workers, cap);
  if (opts.format == "json") {
    emit(doc.dump() + "\n", opts.output);
    return;
  }
  std::string text = "stat,true,heuristic,ratio\n";
  for (const std::string key : {"mean", "p25", "p50", "p75", "p95"})
    text += key + "," + scalar_csv(doc["true"].at(key)) + "," +
            scalar_csv(doc["heuristic"].at(key)) + "," + doc["ratios"].at(key).dump() + "\n";
  text += "N," + doc["N"].dump() + ",,\n";
  text += "R," + doc["R"].dump() + ",,\n";
  text += "cap," + scalar_csv(doc["cap"]) + ",,\n";
  emit(text, opts.output);
}

void run_count_space(const CommandOptions& opts,
                     const std::optional<std::vector<int>>& outcome) {
  const auto arch = circuit::parse_architecture_file(opts.config);
  const json doc = count_space_document(arch, outcome);
  if (opts.format == "json") {
    emit(doc.dump() + "\n", opts.output);
    return;
  }
  std::string text;
  if (outcome) {
    text = "step,count\n";
    const auto& steps = doc["per_step_counts"];
    for (std::size_t i = 0; i < steps.size(); ++i)
      text += std::to_string(i) + "," + steps[i].get<std::string>() + "\n";
    text += "peak," + doc["peak"].get<std::string>() + "\n";
  } else {
    text = "stat,value\n";
    text += "count," + doc["count"].get<std::string>() + "\n";
    text += "mu,\"" + joined(doc["mu"].get<std::vector<int>>()) + "\"\n";
    text += "sigma,\"" + joined(doc["sigma"].get<std::vector<int>>()) + "\"\n";
    text += "max_vector,\"" + joined(doc["max_vector"].get<std::vector<int>>()) + "\"\n";
    text += "m," + doc["m"].dump() + "\n";
    text += "photons," + doc["photons"].dump() + "\n";
  }
  emit(text, opts.output);
}

void run_bounds(const CommandOptions& opts) {
  const auto arch = circuit::parse_architecture_file(opts.config);
  const json doc = bounds_document(arch);
  if (opts.format == "json") {
    emit(doc.dump() + "\n", opts.output);
    return;
  }
  std::string text = "stat,value\n";
  text += "R," + doc["R"].dump() + "\n";
  if (doc["runtime_class"].is_null()) {
    text += "runtime_class,none\n";
  } else {
    const auto& runtime = doc["runtime_class"];
    text += "expression," + runtime["expression"].get<std::string>() + "\n";
    text += "base," + runtime["base"].dump() + "\n";
    text += "ell," + runtime["ell"].dump() + "\n";
    text += "Lambda," + runtime["Lambda"].dump() + "\n";
    text += "exponent," + runtime["exponent"].get<std::string>() + "\n";
    text += "polynomial_factor," + runtime["polynomial_factor"].get<std::string>() + "\n";
  }
  emit(text, opts.output);
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Progressive simulator and memory-complexity tools for loop-based "
               "single-photon time-bin interferometers"};
  app.require_subcommand(1);

  CommandOptions sample_opts;
  std::size_t sample_max_support = 0;
  auto* sample = app.add_subcommand(
      "sample", "draw measurement samples by progressive strong simulation");
  add_common(sample, sample_opts, true, 1);
  sample->add_option("--max-support", sample_max_support,
                     "abort (exit 5) when the live support exceeds this size");

  CommandOptions estimate_opts;
  std::string raw_path;
  auto* estimate = app.add_subcommand(
      "estimate-memory", "sample peak lattice memory over uniform heuristic outcomes");
  add_common(estimate, estimate_opts, true, 1000);
  estimate->add_option("--raw-samples", raw_path,
                       "also write one raw peak count per line to this file");

  CommandOptions validate_opts;
  std::string cap_text = "1000000";
  auto* validate = app.add_subcommand(
      "validate", "compare true (strong-simulation) and heuristic memory statistics");
  add_common(validate, validate_opts, true, 500);
  validate->add_option("--cap", cap_text,
                       "refuse true sampling when the dense window dimension exceeds this");

  CommandOptions count_opts;
  std::vector<int> outcome_values;
  auto* count_space = app.add_subcommand(
      "count-space", "exact reachable-space counts from the lattice tracker");
  add_common(count_space, count_opts, false, 0);
  auto* outcome_option =
      count_space->add_option("--outcome", outcome_values,
                              "comma-separated occupations; reports the per-event "
                              "counts of the progressive replay instead")
          ->delimiter(',');

  CommandOptions bounds_opts;
  auto* bounds = app.add_subcommand(
      "bounds", "architecture bounds and closed-form runtime class");
  add_common(bounds, bounds_opts, false, 0);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sample->parsed()) {
      run_sample(sample_opts, sample_max_support);
    } else if (estimate->parsed()) {
      run_estimate_memory(estimate_opts, raw_path);
    } else if (validate->parsed()) {
      run_validate(validate_opts, cap_text);
    } else if (count_space->parsed()) {
      run_count_space(count_opts, outcome_option->count() > 0
                                      ? std::optional<std::vector<int>>(outcome_values)
                                      : std::nullopt);
    } else if (bounds->parsed()) {
      run_bounds(bounds_opts);
    }
    return 0;
  } catch (const ConfigError& e) {
    return fail(2, "config", e.what());
  } catch (const UnsupportedArchitectureError& e) {
    return fail(3, "unsupported-architecture", e.what());
  } catch (const UnsupportedCouplingError& e) {
    return fail(3, "unsupported-coupling", e.what());
  } catch (const ImpossibleOutcomeError& e) {
    return fail(4, "impossible-outcome", e.what());
  } catch (const SupportLimitError& e) {
    return fail(5, "support-limit", e.what());
  } catch (const Error& e) {
    return fail(1, "error", e.what());
  } catch (const std::exception& e) {
    return fail(1, "internal", e.what());
  }
}

}  // namespace loopsim::cli
