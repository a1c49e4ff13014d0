#include "loopsim/circuit.hpp"

#include <algorithm>
#include <fstream>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "loopsim/errors.hpp"
#include "loopsim/rng.hpp"

namespace loopsim::circuit {

namespace {

void validate_structure(const LoopArchitecture& arch, const char* op) {
  const std::string prefix = std::string(op) + ": ";
  if (arch.mode_count < 1) throw ConfigError(prefix + "mode count must be >= 1");
  if (arch.loop_lengths.empty()) throw ConfigError(prefix + "at least one loop is required");
  for (int len : arch.loop_lengths)
    if (len < 1) throw ConfigError(prefix + "loop lengths must be >= 1");
  if (!arch.input.empty()) {
    if (static_cast<int>(arch.input.size()) != arch.mode_count)
      throw ConfigError(prefix + "input must list one occupation per mode");
    for (int occ : arch.input)
      if (occ < 0) throw ConfigError(prefix + "input occupations must be >= 0");
  }
  if (!(arch.loss >= 0.0 && arch.loss <= 1.0))
    throw ConfigError(prefix + "loss probability must lie in [0, 1]");
}

}  // namespace

long long total_gate_count(const LoopArchitecture& arch) {
  long long total = 0;
  for (int len : arch.loop_lengths)
    total += std::max(0, arch.mode_count - len);
  return total;
}

std::vector<GatePosition> expand_circuit(const LoopArchitecture& arch) {
  validate_structure(arch, "expand_circuit");
  std::vector<GatePosition> gates;
  gates.reserve(static_cast<std::size_t>(std::max<long long>(0, total_gate_count(arch))));
  for (int len : arch.loop_lengths)
    for (int a = 0; a + len <= arch.mode_count - 1; ++a)
      gates.push_back({a, a + len});
  return gates;
}

long long relevant_modes(const std::vector<int>& loop_lengths) {
  if (loop_lengths.empty()) throw DomainError("relevant_modes: at least one loop is required");
  long long r = 1;
  for (int len : loop_lengths) {
    if (len < 1) throw DomainError("relevant_modes: loop lengths must be >= 1");
    r += len;
  }
  return r;
}

std::vector<double> resolve_thetas(const LoopArchitecture& arch) {
  const long long count = total_gate_count(arch);
  if (arch.thetas) {
    if (static_cast<long long>(arch.thetas->size()) != count)
      throw ConfigError("explicit angle list must have one entry per gate (" +
                        std::to_string(count) + " needed, " +
                        std::to_string(arch.thetas->size()) + " given)");
    return *arch.thetas;
  }
  if (arch.theta_seed) {
    auto gen = rng::derive_stream(*arch.theta_seed, 0, rng::kTagAngles);
    std::vector<double> thetas(static_cast<std::size_t>(count));
    for (auto& theta : thetas) theta = 2.0 * std::numbers::pi * gen.uniform01();
    return thetas;
  }
  throw ConfigError("architecture specifies no beamsplitter angles "
                    "(need \"thetas\" as a list or {\"random_seed\": ...})");
}

std::vector<double> resolve_thetas_or_zero(const LoopArchitecture& arch) {
  if (!arch.thetas && !arch.theta_seed)
    return std::vector<double>(static_cast<std::size_t>(total_gate_count(arch)), 0.0);
  return resolve_thetas(arch);
}

GateSchedule progressive_schedule(const LoopArchitecture& arch) {
  validate_structure(arch, "progressive_schedule");
  const auto thetas = resolve_thetas_or_zero(arch);
  const int m = arch.mode_count;

  // Circuit-order event list; with loss configured, a Loss event follows the
  // last gate of each loop that touches a mode (B(a, a+len) is the last gate
  // of its loop on wire a, and also on wire a+len when no later gate of the
  // same loop reaches it).
  std::vector<ScheduleEvent> ordered;
  std::size_t gate_index = 0;
  for (int len : arch.loop_lengths) {
    for (int a = 0; a + len <= m - 1; ++a) {
      ordered.push_back({EventKind::kGate, a, a + len, thetas[gate_index++], -1});
      if (arch.loss > 0.0) {
        ordered.push_back({EventKind::kLoss, a, -1, 0.0, -1});
        if (a + len > m - 1 - len)
          ordered.push_back({EventKind::kLoss, a + len, -1, 0.0, -1});
      }
    }
  }

  // Reverse pass: label[w] is the minimum output index reachable from wire w
  // through the remaining (later) gates; an event joins the component of the
  // minimum label over its wires at that point.
  std::vector<int> label(static_cast<std::size_t>(m));
  std::iota(label.begin(), label.end(), 0);
  for (auto it = ordered.rbegin(); it != ordered.rend(); ++it) {
    if (it->kind == EventKind::kGate) {
      const int comp = std::min(label[it->mode_a], label[it->mode_b]);
      label[it->mode_a] = comp;
      label[it->mode_b] = comp;
      it->component = comp;
    } else {
      it->component = label[it->mode_a];
    }
  }

  // Components in output order, circuit order inside each, with the
  // measurement of mode a directly after component a.
  GateSchedule schedule;
  schedule.mode_count = m;
  schedule.events.reserve(ordered.size() + static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) {
    for (const auto& event : ordered)
      if (event.component == a) schedule.events.push_back(event);
    schedule.events.push_back({EventKind::kMeasure, a, -1, 0.0, a});
  }
  return schedule;
}

LoopArchitecture parse_architecture(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("architecture document must be a JSON object");
  static const std::set<std::string> known = {"m", "loops", "input", "thetas", "loss"};
  for (const auto& [key, value] : doc.items())
    if (!known.count(key)) throw ConfigError("unknown architecture key: \"" + key + "\"");

  LoopArchitecture arch;
  if (!doc.contains("m") || !doc["m"].is_number_integer())
    throw ConfigError("\"m\" (mode count) must be an integer");
  arch.mode_count = doc["m"].get<int>();

  if (!doc.contains("loops") || !doc["loops"].is_array())
    throw ConfigError("\"loops\" must be an array of integers");
  for (const auto& value : doc["loops"]) {
    if (!value.is_number_integer())
      throw ConfigError("\"loops\" entries must be integers");
    arch.loop_lengths.push_back(value.get<int>());
  }

  if (doc.contains("input")) {
    const auto& input = doc["input"];
    if (input.is_string()) {
      if (input.get<std::string>() != "alternating")
        throw ConfigError("the only symbolic input is \"alternating\"");
      if (arch.mode_count < 1) throw ConfigError("\"alternating\" input needs m >= 1");
      arch.input.assign(static_cast<std::size_t>(arch.mode_count), 0);
      for (int i = 0; i < arch.mode_count; i += 2) arch.input[i] = 1;
    } else if (input.is_array()) {
      for (const auto& value : input) {
        if (!value.is_number_integer())
          throw ConfigError("\"input\" entries must be integers");
        arch.input.push_back(value.get<int>());
      }
    } else {
      throw ConfigError("\"input\" must be an array of integers or \"alternating\"");
    }
  }

  if (doc.contains("thetas")) {
    const auto& thetas = doc["thetas"];
    if (thetas.is_array()) {
      std::vector<double> values;
      for (const auto& value : thetas) {
        if (!value.is_number())
          throw ConfigError("\"thetas\" entries must be numbers");
        values.push_back(value.get<double>());
      }
      arch.thetas = std::move(values);
    } else if (thetas.is_object()) {
      if (thetas.size() != 1 || !thetas.contains("random_seed") ||
          !thetas["random_seed"].is_number_integer())
        throw ConfigError("\"thetas\" object form must be {\"random_seed\": integer}");
      arch.theta_seed = thetas["random_seed"].get<std::uint64_t>();
    } else {
      throw ConfigError("\"thetas\" must be an array of angles or {\"random_seed\": ...}");
    }
  }

  if (doc.contains("loss")) {
    if (!doc["loss"].is_number()) throw ConfigError("\"loss\" must be a number");
    arch.loss = doc["loss"].get<double>();
  }

  validate_structure(arch, "parse_architecture");
  return arch;
}

LoopArchitecture parse_architecture_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_architecture(buffer.str());
}

}  // namespace loopsim::circuit
