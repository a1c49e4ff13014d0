#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace loopsim::circuit {

/// Loop-based time-bin interferometer: a cascade of delay loops of lengths
/// loop_lengths[0..], each contributing beamsplitters B(a, a+len) for
/// a = 0 .. m-1-len in time order, loops applied in sequence.
struct LoopArchitecture {
  int mode_count = 0;                          ///< m
  std::vector<int> loop_lengths;               ///< one entry per loop, each >= 1
  std::vector<int> input;                      ///< photons per mode (size m)
  std::optional<std::vector<double>> thetas;   ///< explicit angles, circuit order
  std::optional<std::uint64_t> theta_seed;     ///< or a seeded-random draw
  double loss = 0.0;                           ///< per-loop-pass loss probability
};

/// A beamsplitter position in global mode coordinates (mode_a < mode_b).
struct GatePosition {
  int mode_a = 0;
  int mode_b = 0;

  bool operator==(const GatePosition&) const = default;
};

/// Number of gates the architecture expands to: sum over loops of max(0, m - len).
long long total_gate_count(const LoopArchitecture& arch);

/// Ordered gate list: loops in sequence, each loop's gates in time order.
/// The loops are preloaded with the first time bins, so no vacuum modes are
/// prepended and loop `len` couples modes (a, a+len).
std::vector<GatePosition> expand_circuit(const LoopArchitecture& arch);

/// Upper bound R = 1 + sum(loop_lengths) on the number of unmeasured modes any
/// progressive component can touch.
long long relevant_modes(const std::vector<int>& loop_lengths);

/// One angle per expanded gate: either the explicit list (validated for
/// length) or uniform draws from [0, 2*pi) seeded by theta_seed, in gate
/// order. Throws ConfigError if the architecture specifies neither.
std::vector<double> resolve_thetas(const LoopArchitecture& arch);

/// Like resolve_thetas, but yields all-zero angles when the architecture has
/// no angle specification (for angle-free consumers such as the lattice
/// tracker, whose evolution does not depend on angles).
std::vector<double> resolve_thetas_or_zero(const LoopArchitecture& arch);

enum class EventKind { kGate, kMeasure, kLoss };

/// One event of a progressive schedule. Gates carry both global modes and an
/// angle; Measure and Loss carry the affected mode in `mode_a`.
struct ScheduleEvent {
  EventKind kind = EventKind::kGate;
  int mode_a = -1;
  int mode_b = -1;
  double theta = 0.0;
  int component = -1;  ///< progressive component index this event belongs to
};

struct GateSchedule {
  int mode_count = 0;
  std::vector<ScheduleEvent> events;
};

/// Progressive (causal-cone) schedule: the circuit's gates regrouped into
/// components P_0, P_1, ... with Measure(a) directly after P_a. A gate's
/// component is the minimum output mode whose causal cone contains it,
/// computed by a reverse pass that labels each wire with the minimum output
/// index it can still reach. Within a component, circuit order is preserved,
/// so gates sharing a wire keep their relative order globally. When the
/// architecture configures loss > 0, a Loss event is scheduled after the last
/// gate of each loop touching each mode.
GateSchedule progressive_schedule(const LoopArchitecture& arch);

/// Parse an architecture document:
///   {"m": int, "loops": [int, ...],
///    "input": [int, ...] | "alternating",       (optional at parse time)
///    "thetas": [num, ...] | {"random_seed": int},(optional at parse time)
///    "loss": num}                                (optional, default 0)
/// "alternating" expands to |1,0,1,0,...> with ceil(m/2) photons. Commands
/// validate the presence of the fields they actually need.
LoopArchitecture parse_architecture(const std::string& json_text);
LoopArchitecture parse_architecture_file(const std::string& path);

}  // namespace loopsim::circuit
