#pragma once

#include <map>
#include <optional>
#include <vector>

#include "loopsim/bigint.hpp"
#include "loopsim/circuit.hpp"

namespace loopsim::lattice {

/// Height representation of a lattice path: a nondecreasing sequence whose
/// last entry equals the photon total of its rectangle. Entry a is the number
/// of photons in modes 0..a. The empty vector represents the width-0 space
/// (everything measured), which has exactly one path.
using LatticePath = std::vector<int>;

/// heights[a] = sum of steps[0..a]; inverse of steps_from_height.
LatticePath height_from_steps(const std::vector<int>& steps);
std::vector<int> steps_from_height(const LatticePath& heights);

/// Componentwise partial order and lattice operations on equal-width paths.
bool young_leq(const LatticePath& a, const LatticePath& b);
LatticePath meet(const LatticePath& a, const LatticePath& b);
LatticePath join(const LatticePath& a, const LatticePath& b);

/// Interval [bottom, top] in the Young order. A downset is the special case
/// bottom = (0, ..., 0, n).
struct SkewDiagram {
  LatticePath bottom;
  LatticePath top;
};

/// Interval intersection: (meet of tops) over (join of bottoms), or nullopt
/// when that pair is not ordered (empty intersection).
std::optional<SkewDiagram> intersect(const SkewDiagram& a, const SkewDiagram& b);

/// Exact number of paths lambda with bottom <= lambda <= top, by dynamic
/// programming over the diagram cells. The width-0 diagram counts 1.
BigInt count_interval(const SkewDiagram& d);

/// count_interval of the downset below `top`.
BigInt count_downset(const LatticePath& top);

/// Permuted cumulative space: sorted lattice heights plus the permutation
/// wiring lattice modes to active physical slots. Slot c of the window carries
/// the step of lattice mode sigma[c]; the spanned basis states are exactly the
/// sigma-images of the step vectors of paths in the downset of mu.
struct PCS {
  LatticePath mu;          ///< nondecreasing heights
  std::vector<int> sigma;  ///< slot -> lattice index (bijection)

  int width() const { return static_cast<int>(mu.size()); }
  int photon_total() const { return mu.empty() ? 0 : mu.back(); }

  /// v[c] = mu[sigma[c]]: per-slot cumulative maxima before sorting.
  std::vector<int> physical_max_vector() const;
};

/// Single-mode space holding the first active mode's input photons.
PCS initial_pcs(int photons_in_first_mode);

/// Model the first gate touching a new mode. Precondition (enforced by the
/// tracker, which re-aims sigma when needed): the existing partner slot is
/// wired to the top lattice mode, whose height equals the photon total. The
/// top height grows by the new mode's input photons and the new slot is
/// appended at the new top.
PCS couple_new_mode(const PCS& p, int new_mode_input_photons);

/// Reachable-space image of a beamsplitter between two active slots: both
/// slots' maxima become their maximum, then heights are re-sorted (stable, so
/// ties keep slot order) and sigma re-wired accordingly.
PCS evolve_beamsplitter(const PCS& p, int slot_a, int slot_b);

/// Project slot's occupation to x and contract the measured mode away,
/// yielding the space over one fewer mode and x fewer photons. Throws
/// ImpossibleOutcomeError when no path of the downset has step x there.
PCS measure(const PCS& p, int slot, int x);

/// The nonempty diagrams {lambda in downset(mu) : step at lattice mode a = x},
/// partitioned by q = photons strictly left of mode a, for q = 0..q_max.
std::vector<SkewDiagram> project_helpers(const LatticePath& mu, int lattice_mode,
                                         int x);

/// Delete lattice mode a (whose step is forced to x throughout `d`) from both
/// boundary paths; an order isomorphism, so path counts are preserved.
SkewDiagram contract_diagram(const SkewDiagram& d, int lattice_mode, int x);
LatticePath contract_path(const LatticePath& path, int lattice_mode, int x);

/// Exact path-count marginals for measuring `slot`: x -> |{lambda in
/// downset(mu) : step x at sigma[slot]}|, via one prefix/suffix sweep.
/// Only feasible occupations (count > 0) appear.
std::map<int, BigInt> marginal_counts(const PCS& p, int slot);

/// Walks gate schedules on the lattice alone (no amplitudes, no angles).
/// Maintains the active window of global modes next to the PCS. Construction
/// rejects architectures with first loop length != 1 or loss > 0.
class Tracker {
 public:
  explicit Tracker(const circuit::LoopArchitecture& arch);

  const PCS& pcs() const { return pcs_; }
  const std::vector<int>& window() const { return window_; }

  bool is_active(int global_mode) const;
  int slot_of(int global_mode) const;  ///< throws if not active

  /// Current |downset(mu)|.
  BigInt count() const;

  /// Gate between global modes (couples mode_b when it is new).
  void apply_gate(int global_a, int global_b);

  /// Forced measurement outcome; throws ImpossibleOutcomeError if infeasible.
  /// A mode never touched by any gate is forced to its input occupation.
  void apply_measure(int global_mode, int outcome);

  /// Path-count marginals for measuring a global mode (a never-activated mode
  /// yields the single forced entry {input occupation: 1}).
  std::map<int, BigInt> measure_marginals(int global_mode) const;

  /// Apply every gate of the full circuit in order, measuring nothing.
  void evolve_all_gates();

 private:
  circuit::LoopArchitecture arch_;
  PCS pcs_;
  std::vector<int> window_;
};

}  // namespace loopsim::lattice
