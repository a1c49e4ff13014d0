#pragma once

#include <complex>
#include <map>
#include <vector>

#include "loopsim/bigint.hpp"
#include "loopsim/rng.hpp"

namespace loopsim::fock {

/// Occupation-number basis vector over the currently active mode window.
/// Keys store only the window; global mode identity is tracked by the caller.
using FockBasisState = std::vector<int>;

/// Beamsplitter between two mode slots of a state. `mode_a` plays the "a" role
/// of the rotation
///     a^dag -> cos(theta) a^dag - sin(theta) b^dag
///     b^dag -> sin(theta) a^dag + cos(theta) b^dag
/// which matters because the rotation is not symmetric under swapping the two
/// modes. Slots need not be ordered (active windows can be permuted relative
/// to global mode order when the first loop is longer than 1).
struct BeamsplitterGate {
  int mode_a = 0;
  int mode_b = 0;
  double theta = 0.0;
};

/// Sparse wavefunction: basis state -> complex amplitude. An ordered map keeps
/// iteration deterministic, which the byte-identical-rerun guarantee relies on.
struct SparseState {
  int mode_count = 0;
  std::map<FockBasisState, std::complex<double>> terms;

  std::size_t support_size() const { return terms.size(); }
};

/// Fock-space dimension binomial(m - 1 + n, n) for m modes and n photons.
BigInt fock_dimension(int mode_count, int photon_count);

/// Transition amplitude <N_a, N_b| B(theta) |n_a, n_b> of a single
/// beamsplitter, as a closed-form sum. Requires n_a + n_b == N_a + N_b.
/// Validated against a creation-operator expansion oracle in the test suite.
std::complex<double> bs_amplitude(int n_a, int n_b, int cap_n_a, int cap_n_b,
                                  double theta);

/// |occupations> with amplitude 1.
SparseState product_state(const FockBasisState& occupations);

/// Append one mode with a definite occupation (vacuum by default) at the end
/// of the window.
SparseState append_mode(const SparseState& state, int occupation = 0);

/// Unitary image of `state` under the beamsplitter. Norm and total photon
/// number are preserved; exact-zero contributions are not stored.
SparseState apply_beamsplitter(const SparseState& state, const BeamsplitterGate& gate);

/// Remove terms with |amplitude| < threshold and renormalize. Never called by
/// default: pruning would break the support-versus-lattice comparisons.
void prune(SparseState& state, double threshold);

/// Rescale to unit norm.
void normalize(SparseState& state);

/// p(x) = sum of |amplitude|^2 over keys with occupation x at `mode`,
/// in ascending occupation order.
std::map<int, double> measurement_marginals(const SparseState& state, int mode);

/// Project onto occupation `outcome` at `mode`, delete the measured component
/// from every key (mode_count shrinks by one) and renormalize.
/// Throws ImpossibleOutcomeError when the outcome has zero probability.
SparseState collapse_and_drop(const SparseState& state, int mode, int outcome);

struct LossResult {
  SparseState state;     ///< post-loss state (same mode count as the input)
  int photons_lost = 0;  ///< photons absorbed by the environment
  double probability = 0.0;  ///< marginal probability of this loss branch
};

/// Photon loss of probability `gamma` at `mode`, modeled as a beamsplitter of
/// transmission cos^2(theta) = 1 - gamma into a temporary vacuum environment
/// mode that is then measured (sampled with `gen`) and dropped.
LossResult apply_loss(const SparseState& state, int mode, double gamma,
                      rng::Xoshiro256& gen);

}  // namespace loopsim::fock
