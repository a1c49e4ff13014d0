#include "loopsim/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "loopsim/errors.hpp"

namespace loopsim::fock {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void check_mode(const SparseState& state, int mode, const char* op) {
  if (mode < 0 || mode >= state.mode_count)
    throw ContractViolationError(std::string(op) + ": mode index out of range");
}

bool is_exact_zero(const std::complex<double>& amplitude) {
  return amplitude.real() == 0.0 && amplitude.imag() == 0.0;
}

}  // namespace

BigInt fock_dimension(int mode_count, int photon_count) {
  if (mode_count < 1 || photon_count < 0)
    throw DomainError("fock_dimension: need mode_count >= 1 and photon_count >= 0");
  return binomial(static_cast<long>(mode_count) - 1 + photon_count, photon_count);
}

std::complex<double> bs_amplitude(int n_a, int n_b, int cap_n_a, int cap_n_b,
                                  double theta) {
  if (n_a < 0 || n_b < 0 || cap_n_a < 0 || cap_n_b < 0)
    throw ContractViolationError("bs_amplitude: photon numbers must be >= 0");
  if (n_a + n_b != cap_n_a + cap_n_b)
    throw ContractViolationError("bs_amplitude: photon number must be conserved");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const int k_lo = std::max(0, cap_n_a - n_b);
  const int k_hi = std::min(n_a, cap_n_a);
  double sum = 0.0;
  for (int k = k_lo; k <= k_hi; ++k) {
    const int l = cap_n_a - k;
    double term = std::pow(c, n_b - l + k) * std::pow(s, n_a - k + l) /
                  (factorial(k) * factorial(n_a - k) * factorial(l) * factorial(n_b - l));
    if ((n_a - k) % 2 != 0) term = -term;
    sum += term;
  }
  const double norm =
      std::sqrt(factorial(n_a) * factorial(n_b) * factorial(cap_n_a) * factorial(cap_n_b));
  return {norm * sum, 0.0};
}

SparseState product_state(const FockBasisState& occupations) {
  if (occupations.empty()) throw DomainError("product_state: need at least one mode");
  for (int occ : occupations)
    if (occ < 0) throw DomainError("product_state: occupations must be >= 0");
  SparseState state;
  state.mode_count = static_cast<int>(occupations.size());
  state.terms[occupations] = {1.0, 0.0};
  return state;
}

SparseState append_mode(const SparseState& state, int occupation) {
  if (occupation < 0) throw DomainError("append_mode: occupation must be >= 0");
  SparseState out;
  out.mode_count = state.mode_count + 1;
  for (const auto& [basis, amplitude] : state.terms) {
    FockBasisState key = basis;
    key.push_back(occupation);
    out.terms.emplace(std::move(key), amplitude);
  }
  return out;
}

SparseState apply_beamsplitter(const SparseState& state, const BeamsplitterGate& gate) {
  check_mode(state, gate.mode_a, "apply_beamsplitter");
  check_mode(state, gate.mode_b, "apply_beamsplitter");
  if (gate.mode_a == gate.mode_b)
    throw ContractViolationError("apply_beamsplitter: the two modes must differ");
  SparseState out;
  out.mode_count = state.mode_count;
  FockBasisState key;
  for (const auto& [basis, amplitude] : state.terms) {
    const int occ_a = basis[gate.mode_a];
    const int occ_b = basis[gate.mode_b];
    const int pair_total = occ_a + occ_b;
    key = basis;
    for (int new_a = 0; new_a <= pair_total; ++new_a) {
      const std::complex<double> t =
          bs_amplitude(occ_a, occ_b, new_a, pair_total - new_a, gate.theta);
      if (is_exact_zero(t)) continue;
      key[gate.mode_a] = new_a;
      key[gate.mode_b] = pair_total - new_a;
      out.terms[key] += amplitude * t;
    }
  }
  // Destructive interference can cancel a coefficient exactly; such keys are
  // not part of the support.
  for (auto it = out.terms.begin(); it != out.terms.end();)
    it = is_exact_zero(it->second) ? out.terms.erase(it) : std::next(it);
  return out;
}

void prune(SparseState& state, double threshold) {
  if (threshold < 0.0) throw DomainError("prune: threshold must be >= 0");
  for (auto it = state.terms.begin(); it != state.terms.end();)
    it = std::abs(it->second) < threshold ? state.terms.erase(it) : std::next(it);
  normalize(state);
}

void normalize(SparseState& state) {
  double norm_sq = 0.0;
  for (const auto& [basis, amplitude] : state.terms) norm_sq += std::norm(amplitude);
  if (norm_sq == 0.0) throw ContractViolationError("normalize: state has zero norm");
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (auto& [basis, amplitude] : state.terms) amplitude *= inv;
}

std::map<int, double> measurement_marginals(const SparseState& state, int mode) {
  check_mode(state, mode, "measurement_marginals");
  std::map<int, double> marginals;
  for (const auto& [basis, amplitude] : state.terms)
    marginals[basis[mode]] += std::norm(amplitude);
  return marginals;
}

SparseState collapse_and_drop(const SparseState& state, int mode, int outcome) {
  check_mode(state, mode, "collapse_and_drop");
  SparseState out;
  out.mode_count = state.mode_count - 1;
  for (const auto& [basis, amplitude] : state.terms) {
    if (basis[mode] != outcome) continue;
    FockBasisState key;
    key.reserve(basis.size() - 1);
    key.insert(key.end(), basis.begin(), basis.begin() + mode);
    key.insert(key.end(), basis.begin() + mode + 1, basis.end());
    out.terms.emplace(std::move(key), amplitude);
  }
  if (out.terms.empty())
    throw ImpossibleOutcomeError("collapse_and_drop: outcome " + std::to_string(outcome) +
                                 " has zero probability at mode " + std::to_string(mode));
  normalize(out);
  return out;
}

LossResult apply_loss(const SparseState& state, int mode, double gamma,
                      rng::Xoshiro256& gen) {
  check_mode(state, mode, "apply_loss");
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw DomainError("apply_loss: loss probability must lie in [0, 1]");
  LossResult result;
  if (gamma == 0.0) {
    result.state = state;
    result.photons_lost = 0;
    result.probability = 1.0;
    return result;
  }
  // Transmission amplitude cos(theta) with cos^2(theta) = 1 - gamma; the lossy
  // system mode plays the "a" role so each photon survives with probability
  // 1 - gamma independently.
  const double theta = std::acos(std::sqrt(1.0 - gamma));
  SparseState widened = append_mode(state, 0);
  const int env = widened.mode_count - 1;
  widened = apply_beamsplitter(widened, {mode, env, theta});
  const auto marginals = measurement_marginals(widened, env);
  const double u = gen.uniform01();
  double cumulative = 0.0;
  int lost = 0;
  double probability = 0.0;
  for (const auto& [x, p] : marginals) {
    lost = x;
    probability = p;
    if (u < cumulative + p) break;
    cumulative += p;
  }
  result.state = collapse_and_drop(widened, env, lost);
  result.photons_lost = lost;
  result.probability = probability;
  return result;
}

}  // namespace loopsim::fock
