#include "loopsim/lattice.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

#include "loopsim/errors.hpp"

namespace loopsim::lattice {

namespace {

void check_path(const LatticePath& path, const char* op) {
  if (!path.empty() && path.front() < 0)
    throw ContractViolationError(std::string(op) + ": heights must be >= 0");
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    if (path[i] > path[i + 1])
      throw ContractViolationError(std::string(op) + ": heights must be nondecreasing");
}

void check_same_width(const LatticePath& a, const LatticePath& b, const char* op) {
  if (a.size() != b.size())
    throw ContractViolationError(std::string(op) + ": paths must have equal width");
}

void check_pcs(const PCS& p, const char* op) {
  check_path(p.mu, op);
  if (p.sigma.size() != p.mu.size())
    throw ContractViolationError(std::string(op) + ": sigma must have one entry per mode");
}

/// The all-x-steps-then-everything path pinning "q photons strictly left of
/// mode a, step x at a": (q, ..., q, q+x, n, ..., n) with the q+x at index a.
LatticePath epsilon_path(int width, int total, int a, int x, int q) {
  LatticePath eps(static_cast<std::size_t>(width));
  for (int b = 0; b < a; ++b) eps[b] = q;
  eps[a] = q + x;
  for (int b = a + 1; b < width; ++b) eps[b] = total;
  return eps;
}

/// The matching minimum path: as low as possible while keeping q photons left
/// of a and step x at a: (0, ..., 0, q, q+x, ..., q+x, n).
LatticePath eta_path(int width, int total, int a, int x, int q) {
  LatticePath eta(static_cast<std::size_t>(width), 0);
  if (a > 0) eta[a - 1] = q;
  for (int b = a; b + 1 < width; ++b) eta[b] = q + x;
  eta[width - 1] = total;
  return eta;
}

}  // namespace

LatticePath height_from_steps(const std::vector<int>& steps) {
  for (int s : steps)
    if (s < 0) throw ContractViolationError("height_from_steps: steps must be >= 0");
  LatticePath heights(steps.size());
  std::partial_sum(steps.begin(), steps.end(), heights.begin());
  return heights;
}

std::vector<int> steps_from_height(const LatticePath& heights) {
  check_path(heights, "steps_from_height");
  std::vector<int> steps(heights.size());
  std::adjacent_difference(heights.begin(), heights.end(), steps.begin());
  return steps;
}

bool young_leq(const LatticePath& a, const LatticePath& b) {
  check_same_width(a, b, "young_leq");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

LatticePath meet(const LatticePath& a, const LatticePath& b) {
  check_same_width(a, b, "meet");
  LatticePath out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::min(a[i], b[i]);
  return out;
}

LatticePath join(const LatticePath& a, const LatticePath& b) {
  check_same_width(a, b, "join");
  LatticePath out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::max(a[i], b[i]);
  return out;
}

std::optional<SkewDiagram> intersect(const SkewDiagram& a, const SkewDiagram& b) {
  check_same_width(a.top, b.top, "intersect");
  check_same_width(a.bottom, b.bottom, "intersect");
  SkewDiagram out{join(a.bottom, b.bottom), meet(a.top, b.top)};
  if (!young_leq(out.bottom, out.top)) return std::nullopt;
  return out;
}

BigInt count_interval(const SkewDiagram& d) {
  const LatticePath& nu = d.bottom;
  const LatticePath& mu = d.top;
  check_same_width(nu, mu, "count_interval");
  if (mu.empty()) return 1;
  check_path(mu, "count_interval");
  check_path(nu, "count_interval");
  if (!young_leq(nu, mu))
    throw ContractViolationError("count_interval: bottom path exceeds top path");
  if (nu.back() != mu.back())
    throw ContractViolationError("count_interval: boundary paths have different photon totals");

  // Cell (x, y) counts monotone staircases from height y at mode x to the
  // fixed endpoint (W, n), moving either up in height or right one mode; the
  // admissible strip at column x is lo(x) <= y <= mu[x] with lo given by nu
  // shifted one column (a path enters column x no lower than nu[x-1]).
  const int w = static_cast<int>(mu.size()) - 1;
  const int n = mu[static_cast<std::size_t>(w)];
  std::vector<std::vector<BigInt>> table(
      static_cast<std::size_t>(w) + 1,
      std::vector<BigInt>(static_cast<std::size_t>(n) + 1));
  const auto lo = [&](int x) { return x == 0 ? 0 : nu[static_cast<std::size_t>(x) - 1]; };
  for (int x = w; x >= 0; --x) {
    for (int y = mu[static_cast<std::size_t>(x)]; y >= lo(x); --y) {
      if (x == w && y == n) {
        table[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = 1;
        continue;
      }
      BigInt value = 0;
      if (y + 1 <= mu[static_cast<std::size_t>(x)])
        value += table[static_cast<std::size_t>(x)][static_cast<std::size_t>(y) + 1];
      if (x + 1 <= w && y >= lo(x + 1) && y <= mu[static_cast<std::size_t>(x) + 1])
        value += table[static_cast<std::size_t>(x) + 1][static_cast<std::size_t>(y)];
      table[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = value;
    }
  }
  return table[0][0];
}

BigInt count_downset(const LatticePath& top) {
  if (top.empty()) return 1;
  check_path(top, "count_downset");
  LatticePath bottom(top.size(), 0);
  bottom.back() = top.back();
  return count_interval({std::move(bottom), top});
}

std::vector<int> PCS::physical_max_vector() const {
  std::vector<int> v(sigma.size());
  for (std::size_t c = 0; c < sigma.size(); ++c)
    v[c] = mu[static_cast<std::size_t>(sigma[c])];
  return v;
}

PCS initial_pcs(int photons_in_first_mode) {
  if (photons_in_first_mode < 0)
    throw DomainError("initial_pcs: photon count must be >= 0");
  return {{photons_in_first_mode}, {0}};
}

PCS couple_new_mode(const PCS& p, int new_mode_input_photons) {
  check_pcs(p, "couple_new_mode");
  if (new_mode_input_photons < 0)
    throw DomainError("couple_new_mode: photon count must be >= 0");
  if (p.mu.empty())
    throw UnsupportedCouplingError("couple_new_mode: no active mode to couple to");
  PCS out = p;
  const int new_total = p.photon_total() + new_mode_input_photons;
  out.mu.back() = new_total;
  out.mu.push_back(new_total);
  out.sigma.push_back(static_cast<int>(out.mu.size()) - 1);
  return out;
}

PCS evolve_beamsplitter(const PCS& p, int slot_a, int slot_b) {
  check_pcs(p, "evolve_beamsplitter");
  const int w = p.width();
  if (slot_a < 0 || slot_a >= w || slot_b < 0 || slot_b >= w || slot_a == slot_b)
    throw ContractViolationError("evolve_beamsplitter: slots must be distinct and in range");
  std::vector<int> v = p.physical_max_vector();
  const int peak = std::max(v[static_cast<std::size_t>(slot_a)],
                            v[static_cast<std::size_t>(slot_b)]);
  v[static_cast<std::size_t>(slot_a)] = peak;
  v[static_cast<std::size_t>(slot_b)] = peak;
  std::vector<std::pair<int, int>> order(static_cast<std::size_t>(w));
  for (int c = 0; c < w; ++c) order[static_cast<std::size_t>(c)] = {v[static_cast<std::size_t>(c)], c};
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& l, const auto& r) { return l.first < r.first; });
  PCS out;
  out.mu.resize(static_cast<std::size_t>(w));
  out.sigma.resize(static_cast<std::size_t>(w));
  for (int i = 0; i < w; ++i) {
    out.mu[static_cast<std::size_t>(i)] = order[static_cast<std::size_t>(i)].first;
    out.sigma[static_cast<std::size_t>(order[static_cast<std::size_t>(i)].second)] = i;
  }
  return out;
}

std::vector<SkewDiagram> project_helpers(const LatticePath& mu, int lattice_mode, int x) {
  check_path(mu, "project_helpers");
  const int width = static_cast<int>(mu.size());
  if (lattice_mode < 0 || lattice_mode >= width)
    throw ContractViolationError("project_helpers: lattice mode out of range");
  if (x < 0 || x > mu[static_cast<std::size_t>(lattice_mode)]) return {};
  const int a = lattice_mode;
  const int total = mu.back();
  const int q_max =
      a == 0 ? 0
             : std::min(mu[static_cast<std::size_t>(a) - 1],
                        mu[static_cast<std::size_t>(a)] - x);
  std::vector<SkewDiagram> out;
  for (int q = 0; q <= q_max; ++q) {
    LatticePath top = meet(mu, epsilon_path(width, total, a, x, q));
    LatticePath bottom = eta_path(width, total, a, x, q);
    if (young_leq(bottom, top)) out.push_back({std::move(bottom), std::move(top)});
  }
  return out;
}

LatticePath contract_path(const LatticePath& path, int lattice_mode, int x) {
  check_path(path, "contract_path");
  const int width = static_cast<int>(path.size());
  if (lattice_mode < 0 || lattice_mode >= width)
    throw ContractViolationError("contract_path: lattice mode out of range");
  const int a = lattice_mode;
  const int below = a > 0 ? path[static_cast<std::size_t>(a) - 1] : 0;
  if (path[static_cast<std::size_t>(a)] - below != x)
    throw ContractViolationError("contract_path: path step at the contracted mode is not " +
                                 std::to_string(x));
  LatticePath out;
  out.reserve(static_cast<std::size_t>(width) - 1);
  for (int b = 0; b < a; ++b) out.push_back(path[static_cast<std::size_t>(b)]);
  for (int b = a + 1; b < width; ++b) out.push_back(path[static_cast<std::size_t>(b)] - x);
  return out;
}

SkewDiagram contract_diagram(const SkewDiagram& d, int lattice_mode, int x) {
  check_same_width(d.bottom, d.top, "contract_diagram");
  const int width = static_cast<int>(d.top.size());
  if (lattice_mode < 0 || lattice_mode >= width)
    throw ContractViolationError("contract_diagram: lattice mode out of range");
  const int a = lattice_mode;
  // Every path of the interval must share the step at `a`; with interval
  // boundaries that means both boundary heights are pinned at a and at a-1.
  if (d.top[static_cast<std::size_t>(a)] != d.bottom[static_cast<std::size_t>(a)] ||
      (a > 0 && d.top[static_cast<std::size_t>(a) - 1] != d.bottom[static_cast<std::size_t>(a) - 1]))
    throw ContractViolationError(
        "contract_diagram: the step at the contracted mode varies over the diagram");
  return {contract_path(d.bottom, a, x), contract_path(d.top, a, x)};
}

PCS measure(const PCS& p, int slot, int x) {
  check_pcs(p, "measure");
  const int w = p.width();
  if (slot < 0 || slot >= w)
    throw ContractViolationError("measure: slot out of range");
  if (x < 0) throw ImpossibleOutcomeError("measure: photon counts are >= 0");
  const int a = p.sigma[static_cast<std::size_t>(slot)];
  const int total = p.photon_total();
  if (x > p.mu[static_cast<std::size_t>(a)])
    throw ImpossibleOutcomeError("measure: occupation " + std::to_string(x) +
                                 " exceeds the cumulative maximum " +
                                 std::to_string(p.mu[static_cast<std::size_t>(a)]));
  const int q_max =
      a == 0 ? 0
             : std::min(p.mu[static_cast<std::size_t>(a) - 1],
                        p.mu[static_cast<std::size_t>(a)] - x);
  if (a == w - 1 && q_max < total - x)
    throw ImpossibleOutcomeError(
        "measure: the remaining photons cannot all sit left of the measured mode");
  // The union over q of the projection helpers is the interval below the
  // q = q_max helper top (lower helpers are nested inside it), so the
  // projected space stays a downset with top = contract(meet(mu, eps)).
  const LatticePath top = meet(p.mu, epsilon_path(w, total, a, x, q_max));
  PCS out;
  out.mu = contract_path(top, a, x);
  out.sigma.reserve(static_cast<std::size_t>(w) - 1);
  for (int s = 0; s < w; ++s) {
    if (s == slot) continue;
    const int target = p.sigma[static_cast<std::size_t>(s)];
    out.sigma.push_back(target > a ? target - 1 : target);
  }
  return out;
}

std::map<int, BigInt> marginal_counts(const PCS& p, int slot) {
  check_pcs(p, "marginal_counts");
  const int w = p.width();
  if (slot < 0 || slot >= w)
    throw ContractViolationError("marginal_counts: slot out of range");
  const auto& mu = p.mu;
  const int total = p.photon_total();
  std::map<int, BigInt> counts;
  if (w == 1) {
    counts[total] = 1;
    return counts;
  }
  const int a = p.sigma[static_cast<std::size_t>(slot)];

  // Suffix table over column j: g[h] = number of ways to extend height h at
  // mode j to the fixed endpoint, for h <= mu[j]. Start at the last column
  // (height pinned to the total) and sweep down to column a.
  std::vector<BigInt> g(static_cast<std::size_t>(mu.back()) + 1);
  g.back() = 1;
  for (int j = w - 2; j >= a; --j) {
    std::vector<BigInt> next(static_cast<std::size_t>(mu[static_cast<std::size_t>(j)]) + 1);
    BigInt acc = 0;
    for (int h = static_cast<int>(g.size()) - 1; h >= 0; --h) {
      acc += g[static_cast<std::size_t>(h)];
      if (h <= mu[static_cast<std::size_t>(j)]) next[static_cast<std::size_t>(h)] = acc;
    }
    g = std::move(next);
  }

  if (a == 0) {
    for (int x = 0; x < static_cast<int>(g.size()); ++x)
      if (g[static_cast<std::size_t>(x)] != 0) counts[x] = g[static_cast<std::size_t>(x)];
    return counts;
  }

  // Prefix table over column j: f[h] = number of partial paths reaching height
  // h at mode j, swept up to column a - 1.
  std::vector<BigInt> f(static_cast<std::size_t>(mu[0]) + 1, 1);
  for (int j = 1; j <= a - 1; ++j) {
    std::vector<BigInt> next(static_cast<std::size_t>(mu[static_cast<std::size_t>(j)]) + 1);
    BigInt acc = 0;
    for (int h = 0; h <= mu[static_cast<std::size_t>(j)]; ++h) {
      if (h < static_cast<int>(f.size())) acc += f[static_cast<std::size_t>(h)];
      next[static_cast<std::size_t>(h)] = acc;
    }
    f = std::move(next);
  }

  for (int x = 0; x <= mu[static_cast<std::size_t>(a)]; ++x) {
    BigInt c = 0;
    for (int q = 0; q < static_cast<int>(f.size()); ++q) {
      const int h = q + x;
      if (h >= static_cast<int>(g.size())) break;
      c += f[static_cast<std::size_t>(q)] * g[static_cast<std::size_t>(h)];
    }
    if (c != 0) counts[x] = c;
  }
  return counts;
}

Tracker::Tracker(const circuit::LoopArchitecture& arch) : arch_(arch) {
  if (arch.mode_count < 1)
    throw ConfigError("lattice tracker: mode count must be >= 1");
  if (arch.loop_lengths.empty() || arch.loop_lengths.front() != 1)
    throw UnsupportedArchitectureError(
        "lattice tracker: the first loop must have length 1 so every new mode "
        "couples at the top of the space");
  if (arch.loss > 0.0)
    throw UnsupportedArchitectureError("lattice tracker: loss is not modeled");
  if (static_cast<int>(arch.input.size()) != arch.mode_count)
    throw ConfigError("lattice tracker: input must list one occupation per mode");
  for (int occ : arch.input)
    if (occ < 0) throw ConfigError("lattice tracker: input occupations must be >= 0");
  pcs_ = initial_pcs(arch.input[0]);
  window_ = {0};
}

bool Tracker::is_active(int global_mode) const {
  return std::find(window_.begin(), window_.end(), global_mode) != window_.end();
}

int Tracker::slot_of(int global_mode) const {
  const auto it = std::find(window_.begin(), window_.end(), global_mode);
  if (it == window_.end())
    throw ContractViolationError("slot_of: mode " + std::to_string(global_mode) +
                                 " is not active");
  return static_cast<int>(it - window_.begin());
}

BigInt Tracker::count() const { return count_downset(pcs_.mu); }

void Tracker::apply_gate(int global_a, int global_b) {
  const int m = arch_.mode_count;
  if (global_a < 0 || global_b < 0 || global_a >= m || global_b >= m ||
      global_a == global_b)
    throw ContractViolationError("apply_gate: invalid mode pair");
  const bool a_active = is_active(global_a);
  const bool b_active = is_active(global_b);
  if (a_active && b_active) {
    pcs_ = evolve_beamsplitter(pcs_, slot_of(global_a), slot_of(global_b));
    return;
  }
  if (!a_active)
    throw UnsupportedCouplingError(
        "apply_gate: a gate may couple at most one new mode, and only in its "
        "second position");
  // global_b enters the window. Its partner must be wired to the top lattice
  // mode; when it is not but its height ties the top, the wiring can be
  // re-aimed without changing the spanned space (slots of equal cumulative
  // maximum are interchangeable).
  const int partner_slot = slot_of(global_a);
  const int top = pcs_.width() - 1;
  if (pcs_.sigma[static_cast<std::size_t>(partner_slot)] != top) {
    if (pcs_.mu[static_cast<std::size_t>(pcs_.sigma[static_cast<std::size_t>(partner_slot)])] ==
        pcs_.mu[static_cast<std::size_t>(top)]) {
      for (int s = 0; s < pcs_.width(); ++s) {
        if (pcs_.sigma[static_cast<std::size_t>(s)] == top) {
          std::swap(pcs_.sigma[static_cast<std::size_t>(s)],
                    pcs_.sigma[static_cast<std::size_t>(partner_slot)]);
          break;
        }
      }
    } else {
      throw UnsupportedCouplingError(
          "apply_gate: new mode " + std::to_string(global_b) +
          " couples to a partner below the top of the space");
    }
  }
  pcs_ = couple_new_mode(pcs_, arch_.input[static_cast<std::size_t>(global_b)]);
  window_.push_back(global_b);
}

void Tracker::apply_measure(int global_mode, int outcome) {
  if (global_mode < 0 || global_mode >= arch_.mode_count)
    throw ContractViolationError("apply_measure: mode out of range");
  if (!is_active(global_mode)) {
    if (outcome != arch_.input[static_cast<std::size_t>(global_mode)])
      throw ImpossibleOutcomeError(
          "apply_measure: mode " + std::to_string(global_mode) +
          " is untouched by any gate, so it must show its input occupation");
    return;
  }
  const int slot = slot_of(global_mode);
  pcs_ = lattice::measure(pcs_, slot, outcome);
  window_.erase(window_.begin() + slot);
}

std::map<int, BigInt> Tracker::measure_marginals(int global_mode) const {
  if (global_mode < 0 || global_mode >= arch_.mode_count)
    throw ContractViolationError("measure_marginals: mode out of range");
  if (!is_active(global_mode))
    return {{arch_.input[static_cast<std::size_t>(global_mode)], BigInt(1)}};
  return marginal_counts(pcs_, slot_of(global_mode));
}

void Tracker::evolve_all_gates() {
  for (const auto& gate : circuit::expand_circuit(arch_))
    apply_gate(gate.mode_a, gate.mode_b);
}

}  // namespace loopsim::lattice
