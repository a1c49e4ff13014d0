#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

#include "loopsim/errors.hpp"

namespace oracles {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

Complex poly_bs_amplitude(int n_a, int n_b, int cap_n_a, int cap_n_b, double theta) {
  if (n_a + n_b != cap_n_a + cap_n_b) return 0.0;
  const int total = n_a + n_b;
  // coeff[i][j] is the coefficient of x^i y^j, where x and y stand for the
  // output-mode creation operators.
  std::vector<std::vector<double>> coeff(total + 1, std::vector<double>(total + 1, 0.0));
  coeff[0][0] = 1.0;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  auto multiply_linear = [&](double cx, double cy) {
    std::vector<std::vector<double>> out(total + 1, std::vector<double>(total + 1, 0.0));
    for (int i = 0; i <= total; ++i)
      for (int j = 0; j <= total; ++j) {
        if (coeff[i][j] == 0.0) continue;
        if (i + 1 <= total) out[i + 1][j] += cx * coeff[i][j];
        if (j + 1 <= total) out[i][j + 1] += cy * coeff[i][j];
      }
    coeff = std::move(out);
  };
  // The input creation operators transform as a^dag -> c x - s y and
  // b^dag -> s x + c y; |n_a, n_b> carries n_a factors of the first and n_b
  // of the second.
  for (int t = 0; t < n_a; ++t) multiply_linear(c, -s);
  for (int t = 0; t < n_b; ++t) multiply_linear(s, c);
  const double norm =
      std::sqrt(factorial(cap_n_a) * factorial(cap_n_b) / (factorial(n_a) * factorial(n_b)));
  return coeff[cap_n_a][cap_n_b] * norm;
}

Matrix mode_matrix(const std::vector<loopsim::circuit::GatePosition>& gates,
                   const std::vector<double>& thetas, int mode_count) {
  Matrix u(mode_count, std::vector<Complex>(mode_count, 0.0));
  for (int i = 0; i < mode_count; ++i) u[i][i] = 1.0;
  for (std::size_t g = 0; g < gates.size(); ++g) {
    const int a = gates[g].mode_a;
    const int b = gates[g].mode_b;
    const double c = std::cos(thetas[g]);
    const double s = std::sin(thetas[g]);
    // Left-multiply the embedded rotation: rows a and b of u are recombined.
    for (int col = 0; col < mode_count; ++col) {
      const Complex ra = u[a][col];
      const Complex rb = u[b][col];
      u[a][col] = c * ra + s * rb;
      u[b][col] = -s * ra + c * rb;
    }
  }
  return u;
}

Complex ryser_permanent(const Matrix& a) {
  const int n = static_cast<int>(a.size());
  if (n == 0) return 1.0;
  std::vector<Complex> row_sums(n, 0.0);
  Complex total = 0.0;
  std::uint64_t gray = 0;
  for (std::uint64_t k = 1; k < (std::uint64_t{1} << n); ++k) {
    const std::uint64_t next_gray = k ^ (k >> 1);
    const std::uint64_t diff = next_gray ^ gray;
    const int j = std::countr_zero(diff);
    const bool added = (next_gray & diff) != 0;
    for (int i = 0; i < n; ++i) row_sums[i] += added ? a[i][j] : -a[i][j];
    gray = next_gray;
    Complex prod = 1.0;
    for (int i = 0; i < n; ++i) prod *= row_sums[i];
    const int bits = std::popcount(next_gray);
    total += ((n - bits) % 2 != 0) ? -prod : prod;
  }
  return total;
}

Complex dense_amplitude(const Matrix& u, const std::vector<int>& input_occ,
                        const std::vector<int>& output_occ) {
  std::vector<int> rows;
  std::vector<int> cols;
  for (std::size_t j = 0; j < output_occ.size(); ++j)
    rows.insert(rows.end(), output_occ[j], static_cast<int>(j));
  for (std::size_t c = 0; c < input_occ.size(); ++c)
    cols.insert(cols.end(), input_occ[c], static_cast<int>(c));
  if (rows.size() != cols.size()) return 0.0;
  const int n = static_cast<int>(rows.size());
  Matrix sub(n, std::vector<Complex>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sub[i][j] = u[rows[i]][cols[j]];
  double norm = 1.0;
  for (int occ : input_occ) norm *= factorial(occ);
  for (int occ : output_occ) norm *= factorial(occ);
  return ryser_permanent(sub) / std::sqrt(norm);
}

std::vector<std::vector<int>> enumerate_occupations(int mode_count, int photon_count) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(mode_count, 0);
  auto rec = [&](auto&& self, int mode, int remaining) -> void {
    if (mode == mode_count - 1) {
      cur[mode] = remaining;
      out.push_back(cur);
      return;
    }
    for (int x = 0; x <= remaining; ++x) {
      cur[mode] = x;
      self(self, mode + 1, remaining - x);
    }
  };
  if (mode_count >= 1)
    rec(rec, 0, photon_count);
  return out;
}

std::map<std::vector<int>, double> dense_distribution(
    const loopsim::circuit::LoopArchitecture& arch) {
  const auto gates = loopsim::circuit::expand_circuit(arch);
  const auto thetas = loopsim::circuit::resolve_thetas_or_zero(arch);
  const Matrix u = mode_matrix(gates, thetas, arch.mode_count);
  int photons = 0;
  for (int occ : arch.input) photons += occ;
  std::map<std::vector<int>, double> dist;
  for (const auto& out : enumerate_occupations(arch.mode_count, photons)) {
    const Complex amp = dense_amplitude(u, arch.input, out);
    dist[out] = std::norm(amp);
  }
  return dist;
}

std::vector<loopsim::lattice::LatticePath> enumerate_interval_paths(
    const loopsim::lattice::LatticePath& bottom,
    const loopsim::lattice::LatticePath& top) {
  std::vector<loopsim::lattice::LatticePath> out;
  if (top.empty()) {
    out.push_back({});
    return out;
  }
  const int width = static_cast<int>(top.size());
  loopsim::lattice::LatticePath cur(width, 0);
  auto rec = [&](auto&& self, int idx, int prev) -> void {
    if (idx == width) {
      out.push_back(cur);
      return;
    }
    for (int h = std::max(prev, bottom[idx]); h <= top[idx]; ++h) {
      cur[idx] = h;
      self(self, idx + 1, h);
    }
  };
  rec(rec, 0, 0);
  return out;
}

std::vector<loopsim::lattice::LatticePath> enumerate_downset_paths(
    const loopsim::lattice::LatticePath& top) {
  if (top.empty()) return {{}};
  loopsim::lattice::LatticePath bottom(top.size(), 0);
  bottom.back() = top.back();
  return enumerate_interval_paths(bottom, top);
}

std::vector<loopsim::lattice::LatticePath> enumerate_height_vectors(int width,
                                                                    int photons) {
  std::vector<loopsim::lattice::LatticePath> out;
  loopsim::lattice::LatticePath cur(width, 0);
  auto rec = [&](auto&& self, int idx, int prev) -> void {
    if (idx == width - 1) {
      cur[idx] = photons;
      if (photons >= prev) out.push_back(cur);
      return;
    }
    for (int h = prev; h <= photons; ++h) {
      cur[idx] = h;
      self(self, idx + 1, h);
    }
  };
  if (width >= 1)
    rec(rec, 0, 0);
  return out;
}

std::set<std::vector<int>> pcs_image(const loopsim::lattice::PCS& p) {
  std::set<std::vector<int>> image;
  for (const auto& path : enumerate_downset_paths(p.mu)) {
    const auto steps = loopsim::lattice::steps_from_height(path);
    std::vector<int> occ(p.sigma.size());
    for (std::size_t c = 0; c < p.sigma.size(); ++c) occ[c] = steps[p.sigma[c]];
    image.insert(occ);
  }
  return image;
}

double tv_distance(const std::map<std::vector<int>, double>& exact,
                   const std::map<std::vector<int>, std::size_t>& counts,
                   std::size_t total) {
  double tv = 0.0;
  for (const auto& [key, p] : exact) {
    const auto it = counts.find(key);
    const double emp = it == counts.end() ? 0.0 : static_cast<double>(it->second) / total;
    tv += std::abs(p - emp);
  }
  for (const auto& [key, c] : counts) {
    if (exact.find(key) == exact.end()) tv += static_cast<double>(c) / total;
  }
  return tv / 2.0;
}

int below(loopsim::rng::Xoshiro256& gen, int bound) {
  if (bound <= 0) throw loopsim::DomainError("oracles::below: bound must be positive");
  return static_cast<int>(gen.below(loopsim::BigInt(bound)).get_si());
}

loopsim::lattice::LatticePath random_mu(loopsim::rng::Xoshiro256& gen, int width,
                                        int photons) {
  loopsim::lattice::LatticePath mu(width);
  for (int i = 0; i + 1 < width; ++i) mu[i] = below(gen, photons + 1);
  mu[width - 1] = photons;
  std::sort(mu.begin(), mu.end());
  return mu;
}

loopsim::lattice::PCS random_pcs(loopsim::rng::Xoshiro256& gen, int width,
                                 int photons) {
  loopsim::lattice::PCS p;
  p.mu = random_mu(gen, width, photons);
  p.sigma.resize(width);
  for (int i = 0; i < width; ++i) p.sigma[i] = i;
  for (int i = width - 1; i > 0; --i)
    std::swap(p.sigma[i], p.sigma[below(gen, i + 1)]);
  return p;
}

}  // namespace oracles
