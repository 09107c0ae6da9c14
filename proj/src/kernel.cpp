#include "hcm/kernel.hpp"

#include <cmath>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "hcm/rng.hpp"
#include "hcm/union_find.hpp"

namespace hcm {

namespace {

// Half-edge count of every vertex's component under one kept-edge mask.
void component_half_edges(const Community& c, std::uint32_t mask, std::vector<std::int64_t>& out) {
  const int s = c.vertex_count();
  UnionFind uf(s);
  for (std::size_t e = 0; e < c.edges.size(); ++e) {
    if (mask & (1u << e)) uf.unite(c.edges[e].first, c.edges[e].second);
  }
  out.assign(s, 0);
  std::vector<std::int64_t> total(s, 0);
  for (int v = 0; v < s; ++v) total[uf.find(v)] += c.out_degrees[v];
  for (int v = 0; v < s; ++v) out[v] = total[uf.find(v)];
}

}  // namespace

ShapeKernel::ShapeKernel(const Community& c) {
  validate_community(c);
  m_ = static_cast<int>(c.edges.size());
  s_ = c.vertex_count();
  d_ = c.total_out_degree();
  out_degrees_ = c.out_degrees;
  if (m_ > kKernelEdgeCap) {
    throw Error("community has " + std::to_string(m_) + " internal edges, above the enumeration cap of " +
                std::to_string(kKernelEdgeCap) + "; use monte_carlo_B");
  }
  b_count_.assign(s_, std::vector<std::vector<std::uint64_t>>(
                          d_ + 2, std::vector<std::uint64_t>(m_ + 1, 0)));
  piv_count_ = b_count_;

  std::vector<std::int64_t> k_full, k_drop;
  const std::uint32_t subsets = 1u << m_;
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    const int j = __builtin_popcount(mask);
    component_half_edges(c, mask, k_full);
    for (int v = 0; v < s_; ++v) {
      for (std::int64_t k = 0; k <= k_full[v]; ++k) ++b_count_[v][k][j];
    }
    for (int e = 0; e < m_; ++e) {
      if (!(mask & (1u << e))) continue;
      component_half_edges(c, mask & ~(1u << e), k_drop);
      for (int v = 0; v < s_; ++v) {
        // e is pivotal and present for K_v >= k exactly when k_drop < k <= k_full.
        for (std::int64_t k = k_drop[v] + 1; k <= k_full[v]; ++k) ++piv_count_[v][k][j];
      }
    }
  }
}

double ShapeKernel::B(int v, std::int64_t k, double pi) const {
  if (v < 0 || v >= s_) throw Error("kernel: vertex out of range");
  if (k <= 0) return 1.0;
  if (k > d_) return 0.0;
  const auto& counts = b_count_[v][k];
  double sum = 0.0, pw_pi = 1.0;
  for (int j = 0; j <= m_; ++j) {
    sum += static_cast<double>(counts[j]) * pw_pi * std::pow(1.0 - pi, m_ - j);
    pw_pi *= pi;
  }
  return sum;
}

double ShapeKernel::g(int v, std::int64_t k, double pi) const {
  if (k < 0) return 0.0;
  return B(v, k, pi) - B(v, k + 1, pi);
}

double ShapeKernel::B_prime(int v, std::int64_t k, double pi) const {
  if (v < 0 || v >= s_) throw Error("kernel: vertex out of range");
  if (k <= 0 || k > d_) return 0.0;
  const auto& counts = piv_count_[v][k];
  double sum = 0.0, pw_pi = 1.0;  // pi^{j-1}, starting at j=1
  for (int j = 1; j <= m_; ++j) {
    sum += static_cast<double>(counts[j]) * pw_pi * std::pow(1.0 - pi, m_ - j);
    pw_pi *= pi;
  }
  return sum;
}

const ShapeKernel& kernel_for(const Community& c) {
  static std::mutex mu;
  static std::unordered_map<std::string, std::unique_ptr<ShapeKernel>> cache;
  const std::string key = shape_key(c);
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<ShapeKernel>(c)).first;
  return *it->second;
}

double exact_B(const Community& c, int v, std::int64_t k, double pi) {
  return kernel_for(c).B(v, k, pi);
}

double exact_g(const Community& c, int v, std::int64_t k, double pi) {
  return kernel_for(c).g(v, k, pi);
}

double B_prime(const Community& c, int v, std::int64_t k, double pi) {
  return kernel_for(c).B_prime(v, k, pi);
}

McEstimate monte_carlo_B(const Community& c, int v, std::int64_t k, double pi, std::int64_t reps,
                         std::uint64_t seed) {
  if (reps < 1) throw Error("monte_carlo_B: reps must be >= 1");
  if (v < 0 || v >= c.vertex_count()) throw Error("monte_carlo_B: vertex out of range");
  const int s = c.vertex_count();
  Rng rng(derive_seed(seed, {0xB0CULL}));
  std::int64_t hits = 0;
  for (std::int64_t r = 0; r < reps; ++r) {
    UnionFind uf(s);
    for (const auto& [a, b] : c.edges) {
      if (rng.uniform01() < pi) uf.unite(a, b);
    }
    std::int64_t kv = 0;
    const std::int64_t root = uf.find(v);
    for (int w = 0; w < s; ++w) {
      if (uf.find(w) == root) kv += c.out_degrees[w];
    }
    if (kv >= k) ++hits;
  }
  McEstimate e;
  e.value = static_cast<double>(hits) / static_cast<double>(reps);
  e.se = std::sqrt(e.value * (1.0 - e.value) / static_cast<double>(reps));
  return e;
}

}  // namespace hcm
