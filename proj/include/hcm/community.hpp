#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hcm/rational.hpp"

namespace hcm {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A community: simple connected internal graph F plus per-vertex inter-community
// half-edge counts. Vertices are dense 0-based labels; equality is label-sensitive.
// `weight` optionally overrides the vertex count in moment computations (community
// "size" as an arbitrary nonnegative vertex-attribute sum); graph-level statistics
// always count vertices.
struct Community {
  std::vector<int> out_degrees;
  std::vector<std::pair<int, int>> edges;
  std::optional<double> weight;

  int vertex_count() const { return static_cast<int>(out_degrees.size()); }
  std::int64_t internal_edge_count() const { return static_cast<std::int64_t>(edges.size()); }

  std::int64_t total_out_degree() const {  // d_H
    std::int64_t d = 0;
    for (int x : out_degrees) d += x;
    return d;
  }

  // edges - vertices + 1 for the (connected) internal graph.
  std::int64_t internal_surplus() const { return internal_edge_count() - vertex_count() + 1; }

  double size_value() const { return weight ? *weight : static_cast<double>(vertex_count()); }

  bool operator==(const Community& other) const;
};

// Throws Error if the internal graph has self-loops, duplicate edges, out-of-range
// endpoints, negative out-degrees, or is disconnected.
void validate_community(const Community& c);
bool community_is_connected(const Community& c);
std::vector<int> internal_degrees(const Community& c);

// Built-in families.
Community make_single_vertex(int d);
Community make_star(int l);       // center + l leaves, each leaf one half-edge
Community make_line(int length);  // path, endpoints one half-edge each
Community make_household(int k);  // complete graph, every vertex one half-edge

// Canonical fingerprints. structure_key covers the internal graph only (size +
// sorted edge list); shape_key additionally includes the out-degree vector.
std::string structure_key(const Community& c);
std::string shape_key(const Community& c);

struct CatalogEntry {
  Community community;
  Rational weight{1, 1};
  std::optional<std::int64_t> count;  // optional exact count for fixed sequences
};

// Weighted catalog of community shapes with exact-rational weights (normalized on
// construction) and moment accessors. Immutable after construction.
class CommunityDistribution {
 public:
  explicit CommunityDistribution(std::vector<CatalogEntry> entries);

  std::size_t size() const { return entries_.size(); }
  const CatalogEntry& entry(std::size_t i) const { return entries_[i]; }
  const Community& community(std::size_t i) const { return entries_[i].community; }
  double weight(std::size_t i) const { return entries_[i].weight.value(); }
  const Rational& weight_exact(std::size_t i) const { return entries_[i].weight; }

  double e_s() const;    // E[S]
  double e_d() const;    // E[D]
  double e_d2() const;   // E[D^2]
  double e_d3() const;   // E[D^3]
  double e_ds() const;   // E[DS]
  double e_d2s() const;  // E[D^2 S]
  double e_s2() const;   // E[S^2]
  double p_degree(std::int64_t k) const;

  // E[D(D-1)]/E[D]; throws Error when E[D]=0.
  double nu_d() const;

 private:
  std::vector<CatalogEntry> entries_;
};

// Report for the finite-n regularity/connectivity checks. The size and degree
// conditions are asymptotic (<<), so the ratios are reported alongside the flags.
struct ConditionReport {
  double e_s = 0, e_d = 0, e_d3 = 0, e_ds = 0;
  bool e_d_positive = false;
  double nu = 0;  // valid only when e_d_positive
  std::int64_t s_max = 0;
  std::int64_t d_max = 0;
  double smax_log_ratio = 0;  // s_max * log(n) / n^{2/3}
  double dmax_ratio = 0;      // d_max / n^{1/3}
  bool smax_ok = false;
  bool dmax_ok = false;
  bool p_d1_in_open01 = false;
  bool p_d0_lt_1 = false;
  double nu_window_distance = 0;  // |nu - (1 + lambda n^{-1/3})|
};

ConditionReport check_conditions(const CommunityDistribution& dist, std::int64_t n, double lambda);

// Reweights entries a and b (keeping their ratio to the other entries fixed at the
// combined mass) so that nu_D hits the target exactly. Weights stay exact rationals
// when the target is rational. Throws if no valid mixture exists.
CommunityDistribution tune_two_entry_mixture(const CommunityDistribution& dist, std::size_t a,
                                             std::size_t b, const Rational& target_nu);
CommunityDistribution tune_two_entry_mixture(const CommunityDistribution& dist, std::size_t a,
                                             std::size_t b, double target_nu);

}  // namespace hcm
