#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hcm/exploration.hpp"
#include "hcm/generator.hpp"

namespace hcm {

enum class PercolationMode { Algorithm2S4, Algorithm2S4Prime, Direct };

struct PercolationConfig {
  double pi = 1.0;
  PercolationMode mode = PercolationMode::Algorithm2S4;
  std::uint64_t seed = 0;
};

struct PieceProvenance {
  std::int64_t source_community = -1;
  std::vector<int> vertices;  // original labels, ascending
};

struct IntraPercolation {
  CommunitySequence seq;  // n_bar percolated communities
  std::vector<PieceProvenance> provenance;
};

// (S1): keep each internal edge independently with probability pi; every connected
// component of a percolated community becomes a new community carrying its
// vertices' original half-edge counts. Total vertex count is preserved.
IntraPercolation percolate_intra(const CommunitySequence& seq, double pi, std::uint64_t seed);

struct CloneInfo {
  std::int64_t clone_index = -1;   // index in the exploded sequence
  std::int64_t source_piece = -1;  // index in the (S1) sequence
  int source_vertex = -1;
  int source_slot = -1;
};

struct ShapeCount {
  std::int64_t pieces = 0;      // n_bar_H
  std::int64_t half_edges = 0;  // d_H * n_bar_H
  std::int64_t explosions = 0;  // n_H+
};

struct ExplosionRecord {
  std::int64_t n_bar = 0;
  std::int64_t n_tilde = 0;
  std::vector<CloneInfo> clones;
  std::map<std::string, ShapeCount> by_shape;  // keyed by pre-explosion shape_key
};

struct Explosion {
  CommunitySequence seq;  // n_tilde communities: survivors then clones
  ExplosionRecord record;
};

// (S2): each half-edge detaches with probability 1-sqrt(pi) and moves to a fresh
// clone of its percolated community (same vertices and internal edges) as the
// clone's only half-edge.
Explosion explode(const CommunitySequence& seq, double pi, std::uint64_t seed);

struct PercolationOutcome {
  HCMGraph graph;                    // percolated graph (post-deletion for algorithm2 modes)
  std::optional<HCMGraph> exploded;  // pre-deletion graph, algorithm2 modes only
  std::optional<ExplosionRecord> record;
  std::vector<char> deleted;  // per exploded-sequence community
  std::int64_t deleted_vertices = 0;
};

// Full bond percolation. Algorithm2S4: S1 -> S2 -> re-pair -> delete the clones.
// Algorithm2S4Prime: delete, per internal-graph shape, as many uniformly chosen
// degree-one communities of that shape as there are clones of it. Direct: remove
// every edge of the vertex graph independently with probability 1-pi and rebuild
// the two-level structure (ground-truth oracle; identity for pi=1).
PercolationOutcome percolate_hcm(const HCMGraph& g, const PercolationConfig& cfg);

struct MomentEstimate {
  double value = 0;
  double se = 0;
};

struct PercolatedMoments {
  MomentEstimate s, d, d2, d3, ds;
  std::int64_t pieces = 0;
  std::map<std::int64_t, std::int64_t> degree_histogram;
};

// Monte Carlo moments of the percolated community distribution (S^pi, D^pi):
// pieces pooled over `reps` catalog draws, ratio estimators with delta-method
// standard errors.
PercolatedMoments percolated_moments(const CommunityDistribution& dist, double pi,
                                     std::int64_t reps, std::uint64_t seed);

// Same for the exploded distribution (S~, D~) after (S2), clones included.
PercolatedMoments exploded_moments(const CommunityDistribution& dist, double pi, std::int64_t reps,
                                   std::uint64_t seed);

}  // namespace hcm
