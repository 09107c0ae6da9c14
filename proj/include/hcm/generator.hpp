#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "hcm/community.hpp"

namespace hcm {

enum class RealizeMode { Iid, Exact };

// One extra half-edge added to make ell_n even, recorded for reproducibility.
struct ParityFix {
  std::int64_t community = -1;
  int vertex = -1;
};

struct CommunitySequence {
  std::vector<Community> communities;
  std::optional<ParityFix> parity_fix;

  std::int64_t size() const { return static_cast<std::int64_t>(communities.size()); }
  std::int64_t total_vertices() const;    // N
  std::int64_t total_half_edges() const;  // ell_n
  std::int64_t max_community_size() const;
  std::int64_t max_degree() const;
};

// n draws from the catalog: i.i.d. by weight, or exact proportional counts with
// largest-remainder rounding (entries with explicit counts pin the counts, which
// must then sum to n). If ell_n comes out odd, one half-edge is added to a
// uniformly chosen vertex among those with at least one half-edge.
CommunitySequence realize_sequence(const CommunityDistribution& dist, std::int64_t n,
                                   RealizeMode mode, std::uint64_t seed);

// Half-edges are enumerated per community, per vertex, per slot; the enumeration
// index identifies (community, vertex, slot) throughout the pipeline.
struct HalfEdgeTable {
  std::vector<std::int32_t> community;
  std::vector<std::int32_t> vertex_local;
  std::vector<std::int64_t> vertex_global;
  std::vector<std::int64_t> community_first;  // size n+1, half-edge range per community

  std::int64_t count() const { return static_cast<std::int64_t>(community.size()); }
  static HalfEdgeTable build(const CommunitySequence& seq);
};

// Fixed-point-free involution on half-edges.
struct Pairing {
  std::vector<std::int64_t> partner;
};

// Uniform perfect matching: shuffle the half-edge list, match consecutive pairs.
Pairing pair_half_edges(const CommunitySequence& seq, std::uint64_t seed);

struct HCMGraph {
  CommunitySequence seq;
  Pairing pairing;
  HalfEdgeTable half_edges;
  std::vector<std::int64_t> vertex_offset;  // size n+1
  std::vector<std::pair<std::int64_t, std::int64_t>> vertex_edges;     // internal + paired
  std::vector<std::pair<std::int32_t, std::int32_t>> community_edges;  // paired only

  std::int64_t num_communities() const { return seq.size(); }
  std::int64_t num_vertices() const { return vertex_offset.empty() ? 0 : vertex_offset.back(); }
};

HCMGraph build_graph(CommunitySequence seq, Pairing pairing);

// Text serialization: header "n N ell", one line per community
// ("s d_H m degrees... edges..."), then ell/2 pairing lines, then optional
// "parityfix c v". Byte-identical for identical inputs.
void serialize_graph(const HCMGraph& g, std::ostream& out);
std::string graph_to_string(const HCMGraph& g);
HCMGraph parse_graph(std::istream& in);

// Standalone configuration model on a plain degree sequence. Consumes randomness
// exactly like pair_half_edges, so with all-single-vertex communities the HCM
// pipeline and this one produce identical edge lists per seed.
std::vector<std::pair<std::int64_t, std::int64_t>> configuration_model_edges(
    const std::vector<int>& degrees, std::uint64_t seed);

}  // namespace hcm
