#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "hcm/generator.hpp"

namespace hcm {

struct ComponentStats {
  std::int64_t v = 0;    // vertices
  std::int64_t vH = 0;   // communities
  std::int64_t SP = 0;   // surplus edges of the component
  std::int64_t SPH = 0;  // surplus edges that are inter-community edges
  std::map<std::int64_t, std::int64_t> vH_by_degree;
  std::int64_t first = 0;  // discovery step (trace) or smallest community index (oracle)
};

// Depth-first community exploration record. Step j (1-based) discovers community
// order[j-1] with inter-community degree degree[j-1] and cycles[j-1] removed
// pairings (cycle closures, community self-loops, parallel edges). The walks
// satisfy Q[j] = Q[j-1] + d - 2 - 2c and Z[j] = Z[j-1] + s; tau holds the exact
// hitting times of -2k, which delimit components.
struct ExplorationTrace {
  std::vector<std::int32_t> order;
  std::vector<std::int32_t> degree;
  std::vector<std::int32_t> cycles;
  std::vector<std::int64_t> Q;  // size steps+1, Q[0] = 0
  std::vector<std::int64_t> Z;  // size steps+1, Z[0] = 0
  std::vector<std::int64_t> tau;

  std::int64_t steps() const { return static_cast<std::int64_t>(order.size()); }
};

// One community discovered per step; fresh components start from a uniformly
// chosen sleeping half-edge (size-biased by d_H). Communities without half-edges
// are unreachable by the half-edge process and are appended as singleton
// components afterwards, in index order.
ExplorationTrace explore(const HCMGraph& g, std::uint64_t seed);

// Component census from the trace via v^H = tau_k - tau_{k-1}, v = Z(tau_k) - Z(tau_{k-1}).
// Throws on malformed traces. Result sorted by v descending.
std::vector<ComponentStats> components_from_trace(const ExplorationTrace& t, const HCMGraph& g);

// Independent oracle: connected components of the vertex graph, same statistics.
std::vector<ComponentStats> components_union_find(const HCMGraph& g);

// (SP, SPH) of the subgraph induced by the given communities; throws if it is
// not connected.
std::pair<std::int64_t, std::int64_t> surplus(const HCMGraph& g,
                                              const std::vector<std::int64_t>& communities);

struct RescaledWalks {
  std::vector<double> t;
  std::vector<double> q;  // n^{-1/3} Q(t n^{2/3})
  std::vector<double> z;  // n^{-2/3} Z(t n^{2/3})
};

RescaledWalks rescaled_walks(const ExplorationTrace& t, std::int64_t n,
                             const std::vector<double>& grid);

void sort_components(std::vector<ComponentStats>& comps);

}  // namespace hcm
