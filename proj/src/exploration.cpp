#include "hcm/exploration.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "hcm/rng.hpp"
#include "hcm/union_find.hpp"

namespace hcm {

namespace {

enum class HeState : std::uint8_t { Sleeping, Active, Dead };

}  // namespace

ExplorationTrace explore(const HCMGraph& g, std::uint64_t seed) {
  const std::int64_t n = g.num_communities();
  const std::int64_t ell = g.half_edges.count();
  Rng rng(derive_seed(seed, {0xe24aULL}));

  std::vector<HeState> state(ell, HeState::Sleeping);
  std::vector<char> discovered(n, 0);
  std::vector<std::int64_t> stack;  // lazy deletion; top = smallest active half-edge
  std::vector<std::int64_t> pool(ell);
  std::vector<std::int64_t> pool_pos(ell);
  for (std::int64_t h = 0; h < ell; ++h) {
    pool[h] = h;
    pool_pos[h] = h;
  }
  auto pool_remove = [&](std::int64_t h) {
    const std::int64_t idx = pool_pos[h];
    if (idx < 0) return;
    const std::int64_t last = pool.back();
    pool[idx] = last;
    pool_pos[last] = idx;
    pool.pop_back();
    pool_pos[h] = -1;
  };

  ExplorationTrace t;
  t.order.reserve(n);
  t.degree.reserve(n);
  t.cycles.reserve(n);
  t.Q.reserve(n + 1);
  t.Z.reserve(n + 1);
  t.Q.push_back(0);
  t.Z.push_back(0);

  std::vector<std::int64_t> kept;

  auto discover = [&](std::int32_t ci, std::int64_t entry, bool fresh) {
    const std::int64_t begin = g.half_edges.community_first[ci];
    const std::int64_t end = g.half_edges.community_first[ci + 1];
    for (std::int64_t h = begin; h < end; ++h) pool_remove(h);
    discovered[ci] = 1;

    std::int32_t c = 0;
    kept.clear();
    for (std::int64_t h = begin; h < end; ++h) {
      if (state[h] == HeState::Dead) continue;  // entry partner or a handled self-pair
      const std::int64_t p = g.pairing.partner[h];
      if (g.half_edges.community[p] == ci) {
        // Pairing inside the community being discovered; count the pair once.
        if (p > h) {
          ++c;
          state[h] = HeState::Dead;
          state[p] = HeState::Dead;
        }
      } else if (state[p] == HeState::Active) {
        // Closes a cycle against the active boundary (covers parallel pairings too).
        ++c;
        state[h] = HeState::Dead;
        state[p] = HeState::Dead;
      } else {
        kept.push_back(h);
      }
    }
    if (fresh) {
      // The entry half-edge is the smallest: it must pop first.
      const auto it = std::find(kept.begin(), kept.end(), entry);
      if (it != kept.end()) kept.erase(it);
      for (auto rit = kept.rbegin(); rit != kept.rend(); ++rit) {
        state[*rit] = HeState::Active;
        stack.push_back(*rit);
      }
      if (entry >= 0 && state[entry] != HeState::Dead) {
        state[entry] = HeState::Active;
        stack.push_back(entry);
      }
    } else {
      for (auto rit = kept.rbegin(); rit != kept.rend(); ++rit) {
        state[*rit] = HeState::Active;
        stack.push_back(*rit);
      }
    }

    const Community& com = g.seq.communities[ci];
    const std::int32_t d = static_cast<std::int32_t>(end - begin);
    t.order.push_back(ci);
    t.degree.push_back(d);
    t.cycles.push_back(c);
    t.Q.push_back(t.Q.back() + d - 2 - 2 * static_cast<std::int64_t>(c));
    t.Z.push_back(t.Z.back() + com.vertex_count());
    const std::int64_t k = static_cast<std::int64_t>(t.tau.size()) + 1;
    if (t.Q.back() == -2 * k) t.tau.push_back(t.steps());
  };

  for (;;) {
    std::int64_t a = -1;
    while (!stack.empty()) {
      const std::int64_t h = stack.back();
      stack.pop_back();
      if (state[h] == HeState::Active) {
        a = h;
        break;
      }
    }
    if (a >= 0) {
      const std::int64_t b = g.pairing.partner[a];
      state[a] = HeState::Dead;
      state[b] = HeState::Dead;
      discover(g.half_edges.community[b], b, false);
    } else if (!pool.empty()) {
      const std::int64_t h = pool[rng.below(pool.size())];
      discover(g.half_edges.community[h], h, true);
    } else {
      break;
    }
  }
  // Degree-0 communities: unreachable by the half-edge draw, appended as singletons.
  for (std::int32_t ci = 0; ci < n; ++ci) {
    if (!discovered[ci]) discover(ci, -1, true);
  }
  return t;
}

std::vector<ComponentStats> components_from_trace(const ExplorationTrace& t, const HCMGraph& g) {
  const std::int64_t steps = t.steps();
  if (steps != g.num_communities() || t.Q.size() != static_cast<std::size_t>(steps) + 1 ||
      t.Z.size() != static_cast<std::size_t>(steps) + 1) {
    throw Error("components_from_trace: trace does not match graph");
  }
  if (t.tau.empty() || t.tau.back() != steps) {
    throw Error("components_from_trace: malformed trace (walk does not close all components)");
  }
  std::vector<ComponentStats> comps;
  comps.reserve(t.tau.size());
  std::int64_t prev = 0;
  for (std::size_t k = 0; k < t.tau.size(); ++k) {
    const std::int64_t end = t.tau[k];
    if (end <= prev || t.Q[end] != -2 * static_cast<std::int64_t>(k + 1)) {
      throw Error("components_from_trace: malformed trace (bad hitting time)");
    }
    ComponentStats cs;
    cs.vH = end - prev;
    cs.v = t.Z[end] - t.Z[prev];
    cs.first = prev + 1;
    std::int64_t cyc = 0, internal_sp = 0;
    for (std::int64_t j = prev; j < end; ++j) {
      cyc += t.cycles[j];
      internal_sp += g.seq.communities[t.order[j]].internal_surplus();
      ++cs.vH_by_degree[t.degree[j]];
    }
    cs.SPH = cyc;
    cs.SP = cyc + internal_sp;
    comps.push_back(std::move(cs));
    prev = end;
  }
  sort_components(comps);
  return comps;
}

std::vector<ComponentStats> components_union_find(const HCMGraph& g) {
  const std::int64_t big_n = g.num_vertices();
  const std::int64_t n = g.num_communities();
  UnionFind uf(big_n);
  for (const auto& [u, v] : g.vertex_edges) uf.unite(u, v);

  std::unordered_map<std::int64_t, std::size_t> index;
  std::vector<ComponentStats> comps;
  auto slot = [&](std::int64_t root) -> ComponentStats& {
    auto [it, inserted] = index.emplace(root, comps.size());
    if (inserted) comps.emplace_back();
    return comps[it->second];
  };

  for (std::int64_t v = 0; v < big_n; ++v) ++slot(uf.find(v)).v;
  for (const auto& [u, v] : g.vertex_edges) {
    ++slot(uf.find(u)).SP;  // accumulate edge counts first, convert below
    (void)v;
  }
  for (std::int64_t ci = 0; ci < n; ++ci) {
    auto& cs = slot(uf.find(g.vertex_offset[ci]));
    ++cs.vH;
    ++cs.vH_by_degree[g.seq.communities[ci].total_out_degree()];
    cs.first = cs.first == 0 ? ci + 1 : std::min(cs.first, ci + 1);
  }
  for (const auto& [ca, cb] : g.community_edges) {
    auto& cs = slot(uf.find(g.vertex_offset[ca]));
    ++cs.SPH;  // inter-community edge count; converted below
    (void)cb;
  }
  for (auto& cs : comps) {
    cs.SP = cs.SP - cs.v + 1;
    cs.SPH = cs.SPH - cs.vH + 1;
  }
  sort_components(comps);
  return comps;
}

std::pair<std::int64_t, std::int64_t> surplus(const HCMGraph& g,
                                              const std::vector<std::int64_t>& communities) {
  if (communities.empty()) throw Error("surplus: empty community set");
  std::unordered_set<std::int64_t> comm_set(communities.begin(), communities.end());
  std::unordered_map<std::int64_t, std::int64_t> vmap;  // global vertex -> local
  std::int64_t v_count = 0;
  for (std::int64_t ci : communities) {
    if (ci < 0 || ci >= g.num_communities()) throw Error("surplus: community index out of range");
    for (std::int64_t v = g.vertex_offset[ci]; v < g.vertex_offset[ci + 1]; ++v) vmap[v] = v_count++;
  }
  UnionFind uf(v_count);
  std::int64_t edges = 0;
  for (const auto& [u, v] : g.vertex_edges) {
    const auto iu = vmap.find(u), iv = vmap.find(v);
    if (iu == vmap.end() || iv == vmap.end()) continue;
    ++edges;
    uf.unite(iu->second, iv->second);
  }
  if (uf.component_size(0) != v_count) throw Error("surplus: induced subgraph is not connected");
  std::int64_t inter = 0;
  for (const auto& [ca, cb] : g.community_edges) {
    if (comm_set.count(ca) && comm_set.count(cb)) ++inter;
  }
  const std::int64_t sp = edges - v_count + 1;
  const std::int64_t sph = inter - static_cast<std::int64_t>(communities.size()) + 1;
  return {sp, sph};
}

RescaledWalks rescaled_walks(const ExplorationTrace& t, std::int64_t n,
                             const std::vector<double>& grid) {
  RescaledWalks w;
  const double n13 = std::cbrt(static_cast<double>(n));
  const double n23 = n13 * n13;
  const std::int64_t steps = t.steps();
  w.t = grid;
  w.q.reserve(grid.size());
  w.z.reserve(grid.size());
  for (double tt : grid) {
    std::int64_t idx = static_cast<std::int64_t>(std::floor(tt * n23));
    idx = std::clamp<std::int64_t>(idx, 0, steps);
    w.q.push_back(static_cast<double>(t.Q[idx]) / n13);
    w.z.push_back(static_cast<double>(t.Z[idx]) / n23);
  }
  return w;
}

void sort_components(std::vector<ComponentStats>& comps) {
  std::sort(comps.begin(), comps.end(), [](const ComponentStats& a, const ComponentStats& b) {
    if (a.v != b.v) return a.v > b.v;
    if (a.vH != b.vH) return a.vH > b.vH;
    if (a.SP != b.SP) return a.SP > b.SP;
    if (a.SPH != b.SPH) return a.SPH > b.SPH;
    return a.first < b.first;
  });
}

}  // namespace hcm
