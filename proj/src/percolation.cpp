#include "hcm/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hcm/rng.hpp"
#include "hcm/union_find.hpp"

namespace hcm {

namespace {

// Splits one community into pieces under a keep mask over its internal edges,
// pieces ordered by smallest original vertex, vertices ascending within a piece.
struct SplitPiece {
  Community community;
  std::vector<int> vertices;
};

std::vector<SplitPiece> split_community(const Community& c, const std::vector<char>& keep) {
  const int s = c.vertex_count();
  UnionFind uf(s);
  for (std::size_t e = 0; e < c.edges.size(); ++e) {
    if (keep[e]) uf.unite(c.edges[e].first, c.edges[e].second);
  }
  std::vector<int> piece_of(s, -1);
  std::vector<SplitPiece> pieces;
  for (int v = 0; v < s; ++v) {
    const int root = static_cast<int>(uf.find(v));
    if (piece_of[root] < 0) {
      piece_of[root] = static_cast<int>(pieces.size());
      pieces.emplace_back();
    }
    SplitPiece& p = pieces[piece_of[root]];
    p.vertices.push_back(v);
    p.community.out_degrees.push_back(c.out_degrees[v]);
  }
  std::vector<int> local(s, -1);
  for (const auto& p : pieces) {
    for (std::size_t i = 0; i < p.vertices.size(); ++i) local[p.vertices[i]] = static_cast<int>(i);
  }
  for (std::size_t e = 0; e < c.edges.size(); ++e) {
    if (!keep[e]) continue;
    const auto [u, v] = c.edges[e];
    pieces[piece_of[uf.find(u)]].community.edges.emplace_back(local[u], local[v]);
  }
  return pieces;
}

}  // namespace

IntraPercolation percolate_intra(const CommunitySequence& seq, double pi, std::uint64_t seed) {
  if (pi < 0.0 || pi > 1.0) throw Error("percolate_intra: pi must be in [0,1]");
  const std::uint64_t edge_seed = derive_seed(seed, {0x51AULL});
  IntraPercolation out;
  std::int64_t edge_index = 0;
  std::vector<char> keep;
  for (std::int64_t i = 0; i < seq.size(); ++i) {
    const Community& c = seq.communities[i];
    keep.assign(c.edges.size(), 0);
    for (std::size_t e = 0; e < c.edges.size(); ++e, ++edge_index) {
      keep[e] = uniform01_at(edge_seed, static_cast<std::uint64_t>(edge_index)) < pi;
    }
    for (auto& piece : split_community(c, keep)) {
      out.seq.communities.push_back(std::move(piece.community));
      out.provenance.push_back(PieceProvenance{i, std::move(piece.vertices)});
    }
  }
  return out;
}

Explosion explode(const CommunitySequence& seq, double pi, std::uint64_t seed) {
  if (pi < 0.0 || pi > 1.0) throw Error("explode: pi must be in [0,1]");
  const double detach_prob = 1.0 - std::sqrt(pi);
  const std::uint64_t he_seed = derive_seed(seed, {0x5B2ULL});
  Explosion out;
  out.record.n_bar = seq.size();
  out.seq.communities.reserve(seq.size());
  std::int64_t he_index = 0;
  std::vector<CloneInfo> clones;
  std::vector<Community> clone_communities;
  for (std::int64_t i = 0; i < seq.size(); ++i) {
    const Community& c = seq.communities[i];
    auto& shape = out.record.by_shape[shape_key(c)];
    ++shape.pieces;
    shape.half_edges += c.total_out_degree();
    Community survivor = c;
    for (int v = 0; v < c.vertex_count(); ++v) {
      for (int slot = 0; slot < c.out_degrees[v]; ++slot, ++he_index) {
        if (uniform01_at(he_seed, static_cast<std::uint64_t>(he_index)) < detach_prob) {
          --survivor.out_degrees[v];
          ++shape.explosions;
          Community clone;
          clone.out_degrees.assign(c.vertex_count(), 0);
          clone.out_degrees[v] = 1;
          clone.edges = c.edges;
          clone_communities.push_back(std::move(clone));
          clones.push_back(CloneInfo{-1, i, v, slot});
        }
      }
    }
    out.seq.communities.push_back(std::move(survivor));
  }
  for (std::size_t k = 0; k < clones.size(); ++k) {
    clones[k].clone_index = out.seq.size();
    out.seq.communities.push_back(std::move(clone_communities[k]));
  }
  out.record.clones = std::move(clones);
  out.record.n_tilde = out.seq.size();
  return out;
}

namespace {

// Removes the flagged communities together with all their incident inter-community
// edges; surviving half-edges keep their relative order.
HCMGraph apply_deletion(const HCMGraph& g, const std::vector<char>& deleted) {
  const std::int64_t ell = g.half_edges.count();
  std::vector<char> he_survives(ell, 0);
  for (std::int64_t h = 0; h < ell; ++h) {
    const std::int64_t p = g.pairing.partner[h];
    he_survives[h] = !deleted[g.half_edges.community[h]] && !deleted[g.half_edges.community[p]];
  }
  CommunitySequence seq;
  std::vector<std::int64_t> new_he_of(ell, -1);
  std::int64_t next_he = 0;
  for (std::int64_t i = 0; i < g.num_communities(); ++i) {
    if (deleted[i]) continue;
    Community c = g.seq.communities[i];
    std::fill(c.out_degrees.begin(), c.out_degrees.end(), 0);
    for (std::int64_t h = g.half_edges.community_first[i]; h < g.half_edges.community_first[i + 1];
         ++h) {
      if (he_survives[h]) {
        ++c.out_degrees[g.half_edges.vertex_local[h]];
        new_he_of[h] = next_he++;
      }
    }
    seq.communities.push_back(std::move(c));
  }
  Pairing pairing;
  pairing.partner.assign(next_he, -1);
  for (std::int64_t h = 0; h < ell; ++h) {
    if (he_survives[h]) pairing.partner[new_he_of[h]] = new_he_of[g.pairing.partner[h]];
  }
  return build_graph(std::move(seq), std::move(pairing));
}

HCMGraph percolate_direct(const HCMGraph& g, double pi, std::uint64_t seed) {
  const std::uint64_t intra_seed = derive_seed(seed, {0xD1ULL});
  const std::uint64_t inter_seed = derive_seed(seed, {0xD2ULL});
  const std::int64_t ell = g.half_edges.count();

  std::vector<char> pair_kept(ell, 0);
  for (std::int64_t h = 0; h < ell; ++h) {
    const std::int64_t p = g.pairing.partner[h];
    if (h < p) {
      const bool kept = uniform01_at(inter_seed, static_cast<std::uint64_t>(h)) < pi;
      pair_kept[h] = kept;
      pair_kept[p] = kept;
    }
  }

  CommunitySequence seq;
  // piece id and local vertex index per original global vertex
  std::vector<std::int64_t> piece_of(g.num_vertices(), -1);
  std::vector<int> local_of(g.num_vertices(), -1);
  std::int64_t edge_index = 0;
  std::vector<char> keep;
  for (std::int64_t i = 0; i < g.num_communities(); ++i) {
    const Community& c = g.seq.communities[i];
    keep.assign(c.edges.size(), 0);
    for (std::size_t e = 0; e < c.edges.size(); ++e, ++edge_index) {
      keep[e] = uniform01_at(intra_seed, static_cast<std::uint64_t>(edge_index)) < pi;
    }
    for (auto& piece : split_community(c, keep)) {
      const std::int64_t pid = seq.size();
      for (std::size_t j = 0; j < piece.vertices.size(); ++j) {
        const std::int64_t global_v = g.vertex_offset[i] + piece.vertices[j];
        piece_of[global_v] = pid;
        local_of[global_v] = static_cast<int>(j);
      }
      seq.communities.push_back(std::move(piece.community));
    }
  }
  // Surviving half-edges, in original enumeration order, become the pieces'
  // half-edges; removed pairs drop both halves.
  for (auto& c : seq.communities) std::fill(c.out_degrees.begin(), c.out_degrees.end(), 0);
  std::vector<std::int64_t> piece_he_count(seq.size(), 0);
  std::vector<std::int64_t> he_piece(ell, -1);
  for (std::int64_t h = 0; h < ell; ++h) {
    if (!pair_kept[h]) continue;
    const std::int64_t v = g.half_edges.vertex_global[h];
    he_piece[h] = piece_of[v];
    ++seq.communities[piece_of[v]].out_degrees[local_of[v]];
    ++piece_he_count[piece_of[v]];
  }
  std::vector<std::int64_t> piece_he_first(seq.size() + 1, 0);
  for (std::int64_t p = 0; p < seq.size(); ++p) piece_he_first[p + 1] = piece_he_first[p] + piece_he_count[p];
  std::vector<std::int64_t> cursor(piece_he_first.begin(), piece_he_first.end() - 1);
  std::vector<std::int64_t> new_he_of(ell, -1);
  for (std::int64_t h = 0; h < ell; ++h) {
    if (pair_kept[h]) new_he_of[h] = cursor[he_piece[h]]++;
  }
  Pairing pairing;
  pairing.partner.assign(piece_he_first.back(), -1);
  for (std::int64_t h = 0; h < ell; ++h) {
    if (pair_kept[h]) pairing.partner[new_he_of[h]] = new_he_of[g.pairing.partner[h]];
  }
  return build_graph(std::move(seq), std::move(pairing));
}

}  // namespace

PercolationOutcome percolate_hcm(const HCMGraph& g, const PercolationConfig& cfg) {
  if (cfg.pi < 0.0 || cfg.pi > 1.0) throw Error("percolate_hcm: pi must be in [0,1]");
  PercolationOutcome out;
  if (cfg.mode == PercolationMode::Direct) {
    out.graph = percolate_direct(g, cfg.pi, cfg.seed);
    return out;
  }
  auto s1 = percolate_intra(g.seq, cfg.pi, derive_seed(cfg.seed, {1}));
  auto ex = explode(s1.seq, cfg.pi, derive_seed(cfg.seed, {2}));
  auto pairing = pair_half_edges(ex.seq, derive_seed(cfg.seed, {3}));
  HCMGraph exploded = build_graph(std::move(ex.seq), std::move(pairing));

  std::vector<char> deleted(exploded.num_communities(), 0);
  if (cfg.mode == PercolationMode::Algorithm2S4) {
    for (const auto& clone : ex.record.clones) deleted[clone.clone_index] = 1;
  } else {
    // (S4'): per internal-graph shape, delete as many uniformly chosen
    // degree-one communities of that shape as clones were created of it.
    std::map<std::string, std::int64_t> quota;
    for (const auto& clone : ex.record.clones) {
      ++quota[structure_key(exploded.seq.communities[clone.clone_index])];
    }
    std::map<std::string, std::vector<std::int64_t>> pools;
    for (std::int64_t i = 0; i < exploded.num_communities(); ++i) {
      const Community& c = exploded.seq.communities[i];
      if (c.total_out_degree() != 1) continue;
      const std::string key = structure_key(c);
      if (quota.count(key)) pools[key].push_back(i);
    }
    Rng rng(derive_seed(cfg.seed, {4}));
    for (auto& [key, pool] : pools) {
      const std::int64_t want = quota.at(key);
      if (want > static_cast<std::int64_t>(pool.size())) {
        throw Error("S4': fewer degree-one communities of a shape than clones (impossible)");
      }
      for (std::int64_t k = 0; k < want; ++k) {
        const std::size_t j = k + rng.below(pool.size() - k);
        std::swap(pool[k], pool[j]);
        deleted[pool[k]] = 1;
      }
    }
  }
  for (std::int64_t i = 0; i < exploded.num_communities(); ++i) {
    if (deleted[i]) out.deleted_vertices += exploded.seq.communities[i].vertex_count();
  }
  out.graph = apply_deletion(exploded, deleted);
  out.exploded = std::move(exploded);
  out.record = std::move(ex.record);
  out.deleted = std::move(deleted);
  return out;
}

namespace {

struct MomentAccumulator {
  // Per-replicate totals for ratio estimators over the piece pool.
  std::vector<double> m, s, d, d2, d3, ds;

  void add_replicate(double mm, double ss, double dd, double dd2, double dd3, double dds) {
    m.push_back(mm);
    s.push_back(ss);
    d.push_back(dd);
    d2.push_back(dd2);
    d3.push_back(dd3);
    ds.push_back(dds);
  }

  static MomentEstimate ratio(const std::vector<double>& x, const std::vector<double>& m) {
    const std::size_t n = x.size();
    double sx = 0, sm = 0;
    for (std::size_t i = 0; i < n; ++i) {
      sx += x[i];
      sm += m[i];
    }
    MomentEstimate e;
    e.value = sx / sm;
    const double mbar = sm / static_cast<double>(n);
    double var = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = x[i] - e.value * m[i];
      var += r * r;
    }
    var /= static_cast<double>(n - 1);
    e.se = std::sqrt(var / static_cast<double>(n)) / mbar;
    return e;
  }
};

PercolatedMoments pooled_moments(const CommunityDistribution& dist, double pi, std::int64_t reps,
                                 std::uint64_t seed, bool exploded_pool) {
  if (reps < 2) throw Error("moments: reps must be >= 2");
  if (dist.e_d() <= 0) throw Error("moments: E[D] = 0");
  Rng rng(derive_seed(seed, {0x407ULL}));
  std::vector<double> cumulative(dist.size());
  double acc = 0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    acc += dist.weight(i);
    cumulative[i] = acc;
  }
  cumulative.back() = 1.0;
  const double detach_prob = 1.0 - std::sqrt(pi);

  MomentAccumulator am;
  PercolatedMoments out;
  std::vector<char> keep;
  for (std::int64_t r = 0; r < reps; ++r) {
    const double u = rng.uniform01();
    const std::size_t idx = std::min(
        static_cast<std::size_t>(std::lower_bound(cumulative.begin(), cumulative.end(), u) -
                                 cumulative.begin()),
        dist.size() - 1);
    const Community& c = dist.community(idx);
    keep.assign(c.edges.size(), 0);
    for (std::size_t e = 0; e < c.edges.size(); ++e) keep[e] = rng.uniform01() < pi;
    double mm = 0, ss = 0, dd = 0, dd2 = 0, dd3 = 0, dds = 0;
    auto tally = [&](double s_piece, double k_piece) {
      mm += 1;
      ss += s_piece;
      dd += k_piece;
      dd2 += k_piece * k_piece;
      dd3 += k_piece * k_piece * k_piece;
      dds += k_piece * s_piece;
      ++out.degree_histogram[static_cast<std::int64_t>(k_piece)];
      ++out.pieces;
    };
    for (const auto& piece : split_community(c, keep)) {
      double k = static_cast<double>(piece.community.total_out_degree());
      const double s_piece = static_cast<double>(piece.community.vertex_count());
      if (exploded_pool) {
        std::int64_t detached = 0;
        for (std::int64_t j = 0; j < static_cast<std::int64_t>(k); ++j) {
          if (rng.uniform01() < detach_prob) ++detached;
        }
        k -= static_cast<double>(detached);
        for (std::int64_t j = 0; j < detached; ++j) tally(s_piece, 1.0);
      }
      tally(s_piece, k);
    }
    am.add_replicate(mm, ss, dd, dd2, dd3, dds);
  }
  out.s = MomentAccumulator::ratio(am.s, am.m);
  out.d = MomentAccumulator::ratio(am.d, am.m);
  out.d2 = MomentAccumulator::ratio(am.d2, am.m);
  out.d3 = MomentAccumulator::ratio(am.d3, am.m);
  out.ds = MomentAccumulator::ratio(am.ds, am.m);
  return out;
}

}  // namespace

PercolatedMoments percolated_moments(const CommunityDistribution& dist, double pi,
                                     std::int64_t reps, std::uint64_t seed) {
  return pooled_moments(dist, pi, reps, seed, false);
}

PercolatedMoments exploded_moments(const CommunityDistribution& dist, double pi, std::int64_t reps,
                                   std::uint64_t seed) {
  return pooled_moments(dist, pi, reps, seed, true);
}

}  // namespace hcm
