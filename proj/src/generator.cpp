#include "hcm/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "hcm/rng.hpp"

namespace hcm {

std::int64_t CommunitySequence::total_vertices() const {
  std::int64_t n = 0;
  for (const auto& c : communities) n += c.vertex_count();
  return n;
}

std::int64_t CommunitySequence::total_half_edges() const {
  std::int64_t l = 0;
  for (const auto& c : communities) l += c.total_out_degree();
  return l;
}

std::int64_t CommunitySequence::max_community_size() const {
  std::int64_t m = 0;
  for (const auto& c : communities) m = std::max<std::int64_t>(m, c.vertex_count());
  return m;
}

std::int64_t CommunitySequence::max_degree() const {
  std::int64_t m = 0;
  for (const auto& c : communities) m = std::max(m, c.total_out_degree());
  return m;
}

namespace {

std::vector<std::int64_t> exact_counts(const CommunityDistribution& dist, std::int64_t n) {
  const std::size_t k = dist.size();
  bool any_count = false, all_count = true;
  for (std::size_t i = 0; i < k; ++i) {
    if (dist.entry(i).count) any_count = true;
    else all_count = false;
  }
  std::vector<std::int64_t> counts(k, 0);
  if (any_count) {
    if (!all_count) throw Error("realize_sequence: counts must be given for all entries or none");
    std::int64_t total = 0;
    for (std::size_t i = 0; i < k; ++i) {
      counts[i] = *dist.entry(i).count;
      total += counts[i];
    }
    if (total != n) {
      throw Error("realize_sequence: entry counts sum to " + std::to_string(total) +
                  ", expected n = " + std::to_string(n));
    }
    return counts;
  }
  // Largest-remainder rounding of the weight quotas.
  std::vector<double> remainder(k);
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double quota = dist.weight(i) * static_cast<double>(n);
    counts[i] = static_cast<std::int64_t>(std::floor(quota + 1e-12));
    remainder[i] = quota - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::int64_t r = 0; assigned < n; ++r) {
    ++counts[order[static_cast<std::size_t>(r) % k]];
    ++assigned;
  }
  return counts;
}

void apply_parity_fix(CommunitySequence& seq, Rng& rng) {
  if (seq.total_half_edges() % 2 == 0) return;
  std::int64_t eligible = 0;
  for (const auto& c : seq.communities) {
    for (int d : c.out_degrees) {
      if (d >= 1) ++eligible;
    }
  }
  // ell odd implies at least one vertex with a half-edge.
  std::int64_t pick = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(eligible)));
  for (std::int64_t i = 0; i < seq.size(); ++i) {
    auto& c = seq.communities[i];
    for (int v = 0; v < c.vertex_count(); ++v) {
      if (c.out_degrees[v] >= 1) {
        if (pick == 0) {
          ++c.out_degrees[v];
          seq.parity_fix = ParityFix{i, v};
          return;
        }
        --pick;
      }
    }
  }
  throw Error("parity fix: no eligible vertex found");
}

}  // namespace

CommunitySequence realize_sequence(const CommunityDistribution& dist, std::int64_t n,
                                   RealizeMode mode, std::uint64_t seed) {
  if (n < 1) throw Error("realize_sequence: n must be >= 1");
  Rng rng(derive_seed(seed, {0x5e91ULL}));
  CommunitySequence seq;
  seq.communities.reserve(n);
  if (mode == RealizeMode::Exact) {
    const auto counts = exact_counts(dist, n);
    for (std::size_t i = 0; i < dist.size(); ++i) {
      for (std::int64_t c = 0; c < counts[i]; ++c) seq.communities.push_back(dist.community(i));
    }
  } else {
    std::vector<double> cumulative(dist.size());
    double acc = 0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
      acc += dist.weight(i);
      cumulative[i] = acc;
    }
    cumulative.back() = 1.0;
    for (std::int64_t i = 0; i < n; ++i) {
      const double u = rng.uniform01();
      const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
      const std::size_t idx = static_cast<std::size_t>(it - cumulative.begin());
      seq.communities.push_back(dist.community(std::min(idx, dist.size() - 1)));
    }
  }
  apply_parity_fix(seq, rng);
  return seq;
}

HalfEdgeTable HalfEdgeTable::build(const CommunitySequence& seq) {
  HalfEdgeTable t;
  const std::int64_t ell = seq.total_half_edges();
  t.community.reserve(ell);
  t.vertex_local.reserve(ell);
  t.vertex_global.reserve(ell);
  t.community_first.reserve(seq.size() + 1);
  std::int64_t vertex_base = 0;
  for (std::int64_t i = 0; i < seq.size(); ++i) {
    t.community_first.push_back(t.count());
    const auto& c = seq.communities[i];
    for (int v = 0; v < c.vertex_count(); ++v) {
      for (int s = 0; s < c.out_degrees[v]; ++s) {
        t.community.push_back(static_cast<std::int32_t>(i));
        t.vertex_local.push_back(v);
        t.vertex_global.push_back(vertex_base + v);
      }
    }
    vertex_base += c.vertex_count();
  }
  t.community_first.push_back(t.count());
  return t;
}

Pairing pair_half_edges(const CommunitySequence& seq, std::uint64_t seed) {
  const std::int64_t ell = seq.total_half_edges();
  if (ell % 2 != 0) throw Error("pair_half_edges: odd number of half-edges");
  std::vector<std::int64_t> perm(ell);
  std::iota(perm.begin(), perm.end(), std::int64_t{0});
  Rng rng(derive_seed(seed, {0x9a12ULL}));
  rng.shuffle(perm);
  Pairing p;
  p.partner.assign(ell, -1);
  for (std::int64_t i = 0; i + 1 < ell; i += 2) {
    p.partner[perm[i]] = perm[i + 1];
    p.partner[perm[i + 1]] = perm[i];
  }
  return p;
}

HCMGraph build_graph(CommunitySequence seq, Pairing pairing) {
  HCMGraph g;
  g.half_edges = HalfEdgeTable::build(seq);
  const std::int64_t ell = g.half_edges.count();
  if (static_cast<std::int64_t>(pairing.partner.size()) != ell) {
    throw Error("build_graph: pairing size does not match half-edge count");
  }
  for (std::int64_t h = 0; h < ell; ++h) {
    const std::int64_t p = pairing.partner[h];
    if (p < 0 || p >= ell) throw Error("build_graph: pairing references out-of-range slot");
    if (p == h || pairing.partner[p] != h) throw Error("build_graph: pairing is not an involution");
  }
  g.vertex_offset.reserve(seq.size() + 1);
  std::int64_t base = 0;
  for (const auto& c : seq.communities) {
    g.vertex_offset.push_back(base);
    base += c.vertex_count();
  }
  g.vertex_offset.push_back(base);

  std::int64_t internal_edges = 0;
  for (const auto& c : seq.communities) internal_edges += c.internal_edge_count();
  g.vertex_edges.reserve(internal_edges + ell / 2);
  for (std::int64_t i = 0; i < seq.size(); ++i) {
    const std::int64_t off = g.vertex_offset[i];
    for (const auto& [u, v] : seq.communities[i].edges) g.vertex_edges.emplace_back(off + u, off + v);
  }
  g.community_edges.reserve(ell / 2);
  for (std::int64_t h = 0; h < ell; ++h) {
    const std::int64_t p = pairing.partner[h];
    if (h < p) {
      g.vertex_edges.emplace_back(g.half_edges.vertex_global[h], g.half_edges.vertex_global[p]);
      g.community_edges.emplace_back(g.half_edges.community[h], g.half_edges.community[p]);
    }
  }
  g.seq = std::move(seq);
  g.pairing = std::move(pairing);
  return g;
}

void serialize_graph(const HCMGraph& g, std::ostream& out) {
  out << g.num_communities() << ' ' << g.num_vertices() << ' ' << g.half_edges.count() << '\n';
  for (const auto& c : g.seq.communities) {
    out << c.vertex_count() << ' ' << c.total_out_degree() << ' ' << c.internal_edge_count();
    for (int d : c.out_degrees) out << ' ' << d;
    for (const auto& [u, v] : c.edges) out << ' ' << u << ' ' << v;
    out << '\n';
  }
  for (std::int64_t h = 0; h < g.half_edges.count(); ++h) {
    if (h < g.pairing.partner[h]) out << h << ' ' << g.pairing.partner[h] << '\n';
  }
  if (g.seq.parity_fix) {
    out << "parityfix " << g.seq.parity_fix->community << ' ' << g.seq.parity_fix->vertex << '\n';
  }
}

std::string graph_to_string(const HCMGraph& g) {
  std::ostringstream os;
  serialize_graph(g, os);
  return os.str();
}

HCMGraph parse_graph(std::istream& in) {
  std::int64_t n = 0, big_n = 0, ell = 0;
  if (!(in >> n >> big_n >> ell)) throw Error("graph parse error: bad header");
  CommunitySequence seq;
  seq.communities.reserve(n);
  for (std::int64_t i = 0; i < n; ++i) {
    std::int64_t s = 0, d_total = 0, m = 0;
    if (!(in >> s >> d_total >> m)) throw Error("graph parse error: bad community header");
    Community c;
    c.out_degrees.resize(s);
    for (auto& d : c.out_degrees) {
      if (!(in >> d)) throw Error("graph parse error: bad out-degree");
    }
    c.edges.resize(m);
    for (auto& [u, v] : c.edges) {
      if (!(in >> u >> v)) throw Error("graph parse error: bad internal edge");
    }
    if (c.total_out_degree() != d_total) throw Error("graph parse error: degree sum mismatch");
    seq.communities.push_back(std::move(c));
  }
  Pairing p;
  p.partner.assign(ell, -1);
  for (std::int64_t i = 0; i < ell / 2; ++i) {
    std::int64_t a = 0, b = 0;
    if (!(in >> a >> b)) throw Error("graph parse error: bad pairing line");
    if (a < 0 || b < 0 || a >= ell || b >= ell) throw Error("graph parse error: pairing out of range");
    p.partner[a] = b;
    p.partner[b] = a;
  }
  std::string word;
  if (in >> word) {
    if (word != "parityfix") throw Error("graph parse error: unexpected trailer '" + word + "'");
    ParityFix fix;
    if (!(in >> fix.community >> fix.vertex)) throw Error("graph parse error: bad parityfix");
    seq.parity_fix = fix;
  }
  HCMGraph g = build_graph(std::move(seq), std::move(p));
  if (g.num_vertices() != big_n) throw Error("graph parse error: vertex count mismatch");
  return g;
}

std::vector<std::pair<std::int64_t, std::int64_t>> configuration_model_edges(
    const std::vector<int>& degrees, std::uint64_t seed) {
  std::vector<std::int64_t> owner;
  for (std::size_t v = 0; v < degrees.size(); ++v) {
    if (degrees[v] < 0) throw Error("configuration model: negative degree");
    for (int s = 0; s < degrees[v]; ++s) owner.push_back(static_cast<std::int64_t>(v));
  }
  const std::int64_t ell = static_cast<std::int64_t>(owner.size());
  if (ell % 2 != 0) throw Error("configuration model: odd degree sum");
  std::vector<std::int64_t> perm(ell);
  std::iota(perm.begin(), perm.end(), std::int64_t{0});
  Rng rng(derive_seed(seed, {0x9a12ULL}));
  rng.shuffle(perm);
  std::vector<std::int64_t> partner(ell, -1);
  for (std::int64_t i = 0; i + 1 < ell; i += 2) {
    partner[perm[i]] = perm[i + 1];
    partner[perm[i + 1]] = perm[i];
  }
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;
  edges.reserve(ell / 2);
  for (std::int64_t h = 0; h < ell; ++h) {
    if (h < partner[h]) edges.emplace_back(owner[h], owner[partner[h]]);
  }
  return edges;
}

}  // namespace hcm
