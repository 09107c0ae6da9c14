#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "hcm/kernel.hpp"
#include "hcm/percolation.hpp"
#include "hcm/rng.hpp"

using namespace hcm;

namespace {

CommunityDistribution single(const Community& c) {
  return CommunityDistribution({{c, Rational{1, 1}, std::nullopt}});
}

HCMGraph make_hcm(const CommunityDistribution& dist, std::int64_t n, std::uint64_t seed) {
  const CommunitySequence seq = realize_sequence(dist, n, RealizeMode::Iid, seed);
  return build_graph(seq, pair_half_edges(seq, derive_seed(seed, {1})));
}

}  // namespace

TEST_CASE("intra-community percolation endpoints") {
  const CommunitySequence seq = realize_sequence(single(make_line(5)), 40, RealizeMode::Iid, 1);

  const IntraPercolation keep_all = percolate_intra(seq, 1.0, 2);
  REQUIRE(keep_all.seq.size() == seq.size());
  for (std::int64_t i = 0; i < seq.size(); ++i) {
    CHECK(keep_all.seq.communities[i] == seq.communities[i]);
  }

  const IntraPercolation shatter = percolate_intra(seq, 0.0, 2);
  CHECK(shatter.seq.size() == seq.total_vertices());
  for (const auto& c : shatter.seq.communities) {
    CHECK(c.vertex_count() == 1);
    CHECK(c.internal_edge_count() == 0);
  }
  CHECK(shatter.seq.total_vertices() == seq.total_vertices());
  CHECK(shatter.seq.total_half_edges() == seq.total_half_edges());
}

TEST_CASE("line(5) at pi=1/2 splits into 3 pieces on average") {
  // pieces per tree = 1 + removed edges, so E = 1 + 4*(1-pi) = 3
  const std::int64_t reps = 4000;
  const CommunitySequence seq = realize_sequence(single(make_line(5)), reps, RealizeMode::Iid, 3);
  const IntraPercolation out = percolate_intra(seq, 0.5, 4);
  const double mean_pieces = static_cast<double>(out.seq.size()) / static_cast<double>(reps);
  // removed edges ~ Bin(4, 1/2): sd = 1 per community
  CHECK(std::fabs(mean_pieces - 3.0) <= 3.0 / std::sqrt(static_cast<double>(reps)));
  // provenance covers every original vertex exactly once
  std::int64_t covered = 0;
  for (const auto& p : out.provenance) covered += static_cast<std::int64_t>(p.vertices.size());
  CHECK(covered == seq.total_vertices());
}

TEST_CASE("explosion endpoints and counts") {
  const CommunitySequence seq = realize_sequence(single(make_household(3)), 300, RealizeMode::Iid, 5);

  const Explosion none = explode(seq, 1.0, 6);
  CHECK(none.record.n_tilde == none.record.n_bar);
  CHECK(none.record.clones.empty());

  const Explosion all = explode(seq, 0.0, 6);
  CHECK(all.record.n_tilde == all.record.n_bar + seq.total_half_edges());
  for (std::int64_t i = 0; i < seq.size(); ++i) {
    CHECK(all.seq.communities[i].total_out_degree() == 0);
  }
  for (const auto& clone : all.record.clones) {
    const Community& c = all.seq.communities[clone.clone_index];
    CHECK(c.total_out_degree() == 1);
    CHECK(c.vertex_count() == seq.communities[clone.source_piece].vertex_count());
    CHECK(c.edges == seq.communities[clone.source_piece].edges);
  }
}

TEST_CASE("explosion rate concentrates at 1 - sqrt(pi)") {
  const double pi = 0.6;
  const double q = 1.0 - std::sqrt(pi);
  const std::int64_t n = 100000;
  const CommunitySequence seq =
      realize_sequence(single(make_single_vertex(2)), n, RealizeMode::Iid, 7);
  const Explosion ex = explode(seq, pi, 8);
  const double ell = static_cast<double>(seq.total_half_edges());
  const double rate = static_cast<double>(ex.record.n_tilde - ex.record.n_bar) / ell;
  CHECK(std::fabs(rate - q) <= 3.0 * std::sqrt(q * (1.0 - q) / ell));
  // matches the per-shape ledger
  std::int64_t explosions = 0;
  for (const auto& [key, sc] : ex.record.by_shape) explosions += sc.explosions;
  CHECK(explosions == ex.record.n_tilde - ex.record.n_bar);
}

TEST_CASE("E[n_tilde / n_bar] matches 1 + E[D^pi](1 - sqrt(pi))") {
  const double pi = 0.49;
  const CommunityDistribution dist({{make_line(5), Rational{1, 2}, std::nullopt},
                                    {make_single_vertex(3), Rational{1, 2}, std::nullopt}});
  const CommunitySequence seq = realize_sequence(dist, 100000, RealizeMode::Exact, 9);
  const IntraPercolation s1 = percolate_intra(seq, pi, 10);
  const Explosion ex = explode(s1.seq, pi, 11);
  const double ratio =
      static_cast<double>(ex.record.n_tilde) / static_cast<double>(ex.record.n_bar);
  // E[D^pi] = ell / n_bar on this realization; explosions ~ Bin(ell, 1-sqrt(pi))
  const double ell = static_cast<double>(s1.seq.total_half_edges());
  const double q = 1.0 - std::sqrt(pi);
  const double expected = 1.0 + ell / static_cast<double>(ex.record.n_bar) * q;
  const double sigma = std::sqrt(ell * q * (1.0 - q)) / static_cast<double>(ex.record.n_bar);
  CHECK(std::fabs(ratio - expected) <= 3.0 * sigma);
}

TEST_CASE("algorithm 2 conserves vertices and deletes exactly the clone mass") {
  const HCMGraph g = make_hcm(single(make_household(3)), 500, 12);
  for (const double pi : {0.3, 0.7, 1.0}) {
    PercolationConfig cfg;
    cfg.pi = pi;
    cfg.mode = PercolationMode::Algorithm2S4;
    cfg.seed = 13;
    const PercolationOutcome out = percolate_hcm(g, cfg);
    REQUIRE(out.record.has_value());
    REQUIRE(out.exploded.has_value());
    std::int64_t clone_mass = 0;
    for (const auto& clone : out.record->clones) {
      clone_mass += out.exploded->seq.communities[clone.clone_index].vertex_count();
      CHECK(out.exploded->seq.communities[clone.clone_index].total_out_degree() == 1);
    }
    CHECK(out.exploded->num_vertices() == g.num_vertices() + clone_mass);
    CHECK(out.deleted_vertices == clone_mass);
    CHECK(out.graph.num_vertices() == g.num_vertices());
  }
}

TEST_CASE("pi=1 direct percolation is the identity, bit-exact") {
  const CommunityDistribution dist({{make_household(3), Rational{1, 2}, std::nullopt},
                                    {make_line(4), Rational{1, 2}, std::nullopt}});
  const HCMGraph g = make_hcm(dist, 200, 14);
  PercolationConfig cfg;
  cfg.pi = 1.0;
  cfg.mode = PercolationMode::Direct;
  cfg.seed = 15;
  const PercolationOutcome out = percolate_hcm(g, cfg);
  CHECK(graph_to_string(out.graph) == graph_to_string(g));
}

TEST_CASE("pi=1 algorithm 2 keeps totals; pi=0 shatters to intra pieces") {
  const HCMGraph g = make_hcm(single(make_household(3)), 300, 16);
  PercolationConfig cfg;
  cfg.mode = PercolationMode::Algorithm2S4;
  cfg.seed = 17;

  cfg.pi = 1.0;
  const PercolationOutcome same = percolate_hcm(g, cfg);
  CHECK(same.graph.num_vertices() == g.num_vertices());
  CHECK(same.graph.half_edges.count() == g.half_edges.count());
  CHECK(same.record->clones.empty());

  cfg.pi = 0.0;
  for (const auto mode : {PercolationMode::Algorithm2S4, PercolationMode::Direct}) {
    cfg.mode = mode;
    const PercolationOutcome out = percolate_hcm(g, cfg);
    const auto comps = components_union_find(out.graph);
    CHECK(static_cast<std::int64_t>(comps.size()) == g.num_vertices());
    CHECK(comps[0].v == 1);
  }
}

TEST_CASE("monotone coupling: components grow with pi under shared draws") {
  const HCMGraph g = make_hcm(single(make_household(3)), 2000, 18);
  PercolationConfig cfg;
  cfg.mode = PercolationMode::Direct;
  cfg.seed = 19;  // same seed -> same per-edge uniforms across pi
  std::int64_t prev_v1 = 0;
  std::size_t prev_count = static_cast<std::size_t>(g.num_vertices()) + 1;
  for (const double pi : {0.2, 0.5, 0.8, 1.0}) {
    cfg.pi = pi;
    const auto comps = components_union_find(percolate_hcm(g, cfg).graph);
    CHECK(comps[0].v >= prev_v1);
    CHECK(comps.size() <= prev_count);
    prev_v1 = comps[0].v;
    prev_count = comps.size();
  }
}

TEST_CASE("S4' deletes the same mass from the degree-one pools") {
  const HCMGraph g = make_hcm(single(make_household(3)), 400, 20);
  PercolationConfig cfg;
  cfg.pi = 0.6;
  cfg.mode = PercolationMode::Algorithm2S4Prime;
  cfg.seed = 21;
  const PercolationOutcome out = percolate_hcm(g, cfg);
  CHECK(out.graph.num_vertices() == g.num_vertices());
  std::int64_t deleted = 0;
  for (char d : out.deleted) deleted += d;
  CHECK(deleted == static_cast<std::int64_t>(out.record->clones.size()));
  for (std::size_t i = 0; i < out.deleted.size(); ++i) {
    if (out.deleted[i]) CHECK(out.exploded->seq.communities[i].total_out_degree() == 1);
  }
}

TEST_CASE("percolated moments: single vertices are invariant, pi=1 is exact") {
  const CommunityDistribution sv = single(make_single_vertex(3));
  const PercolatedMoments a = percolated_moments(sv, 0.3, 2000, 22);
  const PercolatedMoments b = percolated_moments(sv, 0.9, 2000, 23);
  CHECK(a.s.value == 1.0);
  CHECK(a.d.value == 3.0);
  CHECK(a.d.se == 0.0);
  CHECK(b.d.value == 3.0);
  CHECK(a.d3.value == 27.0);

  // mixed catalog at pi=1: pieces are the drawn communities themselves, so the
  // estimates match the catalog moments up to sampling error only
  const CommunityDistribution mix({{make_line(5), Rational{1, 2}, std::nullopt},
                                   {make_single_vertex(3), Rational{1, 2}, std::nullopt}});
  const PercolatedMoments full = percolated_moments(mix, 1.0, 20000, 24);
  CHECK(std::fabs(full.s.value - mix.e_s()) <= 4.0 * full.s.se);
  CHECK(std::fabs(full.d.value - mix.e_d()) <= 4.0 * full.d.se);
  CHECK(std::fabs(full.ds.value - mix.e_ds()) <= 4.0 * full.ds.se);

  CHECK_THROWS_AS(percolated_moments(single(make_single_vertex(0)), 0.5, 10, 1), Error);
}

TEST_CASE("percolated moments reproduce nu_{D^pi} for stars") {
  const double pi = 0.7;
  const CommunityDistribution star = single(make_star(5));
  const PercolatedMoments m = percolated_moments(star, pi, 60000, 25);
  const double nu_mc = (m.d2.value - m.d.value) / m.d.value;
  const double nu_true = pi * pi * 4.0;  // nu_{D^(pi)} for star(5)
  const double se = (m.d2.se + (1.0 + nu_true) * m.d.se) / m.d.value;
  CHECK(std::fabs(nu_mc - nu_true) <= 3.0 * se);
}

TEST_CASE("pool degree histogram matches the size-biased piece formula") {
  // P(D^pi = k | D^pi >= 1) proportional to sum_v d_v g(H,v,k,pi)/k
  const double pi = 0.55;
  const Community star = make_star(4);
  const PercolatedMoments m = percolated_moments(single(star), pi, 60000, 26);
  double denom = 0;
  std::vector<double> expected(star.total_out_degree() + 1, 0.0);
  for (int v = 0; v < star.vertex_count(); ++v) {
    if (star.out_degrees[v] == 0) continue;
    for (std::int64_t k = 1; k <= star.total_out_degree(); ++k) {
      const double term = star.out_degrees[v] * exact_g(star, v, k, pi) / static_cast<double>(k);
      expected[k] += term;
      denom += term;
    }
  }
  std::int64_t pool_positive = 0;
  for (const auto& [k, count] : m.degree_histogram) {
    if (k >= 1) pool_positive += count;
  }
  for (std::int64_t k = 1; k <= star.total_out_degree(); ++k) {
    const double p_expected = expected[k] / denom;
    const auto it = m.degree_histogram.find(k);
    const double p_pool =
        it == m.degree_histogram.end()
            ? 0.0
            : static_cast<double>(it->second) / static_cast<double>(pool_positive);
    const double se = std::sqrt(p_expected * (1 - p_expected) / static_cast<double>(pool_positive));
    CHECK(std::fabs(p_pool - p_expected) <= 4.0 * se + 1e-9);
  }
}

TEST_CASE("exploded moments match the analytic thinning for single-vertex catalogs") {
  const double pi = 0.6;
  const double root = std::sqrt(pi);
  const CommunityDistribution dist({{make_single_vertex(1), Rational{1, 2}, std::nullopt},
                                    {make_single_vertex(3), Rational{1, 2}, std::nullopt}});
  const PercolatedMoments m = exploded_moments(dist, pi, 80000, 27);
  const double ed = dist.e_d();
  const double denom = 1.0 + ed * (1.0 - root);
  const double e_dt = ed / denom;  // retained plus unit-degree clones
  double e_d2_kept = 0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const double d = static_cast<double>(dist.community(i).total_out_degree());
    e_d2_kept += dist.weight(i) * (d * root * (1 - root) + d * d * pi);
  }
  const double e_d2t = (e_d2_kept + ed * (1.0 - root)) / denom;
  CHECK(m.s.value == 1.0);
  CHECK(std::fabs(m.d.value - e_dt) <= 4.0 * m.d.se);
  CHECK(std::fabs(m.d2.value - e_d2t) <= 4.0 * m.d2.se);
}
