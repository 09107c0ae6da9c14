#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "doctest.h"
#include "hcm/community_io.hpp"
#include "hcm/generator.hpp"
#include "hcm/rng.hpp"

using namespace hcm;

namespace {

CommunityDistribution single(const Community& c) {
  return CommunityDistribution({{c, Rational{1, 1}, std::nullopt}});
}

CommunitySequence sequence_of(std::vector<Community> cs) {
  CommunitySequence seq;
  seq.communities = std::move(cs);
  return seq;
}

}  // namespace

TEST_CASE("realize_sequence totals") {
  const CommunitySequence a = realize_sequence(single(make_single_vertex(2)), 10, RealizeMode::Iid, 1);
  CHECK(a.total_half_edges() == 20);
  CHECK(a.total_vertices() == 10);
  CHECK_FALSE(a.parity_fix.has_value());

  const CommunitySequence b = realize_sequence(single(make_star(5)), 4, RealizeMode::Iid, 1);
  CHECK(b.total_half_edges() == 20);
  CHECK(b.total_vertices() == 24);

  CHECK_THROWS_AS(realize_sequence(single(make_star(5)), 0, RealizeMode::Iid, 1), Error);
}

TEST_CASE("exact mode gives exact proportional counts") {
  const CommunityDistribution dist({{make_line(5), Rational{1, 2}, std::nullopt},
                                    {make_single_vertex(3), Rational{1, 2}, std::nullopt}});
  const CommunitySequence seq = realize_sequence(dist, 10, RealizeMode::Exact, 7);
  std::int64_t lines = 0, singles = 0;
  for (const auto& c : seq.communities) (c.vertex_count() == 5 ? lines : singles) += 1;
  CHECK(lines == 5);
  CHECK(singles == 5);

  // entries with explicit counts pin the realization
  const CommunityDistribution counted(
      {{make_line(5), Rational{1, 2}, 3}, {make_single_vertex(3), Rational{1, 2}, 7}});
  const CommunitySequence cs = realize_sequence(counted, 10, RealizeMode::Exact, 7);
  std::int64_t cl = 0;
  for (const auto& c : cs.communities) cl += c.vertex_count() == 5;
  CHECK(cl == 3);
  CHECK_THROWS_AS(realize_sequence(counted, 11, RealizeMode::Exact, 7), Error);
}

TEST_CASE("odd half-edge totals get a recorded parity fix") {
  const CommunitySequence seq = realize_sequence(single(make_single_vertex(3)), 3, RealizeMode::Iid, 5);
  CHECK(seq.total_half_edges() == 10);  // 9 rounded up by one extra half-edge
  REQUIRE(seq.parity_fix.has_value());
  const auto fix = *seq.parity_fix;
  CHECK(seq.communities[fix.community].out_degrees[fix.vertex] == 4);
}

TEST_CASE("pairing: forced match, uniformity over the three matchings of four points") {
  const CommunitySequence two = sequence_of({make_single_vertex(1), make_single_vertex(1)});
  const Pairing p = pair_half_edges(two, 3);
  CHECK(p.partner[0] == 1);
  CHECK(p.partner[1] == 0);

  // ell = 4: the matching is determined by partner[0]; enumeration gives three
  // equally likely matchings.
  const CommunitySequence four = sequence_of(
      {make_single_vertex(1), make_single_vertex(1), make_single_vertex(1), make_single_vertex(1)});
  std::map<std::int64_t, int> freq;
  const int trials = 30000;
  for (int s = 0; s < trials; ++s) freq[pair_half_edges(four, 1000 + s).partner[0]]++;
  REQUIRE(freq.size() == 3);
  const double expect = trials / 3.0;
  const double sigma = std::sqrt(trials * (1.0 / 3.0) * (2.0 / 3.0));
  for (const auto& [partner, count] : freq) {
    CHECK(std::fabs(count - expect) <= 3.0 * sigma);
  }

  const CommunitySequence odd = sequence_of({make_single_vertex(1)});
  CHECK_THROWS_AS(pair_half_edges(odd, 1), Error);
}

TEST_CASE("build_graph edge structure") {
  // two degree-1 singletons: one edge between them
  const CommunitySequence two = sequence_of({make_single_vertex(1), make_single_vertex(1)});
  const HCMGraph g2 = build_graph(two, pair_half_edges(two, 1));
  REQUIRE(g2.vertex_edges.size() == 1);
  CHECK(g2.vertex_edges[0] == std::pair<std::int64_t, std::int64_t>{0, 1});

  // one degree-2 singleton: forced self-loop
  const CommunitySequence loop = sequence_of({make_single_vertex(2)});
  const HCMGraph gl = build_graph(loop, pair_half_edges(loop, 1));
  REQUIRE(gl.vertex_edges.size() == 1);
  CHECK(gl.vertex_edges[0] == std::pair<std::int64_t, std::int64_t>{0, 0});

  // four star(1) communities: 4 internal + 2 paired edges
  const CommunitySequence stars =
      sequence_of({make_star(1), make_star(1), make_star(1), make_star(1)});
  const HCMGraph gs = build_graph(stars, pair_half_edges(stars, 9));
  CHECK(gs.vertex_edges.size() == 6);
  CHECK(gs.community_edges.size() == 2);
}

TEST_CASE("degree preservation and edge count on random graphs") {
  const CommunityDistribution dist({{make_star(3), Rational{1, 4}, std::nullopt},
                                    {make_household(3), Rational{1, 4}, std::nullopt},
                                    {make_line(4), Rational{1, 4}, std::nullopt},
                                    {make_single_vertex(2), Rational{1, 4}, std::nullopt}});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const CommunitySequence seq = realize_sequence(dist, 60, RealizeMode::Iid, seed);
    const HCMGraph g = build_graph(seq, pair_half_edges(seq, seed + 100));
    std::int64_t internal_edges = 0;
    for (const auto& c : g.seq.communities) internal_edges += c.internal_edge_count();
    CHECK(static_cast<std::int64_t>(g.vertex_edges.size()) ==
          internal_edges + g.half_edges.count() / 2);

    std::vector<std::int64_t> degree(g.num_vertices(), 0);
    for (const auto& [u, v] : g.vertex_edges) {
      degree[u] += 1;
      degree[v] += 1;  // a self-loop contributes two
    }
    std::int64_t vbase = 0;
    for (const auto& c : g.seq.communities) {
      const auto internal = internal_degrees(c);
      for (int v = 0; v < c.vertex_count(); ++v) {
        CHECK(degree[vbase + v] == c.out_degrees[v] + internal[v]);
      }
      vbase += c.vertex_count();
    }
  }
}

TEST_CASE("determinism and serialization round trip") {
  const CommunityDistribution dist({{make_star(3), Rational{1, 2}, std::nullopt},
                                    {make_single_vertex(3), Rational{1, 2}, std::nullopt}});
  const CommunitySequence s1 = realize_sequence(dist, 50, RealizeMode::Iid, 42);
  const CommunitySequence s2 = realize_sequence(dist, 50, RealizeMode::Iid, 42);
  const HCMGraph g1 = build_graph(s1, pair_half_edges(s1, 43));
  const HCMGraph g2 = build_graph(s2, pair_half_edges(s2, 43));
  CHECK(graph_to_string(g1) == graph_to_string(g2));

  const CommunitySequence s3 = realize_sequence(dist, 50, RealizeMode::Iid, 44);
  const HCMGraph g3 = build_graph(s3, pair_half_edges(s3, 45));
  CHECK(graph_to_string(g1) != graph_to_string(g3));

  std::istringstream in(graph_to_string(g1));
  const HCMGraph back = parse_graph(in);
  CHECK(graph_to_string(back) == graph_to_string(g1));
}

TEST_CASE("CM special case: community graph equals vertex graph, standalone CM matches") {
  const CommunityDistribution dist({{make_single_vertex(1), Rational{1, 2}, std::nullopt},
                                    {make_single_vertex(3), Rational{1, 2}, std::nullopt}});
  const CommunitySequence seq = realize_sequence(dist, 100, RealizeMode::Iid, 11);
  const HCMGraph g = build_graph(seq, pair_half_edges(seq, 12));
  REQUIRE(g.vertex_edges.size() == g.community_edges.size());
  for (std::size_t i = 0; i < g.vertex_edges.size(); ++i) {
    CHECK(g.vertex_edges[i].first == g.community_edges[i].first);
    CHECK(g.vertex_edges[i].second == g.community_edges[i].second);
  }

  std::vector<int> degrees;
  for (const auto& c : g.seq.communities) degrees.push_back(c.out_degrees[0]);
  CHECK(configuration_model_edges(degrees, 12) == g.vertex_edges);
}

TEST_CASE("pairing is a fixed-point-free involution") {
  const CommunityDistribution dist({{make_star(4), Rational{1, 1}, std::nullopt}});
  const CommunitySequence seq = realize_sequence(dist, 25, RealizeMode::Iid, 2);
  const Pairing p = pair_half_edges(seq, 3);
  for (std::size_t h = 0; h < p.partner.size(); ++h) {
    CHECK(p.partner[h] != static_cast<std::int64_t>(h));
    CHECK(p.partner[p.partner[h]] == static_cast<std::int64_t>(h));
  }
}
