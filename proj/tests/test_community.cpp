#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "hcm/community.hpp"
#include "hcm/community_io.hpp"

using namespace hcm;

TEST_CASE("built-in families have the documented shape") {
  const Community star5 = make_star(5);
  CHECK(star5.vertex_count() == 6);
  CHECK(star5.total_out_degree() == 5);
  CHECK(star5.internal_edge_count() == 5);
  CHECK(star5.out_degrees[0] == 0);

  const Community star1 = make_star(1);
  CHECK(star1.vertex_count() == 2);
  CHECK(star1.internal_edge_count() == 1);
  CHECK(star1.total_out_degree() == 1);

  // star(2) is a path of three vertices whose ends carry the half-edges
  const Community star2 = make_star(2);
  CHECK(star2.vertex_count() == 3);
  CHECK(star2.out_degrees == std::vector<int>{0, 1, 1});

  const Community line5 = make_line(5);
  CHECK(line5.vertex_count() == 5);
  CHECK(line5.total_out_degree() == 2);
  CHECK(line5.internal_edge_count() == 4);
  CHECK(line5.out_degrees == std::vector<int>{1, 0, 0, 0, 1});

  const Community line2 = make_line(2);
  CHECK(line2.out_degrees == std::vector<int>{1, 1});
  CHECK(line2.internal_edge_count() == 1);

  const Community line3 = make_line(3);
  CHECK(line3.internal_edge_count() == 2);
  CHECK(line3.out_degrees[1] == 0);

  const Community hh3 = make_household(3);
  CHECK(hh3.vertex_count() == 3);
  CHECK(hh3.total_out_degree() == 3);
  CHECK(hh3.internal_edge_count() == 3);

  const Community hh1 = make_household(1);
  CHECK(hh1.vertex_count() == 1);
  CHECK(hh1.out_degrees == std::vector<int>{1});

  const Community hh4 = make_household(4);
  CHECK(hh4.internal_edge_count() == 6);
  CHECK(hh4.internal_surplus() == 3);  // 6 - 4 + 1

  const Community sv3 = make_single_vertex(3);
  CHECK(sv3.vertex_count() == 1);
  CHECK(sv3.total_out_degree() == 3);
  CHECK(make_single_vertex(0).total_out_degree() == 0);
  CHECK(make_single_vertex(1).total_out_degree() == 1);

  for (const Community& c : {star5, line5, hh3, hh4, sv3}) {
    CHECK(community_is_connected(c));
    CHECK_NOTHROW(validate_community(c));
    std::int64_t d_sum = 0;
    for (int d : c.out_degrees) d_sum += d;
    CHECK(d_sum == c.total_out_degree());
  }
}

TEST_CASE("household model: degree-k community holds k vertices of total degree k") {
  for (int k = 1; k <= 6; ++k) {
    const Community hh = make_household(k);
    const auto internal = internal_degrees(hh);
    for (int v = 0; v < k; ++v) CHECK(hh.out_degrees[v] + internal[v] == k);
  }
}

TEST_CASE("validation rejects malformed communities") {
  Community self_loop;
  self_loop.out_degrees = {1, 1};
  self_loop.edges = {{0, 0}};
  CHECK_THROWS_AS(validate_community(self_loop), Error);

  Community dup;
  dup.out_degrees = {1, 1};
  dup.edges = {{0, 1}, {1, 0}};
  CHECK_THROWS_AS(validate_community(dup), Error);

  Community disconnected;
  disconnected.out_degrees = {1, 1, 0};
  disconnected.edges = {{0, 1}};
  CHECK_THROWS_AS(validate_community(disconnected), Error);
}

TEST_CASE("distribution moments are exact weighted sums") {
  const CommunityDistribution dist({{make_star(5), Rational{1, 2}, std::nullopt},
                                    {make_household(3), Rational{1, 4}, std::nullopt},
                                    {make_line(5), Rational{1, 4}, std::nullopt}});
  // per-shape values: star5 (s=6,d=5), hh3 (3,3), line5 (5,2)
  CHECK(dist.e_s() == doctest::Approx(0.5 * 6 + 0.25 * 3 + 0.25 * 5).epsilon(1e-12));
  CHECK(dist.e_d() == doctest::Approx(0.5 * 5 + 0.25 * 3 + 0.25 * 2).epsilon(1e-12));
  CHECK(dist.e_d3() == doctest::Approx(0.5 * 125 + 0.25 * 27 + 0.25 * 8).epsilon(1e-12));
  CHECK(dist.e_ds() == doctest::Approx(0.5 * 30 + 0.25 * 9 + 0.25 * 10).epsilon(1e-12));
  CHECK(dist.e_d2s() == doctest::Approx(0.5 * 150 + 0.25 * 27 + 0.25 * 20).epsilon(1e-12));
}

TEST_CASE("nu_D and the condition report") {
  const CommunityDistribution star({{make_star(5), Rational{1, 1}, std::nullopt}});
  CHECK(star.nu_d() == doctest::Approx(4.0).epsilon(1e-12));  // E[D(D-1)]/E[D] = 20/5
  const ConditionReport r = check_conditions(star, 100000, 0.0);
  CHECK(r.e_d_positive);
  CHECK(r.nu == doctest::Approx(4.0));
  CHECK(r.nu_window_distance == doctest::Approx(3.0));  // far from critical at lambda=0
  CHECK(r.s_max == 6);
  CHECK(r.d_max == 5);
  CHECK(r.smax_ok);
  CHECK(r.dmax_ok);
  CHECK_FALSE(r.p_d1_in_open01);  // P(D=1) = 0

  const CommunityDistribution mix({{make_single_vertex(1), Rational{1, 2}, std::nullopt},
                                   {make_single_vertex(3), Rational{1, 2}, std::nullopt}});
  CHECK(mix.nu_d() == doctest::Approx(1.5).epsilon(1e-12));  // (0 + 6)/2 over (1+3)/2
  CHECK(check_conditions(mix, 1000, 0.0).p_d1_in_open01);

  const CommunityDistribution zero({{make_single_vertex(0), Rational{1, 1}, std::nullopt}});
  CHECK_THROWS_AS(zero.nu_d(), Error);
  const ConditionReport rz = check_conditions(zero, 1000, 0.0);
  CHECK_FALSE(rz.e_d_positive);
  CHECK_FALSE(rz.p_d0_lt_1);
}

TEST_CASE("weights normalize exactly and stay rational") {
  const CommunityDistribution dist({{make_single_vertex(1), Rational{2, 1}, std::nullopt},
                                    {make_single_vertex(3), Rational{2, 1}, std::nullopt}});
  CHECK(dist.weight_exact(0) == Rational(1, 2));
  CHECK(dist.weight_exact(1) == Rational(1, 2));
  CHECK(parse_rational("1/2").value() == doctest::Approx(0.5));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("3") == Rational(3, 1));
}

TEST_CASE("labeled-graph equality is label-sensitive") {
  Community a = make_star(2);  // degrees (0,1,1)
  Community b = a;
  b.out_degrees = {1, 0, 1};  // same graph, half-edge moved
  b.edges = {{1, 0}, {1, 2}};
  CHECK(a == a);
  CHECK_FALSE(a == b);
  CHECK(structure_key(make_star(5)) != structure_key(make_line(5)));
  CHECK(shape_key(a) != shape_key(b));
}

TEST_CASE("community file round trip") {
  for (const Community& c : {make_star(5), make_line(5), make_household(4), make_single_vertex(0)}) {
    const Community back = parse_community_string(community_to_string(c));
    CHECK(back == c);
  }
  Community weighted = make_household(3);
  weighted.weight = 2.5;
  CHECK(parse_community_string(community_to_string(weighted)) == weighted);
}

TEST_CASE("community file errors name the offending line") {
  CHECK_THROWS_WITH_AS(parse_community_string("3 2\n1 1 0\n2 2\n"), doctest::Contains("line 3"),
                       Error);
  CHECK_THROWS_WITH_AS(parse_community_string("4 2\n1 1 0 0\n0 1\n2 3\n"),
                       doctest::Contains("not connected"), Error);
  CHECK_THROWS_WITH_AS(parse_community_string("3 3\n1 1 1\n0 1\n1 2\n0 1\n"),
                       doctest::Contains("duplicate"), Error);
  // header degree sum mismatch
  CHECK_THROWS_AS(parse_community_string("2 5\n1 1\n0 1\n"), Error);
}

TEST_CASE("distribution config parses builtins, inline shapes and rational weights") {
  const std::string json = R"({
    "entries": [
      {"community": {"family": "line", "param": 5}, "weight": "1/2"},
      {"community": {"family": "single_vertex", "param": 3}, "weight": "1/4"},
      {"community": {"out_degrees": [1, 0, 0], "edges": [[0,1],[1,2],[0,2]]}, "weight": 0.25, "count": 7}
    ]
  })";
  const CommunityDistribution dist = parse_distribution_json_text(json, "");
  REQUIRE(dist.size() == 3);
  CHECK(dist.community(0) == make_line(5));
  CHECK(dist.weight_exact(0) == Rational(1, 2));
  CHECK(dist.community(2).vertex_count() == 3);
  CHECK(dist.entry(2).count == 7);
  CHECK_THROWS_AS(parse_distribution_json_text("{\"entries\": []}", ""), Error);
  CHECK_THROWS_AS(parse_distribution_json_text("not json", ""), Error);
}

TEST_CASE("two-entry retuning solves nu exactly") {
  const CommunityDistribution half({{make_single_vertex(1), Rational{1, 2}, std::nullopt},
                                    {make_single_vertex(3), Rational{1, 2}, std::nullopt}});
  const CommunityDistribution tuned = tune_two_entry_mixture(half, 0, 1, Rational{1, 1});
  CHECK(tuned.weight_exact(0) == Rational(3, 4));
  CHECK(tuned.weight_exact(1) == Rational(1, 4));
  CHECK(tuned.nu_d() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(tune_two_entry_mixture(half, 0, 1, Rational{100, 1}), Error);
}

TEST_CASE("size weight overrides enter the moments only") {
  Community weighted = make_single_vertex(2);
  weighted.weight = 10.0;
  const CommunityDistribution dist({{weighted, Rational{1, 2}, std::nullopt},
                                    {make_single_vertex(2), Rational{1, 2}, std::nullopt}});
  CHECK(dist.e_s() == doctest::Approx(5.5));  // (10 + 1)/2
  CHECK(dist.e_d() == doctest::Approx(2.0));
}
