#include "hcm/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hcm/community_io.hpp"
#include "hcm/exploration.hpp"
#include "hcm/parallel.hpp"
#include "hcm/percolation.hpp"
#include "hcm/rng.hpp"
#include "json.hpp"

namespace hcm {

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string manifest_json(const std::string& name, const std::string& config_json,
                          std::uint64_t seed) {
  nlohmann::json j;
  j["name"] = name;
  j["config"] = nlohmann::json::parse(config_json);
  j["config_hash"] = fnv1a64(config_json);
  j["seed"] = seed;
  j["version"] = kVersion;
  return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << content;
}

double round3(double x) {
  return static_cast<double>(std::llround(x * 1000.0)) / 1000.0;
}

std::string format3(double x) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(3);
  os << round3(x);
  return os.str();
}

// ---------------------------------------------------------------- tables --

TableReport run_table(const CommunityDistribution& dist, const std::vector<std::int64_t>& n_list,
                      const std::vector<double>& lambda_list) {
  TableReport report;
  report.pi0 = solve_fixed_point(dist);
  report.c_star_value = c_star(dist);
  for (std::int64_t n : n_list) {
    for (double lambda : lambda_list) {
      TableCell cell;
      cell.n = n;
      cell.lambda = lambda;
      try {
        const CriticalWindowSolution sol = solve_pi_critical(dist, n, lambda);
        cell.pi_exact = sol.pi;
        cell.pi_approx = sol.pi_approx;
        cell.nu_at_pi = sol.nu_at_pi;
        cell.residual = sol.residual;
      } catch (const Error& e) {
        cell.error = e.what();
      }
      report.cells.push_back(cell);
    }
  }
  return report;
}

TableReport run_table_star(const std::vector<std::int64_t>& n_list,
                           const std::vector<double>& lambda_list) {
  return run_table(named_catalog("table1"), n_list, lambda_list);
}

TableReport run_table_line(const std::vector<std::int64_t>& n_list,
                           const std::vector<double>& lambda_list) {
  return run_table(named_catalog("table2"), n_list, lambda_list);
}

std::string table_csv(const TableReport& report) {
  std::ostringstream os;
  os << "lambda,n,pi_exact,pi_approx,c_star,nu_at_pi,residual,error\n";
  for (const auto& c : report.cells) {
    os << c.lambda << ',' << c.n << ',';
    if (c.error.empty()) {
      os.precision(17);
      os << c.pi_exact << ',' << c.pi_approx << ',' << report.c_star_value << ',' << c.nu_at_pi
         << ',' << c.residual << ',';
    } else {
      os << ",,,,,\"" << c.error << '"';
    }
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------- figure --

PinoutReport run_figure_pinout(const CommunityDistribution& dist, std::int64_t n,
                               const std::vector<double>& lambda_list, int grid) {
  PinoutReport report;
  report.n = n;
  report.lambda_list = lambda_list;
  for (double lambda : lambda_list) report.curves.push_back(pin_pout_curve(dist, n, lambda, grid));
  return report;
}

std::string pinout_csv(const PinoutReport& report) {
  std::ostringstream os;
  os << "lambda,pi_in,pi_out,in_range\n";
  os.precision(17);
  for (std::size_t i = 0; i < report.curves.size(); ++i) {
    for (const auto& p : report.curves[i].points) {
      os << report.lambda_list[i] << ',' << p.pi_in << ',' << p.pi_out << ',' << (p.in_range ? 1 : 0)
         << '\n';
    }
  }
  return os.str();
}

// --------------------------------------------------------------- scaling --

namespace {

struct ReplicaCensus {
  double n_vertices = 0;
  double v1 = 0, v2 = 0;
  double vh1 = 0;
  double sp1 = 0;
};

ReplicaCensus census_replica(const CommunityDistribution& dist, std::int64_t n,
                             std::uint64_t seed) {
  const CommunitySequence seq = realize_sequence(dist, n, RealizeMode::Exact, derive_seed(seed, {1}));
  Pairing pairing = pair_half_edges(seq, derive_seed(seed, {2}));
  const HCMGraph g = build_graph(seq, std::move(pairing));
  const auto comps = components_union_find(g);
  ReplicaCensus r;
  r.n_vertices = static_cast<double>(g.num_vertices());
  if (!comps.empty()) {
    r.v1 = static_cast<double>(comps[0].v);
    r.vh1 = static_cast<double>(comps[0].vH);
    r.sp1 = static_cast<double>(comps[0].SP);
  }
  if (comps.size() > 1) r.v2 = static_cast<double>(comps[1].v);
  return r;
}

}  // namespace

ScalingReport run_scaling_experiment(const CommunityDistribution& catalog, std::size_t tune_a,
                                     std::size_t tune_b, const std::vector<std::int64_t>& n_list,
                                     double lambda, int replicas, std::uint64_t seed, int jobs) {
  if (replicas < 1) throw Error("run_scaling_experiment: replicas must be >= 1");
  ScalingReport report;
  std::vector<double> log_n, log_med;
  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    const std::int64_t n = n_list[ni];
    const double target = 1.0 + lambda / std::cbrt(static_cast<double>(n));
    CommunityDistribution tuned =
        lambda == 0.0 ? tune_two_entry_mixture(catalog, tune_a, tune_b, Rational{1, 1})
                      : tune_two_entry_mixture(catalog, tune_a, tune_b, target);
    if (ni == 0) {
      report.expected_ratio = tuned.e_ds() / tuned.e_d();
      double e_spd = 0;
      for (std::size_t i = 0; i < tuned.size(); ++i) {
        e_spd += tuned.weight(i) * static_cast<double>(tuned.community(i).internal_surplus()) *
                 static_cast<double>(tuned.community(i).total_out_degree());
      }
      report.surplus_ratio_reference = tuned.e_ds() > 0 ? e_spd / tuned.e_ds() : 0.0;
    }
    std::vector<ReplicaCensus> results(replicas);
    parallel_for(replicas, jobs, [&](std::int64_t r) {
      results[r] = census_replica(tuned, n, derive_seed(seed, {ni, static_cast<std::uint64_t>(r)}));
    });
    ScalingCell cell;
    cell.n = n;
    std::vector<double> v1, v2;
    double ratio_sum = 0, sp_ratio_sum = 0, n_sum = 0;
    for (const auto& r : results) {
      v1.push_back(r.v1);
      v2.push_back(r.v2);
      n_sum += r.n_vertices;
      ratio_sum += r.vh1 > 0 ? r.v1 / r.vh1 : 0.0;
      sp_ratio_sum += r.v1 > 0 ? r.sp1 / r.v1 : 0.0;
    }
    cell.mean_total_vertices = n_sum / static_cast<double>(replicas);
    cell.median_v1 = median(v1);
    cell.q1_v1 = quantile(v1, 0.25);
    cell.q3_v1 = quantile(v1, 0.75);
    cell.median_v2 = median(v2);
    cell.mean_ratio = ratio_sum / static_cast<double>(replicas);
    cell.mean_sp_ratio = sp_ratio_sum / static_cast<double>(replicas);
    report.cells.push_back(cell);
    log_n.push_back(std::log(cell.mean_total_vertices));
    log_med.push_back(std::log(std::max(1.0, cell.median_v1)));
  }
  if (report.cells.size() >= 2) report.slope = regression_slope(log_n, log_med);
  return report;
}

std::string scaling_csv(const ScalingReport& report) {
  std::ostringstream os;
  os << "n,N_mean,median_v1,q1_v1,q3_v1,median_v2,mean_ratio,mean_sp_ratio\n";
  os.precision(17);
  for (const auto& c : report.cells) {
    os << c.n << ',' << c.mean_total_vertices << ',' << c.median_v1 << ',' << c.q1_v1 << ','
       << c.q3_v1 << ',' << c.median_v2 << ',' << c.mean_ratio << ',' << c.mean_sp_ratio << '\n';
  }
  os << "# slope," << report.slope << ",expected_ratio," << report.expected_ratio
     << ",surplus_ratio_reference," << report.surplus_ratio_reference << '\n';
  return os.str();
}

// --------------------------------------------------- percolation equivalence --

PercEquivReport run_percolation_equivalence(const CommunityDistribution& dist, double pi,
                                            std::int64_t n, int replicas, std::uint64_t seed,
                                            int jobs) {
  if (replicas < 2) throw Error("run_percolation_equivalence: replicas must be >= 2");
  PercEquivReport report;
  report.pi = pi;
  report.n = n;
  report.v1_s4.assign(replicas, 0.0);
  report.v1_direct.assign(replicas, 0.0);
  report.v1_s4prime.assign(replicas, 0.0);
  const PercolationMode modes[3] = {PercolationMode::Algorithm2S4, PercolationMode::Direct,
                                    PercolationMode::Algorithm2S4Prime};
  std::vector<double>* samples[3] = {&report.v1_s4, &report.v1_direct, &report.v1_s4prime};
  parallel_for(static_cast<std::int64_t>(replicas) * 3, jobs, [&](std::int64_t cell) {
    const int mode_idx = static_cast<int>(cell % 3);
    const std::int64_t r = cell / 3;
    const std::uint64_t rs = derive_seed(seed, {static_cast<std::uint64_t>(mode_idx),
                                                static_cast<std::uint64_t>(r)});
    const CommunitySequence seq = realize_sequence(dist, n, RealizeMode::Exact, derive_seed(rs, {1}));
    Pairing pairing = pair_half_edges(seq, derive_seed(rs, {2}));
    HCMGraph g = build_graph(seq, std::move(pairing));
    PercolationConfig cfg;
    cfg.pi = pi;
    cfg.mode = modes[mode_idx];
    cfg.seed = derive_seed(rs, {3});
    const PercolationOutcome out = percolate_hcm(g, cfg);
    const auto comps = components_union_find(out.graph);
    const double v1 = comps.empty() ? 0.0 : static_cast<double>(comps[0].v);
    (*samples[mode_idx])[r] = v1 / static_cast<double>(g.num_vertices());
  });
  report.s4_vs_direct = ks_two_sample(report.v1_s4, report.v1_direct);
  report.s4_vs_s4prime = ks_two_sample(report.v1_s4, report.v1_s4prime);
  return report;
}

std::string perc_equiv_csv(const PercEquivReport& report) {
  std::ostringstream os;
  os << "mode,replica,v1_over_N\n";
  os.precision(17);
  for (std::size_t r = 0; r < report.v1_s4.size(); ++r) os << "s4," << r << ',' << report.v1_s4[r] << '\n';
  for (std::size_t r = 0; r < report.v1_direct.size(); ++r)
    os << "direct," << r << ',' << report.v1_direct[r] << '\n';
  for (std::size_t r = 0; r < report.v1_s4prime.size(); ++r)
    os << "s4prime," << r << ',' << report.v1_s4prime[r] << '\n';
  return os.str();
}

std::string perc_equiv_json(const PercEquivReport& report) {
  nlohmann::json j;
  j["pi"] = report.pi;
  j["n"] = report.n;
  j["replicas"] = report.v1_s4.size();
  j["s4_vs_direct"] = {{"ks", report.s4_vs_direct.statistic}, {"p", report.s4_vs_direct.p_value}};
  j["s4_vs_s4prime"] = {{"ks", report.s4_vs_s4prime.statistic},
                        {"p", report.s4_vs_s4prime.p_value}};
  return j.dump(2) + "\n";
}

// --------------------------------------------------------------- l2 diag --

namespace {

double tail_statistic(const CommunityDistribution& dist, std::int64_t n, int top_k,
                      std::uint64_t seed) {
  const CommunitySequence seq = realize_sequence(dist, n, RealizeMode::Exact, derive_seed(seed, {1}));
  Pairing pairing = pair_half_edges(seq, derive_seed(seed, {2}));
  const HCMGraph g = build_graph(seq, std::move(pairing));
  const auto comps = components_union_find(g);
  double tail = 0;
  for (std::size_t i = static_cast<std::size_t>(top_k); i < comps.size(); ++i) {
    tail += static_cast<double>(comps[i].v) * static_cast<double>(comps[i].v);
  }
  return tail / std::pow(static_cast<double>(g.num_vertices()), 4.0 / 3.0);
}

}  // namespace

L2Report run_l2_diagnostic(const CommunityDistribution& dist_small,
                           const std::function<CommunityDistribution(std::int64_t)>& dist_large,
                           const std::vector<std::int64_t>& n_list, int replicas, int top_k,
                           std::uint64_t seed, int jobs) {
  L2Report report;
  for (int which = 0; which < 2; ++which) {
    auto& cells = which == 0 ? report.small_cells : report.large_cells;
    for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
      const std::int64_t n = n_list[ni];
      const CommunityDistribution dist = which == 0 ? dist_small : dist_large(n);
      std::vector<double> stats(replicas, 0.0);
      parallel_for(replicas, jobs, [&](std::int64_t r) {
        stats[r] = tail_statistic(dist, n, top_k,
                                  derive_seed(seed, {static_cast<std::uint64_t>(which), ni,
                                                     static_cast<std::uint64_t>(r)}));
      });
      L2Cell cell;
      cell.n = n;
      cell.median_tail = median(stats);
      cell.q1 = quantile(stats, 0.25);
      cell.q3 = quantile(stats, 0.75);
      cell.e_s2 = dist.e_s2();
      cells.push_back(cell);
    }
  }
  report.small_decreasing = true;
  for (std::size_t i = 1; i < report.small_cells.size(); ++i) {
    if (report.small_cells[i].median_tail >= report.small_cells[i - 1].median_tail) {
      report.small_decreasing = false;
    }
  }
  if (!report.large_cells.empty()) {
    report.large_nonvanishing =
        report.large_cells.back().median_tail >= 0.5 * report.large_cells.front().median_tail;
  }
  return report;
}

std::string l2_csv(const L2Report& report) {
  std::ostringstream os;
  os << "catalog,n,median_tail,q1,q3,e_s2\n";
  os.precision(17);
  for (const auto& c : report.small_cells)
    os << "small," << c.n << ',' << c.median_tail << ',' << c.q1 << ',' << c.q3 << ',' << c.e_s2 << '\n';
  for (const auto& c : report.large_cells)
    os << "large," << c.n << ',' << c.median_tail << ',' << c.q1 << ',' << c.q3 << ',' << c.e_s2 << '\n';
  return os.str();
}

// ----------------------------------------------------- experiment catalogs --

CommunityDistribution catalog_cm_d13_critical() {
  return CommunityDistribution({{make_single_vertex(1), Rational{3, 4}, std::nullopt},
                                {make_single_vertex(3), Rational{1, 4}, std::nullopt}});
}

CommunityDistribution catalog_cm_unit_mean_critical() {
  return CommunityDistribution({{make_single_vertex(0), Rational{1, 3}, std::nullopt},
                                {make_single_vertex(1), Rational{1, 2}, std::nullopt},
                                {make_single_vertex(3), Rational{1, 6}, std::nullopt}});
}

CommunityDistribution catalog_household3_critical() {
  Community leaf = make_household(3);
  leaf.out_degrees = {1, 0, 0};
  return CommunityDistribution(
      {{make_household(3), Rational{1, 4}, std::nullopt}, {leaf, Rational{3, 4}, std::nullopt}});
}

CommunityDistribution catalog_household_small_critical() {
  return CommunityDistribution({{make_household(1), Rational{3, 5}, std::nullopt},
                                {make_household(2), Rational{1, 5}, std::nullopt},
                                {make_household(3), Rational{1, 5}, std::nullopt}});
}

CommunityDistribution l2_heavy_catalog(std::int64_t n, double eps) {
  if (n < 100) throw Error("l2_heavy_catalog: n too small");
  const double log_n = std::log(static_cast<double>(n));
  const std::int64_t heavy_size = std::max<std::int64_t>(
      2, std::llround(eps * std::pow(static_cast<double>(n), 2.0 / 3.0) / log_n));
  const std::int64_t heavy_count =
      std::max<std::int64_t>(1, std::llround(log_n * log_n / eps));
  const std::int64_t rest = n - heavy_count;
  if (rest < 4) throw Error("l2_heavy_catalog: heavy class swallows the catalog");
  const std::int64_t cm3 = rest / 4;
  const std::int64_t cm1 = rest - cm3;
  Community heavy;
  heavy.out_degrees.assign(heavy_size, 0);
  for (std::int64_t i = 0; i + 1 < heavy_size; ++i) {
    heavy.edges.emplace_back(static_cast<int>(i), static_cast<int>(i + 1));
  }
  return CommunityDistribution({{make_single_vertex(1), Rational{cm1, n}, cm1},
                                {make_single_vertex(3), Rational{cm3, n}, cm3},
                                {heavy, Rational{heavy_count, n}, heavy_count}});
}

}  // namespace hcm
