// hcmlab: generate hierarchical configuration models, run the critical
// exploration, percolate, solve the critical window, and batch the worked
// experiments. CSV goes to --out; summaries print to stdout.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hcm/community_io.hpp"
#include "hcm/experiments.hpp"
#include "hcm/exploration.hpp"
#include "hcm/percolation.hpp"
#include "hcm/rng.hpp"
#include "hcm/scaling_limit.hpp"

namespace {

using namespace hcm;

CommunityDistribution resolve_dist(const std::string& dist_path, const std::string& catalog) {
  if (!dist_path.empty()) return load_distribution_file(dist_path);
  if (catalog == "star5" || catalog == "table1") return named_catalog("table1");
  if (catalog == "line-mix" || catalog == "table2") return named_catalog("table2");
  if (catalog == "cm-d13") return catalog_cm_d13_critical();
  if (catalog == "cm-unit") return catalog_cm_unit_mean_critical();
  if (catalog == "household3") return catalog_household3_critical();
  if (catalog == "households-small") return catalog_household_small_critical();
  throw Error("no --dist file and unknown --catalog '" + catalog + "'");
}

std::string out_path(const std::string& dir, const std::string& file) {
  return dir.empty() ? file : dir + "/" + file;
}

void emit(const std::string& dir, const std::string& name, const std::string& csv,
          const std::string& config_json, std::uint64_t seed) {
  if (dir.empty()) return;
  write_text_file(out_path(dir, name + ".csv"), csv);
  write_text_file(out_path(dir, name + "_manifest.json"), manifest_json(name, config_json, seed));
}

void print_table(const TableReport& report) {
  std::cout << "lambda        n   pi_n(lambda)   approx\n";
  for (const auto& c : report.cells) {
    std::cout << c.lambda << '\t' << c.n << '\t';
    if (c.error.empty()) {
      std::cout << format3(c.pi_exact) << '\t' << format3(c.pi_approx) << '\n';
    } else {
      std::cout << "-\t-\t(" << c.error << ")\n";
    }
  }
  std::cout << "pi_n(0) = " << format3(report.pi0) << ", c* = " << report.c_star_value << "\n";
}

HCMGraph graph_from_options(const std::string& graph_path, const std::string& dist_path,
                            const std::string& catalog, std::int64_t n, const std::string& mode,
                            std::uint64_t seed) {
  if (!graph_path.empty()) {
    std::ifstream in(graph_path);
    if (!in) throw Error("cannot open graph file: " + graph_path);
    return parse_graph(in);
  }
  const CommunityDistribution dist = resolve_dist(dist_path, catalog);
  const RealizeMode rm = mode == "exact" ? RealizeMode::Exact : RealizeMode::Iid;
  CommunitySequence seq = realize_sequence(dist, n, rm, derive_seed(seed, {1}));
  Pairing pairing = pair_half_edges(seq, derive_seed(seed, {2}));
  return build_graph(std::move(seq), std::move(pairing));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hierarchical configuration model laboratory"};
  app.require_subcommand(1);

  std::string dist_path, catalog, graph_path, out_dir, mode = "iid";
  std::int64_t n = 100000;
  double lambda = 0.0, pi = 1.0;
  int replicas = 200, jobs = 0, grid = 200;
  std::uint64_t seed = kDefaultMasterSeed;
  std::vector<std::int64_t> n_list{100000, 1000000};
  std::vector<double> lambda_list{-10, -1, 0, 1, 10};
  bool want_curve = false, want_approx = false, dump_walk = false;

  auto add_common = [&](CLI::App* cmd, bool with_dist) {
    cmd->add_option("--seed", seed, "master seed");
    cmd->add_option("--jobs", jobs, "worker threads (0 = hardware)");
    cmd->add_option("--out", out_dir, "output directory for CSV + manifest");
    if (with_dist) {
      cmd->add_option("--dist", dist_path, "distribution config file (JSON)");
      cmd->add_option("--catalog", catalog, "built-in catalog name");
    }
  };

  auto* cmd_table_star = app.add_subcommand("table-star", "pi_n(lambda) grid for star(5) communities");
  cmd_table_star->add_option("--n", n_list, "n values")->delimiter(',');
  cmd_table_star->add_option("--lambda", lambda_list, "lambda values")->delimiter(',');
  add_common(cmd_table_star, false);

  auto* cmd_table_line = app.add_subcommand("table-line", "pi_n(lambda) grid for the line(5)+single-vertex catalog");
  cmd_table_line->add_option("--n", n_list, "n values")->delimiter(',');
  cmd_table_line->add_option("--lambda", lambda_list, "lambda values")->delimiter(',');
  add_common(cmd_table_line, false);

  auto* cmd_pinout = app.add_subcommand("figure-pinout", "pi_out as a function of pi_in, with diagonal intersection");
  cmd_pinout->add_option("--n", n, "number of communities");
  cmd_pinout->add_option("--lambda", lambda_list, "lambda values")->delimiter(',');
  cmd_pinout->add_option("--grid", grid, "grid points in (0,1]");
  add_common(cmd_pinout, true);

  std::vector<std::int64_t> scaling_n{10000, 30000, 100000};
  std::vector<std::size_t> tune{0, 1};
  double slope_min = 0.0, slope_max = 0.0;
  auto* cmd_scaling = app.add_subcommand("scaling", "critical component-size scaling experiment");
  cmd_scaling->add_option("--n", scaling_n, "n values")->delimiter(',');
  cmd_scaling->add_option("--lambda", lambda, "window location");
  cmd_scaling->add_option("--replicas", replicas, "replicas per n");
  cmd_scaling->add_option("--tune", tune, "two catalog entries retuned per n")->delimiter(',');
  cmd_scaling->add_option("--slope-min", slope_min, "fail below this slope");
  cmd_scaling->add_option("--slope-max", slope_max, "fail above this slope");
  add_common(cmd_scaling, true);

  auto* cmd_perc_equiv = app.add_subcommand("perc-equiv", "KS test: Algorithm 2 vs direct bond percolation");
  cmd_perc_equiv->add_option("--pi", pi, "bond retention probability");
  cmd_perc_equiv->add_option("--n", n, "number of communities");
  cmd_perc_equiv->add_option("--replicas", replicas, "replicas per mode");
  add_common(cmd_perc_equiv, true);

  std::vector<std::int64_t> l2_n{10000, 30000, 100000};
  int l2_reps = 50, l2_k = 10;
  double l2_eps = 1.0;
  auto* cmd_l2 = app.add_subcommand("l2-diag", "tail-sum diagnostic for the l2 convergence condition");
  cmd_l2->add_option("--n", l2_n, "n values")->delimiter(',');
  cmd_l2->add_option("--replicas", l2_reps, "replicas per n");
  cmd_l2->add_option("--top-k", l2_k, "components excluded from the tail");
  cmd_l2->add_option("--eps", l2_eps, "heavy-class scale for the constructed catalog");
  add_common(cmd_l2, false);

  auto* cmd_generate = app.add_subcommand("generate", "realize a HCM and write its serialization");
  cmd_generate->add_option("--n", n, "number of communities");
  cmd_generate->add_option("--mode", mode, "iid or exact");
  add_common(cmd_generate, true);

  auto* cmd_explore = app.add_subcommand("explore", "run the exploration walk and component census");
  cmd_explore->add_option("--graph", graph_path, "serialized graph file");
  cmd_explore->add_option("--n", n, "number of communities (when generating)");
  cmd_explore->add_option("--mode", mode, "iid or exact");
  cmd_explore->add_flag("--dump-walk", dump_walk, "also write the full (i, Q, Z) walk");
  add_common(cmd_explore, true);

  auto* cmd_percolate = app.add_subcommand("percolate", "bond percolation replicas with summary CSV");
  cmd_percolate->add_option("--graph", graph_path, "serialized graph file");
  cmd_percolate->add_option("--n", n, "number of communities (when generating)");
  cmd_percolate->add_option("--pi", pi, "bond retention probability");
  cmd_percolate->add_option("--mode", mode, "s4, s4prime or direct");
  cmd_percolate->add_option("--replicas", replicas, "replicas");
  add_common(cmd_percolate, true);

  auto* cmd_window = app.add_subcommand("critical-window", "solve pi_n(lambda) for a catalog");
  cmd_window->add_option("--n", n, "number of communities");
  cmd_window->add_option("--lambda", lambda, "window location");
  cmd_window->add_flag("--curve", want_curve, "emit the pi_in/pi_out curve");
  cmd_window->add_option("--grid", grid, "curve grid points");
  cmd_window->add_flag("--approx", want_approx, "print only the first-order approximation");
  add_common(cmd_window, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_table_star || *cmd_table_line) {
      const bool star = static_cast<bool>(*cmd_table_star);
      const TableReport report =
          star ? run_table_star(n_list, lambda_list) : run_table_line(n_list, lambda_list);
      print_table(report);
      std::ostringstream cfg;
      cfg << "{\"catalog\":\"" << (star ? "table1" : "table2") << "\"}";
      emit(out_dir, star ? "table_star" : "table_line", table_csv(report), cfg.str(), seed);
      return 0;
    }
    if (*cmd_pinout) {
      const auto dist = resolve_dist(dist_path, catalog.empty() ? "table1" : catalog);
      const PinoutReport report = run_figure_pinout(dist, n, lambda_list, grid);
      for (std::size_t i = 0; i < report.curves.size(); ++i) {
        std::cout << "lambda=" << report.lambda_list[i] << ": intersection ";
        if (report.curves[i].intersection) {
          std::cout << format3(*report.curves[i].intersection) << '\n';
        } else {
          std::cout << "not in range\n";
        }
      }
      std::ostringstream cfg;
      cfg << "{\"n\":" << n << ",\"grid\":" << grid << "}";
      emit(out_dir, "figure_pinout", pinout_csv(report), cfg.str(), seed);
      return 0;
    }
    if (*cmd_scaling) {
      const auto dist = catalog.empty() && dist_path.empty() ? catalog_cm_d13_critical()
                                                             : resolve_dist(dist_path, catalog);
      const ScalingReport report = run_scaling_experiment(dist, tune.at(0), tune.at(1), scaling_n,
                                                          lambda, replicas, seed, jobs);
      std::cout << "slope = " << report.slope << " (expected ratio E[DS]/E[D] = "
                << report.expected_ratio << ")\n";
      for (const auto& c : report.cells) {
        std::cout << "n=" << c.n << " median v(C1)=" << c.median_v1
                  << " mean v/vH=" << c.mean_ratio << "\n";
      }
      std::ostringstream cfg;
      cfg << "{\"lambda\":" << lambda << ",\"replicas\":" << replicas << "}";
      emit(out_dir, "scaling", scaling_csv(report), cfg.str(), seed);
      if (slope_max > 0.0 && (report.slope < slope_min || report.slope > slope_max)) return 1;
      return 0;
    }
    if (*cmd_perc_equiv) {
      const auto dist = catalog.empty() && dist_path.empty()
                            ? CommunityDistribution({{make_household(3), Rational{1, 1}, std::nullopt}})
                            : resolve_dist(dist_path, catalog);
      const PercEquivReport report =
          run_percolation_equivalence(dist, pi, n, replicas, seed, jobs);
      std::cout << "s4 vs direct: KS=" << report.s4_vs_direct.statistic
                << " p=" << report.s4_vs_direct.p_value << "\n"
                << "s4 vs s4':   KS=" << report.s4_vs_s4prime.statistic
                << " p=" << report.s4_vs_s4prime.p_value << "\n";
      std::ostringstream cfg;
      cfg << "{\"pi\":" << pi << ",\"n\":" << n << ",\"replicas\":" << replicas << "}";
      emit(out_dir, "perc_equiv", perc_equiv_csv(report), cfg.str(), seed);
      if (!out_dir.empty()) {
        write_text_file(out_path(out_dir, "perc_equiv_report.json"), perc_equiv_json(report));
      }
      return (report.s4_vs_direct.p_value > 0.01 && report.s4_vs_s4prime.p_value > 0.01) ? 0 : 1;
    }
    if (*cmd_l2) {
      const double eps = l2_eps;
      const L2Report report = run_l2_diagnostic(
          catalog_household_small_critical(),
          [eps](std::int64_t nn) { return l2_heavy_catalog(nn, eps); }, l2_n, l2_reps, l2_k, seed,
          jobs);
      for (const auto& c : report.small_cells)
        std::cout << "small n=" << c.n << " median tail=" << c.median_tail << "\n";
      for (const auto& c : report.large_cells)
        std::cout << "large n=" << c.n << " median tail=" << c.median_tail << "\n";
      std::cout << "small decreasing: " << (report.small_decreasing ? "yes" : "no")
                << ", large non-vanishing: " << (report.large_nonvanishing ? "yes" : "no") << "\n";
      std::ostringstream cfg;
      cfg << "{\"replicas\":" << l2_reps << ",\"top_k\":" << l2_k << ",\"eps\":" << eps << "}";
      emit(out_dir, "l2_diag", l2_csv(report), cfg.str(), seed);
      return (report.small_decreasing && report.large_nonvanishing) ? 0 : 1;
    }
    if (*cmd_generate) {
      const HCMGraph g = graph_from_options("", dist_path, catalog, n, mode, seed);
      const std::string text = graph_to_string(g);
      if (out_dir.empty()) {
        std::cout << text;
      } else {
        write_text_file(out_path(out_dir, "graph.txt"), text);
        std::ostringstream cfg;
        cfg << "{\"n\":" << n << ",\"mode\":\"" << mode << "\"}";
        write_text_file(out_path(out_dir, "graph_manifest.json"),
                        manifest_json("generate", cfg.str(), seed));
      }
      return 0;
    }
    if (*cmd_explore) {
      const HCMGraph g = graph_from_options(graph_path, dist_path, catalog, n, mode, seed);
      const ExplorationTrace trace = explore(g, derive_seed(seed, {3}));
      const auto comps = components_from_trace(trace, g);
      std::ostringstream csv;
      csv << "k,tau_k,v,vH,SP,SPH\n";
      for (std::size_t k = 0; k < comps.size(); ++k) {
        csv << k + 1 << ',' << (k < trace.tau.size() ? trace.tau[k] : 0) << ',' << comps[k].v << ','
            << comps[k].vH << ',' << comps[k].SP << ',' << comps[k].SPH << '\n';
      }
      std::cout << "components: " << comps.size() << ", largest v = "
                << (comps.empty() ? 0 : comps[0].v) << "\n";
      if (!out_dir.empty()) {
        write_text_file(out_path(out_dir, "components.csv"), csv.str());
        if (dump_walk) {
          std::ostringstream walk;
          walk << "i,Q,Z\n";
          for (std::size_t i = 0; i < trace.Q.size(); ++i)
            walk << i << ',' << trace.Q[i] << ',' << trace.Z[i] << '\n';
          write_text_file(out_path(out_dir, "walk.csv"), walk.str());
        }
        std::ostringstream cfg;
        cfg << "{\"n\":" << g.num_communities() << "}";
        write_text_file(out_path(out_dir, "explore_manifest.json"),
                        manifest_json("explore", cfg.str(), seed));
      }
      return 0;
    }
    if (*cmd_percolate) {
      PercolationConfig cfg;
      cfg.pi = pi;
      cfg.mode = mode == "direct"    ? PercolationMode::Direct
                 : mode == "s4prime" ? PercolationMode::Algorithm2S4Prime
                                     : PercolationMode::Algorithm2S4;
      std::ostringstream csv;
      csv << "replica,pi,mode,n,n_bar,n_tilde,deleted_vertices,top10_v\n";
      for (int r = 0; r < replicas; ++r) {
        const std::uint64_t rs = derive_seed(seed, {static_cast<std::uint64_t>(r)});
        const HCMGraph g = graph_from_options(graph_path, dist_path, catalog, n, "iid", rs);
        cfg.seed = derive_seed(rs, {7});
        const PercolationOutcome out = percolate_hcm(g, cfg);
        const auto comps = components_union_find(out.graph);
        csv << r << ',' << pi << ',' << mode << ',' << g.num_communities() << ','
            << (out.record ? out.record->n_bar : g.num_communities()) << ','
            << (out.record ? out.record->n_tilde : g.num_communities()) << ','
            << out.deleted_vertices << ',';
        for (std::size_t i = 0; i < comps.size() && i < 10; ++i) {
          csv << (i ? ";" : "") << comps[i].v;
        }
        csv << '\n';
      }
      std::cout << csv.str();
      std::ostringstream cfgj;
      cfgj << "{\"pi\":" << pi << ",\"mode\":\"" << mode << "\",\"replicas\":" << replicas << "}";
      emit(out_dir, "percolate", csv.str(), cfgj.str(), seed);
      return 0;
    }
    if (*cmd_window) {
      const auto dist = resolve_dist(dist_path, catalog.empty() ? "table1" : catalog);
      std::ostringstream csv;
      csv << "lambda,n,pi_exact,pi_approx,c_star,nu_at_pi,residual\n";
      if (want_approx) {
        const double approx = pi_window_approx(dist, n, lambda);
        std::cout << "pi_approx = " << format3(approx) << "\n";
        csv.precision(17);
        csv << lambda << ',' << n << ",," << approx << ',' << c_star(dist) << ",,\n";
      } else {
        const CriticalWindowSolution sol = solve_pi_critical(dist, n, lambda);
        std::cout << "pi_n(" << lambda << ") = " << format3(sol.pi) << " (approx "
                  << format3(sol.pi_approx) << ", c* = " << sol.c_star << ")\n";
        csv.precision(17);
        csv << lambda << ',' << n << ',' << sol.pi << ',' << sol.pi_approx << ',' << sol.c_star
            << ',' << sol.nu_at_pi << ',' << sol.residual << '\n';
      }
      if (want_curve) {
        const PinoutReport report = run_figure_pinout(dist, n, {lambda}, grid);
        emit(out_dir, "critical_window_curve", pinout_csv(report), "{}", seed);
      }
      std::ostringstream cfgj;
      cfgj << "{\"n\":" << n << ",\"lambda\":" << lambda << "}";
      emit(out_dir, "critical_window", csv.str(), cfgj.str(), seed);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
