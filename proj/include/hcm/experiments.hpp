#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hcm/community.hpp"
#include "hcm/critical_window.hpp"
#include "hcm/stats.hpp"

namespace hcm {

inline constexpr const char* kVersion = "hcmlab 0.1.0";
inline constexpr std::uint64_t kDefaultMasterSeed = 20240901ULL;

std::uint64_t fnv1a64(const std::string& text);

// Deterministic manifest written next to every experiment's CSV output:
// name, config echo, config hash, master seed, version.
std::string manifest_json(const std::string& name, const std::string& config_json,
                          std::uint64_t seed);
void write_text_file(const std::string& path, const std::string& content);

// ---------------------------------------------------------------- tables --

struct TableCell {
  std::int64_t n = 0;
  double lambda = 0;
  double pi_exact = 0;
  double pi_approx = 0;
  double nu_at_pi = 0;
  double residual = 0;
  std::string error;  // nonempty when the solver reported out-of-window/unreachable
};

struct TableReport {
  std::vector<TableCell> cells;
  double pi0 = 0;
  double c_star_value = 0;
};

// Purely numeric (no sampling): pi_n(lambda) exact and first-order approximation
// over the (n, lambda) grid.
TableReport run_table(const CommunityDistribution& dist, const std::vector<std::int64_t>& n_list,
                      const std::vector<double>& lambda_list);
TableReport run_table_star(const std::vector<std::int64_t>& n_list,
                           const std::vector<double>& lambda_list);
TableReport run_table_line(const std::vector<std::int64_t>& n_list,
                           const std::vector<double>& lambda_list);
std::string table_csv(const TableReport& report);

// Rounds half away from zero to three decimals, the tables' display contract.
double round3(double x);
std::string format3(double x);

// ---------------------------------------------------------------- figure --

struct PinoutReport {
  std::int64_t n = 0;
  std::vector<double> lambda_list;
  std::vector<PinPoutCurve> curves;  // aligned with lambda_list
};

PinoutReport run_figure_pinout(const CommunityDistribution& dist, std::int64_t n,
                               const std::vector<double>& lambda_list, int grid);
std::string pinout_csv(const PinoutReport& report);

// --------------------------------------------------------------- scaling --

struct ScalingCell {
  std::int64_t n = 0;
  double mean_total_vertices = 0;  // N
  double median_v1 = 0, q1_v1 = 0, q3_v1 = 0;
  double median_v2 = 0;
  double mean_ratio = 0;     // v(C1)/vH(C1)
  double mean_sp_ratio = 0;  // SP(C1)/v(C1), report-only
};

struct ScalingReport {
  std::vector<ScalingCell> cells;
  double slope = 0;                    // log median v(C1) vs log N
  double expected_ratio = 0;           // E[DS]/E[D] of the tuned catalog
  double surplus_ratio_reference = 0;  // E[SP D]/E[DS], report-only
};

// Per n, retunes the (tune_a, tune_b) degree mixture so nu_n = 1 + lambda n^{-1/3}
// exactly, realizes `replicas` graphs with exact counts and censuses components.
ScalingReport run_scaling_experiment(const CommunityDistribution& catalog, std::size_t tune_a,
                                     std::size_t tune_b, const std::vector<std::int64_t>& n_list,
                                     double lambda, int replicas, std::uint64_t seed, int jobs);
std::string scaling_csv(const ScalingReport& report);

// --------------------------------------------------- percolation equivalence --

struct PercEquivReport {
  double pi = 0;
  std::int64_t n = 0;
  KsResult s4_vs_direct;
  KsResult s4_vs_s4prime;
  std::vector<double> v1_s4, v1_direct, v1_s4prime;  // v(C1)/N per replica
};

PercEquivReport run_percolation_equivalence(const CommunityDistribution& dist, double pi,
                                            std::int64_t n, int replicas, std::uint64_t seed,
                                            int jobs);
std::string perc_equiv_csv(const PercEquivReport& report);
std::string perc_equiv_json(const PercEquivReport& report);

// --------------------------------------------------------------- l2 diag --

struct L2Cell {
  std::int64_t n = 0;
  double median_tail = 0;
  double q1 = 0, q3 = 0;
  double e_s2 = 0;  // catalog second size moment at this n
};

struct L2Report {
  std::vector<L2Cell> small_cells;
  std::vector<L2Cell> large_cells;
  bool small_decreasing = false;
  bool large_nonvanishing = false;
};

// Tail statistic sum_{i>K} v(C_(i))^2 / N^{4/3}, medians over replicas.
L2Report run_l2_diagnostic(const CommunityDistribution& dist_small,
                           const std::function<CommunityDistribution(std::int64_t)>& dist_large,
                           const std::vector<std::int64_t>& n_list, int replicas, int top_k,
                           std::uint64_t seed, int jobs);
std::string l2_csv(const L2Report& report);

// ----------------------------------------------------- experiment catalogs --

// Critical CM mixture sv(1):3/4, sv(3):1/4 (nu_D = 1 exactly).
CommunityDistribution catalog_cm_d13_critical();
// Critical CM mixture with E[D] = 1: sv(0):1/3, sv(1):1/2, sv(3):1/6.
CommunityDistribution catalog_cm_unit_mean_critical();
// Households of size 3 at criticality: hh(3):1/4 plus K3 with out-degrees
// (1,0,0):3/4; every community has 3 vertices, so E[DS]/E[D] = 3 and nu_D = 1.
CommunityDistribution catalog_household3_critical();
// Bounded-size household mixture, critical: hh(1):3/5, hh(2):1/5, hh(3):1/5.
CommunityDistribution catalog_household_small_critical();
// Critical CM mixture plus a zero-degree path community of size
// ~eps n^{2/3}/ln n at count ~ln(n)^2/eps, so E[S_n^2] ~ eps n^{1/3}.
CommunityDistribution l2_heavy_catalog(std::int64_t n, double eps);

}  // namespace hcm
