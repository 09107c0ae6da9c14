#include "hcm/scaling_limit.hpp"

#include <algorithm>
#include <cmath>

#include "hcm/rng.hpp"

namespace hcm {

LimitParams limit_params_from_moments(double e_d, double e_d2, double e_d3, double lambda) {
  if (e_d <= 0) throw Error("limit_params: E[D] must be positive");
  LimitParams p;
  p.mu = e_d;
  p.eta = e_d3 * e_d - e_d2 * e_d2;
  p.lambda = lambda;
  if (p.eta < 0) throw Error("limit_params: negative eta (inconsistent moments)");
  return p;
}

LimitParams limit_params(const CommunityDistribution& dist, double lambda) {
  return limit_params_from_moments(dist.e_d(), dist.e_d2(), dist.e_d3(), lambda);
}

WPath simulate_W(const LimitParams& p, double horizon, double dt, std::uint64_t seed) {
  if (horizon <= 0 || dt <= 0) throw Error("simulate_W: horizon and dt must be positive");
  const std::int64_t steps = static_cast<std::int64_t>(std::llround(horizon / dt));
  Rng rng(derive_seed(seed, {0xBBULL}));
  WPath path;
  path.dt = dt;
  path.b.resize(steps + 1);
  path.w.resize(steps + 1);
  path.b[0] = 0.0;
  path.w[0] = 0.0;
  const double diffusion = std::sqrt(p.eta) / p.mu * std::sqrt(dt);
  const double curvature = p.eta / (2.0 * p.mu * p.mu * p.mu);
  double run_min = 0.0;
  for (std::int64_t i = 1; i <= steps; ++i) {
    const double t0 = dt * static_cast<double>(i - 1);
    const double t1 = dt * static_cast<double>(i);
    const double drift = p.lambda * dt - curvature * (t1 * t1 - t0 * t0);
    path.b[i] = path.b[i - 1] + diffusion * rng.normal() + drift;
    run_min = std::min(run_min, path.b[i]);
    path.w[i] = path.b[i] - run_min;
  }
  return path;
}

ExcursionSet extract_excursions(const WPath& path, double min_length) {
  ExcursionSet set;
  const std::int64_t size = static_cast<std::int64_t>(path.w.size());
  std::int64_t last_zero = 0;
  bool in_excursion = false;
  // Length counts the positive grid points of the run; a truncated final
  // excursion extends to the horizon.
  for (std::int64_t i = 1; i < size; ++i) {
    if (path.w[i] > 0.0) {
      in_excursion = true;
    } else {
      if (in_excursion) {
        Excursion e;
        e.begin = last_zero;
        e.end = i;
        e.length = path.dt * static_cast<double>(i - last_zero - 1);
        if (e.length >= min_length) set.excursions.push_back(e);
        in_excursion = false;
      }
      last_zero = i;
    }
  }
  if (in_excursion) {
    Excursion e;
    e.begin = last_zero;
    e.end = size - 1;
    e.length = path.dt * static_cast<double>(e.end - last_zero);
    if (e.length >= min_length) set.excursions.push_back(e);
  }
  std::sort(set.excursions.begin(), set.excursions.end(), [](const Excursion& a, const Excursion& b) {
    if (a.length != b.length) return a.length > b.length;
    return a.begin < b.begin;
  });
  return set;
}

std::vector<std::int64_t> simulate_marks(const WPath& path, const ExcursionSet& excursions,
                                         double mu, std::uint64_t seed) {
  if (mu <= 0) throw Error("simulate_marks: mu must be positive");
  Rng rng(derive_seed(seed, {0x3A5ULL}));
  std::vector<std::int64_t> counts(excursions.excursions.size(), 0);
  // Excursions by time so marks can be assigned in one pass; RNG is consumed in
  // time order, independent of the length ordering.
  std::vector<std::size_t> by_time(excursions.excursions.size());
  for (std::size_t i = 0; i < by_time.size(); ++i) by_time[i] = i;
  std::sort(by_time.begin(), by_time.end(), [&](std::size_t a, std::size_t b) {
    return excursions.excursions[a].begin < excursions.excursions[b].begin;
  });
  std::size_t cursor = 0;
  const std::int64_t size = static_cast<std::int64_t>(path.w.size());
  for (std::int64_t i = 1; i < size; ++i) {
    if (path.w[i] <= 0.0) continue;
    const double p = std::min(1.0, path.w[i] * path.dt / mu);
    if (rng.uniform01() >= p) continue;
    while (cursor < by_time.size() && excursions.excursions[by_time[cursor]].end < i) ++cursor;
    if (cursor < by_time.size()) {
      const Excursion& e = excursions.excursions[by_time[cursor]];
      if (i > e.begin && i <= e.end) ++counts[by_time[cursor]];
    }
  }
  return counts;
}

double limit_constant_thm1(const CommunityDistribution& dist) {
  const double es = dist.e_s();
  if (es <= 0) throw Error("limit_constant_thm1: E[S] must be positive");
  return std::pow(es, -2.0 / 3.0) * dist.e_ds() / es;
}

double limit_constant_thm3(const TildeMoments& tilde, double pi) {
  if (tilde.e_s <= 0 || tilde.e_d <= 0) throw Error("limit_constant_thm3: zero denominator");
  return std::pow(tilde.e_s, -2.0 / 3.0) * (tilde.e_ds / tilde.e_d) * std::sqrt(pi);
}

KsResult compare_distributions(const std::vector<double>& empirical,
                               const std::vector<double>& limit) {
  return ks_two_sample(empirical, limit);
}

}  // namespace hcm
