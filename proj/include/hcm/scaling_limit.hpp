#pragma once

#include <cstdint>
#include <vector>

#include "hcm/community.hpp"
#include "hcm/stats.hpp"

namespace hcm {

// Parameters of B^mu_{lambda,eta}(t) = (sqrt(eta)/mu) B(t) + lambda t - eta t^2 / (2 mu^3).
// eta = E[D^3]E[D] - (E[D^2])^2; the paper prints a second variant without the square
// on E[D^2], which is dimensionally inconsistent and not used (see README).
struct LimitParams {
  double mu = 1.0;
  double eta = 1.0;
  double lambda = 0.0;
};

LimitParams limit_params(const CommunityDistribution& dist, double lambda);
LimitParams limit_params_from_moments(double e_d, double e_d2, double e_d3, double lambda);

inline constexpr double kDefaultHorizon = 20.0;
inline constexpr double kDefaultDtFactor = 1e-4;   // dt = factor * T
inline constexpr double kDefaultFloorSteps = 10.0; // excursion floor = 10 * dt

struct WPath {
  double dt = 0;
  std::vector<double> b;  // drifted Brownian path on the grid, b[0] = 0
  std::vector<double> w;  // reflected: w[i] = b[i] - min_{j<=i} b[j]

  double horizon() const { return dt * static_cast<double>(w.size() - 1); }
};

// Euler scheme (exact Gaussian increments for the linear part) with reflection via
// the running minimum. W(0) = 0; zeros of W are exact where b attains its minimum.
WPath simulate_W(const LimitParams& p, double horizon, double dt, std::uint64_t seed);

struct Excursion {
  std::int64_t begin = 0;  // grid index of the zero opening the excursion
  std::int64_t end = 0;    // grid index of the closing zero (or the last index)
  double length = 0;
};

struct ExcursionSet {
  std::vector<Excursion> excursions;  // sorted by length descending

  double longest() const { return excursions.empty() ? 0.0 : excursions.front().length; }
};

// Maximal intervals with W > 0 at grid resolution; lengths below min_length dropped.
ExcursionSet extract_excursions(const WPath& path, double min_length);

// Poisson thinning with intensity W(t)/mu: mark at step i with probability
// W(t_i) dt / mu. Returns mark counts aligned with the excursion set.
std::vector<std::int64_t> simulate_marks(const WPath& path, const ExcursionSet& excursions,
                                         double mu, std::uint64_t seed);

// Scalar prefactor of the component-size limit: E[S]^{-2/3} E[DS]/E[S].
double limit_constant_thm1(const CommunityDistribution& dist);

struct TildeMoments {
  double e_s = 1;
  double e_d = 1;
  double e_ds = 1;
};

// Percolated version: E[S~]^{-2/3} (E[D~S~]/E[D~]) sqrt(pi).
double limit_constant_thm3(const TildeMoments& tilde, double pi);

// Two-sample KS between scaled empirical component sizes and the limit sample.
KsResult compare_distributions(const std::vector<double>& empirical,
                               const std::vector<double>& limit);

}  // namespace hcm
