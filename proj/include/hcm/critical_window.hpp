#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hcm/community.hpp"

namespace hcm {

// nu of the intra-percolated community distribution,
//   nu_{D^(pi)} = sum_H P(H) sum_v d_v^(b) sum_{k=1}^{d_H-1} B(H,v,k+1,pi) / E[D],
// evaluated with the exact enumeration kernel. Strictly increasing in pi whenever
// the catalog has an internal edge on a path between half-edges.
double nu_percolated(const CommunityDistribution& dist, double pi);

// d(nu_percolated)/dpi from the Russo derivative of B.
double nu_percolated_prime(const CommunityDistribution& dist, double pi);

struct CriticalWindowSolution {
  double lambda = 0;
  std::int64_t n = 0;
  double pi = 0;         // solves pi * nu_{D^(pi)} = 1 + lambda n^{-1/3}
  double nu_at_pi = 0;   // nu_{D^(pi)} at the solution
  double c_star = 0;     // NaN when the asymptotic fixed point does not exist
  double pi_approx = 0;  // pi_n(0) (1 + c* lambda n^{-1/3}); NaN likewise
  double residual = 0;
  bool supercritical_after_intra = false;  // nu_{D^(pi)} > 1 at the solution
};

// Bisection on the increasing map pi -> pi * nu_{D^(pi)}. Throws when
// 1 + lambda n^{-1/3} <= 0 ("outside window") or exceeds nu_D at pi=1.
CriticalWindowSolution solve_pi_critical(const CommunityDistribution& dist, std::int64_t n,
                                         double lambda);

// Asymptotic fixed point: pi solving pi * nu_{D^(pi)} = 1. Throws when nu_D < 1.
double solve_fixed_point(const CommunityDistribution& dist);

// First-order window-narrowing constant,
//   c* = E[D] / (E[D] + pi^2 sum_H P(H) sum_v d_v sum_k B'(H,v,k+1,pi))
// at the asymptotic fixed point. Equals 1 exactly iff no catalog community has
// internal edges contributing to the kernel derivative.
double c_star(const CommunityDistribution& dist);

// pi_n(0) * (1 + c* lambda / n^{1/3}).
double pi_window_approx(const CommunityDistribution& dist, std::int64_t n, double lambda);

struct PinPoutPoint {
  double pi_in = 0;
  double pi_out = 0;  // (1 + lambda n^{-1/3}) / nu_{D^(pi_in)}
  bool in_range = false;
};

struct PinPoutCurve {
  std::vector<PinPoutPoint> points;
  std::optional<double> intersection;  // with the diagonal; empty if out of range
};

PinPoutCurve pin_pout_curve(const CommunityDistribution& dist, std::int64_t n, double lambda,
                            int grid);

}  // namespace hcm
