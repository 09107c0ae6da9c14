#include "hcm/critical_window.hpp"

#include <cmath>
#include <limits>

#include "hcm/kernel.hpp"

namespace hcm {

namespace {

double kernel_sum(const CommunityDistribution& dist, double pi, bool derivative) {
  double total = 0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const Community& c = dist.community(i);
    const std::int64_t d_h = c.total_out_degree();
    if (d_h < 2) continue;  // the inner sum over k is empty
    const ShapeKernel& kern = kernel_for(c);
    double per_shape = 0;
    for (int v = 0; v < c.vertex_count(); ++v) {
      if (c.out_degrees[v] == 0) continue;
      double per_vertex = 0;
      for (std::int64_t k = 1; k <= d_h - 1; ++k) {
        per_vertex += derivative ? kern.B_prime(v, k + 1, pi) : kern.B(v, k + 1, pi);
      }
      per_shape += static_cast<double>(c.out_degrees[v]) * per_vertex;
    }
    total += dist.weight(i) * per_shape;
  }
  return total;
}

}  // namespace

double nu_percolated(const CommunityDistribution& dist, double pi) {
  const double ed = dist.e_d();
  if (ed <= 0) throw Error("nu_percolated: E[D] = 0");
  if (pi < 0.0 || pi > 1.0) throw Error("nu_percolated: pi must be in [0,1]");
  return kernel_sum(dist, pi, false) / ed;
}

double nu_percolated_prime(const CommunityDistribution& dist, double pi) {
  const double ed = dist.e_d();
  if (ed <= 0) throw Error("nu_percolated_prime: E[D] = 0");
  return kernel_sum(dist, pi, true) / ed;
}

namespace {

// Root of pi * nu(pi) = target on (0,1]; the map is continuous, increasing, and 0 at 0.
double bisect_window(const CommunityDistribution& dist, double target) {
  const double at_one = nu_percolated(dist, 1.0);
  if (target > at_one * (1.0 + 1e-12)) {
    throw Error("target criticality " + std::to_string(target) + " exceeds nu_D = " +
                std::to_string(at_one) + ": graph cannot be made critical");
  }
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = mid * nu_percolated(dist, mid);
    if (f < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-15) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double solve_fixed_point(const CommunityDistribution& dist) {
  if (dist.nu_d() < 1.0 - 1e-12) {
    throw Error("no percolation fixed point: nu_D < 1 (graph is not supercritical)");
  }
  return bisect_window(dist, 1.0);
}

double c_star(const CommunityDistribution& dist) {
  const double pi = solve_fixed_point(dist);
  const double ed = dist.e_d();
  const double deriv = kernel_sum(dist, pi, true);
  return ed / (ed + pi * pi * deriv);
}

double pi_window_approx(const CommunityDistribution& dist, std::int64_t n, double lambda) {
  const double pi0 = solve_fixed_point(dist);
  return pi0 * (1.0 + c_star(dist) * lambda / std::cbrt(static_cast<double>(n)));
}

CriticalWindowSolution solve_pi_critical(const CommunityDistribution& dist, std::int64_t n,
                                         double lambda) {
  if (n < 1) throw Error("solve_pi_critical: n must be >= 1");
  const double target = 1.0 + lambda / std::cbrt(static_cast<double>(n));
  if (target <= 0.0) {
    throw Error("lambda = " + std::to_string(lambda) + " puts 1 + lambda n^{-1/3} at " +
                std::to_string(target) + ": outside window");
  }
  CriticalWindowSolution sol;
  sol.lambda = lambda;
  sol.n = n;
  sol.pi = bisect_window(dist, target);
  sol.nu_at_pi = nu_percolated(dist, sol.pi);
  sol.residual = std::fabs(sol.pi * sol.nu_at_pi - target);
  if (sol.residual > 1e-9) throw Error("solve_pi_critical: residual above tolerance");
  sol.supercritical_after_intra = sol.nu_at_pi > 1.0;
  try {
    sol.c_star = c_star(dist);
    sol.pi_approx = solve_fixed_point(dist) * (1.0 + sol.c_star * lambda / std::cbrt(static_cast<double>(n)));
  } catch (const Error&) {
    sol.c_star = std::numeric_limits<double>::quiet_NaN();
    sol.pi_approx = std::numeric_limits<double>::quiet_NaN();
  }
  return sol;
}

PinPoutCurve pin_pout_curve(const CommunityDistribution& dist, std::int64_t n, double lambda,
                            int grid) {
  if (grid < 2) throw Error("pin_pout_curve: grid must be >= 2");
  const double target = 1.0 + lambda / std::cbrt(static_cast<double>(n));
  if (target <= 0.0) throw Error("pin_pout_curve: outside window");
  PinPoutCurve curve;
  curve.points.reserve(grid);
  for (int i = 1; i <= grid; ++i) {
    PinPoutPoint p;
    p.pi_in = static_cast<double>(i) / static_cast<double>(grid);
    const double nu = nu_percolated(dist, p.pi_in);
    if (nu > 0) {
      p.pi_out = target / nu;
      p.in_range = p.pi_out <= 1.0;
    } else {
      p.pi_out = std::numeric_limits<double>::infinity();
      p.in_range = false;
    }
    curve.points.push_back(p);
  }
  // Diagonal intersection by bisection on pi - pi_out(pi); negative at 0+.
  const double nu1 = nu_percolated(dist, 1.0);
  if (nu1 >= target) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double nu = nu_percolated(dist, mid);
      const bool negative = nu <= 0.0 || mid * nu < target;  // mid < target/nu
      if (negative) {
        lo = mid;
      } else {
        hi = mid;
      }
      if (hi - lo < 1e-15) break;
    }
    curve.intersection = 0.5 * (lo + hi);
  }
  return curve;
}

}  // namespace hcm
