#pragma once

#include <cstdint>
#include <vector>

#include "hcm/community.hpp"

namespace hcm {

// Subset enumeration is capped at 2^25 edge subsets.
inline constexpr int kKernelEdgeCap = 25;

// Exact intra-percolation connectivity kernel of one community. For vertex v and
// percolation parameter pi:
//   B(v,k,pi) = P(component of v after percolation carries >= k half-edges)
//   g(v,k,pi) = P(exactly k half-edges)
//   B_prime   = dB/dpi, Russo form: (1/pi) E[# present pivotal edges].
// All three are polynomials in pi; the enumeration stores exact subset counts per
// kept-edge cardinality, so evaluation at any pi is an O(m) sum.
class ShapeKernel {
 public:
  explicit ShapeKernel(const Community& c);

  double B(int v, std::int64_t k, double pi) const;
  double g(int v, std::int64_t k, double pi) const;
  double B_prime(int v, std::int64_t k, double pi) const;

  int edge_count() const { return m_; }
  std::int64_t degree() const { return d_; }
  int vertex_count() const { return s_; }

 private:
  int m_ = 0;
  int s_ = 0;
  std::int64_t d_ = 0;
  std::vector<int> out_degrees_;
  // [v][k][j]: subsets with j kept edges where v's component has >= k half-edges,
  // and kept-pivotal-edge counts for that event; k in 0..d_H.
  std::vector<std::vector<std::vector<std::uint64_t>>> b_count_;
  std::vector<std::vector<std::vector<std::uint64_t>>> piv_count_;
};

// Process-wide kernel cache keyed by shape; safe for concurrent use.
const ShapeKernel& kernel_for(const Community& c);

double exact_B(const Community& c, int v, std::int64_t k, double pi);
double exact_g(const Community& c, int v, std::int64_t k, double pi);
double B_prime(const Community& c, int v, std::int64_t k, double pi);

struct McEstimate {
  double value = 0;
  double se = 0;
};

// Frequency estimator of B for communities beyond the enumeration cap.
McEstimate monte_carlo_B(const Community& c, int v, std::int64_t k, double pi, std::int64_t reps,
                         std::uint64_t seed);

}  // namespace hcm
