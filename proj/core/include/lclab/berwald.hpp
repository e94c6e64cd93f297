#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "lclab/laplace.hpp"
#include "lclab/measure.hpp"
#include "lclab/seq.hpp"

namespace lclab {

// Raised when the constructed transform fails its non-negativity
// certification; carries the most negative sampled density value.
class NonNegativityError : public std::runtime_error {
 public:
  NonNegativityError(const std::string& what, double most_negative)
      : std::runtime_error(what), most_negative_(most_negative) {}
  double most_negative() const { return most_negative_; }

 private:
  double most_negative_;
};

struct BBTransform {
  HalfLineMeasure source;
  Quadruple q;
  HalfLineMeasure nu;          // certified non-negative on success
  double min_sampled = 0.0;    // most negative density sample seen
  // Whether nu itself certifies as log-concave. Recorded per instance,
  // never asserted.
  std::optional<bool> nu_log_concave;
};

// nu = P_l(mu) * P_m(mu) - P_k(mu) * P_n(mu), certified non-negative by
// Chebyshev-node sign sampling (64 nodes per piece plus endpoints) with
// tolerance 1e-10 relative to the positive convolution parts.
BBTransform bb_transform(const HalfLineMeasure& mu, const Quadruple& q);

struct IdentityReport {
  bool pass = false;
  double max_rel_err = 0.0;
  double worst_t = 0.0;
};

// Checks int e^{-tx} dnu = a_t(l) a_t(m) - a_t(k) a_t(n) over the grid,
// relative to a_t(l) a_t(m).
IdentityReport verify_laplace_identity(const BBTransform& bb,
                                       std::span<const double> t_grid,
                                       double tol = 1e-9);

struct CMReport {
  bool pass = false;
  double min_rel_value = 0.0;  // most negative normalized signed derivative
  int worst_j = -1;
  double worst_t = 0.0;
};

// (-1)^j c_q^(j)(t) >= -rel_tol (relative to the positive part) for every
// t in the grid and j <= j_max.
CMReport complete_monotonicity_certificate(const MomentSource& src,
                                           const Quadruple& q,
                                           std::span<const double> t_grid,
                                           int j_max, double rel_tol = 1e-12);

// Exact rational-arithmetic replay of the uniform[1,2], (0,1,1,2) transform
// against its closed-form density. Returns false on any mismatch.
bool figure1_exact_check();

}  // namespace lclab
