#pragma once

#include <span>
#include <utility>
#include <vector>

#include "lclab/poisson.hpp"

namespace lclab {

// Function on an integer window [lo, lo + vals.size()); -infinity encodes a
// zero weight and is the implicit value off the window.
struct IntFn {
  long long lo = 0;
  std::vector<double> vals;

  long long hi() const { return lo + static_cast<long long>(vals.size()) - 1; }
  double at(long long x) const;
  bool empty() const { return vals.empty(); }
};

struct FourFunctions {
  IntFn f, g, h, k;
  bool hypothesis_checked = false;
};

struct HypothesisReport {
  bool pass = false;
  long long x = 0, y = 0;  // first violating pair when !pass
  double lhs = 0.0, rhs = 0.0;
};

// Exhaustive check of f(x) + g(y) <= h(floor((x+y)/2)) + k(ceil((x+y)/2))
// over the windows; off-window f, g read as -infinity (which absorbs), and
// off-window h, k read as -infinity as well, so a finite left side off the
// h/k windows is a violation. Stamps the quadruple on success.
HypothesisReport check_hypothesis(FourFunctions& q);

// Tightest symmetric majorants: with m(s) = max_{x+y=s} f(x) + g(y),
// h(z) = k(z) = max(m(2z-1), m(2z), m(2z+1)) / 2. The hypothesis then holds
// by construction, with equality at odd argmax sums.
std::pair<IntFn, IntFn> tight_hk(const IntFn& f, const IntFn& g);

struct ConclusionReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

// (sum e^f)(sum e^g) <= (sum e^h)(sum e^k); requires a checked hypothesis.
ConclusionReport check_conclusion_counting(const FourFunctions& q,
                                           double rel_tol = 1e-12);

// Same inequality with sums against the Poisson law pi_T; windows must sit
// inside the non-negative integers.
ConclusionReport check_conclusion_poisson(const FourFunctions& q, double T,
                                          double rel_tol = 1e-12);

struct CouplingReport {
  bool pass = false;
  long long mismatches = 0;
  double first_mismatch_time = -1.0;
  double max_rate_swap_defect = 0.0;  // |phi(a)+phi(b) - phi(l)-phi(m)| seen
  long long atoms_processed = 0;
};

// Simulates X^alpha, X^beta and the floor/ceil midpoint processes on one
// noise, where the midpoint intensities swap between min and max according
// to the parity of X^alpha + X^beta. Asserts the pathwise identities
//   X^lambda = floor((X^alpha + X^beta)/2),  X^mu = ceil(...)
// at every atom, and the rate-swap identity at quadrature nodes.
CouplingReport coupling_check(const IntensityPolicy& alpha,
                              const IntensityPolicy& beta,
                              const PlanarNoise& noise);

struct StirlingRow {
  long long n = 0;
  double s_f = 0.0, s_g = 0.0, s_h = 0.0, s_k = 0.0;  // sqrt(2 pi n) E e^(.)
  double target_f = 0.0;                              // sum e^f
  bool shifted_inequality_pass = false;
};

// For X_n = Poisson(n) - n: tabulates sqrt(2 pi n) E[e^{f(X_n)}] against
// sum e^f and verifies E e^f E e^g <= E e^h E e^k at every n.
std::vector<StirlingRow> stirling_limit_experiment(
    const FourFunctions& q, std::span<const long long> n_list);

}  // namespace lclab
