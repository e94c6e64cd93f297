#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "lclab/rng.hpp"

namespace lclab {

// Bounded payoff on the non-negative integers: explicit values on
// [0, values.size()), a constant beyond.
struct Payoff {
  std::vector<double> values;
  double beyond = 0.0;

  double at(long long x) const;
  double sup() const;
  double inf() const;
  double osc() const { return sup() - inf(); }
};

// Running cost lambda*log(lambda) - lambda + 1, extended by continuity
// with phi(0) = 1.
double phi_cost(double lambda);

// pi_t(n), evaluated in log space.
double poisson_pmf(double t, long long n);

// P(Poisson(mean) >= k).
double poisson_upper_tail(double mean, long long k);

// P_t g(x) = sum_n g(x+n) pi_t(n). The part of the series beyond the payoff
// window is the closed-form Poisson tail times the constant, so truncation
// error sits at rounding level.
double semigroup_apply(const Payoff& g, double t, long long x);

// log of the integral of e^f against pi_T, shift-stabilized.
double log_poisson_integral(const Payoff& f, double T);

// Atoms of a planar Poisson field on [0, horizon] x [0, cap] with unit
// Lebesgue intensity, sorted by time. Deterministic in (seed, stream).
struct PlanarNoise {
  double horizon = 0.0;
  double cap = 0.0;
  std::vector<std::pair<double, double>> atoms;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  static PlanarNoise sample(double horizon, double cap, std::uint64_t seed,
                            std::uint64_t stream);
};

using MarkovRate = std::function<double(double, long long)>;
using HistoryRate =
    std::function<double(double, long long, std::span<const double>)>;

// A predictable rate rule: evaluated at time t it sees the current count and
// the accepted jump times strictly before t, never the raw noise.
struct IntensityPolicy {
  double bound = 0.0;
  bool markov = true;
  HistoryRate rate;

  double operator()(double t, long long x, std::span<const double> jumps) const {
    return rate(t, x, jumps);
  }

  static IntensityPolicy constant(double c);
  static IntensityPolicy from_markov(double bound, MarkovRate fn);
  static IntensityPolicy from_history(double bound, HistoryRate fn);
};

struct CountingPath {
  std::vector<double> jumps;  // accepted jump times, increasing
  double horizon = 0.0;

  long long terminal() const { return static_cast<long long>(jumps.size()); }
  long long count_before(double t) const;
};

// Thinning of the planar noise: an atom (t, u) is accepted iff u lies below
// the rate evaluated from the state strictly before t. Deterministic given
// the noise. Throws if the rate ever exceeds the noise cap.
CountingPath simulate_counting(const IntensityPolicy& policy,
                               const PlanarNoise& noise);

// F(t, x) = log P_{T-t}(e^f)(x) and its discrete gradient.
class ValueFunction {
 public:
  ValueFunction(Payoff f, double T);

  double horizon() const { return T_; }
  const Payoff& payoff() const { return f_; }

  double F(double t, long long x) const;
  double grad(double t, long long x) const { return F(t, x + 1) - F(t, x); }
  // exp(grad), computed as the ratio of semigroup values.
  double rate(double t, long long x) const;

 private:
  double u(double s, long long x) const;  // P_s(e^f)(x) scaled by e^{-shift}

  Payoff f_;
  double T_;
  double shift_;
  std::vector<double> exp_values_;
  double exp_beyond_;
};

// The maximizing feedback rule (t, x) -> exp(F(t, x+1) - F(t, x)), with
// bound exp(osc f).
IntensityPolicy optimal_policy(const Payoff& f, double T);

struct McResult {
  double estimate = 0.0;
  double se = 0.0;
  std::int64_t n_traj = 0;
};

// Monte Carlo of E[f(X_T) - int_0^T phi(lambda_t) dt]. The cost integral is
// evaluated by 64-node Gauss-Legendre quadrature on every inter-jump
// interval. Trajectories use substream i of the seed; the reduction is a
// fixed-order fold, so results do not depend on the thread count.
McResult mc_functional(const IntensityPolicy& policy, const Payoff& f, double T,
                       std::int64_t n_traj, std::uint64_t seed);

// Smallest x with P(Poisson(rate_bound * T) >= x) < tail.
int suggest_x_max(double rate_bound, double T, double tail = 1e-12);

// Noise-free evaluation of the same functional for a Markov policy: solves
// the backward system dv/dt = -lambda (v(x+1)-v(x)) + phi(lambda) with
// v(T,.) = f by adaptive step-doubling RK4 and returns v(0,0).
double ode_policy_value(const IntensityPolicy& policy, const Payoff& f, double T,
                        int x_max, double tol = 1e-10);

struct IntensityIdentityReport {
  double jump_side = 0.0;  // E sum of H over the jumps
  double rate_side = 0.0;  // E int H_t lambda_t dt
  double diff_se = 0.0;
  bool pass = false;
};

// Checks E[sum_jumps H] = E[int H lambda dt] with a paired-difference
// estimator; pass iff |mean difference| <= 3 SE.
IntensityIdentityReport intensity_identity_check(const IntensityPolicy& policy,
                                                 const MarkovRate& H, double T,
                                                 std::int64_t n_traj,
                                                 std::uint64_t seed);

struct FixedPointDiagnostics {
  std::vector<double> distances;  // d(lambda^{j+1}, lambda^j)
  std::vector<double> ratios;     // successive distance ratios
  double contraction_constant = 0.0;
  bool converged = false;  // a distance reached exactly zero
};

// Picard iteration of lambda -> G(t, X^lambda_t) on a common batch of
// noises. Reports the empirical distances
//   d(a, b) = int_0^T e^{-2Ct} E|a_t - b_t| dt,  C = bound,
// between successive iterates; a contraction shows geometric decay.
FixedPointDiagnostics fixed_point_solve(const MarkovRate& G, double bound,
                                        double T, int n_iter,
                                        std::int64_t n_noise,
                                        std::uint64_t seed);

struct SupermartingaleReport {
  double lhs = 0.0;  // log integral of e^f against pi_T
  McResult mc;
  bool pass_upper = false;
  bool pass_equality = false;
};

// mc_functional(policy) <= lhs + 3 SE for any policy; with the optimal
// policy the two agree within 3 SE.
SupermartingaleReport supermartingale_check(const IntensityPolicy& policy,
                                            const Payoff& f, double T,
                                            std::int64_t n_traj,
                                            std::uint64_t seed);

}  // namespace lclab
